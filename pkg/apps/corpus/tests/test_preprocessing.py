import factory.random
from django.conf import settings
from django.test import SimpleTestCase, override_settings

from apps.core.exceptions import DataError, EmptyDatasetError
from apps.corpus.preprocessing import (
    combine_corpora,
    drop_choice_counts,
    enforce_choice_range,
    q3_length_filter,
)
from apps.corpus.records import Dataset, MCQAEntry, ParallelPair, SAEntry

from .factories import sa_dataset


def sa_with_lengths(lengths):
    return Dataset(
        "sa",
        tuple(
            SAEntry(f"{i:03d}", " ".join(["w"] * n), i % 2)
            for i, n in enumerate(lengths)
        ),
    )


def mcqa_with_counts(counts):
    return Dataset(
        "mcqa",
        tuple(
            MCQAEntry(f"q{n}", "Q?", tuple(f"c{i}" for i in range(n)), 0)
            for n in counts
        ),
    )


class TestQ3LengthFilter(SimpleTestCase):
    def test_nearest_rank_cutoff(self):
        dataset = sa_with_lengths([5, 1, 8, 3, 2, 7, 4, 6])
        filtered, cutoff = q3_length_filter(dataset)
        self.assertEqual(cutoff, 6)
        self.assertEqual(len(filtered), 6)
        self.assertEqual(
            [e.id for e in filtered], ["000", "001", "003", "004", "006", "007"]
        )

    def test_equal_lengths_keep_everything(self):
        dataset = sa_with_lengths([4] * 9)
        filtered, cutoff = q3_length_filter(dataset)
        self.assertEqual(cutoff, 4)
        self.assertEqual(filtered, dataset)

    def test_idempotent(self):
        factory.random.reseed_random(3)
        once, cutoff = q3_length_filter(sa_dataset(40))
        twice, again = q3_length_filter(once, cutoff)
        self.assertEqual(twice, once)
        self.assertEqual(again, cutoff)

    def test_recomputing_on_survivors_can_shrink(self):
        once, cutoff = q3_length_filter(sa_with_lengths(range(1, 9)))
        _, recomputed = q3_length_filter(once)
        self.assertEqual(cutoff, 6)
        self.assertEqual(recomputed, 5)

    def test_retained_entries_untouched(self):
        dataset = sa_with_lengths([1, 9, 2, 3])
        filtered, _ = q3_length_filter(dataset)
        originals = dataset.by_id()
        for entry in filtered:
            self.assertIs(entry, originals[entry.id])

    def test_empty_input(self):
        with self.assertRaises(EmptyDatasetError):
            q3_length_filter(Dataset("sa", ()))


class TestDropChoiceCounts(SimpleTestCase):
    def test_default_excludes_two_and_six(self):
        filtered = drop_choice_counts(mcqa_with_counts([2, 3, 4, 5, 6]))
        self.assertEqual([len(e.choices) for e in filtered], [3, 4, 5])

    def test_empty_exclusion_is_identity(self):
        dataset = mcqa_with_counts([2, 6, 3])
        self.assertEqual(drop_choice_counts(dataset, set()), dataset)

    @override_settings(
        CORPUSFORGE={**settings.CORPUSFORGE, "EXCLUDED_CHOICE_COUNTS": (3,)}
    )
    def test_default_comes_from_settings(self):
        filtered = drop_choice_counts(mcqa_with_counts([2, 3, 4]))
        self.assertEqual([len(e.choices) for e in filtered], [2, 4])

    def test_wrong_kind(self):
        with self.assertRaises(DataError):
            drop_choice_counts(sa_with_lengths([1]))

    def test_choice_range(self):
        filtered = enforce_choice_range(mcqa_with_counts([2, 3, 5, 6]), 3, 5)
        self.assertEqual([len(e.choices) for e in filtered], [3, 5])


class TestCombineCorpora(SimpleTestCase):
    def test_authentic_first_duplicates_dropped(self):
        authentic = Dataset(
            "parallel",
            (
                ParallelPair("1", "ciao", "bun dì", "ita_Latn", "lld_Latn"),
                ParallelPair("2", "grazie", "dilan", "ita_Latn", "lld_Latn"),
            ),
        )
        synthetic = Dataset(
            "parallel",
            (
                ParallelPair("1", "grazie", "dilan", "ita_Latn", "lld_Latn"),
                ParallelPair("7", "dër bel", "molto bello", "lld_Latn", "ita_Latn"),
            ),
        )
        combined = combine_corpora({"ad": authentic, "sd": synthetic})
        self.assertEqual(combined.ids(), ["ad:1", "ad:2", "sd:7"])
        self.assertEqual(combined[2].src, "molto bello")
        self.assertEqual(combined[2].src_lang, "ita_Latn")

    def test_foreign_direction_rejected(self):
        corpus = Dataset(
            "parallel",
            (
                ParallelPair("1", "a", "b", "ita_Latn", "lld_Latn"),
                ParallelPair("2", "a", "b", "deu_Latn", "lld_Latn"),
            ),
        )
        with self.assertRaises(DataError):
            combine_corpora({"x": corpus})

    def test_nothing_to_combine(self):
        with self.assertRaises(EmptyDatasetError):
            combine_corpora({})
