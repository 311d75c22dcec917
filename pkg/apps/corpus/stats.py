from __future__ import annotations

import math
from collections import Counter
from typing import Iterable

from apps.core.exceptions import DataError, EmptyDatasetError
from apps.corpus.choices import DatasetKind
from apps.corpus.records import CorpusStats, Dataset, count_chars, count_words


def _mean(values: Iterable[float]) -> float:
    values = list(values)
    return math.fsum(values) / len(values)


def compute_corpus_stats(dataset: Dataset) -> CorpusStats:
    """
    Descriptive statistics of one dataset.

    For MCQA, question and choices are also averaged separately; choices of an
    entry are concatenated with single spaces before counting. For parallel
    corpora, source and target sentences are averaged separately and the entry
    averages cover the source side.
    """
    if not len(dataset):
        raise EmptyDatasetError("cannot compute statistics of an empty dataset")

    entries = dataset.entries
    field_averages: dict[str, float] = {}
    label_counts: dict[int, int] = {}
    choice_count_freq: dict[int, int] = {}

    if dataset.kind == DatasetKind.SA:
        label_counts = dict(sorted(Counter(e.label for e in entries).items()))
    elif dataset.kind == DatasetKind.MCQA:
        choice_counts = Counter(len(e.choices) for e in entries)
        choice_count_freq = dict(sorted(choice_counts.items()))
        joined = [" ".join(e.choices) for e in entries]
        field_averages = {
            "average_number_of_words_per_question": _mean(
                count_words(e.question) for e in entries
            ),
            "average_number_of_characters_per_question": _mean(
                count_chars(e.question) for e in entries
            ),
            "average_number_of_words_per_choices": _mean(
                count_words(c) for c in joined
            ),
            "average_number_of_characters_per_choices": _mean(
                count_chars(c) for c in joined
            ),
        }
    elif dataset.kind == DatasetKind.PARALLEL:
        field_averages = {
            "average_number_of_words_per_source_sentence": _mean(
                count_words(p.src) for p in entries
            ),
            "average_number_of_characters_per_source_sentence": _mean(
                count_chars(p.src) for p in entries
            ),
            "average_number_of_words_per_target_sentence": _mean(
                count_words(p.tgt) for p in entries
            ),
            "average_number_of_characters_per_target_sentence": _mean(
                count_chars(p.tgt) for p in entries
            ),
        }
    else:
        raise DataError(f"unsupported dataset kind {dataset.kind!r}")

    return CorpusStats(
        kind=dataset.kind,
        entry_count=len(entries),
        avg_words_per_entry=_mean(count_words(e.flat_text()) for e in entries),
        avg_chars_per_entry=_mean(count_chars(e.flat_text()) for e in entries),
        label_counts=label_counts,
        choice_count_freq=choice_count_freq,
        field_averages=field_averages,
    )


def compute_paired_stats(
    source: Dataset, target: Dataset, src_lang: str, tgt_lang: str
) -> dict[str, CorpusStats]:
    """Side-by-side statistics of a synthetic pair (source side, translated side)."""
    if source.ids() != target.ids():
        raise DataError("paired datasets must hold the same ids in the same order")
    return {
        src_lang: compute_corpus_stats(source),
        tgt_lang: compute_corpus_stats(target),
    }
