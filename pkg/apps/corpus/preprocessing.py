from __future__ import annotations

import logging
from typing import Collection, Mapping

from django.conf import settings

from apps.core.exceptions import DataError, EmptyDatasetError
from apps.corpus.choices import DatasetKind
from apps.corpus.records import Dataset, ParallelPair, count_words

logger = logging.getLogger(__name__)


def nearest_rank_q3(values: Collection[int]) -> int:
    """Nearest-rank 75th percentile: the ceil(0.75 * n)-th smallest value."""
    if not values:
        raise EmptyDatasetError("cannot take a quartile of no values")
    ordered = sorted(values)
    rank = (3 * len(ordered) + 3) // 4
    return ordered[rank - 1]


def q3_length_filter(
    dataset: Dataset, cutoff: int | None = None
) -> tuple[Dataset, int]:
    """
    Keep entries whose word count is at most the third quartile.

    Passing the *cutoff* of an earlier run reapplies it instead of
    recomputing the quartile on the already shortened data; with it the
    filter is idempotent.
    """
    if not len(dataset):
        raise EmptyDatasetError("q3 length filter needs a non-empty dataset")
    counts = [count_words(entry.flat_text()) for entry in dataset]
    if cutoff is None:
        cutoff = nearest_rank_q3(counts)
    kept = [entry for entry, n in zip(dataset, counts) if n <= cutoff]
    logger.info(
        "Q3 length filter: cutoff %d words, kept %d of %d",
        cutoff,
        len(kept),
        len(dataset),
    )
    return dataset.with_entries(kept), cutoff


def drop_choice_counts(
    dataset: Dataset, excluded: Collection[int] | None = None
) -> Dataset:
    if dataset.kind != DatasetKind.MCQA:
        raise DataError(
            f"choice-count filter needs an mcqa dataset, got {dataset.kind}"
        )
    if excluded is None:
        excluded = settings.CORPUSFORGE["EXCLUDED_CHOICE_COUNTS"]
    excluded = set(excluded)
    kept = [entry for entry in dataset if len(entry.choices) not in excluded]
    logger.info(
        "Dropped %d entries with %s choices",
        len(dataset) - len(kept),
        sorted(excluded),
    )
    return dataset.with_entries(kept)


def enforce_choice_range(dataset: Dataset, low: int, high: int) -> Dataset:
    kept = [entry for entry in dataset if low <= len(entry.choices) <= high]
    if len(kept) != len(dataset):
        logger.warning(
            "%d entries outside %d..%d choices removed",
            len(dataset) - len(kept),
            low,
            high,
        )
    return dataset.with_entries(kept)


def combine_corpora(corpora: Mapping[str, Dataset]) -> Dataset:
    """
    Concatenate parallel corpora in mapping order.

    Ids are prefixed with the corpus name. Pairs whose language direction is
    the reverse of the first corpus are flipped, and exact duplicate
    ``(src, tgt)`` pairs keep their first occurrence only.
    """
    if not corpora:
        raise EmptyDatasetError("nothing to combine")

    direction: tuple[str, str] | None = None
    seen: set[tuple[str, str]] = set()
    combined: list[ParallelPair] = []
    dropped = 0

    for name, corpus in corpora.items():
        if corpus.kind != DatasetKind.PARALLEL:
            raise DataError(f"corpus {name!r} is {corpus.kind}, expected parallel")
        for pair in corpus:
            if direction is None:
                direction = (pair.src_lang, pair.tgt_lang)
            if (pair.src_lang, pair.tgt_lang) == direction[::-1]:
                pair = pair.reversed()
            elif (pair.src_lang, pair.tgt_lang) != direction:
                raise DataError(
                    f"corpus {name!r} pair {pair.id!r} is "
                    f"{pair.src_lang}->{pair.tgt_lang}, expected "
                    f"{direction[0]}->{direction[1]}"
                )
            key = (pair.src, pair.tgt)
            if key in seen:
                dropped += 1
                continue
            seen.add(key)
            combined.append(
                ParallelPair(
                    f"{name}:{pair.id}",
                    pair.src,
                    pair.tgt,
                    pair.src_lang,
                    pair.tgt_lang,
                )
            )

    logger.info("Combined %d pairs (%d duplicates dropped)", len(combined), dropped)
    return Dataset(DatasetKind.PARALLEL, tuple(combined))
