from __future__ import annotations

import logging
from typing import Sequence, Union

from apps.backends.clients import Target, as_client, embed_batch
from apps.core.exceptions import (
    CorpusForgeError,
    DataError,
    EmptyDatasetError,
    StageError,
)
from apps.corpus.io import ID_WIDTH
from apps.corpus.records import LabeledEntry, ParallelCorpus
from apps.metrics.aggregation import unweighted_mean
from apps.metrics.choices import MetricId
from apps.metrics.similarity import cosine_similarity
from apps.pipeline.choices import FilterStage, PipelineStage
from apps.pipeline.records import FilterDecision, retained_indices
from apps.pipeline.rendering import render_flat_text

logger = logging.getLogger(__name__)

Item = Union[str, LabeledEntry]

COSINE = str(MetricId.COSINE)

# score recorded when there is no translation to compare with
UNDEFINED_COSINE = -1.0


def _text(item: Item) -> str:
    return item if isinstance(item, str) else render_flat_text(item)


def _ids(items: Sequence[Item]) -> list[str]:
    return [
        f"{index + 1:0{ID_WIDTH}d}" if isinstance(item, str) else item.id
        for index, item in enumerate(items)
    ]


def _cosines(target: Target, sources: list[str], targets: list[str]) -> list[float]:
    vectors = embed_batch(target, sources + targets)
    n = len(sources)
    return [cosine_similarity(vectors[i], vectors[n + i]) for i in range(n)]


def derive_similarity_threshold(
    reference: ParallelCorpus, embed_target: Target
) -> float:
    """Mean source/target cosine over an aligned reference corpus."""
    if not len(reference):
        raise EmptyDatasetError("reference corpus for the threshold is empty")
    cosines = _cosines(
        embed_target, [pair.src for pair in reference], [pair.tgt for pair in reference]
    )
    threshold = unweighted_mean(cosines)
    logger.info(
        "Similarity threshold %.4f from %d reference pairs", threshold, len(reference)
    )
    return threshold


def _decide_batch(
    client, ids: list[str], sources: list[str], targets: list[str], thresholds
) -> list[FilterDecision]:
    scorable = [i for i, text in enumerate(targets) if text.strip()]
    cosines = {}
    if scorable:
        scored = _cosines(
            client, [sources[i] for i in scorable], [targets[i] for i in scorable]
        )
        cosines = dict(zip(scorable, scored))

    decisions = []
    for i, record_id in enumerate(ids):
        if i in cosines:
            decision = FilterDecision.decide(
                record_id, FilterStage.SIMILARITY, {COSINE: cosines[i]}, thresholds
            )
        else:
            decision = FilterDecision.auto_fail(
                record_id,
                FilterStage.SIMILARITY,
                {COSINE: UNDEFINED_COSINE},
                thresholds,
                "empty translation",
            )
        decisions.append(decision)
    return decisions


def filter_similarity(
    items: Sequence[Item],
    fwd_translations: Sequence[Item],
    embed_target: Target,
    threshold: float,
) -> tuple[list[int], list[FilterDecision]]:
    """
    Keep the items whose source and translation embed at cosine >= threshold.

    Items are entries (rendered before embedding) or plain texts; a plain text
    is identified by its 1-based position. An empty translation fails
    without being embedded. Scoring goes one endpoint batch at a time; when a
    batch fails the decisions made so far travel with the raised
    ``StageError``.
    """
    if len(items) != len(fwd_translations):
        raise DataError(
            f"{len(items)} item(s) but {len(fwd_translations)} translation(s)"
        )
    client = as_client(embed_target)
    ids = _ids(items)
    sources = [_text(item) for item in items]
    targets = [_text(item) for item in fwd_translations]
    thresholds = {COSINE: threshold}
    decisions: list[FilterDecision] = []
    size = client.endpoint.batch_size

    try:
        for start in range(0, len(items), size):
            stop = min(start + size, len(items))
            decisions.extend(
                _decide_batch(
                    client,
                    ids[start:stop],
                    sources[start:stop],
                    targets[start:stop],
                    thresholds,
                )
            )
    except CorpusForgeError as exc:
        raise StageError(PipelineStage.FILTER_SIM, exc, decisions) from exc

    retained = retained_indices(decisions)
    logger.info(
        "Similarity filter (cosine >= %.4f): kept %d of %d",
        threshold,
        len(retained),
        len(items),
    )
    return retained, decisions
