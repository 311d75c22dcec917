from __future__ import annotations

import logging
from typing import Sequence

from apps.backends.choices import ExemplarSampling
from apps.backends.clients import Target
from apps.backends.prompts import FslExampleBank
from apps.core.exceptions import ConfigError, DataError, EmptyDatasetError
from apps.corpus.records import LabeledEntry
from apps.metrics.aggregation import unweighted_mean
from apps.metrics.choices import MetricId
from apps.metrics.registry import get_text_metric
from apps.pipeline.choices import FilterStage, ThresholdMode
from apps.pipeline.records import (
    FilterDecision,
    RoundTripRecord,
    RoundTripThresholds,
    retained_indices,
)
from apps.pipeline.rendering import render_flat_text
from apps.pipeline.translation import translate_entries

logger = logging.getLogger(__name__)


def score_roundtrip(
    record_id: str,
    original: str,
    forward: str,
    back: str,
    cosine: float | None = None,
) -> RoundTripRecord:
    """Sentence BLEU and METEOR of the back-translation against the original."""
    return RoundTripRecord(
        id=record_id,
        src_original=original,
        fwd_translation=forward,
        back_translation=back,
        bleu=get_text_metric(MetricId.BLEU).sentence(back, original),
        meteor=get_text_metric(MetricId.METEOR).sentence(back, original),
        cosine=cosine,
    )


def back_translate(
    items: Sequence[LabeledEntry],
    fwd_translations: Sequence[LabeledEntry],
    translate_target: Target,
    src_lang: str,
    tgt_lang: str,
    *,
    cosines: Sequence[float] | None = None,
    bank: FslExampleBank | None = None,
    sampling: str = ExemplarSampling.FIXED,
    seed: int = 0,
) -> list[RoundTripRecord]:
    """
    Translate the forward translations from *tgt_lang* back into *src_lang*
    and score each entry's rendering against its original.
    """
    if len(items) != len(fwd_translations):
        raise DataError(
            f"{len(items)} item(s) but {len(fwd_translations)} translation(s)"
        )
    if cosines is not None and len(cosines) != len(items):
        raise DataError(f"{len(cosines)} cosine(s) for {len(items)} item(s)")
    for item, forward in zip(items, fwd_translations):
        if item.id != forward.id:
            raise DataError(
                f"translation {forward.id!r} is not aligned with {item.id!r}"
            )

    backs = translate_entries(
        fwd_translations,
        translate_target,
        tgt_lang,
        src_lang,
        bank=bank,
        sampling=sampling,
        seed=seed,
    )
    records = [
        score_roundtrip(
            item.id,
            render_flat_text(item),
            render_flat_text(forward),
            render_flat_text(back),
            None if cosines is None else cosines[index],
        )
        for index, (item, forward, back) in enumerate(
            zip(items, fwd_translations, backs)
        )
    ]
    logger.info("Back-translated and scored %d entries", len(records))
    return records


def filter_roundtrip(
    records: Sequence[RoundTripRecord],
    mode: str = ThresholdMode.DATA_MEAN,
    *,
    mu_bleu: float | None = None,
    mu_meteor: float | None = None,
) -> tuple[list[int], list[FilterDecision], RoundTripThresholds]:
    """
    Keep records whose BLEU and METEOR both reach their thresholds.

    In ``data_mean`` mode the thresholds are the means over all *records*,
    computed before any record is dropped; ``fixed`` mode uses *mu_bleu* and
    *mu_meteor* as given.
    """
    if not records:
        raise EmptyDatasetError("round-trip filter needs at least one record")
    if mode == ThresholdMode.DATA_MEAN:
        thresholds = RoundTripThresholds(
            unweighted_mean(r.bleu for r in records),
            unweighted_mean(r.meteor for r in records),
            ThresholdMode.DATA_MEAN,
        )
    elif mode == ThresholdMode.FIXED:
        if mu_bleu is None or mu_meteor is None:
            raise ConfigError("fixed round-trip thresholds need mu_bleu and mu_meteor")
        thresholds = RoundTripThresholds(mu_bleu, mu_meteor, ThresholdMode.FIXED)
    else:
        raise ConfigError(f"unknown threshold mode {mode!r}")

    limits = thresholds.as_thresholds()
    decisions = [
        FilterDecision.decide(
            record.id,
            FilterStage.ROUNDTRIP,
            record.scores,
            limits,
        )
        for record in records
    ]
    retained = retained_indices(decisions)
    logger.info(
        "Round-trip filter (bleu >= %.2f, meteor-exact >= %.4f): kept %d of %d",
        thresholds.mu_bleu,
        thresholds.mu_meteor,
        len(retained),
        len(records),
    )
    return retained, decisions, thresholds
