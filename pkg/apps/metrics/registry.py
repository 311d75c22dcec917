from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from apps.core.exceptions import ConfigError, MetricInputError
from apps.metrics.bleu import corpus_bleu, sentence_bleu
from apps.metrics.chrf import chrf_pp, corpus_chrf_pp
from apps.metrics.choices import MetricId
from apps.metrics.meteor import corpus_meteor, meteor
from apps.metrics.rouge import corpus_rouge_l, rouge_l


@dataclass(frozen=True)
class TextMetric:
    id: str
    sentence: Callable[[str, str], float]
    corpus: Callable[[Sequence[str], Sequence[str]], float]
    upper_bound: float
    variant: str

    def check_range(self, value: float, label: str = "") -> float:
        if not 0.0 <= value <= self.upper_bound:
            prefix = f"{label}: " if label else ""
            raise MetricInputError(
                f"{prefix}{self.id} {value} outside 0..{self.upper_bound:g}"
            )
        return value


TEXT_METRICS: dict[str, TextMetric] = {
    MetricId.BLEU: TextMetric(
        MetricId.BLEU,
        sentence_bleu,
        corpus_bleu,
        100.0,
        "sacrebleu, 13a tokens, exp smoothing, effective order",
    ),
    MetricId.CHRF_PP: TextMetric(
        MetricId.CHRF_PP,
        chrf_pp,
        corpus_chrf_pp,
        100.0,
        "sacrebleu chrF, char order 6, word order 2, beta 2",
    ),
    MetricId.ROUGE_L: TextMetric(
        MetricId.ROUGE_L,
        rouge_l,
        corpus_rouge_l,
        100.0,
        "LCS F1 over 13a tokens, corpus score is the sentence mean",
    ),
    MetricId.METEOR: TextMetric(
        MetricId.METEOR,
        meteor,
        corpus_meteor,
        1.0,
        "exact match only, alpha 0.9, beta 3, gamma 0.5",
    ),
}

# Columns of the translation quality tables
DEFAULT_MT_METRICS = (MetricId.BLEU, MetricId.CHRF_PP, MetricId.ROUGE_L)

# Scores an item must reach to survive the round-trip filter
ROUNDTRIP_METRICS = (MetricId.BLEU, MetricId.METEOR)


def get_text_metric(metric_id: str) -> TextMetric:
    try:
        return TEXT_METRICS[metric_id]
    except KeyError as exc:
        valid = ", ".join(TEXT_METRICS)
        message = f"unknown metric {metric_id!r} (expected one of {valid})"
        raise ConfigError(message) from exc


def metric_variants(metric_ids: Iterable[str]) -> dict[str, str]:
    """``{metric id: variant}`` so reports say exactly what was computed."""
    return {str(m): get_text_metric(m).variant for m in metric_ids}
