from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

from apps.core.exceptions import DataError
from apps.metrics.choices import MetricId
from apps.metrics.registry import get_text_metric
from apps.pipeline.choices import ThresholdMode

STAGE_COUNT_KEYS = ("input", "after_preprocess", "after_filter1", "after_filter2")


@dataclass(frozen=True)
class RoundTripRecord:
    """Source text, its forward translation and the translation back."""

    id: str
    src_original: str
    fwd_translation: str
    back_translation: str
    bleu: float
    meteor: float
    cosine: float | None = None

    def __post_init__(self):
        for metric, value in self.scores.items():
            get_text_metric(metric).check_range(value, f"record {self.id!r}")
        if self.cosine is not None and not -1.0 <= self.cosine <= 1.0:
            raise DataError(f"record {self.id!r}: cosine {self.cosine} outside -1..1")

    @property
    def scores(self) -> dict[str, float]:
        """Round-trip scores keyed by metric id."""
        return {str(MetricId.BLEU): self.bleu, str(MetricId.METEOR): self.meteor}

    def to_json(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "src_original": self.src_original,
            "fwd_translation": self.fwd_translation,
            "back_translation": self.back_translation,
            "bleu": self.bleu,
            "meteor": self.meteor,
            "cosine": self.cosine,
        }


@dataclass(frozen=True)
class FilterDecision:
    id: str
    stage: str
    scores: dict[str, float]
    thresholds: dict[str, float]
    passed: bool
    note: str = ""

    @classmethod
    def decide(
        cls,
        record_id: str,
        stage: str,
        scores: Mapping[str, float],
        thresholds: Mapping[str, float],
    ) -> FilterDecision:
        """Pass when every score reaches its threshold; equality passes."""
        missing = set(thresholds) - set(scores)
        if missing:
            raise DataError(f"{record_id!r}: no score for {', '.join(sorted(missing))}")
        passed = all(scores[name] >= value for name, value in thresholds.items())
        return cls(record_id, str(stage), dict(scores), dict(thresholds), passed)

    @classmethod
    def auto_fail(
        cls,
        record_id: str,
        stage: str,
        scores: Mapping[str, float],
        thresholds: Mapping[str, float],
        note: str,
    ) -> FilterDecision:
        return cls(record_id, str(stage), dict(scores), dict(thresholds), False, note)

    def to_json(self) -> dict[str, Any]:
        data = {
            "id": self.id,
            "stage": self.stage,
            "scores": self.scores,
            "thresholds": self.thresholds,
            "passed": self.passed,
        }
        if self.note:
            data["note"] = self.note
        return data


def retained_indices(decisions: Sequence[FilterDecision]) -> list[int]:
    return [index for index, decision in enumerate(decisions) if decision.passed]


@dataclass(frozen=True)
class RoundTripThresholds:
    mu_bleu: float
    mu_meteor: float
    mode: str = ThresholdMode.DATA_MEAN

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> RoundTripThresholds:
        return cls(data[MetricId.BLEU], data[MetricId.METEOR], data["mode"])

    def as_thresholds(self) -> dict[str, float]:
        return {str(MetricId.BLEU): self.mu_bleu, str(MetricId.METEOR): self.mu_meteor}

    def to_json(self) -> dict[str, Any]:
        return {"mode": str(self.mode), **self.as_thresholds()}


def score_histogram(
    values: Sequence[float], low: float, high: float, bins: int
) -> dict[str, list]:
    """
    Equal-width bins over ``[low, high]``; the top edge falls in the last bin.
    """
    if bins < 1 or high <= low:
        raise DataError(f"bad histogram range {low}..{high} with {bins} bin(s)")
    width = (high - low) / bins
    counts = [0] * bins
    for value in values:
        if not low <= value <= high:
            raise DataError(f"score {value} outside {low}..{high}")
        counts[min(bins - 1, int((value - low) / width))] += 1
    edges = [low + i * width for i in range(bins)] + [high]
    return {"edges": edges, "counts": counts}


@dataclass(frozen=True)
class PipelineReport:
    """Counts, thresholds and score distributions of one pipeline run."""

    task: str
    stage_counts: dict[str, int]
    thresholds: dict[str, dict[str, Any]]
    histograms: dict[str, dict[str, list]] = field(default_factory=dict)
    metrics: dict[str, str] = field(default_factory=dict)
    preprocess: dict[str, Any] = field(default_factory=dict)
    examples: dict[str, list[dict[str, Any]]] = field(default_factory=dict)
    config: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        counts = [self.stage_counts[key] for key in STAGE_COUNT_KEYS]
        if any(later > earlier for earlier, later in zip(counts, counts[1:])):
            raise DataError(f"stage counts increase along the pipeline: {counts}")

    def to_json(self) -> dict[str, Any]:
        return {
            "task": str(self.task),
            "stage_counts": {key: self.stage_counts[key] for key in STAGE_COUNT_KEYS},
            "preprocess": self.preprocess,
            "thresholds": self.thresholds,
            "histograms": self.histograms,
            "metrics": self.metrics,
            "examples": self.examples,
            "config": self.config,
        }

