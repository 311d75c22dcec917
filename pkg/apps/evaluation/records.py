from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping

from apps.core.exceptions import ConfigError, EmptyDatasetError
from apps.corpus.records import ParallelCorpus
from apps.metrics.aggregation import unweighted_mean
from apps.metrics.registry import TEXT_METRICS, metric_variants


@dataclass(frozen=True)
class EvalSuite:
    """Named test subsets sharing one translation direction."""

    subsets: dict[str, ParallelCorpus]
    direction: tuple[str, str]

    def __post_init__(self):
        if not self.subsets:
            raise ConfigError("evaluation suite has no subsets")
        for name, corpus in self.subsets.items():
            if not len(corpus):
                raise EmptyDatasetError(f"subset {name!r} is empty")


def macro_average(per_subset: Mapping[str, Mapping[str, float]]) -> dict[str, float]:
    """Unweighted mean of each metric across subsets, whatever their sizes."""
    if not per_subset:
        raise EmptyDatasetError("no subsets to average")
    metrics = list(next(iter(per_subset.values())))
    return {
        metric: unweighted_mean(scores[metric] for scores in per_subset.values())
        for metric in metrics
    }


@dataclass(frozen=True)
class EvalReport:
    system: str
    direction: tuple[str, str]
    per_subset: dict[str, dict[str, float]]
    macro: dict[str, float] = field(default_factory=dict)

    @classmethod
    def from_scores(
        cls,
        system: str,
        direction: tuple[str, str],
        per_subset: Mapping[str, Mapping[str, float]],
    ) -> EvalReport:
        ordered = {name: dict(per_subset[name]) for name in sorted(per_subset)}
        return cls(system, tuple(direction), ordered, macro_average(ordered))

    def to_json(self) -> dict[str, Any]:
        return {
            "system": self.system,
            "direction": list(self.direction),
            "per_subset": self.per_subset,
            "macro": self.macro,
            "metrics": metric_variants(m for m in self.macro if m in TEXT_METRICS),
        }
