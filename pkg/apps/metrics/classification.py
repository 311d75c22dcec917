from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field
from typing import Sequence

from sklearn.metrics import (
    accuracy_score,
    balanced_accuracy_score,
    f1_score,
    recall_score,
)

from apps.core.exceptions import MetricInputError
from apps.metrics.choices import F1Mode

logger = logging.getLogger(__name__)

POSITIVE_LABEL = 0


@dataclass(frozen=True)
class ClassificationScores:
    balanced_accuracy: float
    f1: float
    per_class_recall: dict[int, float] = field(default_factory=dict)
    per_class_f1: dict[int, float] = field(default_factory=dict)
    accuracy: float = 0.0
    support: int = 0

    def to_report(self) -> dict:
        return {
            "balanced_accuracy": self.balanced_accuracy,
            "f1": self.f1,
            "accuracy": self.accuracy,
            "support": self.support,
            "per_class_recall": {str(k): v for k, v in self.per_class_recall.items()},
            "per_class_f1": {str(k): v for k, v in self.per_class_f1.items()},
        }


def classification_metrics(
    preds: Sequence[int],
    golds: Sequence[int],
    f1_mode: str = F1Mode.BINARY_POSITIVE,
) -> ClassificationScores:
    """
    Balanced accuracy (mean per-class recall over classes present in the
    golds) and F1.

    ``binary_positive`` scores F1 of label 0, the positive sentiment;
    ``macro`` averages per-class F1 over every label seen in golds or preds.
    """
    if len(preds) != len(golds):
        raise MetricInputError(f"{len(preds)} predictions for {len(golds)} gold labels")
    if not golds:
        raise MetricInputError("no labels to score")
    if f1_mode not in F1Mode.values:
        raise MetricInputError(f"unknown F1 mode {f1_mode!r}")

    gold_classes = sorted(set(golds))
    classes = sorted(set(golds) | set(preds))
    for label in classes:
        if label not in gold_classes:
            logger.warning(
                "Class %s absent from gold labels; excluded from balanced accuracy",
                label,
            )

    recalls = recall_score(
        golds, preds, labels=gold_classes, average=None, zero_division=0
    )
    f1s = f1_score(golds, preds, labels=classes, average=None, zero_division=0)
    per_class_recall = {int(c): float(r) for c, r in zip(gold_classes, recalls)}
    per_class_f1 = {int(c): float(f) for c, f in zip(classes, f1s)}

    if f1_mode == F1Mode.BINARY_POSITIVE:
        f1 = per_class_f1.get(POSITIVE_LABEL, 0.0)
    else:
        f1 = float(
            f1_score(golds, preds, labels=classes, average="macro", zero_division=0)
        )

    with warnings.catch_warnings():
        # classes only predicted are dropped, as logged above
        warnings.simplefilter("ignore", UserWarning)
        balanced_accuracy = float(balanced_accuracy_score(golds, preds))

    return ClassificationScores(
        balanced_accuracy=balanced_accuracy,
        f1=f1,
        per_class_recall=per_class_recall,
        per_class_f1=per_class_f1,
        accuracy=float(accuracy_score(golds, preds)),
        support=len(golds),
    )
