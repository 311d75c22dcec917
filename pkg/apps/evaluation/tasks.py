from __future__ import annotations

import logging
import os
from typing import Sequence

from apps.core.exceptions import AlignmentError, ConfigError, SchemaError
from apps.core.jsonio import iter_jsonl, write_jsonl
from apps.core.serializers import flatten_errors
from apps.corpus.choices import DatasetKind
from apps.corpus.records import Dataset
from apps.evaluation.serializers import PredictionSerializer
from apps.metrics.choices import F1Mode
from apps.metrics.classification import ClassificationScores, classification_metrics

logger = logging.getLogger(__name__)

TASK_F1_MODES = {
    DatasetKind.SA: F1Mode.BINARY_POSITIVE,
    DatasetKind.MCQA: F1Mode.MACRO,
}


def evaluate_task(
    preds: Sequence[int], golds: Sequence[int], task: str
) -> ClassificationScores:
    """Balanced accuracy plus positive-class F1 (sa) or macro F1 (mcqa)."""
    try:
        f1_mode = TASK_F1_MODES[task]
    except KeyError as exc:
        raise ConfigError(f"task must be sa or mcqa, not {task!r}") from exc
    return classification_metrics(preds, golds, f1_mode)


def gold_labels(dataset: Dataset) -> dict[str, int]:
    if dataset.kind == DatasetKind.SA:
        return {entry.id: entry.label for entry in dataset}
    if dataset.kind == DatasetKind.MCQA:
        return {entry.id: entry.answer for entry in dataset}
    raise ConfigError(f"gold dataset must be sa or mcqa, not {dataset.kind}")


def load_predictions(path: str | os.PathLike) -> dict[str, int]:
    predictions: dict[str, int] = {}
    for line, payload in iter_jsonl(path):
        serializer = PredictionSerializer(data=payload)
        if not serializer.is_valid():
            raise SchemaError(
                f"prediction: {flatten_errors(serializer.errors)}", line=line
            )
        record_id = serializer.validated_data["id"]
        if record_id in predictions:
            raise SchemaError(f"duplicate id {record_id!r}", line=line)
        predictions[record_id] = serializer.validated_data["pred"]
    return predictions


def save_predictions(
    path: str | os.PathLike, ids: Sequence[str], preds: Sequence[int]
) -> int:
    return write_jsonl(
        path, ({"id": record_id, "pred": int(p)} for record_id, p in zip(ids, preds))
    )


def align_predictions(
    predictions: dict[str, int], gold: Dataset
) -> tuple[list[int], list[int]]:
    """Pair predictions with gold labels in gold order; every id must match."""
    labels = gold_labels(gold)
    missing = set(labels) - set(predictions)
    if missing:
        raise AlignmentError("no prediction for gold id(s)", missing)
    unknown = set(predictions) - set(labels)
    if unknown:
        raise AlignmentError("predictions for unknown id(s)", unknown)
    ids = gold.ids()
    return [predictions[i] for i in ids], [labels[i] for i in ids]
