from __future__ import annotations

import logging
import os
from pathlib import Path
from typing import Any, Sequence

from apps.core.exceptions import DataError, SchemaError
from apps.core.jsonio import iter_jsonl, read_json, write_json, write_jsonl
from apps.core.serializers import flatten_errors
from apps.corpus.io import load_dataset, save_dataset
from apps.corpus.records import Dataset
from apps.pipeline.choices import PipelineStage
from apps.pipeline.records import FilterDecision, RoundTripRecord
from apps.pipeline.serializers import (
    FilterDecisionSerializer,
    RoundTripRecordSerializer,
)

logger = logging.getLogger(__name__)

MANIFEST = "manifest.json"

STAGE_FILES = {
    PipelineStage.PREPROCESS: "preprocessed.jsonl",
    PipelineStage.REWRITE: "rewritten.jsonl",
    PipelineStage.TRANSLATE: "forward.jsonl",
    PipelineStage.FILTER_SIM: "filter_sim.decisions.jsonl",
    PipelineStage.BACKTRANSLATE: "roundtrip.jsonl",
    PipelineStage.FILTER_RT: "filter_rt.decisions.jsonl",
}


def _load_with(path: str | os.PathLike, serializer_class, what: str) -> list[dict]:
    rows = []
    for line, payload in iter_jsonl(path):
        serializer = serializer_class(data=payload)
        if not serializer.is_valid():
            detail = flatten_errors(serializer.errors)
            raise SchemaError(f"{what}: {detail}", line=line)
        rows.append(serializer.validated_data)
    return rows


def save_decisions(
    path: str | os.PathLike, decisions: Sequence[FilterDecision]
) -> None:
    write_jsonl(path, (decision.to_json() for decision in decisions))


def load_decisions(path: str | os.PathLike) -> list[FilterDecision]:
    return [
        FilterDecision(
            id=row["id"],
            stage=row["stage"],
            scores=dict(row["scores"]),
            thresholds=dict(row["thresholds"]),
            passed=row["passed"],
            note=row.get("note", ""),
        )
        for row in _load_with(path, FilterDecisionSerializer, "filter decision")
    ]


def save_roundtrip_records(
    path: str | os.PathLike, records: Sequence[RoundTripRecord]
) -> None:
    write_jsonl(path, (record.to_json() for record in records))


def load_roundtrip_records(path: str | os.PathLike) -> list[RoundTripRecord]:
    rows = _load_with(path, RoundTripRecordSerializer, "round-trip record")
    return [RoundTripRecord(**row) for row in rows]


class CheckpointStore:
    """
    Stage outputs of one run, plus a manifest of the stages completed.

    A stage counts as done only once its file is written and the manifest
    updated, so an interrupted stage is recomputed on resume. The manifest
    also holds a fingerprint of the run's config and input; checkpoints of a
    different run are not reused.
    """

    def __init__(
        self, directory: str | os.PathLike, fingerprint: str, resume: bool = True
    ):
        self.directory = Path(directory)
        self.fingerprint = fingerprint
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise DataError(f"cannot create {self.directory}: {exc}") from exc
        self.completed: dict[str, dict[str, Any]] = {}

        manifest = self.directory / MANIFEST
        if resume and manifest.is_file():
            saved = read_json(manifest)
            if saved.get("fingerprint") == fingerprint:
                self.completed = saved.get("completed", {})
                if self.completed:
                    logger.info(
                        "Resuming from %s: %s done",
                        self.directory,
                        ", ".join(self.completed),
                    )
            else:
                logger.warning(
                    "Checkpoints in %s belong to another run; starting over",
                    self.directory,
                )
        self._write_manifest()

    def _write_manifest(self) -> None:
        write_json(
            self.directory / MANIFEST,
            {"fingerprint": self.fingerprint, "completed": self.completed},
        )

    def path(self, stage: str) -> Path:
        return self.directory / STAGE_FILES[stage]

    def is_done(self, stage: str) -> bool:
        return stage in self.completed

    def meta(self, stage: str) -> dict[str, Any]:
        return self.completed.get(stage, {})

    def complete(self, stage: str, meta: dict[str, Any] | None = None) -> None:
        self.completed[str(stage)] = meta or {}
        self._write_manifest()
        logger.debug("Checkpointed %s → %s", stage, self.path(stage))

    def save_entries(self, stage: str, dataset: Dataset) -> None:
        save_dataset(dataset, self.path(stage))

    def load_entries(self, stage: str, kind: str) -> Dataset:
        # translations may be blank or repeat a choice
        return load_dataset(self.path(stage), kind, strict=False)

    def save_decisions(self, stage: str, decisions: Sequence[FilterDecision]) -> None:
        save_decisions(self.path(stage), decisions)

    def load_decisions(self, stage: str) -> list[FilterDecision]:
        return load_decisions(self.path(stage))

    def save_partial(self, stage: str, decisions: Sequence[FilterDecision]) -> Path:
        path = self.directory / f"{str(stage)}.partial.jsonl"
        save_decisions(path, decisions)
        logger.warning(
            "%d decision(s) made before the failure → %s", len(decisions), path
        )
        return path

    def save_records(self, stage: str, records: Sequence[RoundTripRecord]) -> None:
        save_roundtrip_records(self.path(stage), records)

    def load_records(self, stage: str) -> list[RoundTripRecord]:
        return load_roundtrip_records(self.path(stage))
