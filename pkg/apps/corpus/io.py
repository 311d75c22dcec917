from __future__ import annotations

import logging
import os
from typing import Any

from apps.core.exceptions import ConfigError, SchemaError
from apps.core.jsonio import iter_jsonl, write_jsonl
from apps.core.serializers import flatten_errors
from apps.corpus.choices import DatasetKind
from apps.corpus.records import Dataset, MCQAEntry, ParallelPair, SAEntry
from apps.corpus.serializers import (
    MCQAEntrySerializer,
    ParallelPairSerializer,
    SAEntrySerializer,
)

logger = logging.getLogger(__name__)

ID_WIDTH = 6

RECORD_SERIALIZERS = {
    DatasetKind.SA: SAEntrySerializer,
    DatasetKind.MCQA: MCQAEntrySerializer,
    DatasetKind.PARALLEL: ParallelPairSerializer,
}


def parse_kind(kind: str) -> DatasetKind:
    try:
        return DatasetKind(kind)
    except ValueError as exc:
        valid = ", ".join(DatasetKind.values)
        raise ConfigError(
            f"unknown dataset kind {kind!r} (expected one of {valid})"
        ) from exc


def _build_record(kind: DatasetKind, record_id: str, data: dict[str, Any]):
    if kind == DatasetKind.SA:
        return SAEntry(id=record_id, text=data["text"], label=int(data["label"]))
    if kind == DatasetKind.MCQA:
        return MCQAEntry(
            id=record_id,
            question=data["question"],
            choices=tuple(data["choices"]),
            answer=data["answer"],
        )
    return ParallelPair(
        id=record_id,
        src=data["src"],
        tgt=data["tgt"],
        src_lang=data["src_lang"],
        tgt_lang=data["tgt_lang"],
    )


def load_dataset(path: str | os.PathLike, kind: str, *, strict: bool = True) -> Dataset:
    """
    Load a JSONL dataset of the declared *kind*, keeping file order.

    Records without an ``id`` get their 1-based line number, zero padded.
    """
    kind = parse_kind(kind)
    serializer_class = RECORD_SERIALIZERS[kind]
    entries = []
    seen: set[str] = set()

    for line, payload in iter_jsonl(path):
        serializer = serializer_class(data=payload, context={"strict": strict})
        if not serializer.is_valid():
            detail = flatten_errors(serializer.errors)
            raise SchemaError(f"{kind} record: {detail}", line=line)
        data = serializer.validated_data
        record_id = data.get("id") or f"{line:0{ID_WIDTH}d}"
        if record_id in seen:
            raise SchemaError(f"duplicate id {record_id!r}", line=line)
        seen.add(record_id)
        entries.append(_build_record(kind, record_id, data))

    logger.info("Loaded %d %s records from %s", len(entries), kind, path)
    return Dataset(str(kind), tuple(entries))


def save_dataset(dataset: Dataset, path: str | os.PathLike) -> None:
    count = write_jsonl(path, (entry.to_json() for entry in dataset))
    logger.info("Saved %d %s records → %s", count, dataset.kind, path)
