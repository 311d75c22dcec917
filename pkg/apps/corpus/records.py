from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Any, ClassVar, Generic, Iterator, Sequence, TypeVar, Union

from apps.corpus.choices import DatasetKind


def count_words(text: str) -> int:
    """Runs of non-whitespace (Unicode whitespace); punctuation stays attached."""
    return len(text.split())


def count_chars(text: str) -> int:
    """Unicode scalar values, internal spaces included."""
    return len(text)


@dataclass(frozen=True)
class SAEntry:
    id: str
    text: str
    label: int

    kind: ClassVar[str] = DatasetKind.SA

    def flat_text(self) -> str:
        return self.text

    def fields(self) -> tuple[str, ...]:
        return (self.text,)

    def with_fields(self, fields: Sequence[str]) -> SAEntry:
        (text,) = fields
        return dataclasses.replace(self, text=text)

    def to_json(self) -> dict[str, Any]:
        return {"id": self.id, "text": self.text, "label": int(self.label)}


@dataclass(frozen=True)
class MCQAEntry:
    id: str
    question: str
    choices: tuple[str, ...]
    answer: int

    kind: ClassVar[str] = DatasetKind.MCQA

    def flat_text(self) -> str:
        return "\n".join((self.question, *self.choices))

    def fields(self) -> tuple[str, ...]:
        return (self.question, *self.choices)

    def with_fields(self, fields: Sequence[str]) -> MCQAEntry:
        question, *choices = fields
        return dataclasses.replace(self, question=question, choices=tuple(choices))

    def to_json(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "question": self.question,
            "choices": list(self.choices),
            "answer": int(self.answer),
        }


@dataclass(frozen=True)
class ParallelPair:
    id: str
    src: str
    tgt: str
    src_lang: str
    tgt_lang: str

    kind: ClassVar[str] = DatasetKind.PARALLEL

    def flat_text(self) -> str:
        return self.src

    def reversed(self) -> ParallelPair:
        return ParallelPair(self.id, self.tgt, self.src, self.tgt_lang, self.src_lang)

    def to_json(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "src": self.src,
            "tgt": self.tgt,
            "src_lang": self.src_lang,
            "tgt_lang": self.tgt_lang,
        }


LabeledEntry = Union[SAEntry, MCQAEntry]
E = TypeVar("E", SAEntry, MCQAEntry, ParallelPair)


@dataclass(frozen=True)
class Dataset(Generic[E]):
    kind: str
    entries: tuple[E, ...] = ()

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[E]:
        return iter(self.entries)

    def __getitem__(self, index: int) -> E:
        return self.entries[index]

    def ids(self) -> list[str]:
        return [entry.id for entry in self.entries]

    def by_id(self) -> dict[str, E]:
        return {entry.id: entry for entry in self.entries}

    def with_entries(self, entries: Sequence[E]) -> Dataset[E]:
        return Dataset(self.kind, tuple(entries))

    def subset(self, indices: Sequence[int]) -> Dataset[E]:
        return self.with_entries([self.entries[i] for i in indices])


ParallelCorpus = Dataset[ParallelPair]


@dataclass(frozen=True)
class CorpusStats:
    kind: str
    entry_count: int
    avg_words_per_entry: float
    avg_chars_per_entry: float
    label_counts: dict[int, int] = field(default_factory=dict)
    choice_count_freq: dict[int, int] = field(default_factory=dict)
    field_averages: dict[str, float] = field(default_factory=dict)

    def to_report(self) -> dict[str, Any]:
        """Field names follow the summary tables of the synthetic datasets."""
        report: dict[str, Any] = {
            "kind": str(self.kind),
            "entries": self.entry_count,
            "average_number_of_words_per_entry": self.avg_words_per_entry,
            "average_number_of_characters_per_entry": self.avg_chars_per_entry,
        }
        if self.kind == DatasetKind.SA:
            report["positive_label_count"] = self.label_counts.get(0, 0)
            report["negative_label_count"] = self.label_counts.get(1, 0)
        for name, value in self.field_averages.items():
            report[name] = value
        for n_choices, count in sorted(self.choice_count_freq.items()):
            report[f"frequency_of_entries_with_{n_choices}_choices"] = count
        return report
