from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import Sequence, Union

from django.conf import settings

from apps.backends.choices import ExemplarSampling, FslTask
from apps.core.exceptions import ConfigError, DataError, EmptyDatasetError
from apps.corpus.records import MCQAEntry, ParallelPair, SAEntry

EXAMPLE_TYPES = {
    FslTask.MT: ParallelPair,
    FslTask.SA: SAEntry,
    FslTask.MCQA: MCQAEntry,
}

Query = Union[str, SAEntry, MCQAEntry]


def language_name(tag: str) -> str:
    return settings.CORPUSFORGE["LANGUAGE_NAMES"].get(tag, tag)


@dataclass(frozen=True)
class FslExampleBank:
    """Exemplars shown to a chat model ahead of the queries."""

    task: str
    examples: tuple[ParallelPair | SAEntry | MCQAEntry, ...]
    shots: int

    def __post_init__(self):
        if self.task not in FslTask.values:
            raise ConfigError(f"unknown few-shot task {self.task!r}")
        if not 0 <= self.shots <= len(self.examples):
            raise ConfigError(
                f"{self.task} bank: {self.shots} shots requested from "
                f"{len(self.examples)} example(s)"
            )
        expected = EXAMPLE_TYPES[self.task]
        for example in self.examples:
            if not isinstance(example, expected):
                raise DataError(
                    f"{self.task} bank holds a {type(example).__name__}, "
                    f"expected {expected.__name__}"
                )

    @classmethod
    def from_dataset(cls, task: str, dataset, shots: int | None = None):
        if shots is None:
            shots = min(settings.CORPUSFORGE["FSL_SHOTS"], len(dataset))
        return cls(task, tuple(dataset), shots)

    def select(
        self,
        sampling: str = ExemplarSampling.FIXED,
        rng: random.Random | None = None,
    ) -> list:
        """``fixed``: the first *shots* examples; ``resampled``: a seeded draw."""
        if not self.examples:
            raise EmptyDatasetError(f"{self.task} example bank is empty")
        if sampling == ExemplarSampling.RESAMPLED:
            return (rng or random.Random(0)).sample(list(self.examples), self.shots)
        return list(self.examples[: self.shots])


def _choice_counts_phrase(low: int, high: int) -> str:
    counts = [str(n) for n in range(low, high + 1)]
    if len(counts) == 1:
        return counts[0]
    return ", ".join(counts[:-1]) + ", or " + counts[-1]


def _mt_block(pairs: Sequence[tuple[str, str]], src_name: str, tgt_name: str) -> str:
    document = {
        "translations": [{src_name: src, tgt_name: tgt} for src, tgt in pairs]
    }
    return json.dumps(document, ensure_ascii=False, indent=4)


def _sa_item(text: str, label: int | None) -> str:
    shown = "" if label is None else str(label)
    return f"[review: {json.dumps(text, ensure_ascii=False)}, label: {shown}]"


def _mcqa_item(question: str, choices: Sequence[str], answer: int | None) -> str:
    shown = "" if answer is None else str(answer)
    return f"[question: {question}, choices: {list(choices)!r}, answer: {shown}]"


def _item_block(items: Sequence[str]) -> str:
    return "{\n" + ",\n".join(items) + "\n}"


def build_fsl_prompt(
    bank: FslExampleBank,
    queries: Sequence[Query],
    *,
    exemplars: Sequence | None = None,
    src_lang: str | None = None,
    tgt_lang: str | None = None,
    batch_size: int | None = None,
) -> str:
    """
    Few-shot prompt: header, exemplar block, footer, then the queries with
    empty answer fields.

    For ``mt`` the queries are source texts and the exemplar pairs are shown
    in the ``src_lang`` to ``tgt_lang`` direction (reversed when the bank
    holds the other direction). For ``sa`` and ``mcqa`` queries are entries or
    plain texts in the target language. Identical inputs give identical bytes.
    """
    config = settings.CORPUSFORGE
    if not queries:
        raise DataError("few-shot prompt needs at least one query")
    if batch_size is None:
        batch_size = config["FSL_QUERY_BATCH"][bank.task]
    if len(queries) > batch_size:
        raise DataError(
            f"{len(queries)} queries exceed the {bank.task} batch size of {batch_size}"
        )
    if exemplars is None:
        exemplars = bank.select()
    if not exemplars:
        raise EmptyDatasetError(f"{bank.task} example bank is empty")

    src_lang = src_lang or config["SRC_LANG"]
    tgt_lang = tgt_lang or config["TGT_LANG"]
    variant = config["TGT_VARIANT"]
    n = len(queries)

    if bank.task == FslTask.MT:
        src_name, tgt_name = language_name(src_lang), language_name(tgt_lang)
        pairs = []
        for pair in exemplars:
            if (pair.src_lang, pair.tgt_lang) == (tgt_lang, src_lang):
                pair = pair.reversed()
            pairs.append((pair.src, pair.tgt))
        texts = [q if isinstance(q, str) else q.flat_text() for q in queries]
        sections = [
            f"Here are examples of translations in a JSON format between "
            f"{src_name} and {tgt_name} with the {variant} variant:",
            _mt_block(pairs, src_name, tgt_name),
            f"Please provide the translation of the following {n} entries in the "
            f"JSON format, filling the empty '{tgt_name}' fields for each entry. "
            f"Do not include any additional explanations or text:",
            _mt_block([(text, "") for text in texts], src_name, tgt_name),
        ]
    elif bank.task == FslTask.SA:
        language = f"{language_name(tgt_lang)} ({variant} variant)"
        texts = [q if isinstance(q, str) else q.text for q in queries]
        sections = [
            f"Below are Tripadvisor reviews in {language} along with their "
            f"sentiment labels:",
            _item_block([_sa_item(e.text, e.label) for e in exemplars]),
            f"Please classify the sentiment for the following {n} Tripadvisor "
            f"reviews in {language} as either 0 (Positive) or 1 (Negative). "
            f"Fill in the empty 'label' fields with only 0 or 1. Respond with "
            f"the sentiment labels in list format like this: [x, x, ...]. "
            f"Do not include any additional explanations or text.",
            _item_block([_sa_item(text, None) for text in texts]),
        ]
    else:
        language = f"{language_name(tgt_lang)} ({variant} variant)"
        low, high = config["CHOICE_RANGE"]
        sections = [
            f"Below are multiple-choice questions in {language} with "
            f"{_choice_counts_phrase(low, high)} answer choices. The correct "
            f"answer is explicitly provided as an id number corresponding to "
            f"the order of the choices:",
            _item_block(
                [_mcqa_item(e.question, e.choices, e.answer) for e in exemplars]
            ),
            "Please answer the questions based on the available choices, by "
            "filling in the empty 'answer' fields with the id number "
            "corresponding to the order of the choices. Provide the answers in "
            "a list format like this: [x, x, x, ..., x]. Do not include any "
            "additional explanations or text.",
            _item_block([_mcqa_item(q.question, q.choices, None) for q in queries]),
        ]

    return "\n\n".join(sections) + "\n"
