from __future__ import annotations

import json
import re
from typing import Sequence

from apps.backends.choices import FslTask
from apps.core.exceptions import (
    ConfigError,
    ResponseCountError,
    ResponseParseError,
    ResponseValueError,
)

_FENCE = re.compile(r"```[\w-]*\s*\n?(.*?)```", re.DOTALL)
_BRACKETED = re.compile(r"\[[^\[\]]*\]")


def strip_wrappers(raw: str) -> str:
    """Drop surrounding whitespace and a Markdown code fence, if any."""
    match = _FENCE.search(raw)
    return (match.group(1) if match else raw).strip()


def _parse_translations(text: str, raw: str, target_field: str) -> list[str]:
    try:
        document = json.loads(text)
    except json.JSONDecodeError:
        start, end = text.find("{"), text.rfind("}")
        if start < 0 or end <= start:
            raise ResponseParseError("response holds no JSON object", raw) from None
        try:
            document = json.loads(text[start : end + 1])
        except json.JSONDecodeError as exc:
            raise ResponseParseError(f"malformed JSON ({exc.msg})", raw) from exc

    entries = document.get("translations") if isinstance(document, dict) else None
    if not isinstance(entries, list):
        raise ResponseParseError("JSON has no 'translations' array", raw)
    translations = []
    for index, entry in enumerate(entries):
        value = entry.get(target_field) if isinstance(entry, dict) else None
        if not isinstance(value, str):
            raise ResponseValueError(
                f"translation {index} has no string {target_field!r} field", raw
            )
        translations.append(value)
    return translations


def _parse_int_list(text: str, raw: str) -> list[int]:
    match = _BRACKETED.search(text)
    if match is None:
        raise ResponseParseError("response holds no bracketed list", raw)
    try:
        values = json.loads(match.group(0).replace("'", '"'))
    except json.JSONDecodeError as exc:
        raise ResponseParseError(f"malformed list ({exc.msg})", raw) from exc

    answers = []
    for value in values:
        if isinstance(value, str) and value.strip().isdigit():
            value = int(value.strip())
        if isinstance(value, bool) or not isinstance(value, int):
            raise ResponseValueError(f"{value!r} is not an integer answer", raw)
        answers.append(value)
    return answers


def parse_fsl_response(
    raw: str,
    task: str,
    expected_n: int,
    *,
    n_choices: Sequence[int] | None = None,
    target_field: str = "Ladin",
) -> list:
    """
    Parse a few-shot answer: translation strings for ``mt``, integer labels
    for ``sa`` and answer indices for ``mcqa``.

    ``n_choices`` bounds each MCQA answer by its query's choice count. Every
    error keeps the raw response for the audit trail.
    """
    if expected_n < 1:
        raise ConfigError("expected_n must be at least 1")
    text = strip_wrappers(raw)

    if task == FslTask.MT:
        answers = _parse_translations(text, raw, target_field)
    elif task in (FslTask.SA, FslTask.MCQA):
        answers = _parse_int_list(text, raw)
    else:
        raise ConfigError(f"unknown few-shot task {task!r}")

    if len(answers) != expected_n:
        raise ResponseCountError(
            f"expected {expected_n} answer(s), got {len(answers)}", raw
        )

    if task == FslTask.SA:
        for value in answers:
            if value not in (0, 1):
                raise ResponseValueError(f"sentiment label {value} is not 0 or 1", raw)
    elif task == FslTask.MCQA:
        for index, value in enumerate(answers):
            bound = n_choices[index] if n_choices is not None else None
            if value < 0 or (bound is not None and value >= bound):
                raise ResponseValueError(
                    f"answer {value} for question {index} is outside 0..{bound}", raw
                )
    return answers
