from __future__ import annotations

from apps.core.exceptions import DataError
from apps.corpus.records import MCQAEntry, SAEntry


def render_flat_text(entry: SAEntry | MCQAEntry) -> str:
    """
    Text an entry is embedded and scored as: the review for SA, the question
    and its choices on separate lines for MCQA. Labels and answers never
    appear.
    """
    if isinstance(entry, SAEntry):
        return entry.text
    if isinstance(entry, MCQAEntry):
        return "\n".join((entry.question, *entry.choices))
    raise DataError(f"cannot render a {type(entry).__name__}")
