from __future__ import annotations

import logging
from typing import Sequence

from apps.backends.choices import EndpointKind, ExemplarSampling
from apps.backends.clients import Target, as_client, llm_rewrite, translate_batch
from apps.backends.fsl import fsl_translate
from apps.backends.prompts import FslExampleBank
from apps.core.exceptions import ConfigError
from apps.corpus.records import LabeledEntry

logger = logging.getLogger(__name__)


def _regroup(entries: Sequence[LabeledEntry], texts: list[str]) -> list[LabeledEntry]:
    out, position = [], 0
    for entry in entries:
        width = len(entry.fields())
        out.append(entry.with_fields(texts[position : position + width]))
        position += width
    return out


def translate_entries(
    entries: Sequence[LabeledEntry],
    target: Target,
    src_lang: str,
    tgt_lang: str,
    *,
    bank: FslExampleBank | None = None,
    sampling: str = ExemplarSampling.FIXED,
    seed: int = 0,
) -> list[LabeledEntry]:
    """
    Translate every text field of every entry as its own segment.

    An MCQA question and each of its choices are separate segments, so the
    translations map back onto the entry field by field. Ids, labels and
    answers are carried over untouched. A chat endpoint translates through
    few-shot prompts built from *bank*.
    """
    texts = [text for entry in entries for text in entry.fields()]
    if not texts:
        return []
    client = as_client(target)
    if client.endpoint.kind == EndpointKind.CHAT:
        if bank is None:
            raise ConfigError(
                f"endpoint {client.endpoint.name!r} is a chat model; "
                "translating with it needs exemplars"
            )
        translated = fsl_translate(
            client, bank, texts, src_lang, tgt_lang, sampling=sampling, seed=seed
        )
    else:
        translated = translate_batch(client, texts, src_lang, tgt_lang)
    logger.info(
        "Translated %d segment(s) of %d entries %s -> %s",
        len(texts),
        len(entries),
        src_lang,
        tgt_lang,
    )
    return _regroup(entries, translated)


def rewrite_entries(
    entries: Sequence[LabeledEntry], target: Target, instruction: str
) -> list[LabeledEntry]:
    texts = [text for entry in entries for text in entry.fields()]
    if not texts:
        return []
    return _regroup(entries, llm_rewrite(target, texts, instruction))
