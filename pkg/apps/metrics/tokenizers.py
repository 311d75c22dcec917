from __future__ import annotations

import re

from sacrebleu.tokenizers.tokenizer_13a import Tokenizer13a

from apps.metrics.choices import TokenizeScheme

_WHITESPACE = re.compile(r"\s+")
_TOKENIZER_13A = Tokenizer13a()


def tokenize_13a(text: str) -> list[str]:
    """
    mteval-v13a tokens, the ones sacrebleu scores BLEU on.

    The WMT markup artifact ``<skipped>`` is deleted before splitting, so a
    text holding nothing else tokenizes to ``[]``.
    """
    return _TOKENIZER_13A(text).split()


def tokenize(text: str, scheme: str = TokenizeScheme.WORD) -> list[str]:
    """
    ``word``: punctuation split off word characters (13a), then whitespace split.
    ``char``: Unicode scalar values with all whitespace removed.
    """
    if scheme == TokenizeScheme.WORD:
        return tokenize_13a(text)
    if scheme == TokenizeScheme.CHAR:
        return list(_WHITESPACE.sub("", text))
    raise ValueError(f"unknown tokenization scheme {scheme!r}")
