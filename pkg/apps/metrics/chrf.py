from __future__ import annotations

import logging
from typing import Sequence

from sacrebleu.metrics import CHRF

from apps.core.exceptions import MetricInputError
from apps.metrics.choices import TokenizeScheme
from apps.metrics.tokenizers import tokenize

logger = logging.getLogger(__name__)

CHAR_ORDER = 6
WORD_ORDER = 2
BETA = 2

_CHRF_PP = CHRF(char_order=CHAR_ORDER, word_order=WORD_ORDER, beta=BETA)


def _check_reference(ref: str) -> None:
    if not tokenize(ref, TokenizeScheme.CHAR):
        raise MetricInputError("chrF++ reference is empty")


def chrf_pp(hyp: str, ref: str) -> float:
    """Character 1..6-grams without whitespace plus word 1..2-grams, F-beta 2."""
    _check_reference(ref)
    if not tokenize(hyp, TokenizeScheme.CHAR):
        logger.warning("Empty hypothesis scored chrF++ 0")
        return 0.0
    return min(100.0, _CHRF_PP.sentence_score(hyp, [ref]).score)


def corpus_chrf_pp(hyps: Sequence[str], refs: Sequence[str]) -> float:
    if len(hyps) != len(refs):
        raise MetricInputError(
            f"corpus chrF++ needs as many hypotheses as references "
            f"({len(hyps)} vs {len(refs)})"
        )
    if not hyps:
        raise MetricInputError("corpus chrF++ needs at least one pair")
    for ref in refs:
        _check_reference(ref)
    return min(100.0, _CHRF_PP.corpus_score(list(hyps), [list(refs)]).score)
