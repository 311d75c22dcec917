from __future__ import annotations

import logging
from typing import Sequence

from sacrebleu.metrics import BLEU

from apps.core.exceptions import MetricInputError
from apps.metrics.tokenizers import tokenize_13a

logger = logging.getLogger(__name__)

# 13a tokens, case-sensitive, 4-grams; zero counts get exponential smoothing
# and the geometric mean runs over the orders the hypothesis has n-grams for
_BLEU = BLEU(tokenize="13a", smooth_method="exp", effective_order=True)


def _bounded(score: float) -> float:
    # exp(log(100)) may land one ulp above 100
    return max(0.0, min(100.0, score))


def _check_reference(ref: str) -> None:
    if not tokenize_13a(ref):
        raise MetricInputError("BLEU reference is empty")


def sentence_bleu(hyp: str, ref: str) -> float:
    _check_reference(ref)
    if not tokenize_13a(hyp):
        logger.warning("Empty hypothesis scored BLEU 0")
        return 0.0
    return _bounded(_BLEU.sentence_score(hyp, [ref]).score)


def corpus_bleu(hyps: Sequence[str], refs: Sequence[str]) -> float:
    """Pools the n-gram statistics of every pair before computing precisions."""
    if len(hyps) != len(refs):
        raise MetricInputError(
            f"corpus BLEU needs as many hypotheses as references "
            f"({len(hyps)} vs {len(refs)})"
        )
    if not hyps:
        raise MetricInputError("corpus BLEU needs at least one pair")
    for ref in refs:
        _check_reference(ref)
    return _bounded(_BLEU.corpus_score(list(hyps), [list(refs)]).score)
