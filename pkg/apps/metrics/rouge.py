from __future__ import annotations

import logging
import math
from typing import Sequence

from apps.core.exceptions import MetricInputError
from apps.metrics.tokenizers import tokenize_13a

logger = logging.getLogger(__name__)


def lcs_length(x: Sequence[str], y: Sequence[str]) -> int:
    """Length of the longest common subsequence (dynamic programming, O(|x|·|y|))."""
    if not x or not y:
        return 0
    previous = [0] * (len(y) + 1)
    for token in x:
        current = [0]
        for j, other in enumerate(y, start=1):
            if token == other:
                current.append(previous[j - 1] + 1)
            else:
                current.append(max(previous[j], current[j - 1]))
        previous = current
    return previous[-1]


def rouge_l(hyp: str, ref: str) -> float:
    """ROUGE-L F1 over word tokens, scaled to [0, 100]."""
    hyp_tokens = tokenize_13a(hyp)
    ref_tokens = tokenize_13a(ref)
    if not ref_tokens:
        raise MetricInputError("ROUGE-L reference is empty")
    if not hyp_tokens:
        logger.warning("Empty hypothesis scored ROUGE-L 0")
        return 0.0
    lcs = lcs_length(hyp_tokens, ref_tokens)
    # 2PR / (P + R) with P = lcs/|hyp|, R = lcs/|ref|
    return 100.0 * 2 * lcs / (len(hyp_tokens) + len(ref_tokens))


def corpus_rouge_l(hyps: Sequence[str], refs: Sequence[str]) -> float:
    """Average of sentence-level scores."""
    if len(hyps) != len(refs) or not hyps:
        raise MetricInputError("corpus ROUGE-L needs equally many, non-zero pairs")
    return math.fsum(rouge_l(h, r) for h, r in zip(hyps, refs)) / len(hyps)
