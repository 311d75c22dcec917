from __future__ import annotations

import logging
import math
from collections import defaultdict
from typing import Sequence

from apps.core.exceptions import MetricInputError
from apps.metrics.tokenizers import tokenize_13a

logger = logging.getLogger(__name__)

ALPHA = 0.9
BETA = 3
GAMMA = 0.5


def align_exact(hyp: Sequence[str], ref: Sequence[str]) -> list[tuple[int, int]]:
    """
    One-to-one exact-match alignment as ``(hyp_index, ref_index)`` pairs.

    Each hypothesis token prefers the reference position right after the
    previous match, which keeps contiguous runs in one chunk; otherwise it
    takes the earliest unused matching position.
    """
    positions: dict[str, list[int]] = defaultdict(list)
    for j, token in enumerate(ref):
        positions[token].append(j)

    used: set[int] = set()
    alignment: list[tuple[int, int]] = []
    previous = -2
    for i, token in enumerate(hyp):
        candidates = [j for j in positions.get(token, ()) if j not in used]
        if not candidates:
            continue
        j = previous + 1 if previous + 1 in candidates else candidates[0]
        used.add(j)
        alignment.append((i, j))
        previous = j
    return alignment


def count_chunks(alignment: Sequence[tuple[int, int]]) -> int:
    chunks = 0
    last: tuple[int, int] | None = None
    for i, j in alignment:
        if last is None or i != last[0] + 1 or j != last[1] + 1:
            chunks += 1
        last = (i, j)
    return chunks


def meteor(hyp: str, ref: str) -> float:
    """Exact-match METEOR in [0, 1] with alpha 0.9, beta 3, gamma 0.5."""
    hyp_tokens = tokenize_13a(hyp)
    ref_tokens = tokenize_13a(ref)
    if not ref_tokens:
        raise MetricInputError("METEOR reference is empty")
    if not hyp_tokens:
        logger.warning("Empty hypothesis scored METEOR 0")
        return 0.0

    alignment = align_exact(hyp_tokens, ref_tokens)
    matches = len(alignment)
    if matches == 0:
        return 0.0

    precision = matches / len(hyp_tokens)
    recall = matches / len(ref_tokens)
    fmean = precision * recall / (ALPHA * precision + (1 - ALPHA) * recall)
    penalty = GAMMA * (count_chunks(alignment) / matches) ** BETA
    return max(0.0, min(1.0, fmean * (1 - penalty)))


def corpus_meteor(hyps: Sequence[str], refs: Sequence[str]) -> float:
    if len(hyps) != len(refs) or not hyps:
        raise MetricInputError("corpus METEOR needs equally many, non-zero pairs")
    return math.fsum(meteor(h, r) for h, r in zip(hyps, refs)) / len(hyps)
