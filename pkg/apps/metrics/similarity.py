from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from apps.core.exceptions import MetricInputError


@dataclass(frozen=True)
class EmbeddingVector:
    values: tuple[float, ...]

    def __post_init__(self):
        if not self.values:
            raise MetricInputError("embedding vector is empty")
        if not all(math.isfinite(v) for v in self.values):
            raise MetricInputError("embedding vector holds non-finite values")

    @property
    def dim(self) -> int:
        return len(self.values)

    @classmethod
    def of(cls, values: Sequence[float]) -> EmbeddingVector:
        return cls(tuple(float(v) for v in values))


VectorLike = Union[EmbeddingVector, Sequence[float]]


def _values(vector: VectorLike) -> tuple[float, ...]:
    if isinstance(vector, EmbeddingVector):
        return vector.values
    return EmbeddingVector.of(vector).values


def _unit_scaled(values: tuple[float, ...]) -> np.ndarray:
    """Divide by the largest magnitude so squares neither overflow nor vanish."""
    array = np.asarray(values, dtype=np.float64)
    peak = np.max(np.abs(array))
    if peak == 0:
        raise MetricInputError("cosine similarity of a zero vector")
    return array / peak


def cosine_similarity(a: VectorLike, b: VectorLike) -> float:
    a, b = _values(a), _values(b)
    if len(a) != len(b):
        raise MetricInputError(f"dimension mismatch ({len(a)} vs {len(b)})")
    x, y = _unit_scaled(a), _unit_scaled(b)
    # exactly rounded sums keep cos(v, v) at 1
    dot = math.fsum(np.multiply(x, y))
    norm_x = math.fsum(np.square(x))
    norm_y = math.fsum(np.square(y))
    similarity = dot / math.sqrt(norm_x * norm_y)
    if not math.isfinite(similarity):
        raise MetricInputError(f"cosine similarity is not finite ({similarity})")
    return max(-1.0, min(1.0, similarity))
