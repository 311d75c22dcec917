from __future__ import annotations

import math
from typing import Iterable

from apps.core.exceptions import MetricInputError


def unweighted_mean(values: Iterable[float]) -> float:
    """
    Plain mean, exactly rounded and independent of input order.

    The result is clamped to ``[min, max]`` so the mean of identical values
    is that value.
    """
    values = [float(v) for v in values]
    if not values:
        raise MetricInputError("mean of no values")
    mean = math.fsum(values) / len(values)
    return max(min(values), min(max(values), mean))
