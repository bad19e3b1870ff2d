"""Scalar special functions shared by the pricers."""

import math

from .errors import ValidationError

SQRT_2 = math.sqrt(2.0)

# Beyond this |x| the normal CDF is 0 or 1 to well below double precision.
TAIL_CUTOFF = 40.0


def norm_cdf(x: float) -> float:
    """Standard normal cumulative distribution function.

    Evaluated through the complementary error function so that both tails
    keep full relative precision (no ``1 - small`` cancellation).
    """
    x = float(x)
    if not math.isfinite(x):
        raise ValidationError(f"norm_cdf requires a finite argument, got {x!r}")
    if x <= -TAIL_CUTOFF:
        return 0.0
    if x >= TAIL_CUTOFF:
        return 1.0
    return 0.5 * math.erfc(-x / SQRT_2)
