"""Normal distribution helpers and analytic meeting probabilities.

The probability that a maximal coupling of N(x, I sd^2) and N(y, I sd^2)
yields equal draws depends on the pair only through r = ||y - x|| and equals
the chi-square(1) upper tail at (r / 2 sd)^2, which reduces to a single
complementary-error-function evaluation.  The closed-form lower and upper
bounds on that probability are also provided here; they are cheap to evaluate
and sandwich the exact value for every r and sd.

All functions accept scalars or numpy arrays.  Scalar inputs take a
``math``-module fast path because the samplers call these in tight loops.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special

from .errors import DomainError

__all__ = [
    "normal_pdf",
    "normal_cdf",
    "normal_quantile",
    "chi2_1_ccdf",
    "meeting_probability",
    "meeting_prob_lower_bound",
    "meeting_prob_upper_markov",
    "meeting_prob_upper_chernoff",
]

_SQRT1_2 = 1.0 / math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
_SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)


def _check_sd(sd: float) -> None:
    if not sd > 0.0:
        raise DomainError(f"sd must be positive, got {sd}")


def _check_r(r) -> None:
    if np.any(np.asarray(r) < 0.0):
        raise DomainError(f"separation r must be nonnegative, got {r}")


def normal_pdf(z, mean=0.0, sd=1.0):
    """Density of N(mean, sd^2) at z."""
    _check_sd(sd)
    if isinstance(z, np.ndarray):
        t = (z - mean) / sd
        return _INV_SQRT_2PI / sd * np.exp(-0.5 * t * t)
    t = (z - mean) / sd
    return _INV_SQRT_2PI / sd * math.exp(-0.5 * t * t)


def normal_cdf(z, mean=0.0, sd=1.0):
    """CDF of N(mean, sd^2) at z."""
    _check_sd(sd)
    if isinstance(z, np.ndarray):
        return special.ndtr((z - mean) / sd)
    return 0.5 * math.erfc(-(z - mean) / sd * _SQRT1_2)


def normal_quantile(u, mean=0.0, sd=1.0):
    """Inverse CDF of N(mean, sd^2); u must lie strictly inside (0, 1)."""
    _check_sd(sd)
    arr = np.asarray(u, dtype=np.float64)
    if np.any(arr <= 0.0) or np.any(arr >= 1.0):
        raise DomainError("quantile argument must lie strictly inside (0, 1)")
    q = mean + sd * special.ndtri(arr)
    return q if isinstance(u, np.ndarray) else float(q)


def chi2_1_ccdf(a):
    """P(chi-square with 1 dof >= a), via the normal-tail identity
    2 * (1 - Phi(sqrt(a)))."""
    if isinstance(a, np.ndarray):
        if np.any(a < 0.0):
            raise DomainError("chi2_1_ccdf argument must be nonnegative")
        return special.erfc(np.sqrt(0.5 * a))
    if a < 0.0:
        raise DomainError(f"chi2_1_ccdf argument must be nonnegative, got {a}")
    return math.erfc(math.sqrt(0.5 * a))


def meeting_probability(r, sd=1.0):
    """Probability that any maximal coupling of N(x, I sd^2) and N(y, I sd^2)
    with ||y - x|| = r returns equal points."""
    _check_sd(sd)
    _check_r(r)
    if isinstance(r, np.ndarray):
        return special.erfc(r / (2.0 * sd) * _SQRT1_2)
    return math.erfc(r / (2.0 * sd) * _SQRT1_2)


def meeting_prob_lower_bound(r, sd=1.0):
    """Linear lower bound 1 - sqrt(2/pi) * r / (2 sd); may be negative."""
    _check_sd(sd)
    _check_r(r)
    return 1.0 - _SQRT_2_OVER_PI * r / (2.0 * sd)


def meeting_prob_upper_markov(r, sd=1.0):
    """Markov upper bound 4 sd^2 / r^2 (infinite at r = 0)."""
    _check_sd(sd)
    _check_r(r)
    if isinstance(r, np.ndarray):
        with np.errstate(divide="ignore"):
            return np.where(r > 0.0, 4.0 * sd * sd / (r * r), np.inf)
    return 4.0 * sd * sd / (r * r) if r > 0.0 else math.inf


def meeting_prob_upper_chernoff(r, sd=1.0, s=0.25):
    """Chernoff upper bound (1 - 2s)^(-1/2) * exp(-s r^2 / (4 sd^2)) for
    s in (0, 1/2)."""
    _check_sd(sd)
    if not 0.0 < s < 0.5:
        raise DomainError(f"Chernoff parameter s must lie in (0, 1/2), got {s}")
    _check_r(r)
    scale = 1.0 / math.sqrt(1.0 - 2.0 * s)
    if isinstance(r, np.ndarray):
        return scale * np.exp(-s * r * r / (4.0 * sd * sd))
    return scale * math.exp(-s * r * r / (4.0 * sd * sd))
