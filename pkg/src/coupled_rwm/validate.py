"""Statistical oracles used by the test batteries.

Everything here is deliberately independent of the sampler implementations:
residual densities are written down directly from the component form of a
maximal coupling (pointwise min of the two proposal densities on the meet
event, positive part of their difference off it), normalizing constants come
from adaptive quadrature, reference draws come from plain rejection sampling
against the proposal density, and goodness-of-fit uses the one-sample
Kolmogorov-Smirnov test.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate, stats

from .errors import DomainError, RejectionCapError

__all__ = [
    "ks_statistic",
    "residual_density",
    "residual_norm_constant",
    "make_residual_cdf",
    "rejection_residual_sampler",
    "sample_residual",
]

_SIDES = ("meet", "x_residual", "y_residual")


def ks_statistic(samples, cdf):
    """One-sample KS statistic and asymptotic p-value against a callable CDF."""
    samples = np.asarray(samples, dtype=np.float64)
    if samples.size == 0:
        raise DomainError("KS test requires at least one sample")
    result = stats.kstest(samples, cdf, method="asymp")
    return float(result.statistic), float(result.pvalue)


def _check_side(side, x1, y1):
    if side not in _SIDES:
        raise DomainError(f"side must be one of {_SIDES}, got {side!r}")
    if side != "meet" and x1 == y1:
        raise DomainError("residual has zero mass when x1 == y1")


def residual_density(z, x1, y1, sd, side):
    """Unnormalized component density of a maximal coupling of N(x1, sd^2)
    and N(y1, sd^2): min of the densities on the meet event, positive part
    of the difference for each chain's non-meet residual."""
    _check_side(side, x1, y1)
    z = np.asarray(z, dtype=np.float64)
    c = 1.0 / (sd * math.sqrt(2.0 * math.pi))
    qx = c * np.exp(-0.5 * ((z - x1) / sd) ** 2)
    qy = c * np.exp(-0.5 * ((z - y1) / sd) ** 2)
    if side == "meet":
        return np.minimum(qx, qy)
    if side == "x_residual":
        return np.maximum(0.0, qx - qy)
    return np.maximum(0.0, qy - qx)


def residual_norm_constant(x1, y1, sd, side):
    """Mass of the unnormalized component density, by adaptive quadrature."""
    _check_side(side, x1, y1)
    lo = min(x1, y1) - 12.0 * sd
    hi = max(x1, y1) + 12.0 * sd
    m = 0.5 * (x1 + y1)
    value, _ = integrate.quad(
        lambda z: float(residual_density(z, x1, y1, sd, side)),
        lo,
        hi,
        points=[x1, m, y1],
        epsabs=0.0,
        epsrel=1e-11,
        limit=200,
    )
    return value


def make_residual_cdf(x1, y1, sd, side, grid_points=40001):
    """Vectorized CDF of the normalized component density, built by
    cumulative trapezoid integration on a dense grid (the grid error is far
    below KS resolution at the sample sizes used here)."""
    _check_side(side, x1, y1)
    lo = min(x1, y1) - 10.0 * sd
    hi = max(x1, y1) + 10.0 * sd
    grid = np.linspace(lo, hi, grid_points)
    dens = residual_density(grid, x1, y1, sd, side)
    cdf = np.concatenate([[0.0], integrate.cumulative_trapezoid(dens, grid)])
    cdf /= cdf[-1]

    def cdf_fn(v):
        return np.interp(v, grid, cdf, left=0.0, right=1.0)

    return cdf_fn


def rejection_residual_sampler(x1, y1, sd, side, rng, cap=10**6):
    """One exact draw from the normalized component density, by rejection
    from the matching proposal density."""
    _check_side(side, x1, y1)
    if side == "y_residual":
        base, other = y1, x1
    else:
        base, other = x1, y1
    inv_two_var = 1.0 / (2.0 * sd * sd)
    for _ in range(cap):
        z = base + sd * rng.standard_normal()
        db = z - base
        do = z - other
        log_ratio = (db * db - do * do) * inv_two_var  # log q_other - log q_base
        u = rng.random()
        if side == "meet":
            if u <= 0.0 or math.log(u) <= min(0.0, log_ratio):
                return z
        else:
            # accept with probability 1 - q_other / q_base when positive
            if log_ratio < 0.0 and u <= 1.0 - math.exp(log_ratio):
                return z
    raise RejectionCapError(f"residual rejection sampler exceeded {cap} draws")


def sample_residual(n, x1, y1, sd, side, rng, cap=10**6):
    """n independent draws via rejection_residual_sampler."""
    return np.array(
        [rejection_residual_sampler(x1, y1, sd, side, rng, cap) for _ in range(n)]
    )
