"""Couplings of the accept/reject step.

Both chains must accept at exactly the Metropolis rate for their own
proposal, so a joint accept/reject rule is a coupling of two Bernoulli
variables with success rates a_x and a_y.  Any such coupling is determined by
the both-accept probability rho, which can range over
[max(0, a_x + a_y - 1), min(a_x, a_y)].  We realize these couplings through a
pair of uniforms (u, v) with b_x = 1(u <= a_x), b_y = 1(v <= a_y):

* common:      v = u            (rho at its upper bound)
* independent: v independent    (rho = a_x * a_y)
* antithetic:  v = 1 - u        (rho at its lower bound)
* optimal-transport: per-step choice of the rho bound that minimizes the
  expected squared distance between the next states, which is linear in rho.

An arbitrary rho inside the bounds is realized by sampling one of the four
cells of [0,1]^2 cut at (a_x, a_y) with the matching joint probabilities and
then placing (u, v) uniformly inside the chosen cell.

The samplers accept an optional ``size`` for vectorized draws; the scalar
path is kept branch-light because the transition kernel calls it every step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, DomainError

__all__ = [
    "ACCEPTANCE_KINDS",
    "AcceptDecision",
    "mh_ratio",
    "rho_bounds",
    "sample_uniform_pair",
    "ot_rho_choice",
    "couple_accept",
]

ACCEPTANCE_KINDS = ("common", "independent", "antithetic", "optimal-transport")


@dataclass(frozen=True)
class AcceptDecision:
    """Joint accept/reject outcome with the uniforms that produced it."""

    accept_x: bool
    accept_y: bool
    u: float
    v: float


def mh_ratio(log_pi_cur: float, log_pi_prop: float) -> float:
    """Metropolis acceptance rate min(1, pi(prop) / pi(cur)) from
    log-densities.  A -inf proposal density gives 0; a -inf current density
    is an error because the chain should never sit at such a point."""
    if log_pi_cur == -math.inf or math.isnan(log_pi_cur):
        raise DomainError("current state has zero target density")
    if log_pi_prop == -math.inf:
        return 0.0
    return math.exp(min(0.0, log_pi_prop - log_pi_cur))


def _check_rate(a: float, name: str) -> None:
    if not 0.0 <= a <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {a}")


def rho_bounds(a_x: float, a_y: float) -> tuple[float, float]:
    """Feasible range of the both-accept probability for margins a_x, a_y."""
    _check_rate(a_x, "a_x")
    _check_rate(a_y, "a_y")
    hi = min(a_x, a_y)
    # a_x + a_y - 1 can overshoot hi by one rounding step (e.g. 1.0 + 0.3)
    lo = min(max(0.0, a_x + a_y - 1.0), hi)
    return lo, hi


def _sample_rho_pair(rho, a_x, a_y, rng, size):
    # cell inner coordinates map to [0, a) and (a, 1] so the accept
    # comparison u <= a stays strict on both sides of the cut
    lo, hi = rho_bounds(a_x, a_y)
    if rho < lo - 1e-12 or rho > hi + 1e-12:
        raise DomainError(f"rho={rho} outside feasible bounds [{lo}, {hi}]")
    rho = min(max(rho, lo), hi)
    if a_x in (0.0, 1.0) or a_y in (0.0, 1.0):
        # a degenerate margin forces rho; v = u realizes the forced coupling
        # without dividing by an empty cell
        u = rng.random(size)
        return u, u
    p11 = rho
    p10 = a_x - rho
    p01 = a_y - rho
    if size is None:
        w = rng.random()
        ui = rng.random()
        vi = rng.random()
        if w < p11:
            x_low = y_low = True
        elif w < p11 + p10:
            x_low, y_low = True, False
        elif w < p11 + p10 + p01:
            x_low, y_low = False, True
        else:
            x_low = y_low = False
        u = a_x * ui if x_low else a_x + (1.0 - a_x) * (1.0 - ui)
        v = a_y * vi if y_low else a_y + (1.0 - a_y) * (1.0 - vi)
        return u, v
    w = rng.random(size)
    ui = rng.random(size)
    vi = rng.random(size)
    x_low = w < p11 + p10
    y_low = (w < p11) | ((w >= p11 + p10) & (w < p11 + p10 + p01))
    u = np.where(x_low, a_x * ui, a_x + (1.0 - a_x) * (1.0 - ui))
    v = np.where(y_low, a_y * vi, a_y + (1.0 - a_y) * (1.0 - vi))
    return u, v


def sample_uniform_pair(kind, rng, *, a_x=None, a_y=None, rho_target=None, size=None):
    """Draw (u, v) with uniform margins realizing the requested coupling.

    With rho_target set, samples the piecewise-constant joint density whose
    both-accept probability at thresholds (a_x, a_y) equals rho_target;
    otherwise kind selects common / independent / antithetic.
    """
    if rho_target is not None:
        if a_x is None or a_y is None:
            raise DomainError("rho_target mode requires a_x and a_y")
        return _sample_rho_pair(rho_target, a_x, a_y, rng, size)
    if kind == "common":
        u = rng.random(size)
        return u, u
    if kind == "independent":
        return rng.random(size), rng.random(size)
    if kind == "antithetic":
        u = rng.random(size)
        return u, 1.0 - u
    raise DomainError(
        f"kind {kind!r} needs rho_target (use couple_accept for optimal-transport)"
    )


def ot_rho_choice(x, y, x_prop, y_prop, a_x, a_y):
    """Pick the rho bound minimizing E||next_y - next_x||^2.

    The expectation is linear in rho with coefficient
    c = d(x',y') - d(x',y) - d(x,y') + d(x,y)  (d = squared distance),
    so the optimum sits at the upper bound when c < 0 and at the lower bound
    when c > 0.  Exact ties take the upper bound, which favors meeting.
    Returns (rho, chose_upper).
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    x_prop = np.asarray(x_prop, dtype=np.float64)
    y_prop = np.asarray(y_prop, dtype=np.float64)
    if not (x.shape == y.shape == x_prop.shape == y_prop.shape):
        raise DimensionMismatchError("state and proposal vectors must share one shape")

    def sqdist(a, b):
        d = a - b
        return float(np.dot(d, d))

    c = sqdist(x_prop, y_prop) - sqdist(x_prop, y) - sqdist(x, y_prop) + sqdist(x, y)
    lo, hi = rho_bounds(a_x, a_y)
    if c > 0.0:
        return lo, False
    return hi, True


def couple_accept(kind, x, y, x_prop, y_prop, a_x, a_y, rng) -> AcceptDecision:
    """Draw the joint accept/reject decision for the given coupling kind."""
    _check_rate(a_x, "a_x")
    _check_rate(a_y, "a_y")
    if kind == "optimal-transport":
        rho, _ = ot_rho_choice(x, y, x_prop, y_prop, a_x, a_y)
        u, v = _sample_rho_pair(rho, a_x, a_y, rng, None)
    elif kind == "common":
        u = rng.random()
        v = u
    elif kind == "independent":
        u = rng.random()
        v = rng.random()
    elif kind == "antithetic":
        u = rng.random()
        v = 1.0 - u
    else:
        raise DomainError(f"unknown acceptance coupling kind {kind!r}")
    return AcceptDecision(u <= a_x, v <= a_y, u, v)
