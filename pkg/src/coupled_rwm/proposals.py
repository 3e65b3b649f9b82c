"""Couplings of the proposal step: joint draws from N(x, I sd^2) and N(y, I sd^2).

Two families are provided.  The simple couplings (independent, synchronous,
reflection, full-reflection) never produce equal proposals from distinct
states.  The maximal couplings (independent, semi-independent, optimal
transport, reflection residuals) produce equal proposals at the largest rate
any coupling allows and differ only in the joint law of the two proposals
conditional on not meeting.  A hybrid coupling switches from a cheap simple
coupling to the maximal reflection coupling once the chains are close.

All d-dimensional maximal couplings reduce to a one-dimensional coupling
along the unit vector e from x to y, combined with suitable draws for the
orthogonal complement.  The one-dimensional routines are exposed as well,
both for direct use on scalar chains and for the test suites.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegeneratePairError,
    DomainError,
    InversionError,
    RejectionCapError,
)
from .gauss import normal_pdf
from .geom import pair_geometry

__all__ = [
    "PROPOSAL_KINDS",
    "SIMPLE_KINDS",
    "MAXIMAL_KINDS",
    "DEFAULT_REJECTION_CAP",
    "ProposalCouplingSpec",
    "ProposalPair",
    "sample_independent",
    "sample_synchronous",
    "sample_reflection",
    "sample_full_reflection",
    "sample_max_independent_1d",
    "sample_max_independent",
    "sample_max_semi_independent",
    "ot_residual_cdf",
    "ot_transport_map",
    "sample_max_ot_1d",
    "sample_max_ot",
    "sample_max_reflection_1d",
    "sample_max_reflection",
    "sample_hybrid",
    "sample_proposal",
]

SIMPLE_KINDS = ("independent", "synchronous", "reflection", "full-reflection")
MAXIMAL_KINDS = (
    "max-independent",
    "max-semi-independent",
    "max-optimal-transport",
    "max-reflection",
)
PROPOSAL_KINDS = SIMPLE_KINDS + MAXIMAL_KINDS + ("hybrid",)

DEFAULT_REJECTION_CAP = 10**6

_SQRT1_2 = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class ProposalCouplingSpec:
    """Selects one proposal coupling and its parameters.

    hybrid_cutoff is the dimensionless threshold r_bar of the hybrid
    coupling, which uses the maximal reflection coupling whenever
    ||y - x|| < r_bar / sqrt(d) and hybrid_far_kind otherwise.
    """

    kind: str
    sd: float
    hybrid_cutoff: float | None = None
    hybrid_far_kind: str = "reflection"
    rejection_cap: int = DEFAULT_REJECTION_CAP

    def __post_init__(self):
        if self.kind not in PROPOSAL_KINDS:
            raise DomainError(f"unknown proposal coupling kind {self.kind!r}")
        if not self.sd > 0.0:
            raise DomainError(f"sd must be positive, got {self.sd}")
        if self.rejection_cap < 1:
            raise DomainError("rejection_cap must be a positive integer")
        if self.kind == "hybrid":
            if self.hybrid_cutoff is None or not self.hybrid_cutoff > 0.0:
                raise DomainError("hybrid coupling requires a positive hybrid_cutoff")
            if self.hybrid_far_kind not in SIMPLE_KINDS:
                raise DomainError(
                    f"hybrid_far_kind must be one of {SIMPLE_KINDS}, got {self.hybrid_far_kind!r}"
                )


@dataclass(frozen=True)
class ProposalPair:
    """A joint proposal draw.  proposed_meet is True exactly when the two
    proposals are the same point (assigned by copy, so bitwise equal)."""

    x_prop: np.ndarray
    y_prop: np.ndarray
    proposed_meet: bool


# ---------------------------------------------------------------------------
# simple couplings


def sample_independent(x, y, sd, rng) -> ProposalPair:
    """Independent increments for the two chains."""
    x_prop = x + sd * rng.standard_normal(x.size)
    y_prop = y + sd * rng.standard_normal(y.size)
    return ProposalPair(x_prop, y_prop, False)


def sample_synchronous(x, y, sd, rng) -> ProposalPair:
    """Common-random-numbers coupling: both chains add the same increment."""
    xi = sd * rng.standard_normal(x.size)
    return ProposalPair(x + xi, y + xi, False)


def sample_reflection(x, y, sd, rng) -> ProposalPair:
    """Reflect the x increment across the hyperplane bisecting x and y."""
    geom = pair_geometry(x, y)
    xi = sd * rng.standard_normal(x.size)
    eta = xi - (2.0 * np.dot(geom.e, xi)) * geom.e
    return ProposalPair(x + xi, y + eta, False)


def sample_full_reflection(x, y, sd, rng) -> ProposalPair:
    """Negate the whole increment for the second chain."""
    if np.array_equal(x, y):
        raise DegeneratePairError("full-reflection coupling requires x != y")
    xi = sd * rng.standard_normal(x.size)
    return ProposalPair(x + xi, y - xi, False)


# ---------------------------------------------------------------------------
# one-dimensional maximal couplings

# The meet test shared by all three 1-d maximal couplings accepts the x-chain
# proposal for both chains when W * q(x, v) <= q(y, v), evaluated in log
# space: densities underflow near r/sd ~ 40 while the squared-distance
# difference stays exact.


def _log_w(rng) -> float:
    w = rng.random()
    return math.log(w) if w > 0.0 else -math.inf


def _meet_log_threshold(v, x1, y1, sd) -> float:
    """log q(y1, v) - log q(x1, v) for equal-sd normals."""
    dx = v - x1
    dy = v - y1
    return (dx * dx - dy * dy) / (2.0 * sd * sd)


def sample_max_independent_1d(x1, y1, sd, rng, rejection_cap=DEFAULT_REJECTION_CAP):
    """Maximal coupling of N(x1, sd^2) and N(y1, sd^2) with independent
    residuals, by rejection.

    Returns (x1_prop, y1_prop); the proposals met iff they compare equal.
    Raises RejectionCapError if the residual loop exceeds rejection_cap
    iterations, which signals the cost blow-up of this construction as the
    chains get close.
    """
    x1p = x1 + sd * rng.standard_normal()
    if _log_w(rng) <= _meet_log_threshold(x1p, x1, y1, sd):
        return x1p, x1p
    for _ in range(rejection_cap):
        cand = y1 + sd * rng.standard_normal()
        if _log_w(rng) > _meet_log_threshold(cand, y1, x1, sd):
            return x1p, cand
    raise RejectionCapError(
        f"residual rejection loop exceeded {rejection_cap} iterations"
    )


def sample_max_reflection_1d(x1, y1, sd, rng):
    """Maximal coupling of N(x1, sd^2) and N(y1, sd^2) with reflection
    residuals: when the proposals differ, the y increment is the negated
    x increment."""
    x1p = x1 + sd * rng.standard_normal()
    if _log_w(rng) <= _meet_log_threshold(x1p, x1, y1, sd):
        return x1p, x1p
    return x1p, y1 - (x1p - x1)


# ---------------------------------------------------------------------------
# optimal-transport residuals (one-dimensional)

# For x1 < y1 the non-meet residual of the x chain has density proportional
# to (q(x1, v) - q(y1, v))+ supported on (-inf, m) with m the midpoint, and
# the y-chain residual is its mirror image on (m, inf).  Their CDFs are
# ratios of differences of normal CDFs; the monotone transport map between
# the residuals composes one CDF with the other's inverse.  Only the x1 < y1
# orientation is implemented directly; the opposite orientation follows by
# negating the axis.

_OT_BISECT_TOL = 1e-12  # relative stop width in the output coordinate
_OT_MAX_BISECT = 200
_OT_MAX_DOUBLINGS = 200


def _cdf_gap(v, x1, y1, sd) -> float:
    """F_x(v) - F_y(v) for x1 < y1, evaluated without cancellation in
    either tail.  Called ~40 times per transport-map inversion, so it uses
    math.erfc directly."""
    u = (v - 0.5 * (x1 + y1)) / sd
    a = 0.5 * (y1 - x1) / sd
    if u > 0.0:
        u = -u
    return 0.5 * (math.erfc(-(u + a) * _SQRT1_2) - math.erfc(-(u - a) * _SQRT1_2))


def _residual_cdf_low(v, x1, y1, sd) -> float:
    """CDF of the x-chain residual for the base orientation x1 < y1."""
    m = 0.5 * (x1 + y1)
    if v >= m:
        return 1.0
    denom = math.erf(0.5 * (y1 - x1) / sd * _SQRT1_2)
    return min(1.0, max(0.0, _cdf_gap(v, x1, y1, sd) / denom))


def ot_residual_cdf(v, x1, y1, sd, chain="x"):
    """CDF at v of the given chain's proposal conditional on the proposals
    differing, under any maximal coupling of N(x1, sd^2) and N(y1, sd^2)."""
    if chain not in ("x", "y"):
        raise DomainError(f"chain must be 'x' or 'y', got {chain!r}")
    if x1 == y1:
        raise DegeneratePairError("residual CDFs are undefined for x1 == y1")
    if chain == "y":
        x1, y1 = y1, x1
    if x1 < y1:
        return _residual_cdf_low(v, x1, y1, sd)
    return min(1.0, max(0.0, 1.0 - _residual_cdf_low(-v, -x1, -y1, sd)))


def _invert_gap(target, x1, y1, sd):
    """Solve gap(w) = target for w >= m in the base orientation x1 < y1.

    gap decreases from gap(m) to 0 on (m, inf), so this is the y-residual
    quantile at probability 1 - target / gap(m).  Bracket by doubling away
    from y1, bisect on the coordinate (a probability-width stop alone leaves
    the coordinate unresolved in the flat tail), then one Newton step.
    """
    m = 0.5 * (x1 + y1)
    lo = m
    hi, step = y1, sd
    ghi = _cdf_gap(hi, x1, y1, sd)
    for _ in range(_OT_MAX_DOUBLINGS):
        if ghi <= target:
            break
        lo = hi
        hi = y1 + step
        step *= 2.0
        ghi = _cdf_gap(hi, x1, y1, sd)
    else:
        raise InversionError("failed to bracket the residual quantile")
    for _ in range(_OT_MAX_BISECT):
        if hi - lo <= _OT_BISECT_TOL * max(1.0, abs(lo), abs(hi)):
            break
        mid = 0.5 * (lo + hi)
        if _cdf_gap(mid, x1, y1, sd) > target:
            lo = mid
        else:
            hi = mid
    else:
        raise InversionError("residual quantile bisection did not converge")
    v = 0.5 * (lo + hi)
    slope = normal_pdf(v, x1, sd) - normal_pdf(v, y1, sd)  # gap'(v), negative here
    if slope < 0.0:
        v -= (_cdf_gap(v, x1, y1, sd) - target) / slope
        v = min(max(v, lo), hi)
    return v


def ot_transport_map(x1_prop, x1, y1, sd):
    """Monotone map sending the x-chain residual to the y-chain residual.

    Matching the two residual CDFs reduces to gap(w) = gap(m) - gap(v),
    solved without forming the intermediate probability (which would lose
    precision near the support edge).
    """
    if x1 == y1:
        raise DegeneratePairError("transport map is undefined for x1 == y1")
    if x1 > y1:
        return -ot_transport_map(-x1_prop, -x1, -y1, sd)
    if x1_prop >= 0.5 * (x1 + y1):
        raise DomainError("point lies outside the x-residual support")
    denom = math.erf(0.5 * (y1 - x1) / sd * _SQRT1_2)
    target = max(0.0, denom - _cdf_gap(x1_prop, x1, y1, sd))
    return _invert_gap(target, x1, y1, sd)


def sample_max_ot_1d(x1, y1, sd, rng):
    """Maximal coupling of N(x1, sd^2) and N(y1, sd^2) whose residuals are
    joined by the monotone (optimal transport) map."""
    x1p = x1 + sd * rng.standard_normal()
    if _log_w(rng) <= _meet_log_threshold(x1p, x1, y1, sd):
        return x1p, x1p
    return x1p, ot_transport_map(x1p, x1, y1, sd)


# ---------------------------------------------------------------------------
# d-dimensional maximal couplings


def sample_max_independent(x, y, sd, rng, rejection_cap=DEFAULT_REJECTION_CAP):
    """Maximal coupling with independent residuals on R^d: maximal coupling
    along e, independent draws for both orthogonal complements."""
    geom = pair_geometry(x, y)
    e = geom.e
    x1p, y1p = sample_max_independent_1d(
        float(np.dot(e, x)), float(np.dot(e, y)), sd, rng, rejection_cap
    )
    xt = x + sd * rng.standard_normal(x.size)
    x_prop = x1p * e + (xt - np.dot(e, xt) * e)
    if x1p == y1p:
        return ProposalPair(x_prop, x_prop.copy(), True)
    yt = y + sd * rng.standard_normal(y.size)
    y_prop = y1p * e + (yt - np.dot(e, yt) * e)
    return ProposalPair(x_prop, y_prop, False)


def sample_max_semi_independent(x, y, sd, rng, rejection_cap=DEFAULT_REJECTION_CAP):
    """Maximal coupling with semi-independent residuals: maximal independent
    coupling along e, one shared draw for the orthogonal complement."""
    geom = pair_geometry(x, y)
    e = geom.e
    x1p, y1p = sample_max_independent_1d(
        float(np.dot(e, x)), float(np.dot(e, y)), sd, rng, rejection_cap
    )
    zt = geom.m + sd * rng.standard_normal(x.size)
    perp = zt - np.dot(e, zt) * e
    x_prop = x1p * e + perp
    if x1p == y1p:
        return ProposalPair(x_prop, x_prop.copy(), True)
    return ProposalPair(x_prop, y1p * e + perp, False)


def sample_max_ot(x, y, sd, rng):
    """Maximal coupling with optimal-transport residuals: monotone coupling
    along e, one shared draw for the orthogonal complement."""
    geom = pair_geometry(x, y)
    e = geom.e
    x1p, y1p = sample_max_ot_1d(
        float(np.dot(e, x)), float(np.dot(e, y)), sd, rng
    )
    zt = geom.m + sd * rng.standard_normal(x.size)
    perp = zt - np.dot(e, zt) * e
    x_prop = x1p * e + perp
    if x1p == y1p:
        return ProposalPair(x_prop, x_prop.copy(), True)
    return ProposalPair(x_prop, y1p * e + perp, False)


def sample_max_reflection(x, y, sd, rng):
    """Maximal coupling with reflection residuals: reflection coupling along
    e, one shared draw for the orthogonal complement."""
    geom = pair_geometry(x, y)
    e = geom.e
    x1p, y1p = sample_max_reflection_1d(
        float(np.dot(e, x)), float(np.dot(e, y)), sd, rng
    )
    zeta = sd * rng.standard_normal(x.size)
    base = geom.m_perp + (zeta - np.dot(e, zeta) * e)
    x_prop = x1p * e + base
    if x1p == y1p:
        return ProposalPair(x_prop, x_prop.copy(), True)
    return ProposalPair(x_prop, y1p * e + base, False)


# ---------------------------------------------------------------------------
# hybrid and dispatch

_SIMPLE_SAMPLERS = {
    "independent": sample_independent,
    "synchronous": sample_synchronous,
    "reflection": sample_reflection,
    "full-reflection": sample_full_reflection,
}


def sample_hybrid(x, y, spec: ProposalCouplingSpec, rng) -> ProposalPair:
    """Use the maximal reflection coupling when ||y - x|| < cutoff / sqrt(d),
    the configured simple coupling otherwise (far branch on ties)."""
    diff = y - x
    r = math.sqrt(np.dot(diff, diff))
    if r < spec.hybrid_cutoff / math.sqrt(x.size):
        return sample_max_reflection(x, y, spec.sd, rng)
    return _SIMPLE_SAMPLERS[spec.hybrid_far_kind](x, y, spec.sd, rng)


def sample_proposal(x, y, spec: ProposalCouplingSpec, rng) -> ProposalPair:
    """Draw a proposal pair according to spec.  x != y is required; the
    sticky branch for equal states lives in the kernel module."""
    kind = spec.kind
    if kind == "max-reflection":
        return sample_max_reflection(x, y, spec.sd, rng)
    if kind == "max-semi-independent":
        return sample_max_semi_independent(x, y, spec.sd, rng, spec.rejection_cap)
    if kind == "max-optimal-transport":
        return sample_max_ot(x, y, spec.sd, rng)
    if kind == "max-independent":
        return sample_max_independent(x, y, spec.sd, rng, spec.rejection_cap)
    if kind == "hybrid":
        return sample_hybrid(x, y, spec, rng)
    return _SIMPLE_SAMPLERS[kind](x, y, spec.sd, rng)
