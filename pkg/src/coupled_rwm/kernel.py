"""The random-walk Metropolis kernel and its couplings.

A coupled transition draws a proposal pair from the configured proposal
coupling, evaluates the Metropolis rates for each chain, and draws a joint
accept/reject decision from the configured acceptance coupling.  Once the two
chains occupy the same point they are driven by a single proposal and a
single uniform forever after (the sticky rule), so meeting is permanent and
detected by exact array equality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .acceptance import ACCEPTANCE_KINDS, couple_accept, mh_ratio
from .errors import DimensionMismatchError, DomainError
from .geom import as_point
from .proposals import ProposalCouplingSpec, sample_proposal

__all__ = [
    "Target",
    "standard_normal_target",
    "KernelSpec",
    "standard_kernel",
    "CoupledState",
    "initial_state",
    "rwm_step",
    "coupled_step",
    "run_to_meeting",
]

DEFAULT_ELL = 2.38


@dataclass(frozen=True)
class Target:
    """Target distribution given by an (unnormalized) log-density."""

    log_density: Callable[[np.ndarray], float]
    dim: int


def standard_normal_target(dim: int) -> Target:
    """N(0, I_d), the target used by all shipped experiments."""

    def log_density(z: np.ndarray) -> float:
        return -0.5 * float(np.dot(z, z))

    return Target(log_density=log_density, dim=dim)


@dataclass(frozen=True)
class KernelSpec:
    """Target plus proposal and acceptance coupling choices."""

    target: Target
    proposal: ProposalCouplingSpec
    acceptance: str

    def __post_init__(self):
        if self.acceptance not in ACCEPTANCE_KINDS:
            raise DomainError(f"unknown acceptance coupling kind {self.acceptance!r}")

    @property
    def sd(self) -> float:
        return self.proposal.sd


def standard_kernel(
    dim: int,
    proposal_kind: str,
    acceptance_kind: str,
    ell: float = DEFAULT_ELL,
    hybrid_cutoff: float | None = None,
    hybrid_far_kind: str = "reflection",
) -> KernelSpec:
    """Standard-normal target with proposal scale sd = ell / sqrt(dim).

    Labels of the form ``hybrid@<cutoff>`` select the hybrid coupling with
    that cutoff baked into the name, so cutoff sweeps fit the fixed
    (dim, proposal, acceptance) cell schema.
    """
    if dim < 1:
        raise DomainError(f"dim must be a positive integer, got {dim}")
    if not ell > 0.0:
        raise DomainError(f"ell must be positive, got {ell}")
    if proposal_kind.startswith("hybrid@"):
        try:
            hybrid_cutoff = float(proposal_kind.split("@", 1)[1])
        except ValueError:
            raise DomainError(f"bad hybrid label {proposal_kind!r}") from None
        proposal_kind = "hybrid"
    proposal = ProposalCouplingSpec(
        kind=proposal_kind,
        sd=ell / math.sqrt(dim),
        hybrid_cutoff=hybrid_cutoff,
        hybrid_far_kind=hybrid_far_kind,
    )
    return KernelSpec(
        target=standard_normal_target(dim),
        proposal=proposal,
        acceptance=acceptance_kind,
    )


@dataclass(frozen=True)
class CoupledState:
    """State of a coupled chain pair.  met implies x and y are bitwise equal.

    The log target densities of x and y are cached so a step evaluates the
    target only at the proposals.
    """

    x: np.ndarray
    y: np.ndarray
    met: bool
    t: int
    log_pi_x: float | None = field(default=None, compare=False)
    log_pi_y: float | None = field(default=None, compare=False)


def initial_state(x0, y0) -> CoupledState:
    """State at t = 0; equal starts count as already met."""
    x0 = as_point(x0, "x0")
    y0 = as_point(y0, "y0")
    if x0.shape != y0.shape:
        raise DimensionMismatchError(f"start shapes {x0.shape} and {y0.shape} differ")
    return CoupledState(x=x0, y=y0, met=bool(np.array_equal(x0, y0)), t=0)


def rwm_step(x: np.ndarray, spec: KernelSpec, rng) -> np.ndarray:
    """One marginal random-walk Metropolis transition."""
    log_pi = spec.target.log_density(x)
    prop = x + spec.sd * rng.standard_normal(x.size)
    a = mh_ratio(log_pi, spec.target.log_density(prop))
    return prop if rng.random() <= a else x


def coupled_step(state: CoupledState, spec: KernelSpec, rng) -> CoupledState:
    """One coupled transition; applies the sticky rule when x == y."""
    x, y = state.x, state.y
    log_density = spec.target.log_density
    if state.met or (x[0] == y[0] and np.array_equal(x, y)):
        log_pi = state.log_pi_x if state.log_pi_x is not None else log_density(x)
        prop = x + spec.sd * rng.standard_normal(x.size)
        log_pi_prop = log_density(prop)
        if rng.random() <= mh_ratio(log_pi, log_pi_prop):
            x, log_pi = prop, log_pi_prop
        return CoupledState(x, x, True, state.t + 1, log_pi, log_pi)

    pair = sample_proposal(x, y, spec.proposal, rng)
    log_pi_x = state.log_pi_x if state.log_pi_x is not None else log_density(x)
    log_pi_y = state.log_pi_y if state.log_pi_y is not None else log_density(y)
    log_pi_xp = log_density(pair.x_prop)
    log_pi_yp = log_pi_xp if pair.proposed_meet else log_density(pair.y_prop)
    decision = couple_accept(
        spec.acceptance,
        x,
        y,
        pair.x_prop,
        pair.y_prop,
        mh_ratio(log_pi_x, log_pi_xp),
        mh_ratio(log_pi_y, log_pi_yp),
        rng,
    )
    if decision.accept_x:
        x, log_pi_x = pair.x_prop, log_pi_xp
    if decision.accept_y:
        y, log_pi_y = pair.y_prop, log_pi_yp
    if pair.proposed_meet and decision.accept_x and decision.accept_y:
        met = True
    else:
        # meetings other than accepted joint proposals have probability zero
        # but exact equality is the contract, so check cheaply then fully
        met = bool(x[0] == y[0]) and bool(np.array_equal(x, y))
    return CoupledState(x, y, met, state.t + 1, log_pi_x, log_pi_y)


def run_to_meeting(
    x0: np.ndarray,
    y0: np.ndarray,
    spec: KernelSpec,
    t_max: int,
    rng,
    record_trace: bool = False,
):
    """Iterate coupled steps until the chains meet or t_max is reached.

    Returns (tau, trace): tau is the first t with X_t = Y_t, or None if the
    run is censored at t_max.  With record_trace, trace holds the distances
    R_t for t = 0 .. last state visited.
    """
    if t_max < 1:
        raise DomainError(f"t_max must be a positive integer, got {t_max}")
    state = initial_state(x0, y0)
    trace = [float(np.linalg.norm(state.y - state.x))] if record_trace else None
    while not state.met and state.t < t_max:
        state = coupled_step(state, spec, rng)
        if record_trace:
            trace.append(float(np.linalg.norm(state.y - state.x)))
    tau = state.t if state.met else None
    return tau, (np.asarray(trace) if record_trace else None)
