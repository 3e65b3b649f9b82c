"""Couplings of the random-walk Metropolis kernel.

Proposal-step couplings (simple and maximal) and acceptance-step couplings
for RWM chains on R^d, the coupled transition kernel they induce, analytic
meeting probabilities with closed-form bounds, and the meeting-time, distance
trace, and drift experiment protocols, all behind a deterministic seeded
harness and a CLI.
"""

from .acceptance import (
    ACCEPTANCE_KINDS,
    AcceptDecision,
    couple_accept,
    mh_ratio,
    ot_rho_choice,
    rho_bounds,
    sample_uniform_pair,
)
from .errors import (
    CoupledRwmError,
    DegeneratePairError,
    DimensionMismatchError,
    DomainError,
    InversionError,
    RejectionCapError,
)
from .gauss import (
    chi2_1_ccdf,
    meeting_prob_lower_bound,
    meeting_prob_upper_chernoff,
    meeting_prob_upper_markov,
    meeting_probability,
    normal_cdf,
    normal_pdf,
    normal_quantile,
)
from .geom import PairGeometry, as_point, pair_geometry, project, reflect
from .kernel import (
    CoupledState,
    KernelSpec,
    Target,
    coupled_step,
    initial_state,
    run_to_meeting,
    rwm_step,
    standard_kernel,
    standard_normal_target,
)
from .proposals import (
    MAXIMAL_KINDS,
    PROPOSAL_KINDS,
    SIMPLE_KINDS,
    ProposalCouplingSpec,
    ProposalPair,
    sample_proposal,
)
from .experiments import (
    DriftPoint,
    MeetRecord,
    MeetSummary,
    TraceResult,
    run_drift,
    run_meet_sweep,
    run_trace,
    stream_seed,
    summarize,
)

__version__ = "0.1.0"

__all__ = [
    "ACCEPTANCE_KINDS",
    "MAXIMAL_KINDS",
    "PROPOSAL_KINDS",
    "SIMPLE_KINDS",
    "AcceptDecision",
    "CoupledRwmError",
    "CoupledState",
    "DegeneratePairError",
    "DimensionMismatchError",
    "DomainError",
    "DriftPoint",
    "InversionError",
    "KernelSpec",
    "MeetRecord",
    "MeetSummary",
    "PairGeometry",
    "ProposalCouplingSpec",
    "ProposalPair",
    "RejectionCapError",
    "Target",
    "TraceResult",
    "as_point",
    "chi2_1_ccdf",
    "couple_accept",
    "coupled_step",
    "initial_state",
    "meeting_prob_lower_bound",
    "meeting_prob_upper_chernoff",
    "meeting_prob_upper_markov",
    "meeting_probability",
    "mh_ratio",
    "normal_cdf",
    "normal_pdf",
    "normal_quantile",
    "ot_rho_choice",
    "pair_geometry",
    "project",
    "reflect",
    "rho_bounds",
    "run_drift",
    "run_meet_sweep",
    "run_to_meeting",
    "run_trace",
    "rwm_step",
    "sample_proposal",
    "sample_uniform_pair",
    "standard_kernel",
    "standard_normal_target",
    "stream_seed",
    "summarize",
]
