"""Experiment protocols: meeting-time sweeps, distance traces, drift curves.

Each replication owns an independent RNG stream derived by hashing the base
seed together with the cell coordinates and the replication index, so results
are a pure function of the configuration and are identical under any worker
count or execution order.
"""

from __future__ import annotations

import hashlib
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .kernel import coupled_step, initial_state, run_to_meeting, standard_kernel

__all__ = [
    "MeetRecord",
    "MeetSummary",
    "TraceResult",
    "DriftPoint",
    "stream_seed",
    "run_meet_sweep",
    "run_trace",
    "run_drift",
    "summarize",
]

DEFAULT_T_MAX = 10**6


def stream_seed(*parts) -> int:
    """Derive a 64-bit RNG seed from hashable experiment coordinates."""
    text = "|".join(repr(p) for p in parts)
    return int.from_bytes(hashlib.sha256(text.encode("utf-8")).digest()[:8], "big")


@dataclass(frozen=True)
class MeetRecord:
    dim: int
    proposal: str
    acceptance: str
    replication: int
    seed: int
    tau: int | None

    @property
    def censored(self) -> bool:
        return self.tau is None


@dataclass(frozen=True)
class MeetSummary:
    dim: int
    proposal: str
    acceptance: str
    n: int
    mean_tau: float | None
    se_tau: float | None
    median_tau: float | None
    censored_count: int


@dataclass(frozen=True)
class TraceResult:
    dim: int
    proposal: str
    acceptance: str
    replications: int
    mean_r: np.ndarray  # length horizon + 1, indexed by iteration
    n_alive: np.ndarray  # pairs not yet met at each iteration


@dataclass(frozen=True)
class DriftPoint:
    r: float
    mean_drift: float
    se: float
    n: int


_CHUNK = 50  # replications per work item


def _chunks(n_items: int):
    """Split range(n_items) into fixed-size contiguous chunks.  The layout
    must not depend on the worker count: partial results are reduced in
    chunk order, and a thread-dependent layout would change float summation
    order and break byte-identical output across --threads."""
    return [(lo, min(lo + _CHUNK, n_items)) for lo in range(0, n_items, _CHUNK)]


def _map_tasks(fn, tasks, threads):
    if threads <= 1 or len(tasks) <= 1:
        return [fn(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, tasks))


# ---------------------------------------------------------------------------
# meeting-time sweep


def _meet_chunk(task):
    (dim, proposal, acceptance, ell, t_max, cutoff, far_kind, base_seed, lo, hi) = task
    spec = standard_kernel(dim, proposal, acceptance, ell, cutoff, far_kind)
    out = []
    for rep in range(lo, hi):
        seed = stream_seed(base_seed, "meet", dim, proposal, acceptance, rep)
        rng = np.random.default_rng(seed)
        x0 = rng.standard_normal(dim)
        y0 = rng.standard_normal(dim)
        tau, _ = run_to_meeting(x0, y0, spec, t_max, rng)
        out.append((rep, seed, tau))
    return out


def run_meet_sweep(
    dims,
    proposals,
    acceptances,
    replications: int,
    base_seed: int = 0,
    ell: float = 2.38,
    t_max: int = DEFAULT_T_MAX,
    hybrid_cutoff: float | None = None,
    hybrid_far_kind: str = "reflection",
    threads: int = 1,
) -> list[MeetRecord]:
    """Meeting times for every (dim, proposal, acceptance) cell.

    Chains start at independent draws from the standard normal target; each
    replication's tau is None when censored at t_max.
    """
    dims = list(dims)
    if not dims or replications < 1:
        raise DomainError("need at least one dimension and one replication")
    records = []
    for dim in dims:
        for proposal in proposals:
            for acceptance in acceptances:
                tasks = [
                    (dim, proposal, acceptance, ell, t_max, hybrid_cutoff,
                     hybrid_far_kind, base_seed, lo, hi)
                    for lo, hi in _chunks(replications)
                ]
                for chunk in _map_tasks(_meet_chunk, tasks, threads):
                    records.extend(
                        MeetRecord(dim, proposal, acceptance, rep, seed, tau)
                        for rep, seed, tau in chunk
                    )
    return records


def summarize(records) -> list[MeetSummary]:
    """Per-cell mean, SE, median, and censor count over uncensored taus."""
    cells: dict[tuple, list] = {}
    order = []
    for rec in records:
        key = (rec.dim, rec.proposal, rec.acceptance)
        if key not in cells:
            cells[key] = []
            order.append(key)
        cells[key].append(rec.tau)
    out = []
    for key in order:
        taus = cells[key]
        done = np.array([t for t in taus if t is not None], dtype=np.float64)
        censored = len(taus) - done.size
        mean = float(done.mean()) if done.size else None
        se = float(done.std(ddof=1) / math.sqrt(done.size)) if done.size > 1 else None
        median = float(np.median(done)) if done.size else None
        out.append(MeetSummary(*key, len(taus), mean, se, median, censored))
    return out


# ---------------------------------------------------------------------------
# distance traces


def _trace_chunk(task):
    (dim, proposal, acceptance, ell, horizon, cutoff, far_kind, base_seed, lo, hi) = task
    spec = standard_kernel(dim, proposal, acceptance, ell, cutoff, far_kind)
    sum_r = np.zeros(horizon + 1)
    alive = np.zeros(horizon + 1, dtype=np.int64)
    for rep in range(lo, hi):
        seed = stream_seed(base_seed, "trace", dim, proposal, acceptance, rep)
        rng = np.random.default_rng(seed)
        state = initial_state(rng.standard_normal(dim), rng.standard_normal(dim))
        for t in range(horizon + 1):
            if state.met:
                # sticky: R_t stays exactly zero, no need to keep stepping
                break
            diff = state.y - state.x
            sum_r[t] += math.sqrt(np.dot(diff, diff))
            alive[t] += 1
            if t < horizon:
                state = coupled_step(state, spec, rng)
    return sum_r, alive


def run_trace(
    dim: int,
    proposal: str,
    acceptance: str,
    horizon: int,
    replications: int,
    base_seed: int = 0,
    ell: float = 2.38,
    hybrid_cutoff: float | None = None,
    hybrid_far_kind: str = "reflection",
    threads: int = 1,
) -> TraceResult:
    """Average distance between coupled chains at each iteration 0..horizon."""
    if horizon < 1 or replications < 1:
        raise DomainError("horizon and replications must be positive")
    tasks = [
        (dim, proposal, acceptance, ell, horizon, hybrid_cutoff, hybrid_far_kind,
         base_seed, lo, hi)
        for lo, hi in _chunks(replications)
    ]
    sum_r = np.zeros(horizon + 1)
    alive = np.zeros(horizon + 1, dtype=np.int64)
    for part_r, part_alive in _map_tasks(_trace_chunk, tasks, threads):
        sum_r += part_r
        alive += part_alive
    return TraceResult(
        dim, proposal, acceptance, replications, sum_r / replications, alive
    )


# ---------------------------------------------------------------------------
# one-step drift curves


def _drift_chunk(task):
    (dim, proposal, acceptance, ell, r, cutoff, far_kind, base_seed, lo, hi) = task
    spec = standard_kernel(dim, proposal, acceptance, ell, cutoff, far_kind)
    # e is the first basis vector and m = (1, ..., 1), which has unit
    # e-component and norm sqrt(d)
    x = np.ones(dim)
    y = np.ones(dim)
    x[0] -= 0.5 * r
    y[0] += 0.5 * r
    out = np.empty(hi - lo)
    for rep in range(lo, hi):
        seed = stream_seed(base_seed, "drift", dim, proposal, acceptance, float(r), rep)
        rng = np.random.default_rng(seed)
        state = coupled_step(initial_state(x, y), spec, rng)
        diff = state.y - state.x
        out[rep - lo] = math.sqrt(np.dot(diff, diff)) - r
    return out


def run_drift(
    dim: int,
    proposal: str,
    acceptance: str,
    r_values,
    replications: int,
    base_seed: int = 0,
    ell: float = 2.38,
    hybrid_cutoff: float | None = None,
    hybrid_far_kind: str = "reflection",
    threads: int = 1,
) -> list[DriftPoint]:
    """Mean one-step change in chain separation from pairs constructed at
    each requested distance r."""
    if replications < 1:
        raise DomainError("replications must be positive")
    points = []
    for r in r_values:
        r = float(r)
        if not r > 0.0:
            raise DomainError(f"drift distances must be positive, got {r}")
        tasks = [
            (dim, proposal, acceptance, ell, r, hybrid_cutoff, hybrid_far_kind,
             base_seed, lo, hi)
            for lo, hi in _chunks(replications)
        ]
        drifts = np.concatenate(_map_tasks(_drift_chunk, tasks, threads))
        se = float(drifts.std(ddof=1) / math.sqrt(drifts.size)) if drifts.size > 1 else 0.0
        points.append(DriftPoint(r, float(drifts.mean()), se, drifts.size))
    return points
