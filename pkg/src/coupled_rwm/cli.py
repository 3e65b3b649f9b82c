"""Command-line front end.

Subcommands: meet, trace, drift, prob, validate.  Options may come from
flags or from a JSON config file (--config); flags override file values,
unknown config keys are rejected.  All CSV output uses '.' decimals, LF line
endings, and a fixed column order, and reruns with the same configuration and
seed are byte-identical regardless of --threads.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from . import gauss
from .acceptance import ACCEPTANCE_KINDS
from .errors import CoupledRwmError, DomainError
from .experiments import (
    DEFAULT_T_MAX,
    run_drift,
    run_meet_sweep,
    run_trace,
    summarize,
)
from .proposals import PROPOSAL_KINDS
from .suites import run_suites

_CONFIG_KEYS = {
    "dims": list,
    "proposals": list,
    "acceptances": list,
    "replications": int,
    "base_seed": int,
    "t_max": int,
    "ell": float,
    "hybrid_cutoff": float,
    "hybrid_far_kind": str,
    "horizon": int,
    "r_values": list,
    "out": str,
    "svg": str,
    "log_scale": bool,
    "threads": int,
}

_DEFAULTS = {
    "replications": 1000,
    "base_seed": 0,
    "t_max": DEFAULT_T_MAX,
    "ell": 2.38,
    "hybrid_cutoff": None,
    "hybrid_far_kind": "reflection",
    "horizon": 2500,
    "log_scale": False,
}


def _load_config(path):
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise DomainError("config file must hold a JSON object")
    unknown = set(raw) - set(_CONFIG_KEYS)
    if unknown:
        raise DomainError(f"unknown config keys: {sorted(unknown)}")
    return raw


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, float):
        # shortest round-trip repr of the plain float (np.float64 subclasses
        # float but reprs with a wrapper)
        return repr(float(value))
    return str(value)


def _write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _csv_list(text, cast=str):
    return [cast(part.strip()) for part in str(text).split(",") if part.strip()]


def _resolve(args, key, cast=None):
    """Flag value if given, else config file value, else default."""
    flag = getattr(args, key, None)
    if flag is not None:
        return flag
    config = getattr(args, "_config", {})
    if key in config:
        value = config[key]
        return cast(value) if cast else value
    return _DEFAULTS.get(key)


def _threads(args):
    value = _resolve(args, "threads")
    if value is None:
        value = os.environ.get("COUPLED_RWM_THREADS", 1)
    value = int(value)
    if value < 1:
        raise DomainError(f"--threads must be >= 1, got {value}")
    return value


def _check_positive(name, value):
    if value is None or value < 1:
        raise DomainError(f"{name} must be a positive integer, got {value}")
    return int(value)


def _valid_kind(kind, allowed):
    if kind in allowed:
        return True
    if "hybrid" in allowed and kind.startswith("hybrid@"):
        try:
            return float(kind.split("@", 1)[1]) > 0.0
        except ValueError:
            return False
    return False


def _kinds(args, key, allowed, fallback=None):
    raw = _resolve(args, key)
    if raw is None:
        raw = fallback
    if raw is None:
        raise DomainError(f"missing required option for {key}")
    kinds = raw if isinstance(raw, list) else _csv_list(raw)
    for kind in kinds:
        if not _valid_kind(kind, allowed):
            raise DomainError(f"unknown kind {kind!r}; choose from {allowed}")
    return kinds


DEFAULT_HYBRID_CUTOFFS = [0.5, 1.0, 2.0]


def _cutoff_list(args):
    raw = _resolve(args, "hybrid_cutoff")
    if raw is None:
        return None
    if isinstance(raw, (int, float)):
        return [float(raw)]
    if isinstance(raw, list):
        return [float(v) for v in raw]
    return _csv_list(raw, float)


def _single_cutoff(args):
    cutoffs = _cutoff_list(args)
    if cutoffs is None:
        return None
    if len(cutoffs) != 1:
        raise DomainError("this command takes a single --hybrid-cutoff value")
    return cutoffs[0]


def _dims(args):
    if getattr(args, "dim", None) is not None:
        return [_check_positive("--dim", args.dim)]
    raw = _resolve(args, "dims")
    if raw is None:
        raise DomainError("provide --dim or --dims")
    dims = raw if isinstance(raw, list) else _csv_list(raw, int)
    return [_check_positive("dims entry", d) for d in dims]


def _common_values(args):
    return {
        "replications": _check_positive("--reps", _resolve(args, "replications")),
        "base_seed": int(_resolve(args, "base_seed")),
        "ell": float(_resolve(args, "ell")),
        "t_max": _check_positive("--t-max", _resolve(args, "t_max")),
        "hybrid_far_kind": _resolve(args, "hybrid_far_kind"),
        "threads": _threads(args),
    }


def _summary_path(out):
    root, ext = os.path.splitext(out)
    return f"{root}.summary{ext or '.csv'}"


def cmd_meet(args):
    vals = _common_values(args)
    dims = _dims(args)
    proposals = _kinds(args, "proposals", PROPOSAL_KINDS)
    acceptances = _kinds(args, "acceptances", ACCEPTANCE_KINDS)
    # a plain "hybrid" entry sweeps the configured cutoffs as labeled cells
    single_cutoff = None
    if "hybrid" in proposals:
        cutoffs = _cutoff_list(args) or DEFAULT_HYBRID_CUTOFFS
        if len(cutoffs) == 1:
            single_cutoff = cutoffs[0]
        else:
            idx = proposals.index("hybrid")
            labels = [f"hybrid@{c:g}" for c in cutoffs]
            proposals = proposals[:idx] + labels + proposals[idx + 1:]
    records = run_meet_sweep(
        dims,
        proposals,
        acceptances,
        vals["replications"],
        base_seed=vals["base_seed"],
        ell=vals["ell"],
        t_max=vals["t_max"],
        hybrid_cutoff=single_cutoff,
        hybrid_far_kind=vals["hybrid_far_kind"],
        threads=vals["threads"],
    )
    summaries = summarize(records)
    out = _resolve(args, "out")
    if out:
        _write_csv(
            out,
            ["dim", "proposal", "acceptance", "replication", "seed", "tau", "censored"],
            [
                (r.dim, r.proposal, r.acceptance, r.replication, r.seed,
                 r.tau, int(r.censored))
                for r in records
            ],
        )
        _write_csv(
            _summary_path(out),
            ["dim", "proposal", "acceptance", "mean_tau", "se_tau", "median_tau",
             "censored_count"],
            [
                (s.dim, s.proposal, s.acceptance, s.mean_tau, s.se_tau,
                 s.median_tau, s.censored_count)
                for s in summaries
            ],
        )
    for s in summaries:
        mean = "censored" if s.mean_tau is None else f"{s.mean_tau:.2f}"
        se = "" if s.se_tau is None else f" +- {s.se_tau:.2f}"
        print(
            f"d={s.dim} {s.proposal} / {s.acceptance}: mean tau {mean}{se} "
            f"(n={s.n}, censored={s.censored_count})"
        )
    svg = _resolve(args, "svg")
    if svg:
        from .plots import plot_meet

        plot_meet(summaries, svg, log_scale=bool(_resolve(args, "log_scale")))
    return 0


def cmd_trace(args):
    vals = _common_values(args)
    dims = _dims(args)
    if len(dims) != 1:
        raise DomainError("trace runs one dimension at a time")
    proposal = _kinds(args, "proposals", PROPOSAL_KINDS)[0]
    acceptance = _kinds(args, "acceptances", ACCEPTANCE_KINDS)[0]
    horizon = _check_positive("--horizon", _resolve(args, "horizon"))
    result = run_trace(
        dims[0],
        proposal,
        acceptance,
        horizon,
        vals["replications"],
        base_seed=vals["base_seed"],
        ell=vals["ell"],
        hybrid_cutoff=_single_cutoff(args),
        hybrid_far_kind=vals["hybrid_far_kind"],
        threads=vals["threads"],
    )
    out = _resolve(args, "out")
    if out:
        _write_csv(
            out,
            ["t", "mean_r", "n_alive"],
            [
                (t, float(result.mean_r[t]), int(result.n_alive[t]))
                for t in range(horizon + 1)
            ],
        )
    met = result.replications - int(result.n_alive[-1])
    print(
        f"d={dims[0]} {proposal} / {acceptance}: mean R_0 {result.mean_r[0]:.3f}, "
        f"mean R_{horizon} {result.mean_r[-1]:.3f}, met {met}/{result.replications}"
    )
    svg = _resolve(args, "svg")
    if svg:
        from .plots import plot_trace

        plot_trace(result, svg, log_scale=bool(_resolve(args, "log_scale")))
    return 0


def cmd_drift(args):
    vals = _common_values(args)
    dims = _dims(args)
    if len(dims) != 1:
        raise DomainError("drift runs one dimension at a time")
    proposal = _kinds(args, "proposals", PROPOSAL_KINDS)[0]
    acceptance = _kinds(args, "acceptances", ACCEPTANCE_KINDS)[0]
    raw = _resolve(args, "r_values")
    if raw is None:
        raise DomainError("provide --r-values")
    r_values = raw if isinstance(raw, list) else _csv_list(raw, float)
    points = run_drift(
        dims[0],
        proposal,
        acceptance,
        [float(r) for r in r_values],
        vals["replications"],
        base_seed=vals["base_seed"],
        ell=vals["ell"],
        hybrid_cutoff=_single_cutoff(args),
        hybrid_far_kind=vals["hybrid_far_kind"],
        threads=vals["threads"],
    )
    out = _resolve(args, "out")
    if out:
        _write_csv(
            out,
            ["r", "mean_drift", "se", "n"],
            [(p.r, p.mean_drift, p.se, p.n) for p in points],
        )
    for p in points:
        print(f"r={p.r:g}: mean drift {p.mean_drift:+.4f} (se {p.se:.4f}, n={p.n})")
    svg = _resolve(args, "svg")
    if svg:
        from .plots import plot_drift

        plot_drift(points, svg, log_scale=bool(_resolve(args, "log_scale")))
    return 0


def cmd_prob(args):
    sd = float(args.sd)
    s = float(args.chernoff_s)
    if args.r is not None:
        rs = [float(args.r)]
    else:
        rs = list(np.linspace(0.0, float(args.r_max), int(args.points)))
    rows = []
    for r in rs:
        rows.append(
            (
                float(r),
                gauss.meeting_probability(r, sd),
                gauss.meeting_prob_lower_bound(r, sd),
                gauss.meeting_prob_upper_markov(r, sd),
                gauss.meeting_prob_upper_chernoff(r, sd, s),
            )
        )
    print("r exact lower markov chernoff")
    for row in rows:
        print(" ".join(_fmt(v) for v in row))
    out = _resolve(args, "out")
    if out:
        _write_csv(out, ["r", "exact", "lower", "markov", "chernoff"], rows)
    svg = _resolve(args, "svg")
    if svg:
        from .plots import plot_prob

        plot_prob(rows, svg, log_scale=bool(_resolve(args, "log_scale")))
    return 0


def cmd_validate(args):
    names = _csv_list(args.only) if args.only else None
    results = run_suites(names, threads=_threads(args))
    failed = [r for r in results if not r.passed]
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        detail = f"  [{r.detail}]" if r.detail else ""
        print(f"{status} {r.suite}: {r.name}{detail}")
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    if failed:
        print("failing checks:", ", ".join(f"{r.suite}:{r.name}" for r in failed))
        return 1
    return 0


def _add_common(parser, with_reps=True):
    parser.add_argument("--config", help="JSON config file; flags override it")
    parser.add_argument("--out", help="CSV output path")
    parser.add_argument("--svg", help="SVG plot output path")
    parser.add_argument("--log-scale", dest="log_scale", action="store_true",
                        default=None, help="log-scale the SVG plot")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker processes (or env COUPLED_RWM_THREADS)")
    if with_reps:
        parser.add_argument("--dim", type=int, default=None)
        parser.add_argument("--dims", default=None,
                            help="comma-separated dimensions")
        parser.add_argument("--proposal", dest="proposals", default=None,
                            help=f"comma-separated from {PROPOSAL_KINDS}")
        parser.add_argument("--acceptance", dest="acceptances", default=None,
                            help=f"comma-separated from {ACCEPTANCE_KINDS}")
        parser.add_argument("--reps", dest="replications", type=int, default=None)
        parser.add_argument("--seed", dest="base_seed", type=int, default=None)
        parser.add_argument("--t-max", dest="t_max", type=int, default=None)
        parser.add_argument("--ell", type=float, default=None)
        parser.add_argument("--hybrid-cutoff", dest="hybrid_cutoff",
                            default=None,
                            help="cutoff r_bar; meet accepts a comma list "
                                 "(default 0.5,1,2 when sweeping hybrid)")
        parser.add_argument("--hybrid-far-kind", dest="hybrid_far_kind",
                            default=None, choices=list(PROPOSAL_KINDS[:4]))


def build_parser():
    parser = argparse.ArgumentParser(
        prog="coupled-rwm",
        description="Coupled random-walk Metropolis experiments and checks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("meet", help="meeting-time sweep over coupling cells")
    _add_common(p)
    p.set_defaults(fn=cmd_meet)

    p = sub.add_parser("trace", help="average distance trace at fixed dimension")
    _add_common(p)
    p.add_argument("--horizon", type=int, default=None)
    p.set_defaults(fn=cmd_trace)

    p = sub.add_parser("drift", help="one-step drift curve over distances")
    _add_common(p)
    p.add_argument("--r-values", dest="r_values", default=None,
                   help="comma-separated distances")
    p.set_defaults(fn=cmd_drift)

    p = sub.add_parser("prob", help="analytic meeting probability and bounds")
    p.add_argument("--r", type=float, default=None)
    p.add_argument("--sd", type=float, default=1.0)
    p.add_argument("--r-max", dest="r_max", type=float, default=10.0)
    p.add_argument("--points", type=int, default=101)
    p.add_argument("--chernoff-s", dest="chernoff_s", type=float, default=0.25)
    _add_common(p, with_reps=False)
    p.set_defaults(fn=cmd_prob)

    p = sub.add_parser("validate", help="run the statistical check suites")
    p.add_argument("--only", help="comma-separated suite name fragments")
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(fn=cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args._config = _load_config(args.config) if getattr(args, "config", None) else {}
        return args.fn(args)
    except CoupledRwmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
