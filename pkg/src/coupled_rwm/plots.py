"""Best-effort SVG renderings of experiment results (no acceptance criteria
beyond producing a valid file)."""

from __future__ import annotations


def _axes():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    return plt, fig, ax


def plot_meet(summaries, path, log_scale=False):
    """Mean meeting time against dimension, one line per coupling pair."""
    plt, fig, ax = _axes()
    series: dict[tuple[str, str], list] = {}
    for s in summaries:
        series.setdefault((s.proposal, s.acceptance), []).append(s)
    for (prop, acc), cells in series.items():
        cells = sorted(cells, key=lambda s: s.dim)
        dims = [c.dim for c in cells if c.mean_tau is not None]
        means = [c.mean_tau for c in cells if c.mean_tau is not None]
        ax.plot(dims, means, marker="o", label=f"{prop} / {acc}")
    ax.set_xlabel("dimension")
    ax.set_ylabel("mean meeting time")
    if log_scale:
        ax.set_yscale("log")
    ax.legend(fontsize=8)
    fig.savefig(path, format="svg", bbox_inches="tight")
    plt.close(fig)


def plot_trace(result, path, log_scale=False):
    """Average inter-chain distance by iteration."""
    plt, fig, ax = _axes()
    ax.plot(range(len(result.mean_r)), result.mean_r)
    ax.set_xlabel("iteration")
    ax.set_ylabel("mean distance between chains")
    ax.set_title(f"{result.proposal} / {result.acceptance}, d={result.dim}")
    if log_scale:
        ax.set_yscale("log")
    fig.savefig(path, format="svg", bbox_inches="tight")
    plt.close(fig)


def plot_drift(points, path, log_scale=False):
    """One-step mean drift against current distance, with the zero line."""
    plt, fig, ax = _axes()
    rs = [p.r for p in points]
    ax.axhline(0.0, color="gray", lw=0.8)
    ax.errorbar(rs, [p.mean_drift for p in points], yerr=[p.se for p in points], marker="o")
    ax.set_xlabel("distance between chains")
    ax.set_ylabel("mean one-step drift")
    if log_scale:
        ax.set_xscale("log")
    fig.savefig(path, format="svg", bbox_inches="tight")
    plt.close(fig)


def plot_prob(rows, path, log_scale=False):
    """Exact meeting probability with its lower and upper bounds."""
    plt, fig, ax = _axes()
    rs = [row[0] for row in rows]
    labels = ["exact", "lower", "markov", "chernoff"]
    for idx, label in enumerate(labels, start=1):
        ax.plot(rs, [row[idx] for row in rows], label=label)
    ax.set_xlabel("separation r")
    ax.set_ylabel("meeting probability")
    ax.set_ylim(-0.5, 1.5)
    if log_scale:
        ax.set_yscale("log")
        ax.set_ylim(None, None)
    ax.legend()
    fig.savefig(path, format="svg", bbox_inches="tight")
    plt.close(fig)
