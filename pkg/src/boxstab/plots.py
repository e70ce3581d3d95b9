"""Figure rendering for dichotomy reports (used by the CLI report path)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .experiments import DichotomyReport


def render_dichotomy(report: DichotomyReport, path: str) -> None:
    """Growth curves of the report: scattered size and transversal sizes per
    prefix, with the heaviness threshold for reference."""
    prefixes = [r.prefix for r in report.rows]
    scattered = [r.scattered_greedy for r in report.rows]
    tau_greedy = [r.tau_greedy for r in report.rows]
    exact_x = [r.prefix for r in report.rows if r.tau_exact is not None]
    exact_y = [r.tau_exact for r in report.rows if r.tau_exact is not None]

    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(prefixes, scattered, marker=".", label="greedy scattered size")
    ax.plot(prefixes, tau_greedy, marker=".", linestyle="--", label="greedy transversal size")
    if exact_x:
        ax.plot(exact_x, exact_y, marker="o", markersize=3, linestyle=":",
                label="exact piercing number")
    ax.axhline(report.t, color="grey", linewidth=0.8, label=f"threshold t={report.t}")
    ax.set_xlabel("prefix size")
    ax.set_ylabel("set size")
    ax.set_title(f"{report.spec.kind} stream, d={report.spec.d}, k={report.k}")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
