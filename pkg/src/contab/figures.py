"""Benchmark figures rendered to files (headless, Agg backend)."""

from __future__ import annotations

import os
from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  backend must be set first

from .bench import RunReport


def solved_over_time(reports: Sequence[RunReport],
                     strategies: Sequence[str], path: str) -> None:
    """Cumulative solved problems against per-problem wall time budget.

    A point (t, k) on a strategy's curve means k of its problems were each
    proved in at most t seconds.
    """
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for s in strategies:
        times = sorted(r.wall_s for r in reports
                       if r.strategy == s and r.solved)
        xs = [0.0]
        ys = [0]
        for i, t in enumerate(times):
            xs.append(t)
            ys.append(i + 1)
        ax.step(xs, ys, where="post", label=s)
    ax.set_xlabel("wall time per problem (s)")
    ax.set_ylabel("problems proved")
    ax.set_title("proved problems by time budget")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def solved_counts(reports: Sequence[RunReport],
                  strategies: Sequence[str], path: str) -> None:
    """Bar chart: proved problems per strategy."""
    counts = [sum(1 for r in reports if r.strategy == s and r.solved)
              for s in strategies]
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.bar(range(len(strategies)), counts, color="#4878a8")
    ax.set_xticks(range(len(strategies)))
    ax.set_xticklabels(strategies)
    ax.set_xlabel("strategy")
    ax.set_ylabel("problems proved")
    ax.set_title("proved problems per strategy")
    for i, c in enumerate(counts):
        ax.annotate(str(c), (i, c), ha="center", va="bottom")
    ax.grid(True, axis="y", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_report_figures(reports: Sequence[RunReport],
                        strategies: Optional[Sequence[str]] = None,
                        out_dir: str = ".") -> list[str]:
    """Render every benchmark figure into out_dir; returns written paths."""
    if strategies is None:
        seen: list[str] = []
        for r in reports:
            if r.strategy not in seen:
                seen.append(r.strategy)
        strategies = seen
    os.makedirs(out_dir, exist_ok=True)
    written = []
    p = os.path.join(out_dir, "solved_over_time.png")
    solved_over_time(reports, strategies, p)
    written.append(p)
    p = os.path.join(out_dir, "solved_counts.png")
    solved_counts(reports, strategies, p)
    written.append(p)
    return written
