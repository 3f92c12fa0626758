"""Figure rendering for sequence runs.

One PNG per run, next to the delimited output: the computed values along
the n grid, confidence bars where points were sampled, the limiting value
as a horizontal rule when one is known, and a log-scale gap panel below it
in that case.  Rendering is headless (Agg); nothing here opens a window.
"""

from __future__ import annotations

from typing import Optional

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

_STYLE = {
    "figure.dpi": 110,
    "font.size": 9.0,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "legend.frameon": False,
}

_METHOD_MARKS = {
    "enumeration": ("o", "tab:blue"),
    "closed-form": ("s", "tab:green"),
    "monte-carlo": ("^", "tab:red"),
}


def render_sequence_plot(
    points: list,
    kind: str,
    target: Optional[float],
    path: str,
    title: Optional[str] = None,
) -> str:
    """Write the figure for one sequence; returns the path."""
    if not points:
        raise ValueError("nothing to plot: empty sequence")
    with plt.rc_context(_STYLE):
        if target is None:
            fig, ax_value = plt.subplots(figsize=(6.4, 3.6), layout="constrained")
            ax_gap = None
        else:
            fig, (ax_value, ax_gap) = plt.subplots(
                2, 1, figsize=(6.4, 5.6), sharex=True, layout="constrained",
                height_ratios=[2, 1],
            )

        for method, (mark, color) in _METHOD_MARKS.items():
            sub = [p for p in points if p.method == method]
            if not sub:
                continue
            xs = [p.n for p in sub]
            ys = [p.value for p in sub]
            if method == "monte-carlo":
                yerr = [
                    [p.value - p.ci[0] for p in sub],
                    [p.ci[1] - p.value for p in sub],
                ]
                ax_value.errorbar(
                    xs, ys, yerr=yerr, fmt=mark, color=color, capsize=2.5,
                    markersize=4, linestyle="none", label=method,
                )
            else:
                ax_value.plot(
                    xs, ys, mark, color=color, markersize=4, label=method
                )
        if target is not None:
            ax_value.axhline(
                target, color="black", linewidth=0.9, linestyle="--",
                label=f"target {target:.6g}",
            )
        ns = [p.n for p in points]
        if max(ns) >= 10 * max(1, min(ns)):
            ax_value.set_xscale("log")
        ax_value.set_ylabel(f"{kind} value")
        ax_value.legend(loc="best")
        if title:
            ax_value.set_title(title)

        if ax_gap is not None:
            gap_pts = [(p.n, abs(p.value - target)) for p in points]
            positive = [(n, g) for n, g in gap_pts if g > 0]
            if positive:
                ax_gap.plot(
                    [n for n, _ in positive], [g for _, g in positive],
                    "o-", color="tab:purple", markersize=3,
                )
                ax_gap.set_yscale("log")
            zero = [n for n, g in gap_pts if g == 0]
            if zero:
                # Exact hits cannot sit on a log axis; mark them on the floor.
                ax_gap.plot(
                    zero, [ax_gap.get_ylim()[0] for _ in zero] if positive else
                    [1e-17 for _ in zero], "x", color="tab:purple", markersize=4,
                )
            ax_gap.set_ylabel("|value - target|")
            ax_gap.set_xlabel("n")
        else:
            ax_value.set_xlabel("n")

        fig.savefig(path)
        plt.close(fig)
    return path
