"""Survey and noise-curve figures in the (p_fail, infidelity) plane."""

from __future__ import annotations

from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .io import read_noise_curve_csv, read_survey_csv

FAMILY_ORDER = ("depolarizing", "dephasing", "amplitude_damping", "amplitude_raising")

FAMILY_COLORS = {
    "depolarizing": "tab:red",
    "dephasing": "tab:green",
    "amplitude_damping": "tab:orange",
    "amplitude_raising": "tab:purple",
}


@dataclass
class FigureSpec:
    """What to draw and where.

    p_c and alpha must satisfy alpha = 1/(2 p_c); both come from the
    primary tool (alpha defaults to that value when omitted).
    """

    survey_csv: str
    i_max: int
    p_c: float
    out_path: str
    alpha: float | None = None
    external_csv: str | None = None
    curves_csv: str | None = None
    xlim: tuple = (0.0, 0.6)
    ylim: tuple = (0.0, 0.8)
    gridsize: int = 120

    def __post_init__(self):
        if self.p_c <= 0:
            raise ValueError("p_c must be positive")
        derived = 1.0 / (2.0 * self.p_c)
        if self.alpha is None:
            self.alpha = derived
        elif abs(self.alpha - derived) > 1e-6:
            raise ValueError(
                f"alpha={self.alpha} inconsistent with 1/(2*p_c)={derived}"
            )


def _slope_annotation(rows):
    """Display ratio infid/p_fail at the smallest t with nonzero p_fail."""
    for _, p_fail, infid in rows:
        if p_fail > 0:
            return infid / p_fail
    return None


def render_survey(spec: FigureSpec):
    """Hexbin density of survey points with the soundness line.

    Draws the dashed bound infid = alpha * p_fail, a marker for the optimal
    classical strategy at (p_c, 1/2), optional external-channel points as
    black dots, and optional noise curves with tick marks every 10% of t.
    Returns the matplotlib figure after saving it.
    """
    points = read_survey_csv(spec.survey_csv)
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    if points:
        pf = np.array([p for p, _ in points])
        fid = np.array([f for _, f in points])
        hb = ax.hexbin(
            pf, fid, gridsize=spec.gridsize, bins="log", cmap="Blues",
            extent=(*spec.xlim, *spec.ylim), mincnt=1, zorder=1,
        )
        fig.colorbar(hb, ax=ax, label="channels per bin")
    line_x = np.array([0.0, spec.xlim[1]])
    ax.plot(
        line_x, spec.alpha * line_x, "b--", zorder=3,
        label=f"bound, slope {spec.alpha:g}",
    )
    ax.plot(
        [spec.p_c], [0.5], marker="*", color="crimson", markersize=12,
        linestyle="none", zorder=4, label="optimal classical strategy",
    )
    if spec.curves_csv:
        curves = read_noise_curve_csv(spec.curves_csv)
        for family in sorted(curves, key=lambda f: FAMILY_ORDER.index(f) if f in FAMILY_ORDER else 99):
            rows = curves[family]
            pf = [r[1] for r in rows]
            fid = [r[2] for r in rows]
            color = FAMILY_COLORS.get(family, "gray")
            ax.plot(pf, fid, color=color, lw=1.4, zorder=3, label=family)
            ticks = [r for r in rows if round(r[0] * 10, 9) == int(round(r[0] * 10))]
            ax.plot(
                [r[1] for r in ticks], [r[2] for r in ticks],
                linestyle="none", marker="|", color=color, markersize=7, zorder=3,
            )
    if spec.external_csv:
        ext = read_survey_csv(spec.external_csv)
        if ext:
            ax.plot(
                [p for p, _ in ext], [f for _, f in ext], linestyle="none",
                marker=".", color="black", markersize=5, zorder=5,
                label="external channels",
            )
    ax.set_xlim(*spec.xlim)
    ax.set_ylim(*spec.ylim)
    ax.set_xlabel("failure probability")
    ax.set_ylabel("infidelity")
    ax.set_title(f"channel survey, word budget index {spec.i_max}")
    ax.legend(loc="upper left", fontsize=8)
    fig.tight_layout()
    fig.savefig(spec.out_path, dpi=160)
    return fig


def render_noise_curves(csv_path: str, out_path: str, i_max: int | None = None):
    """One curve per noise family with its near-origin slope annotation.

    All four standard families must be present in the CSV when i_max is
    given (the full-figure mode); otherwise whatever families exist are
    drawn.  Returns the figure after saving; annotation values are exposed
    on `fig._slope_annotations` for testing.
    """
    curves = read_noise_curve_csv(csv_path)
    if i_max is not None:
        missing = [f for f in FAMILY_ORDER if f not in curves]
        if missing:
            raise ValueError(f"noise-curve CSV lacks families: {missing}")
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    annotations = {}
    for family in sorted(curves, key=lambda f: FAMILY_ORDER.index(f) if f in FAMILY_ORDER else 99):
        rows = curves[family]
        color = FAMILY_COLORS.get(family, "gray")
        slope = _slope_annotation(rows)
        label = family if slope is None else f"{family} (slope {slope:.4g})"
        ax.plot([r[1] for r in rows], [r[2] for r in rows], color=color, lw=1.6, label=label)
        if slope is not None:
            annotations[family] = slope
    ax.set_xlabel("failure probability")
    ax.set_ylabel("infidelity")
    title = "noise-model curves" if i_max is None else f"noise-model curves, index budget {i_max}"
    ax.set_title(title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path, dpi=160)
    fig._slope_annotations = annotations
    return fig
