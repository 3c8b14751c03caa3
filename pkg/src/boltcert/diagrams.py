"""Figure emission: bolt diagrams and residual charts rendered to files.

Uses matplotlib's file backends only; the output format follows the file
extension (SVG for the CLI defaults).
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .bolts import Bolt, default_tolerance, extremal_point_sets, is_closed
from .errors import InputFormatError
from .space import FunctionOnX, TwoAlgebraSpace, uniform_norm


def save_bolt_diagram(
    space: TwoAlgebraSpace,
    residual: FunctionOnX | None,
    bolt: Bolt | None,
    path: str,
    tol: float | None = None,
) -> None:
    """Scatter the points at their coordinates and draw the bolt segments.

    Points in the positive/negative extremal set of the residual are marked;
    the wrap-around segment of a closed bolt is dashed.
    """
    if space.coords is None:
        raise InputFormatError(
            "space carries no coordinates; cannot draw a diagram", field="coords"
        )
    xs, ys = space.coords[:, 0], space.coords[:, 1]
    fig, ax = plt.subplots(figsize=(6, 6))

    plus: frozenset[int] = frozenset()
    minus: frozenset[int] = frozenset()
    if residual is not None:
        if tol is None:
            tol = default_tolerance(uniform_norm(residual))
        plus, minus = extremal_point_sets(residual, tol)

    rest = [i for i in range(space.n_points) if i not in plus and i not in minus]
    ax.scatter(xs[rest], ys[rest], c="0.7", s=40, zorder=2, label="points")
    if plus:
        idx = sorted(plus)
        ax.scatter(xs[idx], ys[idx], c="tab:red", marker="^", s=90, zorder=3,
                   label="residual at +norm")
    if minus:
        idx = sorted(minus)
        ax.scatter(xs[idx], ys[idx], c="tab:blue", marker="v", s=90, zorder=3,
                   label="residual at -norm")

    if bolt is not None:
        pts = list(bolt.points)
        for a, b in zip(pts[:-1], pts[1:]):
            ax.plot([xs[a], xs[b]], [ys[a], ys[b]], c="black", lw=1.6, zorder=4)
        if is_closed(space, bolt):
            a, b = pts[-1], pts[0]
            ax.plot([xs[a], xs[b]], [ys[a], ys[b]], c="black", lw=1.6,
                    ls="--", zorder=4)
        start = pts[0]
        ax.annotate("start", (xs[start], ys[start]),
                    textcoords="offset points", xytext=(6, 6), fontsize=9)

    for i in range(space.n_points):
        ax.annotate(space.point_name(i), (xs[i], ys[i]),
                    textcoords="offset points", xytext=(4, -10), fontsize=8,
                    color="0.4")
    ax.set_aspect("equal", adjustable="datalim")
    ax.margins(0.15)
    ax.legend(loc="upper left", fontsize=8)
    ax.set_title("closed extremal bolt" if bolt is not None else "extremal points")
    fig.savefig(path, bbox_inches="tight")
    plt.close(fig)


def save_residual_diagram(
    space: TwoAlgebraSpace, residual: FunctionOnX, path: str
) -> None:
    """Residual per point with the ±norm envelope.

    Product grids are shown as a heatmap; other spaces as a bar chart.
    """
    r = residual.values
    norm = uniform_norm(residual)
    is_grid = (
        space.n_points == space.n_s * space.n_p
        and np.array_equal(
            space.s_class + space.n_s * space.p_class, np.arange(space.n_points)
        )
    )
    if is_grid and space.n_s > 1 and space.n_p > 1:
        fig, ax = plt.subplots(figsize=(6, 5))
        mat = r.reshape(space.n_p, space.n_s)
        vmax = norm if norm > 0 else 1.0
        im = ax.imshow(mat, cmap="RdBu_r", vmin=-vmax, vmax=vmax, origin="lower")
        fig.colorbar(im, ax=ax, label="residual")
        ax.set_xlabel("s-class (column)")
        ax.set_ylabel("p-class (row)")
    else:
        fig, ax = plt.subplots(figsize=(7, 4))
        ax.bar(np.arange(r.shape[0]), r, color="tab:gray")
        if norm > 0:
            ax.axhline(norm, color="tab:red", lw=1, ls="--", label="+norm")
            ax.axhline(-norm, color="tab:blue", lw=1, ls="--", label="-norm")
            ax.legend(fontsize=8)
        ax.set_xlabel("point index")
        ax.set_ylabel("residual")
    ax.set_title(f"residual (uniform norm {norm:.6g})")
    fig.savefig(path, bbox_inches="tight")
    plt.close(fig)


def save_error_history_diagram(history, path: str) -> None:
    """Per-sweep uniform error of the alternating method on a log scale."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.semilogy(np.arange(len(history)), np.maximum(history, 1e-18), marker=".")
    ax.set_xlabel("sweep")
    ax.set_ylabel("uniform error")
    ax.set_title("alternating-sweep error history")
    fig.savefig(path, bbox_inches="tight")
    plt.close(fig)
