"""Matplotlib renderings: diagram scatter plots and generator overlays."""
from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .diagram_io import PersistenceDiagram
from .geometry import PointCloud, wrap_displacement


def plot_diagram(diagram: PersistenceDiagram, path, cap: float | None = None) -> None:
    """Scatter plot with the diagonal; multiplicities annotate their points."""
    if cap is None:
        cap = diagram.cap
    finite_max = max(
        (pt.death for pt in diagram.points if not math.isinf(pt.death)),
        default=0.0,
    )
    lim = max(cap, finite_max, max((pt.birth for pt in diagram.points), default=0.0))
    if lim <= 0:
        lim = 1.0
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.plot([0, lim], [0, lim], color="gray", lw=1)
    has_inf = any(math.isinf(pt.death) for pt in diagram.points)
    if has_inf:
        ax.axhline(lim, color="gray", lw=1, ls="--")
        ax.text(lim * 1.01, lim, "inf", fontsize=9, va="center")
    for pt in diagram.points:
        death = lim if math.isinf(pt.death) else pt.death
        ax.scatter(
            [pt.birth],
            [death],
            s=40 + 40 * (pt.multiplicity - 1),
            color="steelblue",
            edgecolors="black",
            zorder=3,
        )
        if pt.multiplicity > 1:
            ax.annotate(
                str(pt.multiplicity),
                (pt.birth, death),
                textcoords="offset points",
                xytext=(8, 6),
                fontsize=10,
            )
    ax.set_xlim(-lim * 0.05, lim * 1.1)
    ax.set_ylim(-lim * 0.05, lim * 1.1)
    ax.set_xlabel("birth")
    ax.set_ylabel("death")
    ax.set_title(f"degree {diagram.degree} persistence")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _draw_chain(ax, cloud: PointCloud, chain: dict, color: str) -> None:
    pts = np.asarray(cloud.points, dtype=float)
    wrap = cloud.metric.kind == "torus"
    periods = np.asarray(cloud.metric.periods, dtype=float) if wrap else None
    for t in sorted(chain):
        if len(t) != 2:
            continue
        a = pts[t[0]][:2]
        b = pts[t[1]][:2]
        if wrap:
            b = a + wrap_displacement(pts[t[1]][: len(periods)] - pts[t[0]][: len(periods)], periods)[:2]
        ax.plot([a[0], b[0]], [a[1], b[1]], color=color, lw=1.6, zorder=3)


def plot_generator_pair(
    domain_cloud: PointCloud, image_cloud: PointCloud, pair, path
) -> None:
    """Domain and image cycles of one generator, side by side.

    Clouds are drawn in their first two coordinates; torus edges use the
    minimal displacement, so they may poke past the fundamental domain.
    """
    fig, axes = plt.subplots(1, 2, figsize=(9, 4.5))
    for ax, cloud, chain, label in (
        (axes[0], domain_cloud, pair.domain_cycle, "domain cycle"),
        (axes[1], image_cloud, pair.image_cycle, "image cycle"),
    ):
        pts = np.asarray(cloud.points, dtype=float)
        ax.scatter(pts[:, 0], pts[:, 1], s=8, color="lightgray", zorder=2)
        _draw_chain(ax, cloud, chain, "crimson")
        ax.set_title(f"{label} (birth {pair.birth:.4g})")
        ax.set_aspect("equal")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
