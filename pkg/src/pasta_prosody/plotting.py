"""Deterministic SVG rendering of models, splines and markups.

Figures follow the house style of the clustering plots: cluster members in
black, barycenters in red. Output bytes are reproducible: fixed hash salt,
no timestamps.
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .clustering import ClusterModel
from .momel import MomelSpline
from .patterns import PatternMatrix

_SVG_OPTS = {"format": "svg", "metadata": {"Date": None}}


def _configure():
    plt.rcParams["svg.hashsalt"] = "pasta"
    plt.rcParams["svg.fonttype"] = "path"


def _grid(n: int) -> tuple[int, int]:
    cols = math.ceil(math.sqrt(n))
    rows = math.ceil(n / cols)
    return rows, cols


def plot_barycenters(model: ClusterModel, out_path, matrix: PatternMatrix | None = None) -> Path:
    """One panel per cluster; members (if a matrix is given) in black,
    the barycenter in red."""
    _configure()
    rows, cols = _grid(model.k)
    fig, axes = plt.subplots(rows, cols, figsize=(3 * cols, 2.2 * rows), squeeze=False)
    x = np.arange(model.n_f0)
    members_by_cluster: dict[int, list[np.ndarray]] = {}
    if matrix is not None and model.labels_ is not None:
        for row, label in zip(matrix.rows, model.labels_):
            members_by_cluster.setdefault(label.pattern_id, []).append(row.values)
    for j in range(rows * cols):
        ax = axes[j // cols][j % cols]
        if j >= model.k:
            ax.axis("off")
            continue
        for member in members_by_cluster.get(j, []):
            ax.plot(x, member, color="black", alpha=0.25, linewidth=0.8)
        ax.plot(x, model.barycenters[j], color="red", linewidth=1.6)
        ax.set_title(str(j), fontsize=9)
        ax.tick_params(labelsize=7)
    fig.tight_layout()
    out_path = Path(out_path)
    fig.savefig(out_path, **_SVG_OPTS)
    plt.close(fig)
    return out_path


def plot_spline(spline: MomelSpline, out_path, contour=None) -> Path:
    """The curve over its domain with one glyph per anchor; optionally the
    raw voiced frames underneath."""
    _configure()
    fig, ax = plt.subplots(figsize=(7, 3))
    if contour is not None:
        voiced = [(f.time, f.f0) for f in contour.frames if f.voiced]
        if voiced:
            ax.plot(*zip(*voiced), ".", color="gray", markersize=2, label="f0")
    t0, t1 = spline.domain
    ts = np.linspace(t0, t1, 400)
    ax.plot(ts, spline.sample(ts), color="black", linewidth=1.2)
    ax.plot(
        [a.time for a in spline.anchors],
        [a.value for a in spline.anchors],
        "o",
        color="red",
        markersize=5,
    )
    ax.set_xlabel("time, s")
    fig.tight_layout()
    out_path = Path(out_path)
    fig.savefig(out_path, **_SVG_OPTS)
    plt.close(fig)
    return out_path


def plot_markup(records, model: ClusterModel, out_path) -> Path:
    """One panel per utterance: each word's barycenter shifted to its state
    centroid, drawn over the word span."""
    _configure()
    records = list(records)
    rows, cols = _grid(max(1, len(records)))
    fig, axes = plt.subplots(rows, cols, figsize=(4 * cols, 2.2 * rows), squeeze=False)
    for j in range(rows * cols):
        ax = axes[j // cols][j % cols]
        if j >= len(records):
            ax.axis("off")
            continue
        rec = records[j]
        for w in rec.words:
            xs = np.linspace(w.start, w.end, model.n_f0)
            ys = model.barycenters[w.pattern_id] + model.state_centroids[w.state_id]
            ax.plot(xs, ys, color="black", linewidth=1.0)
            ax.text((w.start + w.end) / 2, float(ys.max()) + 0.02, str(w.pattern_id),
                    ha="center", fontsize=7, color="red")
        ax.set_title(rec.utterance_id, fontsize=8)
        ax.tick_params(labelsize=7)
    fig.tight_layout()
    out_path = Path(out_path)
    fig.savefig(out_path, **_SVG_OPTS)
    plt.close(fig)
    return out_path
