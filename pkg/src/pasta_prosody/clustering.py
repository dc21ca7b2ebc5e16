"""Pattern/state quantization: k-means over shapes (DTW or Euclidean metric,
barycenter averaging for DTW centroids) and 1-D k-means over levels."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from .dtw import dtw_barycenter, dtw_distances_many_to_one
from .errors import EmptyMatrix, KTooLarge, LengthMismatch, ValidationError
from .patterns import PatternMatrix, WordPattern
from .pitch import NormalizationMode

MODEL_FILE_VERSION = 1


class Metric(Enum):
    DTW = "dtw"
    EUCLIDEAN = "euclidean"


@dataclass(frozen=True)
class PastaLabel:
    pattern_id: int
    state_id: int


@dataclass
class ClusterModel:
    barycenters: np.ndarray  # (k, n_f0), zero-mean rows
    state_centroids: np.ndarray  # (s,), ascending
    metric: Metric
    n_f0: int
    seed: int
    norm_mode: NormalizationMode
    # training diagnostics, not serialized
    inertia_history_: list[float] | None = field(default=None, compare=False, repr=False)
    state_inertia_history_: list[float] | None = field(default=None, compare=False, repr=False)
    labels_: list[PastaLabel] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        self.barycenters = np.asarray(self.barycenters, dtype=float)
        self.state_centroids = np.asarray(self.state_centroids, dtype=float)
        if self.barycenters.ndim != 2 or self.barycenters.shape[1] != self.n_f0:
            raise LengthMismatch("barycenters must have shape (k, n_f0)")
        if np.any(np.diff(self.state_centroids) <= 0):
            raise ValidationError("state centroids must be strictly ascending")
        if np.any(np.abs(self.barycenters.mean(axis=1)) > 1e-6):
            raise ValidationError("every barycenter must be zero-mean within 1e-6")

    @property
    def k(self) -> int:
        return self.barycenters.shape[0]

    @property
    def s(self) -> int:
        return self.state_centroids.shape[0]

    def to_dict(self) -> dict:
        return {
            "version": MODEL_FILE_VERSION,
            "metric": self.metric.value,
            "n_f0": self.n_f0,
            "k": self.k,
            "s": self.s,
            "seed": self.seed,
            "barycenters": [row.tolist() for row in self.barycenters],
            "state_centroids": self.state_centroids.tolist(),
            "norm_mode": self.norm_mode.value,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ClusterModel":
        return cls(
            barycenters=np.array(d["barycenters"], dtype=float),
            state_centroids=np.array(d["state_centroids"], dtype=float),
            metric=Metric(d["metric"]),
            n_f0=int(d["n_f0"]),
            seed=int(d["seed"]),
            norm_mode=NormalizationMode(d["norm_mode"]),
        )

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict()) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path) -> "ClusterModel":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def _distances_to(metric: Metric, X: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    """(n, k) distance matrix from every row to every centroid."""
    if metric == Metric.DTW:
        return np.stack([dtw_distances_many_to_one(X, c) for c in centroids], axis=1)
    diff = X[:, None, :] - centroids[None, :, :]
    return np.sqrt((diff * diff).sum(axis=2))


def _kmeans_pp_init(metric: Metric, X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """Standard D^2-weighted seeding under the supplied metric."""
    n = len(X)
    chosen = [int(rng.integers(n))]
    d2 = _distances_to(metric, X, X[chosen[0]][None, :])[:, 0] ** 2
    while len(chosen) < k:
        total = d2.sum()
        if total <= 0:
            # all remaining points coincide with a centroid: pick any unchosen
            remaining = [i for i in range(n) if i not in chosen]
            chosen.append(remaining[int(rng.integers(len(remaining)))])
        else:
            r = rng.random() * total
            idx = int(np.searchsorted(np.cumsum(d2), r, side="right"))
            idx = min(idx, n - 1)
            chosen.append(idx)
        new_d = _distances_to(metric, X, X[chosen[-1]][None, :])[:, 0] ** 2
        d2 = np.minimum(d2, new_d)
    return X[chosen].copy()


def _kmeans(metric: Metric, X: np.ndarray, k: int, rng, max_iter: int, update):
    """Generic Lloyd loop. Returns (centroids, labels, inertia_history);
    labels always correspond to the returned centroids."""
    centroids = _kmeans_pp_init(metric, X, k, rng)
    history: list[float] = []
    labels = None
    for _ in range(max_iter):
        dists = _distances_to(metric, X, centroids)
        new_labels = dists.argmin(axis=1)
        history.append(float((dists[np.arange(len(X)), new_labels] ** 2).sum()))
        if labels is not None and np.array_equal(new_labels, labels):
            labels = new_labels
            break
        labels = new_labels
        centroids = update(X, labels, centroids)
        # an empty cluster re-seeds from the point farthest from its centroid
        for j in range(k):
            if not np.any(labels == j):
                far = int(dists[np.arange(len(X)), labels].argmax())
                centroids[j] = X[far].copy()
    else:
        dists = _distances_to(metric, X, centroids)
        labels = dists.argmin(axis=1)
        history.append(float((dists[np.arange(len(X)), labels] ** 2).sum()))
    return centroids, labels, history


def train(
    matrix: PatternMatrix,
    k: int,
    s: int,
    metric: Metric = Metric.DTW,
    seed: int = 0,
    max_iter: int = 50,
    dba_iter: int = 10,
    norm_mode: NormalizationMode = NormalizationMode.PHRASE,
) -> ClusterModel:
    """Fit pattern barycenters and state centroids on a pattern matrix.

    Pattern clustering runs k-means under the chosen metric with D^2 seeding;
    DTW centroids are updated by barycenter averaging (dba_iter inner
    iterations) and re-centered to zero mean. State clustering is plain 1-D
    k-means over the levels; its centroids are reported in ascending order.
    """
    if len(matrix) == 0:
        raise EmptyMatrix("pattern matrix has no rows")
    if k < 1 or k > len(matrix):
        raise KTooLarge(f"k={k} not in [1, {len(matrix)}]")
    levels = matrix.levels()
    n_distinct = len(np.unique(levels))
    if s < 1 or s > n_distinct:
        raise KTooLarge(f"s={s} not in [1, {n_distinct}] (distinct levels)")

    rng = np.random.default_rng(seed)
    X = matrix.stacked()

    if metric == Metric.DTW:

        def update(X, labels, centroids):
            out = centroids.copy()
            for j in range(len(centroids)):
                members = X[labels == j]
                if len(members):
                    bc = dtw_barycenter(members, centroids[j], n_iter=dba_iter)
                    out[j] = bc - bc.mean()
            return out

    else:

        def update(X, labels, centroids):
            out = centroids.copy()
            for j in range(len(centroids)):
                members = X[labels == j]
                if len(members):
                    out[j] = members.mean(axis=0)
            return out

    barycenters, labels, history = _kmeans(metric, X, k, rng, max_iter, update)

    L = levels.reshape(-1, 1)

    def level_update(X, labels, centroids):
        out = centroids.copy()
        for j in range(len(centroids)):
            members = X[labels == j]
            if len(members):
                out[j] = members.mean(axis=0)
        return out

    state_centroids, _, state_history = _kmeans(
        Metric.EUCLIDEAN, L, s, rng, max_iter, level_update
    )
    state_centroids = np.sort(state_centroids[:, 0])

    model = ClusterModel(
        barycenters=barycenters,
        state_centroids=state_centroids,
        metric=metric,
        n_f0=matrix.n_f0,
        seed=seed,
        norm_mode=norm_mode,
    )
    model.inertia_history_ = history
    model.state_inertia_history_ = state_history
    model.labels_ = [assign(model, row) for row in matrix.rows]
    return model


def assign(model: ClusterModel, pattern: WordPattern) -> PastaLabel:
    """Nearest barycenter under the model metric, nearest state centroid by
    absolute level difference; ties resolve to the lower index."""
    if len(pattern) != model.n_f0:
        raise LengthMismatch(
            f"pattern length {len(pattern)} != model n_f0 {model.n_f0}"
        )
    pattern_dists = _distances_to(model.metric, pattern.values[None, :], model.barycenters)[0]
    state_dists = np.abs(model.state_centroids - pattern.level)
    return PastaLabel(
        pattern_id=int(pattern_dists.argmin()),
        state_id=int(state_dists.argmin()),
    )
