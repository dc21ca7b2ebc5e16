"""Dynamic time warping with squared local cost, plus barycenter averaging."""

from __future__ import annotations

import math

import numpy as np

from .errors import EmptyInput


def _accumulate(a: np.ndarray, b: np.ndarray, band: int | None = None) -> np.ndarray:
    """Accumulated-cost matrix for symmetric match/insert/delete steps."""
    n, m = len(a), len(b)
    D = np.full((n, m), np.inf)
    cost0 = (a[0] - b) ** 2
    D[0, 0] = cost0[0]
    j_hi = m if band is None else min(m, band + 1)
    np.cumsum(cost0[:j_hi], out=D[0, :j_hi])
    for i in range(1, n):
        lo = 0 if band is None else max(0, i - band)
        hi = m if band is None else min(m, i + band + 1)
        row_cost = (a[i] - b) ** 2
        prev = D[i - 1]
        left = np.inf
        for j in range(lo, hi):
            best = prev[j]
            if j > lo or lo > 0:
                diag = prev[j - 1] if j > 0 else np.inf
                if diag < best:
                    best = diag
            if left < best:
                best = left
            left = row_cost[j] + best
            D[i, j] = left
    return D


def dtw_distance(a, b, band: int | None = None) -> float:
    """Square root of the optimal accumulated squared-difference cost over
    all monotone alignment paths (full window unless a Sakoe-Chiba band
    half-width is given)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size == 0 or b.size == 0:
        raise EmptyInput("dtw inputs must be non-empty")
    D = _accumulate(a, b, band)
    return math.sqrt(D[-1, -1])


def dtw_distances_many_to_one(X, b, band: int | None = None) -> np.ndarray:
    """dtw_distance(X[i], b) for every row of X in one pass.

    Runs the scalar recurrence with the comparison/addition order unchanged,
    vectorized across rows, so results match the pairwise function bit for
    bit (including exact ties constructed by symmetry)."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    b = np.asarray(b, dtype=float)
    if X.shape[1] == 0 or b.size == 0:
        raise EmptyInput("dtw inputs must be non-empty")
    if band is not None:
        return np.array([dtw_distance(row, b, band) for row in X])
    n, m = X.shape[1], len(b)
    prev = np.cumsum((X[:, 0][:, None] - b[None, :]) ** 2, axis=1)
    cur = np.empty_like(prev)
    for i in range(1, n):
        cost = (X[:, i][:, None] - b[None, :]) ** 2
        cur[:, 0] = cost[:, 0] + prev[:, 0]
        for j in range(1, m):
            best = np.minimum(np.minimum(prev[:, j - 1], prev[:, j]), cur[:, j - 1])
            np.add(cost[:, j], best, out=cur[:, j])
        prev, cur = cur, prev
    return np.sqrt(prev[:, -1])


def dtw_path(a, b, band: int | None = None) -> tuple[float, list[tuple[int, int]]]:
    """Distance plus one optimal path, backtracked with a fixed preference
    (diagonal, then up, then left) so results are deterministic."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size == 0 or b.size == 0:
        raise EmptyInput("dtw inputs must be non-empty")
    D = _accumulate(a, b, band)
    i, j = len(a) - 1, len(b) - 1
    path = [(i, j)]
    while i > 0 or j > 0:
        if i == 0:
            j -= 1
        elif j == 0:
            i -= 1
        else:
            diag, up, left = D[i - 1, j - 1], D[i - 1, j], D[i, j - 1]
            if diag <= up and diag <= left:
                i -= 1
                j -= 1
            elif up <= left:
                i -= 1
            else:
                j -= 1
        path.append((i, j))
    path.reverse()
    return math.sqrt(D[-1, -1]), path


def dtw_barycenter(sequences, init: np.ndarray, n_iter: int = 10) -> np.ndarray:
    """Barycenter averaging: repeatedly align every member to the current
    center and replace each center element by the mean of the member values
    its index attracted. Non-increasing in the sum of squared distances."""
    center = np.asarray(init, dtype=float).copy()
    seqs = [np.asarray(s, dtype=float) for s in sequences]
    if not seqs:
        raise EmptyInput("barycenter needs at least one sequence")
    for _ in range(n_iter):
        sums = np.zeros_like(center)
        counts = np.zeros(len(center))
        for s in seqs:
            _, path = dtw_path(s, center)
            for si, ci in path:
                sums[ci] += s[si]
                counts[ci] += 1
        updated = np.where(counts > 0, sums / np.maximum(counts, 1), center)
        if np.array_equal(updated, center):
            break
        center = updated
    return center
