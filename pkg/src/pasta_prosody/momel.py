"""Macromelodic quadratic-spline model: fit, evaluate, slice.

A spline is an ordered set of anchors (t_i, v_i). Between two anchors the
curve is a pair of parabolas with zero slope at both anchors, joined at the
temporal midpoint with value (v1+v2)/2 and matching slope, so the whole
curve is C1. Outside the anchor span the curve extends as a constant.
"""

from __future__ import annotations

import json
from bisect import bisect_right
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import EmptyInterval, NoAnchorsFound, TooFewVoicedFrames
from .pitch import F0Contour


@dataclass(frozen=True)
class MomelAnchor:
    time: float
    value: float

    def __post_init__(self):
        if self.value <= 0:
            raise ValueError(f"anchor value must be > 0, got {self.value}")


class MomelSpline:
    """Immutable piecewise-quadratic curve through anchors with zero slope
    at each anchor and constant extension outside the span."""

    __slots__ = ("anchors", "domain", "_times", "_values")

    def __init__(self, anchors, domain):
        anchors = tuple(anchors)
        if not anchors:
            raise ValueError("a spline needs at least one anchor")
        times = [a.time for a in anchors]
        if any(t2 <= t1 for t1, t2 in zip(times, times[1:])):
            raise ValueError("anchor times must be strictly increasing")
        t0, t1 = domain
        if t0 > times[0] or t1 < times[-1]:
            raise ValueError(
                f"anchors [{times[0]}, {times[-1]}] not contained in domain [{t0}, {t1}]"
            )
        self.anchors = anchors
        self.domain = (float(t0), float(t1))
        self._times = np.array(times)
        self._values = np.array([a.value for a in anchors])

    def __eq__(self, other):
        if not isinstance(other, MomelSpline):
            return NotImplemented
        return self.anchors == other.anchors and self.domain == other.domain

    def value_at(self, t: float) -> float:
        times, values = self._times, self._values
        if t <= times[0]:
            return float(values[0])
        if t >= times[-1]:
            return float(values[-1])
        k = bisect_right(times, t) - 1
        if times[k] == t:
            return float(values[k])
        t1, t2 = times[k], times[k + 1]
        f1, f2 = values[k], values[k + 1]
        tm = 0.5 * (t1 + t2)
        if t <= tm:
            r = (t - t1) / (t2 - t1)
            return float(f1 + 2.0 * (f2 - f1) * r * r)
        r = (t2 - t) / (t2 - t1)
        return float(f2 - 2.0 * (f2 - f1) * r * r)

    def sample(self, times) -> np.ndarray:
        return np.array([self.value_at(float(t)) for t in np.asarray(times, dtype=float)])

    def slice(self, t_st: float, t_end: float) -> "SplineSlice":
        return slice_spline(self, t_st, t_end)

    def to_dict(self) -> dict:
        return {
            "anchors": [{"t": a.time, "v": a.value} for a in self.anchors],
            "domain": [self.domain[0], self.domain[1]],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MomelSpline":
        anchors = [MomelAnchor(a["t"], a["v"]) for a in d["anchors"]]
        return cls(anchors, tuple(d["domain"]))

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict()) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path) -> "MomelSpline":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


class SplineSlice:
    """Restriction of a spline to [t_start, t_end]; evaluation delegates to
    the parent so slice values equal parent values exactly."""

    __slots__ = ("parent", "t_start", "t_end")

    def __init__(self, parent: MomelSpline, t_start: float, t_end: float):
        if t_start >= t_end:
            raise EmptyInterval(f"slice [{t_start}, {t_end}] is empty")
        self.parent = parent
        self.t_start = float(t_start)
        self.t_end = float(t_end)

    def value_at(self, t: float) -> float:
        return self.parent.value_at(t)

    def sample_even(self, n: int) -> np.ndarray:
        """Evaluate at n inclusive evenly spaced instants across the slice.

        Instants are computed as t_start + span * (j / (n-1)), which makes
        grids at n and 2n-1 points share instants bit-exactly.
        """
        span = self.t_end - self.t_start
        return np.array(
            [self.parent.value_at(self.t_start + span * (j / (n - 1))) for j in range(n)]
        )


def eval_spline(spline, t: float) -> float:
    return spline.value_at(t)


def slice_spline(spline: MomelSpline, t_st: float, t_end: float) -> SplineSlice:
    return SplineSlice(spline, t_st, t_end)


@dataclass(frozen=True)
class MomelFitParams:
    """Knobs of the two-pass anchor detector.

    window_a: width (s) of the centered least-squares fit window.
    max_rel_residual: points whose relative residual exceeds this are
        discarded and the window refit.
    window_b: trailing window (s) used by the reduction pass to decide
        partition boundaries.
    merge_gap: anchors closer than this (s) are merged by averaging.
    flat_eps: |quadratic coefficient| below which the window counts as flat
        and the fitted center value is used instead of the parabola vertex.
    """

    window_a: float = 0.30
    max_rel_residual: float = 0.05
    window_b: float = 0.20
    merge_gap: float = 0.05
    flat_eps: float = 1e-9
    # sigma floor (relative to the running mean) so that noise-free candidate
    # chains do not shatter into singleton partitions when sigma collapses
    sigma_floor_rel: float = 5e-3


def _window_candidate(t_center, times, values, params, f0_min, f0_max):
    """Least-squares parabola over the voiced frames of one centered window,
    with iterative outlier rejection. Returns (time, value) or None."""
    half = params.window_a / 2.0
    sel = (times >= t_center - half) & (times <= t_center + half)
    xs = times[sel] - t_center
    ys = values[sel]
    while True:
        if xs.size < 3:
            return None
        # y = a x^2 + b x + c in window-centered coordinates
        A = np.stack([xs * xs, xs, np.ones_like(xs)], axis=1)
        coef, *_ = np.linalg.lstsq(A, ys, rcond=None)
        a, b, c = coef
        pred = A @ coef
        rel = np.abs(ys - pred) / ys
        bad = rel > params.max_rel_residual
        if not bad.any():
            break
        xs, ys = xs[~bad], ys[~bad]
    if abs(a) < params.flat_eps:
        # near-zero curvature is only trustworthy when the window is truly
        # level; a steep straight stretch has no target of its own
        if abs(b) * half > params.max_rel_residual * max(abs(c), 1e-12):
            return None
        cand_t, cand_v = t_center, c
    else:
        xv = -b / (2.0 * a)
        if abs(xv) > half + 1e-9:
            return None  # vertex outside the window
        cand_t = t_center + xv
        cand_v = c - b * b / (4.0 * a)
    if not (f0_min <= cand_v <= f0_max):
        return None
    return float(cand_t), float(cand_v)


def _partition(cands, window_b, sigma_floor_rel):
    """Split the candidate sequence where a value strays more than one
    standard deviation from the running mean of the trailing window, or
    where the sequence has a time gap longer than the window itself."""
    parts = []
    cur = []
    for t, v in cands:
        if cur:
            recent = [cv for ct, cv in cur if ct > t - window_b]
            if not recent:
                parts.append(cur)
                cur = []
            else:
                mu = float(np.mean(recent))
                sigma = max(float(np.std(recent)), sigma_floor_rel * abs(mu))
                if abs(v - mu) > sigma:
                    parts.append(cur)
                    cur = []
        cur.append((t, v))
    if cur:
        parts.append(cur)
    return parts


def _collapse(part):
    """Average a partition after dropping >1-sigma outliers."""
    ts = np.array([t for t, _ in part])
    vs = np.array([v for _, v in part])
    if vs.size > 2:
        mu, sigma = vs.mean(), vs.std()
        keep = np.abs(vs - mu) <= sigma if sigma > 0 else np.ones_like(vs, dtype=bool)
        if keep.any():
            ts, vs = ts[keep], vs[keep]
    return float(ts.mean()), float(vs.mean())


def fit_momel(contour: F0Contour, params: MomelFitParams = MomelFitParams()) -> MomelSpline:
    """Detect anchors on a contour and return the spline through them.

    Pass 1 slides a centered window over every frame, fits a parabola to the
    voiced frames with iterative outlier rejection, and keeps the vertex as a
    candidate when it falls inside the window and the pitch bounds. Pass 2
    partitions the candidate sequence at running-mean breaks, averages each
    partition into one anchor, and merges anchors closer than merge_gap.
    Unvoiced frames never enter any fit, so the spline spans voicing gaps.
    """
    voiced = [(f.time, f.f0) for f in contour.frames if f.voiced]
    if len(voiced) < 3:
        raise TooFewVoicedFrames(f"need >= 3 voiced frames, got {len(voiced)}")
    vtimes = np.array([t for t, _ in voiced])
    vvals = np.array([v for _, v in voiced])

    # only frames with a complete centered window make trustworthy centers;
    # clipped edge windows bias the vertex toward the contour boundary
    half = params.window_a / 2.0
    centers = [
        f.time
        for f in contour.frames
        if contour.t_start + half - 1e-9 <= f.time <= contour.t_end - half + 1e-9
    ]
    if not centers:
        centers = [f.time for f in contour.frames]

    cands = []
    for t_center in centers:
        cand = _window_candidate(t_center, vtimes, vvals, params, contour.f0_min, contour.f0_max)
        if cand is not None:
            cands.append(cand)
    if not cands:
        raise NoAnchorsFound("every candidate was rejected")

    parts = _partition(cands, params.window_b, params.sigma_floor_rel)
    anchors = [(_collapse(p), len(p)) for p in parts]
    anchors.sort(key=lambda a: a[0][0])

    merged = [(anchors[0][0][0], anchors[0][0][1], anchors[0][1])]
    for (t, v), w in anchors[1:]:
        pt, pv, pw = merged[-1]
        if t - pt < params.merge_gap:
            tot = pw + w
            merged[-1] = ((pw * pt + w * t) / tot, (pw * pv + w * v) / tot, tot)
        else:
            merged.append((t, v, w))

    t0, t1 = contour.t_start, contour.t_end
    out = [MomelAnchor(min(max(t, t0), t1), v) for t, v, _ in merged]
    dedup = [out[0]]
    for a in out[1:]:
        if a.time > dedup[-1].time:
            dedup.append(a)
    return MomelSpline(dedup, (t0, t1))
