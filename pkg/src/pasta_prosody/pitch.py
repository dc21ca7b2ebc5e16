"""F0 contour ingestion, validation, normalization and block-averaged resampling."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import (
    EmptyContour,
    InvalidFactor,
    MalformedRow,
    NonUniformStep,
    NoVoicedFrames,
    ZeroMean,
)

DEFAULT_FRAME_STEP = 0.01
DEFAULT_F0_MIN = 50.0
DEFAULT_F0_MAX = 600.0
STEP_TOL = 1e-6  # allowed jitter on inter-frame deltas, seconds


class F0Format(Enum):
    CSV = "csv"
    TWO_COLUMN_TEXT = "two_column_text"


class NormalizationMode(Enum):
    PHRASE = "phrase"
    SPEAKER = "speaker"


@dataclass(frozen=True)
class F0Frame:
    """One pitch frame. Unvoiced frames carry f0 == 0 and are excluded from
    every numeric computation downstream."""

    time: float
    f0: float
    voiced: bool


@dataclass(frozen=True)
class NormalizationScope:
    """Reference mean used to bring a contour onto the dimensionless scale."""

    mode: NormalizationMode
    mean_f0: float

    def __post_init__(self):
        if self.mean_f0 <= 0:
            raise ZeroMean(f"scope mean_f0 must be > 0, got {self.mean_f0}")


class F0Contour:
    """Uniformly sampled pitch track.

    Frame times must be strictly increasing with a constant step (within
    STEP_TOL). Voiced frames must lie inside [f0_min, f0_max]; out-of-range
    values are the loader's problem, not this constructor's.
    """

    __slots__ = ("frames", "frame_step", "f0_min", "f0_max")

    def __init__(self, frames, frame_step, f0_min=DEFAULT_F0_MIN, f0_max=DEFAULT_F0_MAX):
        frames = tuple(frames)
        if not frames:
            raise EmptyContour("contour has no frames")
        for prev, cur in zip(frames, frames[1:]):
            delta = cur.time - prev.time
            if abs(delta - frame_step) > STEP_TOL:
                raise NonUniformStep(
                    f"frame delta {delta:.6f}s at t={prev.time:.6f} deviates from "
                    f"declared step {frame_step}s"
                )
        for f in frames:
            if f.voiced and not (f0_min <= f.f0 <= f0_max):
                raise ValueError(
                    f"voiced frame at t={f.time} has f0={f.f0} outside [{f0_min}, {f0_max}]"
                )
        self.frames = frames
        self.frame_step = float(frame_step)
        self.f0_min = float(f0_min)
        self.f0_max = float(f0_max)

    def __len__(self):
        return len(self.frames)

    def __eq__(self, other):
        if not isinstance(other, F0Contour):
            return NotImplemented
        return (
            self.frames == other.frames
            and self.frame_step == other.frame_step
            and self.f0_min == other.f0_min
            and self.f0_max == other.f0_max
        )

    def times(self) -> np.ndarray:
        return np.array([f.time for f in self.frames])

    def values(self) -> np.ndarray:
        """f0 per frame, 0.0 where unvoiced."""
        return np.array([f.f0 if f.voiced else 0.0 for f in self.frames])

    def voiced_mask(self) -> np.ndarray:
        return np.array([f.voiced for f in self.frames], dtype=bool)

    @property
    def n_voiced(self) -> int:
        return sum(1 for f in self.frames if f.voiced)

    @property
    def t_start(self) -> float:
        return self.frames[0].time

    @property
    def t_end(self) -> float:
        return self.frames[-1].time


def _parse_rows(rows, frame_step, f0_min, f0_max):
    frames = []
    for lineno, cols in rows:
        if len(cols) not in (2, 3):
            raise MalformedRow(f"line {lineno}: expected 2 or 3 columns, got {len(cols)}")
        try:
            t = float(cols[0])
            f0 = float(cols[1])
            flag = int(float(cols[2])) if len(cols) == 3 else None
        except ValueError as exc:
            raise MalformedRow(f"line {lineno}: non-numeric field in {cols!r}") from exc
        voiced = f0 > 0 if flag is None else (flag != 0 and f0 > 0)
        if voiced and not (f0_min <= f0 <= f0_max):
            voiced = False  # outside the plausible pitch range: treat as a tracking error
        frames.append(F0Frame(time=t, f0=f0 if voiced else 0.0, voiced=voiced))
    if not frames:
        raise EmptyContour("no data rows")
    if frame_step is None:
        if len(frames) < 2:
            frame_step = DEFAULT_FRAME_STEP
        else:
            deltas = [b.time - a.time for a, b in zip(frames, frames[1:])]
            frame_step = float(np.median(deltas))
    return F0Contour(frames, frame_step, f0_min=f0_min, f0_max=f0_max)


def load_f0(path, fmt=F0Format.CSV, frame_step=None, f0_min=DEFAULT_F0_MIN, f0_max=DEFAULT_F0_MAX):
    """Read a pitch track from disk.

    CSV: columns time_s,f0_hz[,voiced], optional header. Two-column text:
    whitespace-separated "time_s f0_hz" lines where f0 == 0 means unvoiced.
    With frame_step=None the step is inferred from the median frame delta.
    """
    text = Path(path).read_text(encoding="utf-8")
    rows = []
    if fmt == F0Format.CSV:
        for lineno, cols in enumerate(csv.reader(io.StringIO(text)), start=1):
            if not cols or all(not c.strip() for c in cols):
                continue
            if lineno == 1 and not _is_number(cols[0]):
                continue  # header
            rows.append((lineno, [c.strip() for c in cols]))
    else:
        for lineno, line in enumerate(text.splitlines(), start=1):
            cols = line.split()
            if not cols:
                continue
            if lineno == 1 and not _is_number(cols[0]):
                continue
            rows.append((lineno, cols))
    return _parse_rows(rows, frame_step, f0_min, f0_max)


def save_f0(contour: F0Contour, path, fmt=F0Format.CSV) -> None:
    """Inverse of load_f0; floats are written with repr so a reload is bit-identical."""
    lines = []
    if fmt == F0Format.CSV:
        lines.append("time_s,f0_hz,voiced")
        for f in contour.frames:
            lines.append(f"{f.time!r},{f.f0!r},{1 if f.voiced else 0}")
    else:
        for f in contour.frames:
            lines.append(f"{f.time!r} {f.f0 if f.voiced else 0.0!r}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _is_number(s: str) -> bool:
    try:
        float(s)
        return True
    except ValueError:
        return False


def compute_mean_f0(contours) -> float:
    """Arithmetic mean of f0 over all voiced frames of all given contours."""
    total = 0.0
    count = 0
    for c in contours:
        for f in c.frames:
            if f.voiced:
                total += f.f0
                count += 1
    if count == 0:
        raise NoVoicedFrames("no voiced frames in any input contour")
    return total / count


def normalize_f0(contour: F0Contour, scope: NormalizationScope) -> F0Contour:
    """Divide every voiced value by scope.mean_f0 (the contour becomes
    dimensionless). Bounds are rescaled too so the voiced-range invariant
    keeps holding on the new scale."""
    if scope.mean_f0 <= 0:
        raise ZeroMean(f"scope mean_f0 must be > 0, got {scope.mean_f0}")
    m = scope.mean_f0
    frames = [
        F0Frame(f.time, f.f0 / m if f.voiced else 0.0, f.voiced) for f in contour.frames
    ]
    return F0Contour(frames, contour.frame_step, f0_min=contour.f0_min / m, f0_max=contour.f0_max / m)


def resample_with_lowpass(contour: F0Contour, factor: int) -> F0Contour:
    """Decimate by `factor` after block averaging.

    Every kept frame (one per block of `factor` input frames) takes the mean
    of the voiced frames in its block; unvoiced frames never leak into the
    averages, and a block whose leading frame is unvoiced stays unvoiced.
    """
    if not isinstance(factor, int) or factor < 1:
        raise InvalidFactor(f"factor must be a positive integer, got {factor}")
    if factor == 1:
        return contour
    frames = contour.frames
    out = []
    for start in range(0, len(frames), factor):
        block = frames[start : start + factor]
        head = block[0]
        if not head.voiced:
            out.append(F0Frame(head.time, 0.0, False))
            continue
        voiced_vals = []
        for f in block:
            if not f.voiced:
                break  # block averaging stops at the end of the voiced run
            voiced_vals.append(f.f0)
        out.append(F0Frame(head.time, float(np.mean(voiced_vals)), True))
    return F0Contour(
        out, contour.frame_step * factor, f0_min=contour.f0_min, f0_max=contour.f0_max
    )
