"""Per-word pattern/state decomposition of a fitted spline.

Each word's slice is sampled on a fixed-size grid, brought onto the
dimensionless scale, and split into a scalar `level` (the mean) plus a
zero-mean shape vector. Level feeds state clustering, shape feeds pattern
clustering.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .alignment import UtteranceAlignment
from .errors import TimeBaseMismatch, ValidationError, ZeroMean
from .momel import MomelSpline, slice_spline
from .pitch import NormalizationScope

DEFAULT_N_F0 = 32
TIME_BASE_SLACK = 0.05  # seconds a word may stick out of the spline domain


@dataclass
class WordPattern:
    values: np.ndarray
    level: float
    word_index: int
    utterance_id: str

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 1:
            raise ValidationError("pattern values must be a 1-D vector")
        if abs(float(self.values.mean())) > 1e-9:
            raise ValidationError(
                f"pattern values must be zero-mean, got mean {self.values.mean():.3e}"
            )
        if self.level <= 0:
            raise ValidationError(f"pattern level must be > 0, got {self.level}")
        self.values.flags.writeable = False

    def __len__(self):
        return len(self.values)

    def to_dict(self) -> dict:
        return {
            "utt": self.utterance_id,
            "i": self.word_index,
            "level": self.level,
            "values": self.values.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "WordPattern":
        return cls(
            values=np.array(d["values"], dtype=float),
            level=float(d["level"]),
            word_index=int(d["i"]),
            utterance_id=str(d["utt"]),
        )


@dataclass
class PatternMatrix:
    rows: list[WordPattern]
    n_f0: int

    def __post_init__(self):
        for r in self.rows:
            if len(r) != self.n_f0:
                raise ValidationError(
                    f"row for {r.utterance_id}#{r.word_index} has length {len(r)}, "
                    f"expected {self.n_f0}"
                )

    def __len__(self):
        return len(self.rows)

    def stacked(self) -> np.ndarray:
        return np.stack([r.values for r in self.rows])

    def levels(self) -> np.ndarray:
        return np.array([r.level for r in self.rows])

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for r in self.rows:
                fh.write(json.dumps(r.to_dict()) + "\n")

    @classmethod
    def load(cls, path) -> "PatternMatrix":
        rows = []
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            if line.strip():
                rows.append(WordPattern.from_dict(json.loads(line)))
        if not rows:
            raise ValidationError(f"{path}: empty pattern matrix")
        return cls(rows=rows, n_f0=len(rows[0]))


def extract_patterns(
    spline: MomelSpline,
    alignment: UtteranceAlignment,
    scope: NormalizationScope,
    n_f0: int = DEFAULT_N_F0,
    utterance_id: str = "",
) -> list[WordPattern]:
    """One pattern per word: sample the word's slice at n_f0 inclusive evenly
    spaced instants, divide by the scope mean, carry the sample mean as
    `level` and the centered residual as the shape."""
    if n_f0 < 4:
        raise ValidationError(f"n_f0 must be >= 4, got {n_f0}")
    if scope.mean_f0 <= 0:
        raise ZeroMean(f"scope mean_f0 must be > 0, got {scope.mean_f0}")
    d0, d1 = spline.domain
    out = []
    for i, w in enumerate(alignment.words):
        if w.start < d0 - TIME_BASE_SLACK or w.end > d1 + TIME_BASE_SLACK:
            raise TimeBaseMismatch(
                f"word {w.text!r} [{w.start}, {w.end}] outside the spline domain "
                f"[{d0}, {d1}] by more than {TIME_BASE_SLACK}s"
            )
        samples = slice_spline(spline, w.start, w.end).sample_even(n_f0) / scope.mean_f0
        level = float(samples.mean())
        out.append(
            WordPattern(
                values=samples - level,
                level=level,
                word_index=i,
                utterance_id=utterance_id,
            )
        )
    return out
