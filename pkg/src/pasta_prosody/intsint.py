"""Symbolic intonation layer: tone decoding/encoding on the normalized scale,
pitch-accent expansion over a pseudo-timeline, and rule-based markup
synthesis through the trained cluster model."""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .alignment import UtteranceAlignment, WordInterval
from .clustering import ClusterModel, PastaLabel, assign
from .errors import EmptyInput, FirstMarkRelative, MissingStress, UnorderedMarks, ValidationError
from .momel import MomelAnchor, MomelSpline
from .patterns import extract_patterns
from .pitch import NormalizationMode, NormalizationScope

DEFAULT_MEAN_PHONE_S = 0.08


class Tone(Enum):
    T = "T"  # top
    M = "M"  # mid
    B = "B"  # bottom
    H = "H"  # higher (half-step toward top)
    L = "L"  # lower (half-step toward bottom)
    U = "U"  # upstep (quarter-step toward top)
    D = "D"  # downstep (quarter-step toward bottom)
    S = "S"  # same


ABSOLUTE_TONES = (Tone.T, Tone.M, Tone.B)
# fixed precedence for nearest-target ties
TONE_PRECEDENCE = (Tone.T, Tone.M, Tone.B, Tone.H, Tone.L, Tone.U, Tone.D, Tone.S)


class PitchAccent(Enum):
    HSTAR_L = "H*L"
    HSTAR_H = "H*H"
    HSTAR_M = "H*M"
    LSTAR = "L*"
    HLSTAR = "HL*"
    LSTAR_H = "L*H"


class CommunicativeType(Enum):
    STATEMENT = "statement"
    YES_NO_QUESTION = "yes_no_question"
    EXCLAMATION = "exclamation"
    CONTINUATIVE = "continuative"


# most common accent per communicative type; the falling L*, rising-falling
# H*L and HL* triples are normative, the continuative rise is the natural
# completion of the accent inventory
ACCENT_FOR_TYPE = {
    CommunicativeType.STATEMENT: PitchAccent.LSTAR,
    CommunicativeType.YES_NO_QUESTION: PitchAccent.HSTAR_L,
    CommunicativeType.EXCLAMATION: PitchAccent.HLSTAR,
    CommunicativeType.CONTINUATIVE: PitchAccent.LSTAR_H,
}


@dataclass(frozen=True)
class IntsintMark:
    symbol: Tone
    time: float

    def to_dict(self) -> dict:
        return {"sym": self.symbol.value, "t": self.time}

    @classmethod
    def from_dict(cls, d: dict) -> "IntsintMark":
        return cls(symbol=Tone(d["sym"]), time=float(d["t"]))


@dataclass(frozen=True)
class IntsintParams:
    key: float = 1.0
    range: float = 2.0 / 3.0

    def __post_init__(self):
        if self.key <= 0:
            raise ValidationError(f"key must be > 0, got {self.key}")
        if not (0 < self.range < 2 * self.key):
            raise ValidationError(f"range must lie in (0, 2*key), got {self.range}")

    @property
    def top(self) -> float:
        return self.key + self.range / 2.0

    @property
    def bottom(self) -> float:
        return self.key - self.range / 2.0


@dataclass(frozen=True)
class ToRIAccent:
    accent: PitchAccent
    nucleus_word_index: int


@dataclass(frozen=True)
class TimelineWord:
    word_index: int
    phone_count: int
    start: float
    end: float
    stressed_vowel_time: float | None = None


@dataclass(frozen=True)
class PseudoTimeline:
    words: tuple[TimelineWord, ...]
    mean_phone_s: float = DEFAULT_MEAN_PHONE_S

    def __post_init__(self):
        if not self.words:
            raise EmptyInput("timeline has no words")
        for w in self.words:
            expected = w.phone_count * self.mean_phone_s
            if abs((w.end - w.start) - expected) > 1e-9:
                raise ValidationError(
                    f"word {w.word_index}: span {w.end - w.start:.6f}s != "
                    f"phone_count * mean_phone_s = {expected:.6f}s"
                )
        for a, b in zip(self.words, self.words[1:]):
            if abs(b.start - a.end) > 1e-9:
                raise ValidationError("timeline word spans must be contiguous")

    @property
    def t_start(self) -> float:
        return self.words[0].start

    @property
    def t_end(self) -> float:
        return self.words[-1].end


def build_pseudo_timeline(
    phone_counts,
    stressed_phone_indices=None,
    mean_phone_s: float = DEFAULT_MEAN_PHONE_S,
) -> PseudoTimeline:
    """Lay words out back to back, each phone_count * mean_phone_s long.
    The stressed vowel sits at the center of its phone slot; words without a
    known stress position get the word midpoint."""
    words = []
    t = 0.0
    for i, count in enumerate(phone_counts):
        count = max(1, int(count))
        end = t + count * mean_phone_s
        svt = None
        if stressed_phone_indices is not None and stressed_phone_indices[i] is not None:
            k = min(max(0, int(stressed_phone_indices[i])), count - 1)
            svt = t + (k + 0.5) * mean_phone_s
        words.append(
            TimelineWord(
                word_index=i, phone_count=count, start=t, end=end, stressed_vowel_time=svt
            )
        )
        t = end
    return PseudoTimeline(words=tuple(words), mean_phone_s=mean_phone_s)


def save_marks(marks, path) -> None:
    """Write a tone sequence as JSON: [{"sym": "T", "t": 0.24}, ...]."""
    Path(path).write_text(
        json.dumps([m.to_dict() for m in marks]) + "\n", encoding="utf-8"
    )


def load_marks(path) -> list[IntsintMark]:
    return [IntsintMark.from_dict(d) for d in json.loads(Path(path).read_text(encoding="utf-8"))]


def _target(symbol: Tone, prev: float, params: IntsintParams) -> float:
    top, bottom = params.top, params.bottom
    if symbol == Tone.T:
        value = top
    elif symbol == Tone.M:
        value = params.key
    elif symbol == Tone.B:
        value = bottom
    elif symbol == Tone.H:
        value = (prev + top) / 2.0
    elif symbol == Tone.L:
        value = (prev + bottom) / 2.0
    elif symbol == Tone.U:
        value = prev + (top - prev) / 4.0
    elif symbol == Tone.D:
        value = prev - (prev - bottom) / 4.0
    else:  # S
        value = prev
    return min(max(value, bottom), top)


def decode_intsint(marks, params: IntsintParams = IntsintParams()) -> list[MomelAnchor]:
    """Turn a tone sequence into anchors on the normalized scale, running the
    recursive target computation from the key."""
    marks = list(marks)
    if not marks:
        raise EmptyInput("no marks to decode")
    if marks[0].symbol not in ABSOLUTE_TONES:
        raise FirstMarkRelative(
            f"first mark must be absolute (T, M or B), got {marks[0].symbol.value}"
        )
    for a, b in zip(marks, marks[1:]):
        if b.time <= a.time:
            raise UnorderedMarks(f"mark times must be strictly increasing at t={b.time}")
    prev = params.key
    anchors = []
    for mark in marks:
        prev = _target(mark.symbol, prev, params)
        anchors.append(MomelAnchor(time=mark.time, value=prev))
    return anchors


def encode_intsint(anchors, params: IntsintParams = IntsintParams()) -> list[IntsintMark]:
    """Greedy inverse coder: each anchor takes the symbol whose target (given
    the running previous target) is nearest its value; the first symbol is
    restricted to the absolute tones. Ties follow TONE_PRECEDENCE."""
    anchors = list(anchors)
    if not anchors:
        raise EmptyInput("no anchors to encode")
    marks = []
    prev = params.key
    for i, anchor in enumerate(anchors):
        pool = ABSOLUTE_TONES if i == 0 else TONE_PRECEDENCE
        best_sym = None
        best_err = None
        best_target = None
        for sym in pool:
            t = _target(sym, prev, params)
            err = abs(anchor.value - t)
            if best_err is None or err < best_err:
                best_sym, best_err, best_target = sym, err, t
        marks.append(IntsintMark(symbol=best_sym, time=anchor.time))
        prev = best_target
    return marks


def tori_to_intsint(
    accent: ToRIAccent,
    timeline: PseudoTimeline,
    initial_tone: Tone = Tone.M,
    exclaim_to_bottom: bool = False,
) -> list[IntsintMark]:
    """Expand one nuclear pitch accent into a full tone sequence.

    The initial absolute tone opens the phrase; pre-nucleus words hold their
    level (S) on the stressed vowel; the nucleus realizes the accent; every
    post-nucleus word drops to B on its stressed vowel. When the nucleus has
    no room after the stress, the accent's trailing tone is dropped.
    exclaim_to_bottom realizes the falling exclamation as T..B instead of T..L.
    """
    if initial_tone not in ABSOLUTE_TONES:
        raise ValidationError("initial tone must be T, M or B")
    nucleus = None
    for w in timeline.words:
        if w.word_index == accent.nucleus_word_index:
            nucleus = w
            break
    if nucleus is None:
        raise ValidationError(f"no word {accent.nucleus_word_index} in the timeline")
    if nucleus.stressed_vowel_time is None:
        raise MissingStress(f"nucleus word {nucleus.word_index} has no stressed vowel time")

    phone = timeline.mean_phone_s
    svt = nucleus.stressed_vowel_time
    has_post = (nucleus.end - svt) >= 2 * phone
    post_t = (svt + nucleus.end) / 2.0
    pre_t = max(nucleus.start, svt - phone)
    if pre_t <= timeline.t_start:
        pre_t = (timeline.t_start + svt) / 2.0

    low = Tone.B if exclaim_to_bottom else Tone.L
    table = {
        PitchAccent.LSTAR: [(svt, Tone.L)],
        PitchAccent.HSTAR_L: [(svt, Tone.T)] + ([(post_t, Tone.L)] if has_post else []),
        PitchAccent.HSTAR_H: [(svt, Tone.T)] + ([(post_t, Tone.S)] if has_post else []),
        PitchAccent.HSTAR_M: [(svt, Tone.T)] + ([(post_t, Tone.M)] if has_post else []),
        PitchAccent.HLSTAR: [(pre_t, Tone.T), (svt, low)],
        PitchAccent.LSTAR_H: [(svt, Tone.L)] + ([(post_t, Tone.H)] if has_post else []),
    }
    events: list[tuple[float, Tone]] = [(timeline.t_start, initial_tone)]
    for w in timeline.words:
        if w.word_index == accent.nucleus_word_index:
            events.extend(table[accent.accent])
        else:
            t = w.stressed_vowel_time
            if t is None:
                t = (w.start + w.end) / 2.0
            if w.word_index < accent.nucleus_word_index:
                events.append((t, Tone.S))
            else:
                events.append((t, Tone.B))
    events.sort(key=lambda e: e[0])
    marks = []
    last_t = None
    for t, sym in events:
        if last_t is not None and t <= last_t:
            t = last_t + 1e-6  # keep times strictly increasing for decoding
        marks.append(IntsintMark(symbol=sym, time=t))
        last_t = t
    return marks


def synthesize_markup(
    marks,
    timeline: PseudoTimeline,
    model: ClusterModel,
    params: IntsintParams = IntsintParams(),
) -> list[PastaLabel]:
    """Rule-based synthesis: decode the tones to normalized anchors, span a
    spline over the timeline, slice it per word, and label each word with
    the nearest pattern/state pair of the model."""
    anchors = decode_intsint(marks, params)
    d0 = min(timeline.t_start, anchors[0].time)
    d1 = max(timeline.t_end, anchors[-1].time)
    spline = MomelSpline(anchors, (d0, d1))
    words = tuple(
        WordInterval(text=f"w{w.word_index}", start=w.start, end=w.end)
        for w in timeline.words
    )
    alignment = UtteranceAlignment(words=words)
    scope = NormalizationScope(NormalizationMode.PHRASE, 1.0)
    patterns = extract_patterns(spline, alignment, scope, n_f0=model.n_f0)
    return [assign(model, p) for p in patterns]
