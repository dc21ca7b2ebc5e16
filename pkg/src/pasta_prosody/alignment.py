"""Word- and phone-level time alignments from external aligner output."""

from __future__ import annotations

import json
import re
import unicodedata
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .errors import EmptyAlignment, OverlappingWords, ParseError

TILE_TOL = 1e-4  # seconds; slack for phone tiling and word ordering checks


class AlignmentFormat(Enum):
    WORD_JSON = "word_json"
    TEXTGRID = "textgrid"


def _is_punctuation(token: str) -> bool:
    stripped = token.strip()
    if not stripped:
        return True
    return all(unicodedata.category(ch).startswith("P") for ch in stripped)


@dataclass(frozen=True)
class WordInterval:
    text: str
    start: float
    end: float
    phones: tuple[tuple[str, float, float], ...] | None = None
    stressed_vowel_time: float | None = None

    def __post_init__(self):
        if self.start >= self.end:
            raise ParseError(f"word {self.text!r}: start {self.start} >= end {self.end}")
        if self.phones is not None:
            prev_end = self.start
            for label, p0, p1 in self.phones:
                if abs(p0 - prev_end) > TILE_TOL or p1 <= p0:
                    raise ParseError(f"word {self.text!r}: phone {label!r} breaks the tiling")
                prev_end = p1
            if abs(prev_end - self.end) > TILE_TOL:
                raise ParseError(f"word {self.text!r}: phones do not tile the interval")
        if self.stressed_vowel_time is not None and not (
            self.start <= self.stressed_vowel_time <= self.end
        ):
            raise ParseError(
                f"word {self.text!r}: stressed_vowel_time {self.stressed_vowel_time} "
                f"outside [{self.start}, {self.end}]"
            )

    @property
    def duration(self) -> float:
        return self.end - self.start


@dataclass(frozen=True)
class UtteranceAlignment:
    words: tuple[WordInterval, ...]
    text: str = ""

    def __post_init__(self):
        if not self.words:
            raise EmptyAlignment("alignment has no words")
        for a, b in zip(self.words, self.words[1:]):
            if b.start < a.end - TILE_TOL:
                raise OverlappingWords(
                    f"{a.text!r} [{a.start}, {a.end}] overlaps {b.text!r} [{b.start}, {b.end}]"
                )

    @property
    def t_start(self) -> float:
        return self.words[0].start

    @property
    def t_end(self) -> float:
        return self.words[-1].end


def load_alignment(path, fmt: AlignmentFormat | None = None) -> UtteranceAlignment:
    """Parse an alignment file. With fmt=None the format is guessed from the
    extension (.json -> word JSON, .TextGrid/.textgrid -> Praat TextGrid)."""
    path = Path(path)
    if fmt is None:
        fmt = (
            AlignmentFormat.WORD_JSON
            if path.suffix.lower() == ".json"
            else AlignmentFormat.TEXTGRID
        )
    text = path.read_text(encoding="utf-8")
    if fmt == AlignmentFormat.WORD_JSON:
        return parse_word_json(text)
    return parse_textgrid(text)


def parse_word_json(text: str) -> UtteranceAlignment:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "words" not in doc:
        raise ParseError('expected an object with a "words" array')
    words = []
    for i, w in enumerate(doc["words"]):
        try:
            token = w["word"]
            start = float(w["start"])
            end = float(w["end"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"word #{i}: {exc}") from exc
        if _is_punctuation(token):
            continue
        phones = None
        if w.get("phones"):
            phones = tuple((str(p[0]), float(p[1]), float(p[2])) for p in w["phones"])
        svt = w.get("stressed_vowel_time")
        words.append(
            WordInterval(
                text=token,
                start=start,
                end=end,
                phones=phones,
                stressed_vowel_time=float(svt) if svt is not None else None,
            )
        )
    return UtteranceAlignment(words=tuple(words), text=doc.get("text", ""))


# -- Praat TextGrid ----------------------------------------------------------

_SKIP_LINE = re.compile(r"^\s*(item|intervals|points)\s*\[\d+\]\s*:?\s*$")
_QUOTED = re.compile(r'"((?:[^"]|"")*)"')
_NUMBER = re.compile(r"-?\d+(?:\.\d+)?(?:[eE][-+]?\d+)?")


def _textgrid_tokens(text: str):
    """Flatten a long- or short-format TextGrid into its value stream:
    quoted strings and bare numbers, in file order."""
    tokens = []
    for line in text.splitlines():
        if _SKIP_LINE.match(line):
            continue
        pos = 0
        for m in _QUOTED.finditer(line):
            for num in _NUMBER.finditer(line[pos : m.start()]):
                tokens.append(("num", float(num.group())))
            tokens.append(("str", m.group(1).replace('""', '"')))
            pos = m.end()
        for num in _NUMBER.finditer(line[pos:]):
            tokens.append(("num", float(num.group())))
    return tokens


def parse_textgrid(text: str) -> UtteranceAlignment:
    """Read interval tiers named "words" and (optionally) "phones".

    Handles both the long and the short text format by reducing the file to
    its ordered value stream; only interval tiers are consumed, point tiers
    are skipped structurally.
    """
    if "ooTextFile" not in text:
        raise ParseError("not a Praat text file (missing ooTextFile header)")
    tokens = _textgrid_tokens(text)
    # header: "ooTextFile" "TextGrid" xmin xmax [n_tiers]
    idx = 0
    strs = [i for i, (kind, _) in enumerate(tokens) if kind == "str"]
    if len(strs) < 2 or tokens[strs[1]][1] != "TextGrid":
        raise ParseError("not a TextGrid file")
    idx = strs[1] + 1

    tiers: dict[str, list[tuple[float, float, str]]] = {}
    n = len(tokens)

    def take_num():
        nonlocal idx
        while idx < n and tokens[idx][0] != "num":
            idx += 1
        if idx >= n:
            raise ParseError("unexpected end of TextGrid")
        idx += 1
        return tokens[idx - 1][1]

    # skip global xmin xmax (the tier count, if numeric, is consumed when
    # scanning for the first tier class string)
    while idx < n:
        if tokens[idx][0] == "str" and tokens[idx][1] in ("IntervalTier", "TextTier"):
            tier_class = tokens[idx][1]
            idx += 1
            if idx >= n or tokens[idx][0] != "str":
                raise ParseError("tier name missing")
            tier_name = tokens[idx][1]
            idx += 1
            take_num()  # tier xmin
            take_num()  # tier xmax
            count = int(take_num())
            entries = []
            for _ in range(count):
                if tier_class == "IntervalTier":
                    x0 = take_num()
                    x1 = take_num()
                    while idx < n and tokens[idx][0] != "str":
                        idx += 1
                    if idx >= n:
                        raise ParseError("interval text missing")
                    mark = tokens[idx][1]
                    idx += 1
                    entries.append((x0, x1, mark))
                else:
                    take_num()
                    while idx < n and tokens[idx][0] != "str":
                        idx += 1
                    idx += 1
            if tier_class == "IntervalTier":
                tiers[tier_name] = entries
        else:
            idx += 1

    if "words" not in tiers:
        raise ParseError('TextGrid has no interval tier named "words"')

    phone_entries = [
        (x0, x1, mark) for x0, x1, mark in tiers.get("phones", []) if mark.strip()
    ]
    words = []
    for x0, x1, mark in tiers["words"]:
        if not mark.strip() or _is_punctuation(mark):
            continue
        phones = tuple(
            (pm, p0, p1)
            for p0, p1, pm in phone_entries
            if p0 >= x0 - TILE_TOL and p1 <= x1 + TILE_TOL
        )
        words.append(
            WordInterval(text=mark, start=x0, end=x1, phones=phones or None)
        )
    joined = " ".join(w.text for w in words)
    return UtteranceAlignment(words=tuple(words), text=joined)
