"""Corpus-level orchestration: train, markup, dataset export.

A corpus is a CSV manifest `utterance_id,speaker_id,f0_path,alignment_path,text`
with paths resolved relative to the manifest location. Bad utterances are
skipped and logged; a run only fails when nothing survives.
"""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

from .alignment import UtteranceAlignment, load_alignment
from .clustering import ClusterModel, Metric, assign, train
from .errors import (
    AllUtterancesSkipped,
    IdMismatch,
    ModelMismatch,
    ParseError,
    PastaError,
)
from .momel import MomelFitParams, fit_momel
from .patterns import DEFAULT_N_F0, PatternMatrix, extract_patterns
from .pitch import (
    F0Contour,
    F0Format,
    NormalizationMode,
    NormalizationScope,
    compute_mean_f0,
    load_f0,
)

log = logging.getLogger("pasta")


@dataclass(frozen=True)
class UtteranceRecord:
    utterance_id: str
    speaker_id: str
    f0_path: Path
    alignment_path: Path
    text: str


@dataclass(frozen=True)
class MarkupWord:
    text: str
    pattern_id: int
    state_id: int
    start: float
    end: float


@dataclass(frozen=True)
class MarkupRecord:
    utterance_id: str
    words: tuple[MarkupWord, ...]

    def to_dict(self) -> dict:
        return {
            "utt": self.utterance_id,
            "words": [
                {
                    "text": w.text,
                    "pattern": w.pattern_id,
                    "state": w.state_id,
                    "start": w.start,
                    "end": w.end,
                }
                for w in self.words
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MarkupRecord":
        return cls(
            utterance_id=d["utt"],
            words=tuple(
                MarkupWord(w["text"], int(w["pattern"]), int(w["state"]), float(w["start"]), float(w["end"]))
                for w in d["words"]
            ),
        )


@dataclass
class TrainConfig:
    k: int = 24
    s: int = 5
    metric: Metric = Metric.DTW
    n_f0: int = DEFAULT_N_F0
    seed: int = 0
    norm_mode: NormalizationMode = NormalizationMode.PHRASE
    max_iter: int = 50
    dba_iter: int = 10
    momel: MomelFitParams = field(default_factory=MomelFitParams)


def read_manifest(path) -> list[UtteranceRecord]:
    path = Path(path)
    records = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"utterance_id", "speaker_id", "f0_path", "alignment_path", "text"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise ParseError(
                f"{path}: manifest must have columns {sorted(required)}, "
                f"got {reader.fieldnames}"
            )
        for row in reader:
            records.append(
                UtteranceRecord(
                    utterance_id=row["utterance_id"],
                    speaker_id=row["speaker_id"],
                    f0_path=path.parent / row["f0_path"],
                    alignment_path=path.parent / row["alignment_path"],
                    text=row["text"],
                )
            )
    return records


def _load_f0_auto(path: Path) -> F0Contour:
    fmt = F0Format.CSV if path.suffix.lower() == ".csv" else F0Format.TWO_COLUMN_TEXT
    return load_f0(path, fmt)


def _scope_for(record, contour, speaker_means, norm_mode) -> NormalizationScope:
    if norm_mode == NormalizationMode.SPEAKER:
        return NormalizationScope(norm_mode, speaker_means[record.speaker_id])
    return NormalizationScope(norm_mode, compute_mean_f0([contour]))


def _speaker_means(records, contours) -> dict[str, float]:
    by_speaker: dict[str, list[F0Contour]] = {}
    for rec in records:
        if rec.utterance_id in contours:
            by_speaker.setdefault(rec.speaker_id, []).append(contours[rec.utterance_id])
    return {spk: compute_mean_f0(cs) for spk, cs in by_speaker.items()}


def _iter_corpus(records, config):
    """Yield (record, contour, alignment, scope) for every loadable utterance,
    logging and skipping the rest. Two passes so speaker means see the whole
    corpus before any utterance is processed."""
    contours: dict[str, F0Contour] = {}
    alignments: dict[str, UtteranceAlignment] = {}
    skipped: list[tuple[str, str]] = []
    for rec in records:
        try:
            contours[rec.utterance_id] = _load_f0_auto(rec.f0_path)
            alignments[rec.utterance_id] = load_alignment(rec.alignment_path)
        except (PastaError, OSError) as exc:
            contours.pop(rec.utterance_id, None)
            skipped.append((rec.utterance_id, str(exc)))
            log.warning("skipping %s: %s", rec.utterance_id, exc)
    speaker_means = (
        _speaker_means(records, contours)
        if config.norm_mode == NormalizationMode.SPEAKER
        else {}
    )
    usable = []
    for rec in records:
        if rec.utterance_id not in contours:
            continue
        contour = contours[rec.utterance_id]
        try:
            scope = _scope_for(rec, contour, speaker_means, config.norm_mode)
        except PastaError as exc:
            skipped.append((rec.utterance_id, str(exc)))
            log.warning("skipping %s: %s", rec.utterance_id, exc)
            continue
        usable.append((rec, contour, alignments[rec.utterance_id], scope))
    return usable, skipped


def run_train(
    manifest_path,
    config: TrainConfig | None = None,
    model_out=None,
    matrix_out=None,
) -> tuple[ClusterModel, PatternMatrix, list[tuple[str, str]]]:
    """Fit splines, pool per-word patterns over the corpus and train the
    cluster model. Returns (model, matrix, skipped)."""
    config = config or TrainConfig()
    records = read_manifest(manifest_path)
    usable, skipped = _iter_corpus(records, config)
    rows = []
    for rec, contour, alignment, scope in usable:
        try:
            spline = fit_momel(contour, config.momel)
            rows.extend(
                extract_patterns(spline, alignment, scope, config.n_f0, rec.utterance_id)
            )
        except PastaError as exc:
            skipped.append((rec.utterance_id, str(exc)))
            log.warning("skipping %s: %s", rec.utterance_id, exc)
    if not rows:
        raise AllUtterancesSkipped(
            f"no usable utterances out of {len(records)} "
            f"({'; '.join(f'{u}: {r}' for u, r in skipped[:5])})"
        )
    matrix = PatternMatrix(rows=rows, n_f0=config.n_f0)
    model = train(
        matrix,
        k=config.k,
        s=config.s,
        metric=config.metric,
        seed=config.seed,
        max_iter=config.max_iter,
        dba_iter=config.dba_iter,
        norm_mode=config.norm_mode,
    )
    if model_out is not None:
        model.save(model_out)
    if matrix_out is not None:
        matrix.save(matrix_out)
    return model, matrix, skipped


def run_markup(
    manifest_path,
    model: ClusterModel,
    out_path=None,
    config: TrainConfig | None = None,
) -> tuple[list[MarkupRecord], list[tuple[str, str]]]:
    """Label every word of every utterance with its pattern/state pair.
    An explicit config must agree with the model on n_f0 and norm mode."""
    if config is not None:
        if config.n_f0 != model.n_f0:
            raise ModelMismatch(f"config n_f0 {config.n_f0} != model n_f0 {model.n_f0}")
        if config.norm_mode != model.norm_mode:
            raise ModelMismatch(
                f"config norm mode {config.norm_mode.value} != model {model.norm_mode.value}"
            )
    cfg = config or TrainConfig(n_f0=model.n_f0, norm_mode=model.norm_mode)
    records = read_manifest(manifest_path)
    usable, skipped = _iter_corpus(records, cfg)
    out = []
    for rec, contour, alignment, scope in usable:
        try:
            spline = fit_momel(contour, cfg.momel)
            patterns = extract_patterns(spline, alignment, scope, model.n_f0, rec.utterance_id)
        except PastaError as exc:
            skipped.append((rec.utterance_id, str(exc)))
            log.warning("skipping %s: %s", rec.utterance_id, exc)
            continue
        words = []
        for w, p in zip(alignment.words, patterns):
            label = assign(model, p)
            words.append(
                MarkupWord(
                    text=w.text,
                    pattern_id=label.pattern_id,
                    state_id=label.state_id,
                    start=w.start,
                    end=w.end,
                )
            )
        out.append(MarkupRecord(utterance_id=rec.utterance_id, words=tuple(words)))
    if not out:
        raise AllUtterancesSkipped(f"no usable utterances out of {len(records)}")
    if out_path is not None:
        write_markup(out, out_path)
    return out, skipped


def write_markup(records, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec.to_dict(), ensure_ascii=False) + "\n")


def read_markup(path) -> list[MarkupRecord]:
    out = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.strip():
            out.append(MarkupRecord.from_dict(json.loads(line)))
    return out


def export_dataset(markup_path, manifest_path, out_path=None) -> list[dict]:
    """One JSONL line per sentence: the manifest text plus
    (word, pattern_id, state_id) label triples in word order."""
    texts = {rec.utterance_id: rec.text for rec in read_manifest(manifest_path)}
    lines = []
    for rec in read_markup(markup_path):
        if rec.utterance_id not in texts:
            raise IdMismatch(f"markup id {rec.utterance_id!r} not in the text manifest")
        lines.append(
            {
                "text": texts[rec.utterance_id],
                "labels": [[w.text, w.pattern_id, w.state_id] for w in rec.words],
            }
        )
    if out_path is not None:
        with open(out_path, "w", encoding="utf-8") as fh:
            for line in lines:
                fh.write(json.dumps(line, ensure_ascii=False) + "\n")
    return lines
