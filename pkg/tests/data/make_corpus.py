"""Regenerate the bundled synthetic corpus and its golden outputs.

Run from the repository root:

    python tests/data/make_corpus.py

Twelve utterances over two speakers, each the rule-based rendition of one of
the four communicative types (statement, yes-no question, exclamation,
continuative): a tone sequence is expanded over a pseudo-timeline, decoded to
a normalized spline, scaled to the speaker's base pitch and sampled at 10 ms.
Everything is table-driven, no randomness.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

from pasta_prosody.intsint import (
    ACCENT_FOR_TYPE,
    CommunicativeType,
    ToRIAccent,
    build_pseudo_timeline,
    decode_intsint,
    tori_to_intsint,
)
from pasta_prosody.momel import MomelSpline
from pasta_prosody.pipeline import TrainConfig, export_dataset, run_markup, run_train
from pasta_prosody.pitch import NormalizationMode

HERE = Path(__file__).parent
CORPUS = HERE / "corpus"
GOLDEN = HERE / "golden"

SPEAKERS = {"spk_a": 140.0, "spk_b": 215.0}
STEP = 0.01
MEAN_PHONE_S = 0.12  # long pseudo-phones keep word spans resolvable by the fit

# utterance_id, speaker, type, phone counts, stressed phone per word, nucleus
SEQUENCES = [
    ("u01", "spk_a", "statement", [4, 5, 4], [1, 2, 1], 2),
    ("u02", "spk_a", "statement", [5, 4], [2, 1], 1),
    ("u03", "spk_a", "yes_no_question", [4, 4, 5], [1, 1, 2], 2),
    ("u04", "spk_a", "yes_no_question", [6, 4], [2, 1], 0),
    ("u05", "spk_a", "exclamation", [4, 5, 4], [1, 2, 1], 1),
    ("u06", "spk_a", "continuative", [5, 4], [1, 1], 1),
    ("u07", "spk_b", "statement", [4, 4, 4], [1, 1, 1], 2),
    ("u08", "spk_b", "yes_no_question", [5, 4, 4], [2, 1, 1], 1),
    ("u09", "spk_b", "exclamation", [4, 6], [1, 2], 1),
    ("u10", "spk_b", "continuative", [4, 5, 4], [1, 2, 1], 2),
    ("u11", "spk_b", "statement", [5, 5, 4, 4], [2, 2, 1, 1], 3),
    ("u12", "spk_b", "yes_no_question", [4, 5], [1, 4], 1),
]

TYPE_TAG = {
    "statement": "st",
    "yes_no_question": "qu",
    "exclamation": "ex",
    "continuative": "co",
}


def build_utterance(utt, speaker_base, ctype, counts, stresses, nucleus):
    timeline = build_pseudo_timeline(counts, stresses, mean_phone_s=MEAN_PHONE_S)
    accent = ACCENT_FOR_TYPE[CommunicativeType(ctype)]
    marks = tori_to_intsint(ToRIAccent(accent, nucleus), timeline)
    anchors = decode_intsint(marks)
    spline = MomelSpline(anchors, (0.0, timeline.t_end))
    n = math.ceil(timeline.t_end / STEP - 1e-9)
    frames = [
        (round(i * STEP, 10), spline.value_at(round(i * STEP, 10)) * speaker_base)
        for i in range(n + 1)
    ]
    words = [
        {
            "word": f"{TYPE_TAG[ctype]}{utt[1:]}w{w.word_index}",
            "start": round(w.start, 6),
            "end": round(w.end, 6),
            "stressed_vowel_time": round(w.stressed_vowel_time, 6),
        }
        for w in timeline.words
    ]
    return frames, words


def main():
    CORPUS.mkdir(parents=True, exist_ok=True)
    GOLDEN.mkdir(parents=True, exist_ok=True)
    manifest_rows = ["utterance_id,speaker_id,f0_path,alignment_path,text"]
    for utt, speaker, ctype, counts, stresses, nucleus in SEQUENCES:
        frames, words = build_utterance(
            utt, SPEAKERS[speaker], ctype, counts, stresses, nucleus
        )
        f0_lines = ["time_s,f0_hz,voiced"]
        for ft, fv in frames:
            # u11 carries an unvoiced stretch to exercise gap spanning
            if utt == "u11" and 0.30 <= ft <= 0.40:
                f0_lines.append(f"{ft!r},0.0,0")
            else:
                f0_lines.append(f"{ft!r},{fv!r},1")
        (CORPUS / f"{utt}.csv").write_text("\n".join(f0_lines) + "\n", encoding="utf-8")
        text = " ".join(w["word"] for w in words)
        doc = {"text": text, "words": words}
        (CORPUS / f"{utt}.json").write_text(
            json.dumps(doc, ensure_ascii=False, indent=1) + "\n", encoding="utf-8"
        )
        manifest_rows.append(f"{utt},{speaker},{utt}.csv,{utt}.json,{text}")
    (CORPUS / "manifest.csv").write_text("\n".join(manifest_rows) + "\n", encoding="utf-8")

    config = TrainConfig(k=4, s=3, seed=7, norm_mode=NormalizationMode.PHRASE)
    model, matrix, skipped = run_train(
        CORPUS / "manifest.csv",
        config,
        model_out=GOLDEN / "model.json",
        matrix_out=GOLDEN / "matrix.jsonl",
    )
    assert not skipped, skipped
    records, skipped = run_markup(
        CORPUS / "manifest.csv", model, out_path=GOLDEN / "markup.jsonl"
    )
    assert not skipped, skipped
    export_dataset(
        GOLDEN / "markup.jsonl", CORPUS / "manifest.csv", out_path=GOLDEN / "dataset.jsonl"
    )
    print(f"wrote {len(SEQUENCES)} utterances, {len(matrix)} patterns")
    print("barycenter row means:", model.barycenters.mean(axis=1))
    print("state centroids:", model.state_centroids)
    print("inertia history:", model.inertia_history_)


if __name__ == "__main__":
    main()
