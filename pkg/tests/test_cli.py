import json
from pathlib import Path

import pytest

from pasta_prosody.cli import main

DATA = Path(__file__).parent / "data"
CORPUS = DATA / "corpus"
GOLDEN = DATA / "golden"

TRAIN_ARGS = ["--k", "4", "--s", "3", "--seed", "7", "--norm", "phrase"]


def run(argv):
    return main(argv)


class TestTrain:
    def test_train_writes_model_and_matrix(self, tmp_path):
        model_out = tmp_path / "model.json"
        matrix_out = tmp_path / "matrix.jsonl"
        code = run(
            ["train", "--manifest", str(CORPUS / "manifest.csv"), *TRAIN_ARGS,
             "--out", str(model_out), "--matrix-out", str(matrix_out)]
        )
        assert code == 0
        doc = json.loads(model_out.read_text())
        assert doc["k"] == 4 and doc["s"] == 3 and doc["seed"] == 7
        assert matrix_out.exists()

    def test_train_reproduces_golden_model(self, tmp_path):
        model_out = tmp_path / "model.json"
        code = run(
            ["train", "--manifest", str(CORPUS / "manifest.csv"), *TRAIN_ARGS,
             "--out", str(model_out)]
        )
        assert code == 0
        assert model_out.read_bytes() == (GOLDEN / "model.json").read_bytes()

    def test_bad_flag_exits_1(self, capsys):
        assert run(["train", "--manifest", "x", "--out", "y", "--metric", "cosine"]) == 1

    def test_missing_manifest_exits_2(self, tmp_path):
        code = run(
            ["train", "--manifest", str(tmp_path / "nope.csv"), "--out", str(tmp_path / "m.json")]
        )
        assert code == 2


class TestMarkupAndExport:
    def test_markup_matches_golden(self, tmp_path):
        out = tmp_path / "markup.jsonl"
        code = run(
            ["markup", "--manifest", str(CORPUS / "manifest.csv"),
             "--model", str(GOLDEN / "model.json"), "--out", str(out)]
        )
        assert code == 0
        assert out.read_bytes() == (GOLDEN / "markup.jsonl").read_bytes()

    def test_export_dataset(self, tmp_path):
        out = tmp_path / "dataset.jsonl"
        code = run(
            ["export-dataset", "--markup", str(GOLDEN / "markup.jsonl"),
             "--manifest", str(CORPUS / "manifest.csv"), "--out", str(out)]
        )
        assert code == 0
        lines = [json.loads(l) for l in out.read_text().splitlines()]
        assert len(lines) == 12
        assert all(len(l["labels"]) == len(l["text"].split()) for l in lines)


class TestSynth:
    def plan(self, tmp_path, **overrides):
        doc = {
            "words": [
                {"word": "eto", "phone_count": 4, "stressed_phone_index": 1},
                {"word": "bylo", "phone_count": 4, "stressed_phone_index": 2},
                {"word": "davno", "phone_count": 6, "stressed_phone_index": 5},
            ],
            "mean_phone_s": 0.12,
            "communicative_type": "statement",
        }
        doc.update(overrides)
        p = tmp_path / "plan.json"
        p.write_text(json.dumps(doc))
        return p

    def test_statement_plan(self, tmp_path):
        out = tmp_path / "labels.json"
        code = run(
            ["synth", "--text-plan", str(self.plan(tmp_path)),
             "--model", str(GOLDEN / "model.json"), "--out", str(out)]
        )
        assert code == 0
        doc = json.loads(out.read_text())
        assert len(doc["labels"]) == 3
        assert doc["labels"][0]["word"] == "eto"
        assert doc["marks"][0]["sym"] in ("T", "M", "B")

    def test_explicit_marks_plan(self, tmp_path):
        out = tmp_path / "labels.json"
        plan = self.plan(
            tmp_path,
            marks=[{"sym": "M", "t": 0.0}, {"sym": "T", "t": 0.9}, {"sym": "B", "t": 1.5}],
        )
        code = run(
            ["synth", "--text-plan", str(plan),
             "--model", str(GOLDEN / "model.json"), "--out", str(out)]
        )
        assert code == 0
        doc = json.loads(out.read_text())
        assert [m["sym"] for m in doc["marks"]] == ["M", "T", "B"]

    def test_plan_without_directive_exits_1(self, tmp_path):
        plan = self.plan(tmp_path)
        doc = json.loads(plan.read_text())
        del doc["communicative_type"]
        plan.write_text(json.dumps(doc))
        code = run(
            ["synth", "--text-plan", str(plan),
             "--model", str(GOLDEN / "model.json"), "--out", str(tmp_path / "o.json")]
        )
        assert code == 1


class TestPlot:
    def test_plot_model_and_markup(self, tmp_path):
        code = run(
            ["plot", "--model", str(GOLDEN / "model.json"),
             "--matrix", str(GOLDEN / "matrix.jsonl"), "--out-dir", str(tmp_path)]
        )
        assert code == 0
        assert (tmp_path / "barycenters.svg").exists()
        code = run(
            ["plot", "--markup", str(GOLDEN / "markup.jsonl"),
             "--model", str(GOLDEN / "model.json"), "--out-dir", str(tmp_path)]
        )
        assert code == 0
        assert (tmp_path / "markup.svg").exists()

    def test_plot_nothing_exits_1(self, tmp_path):
        assert run(["plot", "--out-dir", str(tmp_path)]) == 1
