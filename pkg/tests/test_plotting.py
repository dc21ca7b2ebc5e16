from pathlib import Path

import pytest

from pasta_prosody.clustering import ClusterModel
from pasta_prosody.momel import MomelAnchor, MomelSpline
from pasta_prosody.patterns import PatternMatrix
from pasta_prosody.pipeline import read_markup
from pasta_prosody.plotting import plot_barycenters, plot_markup, plot_spline

DATA = Path(__file__).parent / "data"
GOLDEN = DATA / "golden"


@pytest.fixture(scope="module")
def model():
    return ClusterModel.load(GOLDEN / "model.json")


class TestBarycenterPanels:
    def test_panel_count_matches_k(self, model, tmp_path):
        out = plot_barycenters(model, tmp_path / "b.svg")
        svg = out.read_text()
        assert svg.count('id="axes_') == model.k

    def test_members_overlay(self, model, tmp_path):
        matrix = PatternMatrix.load(GOLDEN / "matrix.jsonl")
        from pasta_prosody.clustering import assign

        model.labels_ = [assign(model, r) for r in matrix.rows]
        out = plot_barycenters(model, tmp_path / "b.svg", matrix)
        assert out.exists()

    def test_deterministic_bytes(self, model, tmp_path):
        a = plot_barycenters(model, tmp_path / "a.svg").read_bytes()
        b = plot_barycenters(model, tmp_path / "b.svg").read_bytes()
        assert a == b


class TestSplinePlot:
    def test_anchor_glyph_count(self, tmp_path):
        import re

        s = MomelSpline(
            [MomelAnchor(0.1, 120.0), MomelAnchor(0.7, 180.0), MomelAnchor(1.3, 110.0)],
            (0.0, 1.4),
        )
        svg = plot_spline(s, tmp_path / "s.svg").read_text()
        red_glyphs = [u for u in re.findall(r"<use[^>]*>", svg) if "ff0000" in u]
        assert len(red_glyphs) == len(s.anchors)

    def test_deterministic_bytes(self, tmp_path):
        s = MomelSpline([MomelAnchor(0.5, 150.0)], (0.0, 1.0))
        a = plot_spline(s, tmp_path / "a.svg").read_bytes()
        b = plot_spline(s, tmp_path / "b.svg").read_bytes()
        assert a == b


class TestMarkupPlot:
    def test_one_panel_per_utterance(self, model, tmp_path):
        records = read_markup(GOLDEN / "markup.jsonl")
        svg = plot_markup(records, model, tmp_path / "m.svg").read_text()
        assert svg.count('id="axes_') == len(records)
