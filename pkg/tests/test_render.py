import json
import xml.etree.ElementTree as ET
from pathlib import Path

import numpy as np
import pytest

from andrewsplot import andrews, harmonic, pca, render
from andrewsplot.andrews import classic_basis, embed, smoothed_basis
from andrewsplot.dataset import Dataset
from andrewsplot.pca import PcaModel
from andrewsplot.render import Band, CurveSet, RenderError

GOLDEN = Path(__file__).parent / "golden"


def tiny_dataset(features, labels=None):
    features = np.asarray(features, dtype=float)
    d, n = features.shape
    return Dataset(features, [f"f{i}" for i in range(d)], labels, [str(j) for j in range(n)])


def constant_curves(values, labels=None):
    T = 8
    t = np.linspace(0, 1, T)
    curves = np.tile(np.asarray(values, dtype=float)[:, None], (1, T))
    ids = [str(i) for i in range(len(values))]
    return CurveSet(t, curves, labels, ids)


class TestSampleCurves:
    def test_point_at_mean_gives_zero_series(self, iris):
        model = pca.fit(iris)
        ds = tiny_dataset(model.mean[:, None])
        cs = render.sample_curves(classic_basis(4), model, ds, samples=4)
        assert cs.curves.shape == (1, 4)
        assert np.max(np.abs(cs.curves)) < 1e-12 * (1 + np.max(np.abs(model.mean)))

    def test_second_axis_samples_cosine(self):
        model = PcaModel(np.eye(2), np.array([1.0, 1.0]), np.zeros(2), 1)
        ds = tiny_dataset(np.array([[0.0], [1.0]]))
        cs = render.sample_curves(classic_basis(2), model, ds, samples=3)
        root2 = np.sqrt(2.0)
        assert np.allclose(cs.curves[0], [root2, -root2, root2], atol=1e-14)

    def test_matches_pointwise_embedding(self, iris):
        model = pca.fit(iris)
        for basis in (classic_basis(4), smoothed_basis(4, 1.0)):
            cs = render.sample_curves(basis, model, iris, samples=33)
            for i in (0, 50, 149):
                f = embed(basis, model, iris.features[:, i])
                direct = harmonic.evaluate(f, cs.t)
                assert np.max(np.abs(cs.curves[i] - direct)) < 1e-12 * (
                    1 + np.max(np.abs(direct))
                )

    def test_grid_is_inclusive(self, iris):
        model = pca.fit(iris)
        cs = render.sample_curves(classic_basis(4), model, iris, samples=16)
        assert cs.t[0] == 0.0 and cs.t[-1] == 1.0

    def test_too_few_samples(self, iris):
        model = pca.fit(iris)
        with pytest.raises(RenderError):
            render.sample_curves(classic_basis(4), model, iris, samples=1)


class TestEnvelope:
    def test_constant_pair(self):
        cs = constant_curves([1.0, -1.0], labels=("a", "a"))
        band = render.envelope(cs, "a")
        assert np.all(band.upper == 1.0) and np.all(band.lower == -1.0)

    def test_single_curve(self):
        cs = constant_curves([0.5], labels=("solo",))
        band = render.envelope(cs, "solo")
        assert np.array_equal(band.upper, band.lower)

    def test_unknown_label(self):
        cs = constant_curves([0.5], labels=("a",))
        with pytest.raises(RenderError, match="unknown label"):
            render.envelope(cs, "b")

    def test_iris_bands_contain_members(self, iris):
        model = pca.fit(iris)
        cs = render.sample_curves(classic_basis(4), model, iris, samples=64)
        for band in render.envelopes(cs):
            rows = [i for i, lab in enumerate(cs.labels) if lab == band.label]
            member = cs.curves[rows]
            assert np.all(member <= band.upper) and np.all(member >= band.lower)

    def test_convex_combinations_stay_inside(self, iris):
        rng = np.random.default_rng(37)
        model = pca.fit(iris)
        basis = smoothed_basis(4, 1.0)
        cs = render.sample_curves(basis, model, iris, samples=48)
        bands = {b.label: b for b in render.envelopes(cs)}
        labels = np.asarray(cs.labels)
        for label in cs.label_order():
            members = iris.features[:, labels == label]
            for _ in range(10):
                w = rng.dirichlet(np.ones(members.shape[1]))
                combo = members @ w
                f = embed(basis, model, combo)
                vals = harmonic.evaluate(f, cs.t)
                band = bands[label]
                assert np.all(vals <= band.upper + 1e-9)
                assert np.all(vals >= band.lower - 1e-9)

    def test_band_rejects_inverted(self):
        with pytest.raises(RenderError):
            Band("x", np.zeros(4), np.ones(4))


class TestEmitSvg:
    def test_empty_is_valid_svg_with_axes(self):
        cs = CurveSet(np.linspace(0, 1, 4), np.zeros((0, 4)), None, [])
        doc = render.emit_svg(cs)
        root = ET.fromstring(doc)
        assert root.tag.endswith("svg")
        lines = [el for el in root.iter() if el.tag.endswith("line")]
        assert len(lines) >= 2  # the two axis strokes plus ticks
        assert not [el for el in root.iter() if el.tag.endswith("polyline")]

    def test_single_constant_curve_is_horizontal(self):
        cs = constant_curves([0.25])
        root = ET.fromstring(render.emit_svg(cs))
        polys = [el for el in root.iter() if el.tag.endswith("polyline")]
        assert len(polys) == 1
        ys = {p.split(",")[1] for p in polys[0].attrib["points"].split()}
        assert len(ys) == 1

    def test_bands_rendered_as_paths(self):
        cs = constant_curves([1.0, -1.0], labels=("a", "a"))
        bands = render.envelopes(cs)
        root = ET.fromstring(render.emit_svg(cs, bands))
        paths = [el for el in root.iter() if el.tag.endswith("path")]
        assert len(paths) == 1
        assert paths[0].attrib["fill-opacity"] == "0.250000"

    def test_deterministic(self, iris):
        model = pca.fit(iris)
        cs = render.sample_curves(classic_basis(4), model, iris, samples=32)
        bands = render.envelopes(cs)
        assert render.emit_svg(cs, bands) == render.emit_svg(cs, bands)

    def test_golden_snapshot(self, iris):
        golden = GOLDEN / "iris_classic.svg"
        model = pca.fit(iris)
        cs = render.sample_curves(classic_basis(4), model, iris, samples=128)
        doc = render.emit_svg(cs, render.envelopes(cs))
        if not golden.exists():  # freeze on first run
            golden.parent.mkdir(exist_ok=True)
            golden.write_bytes(doc)
        assert doc == golden.read_bytes()


class TestEmitJson:
    def test_round_trip_exact(self, iris):
        model = pca.fit(iris)
        basis = classic_basis(4)
        cs = render.sample_curves(basis, model, iris, samples=16)
        summary = andrews.mean_quadratic_variation(basis, model)
        payload = render.emit_json(cs, render.envelopes(cs), summary, basis.eigenvalues)
        doc = json.loads(payload)
        assert doc["t"] == list(cs.t)
        for i, curve in enumerate(doc["curves"]):
            assert curve["values"] == list(cs.curves[i])
            assert curve["id"] == cs.point_ids[i]
            assert curve["label"] == cs.labels[i]
        assert doc["objective"] == summary.value
        assert doc["lower_bound"] == summary.lower_bound
        assert len(doc["bands"]) == 3

    def test_empty_document(self):
        cs = CurveSet(np.linspace(0, 1, 4), np.zeros((0, 4)), None, [])
        doc = json.loads(render.emit_json(cs))
        assert doc["curves"] == [] and doc["bands"] == []

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            render.dumps({"x": float("nan")})

    def test_deterministic(self, iris):
        model = pca.fit(iris)
        cs = render.sample_curves(classic_basis(4), model, iris, samples=16)
        assert render.emit_json(cs) == render.emit_json(cs)


class TestEmitCsv:
    def test_row_count_and_round_trip(self, iris):
        model = pca.fit(iris)
        cs = render.sample_curves(classic_basis(4), model, iris, samples=20)
        payload = render.emit_csv(cs).decode("utf-8")
        rows = payload.strip().splitlines()
        assert len(rows) == 21
        header = rows[0].split(",")
        assert header[0] == "t" and len(header) == 151
        values = np.array([[float(v) for v in r.split(",")] for r in rows[1:]])
        assert np.array_equal(values[:, 0], cs.t)
        assert np.array_equal(values[:, 1:], cs.curves.T)

    def test_deterministic(self):
        cs = constant_curves([1.0, 2.0])
        assert render.emit_csv(cs) == render.emit_csv(cs)
