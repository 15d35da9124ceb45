import numpy as np
import pytest

from andrewsplot import pca
from andrewsplot.dataset import Dataset
from andrewsplot.pca import PcaError, PcaModel

from oracles import jacobi_rotation_eigh


def _ds(features):
    features = np.asarray(features, dtype=float)
    d, n = features.shape
    return Dataset(features, [f"f{i}" for i in range(d)], None, [str(j) for j in range(n)])


class TestFit:
    def test_identity_matrix(self):
        model = pca.fit(_ds(np.eye(3)), center=False)
        assert np.allclose(model.sigma, 1.0)
        assert np.allclose(model.U, np.eye(3))

    def test_axis_aligned_columns(self):
        model = pca.fit(_ds([[3.0, 0.0], [0.0, 2.0]]), center=False)
        assert np.allclose(model.sigma, [3.0, 2.0])
        assert np.allclose(model.U, np.eye(2))

    def test_iris_against_rotation_oracle(self, iris):
        model = pca.fit(iris, center=True)
        Xc = iris.features - iris.features.mean(axis=1)[:, None]
        w, _ = jacobi_rotation_eigh(Xc @ Xc.T)
        oracle_sigma = np.sqrt(np.maximum(w[::-1], 0.0))
        assert np.allclose(model.sigma, oracle_sigma, rtol=1e-8)

    def test_random_small_against_rotation_oracle(self):
        rng = np.random.default_rng(11)
        for d in (2, 5, 8):
            X = rng.standard_normal((d, 3 * d))
            model = pca.fit(_ds(X), center=True)
            Xc = X - X.mean(axis=1)[:, None]
            w, _ = jacobi_rotation_eigh(Xc @ Xc.T)
            assert np.allclose(model.sigma**2, w[::-1], rtol=1e-8, atol=1e-10)

    def test_orthonormality(self):
        rng = np.random.default_rng(3)
        for _ in range(5):
            model = pca.fit(_ds(rng.standard_normal((6, 40)) * 10))
            assert np.max(np.abs(model.U.T @ model.U - np.eye(6))) < 1e-10

    def test_fewer_points_than_features(self):
        model = pca.fit(_ds(np.random.default_rng(0).standard_normal((5, 2))))
        assert model.sigma.shape == (5,)
        # centering two points leaves rank one
        assert np.allclose(model.sigma[1:], 0.0, atol=1e-12)
        assert any("near zero" in w for w in pca.degeneracy_warnings(model))

    def test_rejects_nonfinite(self):
        ds = _ds(np.ones((2, 2)))
        object.__setattr__(ds, "features", np.array([[1.0, np.inf], [0.0, 1.0]]))
        with pytest.raises(PcaError):
            pca.fit(ds)


class TestSignConvention:
    def test_canonicalize_flips_negative_peak(self):
        U = np.array([[0.0, -1.0], [-1.0, 0.0]])
        fixed = pca.canonicalize_signs(U)
        assert np.array_equal(fixed, np.array([[0.0, 1.0], [1.0, 0.0]]))

    def test_idempotent(self):
        rng = np.random.default_rng(5)
        Q, _ = np.linalg.qr(rng.standard_normal((6, 6)))
        once = pca.canonicalize_signs(Q)
        assert np.array_equal(once, pca.canonicalize_signs(once))

    def test_tie_takes_lowest_index(self):
        v = np.array([[-np.sqrt(0.5)], [np.sqrt(0.5)]])
        fixed = pca.canonicalize_signs(v)
        assert fixed[0, 0] > 0


class TestScores:
    def test_identity_model(self):
        model = PcaModel(np.eye(2), np.array([2.0, 1.0]), np.zeros(2), 4)
        assert np.array_equal(pca.scores(model, np.array([1.0, 2.0])), [1.0, 2.0])

    def test_at_mean(self):
        model = PcaModel(np.eye(2), np.array([2.0, 1.0]), np.array([3.0, -1.0]), 4)
        assert np.array_equal(pca.scores(model, model.mean), [0.0, 0.0])

    def test_random_against_direct_inner_products(self):
        rng = np.random.default_rng(9)
        model = pca.fit(_ds(rng.standard_normal((5, 30))))
        x = rng.standard_normal(5)
        direct = np.array([model.U[:, i] @ (x - model.mean) for i in range(5)])
        assert np.max(np.abs(pca.scores(model, x) - direct)) < 1e-12

    def test_dimension_mismatch(self):
        model = PcaModel(np.eye(2), np.array([2.0, 1.0]), np.zeros(2), 4)
        with pytest.raises(PcaError):
            pca.scores(model, np.array([1.0, 2.0, 3.0]))

    def test_matrix_variant_matches(self):
        rng = np.random.default_rng(13)
        model = pca.fit(_ds(rng.standard_normal((4, 12))))
        X = rng.standard_normal((4, 7))
        S = pca.scores_matrix(model, X)
        for j in range(7):
            assert np.allclose(S[:, j], pca.scores(model, X[:, j]))


class TestDegeneracyWarnings:
    def _model(self, sigma):
        d = len(sigma)
        return PcaModel(np.eye(d), np.array(sigma, dtype=float), np.zeros(d), 10)

    def test_well_separated(self):
        assert pca.degeneracy_warnings(self._model([3.0, 2.0, 1.0]), 1e-6) == []

    def test_exact_tie(self):
        warnings = pca.degeneracy_warnings(self._model([1.0, 1.0]), 1e-6)
        assert len(warnings) == 1
        assert "1 and 2" in warnings[0]

    def test_near_tie_flags_only_that_pair(self):
        warnings = pca.degeneracy_warnings(self._model([1.0, 1.0 - 1e-9, 0.5]), 1e-6)
        assert len(warnings) == 1
        assert "1 and 2" in warnings[0]

    def test_zero_spectrum(self):
        warnings = pca.degeneracy_warnings(self._model([0.0, 0.0]))
        assert warnings and "zero" in warnings[0]


class TestSpectralConsistency:
    def test_sigma_squared_match_gram_eigenvalues(self):
        rng = np.random.default_rng(21)
        for d in (3, 6, 8):
            X = rng.standard_normal((d, 4 * d)) * 5
            model = pca.fit(_ds(X), center=True)
            Xc = X - X.mean(axis=1)[:, None]
            w, _ = jacobi_rotation_eigh(Xc @ Xc.T)
            assert np.allclose(model.sigma**2, w[::-1], rtol=1e-8, atol=1e-9)
