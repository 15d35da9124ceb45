"""Acceptance suite: every release criterion at its stated tolerance.

Each test prints one PASS line (visible with ``pytest -s``) after its
assertions hold; pytest -v doubles as the per-criterion pass/fail table.
"""

import time

import numpy as np
import pytest

from andrewsplot import andrews, cli, harmonic, jacobi, pca
from andrewsplot.andrews import (
    AndrewsBasis,
    MODE_CLASSIC,
    classic_basis,
    mean_quadratic_variation,
    mean_spatial_spectral_variation,
    rotate_pair,
    smoothed_basis,
)
from andrewsplot.harmonic import HarmonicFunction
from andrewsplot.jacobi import COS, SIN, TridiagMatrix
from andrewsplot.pca import PcaModel

from oracles import random_harmonic_coeffs, tridiag_eigvals_bisection

ALPHAS = (0.1, 1.0, 10.0)
PI2 = np.pi**2


def ok(name):
    print(f"PASS {name}")


class TestMqvAttainment:
    @pytest.mark.parametrize("name,d", [("iris", 4), ("breast-cancer", 30), ("diabetes", 10)])
    def test_classic_value_equals_closed_form(self, registry, name, d, request):
        ds_entry = registry[name]
        from andrewsplot import dataset as dsmod

        ds = dsmod.load_csv(ds_entry.path, ds_entry.label_spec)
        start = time.perf_counter()
        model = pca.fit(ds, center=True)
        summary = mean_quadratic_variation(classic_basis(model.dim), model)
        elapsed = time.perf_counter() - start
        # closed form recomputed from scratch: (1/n) sum_{k>=2} 4 pi^2 floor(k/2)^2 sigma_k^2
        closed = sum(
            4.0 * PI2 * (k // 2) ** 2 * model.sigma[k - 1] ** 2 for k in range(2, model.dim + 1)
        ) / ds.n_points
        assert model.dim == d
        assert abs(summary.value - closed) <= 1e-12 * abs(closed)
        assert elapsed < 1.0
        ok(f"mqv-attainment[{name}] rel err {abs(summary.value - closed) / closed:.2e}, {elapsed:.3f}s")


class TestDatasetShapes:
    def test_breast_cancer_shape(self, breast_cancer):
        assert (breast_cancer.n_points, breast_cancer.n_features) == (569, 30)
        ok("dataset-shape[breast-cancer] 569x30")

    def test_diabetes_shape_and_target_range(self, registry):
        import csv

        entry = registry["diabetes"]
        with open(entry.path, newline="") as fh:
            targets = [float(row["target"]) for row in csv.DictReader(fh)]
        assert len(targets) == 442
        assert min(targets) == 25.0
        assert all(25.0 <= t <= 356.0 for t in targets)
        from andrewsplot import dataset as dsmod

        ds = dsmod.load_csv(entry.path, entry.label_spec)
        assert (ds.n_points, ds.n_features) == (442, 10)
        ok("dataset-shape[diabetes] 442x10, targets within [25, 356]")


class TestJacobiDisplays:
    @pytest.mark.parametrize("alpha", ALPHAS)
    def test_blocks_match_exactly(self, alpha):
        E = jacobi.operator_block(alpha, COS, 4)
        assert E.diag.tolist() == [2.0, alpha + 2.0, 4 * alpha + 2.0, 9 * alpha + 2.0]
        assert E.offdiag.tolist() == [-np.sqrt(2.0), -1.0, -1.0]
        O = jacobi.operator_block(alpha, SIN, 3)
        assert O.diag.tolist() == [alpha + 2.0, 4 * alpha + 2.0, 9 * alpha + 2.0]
        assert O.offdiag.tolist() == [-1.0, -1.0]
        ok(f"jacobi-display[alpha={alpha}] exact")


class TestEigensolverOracle:
    def test_200_random_matrices(self):
        rng = np.random.default_rng(2024)
        start = time.perf_counter()
        worst = 0.0
        for _ in range(200):
            n = int(rng.integers(1, 9))
            T = TridiagMatrix(rng.standard_normal(n) * 4.0, rng.standard_normal(max(n - 1, 0)) * 2.0)
            pairs = jacobi.eigenpairs(T)
            got = np.array([p.value for p in pairs])
            want = tridiag_eigvals_bisection(T.diag, T.offdiag)
            worst = max(worst, float(np.max(np.abs(got - want))))
            for p in pairs:
                resid = float(np.linalg.norm(T.matvec(np.array(p.vector)) - p.value * p.vector))
                assert resid < 1e-9 * (abs(p.value) + T.max_abs_entry)
        elapsed = time.perf_counter() - start
        assert worst < 1e-8
        assert elapsed < 10.0
        ok(f"eigensolver-oracle[200 matrices] worst dev {worst:.2e}, {elapsed:.2f}s")


class TestMonotoneConvergence:
    @pytest.mark.parametrize("alpha", ALPHAS)
    def test_histories_non_increasing_and_deltas_shrink(self, alpha):
        sizes = [16, 32, 64, 128, 256, 512, 1024]
        hist = np.column_stack(
            [jacobi.lowest_modes(alpha, 10, size).values for size in sizes]
        )
        rises = np.diff(hist, axis=1)
        assert np.max(rises) <= 1e-10  # non-increasing within solver slack
        deltas = np.maximum(np.max(-rises, axis=0), 0.0)  # per-doubling shrink, clamped
        last3 = deltas[-3:]
        assert last3[0] >= last3[1] - 1e-10
        assert last3[1] >= last3[2] - 1e-10
        ok(
            f"monotone-convergence[alpha={alpha}] max rise {np.max(rises):.2e}, "
            f"last deltas {[f'{d:.1e}' for d in last3]}"
        )


class TestTailBound:
    @pytest.mark.parametrize("alpha", ALPHAS)
    @pytest.mark.parametrize("d", [10, 30])
    def test_all_final_vectors_obey_bound(self, alpha, d):
        basis = jacobi.converge_spectrum(alpha, d, tol=1e-9)
        assert basis.report.converged
        for p in basis.pairs:
            within, bound = jacobi.tail_decay_check(p, alpha)
            assert within, f"tail {abs(p.vector[-1]):.3e} exceeds bound {bound:.3e}"
        ok(f"tail-bound[alpha={alpha}, d={d}] N_final={basis.report.final_size}")


class TestIsometry:
    @pytest.mark.parametrize("alpha", ALPHAS)
    def test_gram_deviation_up_to_30(self, alpha):
        worst = 0.0
        for d in (1, 2, 3, 5, 10, 30):
            basis = smoothed_basis(d, alpha, tol=1e-9)
            worst = max(worst, andrews.gram_deviation(basis.functions))
        assert worst < 1e-9
        ok(f"isometry[alpha={alpha}, d<=30] worst Gram dev {worst:.2e}")


class TestSpectralSpatialIdentity:
    def test_hundred_random_functions(self):
        rng = np.random.default_rng(77)
        worst = 0.0
        for i in range(100):
            c, s = random_harmonic_coeffs(rng, 64)
            f = HarmonicFunction(c, s)
            alpha = ALPHAS[i % 3]
            exact = harmonic.spatial_spectral_variation(f, alpha)
            quad = harmonic.spatial_spectral_variation_quadrature(f, alpha, 4096)
            worst = max(worst, abs(exact - quad) / (1.0 + abs(exact)))
        assert worst < 1e-6
        ok(f"spectral-spatial-identity[100 fns, K<=64] worst rel dev {worst:.2e}")


class TestLowerBoundDominance:
    def _random_orthogonal(self, rng, d):
        Q, R = np.linalg.qr(rng.standard_normal((d, d)))
        return Q * np.sign(np.diag(R))

    def test_hundred_random_bases(self, iris):
        rng = np.random.default_rng(101)
        model_iris = pca.fit(iris)
        model_syn = PcaModel(
            np.eye(9), np.sort(rng.uniform(0.2, 5.0, 9))[::-1], np.zeros(9), 11
        )
        cases = [(model_iris, classic_basis(4)), (model_syn, classic_basis(9))]
        checked = 0
        for model, base in cases:
            bound = mean_quadratic_variation(base, model).lower_bound
            reference = mean_quadratic_variation(base, model).value
            d = model.dim
            for _ in range(25):  # rotations
                basis = base
                for _ in range(int(rng.integers(1, 4))):
                    j = int(rng.integers(1, (d - 1) // 2 + 1))
                    basis = rotate_pair(basis, j, float(rng.uniform(0, 2 * np.pi)))
                value = mean_quadratic_variation(basis, model).value
                assert value >= bound - 1e-9
                assert abs(value - reference) <= 1e-12 * (1.0 + abs(reference))
                checked += 1
            for _ in range(25):  # orthogonal mixtures
                Q = self._random_orthogonal(rng, d)
                mixed = tuple(
                    harmonic.linear_combination(base.functions, Q[:, i]) for i in range(d)
                )
                value = mean_quadratic_variation(AndrewsBasis(mixed, MODE_CLASSIC), model).value
                assert value >= bound - 1e-9
                checked += 1
        assert checked == 100
        ok("floor-dominance[100 random bases] objective never dips below the floor")


class TestOptimalityOrdering:
    @pytest.mark.parametrize("name", ["iris", "breast-cancer", "diabetes"])
    def test_smoothed_never_worse_than_classic(self, registry, name):
        from andrewsplot import dataset as dsmod

        entry = registry[name]
        ds = dsmod.load_csv(entry.path, entry.label_spec)
        model = pca.fit(ds)
        spectrum = jacobi.converge_spectrum(1.0, model.dim, tol=1e-9)
        smooth = mean_spatial_spectral_variation(
            andrews.basis_from_spectrum(spectrum), model, 1.0
        )
        classic = mean_spatial_spectral_variation(
            classic_basis(model.dim), model, 1.0, spectrum=spectrum
        )
        assert smooth.value <= classic.value + 1e-9
        assert abs(smooth.rel_gap) < 1e-6
        ok(
            f"optimality-ordering[{name}] smoothed {smooth.value:.6e} <= "
            f"classic {classic.value:.6e}, rel gap {smooth.rel_gap:.2e}"
        )


class TestEndToEndDeterminism:
    def test_cli_plot_byte_identical(self, tmp_path):
        payloads = []
        for name in ("one.svg", "two.svg"):
            out = tmp_path / name
            code = cli.main(
                ["plot", "--dataset", "iris", "--label-col", "species", "--out", str(out)]
            )
            assert code == 0
            payloads.append(out.read_bytes())
        assert payloads[0] == payloads[1]
        ok("determinism[cli plot] byte-identical SVG across runs")

    def test_spectrum_first_row_to_twelve_digits(self, capsys):
        code = cli.main(["spectrum", "--alpha", "1", "--d", "3", "--n0", "2"])
        assert code == 0
        lines = capsys.readouterr().out.splitlines()
        first = next(l for l in lines if l.strip().startswith("2 "))
        values = [float(v) for v in first.split()[1:]]
        expected = [1.0, (9.0 - np.sqrt(13.0)) / 2.0, 4.0]
        dev = np.max(np.abs(np.array(values) - expected))
        assert dev < 1e-12
        ok(f"determinism[spectrum first row] dev {dev:.1e}")


class TestPerformance:
    def test_converge_thirty_modes_under_five_seconds(self):
        start = time.perf_counter()
        basis = jacobi.converge_spectrum(1.0, 30, tol=1e-9)
        elapsed = time.perf_counter() - start
        assert basis.report.converged
        assert elapsed < 5.0
        ok(f"performance[converge d=30] {elapsed:.3f}s")

    def test_full_iris_ssqv_plot_under_two_seconds(self, tmp_path):
        out = tmp_path / "iris_ssqv.svg"
        start = time.perf_counter()
        code = cli.main(
            [
                "plot", "--dataset", "iris", "--label-col", "species",
                "--mode", "ssqv", "--alpha", "1", "--out", str(out),
            ]
        )
        elapsed = time.perf_counter() - start
        assert code == 0 and out.exists()
        assert elapsed < 2.0
        ok(f"performance[iris ssqv plot] {elapsed:.3f}s")
