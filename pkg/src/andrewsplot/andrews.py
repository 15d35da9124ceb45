"""Assembly of optimal curve bases and evaluation of their mean objectives.

A d-dimensional data point embeds into L2([0,1]) as a linear combination of d
orthonormal functions, pairing the point's PCA scores (singular values
descending) with basis functions ordered by ascending smoothness cost. The
classic trigonometric basis attains the mean quadratic variation floor
exactly; the smoothed basis attains the spatial-spectral floor in the limit
of the truncated operator spectrum.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import harmonic, jacobi
from .harmonic import HarmonicFunction
from .jacobi import ConvergenceReport, SpectralBasis
from .pca import PcaModel, scores

MODE_CLASSIC = "classic"
MODE_SSQV = "ssqv"

GRAM_TOL = 1e-9


class AndrewsError(ValueError):
    pass


class IsometryError(AndrewsError):
    """The supplied functions are not orthonormal to within tolerance."""


class NonConvergedError(RuntimeError):
    """Truncation cap hit before the spectrum settled; carries the report."""

    def __init__(self, message: str, report: ConvergenceReport):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class AndrewsBasis:
    """Orthonormal functions phi_1..phi_d defining an isometric embedding."""

    functions: tuple
    mode: str
    alpha: Optional[float] = None
    eigenvalues: Optional[np.ndarray] = None
    report: Optional[ConvergenceReport] = None

    def __post_init__(self):
        object.__setattr__(self, "functions", tuple(self.functions))
        if not self.functions:
            raise AndrewsError("basis needs at least one function")
        if self.mode not in (MODE_CLASSIC, MODE_SSQV):
            raise AndrewsError(f"unknown mode {self.mode!r}")
        dev = gram_deviation(self.functions)
        if dev >= GRAM_TOL:
            raise IsometryError(f"Gram deviation {dev:.3e} >= {GRAM_TOL}")
        if self.eigenvalues is not None:
            ev = np.asarray(self.eigenvalues, dtype=float)
            ev.setflags(write=False)
            object.__setattr__(self, "eigenvalues", ev)

    @property
    def dim(self) -> int:
        return len(self.functions)


@dataclass(frozen=True)
class ObjectiveSummary:
    value: float
    lower_bound: float
    rel_gap: float

    def __post_init__(self):
        if self.value < self.lower_bound - 1e-9 * (1.0 + abs(self.lower_bound)):
            raise AndrewsError(
                f"objective {self.value!r} fell below its floor {self.lower_bound!r}"
            )


def gram_deviation(functions: Sequence[HarmonicFunction]) -> float:
    """max |<phi_i, phi_j> - delta_ij| over all pairs."""
    d = len(functions)
    G = np.empty((d, d))
    for i in range(d):
        for j in range(i, d):
            G[i, j] = G[j, i] = harmonic.inner_product(functions[i], functions[j])
    return float(np.max(np.abs(G - np.eye(d))))


def _summary(value: float, bound: float) -> ObjectiveSummary:
    denom = abs(bound) if bound != 0.0 else 1.0
    return ObjectiveSummary(value, bound, (value - bound) / denom)


def classic_eigenvalues(d: int) -> np.ndarray:
    """Ascending derivative-penalty eigenvalues of the classic basis:
    0, 4pi^2, 4pi^2, 16pi^2, 16pi^2, ..."""
    k = np.arange(1, d + 1)
    return 4.0 * np.pi**2 * (k // 2).astype(float) ** 2


def classic_basis(d: int) -> AndrewsBasis:
    """The constant followed by sqrt(2)cos/sin pairs of increasing frequency."""
    if d < 1:
        raise AndrewsError("dimension must be at least 1")
    funcs = [harmonic.constant(1.0)]
    for i in range(2, d + 1):
        j = i // 2
        funcs.append(harmonic.cosine(j) if i % 2 == 0 else harmonic.sine(j))
    return AndrewsBasis(tuple(funcs), MODE_CLASSIC, eigenvalues=classic_eigenvalues(d))


def smoothed_basis(
    d: int,
    alpha: float,
    tol: float = 1e-9,
    size0: Optional[int] = None,
    size_max: int = 4096,
) -> AndrewsBasis:
    """Basis from the lowest d eigenvectors of the truncated smoothing
    operators: cosine-parity vectors become cosine series (constant included),
    sine-parity vectors become sine series, ordered by ascending eigenvalue.
    """
    if d < 1:
        raise AndrewsError("dimension must be at least 1")
    spectrum = jacobi.converge_spectrum(alpha, d, tol=tol, size0=size0, size_max=size_max)
    return basis_from_spectrum(spectrum)


def basis_from_spectrum(spectrum: SpectralBasis) -> AndrewsBasis:
    """Turn converged eigenpairs into an orthonormal function basis."""
    report = spectrum.report
    if report is not None and not report.converged:
        raise NonConvergedError(
            f"spectrum not converged at truncation size {report.final_size} "
            f"(last delta {report.max_last_delta:.3e})",
            report,
        )
    for i in spectrum.degenerate_gaps():
        a, b = spectrum.pairs[i], spectrum.pairs[i + 1]
        if a.parity == b.parity:
            # within one parity the spectrum is simple, so an observed tie
            # means the eigenproblem itself degenerated
            raise AndrewsError(
                f"merged spectrum is degenerate at position {i} within the "
                f"{a.parity} block; the optimal basis is not unique"
            )
        # cross-parity ties are expected at large alpha or index: the two
        # families stay structurally orthogonal, only their order is convention
    funcs = []
    for pair in spectrum.pairs:
        pair = jacobi.canonical_sign(pair)
        if pair.parity == jacobi.COS:
            funcs.append(harmonic.from_coefficients(pair.vector, ()))
        elif pair.parity == jacobi.SIN:
            funcs.append(harmonic.from_coefficients((), pair.vector))
        else:
            raise AndrewsError("spectral basis has an untagged eigenpair")
    return AndrewsBasis(
        tuple(funcs),
        MODE_SSQV,
        alpha=spectrum.alpha,
        eigenvalues=spectrum.values,
        report=report,
    )


def embed(basis: AndrewsBasis, model: PcaModel, x: np.ndarray) -> HarmonicFunction:
    """Curve for one point: sum_i score_i * phi_i, i-th score (singular values
    descending) paired with the i-th basis function (cost ascending)."""
    if basis.dim != model.dim:
        raise AndrewsError(f"basis dimension {basis.dim} != model dimension {model.dim}")
    return harmonic.linear_combination(basis.functions, scores(model, x))


def _mean_objective(basis: AndrewsBasis, model: PcaModel, per_function) -> float:
    # The score Gram U^T X X^T U is diag(sigma^2) exactly, so the mean of the
    # quadratic form over the dataset reduces to a sigma^2-weighted sum of the
    # per-function costs; cross pairings carry zero weight.
    if basis.dim != model.dim:
        raise AndrewsError(f"basis dimension {basis.dim} != model dimension {model.dim}")
    sig2 = model.sigma**2
    return float(sum(s2 * per_function(f) for s2, f in zip(sig2, basis.functions))) / model.n_points


def spectral_lower_bound(eigenvalues: Sequence[float], singular_values: Sequence[float]) -> float:
    """sum_i lambda_i * sigma_i^2 with lambda ascending and sigma descending.

    This is the floor of the mean quadratic form over all isometric
    embeddings; orderings are enforced because the pairing is the point.
    """
    lam = np.asarray(eigenvalues, dtype=float)
    sig = np.asarray(singular_values, dtype=float)
    if lam.shape != sig.shape or lam.ndim != 1:
        raise AndrewsError("eigenvalues and singular values must have equal length")
    # the deterministic merge tie-break may order two parity-tied eigenvalues
    # a hair against the float comparison, so allow tie-sized descents
    lam_slack = 1e-12 * (1.0 + np.abs(lam[:-1])) if lam.size > 1 else 0.0
    if np.any(np.diff(lam) < -lam_slack):
        raise AndrewsError("eigenvalues must be ascending")
    sig_slack = 1e-12 * (1.0 + np.abs(sig[:-1])) if sig.size > 1 else 0.0
    if np.any(np.diff(sig) > sig_slack):
        raise AndrewsError("singular values must be descending")
    return float(lam @ sig**2)


def mean_quadratic_variation(basis: AndrewsBasis, model: PcaModel) -> ObjectiveSummary:
    """Mean of ||f'||^2 over the embedded dataset, with its closed-form floor
    (1/n) sum_{k>=2} 4 pi^2 floor(k/2)^2 sigma_k^2."""
    value = _mean_objective(basis, model, harmonic.quadratic_variation)
    bound = spectral_lower_bound(classic_eigenvalues(model.dim), model.sigma) / model.n_points
    return _summary(value, bound)


def mean_spatial_spectral_variation(
    basis: AndrewsBasis,
    model: PcaModel,
    alpha: float,
    spectrum: Optional[SpectralBasis] = None,
) -> ObjectiveSummary:
    """Mean smoothing penalty over the embedded dataset against the floor
    (1/n) sum_k lambda_k(alpha) sigma_k^2 from the converged spectrum.

    For a smoothed basis alpha must match the basis; for other bases the
    spectrum is converged on demand (or supplied to avoid recomputation).
    """
    if alpha <= 0:
        raise AndrewsError("alpha must be positive")
    if basis.mode == MODE_SSQV:
        if basis.alpha is None or abs(basis.alpha - alpha) > 0:
            raise AndrewsError(
                f"alpha {alpha!r} does not match the basis alpha {basis.alpha!r}"
            )
        lam = basis.eigenvalues
    else:
        if spectrum is None:
            spectrum = jacobi.converge_spectrum(alpha, model.dim)
        if abs(spectrum.alpha - alpha) > 0:
            raise AndrewsError("supplied spectrum was converged at a different alpha")
        lam = spectrum.values
    value = _mean_objective(
        basis, model, lambda f: harmonic.spatial_spectral_variation(f, alpha)
    )
    bound = spectral_lower_bound(lam, model.sigma) / model.n_points
    return _summary(value, bound)


def rotate_pair(basis: AndrewsBasis, j: int, theta: float) -> AndrewsBasis:
    """Rotate the frequency-j cosine/sine pair by theta within its span.

    Only meaningful for the classic family, where each frequency contributes a
    two-dimensional space of equally smooth choices; the Gram matrix and the
    mean quadratic variation are unchanged.
    """
    if basis.mode != MODE_CLASSIC:
        raise AndrewsError("pair rotation applies to the classic basis only")
    if j < 1 or 2 * j + 1 > basis.dim:
        raise AndrewsError(f"harmonic index {j} out of range for dimension {basis.dim}")
    c, s = np.cos(theta), np.sin(theta)
    funcs = list(basis.functions)
    a, b = funcs[2 * j - 1], funcs[2 * j]  # phi_{2j}, phi_{2j+1}, zero-based list
    funcs[2 * j - 1] = harmonic.linear_combination([a, b], [c, s])
    funcs[2 * j] = harmonic.linear_combination([a, b], [-s, c])
    return AndrewsBasis(tuple(funcs), MODE_CLASSIC, eigenvalues=basis.eigenvalues)
