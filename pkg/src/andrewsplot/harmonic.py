"""Exact algebra on finite real Fourier series.

Functions are represented in the orthonormal basis
{1, sqrt(2)cos(2*pi*k*t), sqrt(2)sin(2*pi*k*t)} of L2([0,1]), so inner
products, smoothness functionals, and norms are exact finite sums over
coefficients; quadrature appears only as a cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

TWO_PI = 2.0 * np.pi
SQRT2 = np.sqrt(2.0)


class HarmonicError(ValueError):
    pass


@dataclass(frozen=True)
class HarmonicFunction:
    """f(t) = c[0] + sqrt(2) * sum_k (c[k] cos(2 pi k t) + s[k] sin(2 pi k t)).

    cos_coeffs has indices 0..K (entry 0 is the constant term), sin_coeffs
    holds indices 1..K starting at position 0.
    """

    cos_coeffs: np.ndarray
    sin_coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.cos_coeffs, dtype=float))
        s = np.atleast_1d(np.asarray(self.sin_coeffs, dtype=float)) if np.size(self.sin_coeffs) else np.zeros(0)
        if c.ndim != 1 or s.ndim != 1:
            raise HarmonicError("coefficient arrays must be one-dimensional")
        if c.size == 0:
            c = np.zeros(1)
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(s))):
            raise HarmonicError("coefficients must be finite")
        c.setflags(write=False)
        s.setflags(write=False)
        object.__setattr__(self, "cos_coeffs", c)
        object.__setattr__(self, "sin_coeffs", s)

    @property
    def degree(self) -> int:
        return max(self.cos_coeffs.size - 1, self.sin_coeffs.size)

    def __call__(self, t):
        return evaluate(self, t)


def zero() -> HarmonicFunction:
    return HarmonicFunction(np.zeros(1), np.zeros(0))


def constant(value: float) -> HarmonicFunction:
    return HarmonicFunction(np.array([float(value)]), np.zeros(0))


def cosine(k: int, coeff: float = 1.0) -> HarmonicFunction:
    """coeff * sqrt(2) cos(2 pi k t); k = 0 gives the constant coeff * 1."""
    c = np.zeros(k + 1)
    c[k] = coeff
    return HarmonicFunction(c, np.zeros(0))


def sine(k: int, coeff: float = 1.0) -> HarmonicFunction:
    """coeff * sqrt(2) sin(2 pi k t) for k >= 1."""
    if k < 1:
        raise HarmonicError("sine harmonics start at k = 1")
    s = np.zeros(k)
    s[k - 1] = coeff
    return HarmonicFunction(np.zeros(1), s)


def from_coefficients(cos_part: Iterable[float], sin_part: Iterable[float]) -> HarmonicFunction:
    """Assemble a function from its cosine and sine coefficient sequences.

    This is the coefficient-domain identification of a real function with the
    pair (constant+cosine coefficients, sine coefficients); it preserves the
    L2 norm exactly: ||f||^2 = sum(cos_part^2) + sum(sin_part^2).
    """
    c = np.asarray(list(cos_part), dtype=float)
    s = np.asarray(list(sin_part), dtype=float)
    if c.size == 0:
        c = np.zeros(1)
    return HarmonicFunction(c, s)


def _padded_pair(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = max(a.size, b.size)
    if a.size < n:
        a = np.concatenate([a, np.zeros(n - a.size)])
    if b.size < n:
        b = np.concatenate([b, np.zeros(n - b.size)])
    return a, b


def evaluate(f: HarmonicFunction, t):
    """Evaluate the finite series at t in [0, 1] (scalar or array)."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0.0) or np.any(t_arr > 1.0):
        raise HarmonicError("evaluation points must lie in [0, 1]")
    scalar = t_arr.ndim == 0
    tv = np.atleast_1d(t_arr)
    c, s = f.cos_coeffs, f.sin_coeffs
    out = np.full(tv.shape, c[0], dtype=float)
    kc = np.arange(1, c.size)
    if kc.size:
        out = out + SQRT2 * (c[1:] @ np.cos(TWO_PI * np.outer(kc, tv)))
    ks = np.arange(1, s.size + 1)
    if ks.size:
        out = out + SQRT2 * (s @ np.sin(TWO_PI * np.outer(ks, tv)))
    return float(out[0]) if scalar else out


def inner_product(f: HarmonicFunction, g: HarmonicFunction) -> float:
    """L2([0,1]) inner product, exact in coefficient space (Parseval)."""
    fc, gc = _padded_pair(f.cos_coeffs, g.cos_coeffs)
    fs, gs = _padded_pair(f.sin_coeffs, g.sin_coeffs)
    return float(fc @ gc + fs @ gs)


def l2_norm(f: HarmonicFunction) -> float:
    return float(np.sqrt(inner_product(f, f)))


def quadratic_variation(f: HarmonicFunction) -> float:
    """||f'||^2 on [0,1]: sum over k of 4 pi^2 k^2 (c_k^2 + s_k^2).

    Non-negative, and zero exactly when f is constant.
    """
    return quadratic_variation_pairing(f, f)


def quadratic_variation_pairing(f: HarmonicFunction, g: HarmonicFunction) -> float:
    """Bilinear derivative pairing <f', g'> in coefficient space."""
    fc, gc = _padded_pair(f.cos_coeffs, g.cos_coeffs)
    fs, gs = _padded_pair(f.sin_coeffs, g.sin_coeffs)
    kc = np.arange(fc.size, dtype=float)
    ks = np.arange(1, fs.size + 1, dtype=float)
    acc = float((kc**2 * fc) @ gc)
    if ks.size:
        acc += float((ks**2 * fs) @ gs)
    return 4.0 * np.pi**2 * acc


def spatial_spectral_variation(f: HarmonicFunction, alpha: float) -> float:
    """Smoothness-plus-spectral-locality penalty of f, exact in coefficients.

    Equals (alpha / 4 pi^2) * ||f'||^2 plus the squared first differences of
    the complex Fourier coefficients, evaluated as a pair of tridiagonal
    quadratic forms on the cosine and sine coefficient vectors.
    """
    return spatial_spectral_variation_pairing(f, f, alpha)


def spatial_spectral_variation_pairing(
    f: HarmonicFunction, g: HarmonicFunction, alpha: float
) -> float:
    """Bilinear version of :func:`spatial_spectral_variation`."""
    if alpha <= 0:
        raise HarmonicError("alpha must be positive")
    fc, gc = _padded_pair(f.cos_coeffs, g.cos_coeffs)
    fs, gs = _padded_pair(f.sin_coeffs, g.sin_coeffs)

    kc = np.arange(fc.size, dtype=float)
    acc = float(((alpha * kc**2 + 2.0) * fc) @ gc)
    if fc.size > 1:
        acc -= SQRT2 * (fc[0] * gc[1] + fc[1] * gc[0])
        acc -= float(fc[1:-1] @ gc[2:] + fc[2:] @ gc[1:-1])

    ks = np.arange(1, fs.size + 1, dtype=float)
    if ks.size:
        acc += float(((alpha * ks**2 + 2.0) * fs) @ gs)
        acc -= float(fs[:-1] @ gs[1:] + fs[1:] @ gs[:-1])
    return acc


def spatial_spectral_variation_quadrature(
    f: HarmonicFunction, alpha: float, quadrature_points: int
) -> float:
    """Cross-check of :func:`spatial_spectral_variation` through the spatial
    identity: (alpha/4 pi^2)||f'||^2 + 2 * integral (1 - cos 2 pi t) f(t)^2 dt,
    with the integral done by the composite trapezoid rule.

    ``quadrature_points`` counts the sample nodes (both endpoints included)
    and must be at least 4*degree + 8 so the periodic rule is alias-free.
    """
    if alpha <= 0:
        raise HarmonicError("alpha must be positive")
    needed = 4 * f.degree + 8
    if quadrature_points < needed:
        raise HarmonicError(
            f"need at least {needed} quadrature points for degree {f.degree}"
        )
    t = np.linspace(0.0, 1.0, int(quadrature_points))
    values = evaluate(f, t)
    integrand = (1.0 - np.cos(TWO_PI * t)) * values**2
    integral = np.trapezoid(integrand, t)
    return alpha / (4.0 * np.pi**2) * quadratic_variation(f) + 2.0 * float(integral)


def linear_combination(
    functions: Sequence[HarmonicFunction], weights: Sequence[float]
) -> HarmonicFunction:
    """sum_i weights[i] * functions[i], zero-padding to the largest degree."""
    if len(functions) != len(weights):
        raise HarmonicError("weights and functions must have equal length")
    if not functions:
        return zero()
    nc = max(f.cos_coeffs.size for f in functions)
    ns = max(f.sin_coeffs.size for f in functions)
    c = np.zeros(nc)
    s = np.zeros(ns)
    for w, f in zip(weights, functions):
        c[: f.cos_coeffs.size] += w * f.cos_coeffs
        if f.sin_coeffs.size:
            s[: f.sin_coeffs.size] += w * f.sin_coeffs
    return HarmonicFunction(c, s)
