"""Truncated Jacobi operators on Fourier coefficients and their low spectra.

The smoothing penalty splits over the cosine and sine coefficient families
into two self-adjoint tridiagonal operators with diagonal alpha*k^2 + 2 and
off-diagonal -1 (the cosine block couples the constant mode with weight
-sqrt(2)). Truncating to the leading N x N block gives eigenvalues that
decrease monotonically to the operator's as N grows, so doubling N until the
low eigenvalues stop moving is a sound stopping rule.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg import eigh_tridiagonal

COS = "cos"
SIN = "sin"

# Absolute bisection tolerance handed to the LAPACK solver. A tiny positive
# value makes the converged interval width ~eps*|lambda| (relative accuracy);
# the default would stop at ~eps*||T||, which for large alpha*N^2 is coarser
# than the monotonicity slack the convergence report promises.
_BISECT_TOL = 1e-300

MERGE_TIE_TOL = 1e-12
RESIDUAL_TOL = 1e-9
PARITY_GAP_TOL = 1e-8


class JacobiError(ValueError):
    pass


class EigenSolverError(RuntimeError):
    """LAPACK failed to converge on some eigenpair."""


class TailBoundInapplicableError(ValueError):
    """The decay bound's denominator is not positive at this truncation size."""


@dataclass(frozen=True)
class TridiagMatrix:
    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        d = np.atleast_1d(np.asarray(self.diag, dtype=float))
        e = np.atleast_1d(np.asarray(self.offdiag, dtype=float)) if np.size(self.offdiag) else np.zeros(0)
        if d.size < 1:
            raise JacobiError("matrix must have at least one row")
        if e.size != d.size - 1:
            raise JacobiError("offdiag must have length N - 1")
        d.setflags(write=False)
        e.setflags(write=False)
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", e)

    @property
    def size(self) -> int:
        return self.diag.size

    def matvec(self, v: np.ndarray) -> np.ndarray:
        out = self.diag * v
        if self.offdiag.size:
            out[:-1] += self.offdiag * v[1:]
            out[1:] += self.offdiag * v[:-1]
        return out

    @property
    def max_abs_entry(self) -> float:
        m = float(np.max(np.abs(self.diag)))
        if self.offdiag.size:
            m = max(m, float(np.max(np.abs(self.offdiag))))
        return m


@dataclass(frozen=True)
class EigenPair:
    value: float
    vector: np.ndarray
    parity: Optional[str]  # COS, SIN, or None for a generic matrix
    size: int              # truncation size the pair was computed at

    def __post_init__(self):
        v = np.asarray(self.vector, dtype=float)
        v.setflags(write=False)
        object.__setattr__(self, "vector", v)


@dataclass(frozen=True)
class ConvergenceReport:
    """Per-eigenvalue trace of the doubling schedule."""

    schedule: tuple          # truncation sizes visited, ascending
    histories: np.ndarray    # d x len(schedule), eigenvalues per size
    final_size: int
    max_last_delta: float    # max_k lambda_k(N) - lambda_k(2N) at the last step
    converged: bool
    tail_bound_ok: bool


@dataclass(frozen=True)
class SpectralBasis:
    """Lowest merged eigenpairs of the two parity blocks, values ascending."""

    pairs: tuple
    alpha: float
    report: Optional[ConvergenceReport] = None

    @property
    def values(self) -> np.ndarray:
        return np.array([p.value for p in self.pairs])

    @property
    def parities(self) -> tuple:
        return tuple(p.parity for p in self.pairs)

    def degenerate_gaps(self, gap_tol: float = MERGE_TIE_TOL) -> list:
        """Indices i where value[i+1] - value[i] <= gap_tol."""
        vals = self.values
        return [i for i in range(len(vals) - 1) if vals[i + 1] - vals[i] <= gap_tol]

    def near_tie_warnings(self, gap_tol: float = PARITY_GAP_TOL) -> list:
        """Flag cross-parity eigenvalue pairs closer than gap_tol.

        The two parity spectra are disjoint in exact arithmetic but their gaps
        shrink below floating-point resolution as the index or alpha grows;
        the merge order between such a pair is fixed by the deterministic
        tie-break rather than by the (unresolvable) true ordering, so the
        condition is flagged, never silently absorbed.
        """
        out = []
        for i in range(len(self.pairs) - 1):
            a, b = self.pairs[i], self.pairs[i + 1]
            if a.parity != b.parity and b.value - a.value < gap_tol:
                out.append(
                    f"eigenvalues {i + 1} ({a.parity}) and {i + 2} ({b.parity}) are "
                    f"within {b.value - a.value:.3e}; their order follows the "
                    "deterministic parity tie-break"
                )
        return out


def operator_block(alpha: float, parity: str, size: int) -> TridiagMatrix:
    """Leading size x size block of the cosine or sine smoothing operator.

    cosine block: diag (2, a+2, 4a+2, ..., a(N-1)^2+2), offdiag (-sqrt2, -1, ...)
    sine block:   diag (a+2, 4a+2, ..., aN^2+2),        offdiag (-1, -1, ...)
    """
    if alpha <= 0:
        raise JacobiError("alpha must be positive")
    if size < 1:
        raise JacobiError("size must be at least 1")
    if parity == COS:
        k = np.arange(size, dtype=float)
        off = np.full(size - 1, -1.0)
        if size > 1:
            off[0] = -np.sqrt(2.0)
    elif parity == SIN:
        k = np.arange(1, size + 1, dtype=float)
        off = np.full(size - 1, -1.0)
    else:
        raise JacobiError(f"parity must be {COS!r} or {SIN!r}, got {parity!r}")
    return TridiagMatrix(alpha * k**2 + 2.0, off)


def _check_pair(T: TridiagMatrix, value: float, vector: np.ndarray, tol: float, index: int):
    scale = abs(value) + T.max_abs_entry
    residual = float(np.linalg.norm(T.matvec(vector) - value * vector))
    if residual >= tol * scale:
        raise EigenSolverError(
            f"eigenpair {index} residual {residual:.3e} exceeds {tol:.1e} * {scale:.3e}"
        )
    if abs(float(np.linalg.norm(vector)) - 1.0) > 1e-12:
        raise EigenSolverError(f"eigenvector {index} is not unit norm")


def eigenpairs(T: TridiagMatrix, tol: float = 1e-9, parity: Optional[str] = None) -> list:
    """All eigenpairs of a symmetric tridiagonal matrix, values ascending.

    Residuals are checked against tol * (|lambda| + max|entry|); identical
    input yields identical output.
    """
    if tol <= 0:
        raise JacobiError("tol must be positive")
    if T.size == 1:
        w = np.array([T.diag[0]])
        V = np.ones((1, 1))
    else:
        try:
            w, V = eigh_tridiagonal(T.diag, T.offdiag)
        except np.linalg.LinAlgError as exc:
            raise EigenSolverError(str(exc)) from exc
    out = []
    for i in range(T.size):
        _check_pair(T, float(w[i]), V[:, i], tol, i)
        out.append(EigenPair(float(w[i]), V[:, i], parity, T.size))
    return out


def _lowest_block(alpha: float, parity: str, size: int, count: int) -> list:
    T = operator_block(alpha, parity, size)
    count = min(count, size)
    if size == 1:
        w = np.array([T.diag[0]])
        V = np.ones((1, 1))
    else:
        try:
            w, V = eigh_tridiagonal(
                T.diag, T.offdiag, select="i", select_range=(0, count - 1), tol=_BISECT_TOL
            )
        except np.linalg.LinAlgError as exc:
            raise EigenSolverError(str(exc)) from exc
    out = []
    for i in range(count):
        _check_pair(T, float(w[i]), V[:, i], RESIDUAL_TOL, i)
        out.append(canonical_sign(EigenPair(float(w[i]), V[:, i], parity, size)))
    return out


def lowest_modes(alpha: float, count: int, size: int) -> SpectralBasis:
    """Merge the two parity blocks at truncation ``size`` and keep the lowest
    ``count`` eigenpairs; an exact tie across parities prefers the cosine block.

    The two blocks hold 2*size modes in total; ``count`` beyond that is an
    error except for the one-past-the-end boundary, which returns everything.
    """
    if count < 1:
        raise JacobiError("count must be at least 1")
    if count > 2 * size + 1:
        raise JacobiError(f"count {count} too large for truncation size {size}")
    pairs_c = _lowest_block(alpha, COS, size, count)
    pairs_s = _lowest_block(alpha, SIN, size, count)

    merged = []
    i = j = 0
    while len(merged) < min(count, 2 * size) and (i < len(pairs_c) or j < len(pairs_s)):
        if i < len(pairs_c) and j < len(pairs_s):
            lc, ls = pairs_c[i].value, pairs_s[j].value
            take_cos = lc <= ls or abs(lc - ls) < MERGE_TIE_TOL
        else:
            take_cos = i < len(pairs_c)
        if take_cos:
            merged.append(pairs_c[i])
            i += 1
        else:
            merged.append(pairs_s[j])
            j += 1
    return SpectralBasis(tuple(merged), alpha)


def canonical_sign(pair: EigenPair) -> EigenPair:
    """Scale by +-1 so the largest-magnitude entry is positive (lowest index
    wins ties). Idempotent."""
    v = pair.vector
    j = int(np.argmax(np.abs(v)))
    if v[j] == 0.0:
        raise JacobiError("cannot orient the zero vector")
    if v[j] < 0.0:
        return EigenPair(pair.value, -v, pair.parity, pair.size)
    return pair


def tail_decay_check(pair: EigenPair, alpha: float) -> tuple[bool, float]:
    """Test the eigenvector's last entry against the closed-form decay bound
    2 / ((a N^2 + 2 - lambda)(a (N-1)^2 + 2 - lambda)).

    Raises TailBoundInapplicableError when N < 2 or the second denominator is
    not positive (the bound says nothing there).
    """
    N = pair.size
    if N < 2:
        raise TailBoundInapplicableError("bound needs truncation size >= 2")
    lam = pair.value
    d1 = alpha * N**2 + 2.0 - lam
    d2 = alpha * (N - 1) ** 2 + 2.0 - lam
    if d2 <= 0.0 or d1 <= 0.0:
        raise TailBoundInapplicableError(
            f"bound inapplicable: alpha(N-1)^2 + 2 = {alpha * (N - 1) ** 2 + 2.0:.6g} "
            f"must exceed lambda = {lam:.6g}"
        )
    bound = 2.0 / (d1 * d2)
    return bool(abs(float(pair.vector[-1])) <= bound), bound


def _all_tails_ok(basis: SpectralBasis) -> bool:
    for pair in basis.pairs:
        try:
            ok, _ = tail_decay_check(pair, basis.alpha)
        except TailBoundInapplicableError:
            return False
        if not ok:
            return False
    return True


def converge_spectrum(
    alpha: float,
    count: int,
    tol: float = 1e-9,
    size0: Optional[int] = None,
    size_max: int = 4096,
) -> SpectralBasis:
    """Double the truncation size until the lowest ``count`` merged eigenvalues
    move by less than ``tol``, returning the final basis with its report.

    Parameters
    ----------
    alpha : float
        Smoothing weight, > 0.
    count : int
        Number of low modes wanted.
    tol : float
        Absolute stopping tolerance on the per-eigenvalue doubling delta.
    size0, size_max : int
        Initial truncation size (default max(count, 32)) and the cap. If the
        cap is hit first the basis is still returned, flagged non-converged.
    """
    if tol <= 0:
        raise JacobiError("tol must be positive")
    if count < 1:
        raise JacobiError("count must be at least 1")
    if size0 is None:
        size0 = max(count, 32)
    if size_max < size0:
        raise JacobiError("size_max must be at least the initial size")
    if count > 2 * size_max + 1:
        raise JacobiError(f"count {count} unreachable even at size_max {size_max}")
    if 2 * size0 < count:
        raise JacobiError(
            f"initial size {size0} holds only {2 * size0} modes, need {count}"
        )

    schedule = [size0]
    basis = lowest_modes(alpha, count, size0)
    histories = [basis.values]
    converged = False
    max_last_delta = float("inf")

    size = size0
    while 2 * size <= size_max:
        size *= 2
        nxt = lowest_modes(alpha, count, size)
        schedule.append(size)
        histories.append(nxt.values)
        m = min(len(basis.pairs), len(nxt.pairs))
        max_last_delta = float(np.max(basis.values[:m] - nxt.values[:m]))
        basis = nxt
        if max_last_delta < tol:
            converged = True
            break

    report = ConvergenceReport(
        schedule=tuple(schedule),
        histories=np.column_stack(histories),
        final_size=schedule[-1],
        max_last_delta=max_last_delta,
        converged=converged,
        tail_bound_ok=_all_tails_ok(basis),
    )
    return SpectralBasis(basis.pairs, alpha, report)
