"""Self-check suite behind the ``verify`` subcommand.

Each check is a pure function of already-computed artifacts so a test harness
can feed in corrupted inputs and watch the right check fail.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import andrews, harmonic, render
from .andrews import AndrewsBasis, MODE_CLASSIC
from .dataset import Dataset
from .pca import PcaModel

GRAM_TOL = 1e-9
ATTAINMENT_TOL_CLASSIC = 1e-12
ATTAINMENT_TOL_SSQV = 1e-6
HISTORY_SLACK = 1e-10
SPATIAL_AGREEMENT_TOL = 1e-6


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def check_gram(basis: AndrewsBasis) -> CheckResult:
    dev = andrews.gram_deviation(basis.functions)
    return CheckResult(
        "gram-identity", dev < GRAM_TOL, f"max |G - I| = {dev:.3e} (tol {GRAM_TOL})"
    )


def check_attainment(basis: AndrewsBasis, model: PcaModel, alpha: Optional[float]) -> CheckResult:
    if basis.mode == MODE_CLASSIC:
        summary = andrews.mean_quadratic_variation(basis, model)
        tol, name = ATTAINMENT_TOL_CLASSIC, "mqv-attainment"
    else:
        summary = andrews.mean_spatial_spectral_variation(basis, model, alpha)
        tol, name = ATTAINMENT_TOL_SSQV, "ssqv-attainment"
    return CheckResult(
        name,
        abs(summary.rel_gap) < tol,
        f"objective {summary.value:.9e}, floor {summary.lower_bound:.9e}, "
        f"rel gap {summary.rel_gap:.3e} (tol {tol})",
    )


def check_histories(basis: AndrewsBasis) -> CheckResult:
    if basis.report is None:
        return CheckResult("monotone-histories", True, "not applicable (classic basis)")
    hist = basis.report.histories
    worst = float(np.max(np.diff(hist, axis=1))) if hist.shape[1] > 1 else 0.0
    return CheckResult(
        "monotone-histories",
        worst <= HISTORY_SLACK,
        f"largest eigenvalue increase across doublings {worst:.3e} (slack {HISTORY_SLACK})",
    )


def check_spatial_agreement(basis: AndrewsBasis, alpha: float) -> CheckResult:
    worst = 0.0
    for f in basis.functions:
        exact = harmonic.spatial_spectral_variation(f, alpha)
        quad = harmonic.spatial_spectral_variation_quadrature(f, alpha, 4 * f.degree + 64)
        worst = max(worst, abs(exact - quad) / (1.0 + abs(exact)))
    return CheckResult(
        "spectral-spatial-agreement",
        worst < SPATIAL_AGREEMENT_TOL,
        f"worst relative disagreement {worst:.3e} (tol {SPATIAL_AGREEMENT_TOL})",
    )


def check_band_containment(cs: render.CurveSet) -> CheckResult:
    if cs.labels is None or cs.n_curves == 0:
        return CheckResult("band-containment", True, "not applicable (no labels)")
    for band in render.envelopes(cs):
        rows = [i for i, lab in enumerate(cs.labels) if lab == band.label]
        member = cs.curves[rows]
        if np.any(member > band.upper) or np.any(member < band.lower):
            return CheckResult(
                "band-containment", False, f"curve escapes the {band.label!r} band"
            )
    return CheckResult("band-containment", True, f"{len(cs.label_order())} bands contain their members")


def run_checks(
    ds: Dataset,
    basis: AndrewsBasis,
    model: PcaModel,
    alpha: Optional[float] = None,
    samples: int = 256,
) -> list:
    """All verification checks for a prepared basis/model over a dataset."""
    alpha_eff = alpha if alpha is not None else 1.0
    cs = render.sample_curves(basis, model, ds, samples=samples)
    return [
        check_gram(basis),
        check_attainment(basis, model, alpha),
        check_histories(basis),
        check_spatial_agreement(basis, alpha_eff),
        check_band_containment(cs),
    ]


def exit_code(results: list) -> int:
    return 0 if all(r.passed for r in results) else 3


def format_table(results: list) -> str:
    width = max(len(r.name) for r in results)
    lines = []
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"{r.name:<{width}}  {status}  {r.detail}")
    return "\n".join(lines)
