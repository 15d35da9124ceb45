"""Shared request model and compute pipeline behind the CLI and the service.

Both front ends build a ComputeRequest, run it through ``run_compute``, and
serialize the same response document, so identical logical requests produce
identical bytes regardless of the entry point.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional, Union

from . import andrews, dataset, jacobi, pca, render
from .andrews import AndrewsBasis, MODE_CLASSIC, MODE_SSQV
from .dataset import Dataset, LabelSpec
from .jacobi import SpectralBasis


class RequestError(ValueError):
    """Malformed or inconsistent compute request."""


class DatasetNotFoundError(KeyError):
    pass


def bundled_data_dir() -> Path:
    return Path(resources.files("andrewsplot").joinpath("data"))


@dataclass(frozen=True)
class DatasetEntry:
    id: str
    path: Path
    label_spec: LabelSpec


def load_registry(datasets_dir: Union[str, Path, None] = None) -> dict:
    """Datasets available to the service: a ``datasets.json`` manifest when
    present, otherwise every ``*.csv`` in the directory (unlabeled)."""
    root = Path(datasets_dir) if datasets_dir is not None else bundled_data_dir()
    if not root.is_dir():
        raise DatasetNotFoundError(f"datasets directory not found: {root}")
    manifest = root / "datasets.json"
    entries = {}
    if manifest.is_file():
        for item in json.loads(manifest.read_text(encoding="utf-8")):
            mode = item.get("label_mode", "none")
            column = item.get("label_column")
            spec = LabelSpec(mode, column) if mode != "none" else LabelSpec.none()
            entries[item["id"]] = DatasetEntry(item["id"], root / item["file"], spec)
    else:
        for path in sorted(root.glob("*.csv")):
            entries[path.stem] = DatasetEntry(path.stem, path, LabelSpec.none())
    return entries


@dataclass(frozen=True)
class ComputeRequest:
    dataset: str
    mode: str = MODE_CLASSIC
    alpha: Optional[float] = None
    samples: int = 512
    center: bool = True
    standardize: bool = False
    label: LabelSpec = LabelSpec.none()
    tol: float = 1e-9
    size0: Optional[int] = None
    size_max: int = 4096
    want_bands: bool = False

    def __post_init__(self):
        if self.mode not in (MODE_CLASSIC, MODE_SSQV):
            raise RequestError(f"mode must be 'classic' or 'ssqv', got {self.mode!r}")
        if self.mode == MODE_SSQV:
            if self.alpha is None:
                raise RequestError("mode 'ssqv' requires alpha")
            if self.alpha <= 0:
                raise RequestError("alpha must be positive")
        elif self.alpha is not None:
            raise RequestError("alpha is only meaningful for mode 'ssqv'")
        if self.samples < 2:
            raise RequestError("samples must be at least 2")
        if self.tol <= 0:
            raise RequestError("tol must be positive")


_REQUEST_FIELDS = {
    "dataset", "csv", "mode", "alpha", "samples", "center", "standardize",
    "label", "tol", "size0", "size_max", "want_bands",
}


def request_from_json(body: dict) -> tuple[ComputeRequest, Optional[str]]:
    """Parse a request body; returns the request plus inline CSV text if any."""
    if not isinstance(body, dict):
        raise RequestError("request body must be a JSON object")
    unknown = set(body) - _REQUEST_FIELDS
    if unknown:
        raise RequestError(f"unknown request fields: {sorted(unknown)}")
    inline_csv = body.get("csv")
    if inline_csv is not None and not isinstance(inline_csv, str):
        raise RequestError("'csv' must be a string")
    name = body.get("dataset")
    if inline_csv is None and not isinstance(name, str):
        raise RequestError("'dataset' (string) is required")

    label_spec = LabelSpec.none()
    lab = body.get("label")
    if lab is not None:
        if not isinstance(lab, dict) or "mode" not in lab:
            raise RequestError("'label' must be an object with a 'mode'")
        try:
            label_spec = LabelSpec(lab["mode"], lab.get("column"))
        except dataset.DatasetError as exc:
            raise RequestError(str(exc)) from exc

    def _num(key, default, kind):
        v = body.get(key, default)
        if v is None:
            return None
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise RequestError(f"{key!r} must be a number")
        return kind(v)

    def _flag(key, default):
        v = body.get(key, default)
        if not isinstance(v, bool):
            raise RequestError(f"{key!r} must be a boolean")
        return v

    try:
        req = ComputeRequest(
            dataset=name if name is not None else "",
            mode=body.get("mode", MODE_CLASSIC),
            alpha=_num("alpha", None, float),
            samples=_num("samples", 512, int),
            center=_flag("center", True),
            standardize=_flag("standardize", False),
            label=label_spec,
            tol=_num("tol", 1e-9, float),
            size0=_num("size0", None, int),
            size_max=_num("size_max", 4096, int),
            want_bands=_flag("want_bands", False),
        )
    except RequestError:
        raise
    except (TypeError, ValueError) as exc:
        raise RequestError(str(exc)) from exc
    return req, inline_csv


def prepare_dataset(ds: Dataset, req: ComputeRequest) -> Dataset:
    return dataset.standardize(ds) if req.standardize else ds


def converge_for(req: ComputeRequest, d: int) -> SpectralBasis:
    return jacobi.converge_spectrum(
        req.alpha, d, tol=req.tol, size0=req.size0, size_max=req.size_max
    )


def build_basis(req: ComputeRequest, d: int, spectrum: Optional[SpectralBasis] = None) -> AndrewsBasis:
    if req.mode == MODE_CLASSIC:
        return andrews.classic_basis(d)
    if spectrum is None:
        spectrum = converge_for(req, d)
    return andrews.basis_from_spectrum(spectrum)


@dataclass(frozen=True)
class ComputeResult:
    model: "pca.PcaModel"
    basis: AndrewsBasis
    curves: "render.CurveSet"
    bands: list
    summary: "andrews.ObjectiveSummary"
    eigenvalues: object
    report: object
    warnings: list


def run(req: ComputeRequest, ds: Dataset, spectrum: Optional[SpectralBasis] = None) -> ComputeResult:
    """Full pipeline: fit, basis, objective, sampling, bands."""
    ds = prepare_dataset(ds, req)
    model = pca.fit(ds, center=req.center)
    warnings = pca.degeneracy_warnings(model)

    if req.mode == MODE_SSQV and spectrum is None:
        spectrum = converge_for(req, model.dim)
    basis = build_basis(req, model.dim, spectrum)
    if req.mode == MODE_CLASSIC:
        summary = andrews.mean_quadratic_variation(basis, model)
        eigenvalues = andrews.classic_eigenvalues(model.dim)
        report = None
    else:
        summary = andrews.mean_spatial_spectral_variation(basis, model, req.alpha)
        eigenvalues = basis.eigenvalues
        report = basis.report
        warnings = warnings + spectrum.near_tie_warnings()

    cs = render.sample_curves(basis, model, ds, samples=req.samples)
    bands = render.envelopes(cs) if (req.want_bands and ds.labels is not None) else []
    return ComputeResult(model, basis, cs, bands, summary, eigenvalues, report, warnings)


def document_from_result(result: ComputeResult) -> dict:
    doc = render.document(result.curves, result.bands, result.summary, result.eigenvalues)
    doc["report"] = report_dict(result.report)
    doc["warnings"] = result.warnings
    return doc


def run_compute(
    req: ComputeRequest, ds: Dataset, spectrum: Optional[SpectralBasis] = None
) -> dict:
    """Response document for a request (the emit_json schema plus report and
    warnings); identical logical requests produce identical documents."""
    return document_from_result(run(req, ds, spectrum))


def report_dict(report) -> Optional[dict]:
    if report is None:
        return None
    return {
        "N_final": report.final_size,
        "max_last_delta": report.max_last_delta,
        "converged": report.converged,
        "tail_bound_ok": report.tail_bound_ok,
        "schedule": list(report.schedule),
    }
