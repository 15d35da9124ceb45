"""Curve sampling, per-class envelope bands, and deterministic SVG/JSON/CSV."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .andrews import AndrewsBasis, ObjectiveSummary
from .dataset import Dataset
from .harmonic import SQRT2, TWO_PI
from .pca import PcaModel, scores_matrix

# Fixed categorical palette, assigned by label order of first appearance.
PALETTE = (
    "#4269d0", "#efb118", "#ff725c", "#6cc5b0",
    "#3ca951", "#ff8ab7", "#a463f2", "#97bbf5",
)
UNLABELED_COLOR = "#555555"


class RenderError(ValueError):
    pass


@dataclass(frozen=True)
class CurveSet:
    """Curves sampled on a shared inclusive uniform grid over [0, 1]."""

    t: np.ndarray            # T grid points, t_i = i / (T - 1)
    curves: np.ndarray       # n x T values
    labels: Optional[tuple]
    point_ids: tuple

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        curves = np.asarray(self.curves, dtype=float)
        if t.ndim != 1 or t.size < 2:
            raise RenderError("grid must hold at least two points")
        if curves.ndim != 2 or curves.shape[1] != t.size:
            raise RenderError("curves must be n x T with T matching the grid")
        t.setflags(write=False)
        curves.setflags(write=False)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "curves", curves)
        object.__setattr__(self, "point_ids", tuple(self.point_ids))
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))
            if len(self.labels) != curves.shape[0]:
                raise RenderError("labels length must match curve count")
        if len(self.point_ids) != curves.shape[0]:
            raise RenderError("point_ids length must match curve count")

    @property
    def n_curves(self) -> int:
        return self.curves.shape[0]

    def label_order(self) -> list:
        if self.labels is None:
            return []
        seen = []
        for lab in self.labels:
            if lab not in seen:
                seen.append(lab)
        return seen


@dataclass(frozen=True)
class Band:
    """Pointwise max/min envelope of one class's curves."""

    label: str
    upper: np.ndarray
    lower: np.ndarray

    def __post_init__(self):
        upper = np.asarray(self.upper, dtype=float)
        lower = np.asarray(self.lower, dtype=float)
        if upper.shape != lower.shape or upper.ndim != 1:
            raise RenderError("band envelopes must be equal-length vectors")
        if np.any(upper < lower):
            raise RenderError("upper envelope dips below lower envelope")
        upper.setflags(write=False)
        lower.setflags(write=False)
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "lower", lower)


@dataclass(frozen=True)
class StyleOptions:
    width: int = 800
    height: int = 480
    margin_left: float = 64.0
    margin_right: float = 16.0
    margin_top: float = 20.0
    margin_bottom: float = 44.0
    stroke_width: float = 1.0
    curve_opacity: float = 0.85
    band_opacity: float = 0.25
    show_curves: bool = True
    show_bands: bool = True
    background: str = "#ffffff"
    axis_color: str = "#333333"
    palette: tuple = PALETTE


def sample_curves(
    basis: AndrewsBasis, model: PcaModel, ds: Dataset, samples: int = 512
) -> CurveSet:
    """Sample every point's embedded curve on an inclusive uniform grid.

    Inclusive endpoints make the periodicity f(0) = f(1) visible.
    """
    if samples < 2:
        raise RenderError("need at least two sample points")
    if basis.dim != model.dim or model.dim != ds.n_features:
        raise RenderError(
            f"dimension mismatch: basis {basis.dim}, model {model.dim}, data {ds.n_features}"
        )
    t = np.linspace(0.0, 1.0, int(samples))
    S = scores_matrix(model, ds.features)  # d x n

    nc = max(f.cos_coeffs.size for f in basis.functions)
    ns = max((f.sin_coeffs.size for f in basis.functions), default=0)
    C = np.zeros((basis.dim, nc))
    Sn = np.zeros((basis.dim, ns))
    for i, f in enumerate(basis.functions):
        C[i, : f.cos_coeffs.size] = f.cos_coeffs
        if f.sin_coeffs.size:
            Sn[i, : f.sin_coeffs.size] = f.sin_coeffs

    coef_c = S.T @ C   # n x nc
    coef_s = S.T @ Sn  # n x ns
    curves = np.tile(coef_c[:, :1], (1, t.size))
    if nc > 1:
        kc = np.arange(1, nc)
        curves = curves + SQRT2 * (coef_c[:, 1:] @ np.cos(TWO_PI * np.outer(kc, t)))
    if ns > 0:
        ks = np.arange(1, ns + 1)
        curves = curves + SQRT2 * (coef_s @ np.sin(TWO_PI * np.outer(ks, t)))
    return CurveSet(t, curves, ds.labels, ds.point_ids)


def envelope(cs: CurveSet, label: str) -> Band:
    """Pointwise max/min over the curves carrying ``label``."""
    if cs.labels is None:
        raise RenderError("curve set has no labels")
    rows = [i for i, lab in enumerate(cs.labels) if lab == label]
    if not rows:
        raise RenderError(f"unknown label {label!r}")
    member = cs.curves[rows]
    return Band(label, member.max(axis=0), member.min(axis=0))


def envelopes(cs: CurveSet) -> list:
    """One band per distinct label, in order of first appearance."""
    return [envelope(cs, lab) for lab in cs.label_order()]


def _fmt(v: float) -> str:
    # Fixed six decimals keeps the document byte-stable for identical input.
    return f"{v:.6f}"


def _nice_ticks(lo: float, hi: float, target: int = 5) -> list:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / max(target, 1)
    mag = 10.0 ** np.floor(np.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    first = np.ceil(lo / step) * step
    ticks = []
    v = first
    while v <= hi + 1e-12 * step:
        ticks.append(0.0 if abs(v) < 1e-12 * step else float(v))
        v += step
    return ticks


def _color_map(cs: CurveSet, palette: tuple) -> dict:
    return {
        lab: palette[i % len(palette)] for i, lab in enumerate(cs.label_order())
    }


def emit_svg(
    cs: CurveSet,
    bands: Optional[Sequence[Band]] = None,
    style: StyleOptions = StyleOptions(),
) -> bytes:
    """Standalone SVG 1.1 document; byte-identical for identical inputs."""
    W, H = float(style.width), float(style.height)
    x0, x1 = style.margin_left, W - style.margin_right
    y0, y1 = style.margin_top, H - style.margin_bottom

    ys = [cs.curves.min(), cs.curves.max()] if cs.n_curves else []
    for b in bands or []:
        ys.extend([float(b.lower.min()), float(b.upper.max())])
    if ys:
        lo, hi = float(min(ys)), float(max(ys))
        if hi - lo < 1e-12:
            lo, hi = lo - 1.0, hi + 1.0
        pad = 0.05 * (hi - lo)
        lo, hi = lo - pad, hi + pad
    else:
        lo, hi = -1.0, 1.0

    def px(t: float) -> float:
        return x0 + (x1 - x0) * t

    def py(v: float) -> float:
        return y1 - (y1 - y0) * (v - lo) / (hi - lo)

    out = io.StringIO()
    out.write('<?xml version="1.0" encoding="UTF-8"?>\n')
    out.write(
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_fmt(W)}" height="{_fmt(H)}" '
        f'viewBox="0 0 {_fmt(W)} {_fmt(H)}">\n'
    )
    out.write(f'<rect width="{_fmt(W)}" height="{_fmt(H)}" fill="{style.background}"/>\n')

    # axes
    ax = style.axis_color
    out.write(
        f'<line x1="{_fmt(x0)}" y1="{_fmt(y1)}" x2="{_fmt(x1)}" y2="{_fmt(y1)}" '
        f'stroke="{ax}" stroke-width="1.000000"/>\n'
    )
    out.write(
        f'<line x1="{_fmt(x0)}" y1="{_fmt(y0)}" x2="{_fmt(x0)}" y2="{_fmt(y1)}" '
        f'stroke="{ax}" stroke-width="1.000000"/>\n'
    )
    for tv in (0.0, 0.25, 0.5, 0.75, 1.0):
        x = px(tv)
        out.write(
            f'<line x1="{_fmt(x)}" y1="{_fmt(y1)}" x2="{_fmt(x)}" y2="{_fmt(y1 + 5)}" '
            f'stroke="{ax}" stroke-width="1.000000"/>\n'
        )
        out.write(
            f'<text x="{_fmt(x)}" y="{_fmt(y1 + 18)}" font-family="sans-serif" '
            f'font-size="11.000000" fill="{ax}" text-anchor="middle">{_fmt(tv)}</text>\n'
        )
    for tv in _nice_ticks(lo, hi):
        y = py(tv)
        out.write(
            f'<line x1="{_fmt(x0 - 5)}" y1="{_fmt(y)}" x2="{_fmt(x0)}" y2="{_fmt(y)}" '
            f'stroke="{ax}" stroke-width="1.000000"/>\n'
        )
        out.write(
            f'<text x="{_fmt(x0 - 8)}" y="{_fmt(y + 4)}" font-family="sans-serif" '
            f'font-size="11.000000" fill="{ax}" text-anchor="end">{_fmt(tv)}</text>\n'
        )

    colors = _color_map(cs, style.palette)
    for b in (bands or []) if style.show_bands else []:
        color = colors.get(b.label, UNLABELED_COLOR)
        pts_up = [f"{_fmt(px(t))},{_fmt(py(v))}" for t, v in zip(cs.t, b.upper)]
        pts_dn = [
            f"{_fmt(px(t))},{_fmt(py(v))}" for t, v in zip(cs.t[::-1], b.lower[::-1])
        ]
        d = "M " + " L ".join(pts_up + pts_dn) + " Z"
        out.write(
            f'<path d="{d}" fill="{color}" fill-opacity="{_fmt(style.band_opacity)}" '
            f'stroke="none"/>\n'
        )

    if style.show_curves:
        for i in range(cs.n_curves):
            lab = cs.labels[i] if cs.labels is not None else None
            color = colors.get(lab, UNLABELED_COLOR)
            pts = " ".join(
                f"{_fmt(px(t))},{_fmt(py(v))}" for t, v in zip(cs.t, cs.curves[i])
            )
            out.write(
                f'<polyline points="{pts}" fill="none" stroke="{color}" '
                f'stroke-width="{_fmt(style.stroke_width)}" '
                f'stroke-opacity="{_fmt(style.curve_opacity)}"/>\n'
            )

    out.write("</svg>\n")
    return out.getvalue().encode("utf-8")


def document(
    cs: CurveSet,
    bands: Optional[Sequence[Band]] = None,
    summary: Optional[ObjectiveSummary] = None,
    eigenvalues: Optional[Sequence[float]] = None,
) -> dict:
    """The plain-data form of the JSON document (shared with the service)."""
    doc = {
        "t": [float(v) for v in cs.t],
        "curves": [
            {
                "id": cs.point_ids[i],
                "label": cs.labels[i] if cs.labels is not None else None,
                "values": [float(v) for v in cs.curves[i]],
            }
            for i in range(cs.n_curves)
        ],
        "bands": [
            {
                "label": b.label,
                "upper": [float(v) for v in b.upper],
                "lower": [float(v) for v in b.lower],
            }
            for b in (bands or [])
        ],
        "objective": summary.value if summary else None,
        "lower_bound": summary.lower_bound if summary else None,
        "eigenvalues": [float(v) for v in (eigenvalues if eigenvalues is not None else [])],
    }
    return doc


def emit_json(
    cs: CurveSet,
    bands: Optional[Sequence[Band]] = None,
    summary: Optional[ObjectiveSummary] = None,
    eigenvalues: Optional[Sequence[float]] = None,
) -> bytes:
    return dumps(document(cs, bands, summary, eigenvalues))


def dumps(doc: dict) -> bytes:
    """Deterministic UTF-8 JSON; floats round-trip exactly, NaN/Inf rejected."""
    return json.dumps(doc, ensure_ascii=False, allow_nan=False, separators=(",", ":")).encode(
        "utf-8"
    )


def emit_csv(cs: CurveSet) -> bytes:
    """Header t,id_1,...,id_n then one row per grid point."""
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["t"] + list(cs.point_ids))
    for j in range(cs.t.size):
        w.writerow([repr(float(cs.t[j]))] + [repr(float(v)) for v in cs.curves[:, j]])
    return buf.getvalue().encode("utf-8")
