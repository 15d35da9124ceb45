"""Andrews plots and spatial-spectral smoothed Andrews plots for tabular data."""

from .andrews import (
    AndrewsBasis,
    ObjectiveSummary,
    classic_basis,
    embed,
    mean_quadratic_variation,
    mean_spatial_spectral_variation,
    rotate_pair,
    smoothed_basis,
    spectral_lower_bound,
)
from .dataset import Dataset, LabelSpec, center, load_csv, quartile_labels
from .harmonic import HarmonicFunction
from .jacobi import SpectralBasis, converge_spectrum, lowest_modes, operator_block
from .pca import PcaModel, fit, scores
from .render import Band, CurveSet, emit_csv, emit_json, emit_svg, envelope, sample_curves

__version__ = "0.1.0"

__all__ = [
    "AndrewsBasis",
    "Band",
    "CurveSet",
    "Dataset",
    "HarmonicFunction",
    "LabelSpec",
    "ObjectiveSummary",
    "PcaModel",
    "SpectralBasis",
    "center",
    "classic_basis",
    "converge_spectrum",
    "embed",
    "emit_csv",
    "emit_json",
    "emit_svg",
    "envelope",
    "fit",
    "load_csv",
    "lowest_modes",
    "mean_quadratic_variation",
    "mean_spatial_spectral_variation",
    "operator_block",
    "quartile_labels",
    "rotate_pair",
    "sample_curves",
    "scores",
    "smoothed_basis",
    "spectral_lower_bound",
    "__version__",
]
