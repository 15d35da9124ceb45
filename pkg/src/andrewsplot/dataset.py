"""CSV ingestion into a column-oriented feature matrix with optional labels."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

QUARTILE_NAMES = ("Q1", "Q2", "Q3", "Q4")


class DatasetError(ValueError):
    """Raised for unreadable, malformed, or non-numeric input data."""


@dataclass(frozen=True)
class LabelSpec:
    """How to derive point labels from a source table.

    mode 'column' takes the named/indexed column verbatim, 'quartile' bins a
    numeric column into Q1..Q4, 'none' leaves the dataset unlabeled.
    """

    mode: str = "none"
    column: Union[str, int, None] = None

    def __post_init__(self):
        if self.mode not in ("column", "quartile", "none"):
            raise DatasetError(f"unknown label mode {self.mode!r}")
        if self.mode != "none" and self.column is None:
            raise DatasetError(f"label mode {self.mode!r} needs a column")

    @classmethod
    def from_column(cls, column: Union[str, int]) -> "LabelSpec":
        return cls("column", column)

    @classmethod
    def from_quartile(cls, column: Union[str, int]) -> "LabelSpec":
        return cls("quartile", column)

    @classmethod
    def none(cls) -> "LabelSpec":
        return cls("none", None)


@dataclass(frozen=True)
class Dataset:
    """Feature matrix with points as columns (d features x n points)."""

    features: np.ndarray
    feature_names: tuple
    labels: Optional[tuple]
    point_ids: tuple

    def __post_init__(self):
        feats = np.asarray(self.features, dtype=float)
        if feats.ndim != 2:
            raise DatasetError("features must be a 2-d matrix")
        if not np.all(np.isfinite(feats)):
            raise DatasetError("features contain non-finite entries")
        feats.setflags(write=False)
        object.__setattr__(self, "features", feats)
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        object.__setattr__(self, "point_ids", tuple(self.point_ids))
        d, n = feats.shape
        if len(self.feature_names) != d:
            raise DatasetError("feature_names length does not match feature count")
        if len(self.point_ids) != n:
            raise DatasetError("point_ids length does not match point count")
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(str(x) for x in self.labels))
            if len(self.labels) != n:
                raise DatasetError(f"got {len(self.labels)} labels for {n} points")

    @property
    def n_features(self) -> int:
        return self.features.shape[0]

    @property
    def n_points(self) -> int:
        return self.features.shape[1]

    def label_order(self) -> list:
        """Distinct labels in order of first appearance."""
        if self.labels is None:
            return []
        seen = []
        for lab in self.labels:
            if lab not in seen:
                seen.append(lab)
        return seen


def _resolve_column(spec_col: Union[str, int], names: Sequence[str], width: int) -> int:
    if isinstance(spec_col, int) or (isinstance(spec_col, str) and spec_col.lstrip("-").isdigit()):
        idx = int(spec_col)
        if not 0 <= idx < width:
            raise DatasetError(f"label column index {idx} out of range for {width} columns")
        return idx
    if spec_col in names:
        return names.index(spec_col)
    raise DatasetError(f"label column {spec_col!r} not found in header {list(names)}")


def load_csv(
    path: Union[str, Path],
    label_spec: LabelSpec = LabelSpec.none(),
    has_header: bool = True,
    delimiter: str = ",",
) -> Dataset:
    """Load a delimited text file into a Dataset (points become columns).

    The label column named by ``label_spec`` is excluded from the features;
    every remaining cell must parse as a float.
    """
    path = Path(path)
    if not path.is_file():
        raise DatasetError(f"no such file: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        rows = [row for row in csv.reader(fh, delimiter=delimiter) if row]
    if has_header:
        if not rows:
            raise DatasetError(f"{path}: empty file")
        header, rows = [h.strip() for h in rows[0]], rows[1:]
    else:
        header = None
    if not rows:
        raise DatasetError(f"{path}: no data rows")

    width = len(rows[0])
    names = header if header is not None else [f"x{i}" for i in range(width)]
    if header is not None and len(header) != width:
        raise DatasetError(f"{path}: header has {len(header)} fields, row 1 has {width}")

    label_idx = None
    if label_spec.mode != "none":
        label_idx = _resolve_column(label_spec.column, names, width)

    raw_labels = []
    columns: list = []
    for r, row in enumerate(rows):
        if len(row) != width:
            raise DatasetError(f"{path}: row {r + 1} has {len(row)} fields, expected {width}")
        values = []
        for c, cell in enumerate(row):
            if c == label_idx:
                raw_labels.append(cell.strip())
                continue
            try:
                values.append(float(cell))
            except ValueError:
                raise DatasetError(
                    f"{path}: non-numeric value {cell.strip()!r} at row {r + 1}, column {c + 1}"
                ) from None
        columns.append(values)

    feature_names = [n for i, n in enumerate(names) if i != label_idx]
    if not feature_names:
        raise DatasetError(f"{path}: no feature columns left after removing the label")

    features = np.asarray(columns, dtype=float).T  # rows in the file -> columns here
    if label_spec.mode == "column":
        labels: Optional[list] = raw_labels
    elif label_spec.mode == "quartile":
        try:
            targets = [float(x) for x in raw_labels]
        except ValueError:
            raise DatasetError(
                f"{path}: quartile label column contains a non-numeric value"
            ) from None
        labels = quartile_labels(targets)
    else:
        labels = None

    point_ids = [str(i) for i in range(features.shape[1])]
    return Dataset(features, feature_names, labels, point_ids)


def quartile_labels(targets: Sequence[float]) -> list:
    """Assign Q1..Q4 by empirical quartile; boundary values go to the lower bin."""
    targets = np.asarray(targets, dtype=float)
    if targets.ndim != 1 or targets.size < 4:
        raise DatasetError("quartile binning needs at least 4 values")
    if not np.all(np.isfinite(targets)):
        raise DatasetError("quartile targets contain non-finite values")
    q25, q50, q75 = np.percentile(targets, [25.0, 50.0, 75.0], method="linear")
    out = []
    for v in targets:
        if v <= q25:
            out.append("Q1")
        elif v <= q50:
            out.append("Q2")
        elif v <= q75:
            out.append("Q3")
        else:
            out.append("Q4")
    return out


def center(ds: Dataset) -> tuple[Dataset, np.ndarray]:
    """Subtract the per-feature mean; returns the shifted dataset and the mean."""
    mean = ds.features.mean(axis=1)
    shifted = ds.features - mean[:, None]
    return Dataset(shifted, ds.feature_names, ds.labels, ds.point_ids), mean


def standardize(ds: Dataset) -> Dataset:
    """Scale each feature row to unit standard deviation (constant rows untouched)."""
    std = ds.features.std(axis=1)
    std = np.where(std > 0, std, 1.0)
    return Dataset(ds.features / std[:, None], ds.feature_names, ds.labels, ds.point_ids)


def write_csv(ds: Dataset, path: Union[str, Path], label_name: str = "label") -> None:
    """Write the dataset back out, one point per row, label column last."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        header = list(ds.feature_names)
        if ds.labels is not None:
            header.append(label_name)
        w.writerow(header)
        for j in range(ds.n_points):
            row = [repr(float(v)) for v in ds.features[:, j]]
            if ds.labels is not None:
                row.append(ds.labels[j])
            w.writerow(row)
