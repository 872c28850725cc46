"""Tabular datasets for the detector and the benchmark harness.

A :class:`Dataset` is an immutable (N, D) matrix of finite real features with
optional binary outlier labels (1 = outlier, the positive class). Datasets
come from CSV files (:func:`load_csv`) or from the synthetic Gaussian
generator (:func:`generate_gaussian`), which places a controllable number of
outliers at an exact radius from the inlier cloud.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Dataset",
    "GaussianSpec",
    "CsvFormatError",
    "load_csv",
    "save_csv",
    "generate_gaussian",
]


class CsvFormatError(ValueError):
    """A CSV file does not conform to the expected dataset layout."""


@dataclass(frozen=True)
class Dataset:
    """Immutable feature matrix with optional binary outlier labels.

    Attributes:
        rows: (N, D) float64 matrix, N >= 2, D >= 1, all values finite.
        labels: optional (N,) int8 vector of {0, 1}; 1 marks an outlier.
        ids: (N,) int64 record identifiers; row index by default.
    """

    rows: np.ndarray
    labels: np.ndarray | None = None
    ids: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        rows = np.array(self.rows, dtype=np.float64)
        if rows.ndim != 2:
            raise ValueError(f"rows must be 2-dimensional, got shape {rows.shape}")
        n, d = rows.shape
        if n < 2:
            raise ValueError(f"need at least 2 rows, got {n}")
        if d < 1:
            raise ValueError("need at least 1 feature column")
        if not np.all(np.isfinite(rows)):
            raise ValueError("rows contain NaN or infinite values")
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)

        if self.labels is not None:
            labels = np.array(self.labels, dtype=np.int8)
            if labels.shape != (n,):
                raise ValueError(
                    f"labels must have shape ({n},), got {labels.shape}"
                )
            if not np.all((labels == 0) | (labels == 1)):
                raise ValueError("labels must contain only 0 or 1")
            labels.setflags(write=False)
            object.__setattr__(self, "labels", labels)

        ids = self.ids
        if ids is None:
            ids = np.arange(n, dtype=np.int64)
        else:
            ids = np.array(ids, dtype=np.int64)
            if ids.shape != (n,):
                raise ValueError(f"ids must have shape ({n},), got {ids.shape}")
        ids.setflags(write=False)
        object.__setattr__(self, "ids", ids)

    @property
    def n(self) -> int:
        return self.rows.shape[0]

    @property
    def dims(self) -> int:
        return self.rows.shape[1]

    def outlier_count(self) -> int:
        """Number of label-1 records. Requires labels."""
        if self.labels is None:
            raise ValueError("dataset has no labels")
        return int(self.labels.sum())


@dataclass(frozen=True)
class GaussianSpec:
    """Parameters of the synthetic Gaussian benchmark family.

    Inliers are drawn i.i.d. from an isotropic Gaussian at the origin with
    per-dimension standard deviation ``sigma``; outliers are placed in
    uniformly random directions at exact radius ``outlier_shift * sigma``.
    """

    n_inliers: int
    n_outliers: int
    dims: int
    sigma: float
    outlier_shift: float
    seed: int

    def __post_init__(self) -> None:
        if self.n_inliers < 1:
            raise ValueError(f"n_inliers must be >= 1, got {self.n_inliers}")
        if self.n_outliers < 0:
            raise ValueError(f"n_outliers must be >= 0, got {self.n_outliers}")
        if self.dims < 1:
            raise ValueError(f"dims must be >= 1, got {self.dims}")
        if not self.sigma > 0:
            raise ValueError(f"sigma must be > 0, got {self.sigma}")
        if self.outlier_shift < 0:
            raise ValueError(
                f"outlier_shift must be >= 0, got {self.outlier_shift}"
            )


def generate_gaussian(spec: GaussianSpec) -> Dataset:
    """Generate a labeled synthetic dataset from ``spec``.

    Inliers come first (label 0), then outliers (label 1). The output is a
    pure function of ``spec``: equal parameters yield bit-identical datasets.

    Args:
        spec: generation parameters, including the RNG seed.

    Returns:
        Dataset with ``spec.n_inliers + spec.n_outliers`` labeled rows.
    """
    rng = np.random.default_rng(spec.seed)
    inliers = rng.normal(0.0, spec.sigma, size=(spec.n_inliers, spec.dims))

    directions = rng.normal(size=(spec.n_outliers, spec.dims))
    norms = np.linalg.norm(directions, axis=1, keepdims=True)
    radius = spec.outlier_shift * spec.sigma
    outliers = directions / norms * radius if spec.n_outliers else directions

    rows = np.vstack([inliers, outliers])
    labels = np.concatenate(
        [
            np.zeros(spec.n_inliers, dtype=np.int8),
            np.ones(spec.n_outliers, dtype=np.int8),
        ]
    )
    return Dataset(rows=rows, labels=labels)


def load_csv(path: str, label_column: str | None = None) -> Dataset:
    """Load a dataset from an RFC-4180-style CSV file with a header row.

    All non-label cells must parse as finite reals ('.' decimal separator).
    When ``label_column`` is given, that column must hold only 0/1 values and
    is removed from the feature matrix.

    Args:
        path: CSV file to read (UTF-8).
        label_column: name of the 0/1 label column, or None for no labels.

    Returns:
        Dataset with rows in file order.

    Raises:
        FileNotFoundError: missing file.
        CsvFormatError: no header, ragged rows, unparsable or non-finite
            cells (reported with data row and column name), label values
            outside {0, 1}, missing label column, or fewer than 2 data rows.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise CsvFormatError(f"{path}: empty file, expected a header row")
        label_idx: int | None = None
        if label_column is not None:
            if label_column not in header:
                raise CsvFormatError(
                    f"{path}: label column {label_column!r} not in header {header}"
                )
            label_idx = header.index(label_column)

        rows: list[list[float]] = []
        labels: list[int] = []
        for row_no, record in enumerate(reader, start=1):
            if len(record) != len(header):
                raise CsvFormatError(
                    f"{path}: data row {row_no} has {len(record)} cells, "
                    f"expected {len(header)}"
                )
            values: list[float] = []
            for col_idx, cell in enumerate(record):
                name = header[col_idx]
                try:
                    value = float(cell)
                except ValueError:
                    raise CsvFormatError(
                        f"{path}: data row {row_no}, column {name!r}: "
                        f"cannot parse {cell!r} as a real number"
                    ) from None
                if not math.isfinite(value):
                    raise CsvFormatError(
                        f"{path}: data row {row_no}, column {name!r}: "
                        f"value {cell!r} is not finite"
                    )
                if col_idx == label_idx:
                    if value not in (0.0, 1.0):
                        raise CsvFormatError(
                            f"{path}: data row {row_no}, column {name!r}: "
                            f"label must be 0 or 1, got {cell!r}"
                        )
                    labels.append(int(value))
                else:
                    values.append(value)
            rows.append(values)

    if len(rows) < 2:
        raise CsvFormatError(f"{path}: need at least 2 data rows, got {len(rows)}")
    matrix = np.array(rows, dtype=np.float64)
    label_vec = np.array(labels) if label_idx is not None else None
    return Dataset(rows=matrix, labels=label_vec)


def save_csv(data: Dataset, path: str, label_column: str = "label") -> None:
    """Write ``data`` as CSV with header columns x0..x{D-1} (+ label column).

    Feature values are written with full round-trip precision, so
    ``load_csv`` reproduces them bit for bit.
    """
    header = [f"x{i}" for i in range(data.dims)]
    if data.labels is not None:
        header.append(label_column)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for i in range(data.n):
            record = [repr(float(v)) for v in data.rows[i]]
            if data.labels is not None:
                record.append(str(int(data.labels[i])))
            writer.writerow(record)
