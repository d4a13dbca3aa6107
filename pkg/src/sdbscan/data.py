"""Dataset ingestion, normalization, and the distance measures used everywhere else.

Distances:
    cosine  1 - x.y / (|x||y|)                      range [0, 2]
    l2      ||x - y||_2
    l1      ||x - y||_1
    chi2    1 - sum_i 2 x_i y_i / (x_i + y_i)       on L1-normalized inputs, range [0, 1]
    js      1 - sum_i x_i/2 log2((x_i+y_i)/x_i)
                  + y_i/2 log2((x_i+y_i)/y_i)       on L1-normalized inputs, range [0, 1]

chi2/js are histogram measures: inputs must be non-negative and are
L1-normalized before the kernel is evaluated, so the self-distance is 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MEASURES = ("cosine", "l2", "l1", "chi2", "js")

# Rows with L2 norm below this are considered degenerate and rejected.
ZERO_NORM = 1e-12


@dataclass
class Dataset:
    """Point matrix plus optional ground-truth labels (evaluation only)."""

    points: np.ndarray                 # (n, d) float64, all finite
    labels: np.ndarray | None = None   # (n,) int64 or None

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]


def canonical_measure(name: str) -> str:
    m = name.strip().lower()
    if m not in MEASURES:
        raise ValueError(f"unknown distance measure {name!r}; expected one of {MEASURES}")
    return m


def load_dataset(path, fmt: str = "dense-csv", label_column: int | None = None) -> Dataset:
    """Read a dataset from disk.

    fmt "dense-csv": comma-separated floats, one point per line; an optional
    integer label column is selected by index (negatives count from the end).
    fmt "sparse-libsvm": "label idx:val idx:val ..." with 1-based indices.
    """
    if fmt == "dense-csv":
        return _load_dense_csv(path, label_column)
    if fmt == "sparse-libsvm":
        return _load_sparse(path)
    raise ValueError(f"unknown format {fmt!r}; expected 'dense-csv' or 'sparse-libsvm'")


def _load_dense_csv(path, label_column: int | None) -> Dataset:
    try:
        raw = np.loadtxt(path, delimiter=",", ndmin=2, dtype=np.float64)
    except ValueError:
        _report_bad_csv_line(path)
        raise
    if raw.size == 0:
        raise ValueError(f"{path}: empty dataset")
    labels = None
    if label_column is not None:
        col = label_column % raw.shape[1]
        labels = raw[:, col].astype(np.int64)
        raw = np.delete(raw, col, axis=1)
        if raw.shape[1] == 0:
            raise ValueError(f"{path}: no feature columns left after removing label column")
    bad = ~np.isfinite(raw)
    if bad.any():
        line = int(np.flatnonzero(bad.any(axis=1))[0]) + 1
        raise ValueError(f"{path}: non-finite value on line {line}")
    return Dataset(points=np.ascontiguousarray(raw), labels=labels)


def _report_bad_csv_line(path) -> None:
    # np.loadtxt already failed; rescan to name the offending line.
    width = None
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            fields = line.strip().split(",")
            if width is None:
                width = len(fields)
            elif len(fields) != width:
                raise ValueError(
                    f"{path}: line {lineno} has {len(fields)} columns, expected {width}"
                )
            for f in fields:
                try:
                    float(f)
                except ValueError:
                    raise ValueError(f"{path}: cannot parse {f!r} on line {lineno}") from None


def _load_sparse(path) -> Dataset:
    rows: list[dict[int, float]] = []
    labels: list[int] = []
    max_idx = 0
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split()
            try:
                labels.append(int(float(fields[0])))
                entries = {}
                for f in fields[1:]:
                    idx, val = f.split(":")
                    idx = int(idx)
                    if idx < 1:
                        raise ValueError("indices are 1-based")
                    entries[idx] = float(val)
            except (ValueError, IndexError) as exc:
                raise ValueError(f"{path}: cannot parse line {lineno}: {exc}") from None
            if entries:
                max_idx = max(max_idx, max(entries))
            rows.append(entries)
    if not rows:
        raise ValueError(f"{path}: empty dataset")
    points = np.zeros((len(rows), max(max_idx, 1)), dtype=np.float64)
    for i, entries in enumerate(rows):
        for idx, val in entries.items():
            points[i, idx - 1] = val
    if not np.isfinite(points).all():
        line = int(np.flatnonzero(~np.isfinite(points).all(axis=1))[0]) + 1
        raise ValueError(f"{path}: non-finite value on line {line}")
    return Dataset(points=points, labels=np.asarray(labels, dtype=np.int64))


def normalize_to_sphere(points: np.ndarray) -> np.ndarray:
    """Scale every row to unit L2 norm. Rejects near-zero rows."""
    points = np.asarray(points, dtype=np.float64)
    norms = np.linalg.norm(points, axis=1)
    bad = np.flatnonzero(norms < ZERO_NORM)
    if bad.size:
        raise ValueError(f"cannot normalize point {int(bad[0])}: norm {norms[bad[0]]:.3e}")
    return points / norms[:, None]


def _l1_normalize(points: np.ndarray, measure: str) -> np.ndarray:
    if (points < 0).any():
        i = int(np.flatnonzero((points < 0).any(axis=1))[0])
        raise ValueError(f"{measure} requires non-negative features; point {i} has negatives")
    sums = points.sum(axis=1)
    bad = np.flatnonzero(sums < ZERO_NORM)
    if bad.size:
        raise ValueError(f"cannot L1-normalize point {int(bad[0])}: sum {sums[bad[0]]:.3e}")
    return points / sums[:, None]


def distance(x: np.ndarray, y: np.ndarray, measure: str) -> float:
    """Distance between two points under the given measure."""
    measure = canonical_measure(measure)
    x = np.asarray(x, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape[0]} vs {y.shape[0]}")
    if measure == "cosine":
        nx, ny = np.linalg.norm(x), np.linalg.norm(y)
        if nx < ZERO_NORM or ny < ZERO_NORM:
            raise ValueError("cosine distance undefined for zero vectors")
        return float(1.0 - (x @ y) / (nx * ny))
    if measure == "l2":
        return float(np.linalg.norm(x - y))
    if measure == "l1":
        return float(np.abs(x - y).sum())
    xh = _l1_normalize(x[None, :], measure)[0]
    yh = _l1_normalize(y[None, :], measure)[0]
    if measure == "chi2":
        return float(1.0 - _chi2_kernel_rows(xh[None, :], yh)[0])
    return float(1.0 - _js_kernel_rows(xh[None, :], yh)[0])


def _chi2_kernel_rows(A: np.ndarray, y: np.ndarray) -> np.ndarray:
    # sum_i 2 a_i y_i / (a_i + y_i), zero terms where a_i + y_i == 0
    num = 2.0 * A * y[None, :]
    den = A + y[None, :]
    with np.errstate(invalid="ignore", divide="ignore"):
        terms = np.where(den > 0, num / np.where(den > 0, den, 1.0), 0.0)
    return terms.sum(axis=1)


def _js_kernel_rows(A: np.ndarray, y: np.ndarray) -> np.ndarray:
    # sum_i a_i/2 log2((a_i+y_i)/a_i) + y_i/2 log2((a_i+y_i)/y_i),
    # with 0 log(..) := 0
    s = A + y[None, :]
    with np.errstate(invalid="ignore", divide="ignore"):
        ta = np.where(A > 0, A * np.log2(np.where(A > 0, s / np.where(A > 0, A, 1.0), 1.0)), 0.0)
        ty = np.where(
            y[None, :] > 0,
            y[None, :] * np.log2(np.where(y[None, :] > 0, s / np.where(y[None, :] > 0, y[None, :], 1.0), 1.0)),
            0.0,
        )
    return 0.5 * (ta + ty).sum(axis=1)


# distance_block switches to blocked matmul above this many points; below it,
# exact scans reuse the per-query route bitwise.
FAST_BLOCK_MIN = 4096


class PreparedPoints:
    """Points preprocessed once for fast block distance evaluation.

    Candidate verification and the exact oracles both go through this class.
    Per-pair arithmetic reduces row by row (no BLAS batch kernels), so the
    same pair yields the same float no matter which candidate set it appears
    in; approximate and exact paths therefore agree bitwise at test scale.
    Only very large cosine scans (above FAST_BLOCK_MIN points) switch to
    blocked matmul, where agreement is within float tolerance instead.
    """

    def __init__(self, points: np.ndarray, measure: str):
        self.measure = canonical_measure(measure)
        points = np.asarray(points, dtype=np.float64)
        if not np.isfinite(points).all():
            raise ValueError("points contain non-finite values")
        if self.measure == "cosine":
            self.rows = normalize_to_sphere(points)
        elif self.measure in ("chi2", "js"):
            self.rows = _l1_normalize(points, self.measure)
        else:
            self.rows = points

    @property
    def n(self) -> int:
        return self.rows.shape[0]

    def distances_from(self, q: int, ids: np.ndarray) -> np.ndarray:
        """Distances from point q to the given candidate ids."""
        C = self.rows[ids]
        y = self.rows[q]
        if self.measure == "cosine":
            # row-wise reduction, not C @ y: BLAS results drift in the last
            # ulp with the batch shape, which would break bitwise agreement
            # between candidate verification and the exact oracle
            return 1.0 - (C * y[None, :]).sum(axis=1)
        if self.measure == "l2":
            diff = C - y[None, :]
            return np.sqrt((diff * diff).sum(axis=1))
        if self.measure == "l1":
            return np.abs(C - y[None, :]).sum(axis=1)
        if self.measure == "chi2":
            return 1.0 - _chi2_kernel_rows(C, y)
        return 1.0 - _js_kernel_rows(C, y)

    def distance_block(self, row_ids: np.ndarray) -> np.ndarray:
        """(len(row_ids), n) distances from each listed row to all points."""
        if self.measure == "cosine" and self.n >= FAST_BLOCK_MIN:
            return 1.0 - self.rows[row_ids] @ self.rows.T
        all_ids = np.arange(self.n)
        return np.vstack([self.distances_from(int(q), all_ids) for q in row_ids])
