"""Pairwise distance computation: Euclidean for numeric data, attribute
mismatch counts for categorical data, and their sum for mixed schemas.

Matrices are materialized densely; every kernel processes row blocks so the
peak transient stays bounded at paper-scale N (~10^4).
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .data_model import Dataset, DistanceMatrix

_BLOCK = 256


def euclidean_distance_matrix(ds: Dataset) -> DistanceMatrix:
    """L2 distances between all record pairs of an all-numeric dataset.

    Each entry is computed directly from its pair of rows (no Gram-matrix
    shortcut), so the result is exactly symmetric, has an exactly zero
    diagonal, and every entry depends only on the two records involved.
    """
    if ds.has_categorical:
        raise ValueError("euclidean metric requires an all-numeric schema")
    x = ds.numeric
    n, dims = x.shape
    d = np.empty((n, n), dtype=np.float64)
    for lo in range(0, n, _BLOCK):
        hi = min(lo + _BLOCK, n)
        acc = np.zeros((hi - lo, n), dtype=np.float64)
        for k in range(dims):
            diff = x[lo:hi, k, None] - x[None, :, k]
            acc += diff * diff
        d[lo:hi] = np.sqrt(acc)
    return DistanceMatrix(d)


def _category_codes(cat: np.ndarray) -> np.ndarray:
    """Integer codes per categorical column (value identity only)."""
    n, m = cat.shape
    codes = np.empty((n, m), dtype=np.int64)
    offsets = np.zeros(m + 1, dtype=np.int64)
    for j in range(m):
        uniq, inv = np.unique(cat[:, j], return_inverse=True)
        codes[:, j] = inv + offsets[j]
        offsets[j + 1] = offsets[j] + uniq.size
    return codes


def categorical_distance_matrix(ds: Dataset, *, literal_matches: bool = False) -> DistanceMatrix:
    """Count attributes on which two records disagree (Hamming count).

    With ``literal_matches=True`` the matrix instead counts agreeing
    attributes; that variant makes identical records maximally distant and
    violates the zero-diagonal invariant, so it is off by default and
    exists only to make the alternative formula inspectable.
    """
    if ds.has_numeric:
        raise ValueError("categorical metric requires an all-categorical schema")
    codes = _category_codes(ds.categorical)
    n, m = codes.shape
    # one-hot matmul counts matches; counts <= m stay exact in float32
    width = int(codes.max()) + 1 if codes.size else 0
    onehot = np.zeros((n, width), dtype=np.float32)
    onehot[np.arange(n)[:, None], codes] = 1.0
    matches = onehot @ onehot.T
    if literal_matches:
        d = matches.astype(np.float64)
    else:
        d = (np.float32(m) - matches).astype(np.float64)
    return DistanceMatrix(d)


def mixed_distance_matrix(ds: Dataset) -> DistanceMatrix:
    """Euclidean over the numeric attributes plus mismatch count over the
    categorical ones; degenerates to the single-kind metrics."""
    if not ds.has_categorical:
        return euclidean_distance_matrix(ds)
    if not ds.has_numeric:
        return categorical_distance_matrix(ds)
    num_part = Dataset(ds.numeric, np.empty((ds.n, 0), dtype=str),
                       tuple(a for a in ds.schema if a.kind == "num"))
    cat_part = Dataset(np.empty((ds.n, 0)), ds.categorical,
                       tuple(a for a in ds.schema if a.kind == "cat"))
    d = euclidean_distance_matrix(num_part).values
    d += categorical_distance_matrix(cat_part).values
    return DistanceMatrix(d)


def distance_matrix_for(ds: Dataset) -> DistanceMatrix:
    """Pick the metric the schema calls for."""
    return mixed_distance_matrix(ds)


_CACHE_MAGIC_LEN = 8  # little-endian int64 n precedes the row-major payload


def save_distance_cache(dm: DistanceMatrix, path: str | Path) -> None:
    with open(path, "wb") as f:
        f.write(struct.pack("<q", dm.n))
        f.write(np.ascontiguousarray(dm.values, dtype="<f8").tobytes())


def load_distance_cache(path: str | Path) -> DistanceMatrix:
    raw = Path(path).read_bytes()
    if len(raw) < _CACHE_MAGIC_LEN:
        raise ValueError(f"distance cache {path}: truncated header")
    (n,) = struct.unpack("<q", raw[:_CACHE_MAGIC_LEN])
    expect = _CACHE_MAGIC_LEN + 8 * n * n
    if n < 1 or len(raw) != expect:
        raise ValueError(f"distance cache {path}: size mismatch for n={n}")
    vals = np.frombuffer(raw, dtype="<f8", offset=_CACHE_MAGIC_LEN).reshape(n, n)
    return DistanceMatrix(vals.astype(np.float64))
