"""Core value types shared across the toolkit.

Conventions: point indices are 0-based in memory and 1-based in every
external surface (CSV, JSON, CLI output, HTTP API). Edge weights use NaN
as the ABSENT marker for roots; ABSENT never participates in comparisons,
so a root edge can never be selected for cutting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Sequence

import numpy as np

ABSENT = float("nan")

NUMERIC = "num"
CATEGORICAL = "cat"


def is_absent(w: float) -> bool:
    return isinstance(w, float) and math.isnan(w)


class DatasetFormatError(ValueError):
    """Raised on malformed dataset input; message names the offending row."""


@dataclass(frozen=True)
class AttributeSpec:
    kind: str  # NUMERIC or CATEGORICAL
    name: str


@dataclass
class Dataset:
    """N records of numeric and/or categorical attributes.

    `numeric` holds the numeric columns (in schema order) as float64,
    `categorical` the categorical columns as strings. Record order defines
    point identity: permuting rows permutes indices.
    """

    numeric: np.ndarray        # (n, n_num) float64
    categorical: np.ndarray    # (n, n_cat) str
    schema: tuple[AttributeSpec, ...]
    truth_labels: np.ndarray | None = None   # (n,) str
    label_name: str | None = None

    @property
    def n(self) -> int:
        return self.numeric.shape[0]

    @property
    def has_numeric(self) -> bool:
        return any(a.kind == NUMERIC for a in self.schema)

    @property
    def has_categorical(self) -> bool:
        return any(a.kind == CATEGORICAL for a in self.schema)

    def record(self, i: int) -> tuple:
        """Attribute values of point i in declared schema order."""
        vals = []
        ni = ci = 0
        for a in self.schema:
            if a.kind == NUMERIC:
                vals.append(float(self.numeric[i, ni]))
                ni += 1
            else:
                vals.append(str(self.categorical[i, ci]))
                ci += 1
        return tuple(vals)

    def coords_2d(self) -> np.ndarray | None:
        """The (n, 2) coordinate view when the data is exactly 2-D numeric."""
        if self.numeric.shape[1] == 2 and not self.has_categorical:
            return self.numeric
        return None

    def permuted(self, perm: np.ndarray) -> "Dataset":
        """Dataset whose record i is this dataset's record perm[i]."""
        perm = np.asarray(perm)
        return Dataset(
            numeric=self.numeric[perm].copy(),
            categorical=self.categorical[perm].copy(),
            schema=self.schema,
            truth_labels=None if self.truth_labels is None else self.truth_labels[perm].copy(),
            label_name=self.label_name,
        )


def _parse_header(tokens: Sequence[str]) -> tuple[tuple[AttributeSpec, ...], int | None, str | None]:
    schema = []
    label_pos = None
    label_name = None
    for pos, tok in enumerate(tokens):
        tok = tok.strip()
        if ":" not in tok:
            raise DatasetFormatError(f"header token {tok!r} lacks a kind prefix")
        kind, name = tok.split(":", 1)
        if kind == "label":
            if label_pos is not None:
                raise DatasetFormatError("more than one label column declared")
            label_pos = pos
            label_name = name
        elif kind in (NUMERIC, CATEGORICAL):
            schema.append(AttributeSpec(kind, name))
        else:
            raise DatasetFormatError(f"unknown attribute kind {kind!r} in header")
    return tuple(schema), label_pos, label_name


def load_dataset(source: str | Path | IO[str],
                 schema: Sequence[AttributeSpec] | None = None) -> Dataset:
    """Parse a dataset from adorned-header CSV.

    Header tokens are `num:<name>`, `cat:<name>`, and at most one
    `label:<name>`; data rows follow in the same column order. Errors
    name the offending data row (1-based).
    """
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as f:
            lines = f.read().splitlines()
    else:
        lines = source.read().splitlines()
    lines = [ln for ln in lines if ln.strip() != ""]
    if not lines:
        raise DatasetFormatError("empty file: no header")
    file_schema, label_pos, label_name = _parse_header(lines[0].split(","))
    if schema is not None and tuple(schema) != file_schema:
        raise DatasetFormatError("declared schema does not match file header")
    if len(lines) < 2:
        raise DatasetFormatError("empty file: no data rows")

    arity = len(file_schema) + (1 if label_pos is not None else 0)
    numeric_rows: list[list[float]] = []
    categorical_rows: list[list[str]] = []
    labels: list[str] = []
    attr_pos = [p for p in range(arity) if p != label_pos]

    for rownum, line in enumerate(lines[1:], start=1):
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != arity:
            raise DatasetFormatError(
                f"row {rownum}: expected {arity} values, got {len(parts)}")
        if any(p == "" for p in parts):
            raise DatasetFormatError(f"row {rownum}: missing value")
        nums, cats = [], []
        for spec, pos in zip(file_schema, attr_pos):
            raw = parts[pos]
            if spec.kind == NUMERIC:
                try:
                    nums.append(float(raw))
                except ValueError:
                    raise DatasetFormatError(
                        f"row {rownum}: malformed numeric value {raw!r} "
                        f"in column {spec.name!r}") from None
            else:
                cats.append(raw)
        numeric_rows.append(nums)
        categorical_rows.append(cats)
        if label_pos is not None:
            labels.append(parts[label_pos])

    n = len(numeric_rows)
    n_num = sum(1 for a in file_schema if a.kind == NUMERIC)
    n_cat = len(file_schema) - n_num
    return Dataset(
        numeric=np.asarray(numeric_rows, dtype=np.float64).reshape(n, n_num),
        categorical=np.asarray(categorical_rows, dtype=str).reshape(n, n_cat),
        schema=file_schema,
        truth_labels=np.asarray(labels, dtype=str) if labels else None,
        label_name=label_name,
    )


def write_dataset(ds: Dataset, dest: str | Path | IO[str]) -> None:
    """Serialize back to the adorned-header CSV format (loses nothing)."""
    header = [f"{a.kind}:{a.name}" for a in ds.schema]
    if ds.truth_labels is not None:
        header.append(f"label:{ds.label_name or 'label'}")
    out_lines = [",".join(header)]
    for i in range(ds.n):
        vals = [repr(v) if isinstance(v, float) else v for v in ds.record(i)]
        if ds.truth_labels is not None:
            vals.append(str(ds.truth_labels[i]))
        out_lines.append(",".join(vals))
    text = "\n".join(out_lines) + "\n"
    if isinstance(dest, (str, Path)):
        Path(dest).write_text(text, encoding="utf-8")
    else:
        dest.write(text)


@dataclass
class DistanceMatrix:
    """Dense symmetric pairwise distances, zero diagonal."""

    values: np.ndarray  # (n, n) float64

    @property
    def n(self) -> int:
        return self.values.shape[0]


def validate_distance_matrix(dm: DistanceMatrix) -> list[str]:
    """Check the distance-matrix invariants; empty list when all hold."""
    d = dm.values
    problems = []
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        return [f"not square: shape {d.shape}"]
    if not np.isfinite(d).all():
        problems.append("non-finite entries present")
    if (d < 0).any():
        problems.append("negative entries present")
    if (np.diagonal(d) != 0).any():
        problems.append("nonzero diagonal")
    if not np.array_equal(d, d.T):
        problems.append("asymmetric")
    return problems


@dataclass
class PotentialField:
    """Per-point potentials and the bandwidth they were computed with."""

    p: np.ndarray  # (n,) float64, each in [-n, -1]
    sigma: float

    @property
    def n(self) -> int:
        return self.p.shape[0]


@dataclass
class CutRecord:
    vertex: int        # 0-based
    prev_target: int
    prev_weight: float
    method: str
    restored: bool = False


@dataclass
class InTree:
    """Directed forest where every point stores its single transfer target.

    A root r satisfies target[r] == r with weight[r] = ABSENT (NaN); every
    other point i has target[i] != i and weight[i] equal to its stored edge
    length. cut_log records every cut for undo and re-rooting.
    """

    target: np.ndarray  # (n,) int64
    weight: np.ndarray  # (n,) float64, NaN at roots
    cut_log: list[CutRecord] = field(default_factory=list)

    @property
    def n(self) -> int:
        return self.target.shape[0]

    def is_root(self, i: int) -> bool:
        return bool(self.target[i] == i and np.isnan(self.weight[i]))

    def roots(self) -> np.ndarray:
        return np.flatnonzero((self.target == np.arange(self.n)) & np.isnan(self.weight))

    def root_count(self) -> int:
        return int(self.roots().size)

    def finite_edge_starts(self) -> np.ndarray:
        """Start vertices of uncut edges, ascending."""
        return np.flatnonzero(np.isfinite(self.weight))

    def copy(self) -> "InTree":
        return InTree(
            target=self.target.copy(),
            weight=self.weight.copy(),
            cut_log=[CutRecord(c.vertex, c.prev_target, c.prev_weight, c.method, c.restored)
                     for c in self.cut_log],
        )

    def equals(self, other: "InTree") -> bool:
        return (np.array_equal(self.target, other.target)
                and np.array_equal(self.weight, other.weight, equal_nan=True))


@dataclass
class ClusterAssignment:
    """Result of root finding: every point mapped to its root."""

    root_of: np.ndarray               # (n,) int64
    clusters: dict[int, np.ndarray]   # root -> ascending member indices
    cluster_label: dict[int, str] = field(default_factory=dict)
    rounds_used: int = 0

    @property
    def n(self) -> int:
        return self.root_of.shape[0]

    @property
    def cluster_count(self) -> int:
        return len(self.clusters)


@dataclass
class SupervisionSet:
    """Labeled points steering supervised cutting and label merging."""

    indices: np.ndarray  # (k,) int64, 0-based, distinct
    labels: np.ndarray   # (k,) str

    def __post_init__(self):
        self.indices = np.asarray(self.indices, dtype=np.int64)
        self.labels = np.asarray(self.labels, dtype=str)
        if self.indices.size != self.labels.size:
            raise ValueError("indices and labels differ in length")
        if len(set(self.indices.tolist())) != self.indices.size:
            raise ValueError("supervision indices must be distinct")

    @property
    def count(self) -> int:
        return int(self.indices.size)

    def check_range(self, n: int) -> None:
        if self.indices.size and (self.indices.min() < 0 or self.indices.max() >= n):
            raise ValueError("supervision index out of range")

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, str]]) -> "SupervisionSet":
        idx, lab = [], []
        for i, l in pairs:
            idx.append(i)
            lab.append(l)
        return cls(np.asarray(idx, dtype=np.int64), np.asarray(lab, dtype=str))
