"""Core matrix types and dataset-level operations.

A study is a pair of aligned matrices: a numeric ``DataMatrix``
(features x samples, missing entries as NaN) and a string
``InfoMatrix`` (metadata fields x samples).  ``Dataset`` bundles the
two with identifying metadata.  All three are frozen after
construction; operations return new objects.

Row names may repeat only in the raw, pre-reduction form produced by
probe annotation; :func:`reduce_duplicates` collapses them.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np

from .errors import NoCommonFeaturesError

SCORE_KINDS = ("none", "ecdf", "vdw")


def _as_name_tuple(names: Iterable[str], what: str) -> tuple[str, ...]:
    out = tuple(str(n) for n in names)
    if any(n == "" for n in out):
        raise ValueError(f"{what} must be non-empty strings")
    return out


def _check_unique(names: Sequence[str], what: str) -> None:
    if len(set(names)) != len(names):
        seen: set[str] = set()
        for n in names:
            if n in seen:
                raise ValueError(f"duplicate {what}: {n!r}")
            seen.add(n)


@dataclass(frozen=True, eq=False)
class DataMatrix:
    """Dense numeric matrix with named rows (features) and columns (samples).

    Column names are always unique; row names may repeat before
    duplicate reduction.  Values are float64 with NaN for missing.
    """

    row_names: tuple[str, ...]
    col_names: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        rows = _as_name_tuple(self.row_names, "row names")
        cols = _as_name_tuple(self.col_names, "column names")
        _check_unique(cols, "column name")
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (len(rows), len(cols)):
            raise ValueError(
                f"values shape {vals.shape} does not match "
                f"{len(rows)} rows x {len(cols)} columns")
        vals = np.array(vals, dtype=float, copy=True)
        vals.flags.writeable = False
        object.__setattr__(self, "row_names", rows)
        object.__setattr__(self, "col_names", cols)
        object.__setattr__(self, "values", vals)

    @property
    def n_rows(self) -> int:
        return len(self.row_names)

    @property
    def n_cols(self) -> int:
        return len(self.col_names)

    def row_index(self) -> dict[str, int]:
        """Name -> row position; first occurrence wins on duplicates."""
        idx: dict[str, int] = {}
        for i, name in enumerate(self.row_names):
            idx.setdefault(name, i)
        return idx

    def row(self, name: str) -> np.ndarray:
        try:
            return self.values[self.row_index()[name]]
        except KeyError:
            raise KeyError(f"no row named {name!r}") from None

    def take_cols(self, indices: Sequence[int]) -> "DataMatrix":
        return DataMatrix(self.row_names,
                          tuple(self.col_names[i] for i in indices),
                          self.values[:, list(indices)])

    def __eq__(self, other):
        if not isinstance(other, DataMatrix):
            return NotImplemented
        return (self.row_names == other.row_names
                and self.col_names == other.col_names
                and np.array_equal(self.values, other.values, equal_nan=True))

    def __repr__(self):
        return f"DataMatrix({self.n_rows} rows x {self.n_cols} cols)"


@dataclass(frozen=True, eq=False)
class InfoMatrix:
    """String-valued metadata: fields x samples, empty string = absent."""

    field_names: tuple[str, ...]
    col_names: tuple[str, ...]
    cells: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        fields = _as_name_tuple(self.field_names, "field names")
        cols = _as_name_tuple(self.col_names, "column names")
        _check_unique(fields, "field name")
        _check_unique(cols, "column name")
        rows = tuple(tuple(str(c) for c in row) for row in self.cells)
        if len(rows) != len(fields) or any(len(r) != len(cols) for r in rows):
            raise ValueError("cells shape does not match fields x columns")
        object.__setattr__(self, "field_names", fields)
        object.__setattr__(self, "col_names", cols)
        object.__setattr__(self, "cells", rows)

    @property
    def n_fields(self) -> int:
        return len(self.field_names)

    @property
    def n_cols(self) -> int:
        return len(self.col_names)

    def field(self, name: str) -> tuple[str, ...]:
        try:
            return self.cells[self.field_names.index(name)]
        except ValueError:
            raise KeyError(f"no metadata field named {name!r}") from None

    def take_cols(self, indices: Sequence[int]) -> "InfoMatrix":
        return InfoMatrix(self.field_names,
                          tuple(self.col_names[i] for i in indices),
                          tuple(tuple(row[i] for i in indices) for row in self.cells))

    def __eq__(self, other):
        if not isinstance(other, InfoMatrix):
            return NotImplemented
        return (self.field_names == other.field_names
                and self.col_names == other.col_names
                and self.cells == other.cells)

    def __repr__(self):
        return f"InfoMatrix({self.n_fields} fields x {self.n_cols} cols)"


@dataclass(frozen=True, eq=False)
class Dataset:
    """A named study: data plus sample metadata on the same columns.

    ``score`` records which (if any) rank transform has been applied;
    ``source`` and ``seed`` carry provenance so that persisting and
    reloading a dataset is lossless.
    """

    data: DataMatrix
    info: InfoMatrix
    name: str
    score: str = "none"
    source: str = ""
    seed: int | None = None

    def __post_init__(self):
        if not self.name:
            raise ValueError("dataset name must be non-empty")
        if self.data.col_names != self.info.col_names:
            raise ValueError(
                f"dataset {self.name!r}: data and info column names differ")
        if self.score not in SCORE_KINDS:
            raise ValueError(f"unknown score state {self.score!r}")

    @property
    def n_samples(self) -> int:
        return self.data.n_cols

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return (self.name == other.name and self.score == other.score
                and self.source == other.source and self.seed == other.seed
                and self.data == other.data and self.info == other.info)

    def __repr__(self):
        return (f"Dataset({self.name!r}, {self.data.n_rows} features x "
                f"{self.n_samples} samples, score={self.score})")


# ---------------------------------------------------------------------------
# duplicate reduction
# ---------------------------------------------------------------------------

def _iqr(values: np.ndarray) -> float:
    """Interquartile range over non-missing entries, type-7 quartiles."""
    v = values[~np.isnan(values)]
    if v.size == 0:
        return float("nan")
    q1, q3 = np.quantile(v, [0.25, 0.75])  # numpy default = linear (type 7)
    return float(q3 - q1)


def reduce_duplicates(raw: DataMatrix) -> tuple[DataMatrix, list[str]]:
    """Collapse repeated row names, keeping the row with the largest IQR.

    Ties keep the first occurrence; output rows follow first-occurrence
    order of each name.  Returns the reduced matrix and the list of
    names dropped because every candidate row was entirely missing.
    """
    order: list[str] = []
    groups: dict[str, list[int]] = {}
    for i, name in enumerate(raw.row_names):
        if name not in groups:
            groups[name] = []
            order.append(name)
        groups[name].append(i)

    keep: list[int] = []
    dropped: list[str] = []
    for name in order:
        rows = groups[name]
        if len(rows) == 1:
            if np.all(np.isnan(raw.values[rows[0]])):
                dropped.append(name)
            else:
                keep.append(rows[0])
            continue
        best_i = -1
        best_iqr = -np.inf
        for i in rows:
            spread = _iqr(raw.values[i])
            if np.isnan(spread):
                continue  # all-missing candidates never win
            if spread > best_iqr:
                best_iqr = spread
                best_i = i
        if best_i < 0:
            dropped.append(name)
        else:
            keep.append(best_i)

    reduced = DataMatrix(tuple(raw.row_names[i] for i in keep),
                         raw.col_names, raw.values[keep])
    return reduced, dropped


# ---------------------------------------------------------------------------
# merging
# ---------------------------------------------------------------------------

def common_rows(matrices: Sequence[DataMatrix]) -> list[str]:
    """Lexicographically sorted intersection of row names."""
    if not matrices:
        raise ValueError("need at least one matrix")
    shared = set(matrices[0].row_names)
    for m in matrices[1:]:
        shared &= set(m.row_names)
    if not shared:
        raise NoCommonFeaturesError("no common features across inputs")
    return sorted(shared)


def merge_data(matrices: Sequence[DataMatrix],
               prefixes: Sequence[str] | None = None) -> DataMatrix:
    """Stack matrices column-wise on their common rows.

    Rows are the sorted common names; columns are concatenated in input
    order, prefixed ``"<prefix>:"`` when ``prefixes`` is given.  A
    resulting column-name collision is an error naming the sample.
    """
    if prefixes is not None and len(prefixes) != len(matrices):
        raise ValueError("one prefix per matrix required")
    rows = common_rows(matrices)

    col_names: list[str] = []
    seen: set[str] = set()
    blocks: list[np.ndarray] = []
    for mi, m in enumerate(matrices):
        _check_unique(m.row_names, f"row name in input {mi}")
        idx = m.row_index()
        blocks.append(m.values[[idx[r] for r in rows]])
        for c in m.col_names:
            full = f"{prefixes[mi]}:{c}" if prefixes is not None else c
            if full in seen:
                raise ValueError(f"duplicate sample name after merge: {full!r}")
            seen.add(full)
            col_names.append(full)
    return DataMatrix(tuple(rows), tuple(col_names), np.hstack(blocks))


def merge_info(infos: Sequence[InfoMatrix],
               prefixes: Sequence[str] | None = None) -> InfoMatrix:
    """Concatenate metadata columns; fields are united in first-seen order.

    A sample whose source lacks some field gets ``""`` there.
    """
    if prefixes is not None and len(prefixes) != len(infos):
        raise ValueError("one prefix per info matrix required")
    fields: list[str] = []
    for info in infos:
        for f in info.field_names:
            if f not in fields:
                fields.append(f)

    col_names: list[str] = []
    seen: set[str] = set()
    for ii, info in enumerate(infos):
        for c in info.col_names:
            full = f"{prefixes[ii]}:{c}" if prefixes is not None else c
            if full in seen:
                raise ValueError(f"duplicate sample name after merge: {full!r}")
            seen.add(full)
            col_names.append(full)

    cells: list[tuple[str, ...]] = []
    for f in fields:
        row: list[str] = []
        for info in infos:
            if f in info.field_names:
                row.extend(info.field(f))
            else:
                row.extend([""] * info.n_cols)
        cells.append(tuple(row))
    return InfoMatrix(tuple(fields), tuple(col_names), tuple(cells))


def merge_datasets(datasets: Sequence[Dataset], name: str | None = None) -> Dataset:
    """Merge datasets into one, prefixing sample names with dataset names."""
    if len(datasets) < 2:
        raise ValueError("need at least two datasets to merge")
    states = {ds.score for ds in datasets}
    if len(states) > 1:
        raise ValueError(f"cannot merge datasets with mixed score states {sorted(states)}")
    names = [ds.name for ds in datasets]
    _check_unique(names, "dataset name")
    data = merge_data([ds.data for ds in datasets], prefixes=names)
    info = merge_info([ds.info for ds in datasets], prefixes=names)
    return Dataset(data, info, name or "+".join(names),
                   score=datasets[0].score)


# ---------------------------------------------------------------------------
# sample selection
# ---------------------------------------------------------------------------

def _match_mask(ds: Dataset, field_name: str, keyword: str, mode: str) -> list[bool]:
    if mode not in ("exact", "substring"):
        raise ValueError(f"mode must be 'exact' or 'substring', got {mode!r}")
    if field_name not in ds.info.field_names:
        raise KeyError(
            f"no metadata field {field_name!r}; available: "
            + ", ".join(ds.info.field_names))
    kw = keyword.lower()
    cells = ds.info.field(field_name)
    if mode == "exact":
        return [c.lower() == kw for c in cells]
    return [kw in c.lower() for c in cells]


def select_samples(ds: Dataset, field_name: str, keyword: str,
                   mode: str = "substring") -> Dataset:
    """Keep samples whose ``field_name`` value matches ``keyword``.

    Matching is case-insensitive; a keyword matching nothing is an
    error that lists the distinct values actually present.
    """
    mask = _match_mask(ds, field_name, keyword, mode)
    if not any(mask):
        values = sorted(set(ds.info.field(field_name)))
        raise ValueError(
            f"keyword {keyword!r} matches no sample in field {field_name!r}; "
            f"values present: {values}")
    idx = [i for i, m in enumerate(mask) if m]
    return replace(ds, data=ds.data.take_cols(idx), info=ds.info.take_cols(idx))


def exclude_samples(ds: Dataset, field_name: str, keyword: str,
                    mode: str = "substring") -> Dataset:
    """Drop matching samples; dropping everything is an error."""
    mask = _match_mask(ds, field_name, keyword, mode)
    idx = [i for i, m in enumerate(mask) if not m]
    if not idx:
        raise ValueError(
            f"keyword {keyword!r} on field {field_name!r} excludes every sample")
    if len(idx) == ds.n_samples:
        return ds
    return replace(ds, data=ds.data.take_cols(idx), info=ds.info.take_cols(idx))


def random_partition(ds: Dataset, sizes: Sequence[int], seed: int) -> list[Dataset]:
    """Split samples into disjoint parts of the given sizes.

    A seeded permutation is drawn, then consumed left to right, so the
    same (dataset, sizes, seed) triple always yields the same parts.
    """
    sizes = [int(s) for s in sizes]
    if any(s <= 0 for s in sizes):
        raise ValueError("part sizes must be positive")
    if sum(sizes) != ds.n_samples:
        raise ValueError(
            f"part sizes sum to {sum(sizes)}, dataset has {ds.n_samples} samples")
    perm = np.random.default_rng(seed).permutation(ds.n_samples)
    parts: list[Dataset] = []
    start = 0
    for pi, s in enumerate(sizes):
        idx = [int(i) for i in perm[start:start + s]]
        start += s
        parts.append(replace(ds,
                             data=ds.data.take_cols(idx),
                             info=ds.info.take_cols(idx),
                             name=f"{ds.name}.part{pi + 1}",
                             seed=seed))
    return parts


# ---------------------------------------------------------------------------
# medians and heterogeneity
# ---------------------------------------------------------------------------

def median_column(m: DataMatrix) -> np.ndarray:
    """Per-row median over non-missing entries (mean of central two when even)."""
    all_missing = np.all(np.isnan(m.values), axis=1)
    if np.any(all_missing):
        bad = m.row_names[int(np.argmax(all_missing))]
        raise ValueError(f"row {bad!r} has no non-missing values")
    return np.nanmedian(m.values, axis=1)


def heterogeneity_split(ds: Dataset, feature: str) -> tuple[float, tuple[int, int]]:
    """Split samples by the sign of one (scored) feature and compare halves.

    Samples with a non-negative value on ``feature`` form one group,
    negative values the other (missing values sit in neither).  Returns
    the correlation between the two groups' median columns and the
    group sizes ``(n_nonnegative, n_negative)``.  A split that leaves
    either side empty is rejected.
    """
    if feature not in ds.data.row_names:
        raise KeyError(f"no feature named {feature!r}")
    row = ds.data.row(feature)
    pos = [i for i, v in enumerate(row) if not np.isnan(v) and v >= 0.0]
    neg = [i for i, v in enumerate(row) if not np.isnan(v) and v < 0.0]
    if not pos or not neg:
        raise ValueError(f"feature {feature!r} does not separate samples")
    med_pos = median_column(ds.data.take_cols(pos))
    med_neg = median_column(ds.data.take_cols(neg))
    from .rstats import pearson  # local import; rstats depends on this module
    return pearson(med_pos, med_neg), (len(pos), len(neg))
