"""Series-matrix parsing, probe annotation and dataset persistence.

The series-matrix text format: '!'-prefixed tab-separated metadata
lines (values optionally double-quoted, no embedded tabs), then a
numeric probe table bracketed by the two sentinel lines

    !series_matrix_table_begin
    !series_matrix_table_end

whose header row starts with the cell ID_REF followed by unique sample
accessions.  Empty and "null" table cells are missing values.  CRLF
line endings are tolerated everywhere.

A dataset directory persists as three files: ``data.tsv`` (features x
samples, "NA" for missing), ``info.tsv`` (metadata fields x samples)
and ``manifest.json`` (name, format version, score state, source,
seed).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import AnnotationError, ManifestError, ParseError
from .matrix import DataMatrix, Dataset, InfoMatrix

FORMAT_VERSION = 1

TABLE_BEGIN = "!series_matrix_table_begin"
TABLE_END = "!series_matrix_table_end"

MULTI_SYMBOL_SEPARATOR = " /// "

MULTI_POLICIES = ("first", "drop")


@dataclass(frozen=True)
class SeriesMatrixDocument:
    """Parsed series-matrix file: ordered metadata plus the probe table."""

    metadata: tuple[tuple[str, tuple[str, ...]], ...]
    probe_ids: tuple[str, ...]
    samples: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        vals = np.array(vals, copy=True)
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    def __eq__(self, other):
        if not isinstance(other, SeriesMatrixDocument):
            return NotImplemented
        return (self.metadata == other.metadata
                and self.probe_ids == other.probe_ids
                and self.samples == other.samples
                and np.array_equal(self.values, other.values, equal_nan=True))


def _unquote(cell: str) -> str:
    if len(cell) >= 2 and cell.startswith('"') and cell.endswith('"'):
        return cell[1:-1]
    return cell


def _is_missing(cell: str) -> bool:
    return cell == "" or cell.lower() == "null"


def _lines(source):
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as fh:
            yield from fh
        return
    yield from source


def parse_series_matrix(source) -> SeriesMatrixDocument:
    """Parse a series-matrix file, path or line iterable.

    Raises :class:`ParseError` with a 1-based line number for missing
    sentinels, a bad header, ragged rows, duplicate sample accessions,
    duplicate probe ids and non-numeric value cells.
    """
    metadata: list[tuple[str, tuple[str, ...]]] = []
    probe_ids: list[str] = []
    seen_probes: set[str] = set()
    rows: list[list[float]] = []
    samples: tuple[str, ...] | None = None

    in_table = False
    saw_begin = False
    saw_end = False
    lineno = 0

    for lineno, raw in enumerate(_lines(source), start=1):
        line = raw.rstrip("\r\n")
        if not in_table:
            if not line.strip():
                continue
            if line == TABLE_BEGIN:
                if saw_begin:
                    raise ParseError("second table begin sentinel", lineno)
                saw_begin = True
                in_table = True
                continue
            if line.startswith("!"):
                cells = line.split("\t")
                key = cells[0][1:]
                if not key:
                    raise ParseError("metadata line with empty key", lineno)
                metadata.append((key, tuple(_unquote(c) for c in cells[1:])))
                continue
            raise ParseError(f"unexpected line outside table: {line[:40]!r}", lineno)

        # inside the probe table
        if line == TABLE_END:
            in_table = False
            saw_end = True
            continue
        cells = line.split("\t")
        if samples is None:
            if _unquote(cells[0]) != "ID_REF":
                raise ParseError(
                    f"table header must start with ID_REF, got {cells[0]!r}", lineno)
            accessions = tuple(_unquote(c) for c in cells[1:])
            if not accessions:
                raise ParseError("table header has no sample accessions", lineno)
            seen: set[str] = set()
            for acc in accessions:
                if not acc:
                    raise ParseError("empty sample accession in header", lineno)
                if acc in seen:
                    raise ParseError(f"duplicate sample accession {acc!r}", lineno)
                seen.add(acc)
            samples = accessions
            continue
        if len(cells) != 1 + len(samples):
            raise ParseError(
                f"expected {1 + len(samples)} cells, got {len(cells)}", lineno)
        probe = _unquote(cells[0])
        if probe in seen_probes:
            raise ParseError(f"duplicate probe id {probe!r}", lineno)
        seen_probes.add(probe)
        probe_ids.append(probe)
        row: list[float] = []
        for c in cells[1:]:
            c = _unquote(c)
            if _is_missing(c):
                row.append(math.nan)
                continue
            try:
                row.append(float(c))
            except ValueError:
                raise ParseError(f"non-numeric value cell {c!r}", lineno) from None
        rows.append(row)

    if not saw_begin:
        raise ParseError("missing table begin sentinel", lineno or 1)
    if in_table or not saw_end:
        raise ParseError("missing table end sentinel", lineno or 1)
    if samples is None:
        raise ParseError("table has no header row", lineno or 1)
    if not probe_ids:
        raise ParseError("table has no probe rows", lineno or 1)

    values = np.array(rows, dtype=float).reshape(len(probe_ids), len(samples))
    return SeriesMatrixDocument(tuple(metadata), tuple(probe_ids), samples, values)


def _fmt_value(v: float) -> str:
    return "null" if math.isnan(v) else repr(float(v))


def serialize_series_matrix(doc: SeriesMatrixDocument) -> str:
    """Canonical text form; parse(serialize(parse(t))) == parse(t).

    Metadata values, the header cell and accessions are always quoted;
    numbers use the shortest exact float representation.
    """
    out: list[str] = []
    for key, vals in doc.metadata:
        out.append("\t".join([f"!{key}"] + [f'"{v}"' for v in vals]))
    out.append(TABLE_BEGIN)
    out.append("\t".join(['"ID_REF"'] + [f'"{s}"' for s in doc.samples]))
    for pid, row in zip(doc.probe_ids, doc.values):
        out.append("\t".join([pid] + [_fmt_value(v) for v in row]))
    out.append(TABLE_END)
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# probe annotation
# ---------------------------------------------------------------------------

def parse_annotation(source) -> dict[str, tuple[str, ...]]:
    """Parse a two-column probe-to-symbol TSV.

    An optional header line "ID<tab>Symbol" is skipped.  Multiple
    symbols are separated by " /// "; an empty symbol cell maps the
    probe to no symbol.  Duplicate probe ids are an error.
    """
    mapping: dict[str, tuple[str, ...]] = {}
    for lineno, raw in enumerate(_lines(source), start=1):
        line = raw.rstrip("\r\n")
        if not line.strip():
            continue
        cells = line.split("\t")
        if len(cells) != 2:
            raise ParseError(f"expected 2 columns, got {len(cells)}", lineno)
        probe, symbol_cell = cells[0].strip(), cells[1].strip()
        if lineno == 1 and probe == "ID" and symbol_cell == "Symbol":
            continue
        if not probe:
            raise ParseError("empty probe id", lineno)
        if probe in mapping:
            raise ParseError(f"duplicate probe id {probe!r}", lineno)
        symbols = tuple(s for s in
                        (t.strip() for t in symbol_cell.split(MULTI_SYMBOL_SEPARATOR))
                        if s)
        mapping[probe] = symbols
    if not mapping:
        raise ParseError("annotation file has no rows")
    return mapping


@dataclass(frozen=True)
class AnnotationResult:
    """Raw annotated matrix (row names may repeat) plus drop counts."""

    data: DataMatrix
    info: InfoMatrix
    n_unmapped: int
    n_multi_dropped: int


def _info_from_metadata(doc: SeriesMatrixDocument) -> InfoMatrix:
    """Metadata entries with one value per sample become info fields.

    Repeated keys (common for characteristics lines) are disambiguated
    with .1, .2, ... suffixes to keep field names unique.
    """
    n = len(doc.samples)
    fields: list[str] = []
    cells: list[tuple[str, ...]] = []
    counts: dict[str, int] = {}
    for key, vals in doc.metadata:
        if len(vals) != n:
            continue
        counts[key] = counts.get(key, 0) + 1
        name = key if counts[key] == 1 else f"{key}.{counts[key] - 1}"
        fields.append(name)
        cells.append(vals)
    return InfoMatrix(tuple(fields), doc.samples, tuple(cells))


def annotate(doc: SeriesMatrixDocument,
             mapping: dict[str, tuple[str, ...]],
             multi_policy: str = "first") -> AnnotationResult:
    """Relabel probe rows with gene symbols.

    Probes without a symbol are dropped and counted.  Probes with
    several symbols follow ``multi_policy``: "first" keeps the first
    listed symbol, "drop" discards the row.  Values are never altered,
    only relabeled, and row counts reconcile:
    kept + unmapped + multi_dropped == probes.
    """
    if multi_policy not in MULTI_POLICIES:
        raise ValueError(f"multi_policy must be one of {MULTI_POLICIES}")
    keep_rows: list[int] = []
    row_names: list[str] = []
    n_unmapped = 0
    n_multi_dropped = 0
    for i, probe in enumerate(doc.probe_ids):
        symbols = mapping.get(probe, ())
        if not symbols:
            n_unmapped += 1
            continue
        if len(symbols) > 1 and multi_policy == "drop":
            n_multi_dropped += 1
            continue
        keep_rows.append(i)
        row_names.append(symbols[0])
    if not keep_rows:
        raise AnnotationError("no probe maps to a gene symbol")
    data = DataMatrix(tuple(row_names), doc.samples, doc.values[keep_rows])
    return AnnotationResult(data, _info_from_metadata(doc),
                            n_unmapped, n_multi_dropped)


# ---------------------------------------------------------------------------
# dataset persistence
# ---------------------------------------------------------------------------

DATA_FILE = "data.tsv"
INFO_FILE = "info.tsv"
MANIFEST_FILE = "manifest.json"

_MISSING_CELL = "NA"


def _write_tsv(path: Path, corner: str, col_names, row_names, fmt_row) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\t".join([corner] + list(col_names)) + "\n")
        for name, cells in zip(row_names, fmt_row()):
            for c in cells:
                if "\t" in c or "\n" in c:
                    raise ValueError(
                        f"cell in row {name!r} contains a tab or newline")
            fh.write("\t".join([name] + cells) + "\n")


def save_dataset(ds: Dataset, path: str | Path) -> None:
    """Write data.tsv, info.tsv and manifest.json under ``path``."""
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)

    def data_rows():
        for row in ds.data.values:
            yield [_MISSING_CELL if math.isnan(v) else repr(float(v)) for v in row]

    def info_rows():
        yield from ([*cells] for cells in ds.info.cells)

    _write_tsv(root / DATA_FILE, "feature", ds.data.col_names,
               ds.data.row_names, data_rows)
    _write_tsv(root / INFO_FILE, "field", ds.info.col_names,
               ds.info.field_names, info_rows)
    manifest = {"name": ds.name, "version": FORMAT_VERSION, "score": ds.score,
                "source": ds.source, "seed": ds.seed}
    with open(root / MANIFEST_FILE, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _read_tsv(path: Path) -> tuple[list[str], list[str], list[list[str]]]:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\r\n")
        if not header:
            raise ParseError(f"{path.name}: empty file", 1)
        cols = header.split("\t")[1:]
        row_names: list[str] = []
        rows: list[list[str]] = []
        for lineno, raw in enumerate(fh, start=2):
            line = raw.rstrip("\r\n")
            if not line:
                continue
            cells = line.split("\t")
            if len(cells) != 1 + len(cols):
                raise ParseError(
                    f"{path.name}: expected {1 + len(cols)} cells, "
                    f"got {len(cells)}", lineno)
            row_names.append(cells[0])
            rows.append(cells[1:])
    return cols, row_names, rows


def load_dataset(path: str | Path) -> Dataset:
    """Load a directory written by :func:`save_dataset` (lossless)."""
    root = Path(path)
    manifest_path = root / MANIFEST_FILE
    if not manifest_path.exists():
        raise ManifestError(f"{root}: no {MANIFEST_FILE}")
    with open(manifest_path, encoding="utf-8") as fh:
        try:
            manifest = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ManifestError(f"{root}: malformed manifest: {exc}") from None
    version = manifest.get("version")
    if version != FORMAT_VERSION:
        raise ManifestError(
            f"{root}: format version {version!r} unsupported "
            f"(expected {FORMAT_VERSION})")

    cols, features, data_cells = _read_tsv(root / DATA_FILE)
    values = np.empty((len(features), len(cols)))
    for i, row in enumerate(data_cells):
        for j, cell in enumerate(row):
            if cell == _MISSING_CELL:
                values[i, j] = math.nan
            else:
                try:
                    values[i, j] = float(cell)
                except ValueError:
                    raise ParseError(
                        f"{DATA_FILE}: non-numeric cell {cell!r}", i + 2) from None
    data = DataMatrix(tuple(features), tuple(cols), values)

    info_cols, fields, info_cells = _read_tsv(root / INFO_FILE)
    info = InfoMatrix(tuple(fields), tuple(info_cols),
                      tuple(tuple(r) for r in info_cells))
    return Dataset(data, info, name=str(manifest.get("name", "")),
                   score=str(manifest.get("score", "none")),
                   source=str(manifest.get("source", "")),
                   seed=manifest.get("seed"))
