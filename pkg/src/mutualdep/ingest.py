"""CSV ingestion, block-spec parsing, and the annual factors reader."""

from __future__ import annotations

import csv
import re
from importlib import resources

import numpy as np

from .errors import (
    LayoutNotRecognized,
    NonNumericCell,
    RaggedRows,
    YearRangeMissing,
)

__all__ = [
    "parse_csv",
    "parse_block_spec",
    "parse_fama_french",
    "bundled_factors_path",
    "FF_COLUMNS",
    "FF_YEARS",
]

FF_COLUMNS = ("Mkt-RF", "SMB", "RF")
FF_YEARS = (1964, 2015)


def parse_csv(path, has_header: bool = True) -> tuple[np.ndarray, list[str] | None]:
    """Rectangular numeric CSV -> (n x p matrix, header names or None).

    Cells must parse as floats; the first offending cell is reported with
    its 1-based data-row and column numbers. Rows of unequal width raise
    RaggedRows.
    """
    with open(path, newline="") as fh:
        rows = [row for row in csv.reader(fh) if row]
    if not rows:
        raise RaggedRows(f"{path}: no rows")
    header = None
    if has_header:
        header = [c.strip() for c in rows[0]]
        rows = rows[1:]
        if not rows:
            raise RaggedRows(f"{path}: header but no data rows")
    width = len(rows[0])
    out = np.empty((len(rows), width))
    for r, row in enumerate(rows):
        if len(row) != width:
            raise RaggedRows(
                f"{path}: row {r + 1} has {len(row)} cells, expected {width}"
            )
        for c, cell in enumerate(row):
            try:
                out[r, c] = float(cell)
            except ValueError:
                raise NonNumericCell(row=r + 1, column=c + 1, text=cell) from None
    return out, header


def parse_block_spec(spec: str, p: int) -> tuple:
    """Block layout from a CLI string.

    Two syntaxes:
      "p1,p2,...,pd"            widths applied left to right over all p columns;
      "cols=1-5;6-10;11"        explicit 1-based inclusive column ranges, one
                                group per block (selects and reorders columns).

    Returns (column_indices, block_dims) where column_indices is None for
    the width syntax (all columns in order).
    """
    spec = spec.strip()
    if spec.startswith("cols="):
        groups = []
        for part in spec[len("cols=") :].split(";"):
            part = part.strip()
            if not part:
                raise ValueError(f"empty block group in {spec!r}")
            cols = []
            for piece in part.split(","):
                m = re.fullmatch(r"(\d+)(?:-(\d+))?", piece.strip())
                if not m:
                    raise ValueError(f"bad column range {piece!r} in {spec!r}")
                lo = int(m.group(1))
                hi = int(m.group(2)) if m.group(2) else lo
                if not (1 <= lo <= hi <= p):
                    raise ValueError(
                        f"column range {piece!r} outside 1..{p} in {spec!r}"
                    )
                cols.extend(range(lo - 1, hi))
            groups.append(cols)
        idx = [c for g in groups for c in g]
        return tuple(idx), tuple(len(g) for g in groups)
    dims = []
    for piece in spec.split(","):
        try:
            w = int(piece)
        except ValueError:
            raise ValueError(f"bad block width {piece!r} in {spec!r}") from None
        if w < 1:
            raise ValueError(f"block widths must be >= 1, got {w}")
        dims.append(w)
    if sum(dims) != p:
        raise ValueError(f"block widths {dims} sum to {sum(dims)}, expected {p}")
    return None, tuple(dims)


def _split_factor_line(line: str) -> list[str]:
    if "," in line:
        return [c.strip() for c in line.split(",")]
    return line.split()


def parse_fama_french(path) -> tuple[np.ndarray, list[str]]:
    """Annual factors from the published text layout.

    Scans for the "Annual Factors" marker (falling back to treating the
    whole file as one annual table), reads the header naming the factor
    columns, then year-indexed rows, and returns the 52 x 3 matrix of
    (Mkt-RF, SMB, RF) for 1964-2015 together with those column names.
    Both whitespace- and comma-separated layouts are accepted.
    """
    with open(path) as fh:
        lines = fh.read().splitlines()

    start = 0
    for i, line in enumerate(lines):
        if "annual factors" in line.lower():
            start = i + 1
            break

    # header: first subsequent line naming all three wanted columns
    header = None
    data_start = None
    for i in range(start, len(lines)):
        cells = _split_factor_line(lines[i])
        if all(name in cells for name in FF_COLUMNS):
            header = cells
            data_start = i + 1
            break
    if header is None:
        raise LayoutNotRecognized(
            f"{path}: no header line naming {', '.join(FF_COLUMNS)}"
        )

    # year-indexed rows; stop at the first non-year row after data began
    by_year: dict[int, list[float]] = {}
    for line in lines[data_start:]:
        cells = [c for c in _split_factor_line(line) if c != ""]
        if not cells:
            if by_year:
                break
            continue
        if not re.fullmatch(r"\d{4}", cells[0]):
            if by_year:
                break
            continue
        try:
            values = [float(c) for c in cells[1:]]
        except ValueError:
            break
        by_year[int(cells[0])] = values
    if not by_year:
        raise LayoutNotRecognized(f"{path}: no year-indexed rows after the header")

    # align header names to value positions: headers may or may not carry a
    # label (or an empty cell) for the leading year column
    width = len(next(iter(by_year.values())))
    cols = [header.index(name) + (width - len(header)) for name in FF_COLUMNS]

    lo, hi = FF_YEARS
    years = list(range(lo, hi + 1))
    missing = [y for y in years if y not in by_year]
    if missing:
        raise YearRangeMissing(
            f"{path}: missing years {missing[:5]}{'...' if len(missing) > 5 else ''} "
            f"in {lo}-{hi}"
        )
    out = np.empty((len(years), len(FF_COLUMNS)))
    for r, y in enumerate(years):
        row = by_year[y]
        for c, idx in enumerate(cols):
            if not 0 <= idx < len(row):
                raise LayoutNotRecognized(f"{path}: row for {y} too short")
            out[r, c] = row[idx]
    return out, list(FF_COLUMNS)


def bundled_factors_path():
    """Path to the vendored annual factors fixture."""
    return resources.files("mutualdep").joinpath("data/ff_annual_factors.txt")
