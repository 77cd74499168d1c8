"""Factor tables: ingestion, validation, transforms, and a seeded synthesizer.

A ``FactorFrame`` is a rectangular, fully numeric table of quarterly company
observations. The canonical columns are

    term   - quarter sequence number (1, 2, ...)
    panel  - company code (1..companies)
    dta, roe, roa, tato, cr - fundamental ratios
    price  - stock closing price (the response)

Frames are immutable; every operation returns a new frame. Missing cells are
a hard error on ingestion, never imputed. Row indices are 1-based in every
user-facing argument and result (0-based only internally).
"""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import (
    DimensionMismatch,
    DomainError,
    EmptyInput,
    IndexOutOfRange,
    MissingValue,
    ParseError,
    SchemaError,
    UnknownColumn,
)
from .rng import stream

PREDICTOR_COLUMNS = ("term", "panel", "dta", "roe", "roa", "tato", "cr")
RESPONSE_COLUMN = "price"
DEFAULT_SCHEMA = PREDICTOR_COLUMNS + (RESPONSE_COLUMN,)

TRANSFORM_KINDS = ("identity", "log", "sqrt", "square")


@dataclass(frozen=True)
class FactorFrame:
    """Immutable table of named numeric columns plus role markers."""

    column_names: tuple[str, ...]
    values: np.ndarray  # n x c float64, set read-only in __post_init__
    response_name: str = RESPONSE_COLUMN
    term_column: str = "term"
    panel_column: str = "panel"

    def __post_init__(self):
        values = np.ascontiguousarray(np.asarray(self.values, dtype=float))
        if values.ndim != 2:
            raise DimensionMismatch(f"values must be 2-D, got shape {values.shape}")
        n, c = values.shape
        if n < 1:
            raise EmptyInput("a frame needs at least one row")
        names = tuple(self.column_names)
        if len(names) != c:
            raise DimensionMismatch(
                f"{len(names)} column names for {c} value columns"
            )
        if len(set(names)) != len(names):
            raise SchemaError("duplicate column name")
        for special in (self.response_name, self.term_column, self.panel_column):
            if special not in names:
                raise UnknownColumn(special)
        if not np.all(np.isfinite(values)):
            bad = np.argwhere(~np.isfinite(values))[0]
            raise DomainError(
                f"non-finite value at row {bad[0] + 1}, column {names[bad[1]]!r}"
            )
        term = values[:, names.index(self.term_column)]
        if np.any(term < 0) or np.any(term != np.floor(term)):
            raise DomainError(f"{self.term_column!r} must hold non-negative integers")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "column_names", names)

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def predictor_names(self) -> tuple[str, ...]:
        """All columns except the response, in frame order."""
        return tuple(name for name in self.column_names if name != self.response_name)

    def column_index(self, name: str) -> int:
        try:
            return self.column_names.index(name)
        except ValueError:
            raise UnknownColumn(name) from None

    def column(self, name: str) -> np.ndarray:
        return self.values[:, self.column_index(name)]

    def matrix(self, names) -> np.ndarray:
        """Columns ``names`` stacked into an n x len(names) matrix (a copy)."""
        idx = [self.column_index(name) for name in names]
        return np.array(self.values[:, idx])

    def equals(self, other: "FactorFrame") -> bool:
        return (
            self.column_names == other.column_names
            and self.response_name == other.response_name
            and self.values.shape == other.values.shape
            and bool(np.array_equal(self.values, other.values))
        )


@dataclass(frozen=True)
class TransformSpec:
    """One column plus one rung of the power-transform ladder."""

    column: str
    kind: str = "identity"

    def __post_init__(self):
        if self.kind not in TRANSFORM_KINDS:
            raise DomainError(
                f"transform kind must be one of {TRANSFORM_KINDS}, got {self.kind!r}"
            )


def apply_transform(frame: FactorFrame, spec: TransformSpec) -> FactorFrame:
    """Return a new frame with ``spec.column`` transformed in place."""
    j = frame.column_index(spec.column)
    col = frame.values[:, j]
    if spec.kind == "identity":
        new_col = col.copy()
    elif spec.kind == "log":
        bad = np.nonzero(col <= 0)[0]
        if bad.size:
            raise DomainError(
                f"log needs positive values; column {spec.column!r} "
                f"has {col[bad[0]]} at row {bad[0] + 1}"
            )
        new_col = np.log(col)
    elif spec.kind == "sqrt":
        bad = np.nonzero(col < 0)[0]
        if bad.size:
            raise DomainError(
                f"sqrt needs non-negative values; column {spec.column!r} "
                f"has {col[bad[0]]} at row {bad[0] + 1}"
            )
        new_col = np.sqrt(col)
    else:  # square
        new_col = col * col
    values = np.array(frame.values)
    values[:, j] = new_col
    return replace(frame, values=values)


def remove_rows(frame: FactorFrame, indices) -> FactorFrame:
    """Drop the given 1-based row indices, preserving the remaining order."""
    n = frame.n_rows
    wanted = set()
    for i in indices:
        i = int(i)
        if i < 1 or i > n:
            raise IndexOutOfRange(f"row index {i} outside 1..{n}")
        wanted.add(i - 1)
    if not wanted:
        return frame
    keep = [i for i in range(n) if i not in wanted]
    if not keep:
        raise EmptyInput("removing these rows would empty the frame")
    return replace(frame, values=np.array(frame.values[keep]))


# --- CSV ingestion and emission -----------------------------------------


def _open_text(source):
    """Normalize path / bytes / file-like sources to a text stream."""
    if isinstance(source, (str, os.PathLike)):
        return open(source, "r", encoding="utf-8", newline="")
    if isinstance(source, bytes):
        return io.StringIO(source.decode("utf-8"))
    data = source.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return io.StringIO(data)


def load_csv(source, schema=DEFAULT_SCHEMA, *, response_name=RESPONSE_COLUMN) -> FactorFrame:
    """Read and validate a factor table from ``source``.

    ``source`` may be a path, raw bytes, or a file-like object. The first
    line must be a header; matching against ``schema`` is case-insensitive
    and extra columns are ignored. Rows are kept in file order.
    """
    schema = tuple(s.lower() for s in schema)
    with _open_text(source) as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyInput("input has no header line") from None
        positions = {}
        for pos, raw in enumerate(header):
            positions.setdefault(raw.strip().lower(), pos)
        for name in schema:
            if name not in positions:
                raise SchemaError(name)

        rows = []
        for row_number, record in enumerate(reader, start=1):
            if not record or all(cell.strip() == "" for cell in record):
                continue  # tolerate a trailing blank line
            parsed = []
            for name in schema:
                pos = positions[name]
                cell = record[pos].strip() if pos < len(record) else ""
                if cell == "":
                    raise MissingValue(row_number, name)
                try:
                    parsed.append(float(cell))
                except ValueError:
                    raise ParseError(row_number, name, cell) from None
            rows.append(parsed)

    if not rows:
        raise EmptyInput("input has a header but no data rows")
    return FactorFrame(
        column_names=schema,
        values=np.array(rows, dtype=float),
        response_name=response_name,
    )


def write_csv(frame: FactorFrame, dest) -> None:
    """Write ``frame`` as UTF-8 CSV with LF line endings.

    Values are formatted with ``repr``, the shortest decimal that round-trips
    exactly, so ``load_csv(write_csv(frame))`` reproduces the frame bit for
    bit.
    """
    own = isinstance(dest, (str, os.PathLike))
    handle = open(dest, "w", encoding="utf-8", newline="\n") if own else dest
    try:
        handle.write(",".join(frame.column_names) + "\n")
        for row in frame.values:
            handle.write(",".join(repr(float(v)) for v in row) + "\n")
    finally:
        if own:
            handle.close()


# --- synthesizer ---------------------------------------------------------

#: Default response coefficients, intercept first then one per predictor in
#: PREDICTOR_COLUMNS order. Chosen to give price a visible contribution from
#: every fundamental at desk scale.
DEFAULT_COEFFICIENTS = (50.0, 4.0, 20.0, 250.0, 35.0, 10.0, 240.0, -3.0)

DEFAULT_NOISE_SD = 25.0

# Philox stream indices used by the synthesizer, one per random column.
_STREAMS = {"dta": 0, "roe": 1, "roa_mix": 2, "tato": 3, "cr": 4, "noise": 5}

# roa is generated as a mix of roe and fresh noise so the synthetic data
# reproduces the collinear fundamental pair that motivates the VIF check.
_ROA_MIX = 0.75


def synthesize(
    seed: int,
    companies: int = 5,
    quarters: int = 14,
    coefficients=DEFAULT_COEFFICIENTS,
    noise_sd: float = DEFAULT_NOISE_SD,
) -> FactorFrame:
    """Generate a deterministic factor table of ``companies * quarters`` rows.

    Fundamental ratios are uniform on (0, 3) except roa, which is correlated
    with roe. The response is the linear combination given by
    ``coefficients`` (intercept first) plus Gaussian noise of ``noise_sd``.
    Identical arguments always produce a bit-identical frame.
    """
    if companies < 1 or quarters < 1:
        raise DomainError("companies and quarters must both be >= 1")
    if noise_sd < 0:
        raise DomainError(f"noise_sd must be non-negative, got {noise_sd}")
    coeffs = np.asarray(coefficients, dtype=float)
    if coeffs.shape != (len(PREDICTOR_COLUMNS) + 1,):
        raise DimensionMismatch(
            f"need {len(PREDICTOR_COLUMNS) + 1} coefficients "
            f"(intercept + one per predictor), got {coeffs.shape[0]}"
        )

    n = companies * quarters
    term = np.tile(np.arange(1, quarters + 1, dtype=float), companies)
    panel = np.repeat(np.arange(1, companies + 1, dtype=float), quarters)

    def ratio(name):
        return stream(seed, _STREAMS[name]).uniform(0.01, 2.99, n)

    dta = ratio("dta")
    roe = ratio("roe")
    roa = _ROA_MIX * roe + (1.0 - _ROA_MIX) * ratio("roa_mix")
    tato = ratio("tato")
    cr = ratio("cr")

    predictors = np.column_stack([term, panel, dta, roe, roa, tato, cr])
    price = coeffs[0] + predictors @ coeffs[1:]
    if noise_sd > 0:
        price = price + stream(seed, _STREAMS["noise"]).normal(0.0, noise_sd, n)

    return FactorFrame(
        column_names=DEFAULT_SCHEMA,
        values=np.column_stack([predictors, price]),
    )
