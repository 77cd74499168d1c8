"""Frame ingestion, transforms, row removal, and the seeded synthesizer."""

import io

import numpy as np
import pytest

from factorlab.data import (
    DEFAULT_SCHEMA,
    FactorFrame,
    TransformSpec,
    apply_transform,
    load_csv,
    remove_rows,
    synthesize,
    write_csv,
)
from factorlab.errors import (
    DimensionMismatch,
    DomainError,
    EmptyInput,
    IndexOutOfRange,
    MissingValue,
    ParseError,
    SchemaError,
    UnknownColumn,
)
from factorlab.ols import fit_ols
from frames import frame_with

HEADER = "term,panel,dta,roe,roa,tato,cr,price"


def small_csv(rows):
    return (HEADER + "\n" + "\n".join(rows) + "\n").encode()


GOOD_ROWS = [
    "1,1,0.5,0.7,0.6,1.2,1.5,120.5",
    "2,1,0.6,0.8,0.7,1.1,1.4,130.25",
    "3,1,0.7,0.9,0.8,1.0,1.3,141.0",
]


# --- load_csv ----------------------------------------------------------------


def test_load_well_formed():
    frame = load_csv(small_csv(GOOD_ROWS))
    assert frame.n_rows == 3
    assert frame.column_names == DEFAULT_SCHEMA
    assert frame.column("price")[2] == 141.0


def test_load_missing_cell():
    rows = list(GOOD_ROWS)
    rows[1] = "2,1,,0.8,0.7,1.1,1.4,130.25"
    with pytest.raises(MissingValue) as exc:
        load_csv(small_csv(rows))
    assert exc.value.row == 2
    assert exc.value.column == "dta"


def test_load_missing_header_column():
    text = HEADER.replace("tato,", "") + "\n1,1,0.5,0.7,0.6,1.5,120.5\n"
    with pytest.raises(SchemaError) as exc:
        load_csv(text.encode())
    assert exc.value.column == "tato"


def test_load_parse_error():
    rows = list(GOOD_ROWS)
    rows[0] = "1,1,abc,0.7,0.6,1.2,1.5,120.5"
    with pytest.raises(ParseError) as exc:
        load_csv(small_csv(rows))
    assert (exc.value.row, exc.value.column) == (1, "dta")


def test_load_empty_inputs():
    with pytest.raises(EmptyInput):
        load_csv(b"")
    with pytest.raises(EmptyInput):
        load_csv((HEADER + "\n").encode())


def test_load_case_insensitive_and_crlf():
    text = HEADER.upper().replace(",", ",") + "\r\n" + GOOD_ROWS[0] + "\r\n"
    frame = load_csv(text.encode())
    assert frame.n_rows == 1
    assert frame.column_names == DEFAULT_SCHEMA


def test_load_accepts_file_object_and_path(tmp_path):
    path = tmp_path / "data.csv"
    path.write_bytes(small_csv(GOOD_ROWS))
    assert load_csv(path).n_rows == 3
    with open(path, "rb") as handle:
        assert load_csv(handle).n_rows == 3


def test_csv_round_trip_is_identity():
    frame = synthesize(2024)
    out = io.StringIO()
    write_csv(frame, out)
    again = load_csv(out.getvalue().encode())
    assert frame.equals(again)


def test_write_csv_uses_lf_and_canonical_header(tmp_path):
    path = tmp_path / "out.csv"
    write_csv(synthesize(1, companies=1, quarters=2), path)
    raw = path.read_bytes()
    assert b"\r" not in raw
    assert raw.split(b"\n")[0].decode() == ",".join(DEFAULT_SCHEMA)


# --- transforms ---------------------------------------------------------------


def test_sqrt_transform_exact():
    frame = frame_with({"x": [0.0, 4.0, 9.0], "price": [1.0, 2.0, 3.0]})
    out = apply_transform(frame, TransformSpec("x", "sqrt"))
    assert out.column("x").tolist() == [0.0, 2.0, 3.0]
    assert frame.column("x").tolist() == [0.0, 4.0, 9.0]  # original untouched


def test_identity_transform_equal_frame():
    frame = frame_with({"x": [1.0, 2.0], "price": [1.0, 2.0]})
    assert apply_transform(frame, TransformSpec("x", "identity")).equals(frame)


def test_log_domain_error():
    frame = frame_with({"x": [0.0, 1.0], "price": [1.0, 2.0]})
    with pytest.raises(DomainError):
        apply_transform(frame, TransformSpec("x", "log"))


def test_square_then_sqrt_round_trip():
    frame = frame_with({"x": [0.3, 1.7, 2.2, 0.0], "price": [1, 2, 3, 4]})
    back = apply_transform(
        apply_transform(frame, TransformSpec("x", "square")),
        TransformSpec("x", "sqrt"),
    )
    assert np.abs(back.column("x") - frame.column("x")).max() < 1e-12


def test_unknown_transform_column_and_kind():
    frame = frame_with({"x": [1.0], "price": [1.0]})
    with pytest.raises(UnknownColumn):
        apply_transform(frame, TransformSpec("nope", "log"))
    with pytest.raises(DomainError):
        TransformSpec("x", "cube")


# --- remove_rows ---------------------------------------------------------------


def test_remove_reported_outlier_rows():
    frame = synthesize(7)
    assert frame.n_rows == 70
    kept = remove_rows(frame, {3, 38, 48})
    assert kept.n_rows == 67
    # remaining order preserved: row 4 of the original is row 3 of the result
    assert np.array_equal(kept.values[2], frame.values[3])


def test_remove_nothing_is_identity():
    frame = synthesize(7)
    assert remove_rows(frame, set()).equals(frame)


def test_remove_out_of_range():
    frame = synthesize(7)
    with pytest.raises(IndexOutOfRange):
        remove_rows(frame, {99})
    with pytest.raises(IndexOutOfRange):
        remove_rows(frame, {0})


def test_remove_composition_with_reindexing():
    frame = synthesize(11)
    a = {2, 10}
    b = {5, 30}
    combined = remove_rows(frame, a | b)
    # after dropping rows 2 and 10, original rows 5 and 30 sit at 4 and 28
    stepwise = remove_rows(remove_rows(frame, a), {4, 28})
    assert combined.equals(stepwise)


# --- synthesizer -----------------------------------------------------------------


def test_synthesize_deterministic():
    a = synthesize(99)
    b = synthesize(99)
    assert a.equals(b)
    assert not a.equals(synthesize(100))


def test_synthesize_default_shape():
    frame = synthesize(0)
    assert frame.n_rows == 70  # 5 companies x 14 quarters
    assert frame.column_names == DEFAULT_SCHEMA
    assert set(frame.column("panel")) == {1.0, 2.0, 3.0, 4.0, 5.0}
    assert frame.column("term").min() == 1.0
    assert frame.column("term").max() == 14.0
    ratios = frame.matrix(["dta", "roe", "roa", "tato", "cr"])
    assert ratios.min() > 0.0
    assert ratios.max() < 3.0


def test_synthesize_noiseless_recovers_coefficients():
    coeffs = (12.0, 2.0, 5.0, 100.0, 40.0, 15.0, 80.0, -7.0)
    frame = synthesize(3, coefficients=coeffs, noise_sd=0.0)
    fit = fit_ols(frame)
    assert np.abs(fit.beta - np.array(coeffs)).max() < 1e-8


def test_synthesize_coefficient_length_checked():
    with pytest.raises(DimensionMismatch):
        synthesize(1, coefficients=(1.0, 2.0))


# --- frame invariants --------------------------------------------------------------


def test_frame_rejects_duplicate_names():
    with pytest.raises(SchemaError):
        FactorFrame(
            column_names=("term", "panel", "price", "price"),
            values=np.ones((2, 4)),
        )


def test_frame_rejects_non_finite():
    values = np.ones((2, 3))
    values[1, 2] = np.nan
    with pytest.raises(DomainError):
        FactorFrame(column_names=("term", "panel", "price"), values=values)


def test_frame_rejects_fractional_term():
    values = np.array([[1.5, 1.0, 2.0]])
    with pytest.raises(DomainError):
        FactorFrame(column_names=("term", "panel", "price"), values=values)


def test_frame_values_read_only():
    frame = synthesize(1)
    with pytest.raises(ValueError):
        frame.values[0, 0] = 99.0
