"""CSV/JSON round-trips, strict grid validation, deterministic formatting."""

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from charvol.core import SampledPath
from charvol.dataio import (
    DataFormatError,
    format_float,
    ingest_csv,
    load_json,
    write_estimates_csv,
    write_path_csv,
    write_summary_csv,
    write_truth_csv,
)
from charvol.montecarlo import McSummary


def write_text(path, text):
    path.write_text(text, encoding="utf-8")
    return path


# ----------------------------------------------------------------------
# format_float
# ----------------------------------------------------------------------


def test_format_float_specials():
    assert format_float(float("nan")) == "nan"
    assert format_float(float("inf")) == "inf"
    assert format_float(float("-inf")) == "-inf"
    assert format_float(1.0) == "1"


@given(st.floats(allow_nan=False, allow_infinity=False, width=64))
@settings(max_examples=200, deadline=None)
def test_format_float_round_trips(x):
    assert float(format_float(x)) == x


# ----------------------------------------------------------------------
# ingest_csv
# ----------------------------------------------------------------------


def test_ingest_two_row_price(tmp_path):
    f = write_text(tmp_path / "p.csv", "time,price\n0,100\n0.00041666666666666664,101\n")
    p = ingest_csv(f)
    assert p.values == pytest.approx([math.log(100.0), math.log(101.0)], rel=1e-15)
    assert p.n_increments == 1
    assert p.t0 == 0.0
    assert p.delta == pytest.approx(1.0 / 2400, rel=1e-12)


def test_ingest_full_day_grid(tmp_path):
    delta = 1.0 / 2400
    vals = 0.01 * np.sin(np.arange(2401))
    f = tmp_path / "day.csv"
    write_path_csv(f, SampledPath(vals, delta))
    p = ingest_csv(f)
    assert p.n_increments == 2400
    assert np.array_equal(p.values, vals)
    assert p.delta == pytest.approx(delta, rel=1e-12)


def test_ingest_logprice_preferred_over_price(tmp_path):
    f = write_text(
        tmp_path / "b.csv",
        "time,price,logprice\n0,100,0.5\n1,101,0.6\n",
    )
    assert ingest_csv(f).values == pytest.approx([0.5, 0.6])
    assert ingest_csv(f, price_col="price").values == pytest.approx(
        [math.log(100.0), math.log(101.0)]
    )
    assert ingest_csv(f, logprice_col="logprice").values == pytest.approx([0.5, 0.6])
    with pytest.raises(DataFormatError, match="not both"):
        ingest_csv(f, price_col="price", logprice_col="logprice")


def test_ingest_delta_override_and_t0(tmp_path):
    f = write_text(tmp_path / "c.csv", "time,logprice\n5.0,0\n5.5,1\n6.0,2\n")
    p = ingest_csv(f)
    assert p.t0 == 5.0
    assert p.delta == pytest.approx(0.5)
    assert ingest_csv(f, delta=0.25).delta == 0.25


def test_ingest_names_offending_rows(tmp_path):
    gap = write_text(
        tmp_path / "gap.csv", "time,logprice\n0,0\n1,0\n2,0\n4,0\n5,0\n"
    )
    with pytest.raises(DataFormatError, match="row 4: nonuniform time spacing"):
        ingest_csv(gap)
    bad = write_text(tmp_path / "bad.csv", "time,logprice\n0,0\n1,x\n")
    with pytest.raises(DataFormatError, match="row 2: unparseable number"):
        ingest_csv(bad)
    neg = write_text(tmp_path / "neg.csv", "time,price\n0,100\n1,-3\n")
    with pytest.raises(DataFormatError, match="row 2: nonpositive price"):
        ingest_csv(neg)
    dec = write_text(tmp_path / "dec.csv", "time,logprice\n1,0\n0,0\n")
    with pytest.raises(DataFormatError, match="row 2: time not strictly increasing"):
        ingest_csv(dec)


def test_ingest_structural_errors(tmp_path):
    one = write_text(tmp_path / "one.csv", "time,logprice\n0,0\n")
    with pytest.raises(DataFormatError, match="at least two"):
        ingest_csv(one)
    nohdr = write_text(tmp_path / "nohdr.csv", "t,logprice\n0,0\n1,1\n")
    with pytest.raises(DataFormatError, match="missing time column"):
        ingest_csv(nohdr)
    nocol = write_text(tmp_path / "nocol.csv", "time,close\n0,0\n1,1\n")
    with pytest.raises(DataFormatError, match="missing price column"):
        ingest_csv(nocol)
    with pytest.raises(DataFormatError, match="missing price column"):
        ingest_csv(nohdr.rename(tmp_path / "n2.csv"), time_col="t", price_col="px")


# ----------------------------------------------------------------------
# writers
# ----------------------------------------------------------------------


def test_path_csv_round_trip_is_exact(tmp_path):
    rng = np.random.default_rng(1)
    vals = np.cumsum(np.concatenate([[0.0], 0.01 * rng.standard_normal(100)]))
    p = SampledPath(vals, 1.0 / 100, t0=2.0)
    f = tmp_path / "rt.csv"
    write_path_csv(f, p)
    q = ingest_csv(f)
    assert np.array_equal(q.values, p.values)
    assert q.t0 == 2.0
    assert q.delta == pytest.approx(p.delta, rel=1e-12)
    assert b"\r" not in f.read_bytes()


def test_truth_csv_layout(tmp_path):
    f = tmp_path / "t.csv"
    write_truth_csv(f, [1.0, 0.5])
    assert f.read_text() == "day,true_iv\n0,1\n1,0.5\n"


def test_estimates_csv_layout(tmp_path):
    f = tmp_path / "e.csv"
    write_estimates_csv(
        f, [(0, "rv", 1.5, float("nan"), float("nan"), float("nan"), float("nan"), ()),
            (1, "cf-panel", 0.25, 2.0, 0.1, 0.4, 0.93, ("clamped", "u_scaled"))]
    )
    lines = f.read_text().splitlines()
    assert lines[0] == "day,estimator,value,avar,ci_low,ci_high,u_used,flags"
    assert lines[1] == "0,rv,1.5,nan,nan,nan,nan,"
    assert lines[2] == (
        "1,cf-panel,0.25,2,0.10000000000000001,0.40000000000000002,"
        "0.93000000000000005,clamped|u_scaled"
    )


def test_summary_csv_layout(tmp_path):
    s = McSummary(
        scenario_id="s1",
        estimator_tag="rv",
        replications=10,
        median_bias=0.5,
        mad=0.25,
        coverage=float("nan"),
        z_mean=float("nan"),
        z_var=float("nan"),
        mean_runtime_ms=123.4,
    )
    f = tmp_path / "s.csv"
    write_summary_csv(f, [s])
    lines = f.read_text().splitlines()
    assert lines[0] == (
        "scenario_id,estimator,replications,median_bias,mad,coverage,z_mean,z_var"
    )
    # runtime stays out of the file so repeated runs are byte-identical
    assert lines[1] == "s1,rv,10,0.5,0.25,nan,nan,nan"


# ----------------------------------------------------------------------
# load_json
# ----------------------------------------------------------------------


def test_load_json(tmp_path):
    f = write_text(tmp_path / "a.json", json.dumps({"reps": 3}))
    assert load_json(f) == {"reps": 3}
    g = write_text(tmp_path / "b.json", "[1, 2]")
    with pytest.raises(DataFormatError, match="object"):
        load_json(g)
    with pytest.raises(FileNotFoundError):
        load_json(tmp_path / "missing.json")
