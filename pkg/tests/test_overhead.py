from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from faultshield.overhead import (
    ResourceCount,
    load_tables,
    overhead_pct,
    overhead_rows,
    render_exact,
    render_pct,
    sec,
    sec_rows,
)
from faultshield.tables import format_tables, overhead_to_csv


def test_sec_value():
    assert sec(ResourceCount(luts=972, ffs=239, dsps=2, brams=1)) == Fraction(5383, 8)
    assert render_exact(Fraction(5383, 8)) == "672.875"


def test_overhead_values():
    assert overhead_pct(128, 76, 573) == Fraction(5200, 573)
    assert render_pct(overhead_pct(128, 76, 573)) == "9.07"
    assert render_pct(overhead_pct(77, 52, 401)) == "6.23"
    assert render_pct(Fraction(2, 131) * 100) == "1.52"
    with pytest.raises(ValueError):
        overhead_pct(1, 0, 0)


def test_render_truncates():
    assert render_pct(Fraction(9079, 1000)) == "9.07"
    assert render_pct(Fraction(-9079, 1000)) == "-9.07"
    assert render_pct(Fraction(5), 0) == "5"


@given(st.integers(0, 10**6), st.integers(0, 10**6), st.integers(1, 10**6))
def test_overhead_linearity(a, b, base):
    assert overhead_pct(a, b, base) == -overhead_pct(b, a, base)
    assert overhead_pct(a + b, b, base) == overhead_pct(a, 0, base)


def test_bundled_rows():
    tables = load_tables()
    rows = {(r.design, r.target, r.metric): r for r in overhead_rows(tables)}
    kyber_area = rows[("RESWO", "kyber", "area")]
    assert render_pct(kyber_area.computed) == "9.07" == kyber_area.reported
    assert render_pct(rows[("RENO", "kyber-ctbu", "area")].computed) == "9.77"
    assert render_pct(rows[("RESO", "kyber-ctbu", "area")].computed) == "8.90"
    assert render_pct(rows[("RESWO", "falcon", "area")].computed) == "3.82"
    names = [name for name, _, _ in sec_rows(tables)]
    assert names[0] == "ctbu"
    assert sec_rows(tables)[0][2] == Fraction(5383, 8)


def test_resource_arithmetic():
    a = ResourceCount.from_dict({"slices": 3, "luts": 4, "power_mw": "1.5"})
    b = ResourceCount(slices=1, luts=1, power_mw=Fraction(1, 2))
    assert (a + b).power_mw == 2 and (a + b).slices == 4
    with pytest.raises(ValueError):
        ResourceCount.from_dict({"gates": 3})
    with pytest.raises(ValueError):
        ResourceCount(luts=-1)


def test_load_tables_errors(tmp_path):
    empty = tmp_path / "empty.json"
    empty.write_text("")
    with pytest.raises(ValueError):
        load_tables(empty)
    with pytest.raises(OSError):
        load_tables(tmp_path / "missing.json")


def test_formatting():
    rows = overhead_rows(load_tables())
    assert overhead_to_csv(rows).startswith("design,target,metric,computed_pct,reported_pct\n")
    assert format_tables(rows, "markdown").startswith("### ")
    with pytest.raises(ValueError):
        format_tables([], "csv")
    with pytest.raises(ValueError):
        format_tables(rows, "xml")
