import io
import math

import numpy as np
import pytest

from gaborzeta import experiments as ex


def test_golden_section():
    assert ex.golden_section(lambda x: (x - 0.3) ** 2, 0.0, 1.0, 1e-9) == pytest.approx(0.3, abs=1e-8)


def test_scan_extremum_and_csv_roundtrip():
    res = ex.scan_extremum(1.0, 0.25, 4.0, 51)
    assert res.argmax_A == pytest.approx(1.0, abs=1e-6)
    assert res.argmin_B == pytest.approx(1.0, abs=1e-6)
    buf = io.StringIO()
    ex.write_scan_csv(res.rows, buf)
    assert buf.getvalue().splitlines()[0] == "y,a_r,b_r,det,identity_residual"
    buf.seek(0)
    assert ex.read_scan_csv(buf) == res.rows


def test_scan_rejects():
    with pytest.raises(ValueError):
        ex.scan_extremum(1.0, 2.0, 4.0, 51)
    with pytest.raises(ValueError):
        ex.scan_extremum(1.0, 0.5, 2.0, 10)


def test_density2_bounds_symmetry():
    a, b = ex.density2_bounds(2.0)
    a2, b2 = ex.density2_bounds(0.5)
    assert (a, b) == pytest.approx((a2, b2), rel=1e-13)
    assert a == pytest.approx(1.1715565326, abs=1e-9)


def test_implication_chain():
    rep = ex.implication_chain()
    assert rep.passed
    row1 = next(r for r in rep.rows if r.y == 1.0)
    assert row1.trace_gap == 0.0 and row1.det_margin == 0.0


def test_chain_requires_one():
    with pytest.raises(ValueError):
        ex.implication_chain(y_grid=(0.5, 2.0))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_density_time(n):
    rep = ex.density_time_check(n, 2.0)
    assert rep.passed, rep


def test_hexagonal_comparison():
    rep = ex.hexagonal_comparison()
    assert rep.passed
    assert rep.b_tilde["hex"] == pytest.approx(1.1595952670, abs=1e-9)
    assert all(r.min_hex > 0 and r.min_square > 0 for r in rep.rows)
    assert ex.report_dict(rep)["density"] == 2.0
