import math

import numpy as np
import pytest

from gaborzeta.errors import NotEvenDensity, NotIntegerDensity
from gaborzeta.gabor import (ambiguity_gauss, frame_bounds_even_density, frame_bounds_integer_density,
                             janssen_series, janssen_test, tolimieri_orr_bound, tolimieri_orr_sum)
from gaborzeta.lattice import Lattice2D, SeparableLattice

S2 = 1 / math.sqrt(2)


def test_ambiguity_at_origin():
    assert ambiguity_gauss(0.0, 0.0) == 1.0
    assert abs(ambiguity_gauss(1.0, 0.5)) == pytest.approx(math.exp(-math.pi / 2 * 1.25), rel=1e-15)


def test_even_density_square():
    rep = frame_bounds_even_density(SeparableLattice(S2, S2))
    assert rep.lower_A == pytest.approx(1.6692536833, abs=1e-9)
    assert rep.upper_B == pytest.approx(2.3606811980, abs=1e-9)
    assert rep.is_frame


def test_even_density_rect():
    rep = frame_bounds_even_density(SeparableLattice(1.0, 0.5))
    assert rep.lower_A == pytest.approx(1.1715565326, abs=1e-9)
    assert rep.upper_B == pytest.approx(2.8495942824, abs=1e-9)


def test_grid_matches_closed_form():
    for sl in (SeparableLattice(S2, S2), SeparableLattice(1.0, 0.5), SeparableLattice(0.5, 0.5)):
        g = frame_bounds_integer_density(sl)
        c = frame_bounds_even_density(sl)
        assert g.lower_A == pytest.approx(c.lower_A, abs=1e-9)
        assert g.upper_B == pytest.approx(c.upper_B, abs=1e-9)


def test_density_four_square():
    rep = frame_bounds_even_density(SeparableLattice(0.5, 0.5))
    assert rep.lower_A == pytest.approx(3.9701767140, abs=1e-9)
    assert rep.upper_B == pytest.approx(4.0299348814, abs=1e-9)


def test_odd_density():
    rep = frame_bounds_integer_density(SeparableLattice(1.0, 1 / 3))
    assert rep.lower_A == pytest.approx(1.7639166743, abs=1e-8)
    assert rep.upper_B == pytest.approx(4.2584890218, abs=1e-8)
    assert rep.upper_B <= rep.density * rep.b_tilde + 1e-12


def test_critical_density_not_a_frame():
    rep = frame_bounds_integer_density(SeparableLattice(1.0, 1.0))
    assert not rep.is_frame
    assert rep.lower_A == pytest.approx(0.0, abs=1e-9)
    assert rep.condition_number > 1e6


def test_density_checks():
    with pytest.raises(NotEvenDensity):
        frame_bounds_even_density(SeparableLattice(1.0, 1 / 3))
    with pytest.raises(NotIntegerDensity):
        janssen_series(SeparableLattice(1.0, 0.4), 0.0, 0.0)


def test_janssen_series_periodic_and_real():
    sl = SeparableLattice(1.0, 0.5)
    x, w = np.array([0.1, 0.37]), np.array([0.2, 0.9])
    assert np.allclose(janssen_series(sl, x, w), janssen_series(sl, x + 1, w - 2), atol=1e-12)


def test_tolimieri_orr_routes():
    sq = Lattice2D.square(2.0)
    assert tolimieri_orr_bound(sq) == pytest.approx(1.1803405990, abs=1e-10)
    assert tolimieri_orr_sum(sq) == pytest.approx(tolimieri_orr_bound(sq), rel=1e-13)
    assert tolimieri_orr_bound(Lattice2D.hexagonal(2.0)) == pytest.approx(1.1595952670, abs=1e-9)


def test_janssen_test():
    r1 = janssen_test(Lattice2D.square(1.0))
    assert r1.b_tilde == pytest.approx(2.0149674407, abs=1e-9)
    assert not r1.certified_frame and r1.a_lower_est == 0.0
    r2 = janssen_test(Lattice2D.square(2.0))
    assert r2.certified_frame
    assert r2.a_lower_est == pytest.approx(2 - 1.1803405990, abs=1e-9)
