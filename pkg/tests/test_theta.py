import math

import mpmath
import numpy as np
import pytest

from gaborzeta.errors import CapExceeded
from gaborzeta.lattice import Precision
from gaborzeta.theta import (ThetaKind, evaluate, theta3_array, theta3_minus_one, theta_null,
                             theta_null_product, theta_series, theta_transformed)

# frozen from mpmath.jtheta at 30 digits
ORACLE = {
    (3, 1.0): 1.0864348112133080,
    (2, 1.0): 0.91357913815611682,
    (4, 1.0): 0.91357913815611682,
    (4, 0.5): 0.58797428289171206,
    (4, 2.0): 0.99626511456090714,
    (3, 2.0): 1.0037348854877391,
}


@pytest.mark.parametrize("key", sorted(ORACLE))
@pytest.mark.parametrize("method", ["series", "product", "transform"])
def test_oracle_values(key, method):
    kind, y = key
    value, terms = evaluate(kind, y, method)
    assert terms >= 1
    assert value == pytest.approx(ORACLE[key], abs=1e-13)


@pytest.mark.parametrize("y", [0.01, 0.07, 0.3, 1.7, 9.0])
@pytest.mark.parametrize("kind", [2, 3, 4])
def test_against_mpmath(kind, y):
    mpmath.mp.dps = 30
    ref = float(mpmath.jtheta(kind, 0, mpmath.exp(-mpmath.pi * y)))
    assert theta_null(kind, y) == pytest.approx(ref, abs=1e-13)
    assert theta_null_product(kind, y) == pytest.approx(ref, abs=1e-13)


def test_kind_coercion():
    assert ThetaKind.coerce("3") is ThetaKind.THETA3
    with pytest.raises(ValueError):
        ThetaKind.coerce(1)
    with pytest.raises(ValueError):
        evaluate(3, 1.0, "nope")


@pytest.mark.parametrize("y", [0.0, -1.0, float("inf"), float("nan")])
def test_bad_y(y):
    with pytest.raises(ValueError):
        theta_null(3, y)


def test_series_cap_without_transform():
    with pytest.raises(CapExceeded):
        theta_series(3, 1e-6, Precision(max_terms=1000))
    # the transformed route needs only a handful of terms
    assert theta_null(3, 1e-6) == pytest.approx(1e3, rel=1e-12)


def test_jacobi_quartic():
    for y in (0.4, 1.0, 3.0):
        t2, t3, t4 = (theta_null(k, y) for k in (2, 3, 4))
        assert t3 ** 4 == pytest.approx(t2 ** 4 + t4 ** 4, rel=1e-13)


def test_transform_matches_direct():
    for k in (2, 3, 4):
        assert theta_transformed(k, 0.8) == pytest.approx(theta_series(k, 0.8)[0], abs=1e-13)


def test_vectorized_helpers():
    y = np.array([0.3, 1.0, 5.0])
    assert np.allclose(theta3_array(y), [theta_null(3, v) for v in y], atol=1e-13, rtol=0)
    em1 = theta3_minus_one(np.array([1.0, 20.0]))
    assert em1[0] == pytest.approx(ORACLE[(3, 1.0)] - 1.0, rel=1e-12)
    assert em1[1] == pytest.approx(2 * math.exp(-20 * math.pi), rel=1e-14)
