import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from gaborzeta.eta_zeta import dedekind_eta, det_laplacian, det_laplacian_general
from gaborzeta.gabor import tolimieri_orr_bound, tolimieri_orr_sum
from gaborzeta.heat import heat_kernel, trace
from gaborzeta.lattice import Lattice2D, adjoint, same_points, symplectic_form
from gaborzeta.theta import theta_null, theta_null_product, theta_series, theta_transformed

ys = st.floats(0.05, 20.0)
small_int = st.integers(-3, 3)


@st.composite
def lattices(draw):
    a = draw(st.floats(0.6, 1.6))
    b = draw(st.floats(0.6, 1.6))
    shear = draw(st.floats(-0.5, 0.5))
    return Lattice2D(a, shear * a, 0.0, b)


@st.composite
def unimodular(draw):
    a, b = draw(small_int), draw(small_int)
    if math.gcd(a, b) != 1:
        a, b = 1, 0
    # complete (a, b) to an integer matrix of determinant 1
    g, x, y = _egcd(a, b)
    k = draw(st.integers(-2, 2))
    return np.array([[a, -y + k * a], [b, x + k * b]], dtype=float)


def _egcd(a, b):
    if b == 0:
        return (a, 1 if a >= 0 else -1, 0) if a else (0, 0, 1)
    g, x, y = _egcd(b, a % b)
    return g, y, x - (a // b) * y


@settings(max_examples=40, deadline=None)
@given(lattices(), unimodular())
def test_basis_change_invariance(l, u):
    assert round(abs(u[0, 0] * u[1, 1] - u[0, 1] * u[1, 0])) == 1
    l2 = Lattice2D.from_matrix(l.matrix @ u)
    assert same_points(l, l2, r=3.0, tol=1e-9)
    assert math.isclose(trace(l, 0.07), trace(l2, 0.07), rel_tol=1e-11)
    assert math.isclose(tolimieri_orr_sum(l), tolimieri_orr_sum(l2), rel_tol=1e-11)


@settings(max_examples=40, deadline=None)
@given(lattices())
def test_adjoint_involution(l):
    assert same_points(adjoint(adjoint(l)), l, r=3.0, tol=1e-9)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=4, max_size=4), st.floats(0.3, 3.0), st.floats(-2, 2))
def test_symplectic_invariance(v, a, c):
    # sigma is preserved by every matrix of determinant 1
    s = np.array([[a, c], [0.0, 1.0 / a]])
    z, zp = np.array(v[:2]), np.array(v[2:])
    assert math.isclose(symplectic_form(s @ z, s @ zp), symplectic_form(z, zp), rel_tol=1e-9, abs_tol=1e-9)
    assert symplectic_form(z, zp) == -symplectic_form(zp, z)


@settings(max_examples=30, deadline=None)
@given(lattices(), st.floats(0.0, 1.0), st.floats(0.0, 1.0), small_int, small_int, st.floats(0.02, 1.0))
def test_heat_periodic(l, u, v, k, m, t):
    z = l.from_coords([u, v])
    shifted = l.from_coords([u + k, v + m])
    assert math.isclose(heat_kernel(l, z, t), heat_kernel(l, shifted, t), rel_tol=1e-10)


@settings(max_examples=30, deadline=None)
@given(lattices(), st.floats(0.0, 2 * math.pi))
def test_rotation_invariance(l, phi):
    r = np.array([[math.cos(phi), -math.sin(phi)], [math.sin(phi), math.cos(phi)]])
    lr = Lattice2D.from_matrix(r @ l.matrix)
    assert math.isclose(tolimieri_orr_bound(l), tolimieri_orr_bound(lr), rel_tol=1e-11)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.2, 5.0), st.sampled_from([2, 3, 4]))
def test_theta_routes_agree(y, kind):
    direct = theta_series(kind, y)[0]
    assert abs(direct - theta_transformed(kind, y)) < 1e-12
    assert abs(direct - theta_null_product(kind, y)) < 1e-12


@settings(max_examples=60, deadline=None)
@given(ys)
def test_eta_theta(y):
    lhs = 2 * dedekind_eta(y) ** 3
    rhs = theta_null(2, y) * theta_null(3, y) * theta_null(4, y)
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, rhs)


@settings(max_examples=40, deadline=None)
@given(ys)
def test_det_modular(y):
    # tau -> -1/tau swaps the torus sides
    assert math.isclose(det_laplacian(y), det_laplacian(1 / y), rel_tol=1e-12)
    assert det_laplacian(y) <= det_laplacian(1.0) + 1e-14


@settings(max_examples=30, deadline=None)
@given(st.floats(0.3, 3.0), st.floats(0.3, 3.0))
def test_det_general_symmetric(a, b):
    assert math.isclose(det_laplacian_general(a, b), det_laplacian_general(b, a), rel_tol=1e-12)
