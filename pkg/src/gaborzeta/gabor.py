"""Frame bounds of Gabor systems with the normalized Gaussian window.

The window is ``g0(t) = 2^{1/4} exp(-pi t^2)``.  Its ambiguity function is
known in closed form, so every bound below reduces to a lattice sum of
Gaussians:

* the Tolimieri-Orr bound, a sum over the adjoint lattice (any lattice);
* the sharp bounds of a separable lattice with integer density, as the
  extrema of Janssen's Fourier series;
* the theta-product closed form of those extrema at even density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import ComputationError, NotEvenDensity, NotIntegerDensity
from .heat import coordinate_descent, grid_minimum
from .lattice import (DEFAULT_PRECISION, Lattice2D, Precision, SeparableLattice, adjoint,
                      gaussian_radius, points_in_radius)
from .theta import theta_null

DENSITY_TOL = 1e-8
FRAME_THRESHOLD = 1e-9
DEFAULT_GRID = 64


@dataclass(frozen=True)
class FrameBoundsReport:
    """Sharp frame bounds of ``G(g0, L)`` in the unnormalized frame inequality.

    ``b_tilde`` is the Tolimieri-Orr sum, which bounds the frame inequality
    normalized by ``vol(L)``; hence ``density * b_tilde >= upper_B``.
    ``argmin``/``argmax`` locate the extrema of Janssen's series in
    ``[0, 1)^2`` when they were found numerically.
    """

    lower_A: float
    upper_B: float
    b_tilde: float
    condition_number: float
    density: float
    is_frame: bool
    argmin: Optional[tuple[float, float]] = None
    argmax: Optional[tuple[float, float]] = None


class JanssenTest(NamedTuple):
    b_tilde: float
    certified_frame: bool
    a_lower_est: float
    b_upper_est: float


def ambiguity_gauss(x, w):
    """``V_{g0} g0(x, w) = exp(-pi i x w) exp(-pi/2 (x^2 + w^2))``."""
    x = np.asarray(x, dtype=float)
    w = np.asarray(w, dtype=float)
    out = np.exp(-1j * math.pi * x * w) * np.exp(-0.5 * math.pi * (x * x + w * w))
    return complex(out) if out.ndim == 0 else out


def tolimieri_orr_bound(l: Lattice2D, p: Precision = DEFAULT_PRECISION) -> float:
    """``sum_{a in L°} |V_{g0} g0(a)| = sum exp(-pi/2 |a|^2)`` over the adjoint lattice.

    Separable lattices ``alpha Z x beta Z`` factor into
    ``theta_3(i/(2 beta^2)) theta_3(i/(2 alpha^2))``.
    """
    if l.m12 == 0.0 and l.m21 == 0.0:
        return theta_null(3, 0.5 / l.m11 ** 2, p) * theta_null(3, 0.5 / l.m22 ** 2, p)
    return tolimieri_orr_sum(l, p)


def tolimieri_orr_sum(l: Lattice2D, p: Precision = DEFAULT_PRECISION) -> float:
    """The Tolimieri-Orr bound by explicit enumeration of the adjoint lattice."""
    adj = adjoint(l)
    c = 0.5 * math.pi
    pts = points_in_radius(adj, gaussian_radius(adj, c, p.eps, p), p)
    terms = np.sort(np.exp(-c * np.sum(pts ** 2, axis=1)))
    return float(np.sum(terms))


def _integer_density(sl: SeparableLattice, even: bool = False) -> int:
    dens = sl.density
    n = round(dens)
    if n < 1 or abs(dens - n) > DENSITY_TOL:
        raise NotIntegerDensity(f"density {dens!r} is not a positive integer")
    if even and n % 2:
        raise NotEvenDensity(f"density {n} is not even")
    return int(n)


def frame_bounds_even_density(sl: SeparableLattice, p: Precision = DEFAULT_PRECISION) -> FrameBoundsReport:
    """Closed-form sharp bounds for ``alpha Z x beta Z`` with even density ``n``::

        A = n theta_4(i/(2 alpha^2)) theta_4(i/(2 beta^2))
        B = n theta_3(i/(2 alpha^2)) theta_3(i/(2 beta^2))

    Raises
    ------
    NotEvenDensity
        If ``1/(alpha beta)`` is not an even integer within 1e-8.
    """
    n = _integer_density(sl, even=True)
    ya, yb = 0.5 / sl.alpha ** 2, 0.5 / sl.beta ** 2
    a = n * theta_null(4, ya, p) * theta_null(4, yb, p)
    b = n * theta_null(3, ya, p) * theta_null(3, yb, p)
    return FrameBoundsReport(lower_A=a, upper_B=b, b_tilde=tolimieri_orr_bound(sl.as_lattice2d(), p),
                             condition_number=b / a, density=sl.density, is_frame=True)


def _janssen_nodes(sl: SeparableLattice, n: int, p: Precision):
    # nodes (k/beta, l/alpha) with Gaussian weights; the coefficient sum
    # carries a factor n, so the tail must be below eps/n
    nodes = Lattice2D(1.0 / sl.beta, 0.0, 0.0, 1.0 / sl.alpha)
    r = gaussian_radius(nodes, 0.5 * math.pi, p.eps / n, p)
    pts, kl = points_in_radius(nodes, r, p, return_coeffs=True)
    coef = n * ambiguity_gauss(pts[:, 0], pts[:, 1])
    return coef, kl.astype(float)


def janssen_series(sl: SeparableLattice, x, w, p: Precision = DEFAULT_PRECISION):
    """Janssen's Fourier series whose essential inf/sup are the sharp frame bounds::

        F(x, w) = (alpha beta)^{-1} sum_{k,l} V_{g0} g0(k/beta, l/alpha) exp(2 pi i (k x + l w))

    The sign pattern of the coefficients comes from evaluating the ambiguity
    function at the exact nodes.  Accepts scalar or array ``x``, ``w``.

    Raises
    ------
    NotIntegerDensity
        If ``1/(alpha beta)`` is not a positive integer within 1e-8.
    """
    n = _integer_density(sl)
    coef, kl = _janssen_nodes(sl, n, p)
    x = np.asarray(x, dtype=float)
    w = np.asarray(w, dtype=float)
    xb, wb = np.broadcast_arrays(x, w)
    phase = 2.0 * math.pi * (xb.reshape(-1, 1) * kl[:, 0] + wb.reshape(-1, 1) * kl[:, 1])
    total = np.exp(1j * phase) @ coef
    if np.max(np.abs(total.imag)) > 1e-10:
        raise ComputationError("Janssen series has a non-negligible imaginary part")
    out = total.real.reshape(xb.shape)
    return float(out) if out.ndim == 0 else out


def frame_bounds_integer_density(sl: SeparableLattice, grid_n: int = DEFAULT_GRID,
                                 p: Precision = DEFAULT_PRECISION) -> FrameBoundsReport:
    """Sharp bounds as the minimum and maximum of :func:`janssen_series`.

    The series is continuous, so its essential extrema are attained; they are
    located on a ``grid_n x grid_n`` grid of the unit period and refined by
    coordinate descent to a step of 1e-10.
    """
    if grid_n < 32:
        raise ValueError("grid_n must be at least 32")
    n = _integer_density(sl)
    coef, kl = _janssen_nodes(sl, n, p)

    def series(xw):
        xw = np.atleast_2d(xw)
        phase = 2.0 * math.pi * (xw @ kl.T)
        return (np.exp(1j * phase) @ coef).real

    lo_start = grid_minimum(series, grid_n)
    hi_start = grid_minimum(lambda xw: -series(xw), grid_n)
    lo_xy, lo = coordinate_descent(lambda v: float(series(v)[0]), lo_start, 1.0 / grid_n)
    hi_xy, neg_hi = coordinate_descent(lambda v: -float(series(v)[0]), hi_start, 1.0 / grid_n)
    hi = -neg_hi
    if lo < -1e-9:
        raise ComputationError(f"Janssen series dipped to {lo!r} < 0")
    lo = max(lo, 0.0)
    lo_xy, hi_xy = lo_xy - np.floor(lo_xy), hi_xy - np.floor(hi_xy)
    return FrameBoundsReport(
        lower_A=float(lo), upper_B=float(hi), b_tilde=tolimieri_orr_bound(sl.as_lattice2d(), p),
        condition_number=float(hi / lo) if lo > 0 else math.inf, density=sl.density,
        is_frame=bool(lo > FRAME_THRESHOLD),
        argmin=(float(lo_xy[0]), float(lo_xy[1])), argmax=(float(hi_xy[0]), float(hi_xy[1])))


def janssen_test(l: Lattice2D, p: Precision = DEFAULT_PRECISION) -> JanssenTest:
    """Frame certificate from the Tolimieri-Orr bound.

    ``b_tilde < 2`` certifies a frame.  The estimates bound the constants of
    the frame inequality normalized by ``vol(L)``: ``A >= 2 - b_tilde`` and
    ``B <= b_tilde``.
    """
    b = tolimieri_orr_bound(l, p)
    return JanssenTest(b_tilde=b, certified_frame=bool(b < 2.0), a_lower_est=max(0.0, 2.0 - b), b_upper_est=b)
