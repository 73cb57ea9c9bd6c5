"""Dedekind eta, Eisenstein series and the spectral zeta function of flat tori.

The torus ``T_y`` is ``R^2 / (y^{1/2} Z x y^{-1/2} Z)``, normalized to unit
area.  Its Laplacian has eigenvalues ``4 pi^2 (k^2/y + y l^2)`` and spectral
zeta function ``Z_y(s) = (2 pi)^{-2s} E(iy, s)``.

The completed zeta function used throughout is::

    xi_y(s) = (4 pi)^s Gamma(s) Z_y(s) = pi^{-s} Gamma(s) E(iy, s)
            = 1/(s-1) - 1/s + int_1^inf (W_y(t/4pi) - 1)(t^{s-1} + t^{-s}) dt

where ``W_y`` is the heat trace.  The integral converges for every ``s``,
which gives the continuation and makes ``xi_y(s) = xi_y(1-s)`` manifest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gamma, kve, zeta

from .errors import PoleProximity, SlowConvergence, Unsupported
from .heat import trace_excess
from .lattice import DEFAULT_PRECISION, Lattice2D, Precision, points_in_radius, power_tail_bound

ETA_TRANSFORM_BELOW = 0.1
POLE_GUARD = 1e-3
FD_STEP = 1e-4

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


@dataclass(frozen=True)
class ModularTau:
    """A point ``x + iy`` of the upper half plane."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y) and self.y > 0):
            raise ValueError(f"tau must lie in the upper half plane, got {self.x!r} + {self.y!r}i")

    @classmethod
    def imag(cls, y: float) -> "ModularTau":
        return cls(0.0, y)


@dataclass(frozen=True)
class TorusAspect:
    """Unit-area rectangular torus with side lengths ``y^{1/2}`` and ``y^{-1/2}``."""

    y: float

    def __post_init__(self):
        if not (math.isfinite(self.y) and self.y > 0):
            raise ValueError(f"aspect y must be positive, got {self.y!r}")

    @property
    def sides(self) -> tuple[float, float]:
        return math.sqrt(self.y), 1.0 / math.sqrt(self.y)

    def lattice(self) -> Lattice2D:
        a, b = self.sides
        return Lattice2D(a, 0.0, 0.0, b)


def _aspect(a) -> TorusAspect:
    return a if isinstance(a, TorusAspect) else TorusAspect(float(a))


def _tau(tau) -> ModularTau:
    if isinstance(tau, ModularTau):
        return tau
    if isinstance(tau, complex):
        return ModularTau(tau.real, tau.imag)
    return ModularTau.imag(float(tau))


def dedekind_eta(y: float, p: Precision = DEFAULT_PRECISION) -> float:
    """``eta(iy) = e^{-pi y/12} prod_{k>=1} (1 - e^{-2 pi k y})``.

    The product is stopped once the remaining factors can change the value
    by less than ``p.eps``.  For ``y < 0.1`` the weight-1/2 transform
    ``eta(iy) = y^{-1/2} eta(i/y)`` is applied first.
    """
    if not (math.isfinite(y) and y > 0):
        raise ValueError(f"y must be positive, got {y!r}")
    if y < ETA_TRANSFORM_BELOW:
        scale = y ** -0.5
        return scale * dedekind_eta(1.0 / y, Precision(min(p.eps / scale, 0.5), p.max_radius, p.max_terms))
    q = math.exp(-2.0 * math.pi * y)
    one_minus_q = -math.expm1(-2.0 * math.pi * y)
    value = math.exp(-math.pi * y / 12.0)
    k = 0
    while True:
        k += 1
        value *= 1.0 - q ** k
        # |log prod_{j>k} (1 - q^j)| <= q^{k+1} / (1 - q)^2
        if value * math.expm1(q ** (k + 1) / one_minus_q ** 2) < p.eps:
            return value


def eisenstein(tau, s: float, p: Precision = DEFAULT_PRECISION) -> float:
    """Real-analytic Eisenstein series ``E(tau, s) = sum' y^s / |k + l tau|^{2s}``, ``s > 1``.

    Evaluated through its Fourier expansion in ``x``::

        E = 2 zeta(2s) y^s + 2 sqrt(pi) Gamma(s - 1/2) zeta(2s - 1) y^{1-s} / Gamma(s)
            + 8 pi^s y^{1/2} / Gamma(s) sum_{n,l>=1} (n/l)^{s-1/2} K_{s-1/2}(2 pi n l y) cos(2 pi n l x)

    The Bessel sum decays like ``e^{-2 pi n l y}``.  See :func:`eisenstein_direct`
    for the plain lattice sum.
    """
    tau = _tau(tau)
    if not s > 1:
        raise ValueError(f"eisenstein needs s > 1, got {s!r}")
    x, y = tau.x, tau.y
    nu = s - 0.5
    value = 2.0 * zeta(2 * s) * y ** s + 2.0 * math.sqrt(math.pi) * gamma(nu) * zeta(2 * s - 1) * y ** (1 - s) / gamma(s)
    pref = 8.0 * math.pi ** s * math.sqrt(y) / gamma(s)
    # terms with 2 pi n l y beyond this are far below eps
    m_max = max(1, int(math.ceil((math.log(1.0 / p.eps) + 10.0 + 2 * abs(nu) * math.log(100.0)) / (2.0 * math.pi * y))))
    if m_max > p.max_terms:
        raise SlowConvergence(f"Bessel expansion at y={y:.6g} needs {m_max} terms")
    acc = 0.0
    for n in range(1, m_max + 1):
        l = np.arange(1, m_max // n + 1, dtype=float)
        arg = 2.0 * math.pi * n * l * y
        terms = (n / l) ** nu * kve(nu, arg) * np.exp(-arg) * np.cos(2.0 * math.pi * n * l * x)
        acc += float(np.sum(terms[::-1]))
    return float(value + pref * acc)


def eisenstein_direct(tau, s: float, p: Precision = DEFAULT_PRECISION) -> float:
    """``E(tau, s)`` as a truncated lattice sum over ``k + l tau``.

    The radius is chosen from a power-law tail bound.  Raises
    :class:`SlowConvergence` when that radius exceeds ``p.max_radius``, which
    at the default caps happens for every ``eps`` much below 1e-3.
    """
    tau = _tau(tau)
    if not s > 1:
        raise ValueError(f"eisenstein needs s > 1, got {s!r}")
    lat = Lattice2D(1.0, tau.x, 0.0, tau.y)
    r = 4.0
    while power_tail_bound(lat, s, r) * tau.y ** s >= p.eps:
        r *= 1.1
        if r > p.max_radius:
            raise SlowConvergence(
                f"lattice sum for s={s:.6g} cannot reach eps={p.eps:.3g} within radius {p.max_radius:.6g}")
    pts = points_in_radius(lat, r, p)
    n2 = np.sum(pts ** 2, axis=1)
    n2 = np.sort(n2[n2 > 0])[::-1]
    return float(tau.y ** s * np.sum(n2 ** -s))


def _integrand(a: TorusAspect, s: float, t: np.ndarray, p: Precision) -> np.ndarray:
    w1 = trace_excess(a.lattice(), t / (4.0 * math.pi), p)
    return w1 * (t ** (s - 1.0) + t ** (-s))


def _gl_panel(f, lo, hi):
    half = 0.5 * (hi - lo)
    return half * float(_GL_WEIGHTS @ f(lo + half * (_GL_NODES + 1.0)))


def _adaptive_gl(f, lo, hi, tol, depth=0):
    whole = _gl_panel(f, lo, hi)
    mid = 0.5 * (lo + hi)
    left, right = _gl_panel(f, lo, mid), _gl_panel(f, mid, hi)
    # the floor stops refinement once tol is below the rounding of the panel value
    if abs(left + right - whole) <= max(tol, 4e-16 * abs(whole)) or depth >= 30:
        return left + right
    return _adaptive_gl(f, lo, mid, tol / 2, depth + 1) + _adaptive_gl(f, mid, hi, tol / 2, depth + 1)


def _cutoff(a: TorusAspect, s: float, p: Precision) -> float:
    """Upper limit T with the neglected tail of the integral below eps/10.

    Past T the integrand decays at least like ``e^{-pi m t}`` with
    ``m = min(y, 1/y)``, so its tail integral is below
    ``g(T) / (pi m - |s| / T)``.
    """
    m = min(a.y, 1.0 / a.y)
    big_t = 2.0
    while True:
        g = float(_integrand(a, s, np.array([big_t]), p)[0])
        rate = math.pi * m - (abs(s) + 1.0) / big_t
        if rate > 0 and g / rate < p.eps / 10.0:
            return big_t
        big_t *= 1.25


def regularized_integral(a, s: float, p: Precision = DEFAULT_PRECISION) -> float:
    """``int_1^inf (W_y(t/4pi) - 1)(t^{s-1} + t^{-s}) dt``, entire in ``s``.

    Adaptive composite 16-point Gauss-Legendre on ``[1, T]``.
    """
    a = _aspect(a)
    hi = _cutoff(a, s, p)
    f = lambda t: _integrand(a, s, t, p)
    # panels of unit length keep the exponential decay well resolved
    edges = np.unique(np.concatenate([np.arange(1.0, hi, 1.0), [hi]]))
    tol = p.eps / 10.0 / max(1, len(edges) - 1)
    return float(sum(_adaptive_gl(f, lo, up, tol) for lo, up in zip(edges[:-1], edges[1:])))


def _check_pole(s):
    if abs(s) < POLE_GUARD or abs(s - 1.0) < POLE_GUARD:
        raise PoleProximity(f"s={s!r} lies within {POLE_GUARD} of a pole at 0 or 1")


def zeta_xi(a, s: float, p: Precision = DEFAULT_PRECISION) -> float:
    """Completed spectral zeta ``(4 pi)^s Gamma(s) Z_y(s)`` from the regularized integral.

    Raises
    ------
    PoleProximity
        If ``s`` is within 1e-3 of 0 or 1.
    """
    _check_pole(s)
    return 1.0 / (s - 1.0) - 1.0 / s + regularized_integral(a, s, p)


def spectral_zeta(a, s: float, p: Precision = DEFAULT_PRECISION) -> float:
    """``Z_y(s) = sum' lambda^{-s}`` over the nonzero Laplace eigenvalues."""
    return zeta_xi(a, s, p) / ((4.0 * math.pi) ** s * gamma(s))


def _zeta_smooth(a: TorusAspect, s: float, p: Precision) -> float:
    # Z(s) with the poles of xi and Gamma cancelled: multiply through by s
    return (s / (s - 1.0) - 1.0 + s * regularized_integral(a, s, p)) / ((4.0 * math.pi) ** s * gamma(1.0 + s))


def zeta_prime_zero_numeric(a, p: Precision = DEFAULT_PRECISION, h: float = FD_STEP) -> float:
    """``Z_y'(0)`` by a central difference of the regularized representation.

    Uses steps ``h`` and ``2h`` with one Richardson extrapolation.
    """
    a = _aspect(a)
    d1 = (_zeta_smooth(a, h, p) - _zeta_smooth(a, -h, p)) / (2 * h)
    d2 = (_zeta_smooth(a, 2 * h, p) - _zeta_smooth(a, -2 * h, p)) / (4 * h)
    return (4.0 * d1 - d2) / 3.0


def kronecker_limit(tau, p: Precision = DEFAULT_PRECISION) -> tuple[float, float]:
    """``(E(tau, 0), dE/ds(tau, 0)) = (-1, -2 log(2 pi y^{1/2} |eta(tau)|^2))``.

    Only rectangular tori (``tau.x == 0``) are supported.
    """
    tau = _tau(tau)
    if tau.x != 0.0:
        raise Unsupported("Kronecker limit formula is implemented for purely imaginary tau only")
    eta = dedekind_eta(tau.y, p)
    return -1.0, -2.0 * math.log(2.0 * math.pi * math.sqrt(tau.y) * eta * eta)


def zeta_prime_zero(a, p: Precision = DEFAULT_PRECISION) -> float:
    """``Z_y'(0) = -log(y eta(iy)^4)``."""
    a = _aspect(a)
    return -math.log(a.y) - 4.0 * math.log(dedekind_eta(a.y, p))


def det_laplacian(a, p: Precision = DEFAULT_PRECISION) -> float:
    """Zeta-regularized determinant ``det' Delta_y = y eta(iy)^4 = exp(-Z_y'(0))``."""
    a = _aspect(a)
    return a.y * dedekind_eta(a.y, p) ** 4


def det_laplacian_general(alpha: float, beta: float, p: Precision = DEFAULT_PRECISION) -> float:
    """``det' Delta`` on ``R^2 / (alpha Z x beta Z)``: ``(alpha beta)(alpha/beta) eta(i alpha/beta)^4``."""
    if not (alpha > 0 and beta > 0):
        raise ValueError("alpha and beta must be positive")
    r = alpha / beta
    return alpha * beta * r * dedekind_eta(r, p) ** 4
