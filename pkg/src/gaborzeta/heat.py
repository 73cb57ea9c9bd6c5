"""Heat kernel on the flat torus ``R^2 / L``.

Two representations are available: the periodized Gaussian over the lattice
itself and the Fourier series over the adjoint lattice with the symplectic
phase.  They agree to truncation error; :func:`heat_kernel` picks whichever
decays faster.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ComputationError
from .lattice import (DEFAULT_PRECISION, Lattice2D, Precision, adjoint, cell_diameter, dual,
                      gaussian_radius, points_in_radius, reduced_basis, symplectic_form)
from .theta import theta3_array, theta3_minus_one, theta_null

DEFAULT_GRID = 64
REFINE_STEP = 1e-10


@dataclass(frozen=True)
class HeatReport:
    """Extreme temperatures of the torus heat kernel at time ``t``.

    ``argmin`` is given in generator coordinates ``(u, v)`` in ``[0, 1)^2``.
    ``max_temp`` is the value at the lattice points, ``trace`` the heat trace
    ``sum exp(-4 pi^2 t |d|^2)`` over the dual lattice; the two coincide for
    unit-volume lattices.
    """

    t: float
    max_temp: float
    min_temp: float
    argmin: tuple[float, float]
    trace: float


def _check_t(t):
    if not (math.isfinite(t) and t > 0):
        raise ValueError(f"t must be a positive finite number, got {t!r}")


def _as_points(z) -> tuple[np.ndarray, bool]:
    z = np.asarray(z, dtype=float)
    if z.shape[-1] != 2:
        raise ValueError("points must have a trailing axis of length 2")
    return z.reshape(-1, 2), z.ndim == 1


def _reduce(l: Lattice2D, z: np.ndarray) -> np.ndarray:
    """Translate points into the fundamental cell of the reduced basis."""
    m = reduced_basis(l)
    c = z @ np.linalg.inv(m).T
    return (c - np.floor(c)) @ m.T


def heat_kernel_direct(l: Lattice2D, z, t: float, p: Precision = DEFAULT_PRECISION):
    """``(4 pi t)^{-1} sum_lambda exp(-|lambda + z|^2 / (4t))``.

    ``z`` may be a single point or an array of points (trailing axis 2);
    the sum is cut where the Gaussian tail bound falls below ``p.eps``.
    """
    _check_t(t)
    pts, single = _as_points(z)
    pts = _reduce(l, pts)
    pref = 1.0 / (4.0 * math.pi * t)
    c = 1.0 / (4.0 * t)
    r = gaussian_radius(l, c, p.eps / pref, p)
    # every reduced point lies within one cell diameter of the origin
    lam = points_in_radius(l, min(r + cell_diameter(l), p.max_radius), p)
    d2 = np.sum((pts[:, None, :] + lam[None, :, :]) ** 2, axis=-1)
    out = pref * np.sum(np.exp(-c * d2), axis=1)
    return float(out[0]) if single else out


def heat_kernel_fourier(l: Lattice2D, z, t: float, p: Precision = DEFAULT_PRECISION):
    """``vol(L)^{-1} sum_{a in L°} exp(-4 pi^2 t |a|^2) exp(2 pi i sigma(a, z))``.

    The adjoint lattice is enumerated symmetrically, so the imaginary part
    cancels; it is checked to be below 1e-12.
    """
    _check_t(t)
    pts, single = _as_points(z)
    adj = adjoint(l)
    c = 4.0 * math.pi ** 2 * t
    r = gaussian_radius(adj, c, p.eps * l.volume, p)
    lam = points_in_radius(adj, r, p)
    weights = np.exp(-c * np.sum(lam ** 2, axis=1))
    phase = 2.0 * math.pi * symplectic_form(lam[None, :, :], pts[:, None, :])
    total = (np.exp(1j * phase) @ weights) / l.volume
    if np.max(np.abs(total.imag)) > 1e-12 * max(1.0, float(np.max(np.abs(total.real)))):
        raise ComputationError("Fourier heat sum has a non-negligible imaginary part")
    out = total.real
    return float(out[0]) if single else out


def _prefers_fourier(l: Lattice2D, t: float) -> bool:
    shortest = np.min(np.linalg.norm(reduced_basis(dual(l)), axis=0))
    return 4.0 * math.pi ** 2 * t * shortest ** 2 > 1.0


def heat_kernel(l: Lattice2D, z, t: float, p: Precision = DEFAULT_PRECISION):
    """Heat kernel by whichever representation converges faster at this ``t``."""
    if _prefers_fourier(l, t):
        return heat_kernel_fourier(l, z, t, p)
    return heat_kernel_direct(l, z, t, p)


def trace(l: Lattice2D, t, p: Precision = DEFAULT_PRECISION):
    """Heat trace ``W(t) = sum_{d in L^perp} exp(-4 pi^2 t |d|^2)``.

    For diagonal generators the sum factors into ``theta_3`` nulls, which
    also accepts an array of times.  Otherwise the dual lattice is
    enumerated, raising :class:`CapExceeded` as ``t -> 0``.
    """
    if l.m12 == 0.0 and l.m21 == 0.0:
        ya = 4.0 * math.pi * np.asarray(t, dtype=float) / l.m11 ** 2
        yb = 4.0 * math.pi * np.asarray(t, dtype=float) / l.m22 ** 2
        if ya.ndim == 0:
            _check_t(float(t))
            return theta_null(3, float(ya), p) * theta_null(3, float(yb), p)
        return theta3_array(ya, p) * theta3_array(yb, p)
    if np.ndim(t):
        return np.array([trace(l, float(ti), p) for ti in np.ravel(t)]).reshape(np.shape(t))
    _check_t(t)
    d = dual(l)
    c = 4.0 * math.pi ** 2 * t
    lam = points_in_radius(d, gaussian_radius(d, c, p.eps, p), p)
    return float(np.sum(np.exp(-c * np.sum(lam ** 2, axis=1))))


def trace_excess(l: Lattice2D, t, p: Precision = DEFAULT_PRECISION):
    """``W(t) - 1``, the heat trace without its zero mode.

    Summed directly over the nonzero dual vectors with the truncation set
    relative to the leading term, so it stays accurate when ``W(t)`` rounds
    to 1.  Accepts an array of times.
    """
    if l.m12 == 0.0 and l.m21 == 0.0:
        ta = np.asarray(t, dtype=float)
        ea = theta3_minus_one(4.0 * math.pi * ta / l.m11 ** 2, p)
        eb = theta3_minus_one(4.0 * math.pi * ta / l.m22 ** 2, p)
        out = ea + eb + ea * eb
        return float(out) if out.ndim == 0 else out
    if np.ndim(t):
        return np.array([trace_excess(l, float(ti), p) for ti in np.ravel(t)]).reshape(np.shape(t))
    _check_t(t)
    d = dual(l)
    c = 4.0 * math.pi ** 2 * t
    shortest = float(np.min(np.linalg.norm(reduced_basis(d), axis=0)))
    lead = math.exp(-c * shortest ** 2)
    lam = points_in_radius(d, gaussian_radius(d, c, p.eps * lead, p), p)
    n2 = np.sum(lam ** 2, axis=1)
    return float(np.sum(np.sort(np.exp(-c * n2[n2 > 0]))))


def temperature_field(l: Lattice2D, t: float, grid_n: int = DEFAULT_GRID,
                      p: Precision = DEFAULT_PRECISION) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Kernel sampled at ``(i/n, j/n)`` in generator coordinates.

    Returns ``(u, v, temp)`` as ``n x n`` arrays indexed ``[i, j]``.
    """
    u, v = np.meshgrid(np.arange(grid_n) / grid_n, np.arange(grid_n) / grid_n, indexing="ij")
    z = l.from_coords(np.stack([u, v], axis=-1).reshape(-1, 2))
    temp = heat_kernel(l, z, t, p).reshape(grid_n, grid_n)
    return u, v, temp


def grid_minimum(f, grid_n: int, rel_tie: float = 1e-12) -> tuple[float, float]:
    """Grid point of ``[0,1)^2`` minimizing the vectorized ``f(uv)``.

    Values within ``rel_tie`` of the minimum count as ties and the
    lexicographically smallest ``(u, v)`` wins.
    """
    u, v = np.meshgrid(np.arange(grid_n) / grid_n, np.arange(grid_n) / grid_n, indexing="ij")
    vals = np.asarray(f(np.stack([u.ravel(), v.ravel()], axis=-1)))
    best = vals.min()
    idx = int(np.flatnonzero(vals <= best + rel_tie * max(1.0, abs(best)))[0])
    return float(u.ravel()[idx]), float(v.ravel()[idx])


def coordinate_descent(f, start, step: float, tol: float = REFINE_STEP) -> tuple[np.ndarray, float]:
    """Minimize scalar ``f`` from ``start`` by axis moves, halving ``step`` when stuck."""
    x = np.array(start, dtype=float)
    fx = f(x)
    while step >= tol:
        moved = False
        for axis in (0, 1):
            for sign in (-1.0, 1.0):
                trial = x.copy()
                trial[axis] += sign * step
                ft = f(trial)
                if ft < fx:
                    x, fx, moved = trial, ft, True
                    break
        if not moved:
            step *= 0.5
    return x, fx


def min_max_temperature(l: Lattice2D, t: float, grid_n: int = DEFAULT_GRID,
                        p: Precision = DEFAULT_PRECISION) -> HeatReport:
    """Coldest and hottest temperature of the heat kernel at time ``t``.

    The maximum sits at the lattice points.  The minimum is located by a
    ``grid_n x grid_n`` scan of the fundamental cell followed by coordinate
    descent down to a step of 1e-10; no assumption is made about where it is.
    """
    _check_t(t)
    if grid_n < 16:
        raise ValueError("grid_n must be at least 16")

    def temp(uv):
        return heat_kernel(l, l.from_coords(uv), t, p)

    start = grid_minimum(temp, grid_n)
    uv, m = coordinate_descent(lambda x: float(temp(x)), start, 1.0 / grid_n)
    uv = uv - np.floor(uv)
    return HeatReport(t=float(t), max_temp=float(heat_kernel(l, np.zeros(2), t, p)), min_temp=float(m),
                      argmin=(float(uv[0]), float(uv[1])), trace=float(trace(l, t, p)))
