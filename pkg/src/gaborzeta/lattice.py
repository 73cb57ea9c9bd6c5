"""Planar lattices, their adjoint and dual, and point enumeration.

A lattice is stored through a generator matrix whose columns are the basis
vectors.  Bases are not unique, so anything that compares lattices compares
the generated point sets (see :func:`same_points`), never the matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree
from scipy.special import erfc

from .errors import CapExceeded, DegenerateLattice

DET_TOL = 1e-14
_J = np.array([[0.0, 1.0], [-1.0, 0.0]])


@dataclass(frozen=True)
class Precision:
    """Truncation control shared by every infinite sum and integral.

    Parameters
    ----------
    eps : float
        Target absolute error of each evaluated sum or integral, in (0, 1).
    max_radius : float
        Hard cap on the radius of any lattice enumeration.
    max_terms : int
        Hard cap on the number of terms (integer box size, series length).
    """

    eps: float = 1e-13
    max_radius: float = 50.0
    max_terms: int = 10**7

    def __post_init__(self):
        if not 0.0 < self.eps < 1.0:
            raise ValueError(f"eps must lie in (0, 1), got {self.eps!r}")
        if not self.max_radius > 0:
            raise ValueError(f"max_radius must be positive, got {self.max_radius!r}")
        if int(self.max_terms) != self.max_terms or self.max_terms < 1:
            raise ValueError(f"max_terms must be a positive integer, got {self.max_terms!r}")


DEFAULT_PRECISION = Precision()


@dataclass(frozen=True)
class Lattice2D:
    """Full-rank lattice ``M Z^2`` with ``M = [[m11, m12], [m21, m22]]``.

    The columns ``(m11, m21)`` and ``(m12, m22)`` are the basis vectors.
    """

    m11: float
    m12: float
    m21: float
    m22: float

    def __post_init__(self):
        for name in ("m11", "m12", "m21", "m22"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise DegenerateLattice(f"{name} is not finite")
            object.__setattr__(self, name, value)
        if abs(self.m11 * self.m22 - self.m12 * self.m21) < DET_TOL:
            raise DegenerateLattice("generator matrix is singular (|det| < 1e-14)")

    @classmethod
    def from_matrix(cls, m) -> "Lattice2D":
        m = np.asarray(m, dtype=float)
        if m.shape != (2, 2):
            raise ValueError(f"generator must be 2x2, got shape {m.shape}")
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    @classmethod
    def square(cls, density: float = 1.0) -> "Lattice2D":
        _check_positive("density", density)
        a = density ** -0.5
        return cls(a, 0.0, 0.0, a)

    @classmethod
    def rectangular(cls, alpha: float, beta: float) -> "Lattice2D":
        return SeparableLattice(alpha, beta).as_lattice2d()

    @classmethod
    def hexagonal(cls, density: float = 1.0) -> "Lattice2D":
        """Hexagonal lattice with basis ``a(1, 0)``, ``a(1/2, sqrt(3)/2)``.

        The deep holes sit at ``(v1 + v2)/3`` and ``2(v1 + v2)/3``.
        """
        _check_positive("density", density)
        a = math.sqrt(2.0 / (math.sqrt(3.0) * density))
        return cls(a, 0.5 * a, 0.0, 0.5 * math.sqrt(3.0) * a)

    @classmethod
    def parse(cls, spec: str) -> "Lattice2D":
        """Build a lattice from ``square:<density>``, ``hex:<density>``,
        ``rect:<alpha>,<beta>`` or ``mat:<m11>,<m12>,<m21>,<m22>``."""
        kind, sep, args = spec.partition(":")
        if not sep:
            raise ValueError(f"lattice spec {spec!r} lacks a ':'")
        try:
            values = [float(v) for v in args.split(",")]
        except ValueError:
            raise ValueError(f"bad numbers in lattice spec {spec!r}") from None
        arity = {"square": 1, "hex": 1, "rect": 2, "mat": 4}
        if kind not in arity:
            raise ValueError(f"unknown lattice kind {kind!r}; expected one of {sorted(arity)}")
        if len(values) != arity[kind]:
            raise ValueError(f"{kind} takes {arity[kind]} value(s), got {len(values)}")
        if kind == "square":
            return cls.square(values[0])
        if kind == "hex":
            return cls.hexagonal(values[0])
        if kind == "rect":
            return cls.rectangular(*values)
        return cls(*values)

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.m11, self.m12], [self.m21, self.m22]])

    @property
    def basis(self) -> tuple[np.ndarray, np.ndarray]:
        return np.array([self.m11, self.m21]), np.array([self.m12, self.m22])

    @property
    def volume(self) -> float:
        return abs(self.m11 * self.m22 - self.m12 * self.m21)

    @property
    def density(self) -> float:
        return 1.0 / self.volume

    def scaled(self, factor: float) -> "Lattice2D":
        return Lattice2D.from_matrix(factor * self.matrix)

    def to_coords(self, z) -> np.ndarray:
        """Generator coordinates of ``z`` (last axis of length 2), not reduced mod 1."""
        z = np.asarray(z, dtype=float)
        return z @ np.linalg.inv(self.matrix).T

    def from_coords(self, uv) -> np.ndarray:
        uv = np.asarray(uv, dtype=float)
        return uv @ self.matrix.T


@dataclass(frozen=True)
class SeparableLattice:
    """The rectangular lattice ``alpha Z x beta Z``."""

    alpha: float
    beta: float

    def __post_init__(self):
        _check_positive("alpha", self.alpha)
        _check_positive("beta", self.beta)
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))

    @classmethod
    def from_aspect(cls, y: float, density: float = 1.0) -> "SeparableLattice":
        """``density^{-1/2} (y^{1/2} Z x y^{-1/2} Z)``."""
        _check_positive("y", y)
        _check_positive("density", density)
        s = density ** -0.5
        return cls(s * math.sqrt(y), s / math.sqrt(y))

    @property
    def density(self) -> float:
        return 1.0 / (self.alpha * self.beta)

    def as_lattice2d(self) -> Lattice2D:
        return Lattice2D(self.alpha, 0.0, 0.0, self.beta)


def _check_positive(name, value):
    if not (isinstance(value, (int, float, np.floating, np.integer)) and math.isfinite(value) and value > 0):
        raise ValueError(f"{name} must be a positive finite number, got {value!r}")


def adjoint(l: Lattice2D) -> Lattice2D:
    """Adjoint lattice ``J M^{-T} Z^2``, the dual rotated by 90 degrees."""
    return Lattice2D.from_matrix(_J @ np.linalg.inv(l.matrix).T)


def dual(l: Lattice2D) -> Lattice2D:
    return Lattice2D.from_matrix(np.linalg.inv(l.matrix).T)


def symplectic_form(z, zp):
    """``x w' - w x'`` for ``z = (x, w)``, ``zp = (x', w')``; broadcasts over leading axes."""
    z = np.asarray(z, dtype=float)
    zp = np.asarray(zp, dtype=float)
    out = z[..., 0] * zp[..., 1] - z[..., 1] * zp[..., 0]
    return float(out) if out.ndim == 0 else out


def reduced_basis(l: Lattice2D) -> np.ndarray:
    """Lagrange-Gauss reduced generator (columns), same lattice."""
    u, v = (b.copy() for b in l.basis)
    if u @ u > v @ v:
        u, v = v, u
    while True:
        mu = round((u @ v) / (u @ u))
        v = v - mu * u
        if v @ v >= u @ u:
            break
        u, v = v, u
    return np.column_stack([u, v])


def cell_diameter(l: Lattice2D) -> float:
    """Diameter of the fundamental parallelogram of the reduced basis."""
    m = reduced_basis(l)
    u, v = m[:, 0], m[:, 1]
    return float(max(np.hypot(*(u + v)), np.hypot(*(u - v))))


def points_in_radius(l: Lattice2D, r: float, p: Precision = DEFAULT_PRECISION,
                     center=(0.0, 0.0), return_coeffs: bool = False):
    """All lattice points within distance ``r`` of ``center``.

    Integer coordinates are bounded through the row norms of the inverse
    generator and the box is then filtered by the exact radius, so the
    result is complete and free of duplicates.

    Returns
    -------
    points : ndarray, shape (n, 2)
    coeffs : ndarray of int, shape (n, 2)
        Only when ``return_coeffs`` is set; ``points = coeffs @ M.T``.

    Raises
    ------
    CapExceeded
        If ``r`` exceeds ``p.max_radius`` or the integer box exceeds ``p.max_terms``.
    """
    if r < 0:
        raise ValueError("radius must be non-negative")
    if r > p.max_radius:
        raise CapExceeded(f"radius {r:.6g} exceeds max_radius {p.max_radius:.6g}")
    m = l.matrix
    minv = np.linalg.inv(m)
    c0 = minv @ np.asarray(center, dtype=float)
    reach = np.linalg.norm(minv, axis=1) * r
    lo = np.floor(c0 - reach).astype(np.int64)
    hi = np.ceil(c0 + reach).astype(np.int64)
    size = int(np.prod(hi - lo + 1))
    if size > p.max_terms:
        raise CapExceeded(f"enumeration box of {size} points exceeds max_terms {p.max_terms}")
    k, j = np.meshgrid(np.arange(lo[0], hi[0] + 1), np.arange(lo[1], hi[1] + 1), indexing="ij")
    coeffs = np.column_stack([k.ravel(), j.ravel()])
    pts = coeffs @ m.T
    keep = np.hypot(*(pts - np.asarray(center, dtype=float)).T) <= r
    if return_coeffs:
        return pts[keep], coeffs[keep]
    return pts[keep]


def gaussian_tail_bound(l: Lattice2D, c: float, r: float) -> float:
    """Upper bound on ``sum exp(-c |x|^2)`` over points ``x`` of any translate
    of ``l`` with ``|x| > r``.

    Each point owns a translated fundamental cell of diameter ``D`` lying
    outside the disc of radius ``r - D``; comparing the sum with the
    integral over those cells gives the bound.  Infinite when ``r <= 2D``.
    """
    d = cell_diameter(l)
    rho = r - 2.0 * d
    if rho <= 0:
        return math.inf
    sc = math.sqrt(c)
    integral = math.exp(-c * rho * rho) / (2.0 * c) + d * math.sqrt(math.pi) / (2.0 * sc) * erfc(sc * rho)
    return 2.0 * math.pi * integral / l.volume


def gaussian_radius(l: Lattice2D, c: float, eps: float, p: Precision = DEFAULT_PRECISION) -> float:
    """Smallest radius (to 1%) whose Gaussian tail bound is below ``eps``.

    Raises
    ------
    CapExceeded
        If that radius exceeds ``p.max_radius``.
    """
    d = cell_diameter(l)
    r = 2.0 * d + math.sqrt(max(math.log(1.0 / eps), 1.0) / c)
    while gaussian_tail_bound(l, c, r) >= eps:
        r *= 1.01
        if r > p.max_radius:
            raise CapExceeded(
                f"Gaussian sum with rate {c:.6g} needs radius beyond max_radius {p.max_radius:.6g}")
    return r


def power_tail_bound(l: Lattice2D, s: float, r: float) -> float:
    """Upper bound on ``sum |x|^{-2s}`` over lattice points with ``|x| > r`` (``s > 1``)."""
    d = cell_diameter(l)
    rho = r - 2.0 * d
    if rho <= 0 or s <= 1:
        return math.inf
    # integral of (rho' + d) rho'^{-2s} from rho to infinity
    integral = rho ** (2 - 2 * s) / (2 * s - 2) + d * rho ** (1 - 2 * s) / (2 * s - 1)
    return 2.0 * math.pi * integral / l.volume


def same_points(a: Lattice2D, b: Lattice2D, r: float = 5.0, tol: float = 1e-12,
                p: Precision = DEFAULT_PRECISION) -> bool:
    """Whether ``a`` and ``b`` generate the same points inside radius ``r``.

    Points within ``tol`` of the boundary circle are ignored on both sides so
    that rounding cannot drop a point from one enumeration only.
    """
    pa = points_in_radius(a, r + 1.0, p)
    pb = points_in_radius(b, r + 1.0, p)
    pa = pa[np.hypot(*pa.T) <= r - tol]
    pb = pb[np.hypot(*pb.T) <= r - tol]
    if len(pa) != len(pb):
        return False
    if len(pa) == 0:
        return True
    dist, _ = cKDTree(pb).query(pa)
    return bool(np.max(dist) <= tol)
