"""Jacobi theta nulls at purely imaginary argument ``tau = iy``.

Three independent evaluation routes are offered: the Gaussian series, the
triple product, and the series evaluated on the far side of ``tau -> -1/tau``.
All values are real and positive for ``y > 0``.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from .errors import CapExceeded
from .lattice import DEFAULT_PRECISION, Precision

# below this, theta_null evaluates through the Jacobi transform
TRANSFORM_BELOW = 0.2


class ThetaKind(enum.IntEnum):
    THETA2 = 2
    THETA3 = 3
    THETA4 = 4

    @classmethod
    def coerce(cls, kind) -> "ThetaKind":
        try:
            return cls(int(kind))
        except (ValueError, TypeError):
            raise ValueError(f"theta kind must be 2, 3 or 4, got {kind!r}") from None


# theta_2 <-> theta_4 and theta_3 <-> theta_3 under tau -> -1/tau
_PARTNER = {ThetaKind.THETA2: ThetaKind.THETA4, ThetaKind.THETA3: ThetaKind.THETA3,
            ThetaKind.THETA4: ThetaKind.THETA2}


def _check_y(y):
    if not (math.isfinite(y) and y > 0):
        raise ValueError(f"y must be a positive finite number, got {y!r}")


def _series_length(y: float, p: Precision) -> int:
    """Smallest K with 2 e^{-pi y K^2} / (1 - e^{-pi y (2K+1)}) < eps.

    Summing the indices below K then leaves a tail under ``p.eps``.
    """
    a = math.pi * y
    k = max(1, int(math.sqrt(math.log(2.0 / p.eps) / a)))
    while True:
        tail = 2.0 * math.exp(-a * k * k) / -math.expm1(-a * (2 * k + 1))
        if tail < p.eps:
            break
        k += 1
        if k > p.max_terms:
            raise CapExceeded(f"theta series at y={y:.6g} needs more than {p.max_terms} terms; "
                              "evaluate through the Jacobi transform")
    # step back while the bound still holds so K is minimal
    while k > 1 and 2.0 * math.exp(-a * (k - 1) ** 2) / -math.expm1(-a * (2 * k - 1)) < p.eps:
        k -= 1
    return k


def theta_series(kind, y: float, p: Precision = DEFAULT_PRECISION) -> tuple[float, int]:
    """Direct Gaussian series for the theta null, no transform applied.

    Returns the value and the number of series indices summed.
    """
    kind = ThetaKind.coerce(kind)
    _check_y(y)
    n = _series_length(y, p)
    k = np.arange(n - 1, 0, -1, dtype=float)  # smallest terms first
    if kind is ThetaKind.THETA2:
        h = np.arange(n - 1, -1, -1, dtype=float) + 0.5
        return float(2.0 * np.sum(np.exp(-math.pi * y * h * h))), n
    terms = np.exp(-math.pi * y * k * k)
    if kind is ThetaKind.THETA4:
        terms = terms * np.where(k % 2 == 0, 1.0, -1.0)
    return float(1.0 + 2.0 * np.sum(terms)), n


def theta_transformed(kind, y: float, p: Precision = DEFAULT_PRECISION) -> float:
    """Theta null through ``tau -> -1/tau``: ``y^{-1/2}`` times the partner at ``1/y``.

    ``theta_2(iy) = y^{-1/2} theta_4(i/y)``, ``theta_4(iy) = y^{-1/2} theta_2(i/y)``,
    ``theta_3(iy) = y^{-1/2} theta_3(i/y)``.
    """
    return theta_transformed_terms(kind, y, p)[0]


def theta_transformed_terms(kind, y: float, p: Precision = DEFAULT_PRECISION) -> tuple[float, int]:
    kind = ThetaKind.coerce(kind)
    _check_y(y)
    scale = y ** -0.5
    # the partner series must be accurate to eps / scale
    inner = Precision(min(max(p.eps / scale, 1e-300), 0.5), p.max_radius, p.max_terms)
    value, n = theta_series(_PARTNER[kind], 1.0 / y, inner)
    return scale * value, n


def theta_null_terms(kind, y: float, p: Precision = DEFAULT_PRECISION) -> tuple[float, int]:
    _check_y(y)
    if y < TRANSFORM_BELOW:
        return theta_transformed_terms(kind, y, p)
    return theta_series(kind, y, p)


def theta_null(kind, y: float, p: Precision = DEFAULT_PRECISION) -> float:
    """Theta null ``theta_j(iy)`` for ``j`` in {2, 3, 4}, accurate to ``p.eps``.

    The series is cut once the geometric majorant of its Gaussian tail drops
    below ``p.eps``.  For ``y < 0.2`` the value is computed at ``1/y`` and
    transformed back, which keeps the series to a few dozen terms.

    Examples
    --------
    >>> round(theta_null(3, 1.0), 7)
    1.0864348
    """
    return theta_null_terms(kind, y, p)[0]


def theta_product_terms(kind, y: float, p: Precision = DEFAULT_PRECISION) -> tuple[float, int]:
    kind = ThetaKind.coerce(kind)
    _check_y(y)
    if y < TRANSFORM_BELOW:
        scale = y ** -0.5
        inner = Precision(min(p.eps / scale, 0.5), p.max_radius, p.max_terms)
        value, n = theta_product_terms(_PARTNER[kind], 1.0 / y, inner)
        return scale * value, n
    q = math.exp(-math.pi * y)
    # log of every remaining factor is below 3 q^{2k-1} / (1 - q); the sum
    # over k > k0 is 3 q^{2 k0 + 1} / ((1 - q)(1 - q^2))
    denom = -math.expm1(-math.pi * y) * -math.expm1(-2.0 * math.pi * y)
    if kind is ThetaKind.THETA2:
        value = 2.0 * math.exp(-math.pi * y / 4.0)
    else:
        value = 1.0
    k = 0
    while True:
        k += 1
        if k > p.max_terms:
            raise CapExceeded(f"triple product at y={y:.6g} needs more than {p.max_terms} factors")
        q2k = q ** (2 * k)
        if kind is ThetaKind.THETA2:
            value *= (1.0 - q2k) * (1.0 + q2k) ** 2
        elif kind is ThetaKind.THETA3:
            value *= (1.0 - q2k) * (1.0 + q ** (2 * k - 1)) ** 2
        else:
            value *= (1.0 - q2k) * (1.0 - q ** (2 * k - 1)) ** 2
        log_tail = 3.0 * q ** (2 * k + 1) / denom
        if value * math.expm1(log_tail) < p.eps:
            return value, k


def theta_null_product(kind, y: float, p: Precision = DEFAULT_PRECISION) -> float:
    """Theta null from the Jacobi triple product.

    With ``q = e^{-pi y}``::

        theta_2 = 2 q^{1/4} prod (1 - q^{2k}) (1 + q^{2k})^2
        theta_3 = prod (1 - q^{2k}) (1 + q^{2k-1})^2
        theta_4 = prod (1 - q^{2k}) (1 - q^{2k-1})^2

    The product stops once the remaining factors can move the value by less
    than ``p.eps``.  Small ``y`` is handled through the Jacobi transform, as
    in :func:`theta_null`.
    """
    return theta_product_terms(kind, y, p)[0]


def evaluate(kind, y: float, method: str = "series", p: Precision = DEFAULT_PRECISION) -> tuple[float, int]:
    """Dispatch used by the CLI; returns ``(value, terms_used)``."""
    if method == "series":
        return theta_null_terms(kind, y, p)
    if method == "product":
        return theta_product_terms(kind, y, p)
    if method == "transform":
        return theta_transformed_terms(kind, y, p)
    raise ValueError(f"unknown method {method!r}; expected series, product or transform")


def theta3_array(y, p: Precision = DEFAULT_PRECISION) -> np.ndarray:
    """Vectorized ``theta_3(iy)`` by the direct series, no transform.

    The series length is set by the smallest ``y`` in the batch, so callers
    should keep ``y`` away from 0 (quadrature over the heat trace does).
    """
    y = np.asarray(y, dtype=float)
    if np.any(~(y > 0)):
        raise ValueError("all y must be positive")
    n = _series_length(float(np.min(y)), p)
    k = np.arange(n - 1, 0, -1, dtype=float)
    return 1.0 + 2.0 * np.sum(np.exp(-math.pi * y[..., None] * k * k), axis=-1)


def theta3_minus_one(y, p: Precision = DEFAULT_PRECISION) -> np.ndarray:
    """``theta_3(iy) - 1 = 2 sum_{k>=1} e^{-pi y k^2}`` without cancellation.

    The tail is cut relative to the leading term ``2 e^{-pi y}``, so tiny
    values keep full relative accuracy.  Vectorized over ``y``.
    """
    y = np.asarray(y, dtype=float)
    if np.any(~(y > 0)):
        raise ValueError("all y must be positive")
    ymin = float(np.min(y))
    # relative tail after the first n-1 terms: e^{-pi y (n^2 - 1)} / (1 - e^{-pi y (2n+1)})
    a = math.pi * ymin
    n = 2
    while math.exp(-a * (n * n - 1)) / -math.expm1(-a * (2 * n + 1)) >= p.eps:
        n += 1
        if n > p.max_terms:
            raise CapExceeded(f"theta_3 - 1 at y={ymin:.6g} needs more than {p.max_terms} terms")
    k = np.arange(n - 1, 0, -1, dtype=float)
    return 2.0 * np.sum(np.exp(-math.pi * y[..., None] * k * k), axis=-1)
