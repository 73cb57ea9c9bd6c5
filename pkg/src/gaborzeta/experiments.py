"""Scripted checks of the extremal results for density-2 Gaussian Gabor frames.

Each function returns a plain report object; nothing here prints or asserts.
``verify`` in the CLI turns the reports into an exit code.
"""

from __future__ import annotations

import csv
import math
from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .eta_zeta import TorusAspect, det_laplacian
from .gabor import frame_bounds_integer_density, tolimieri_orr_bound
from .heat import min_max_temperature, trace_excess
from .lattice import DEFAULT_PRECISION, Lattice2D, Precision, SeparableLattice
from .theta import theta_null

INEQUALITY_TOL = 1e-12
GOLDEN_TOL = 1e-6
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0

DEFAULT_Y_GRID = (0.25, 0.5, 0.8, 1.0, 1.25, 2.0, 3.0, 4.0)
DEFAULT_T_GRID = tuple(np.geomspace(0.01, 1.0, 25))
DEFAULT_HEX_T_GRID = tuple(np.geomspace(0.02, 1.0, 10))


@dataclass(frozen=True)
class ScanRow:
    y: float
    a_r: float
    b_r: float
    det_val: float
    identity_residual: float


@dataclass
class ScanResult:
    rows: list[ScanRow]
    argmax_A: float
    argmin_B: float


def a_r(r: float, y: float, p: Precision = DEFAULT_PRECISION) -> float:
    """``theta_4(ir/y) theta_4(iry)``."""
    return theta_null(4, r / y, p) * theta_null(4, r * y, p)


def b_r(r: float, y: float, p: Precision = DEFAULT_PRECISION) -> float:
    """``theta_3(ir/y) theta_3(iry)``."""
    return theta_null(3, r / y, p) * theta_null(3, r * y, p)


def golden_section(f, lo: float, hi: float, tol: float) -> float:
    """Minimizer of a unimodal ``f`` on ``[lo, hi]`` to within ``tol``."""
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def _refine_log(f, ys: np.ndarray, values: np.ndarray) -> float:
    # bracket the best grid point by its neighbours and search in log y
    i = int(np.argmin(values))
    lo = math.log(ys[max(i - 1, 0)])
    hi = math.log(ys[min(i + 1, len(ys) - 1)])
    # |dy| = y |d log y| and y stays below 2 near the optimum of interest
    u = golden_section(lambda u: f(math.exp(u)), lo, hi, GOLDEN_TOL / (2.0 * math.exp(hi)))
    return math.exp(u)


def scan_extremum(r: float, y_min: float, y_max: float, n: int,
                  p: Precision = DEFAULT_PRECISION) -> ScanResult:
    """Tabulate ``A_r``, ``B_r``, ``det' Delta_y`` on a log grid and locate the extrema.

    The maximizer of ``A_r`` and the minimizer of ``B_r`` are refined by
    golden-section search in ``log y``.
    """
    if not (0 < y_min < 1 < y_max):
        raise ValueError("need 0 < y_min < 1 < y_max")
    if n < 51:
        raise ValueError("n must be at least 51")
    if not r > 0:
        raise ValueError("r must be positive")
    ys = np.geomspace(y_min, y_max, n)
    rows = [ScanRow(y=float(y), a_r=a_r(r, y, p), b_r=b_r(r, y, p), det_val=det_laplacian(y, p),
                    identity_residual=identity_check(y, p)) for y in ys]
    av = np.array([row.a_r for row in rows])
    bv = np.array([row.b_r for row in rows])
    y_a = _refine_log(lambda y: -a_r(r, y, p), ys, -av)
    y_b = _refine_log(lambda y: b_r(r, y, p), ys, bv)
    return ScanResult(rows=rows, argmax_A=y_a, argmin_B=y_b)


def density2_bounds(y: float, p: Precision = DEFAULT_PRECISION) -> tuple[float, float]:
    """Sharp bounds of ``G(g0, 2^{-1/2}(y^{1/2} Z x y^{-1/2} Z))``.

    ``A = 2 theta_4(i/y) theta_4(iy)`` and ``B = 2 theta_3(i/y) theta_3(iy)``.
    """
    return 2.0 * a_r(1.0, y, p), 2.0 * b_r(1.0, y, p)


def identity_check(y: float, p: Precision = DEFAULT_PRECISION) -> float:
    """Relative residual of ``2^10 (det' Delta_y)^3 = A^4 B^2`` at density 2."""
    if not y > 0:
        raise ValueError("y must be positive")
    lhs = 1024.0 * det_laplacian(y, p) ** 3
    a, b = density2_bounds(y, p)
    return abs(lhs - a ** 4 * b ** 2) / lhs


@dataclass(frozen=True)
class ChainRow:
    y: float
    trace_margin: float
    trace_gap: float
    det_margin: float
    theta_margin: float
    trace_ok: bool
    det_ok: bool
    theta_ok: bool


@dataclass
class ChainReport:
    rows: list[ChainRow]
    tol: float

    @property
    def all_pass(self) -> bool:
        return all(r.trace_ok and r.det_ok and r.theta_ok for r in self.rows)

    @property
    def strict_away_from_one(self) -> bool:
        """Every stage is a strict inequality for ``y != 1``."""
        return all(min(r.trace_gap, r.det_margin, r.theta_margin) > self.tol
                   for r in self.rows if r.y != 1.0)

    @property
    def passed(self) -> bool:
        return self.all_pass and self.strict_away_from_one


def implication_chain(y_grid: Sequence[float] = DEFAULT_Y_GRID, t_grid: Sequence[float] = DEFAULT_T_GRID,
                      p: Precision = DEFAULT_PRECISION, tol: float = INEQUALITY_TOL) -> ChainReport:
    """Evaluate the three stages of the chain at every ``y``.

    1. ``W_y(t) >= W_1(t)`` on ``t_grid``; the minimum difference is the
       margin and the maximum (the gap) shows whether ``W_y`` equals ``W_1``;
    2. ``det' Delta_y <= det' Delta_1``;
    3. ``y^{1/2} theta_2(iy) theta_4(iy) <= theta_2(i) theta_4(i)``.

    Margins are ``larger - smaller`` so all are nonnegative when the stage holds.
    """
    if not y_grid or not t_grid:
        raise ValueError("grids must be nonempty")
    if 1.0 not in [float(y) for y in y_grid]:
        raise ValueError("y_grid must contain 1")
    ts = np.asarray(t_grid, dtype=float)
    w1 = trace_excess(TorusAspect(1.0).lattice(), ts, p)
    det1 = det_laplacian(1.0, p)
    th1 = theta_null(2, 1.0, p) * theta_null(4, 1.0, p)
    rows = []
    for y in y_grid:
        y = float(y)
        diff = trace_excess(TorusAspect(y).lattice(), ts, p) - w1
        tm, tg = float(np.min(diff)), float(np.max(diff))
        dm = det1 - det_laplacian(y, p)
        thm = th1 - math.sqrt(y) * theta_null(2, y, p) * theta_null(4, y, p)
        rows.append(ChainRow(y=y, trace_margin=tm, trace_gap=tg, det_margin=dm, theta_margin=thm,
                             trace_ok=tm >= -tol, det_ok=dm >= -tol, theta_ok=thm >= -tol))
    return ChainReport(rows=rows, tol=tol)


@dataclass(frozen=True)
class DensityTimeReport:
    n: int
    y: float
    t: float
    gabor_A: float
    gabor_B: float
    heat_A: float
    heat_B: float
    rel_mismatch_A: float
    rel_mismatch_B: float
    tol: float = 1e-8

    @property
    def passed(self) -> bool:
        return self.rel_mismatch_A < self.tol and self.rel_mismatch_B < self.tol


def density_time_check(n: int, y: float, p: Precision = DEFAULT_PRECISION,
                       grid_n: int = 64) -> DensityTimeReport:
    """Compare sharp bounds at density ``2n`` with ``2n`` times the heat extremes at ``t = n/(4 pi)``.

    The torus lattice is the unit-volume ``y^{1/2} Z x y^{-1/2} Z``; the
    Gabor lattice is that lattice scaled by ``(2n)^{-1/2}``.
    """
    if n not in (1, 2, 3):
        raise ValueError("n must be 1, 2 or 3")
    t = n / (4.0 * math.pi)
    gab = frame_bounds_integer_density(SeparableLattice.from_aspect(y, 2 * n), grid_n, p)
    heat = min_max_temperature(TorusAspect(y).lattice(), t, grid_n, p)
    ha, hb = 2 * n * heat.min_temp, 2 * n * heat.max_temp
    return DensityTimeReport(n=n, y=float(y), t=t, gabor_A=gab.lower_A, gabor_B=gab.upper_B,
                             heat_A=ha, heat_B=hb,
                             rel_mismatch_A=abs(gab.lower_A - ha) / abs(ha),
                             rel_mismatch_B=abs(gab.upper_B - hb) / abs(hb))


@dataclass(frozen=True)
class HexTimeRow:
    t: float
    excess_hex: float
    excess_square: float
    excess_rect2: float
    excess_rect3: float
    min_hex: float
    min_square: float


@dataclass
class HexReport:
    density: float
    b_tilde: dict[str, float]
    rows: list[HexTimeRow] = field(default_factory=list)

    @property
    def b_tilde_ordered(self) -> bool:
        b = self.b_tilde
        return b["hex"] < b["square"] < b["rect2"] < b["rect3"]

    @property
    def traces_ordered(self) -> bool:
        return all(r.excess_hex < r.excess_square < r.excess_rect2 < r.excess_rect3 for r in self.rows)

    @property
    def passed(self) -> bool:
        return self.b_tilde_ordered and self.traces_ordered


def comparison_lattices(density: float = 1.0) -> dict[str, Lattice2D]:
    return {
        "hex": Lattice2D.hexagonal(density),
        "square": Lattice2D.square(density),
        "rect2": SeparableLattice.from_aspect(2.0, density).as_lattice2d(),
        "rect3": SeparableLattice.from_aspect(3.0, density).as_lattice2d(),
    }


def hexagonal_comparison(density: float = 2.0, t_grid: Sequence[float] = DEFAULT_HEX_T_GRID,
                         p: Precision = DEFAULT_PRECISION, min_grid: int = 32) -> HexReport:
    """Hexagonal against square and rectangular lattices.

    Records the Tolimieri-Orr bound at ``density`` and, for each ``t``, the
    heat trace minus its zero mode for the unit-volume lattices; the trace at
    time ``t`` equals the Tolimieri-Orr bound at density ``8 pi t``.  The
    zero mode is dropped because at large ``t`` every trace rounds to 1.  The minimal temperatures
    of the hexagonal and square tori are reported only; their ordering is an
    open problem and is not checked.
    """
    if not density > 0:
        raise ValueError("density must be positive")
    b = {name: tolimieri_orr_bound(l, p) for name, l in comparison_lattices(density).items()}
    unit = comparison_lattices(1.0)
    rows = []
    for t in t_grid:
        t = float(t)
        ex = {name: float(trace_excess(l, t, p)) for name, l in unit.items()}
        rows.append(HexTimeRow(t=t, excess_hex=ex["hex"], excess_square=ex["square"], excess_rect2=ex["rect2"],
                               excess_rect3=ex["rect3"],
                               min_hex=min_max_temperature(unit["hex"], t, min_grid, p).min_temp,
                               min_square=min_max_temperature(unit["square"], t, min_grid, p).min_temp))
    return HexReport(density=float(density), b_tilde=b, rows=rows)


CSV_HEADER = ("y", "a_r", "b_r", "det", "identity_residual")


def write_scan_csv(rows: Iterable[ScanRow], fh) -> None:
    """Write scan rows with 17 significant digits."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow([f"{v:.17g}" for v in (r.y, r.a_r, r.b_r, r.det_val, r.identity_residual)])


def read_scan_csv(fh) -> list[ScanRow]:
    reader = csv.DictReader(fh)
    if tuple(reader.fieldnames or ()) != CSV_HEADER:
        raise ValueError(f"unexpected header {reader.fieldnames!r}")
    return [ScanRow(y=float(r["y"]), a_r=float(r["a_r"]), b_r=float(r["b_r"]), det_val=float(r["det"]),
                    identity_residual=float(r["identity_residual"])) for r in reader]


def report_dict(obj) -> dict:
    return asdict(obj)
