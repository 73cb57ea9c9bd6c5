"""Acceptance suite: one check per criterion, each printing a PASS/FAIL line.

Run with ``pytest -v tests/test_acceptance.py`` or directly as a script.
"""

import math
import time

import numpy as np
import pytest

from gaborzeta import experiments as ex
from gaborzeta.eta_zeta import dedekind_eta, zeta_prime_zero, zeta_prime_zero_numeric, zeta_xi
from gaborzeta.gabor import frame_bounds_even_density, frame_bounds_integer_density, janssen_test
from gaborzeta.heat import heat_kernel_direct, heat_kernel_fourier
from gaborzeta.lattice import Lattice2D, SeparableLattice
from gaborzeta.theta import theta_null, theta_null_product, theta_series, theta_transformed

Y_GRID = np.geomspace(0.1, 10.0, 50)
THETA4_I_SQ = 0.83462684167407319  # theta_4(i)^2, mpmath


def report(cid, ok, detail, capsys=None):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {cid:>2}: {detail}"
    if capsys is not None:
        with capsys.disabled():
            print("\n" + line)
    else:
        print(line)
    assert ok, line


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def c1():
    def run():
        return max(abs(theta_series(k, float(y))[0] - theta_transformed(k, float(y)))
                   for y in Y_GRID for k in (2, 3, 4))
    res, dt = timed(run)
    return res < 1e-12 and dt < 1.0, f"max transform residual {res:.3g} (< 1e-12), {dt:.3f}s (< 1s)"


def c2():
    def run():
        return max(abs(theta_null(k, float(y)) - theta_null_product(k, float(y)))
                   for y in Y_GRID for k in (2, 3, 4))
    res, dt = timed(run)
    return res < 1e-12 and dt < 1.0, f"max series/product gap {res:.3g} (< 1e-12), {dt:.3f}s (< 1s)"


def c3():
    res = max(abs(2 * dedekind_eta(y) ** 3 - theta_null(2, y) * theta_null(3, y) * theta_null(4, y))
              for y in (0.3, 0.5, 1.0, 2.0, 5.0))
    return res < 1e-12, f"max |2 eta^3 - theta2 theta3 theta4| {res:.3g} (< 1e-12)"


def c4():
    def run():
        sl = SeparableLattice(1 / math.sqrt(2), 1 / math.sqrt(2))
        return frame_bounds_even_density(sl), frame_bounds_integer_density(sl)
    (closed, grid), dt = timed(run)
    gap = max(abs(closed.lower_A - grid.lower_A), abs(closed.upper_B - grid.upper_B))
    ok = (abs(closed.lower_A - 1.6692537) <= 1e-6 and abs(closed.upper_B - 2.3606810) <= 1e-6
          and gap < 1e-8 and dt < 2.0)
    return ok, (f"A={closed.lower_A:.10f} B={closed.upper_B:.10f} (+-1e-6), grid gap {gap:.3g} (< 1e-8), "
                f"{dt:.3f}s (< 2s)")


def c5():
    res, dt = timed(lambda: max(ex.identity_check(float(y)) for y in np.geomspace(0.25, 4.0, 21)))
    return res < 1e-10 and dt < 2.0, f"max relative residual {res:.3g} (< 1e-10), {dt:.3f}s (< 2s)"


def c6():
    def run():
        return [ex.scan_extremum(r, 0.25, 4.0, 51) for r in (0.5, 1.0, 2.0)]
    scans, dt = timed(run)
    dev = max(max(abs(s.argmax_A - 1), abs(s.argmin_B - 1)) for s in scans)
    return dev < 1e-6 and dt < 5.0, f"max |argext - 1| {dev:.3g} (< 1e-6), {dt:.3f}s (< 5s)"


def c7():
    def run():
        return max(abs(zeta_xi(y, s) - zeta_xi(y, 1 - s)) for s in (0.2, 0.3, 0.4, 0.6) for y in (0.5, 1.0, 2.0))
    res, dt = timed(run)
    return res < 1e-8 and dt < 10.0, f"max |xi(s) - xi(1-s)| {res:.3g} (< 1e-8), {dt:.3f}s (< 10s)"


def c8():
    res, dt = timed(lambda: max(abs(zeta_prime_zero(y) - zeta_prime_zero_numeric(y)) for y in (1.0, 2.0)))
    return res < 1e-5 and dt < 10.0, f"max |Z'(0) closed - numeric| {res:.3g} (< 1e-5), {dt:.3f}s (< 10s)"


def c9():
    rng = np.random.default_rng(20240601)
    lattices = {"square": Lattice2D.square(1.0), "rect_y2": SeparableLattice.from_aspect(2.0, 1.0).as_lattice2d(),
                "hex": Lattice2D.hexagonal(1.0)}

    def run():
        worst = 0.0
        for l in lattices.values():
            for _ in range(20):
                z = rng.uniform(-2.0, 2.0, size=2)
                t = float(np.exp(rng.uniform(math.log(0.01), math.log(1.0))))
                worst = max(worst, abs(heat_kernel_direct(l, z, t) - heat_kernel_fourier(l, z, t)))
        return worst
    res, dt = timed(run)
    return res < 1e-10 and dt < 2.0, f"max |direct - Fourier| {res:.3g} (< 1e-10), {dt:.3f}s (< 2s)"


def c10():
    rep, dt = timed(ex.implication_chain)
    return rep.passed and dt < 5.0, (f"all stages hold={rep.all_pass}, strict off y=1={rep.strict_away_from_one}, "
                                     f"{dt:.3f}s (< 5s)")


def c11():
    rep = ex.hexagonal_comparison(2.0)
    h, s = rep.b_tilde["hex"], rep.b_tilde["square"]
    hex_below = all(r.excess_hex < r.excess_square for r in rep.rows)
    ok = abs(h - 1.1595) <= 1e-3 and abs(s - 1.18034) <= 1e-5 and h < s and hex_below
    return ok, f"hex {h:.7f} < square {s:.7f}; hex smaller at all {len(rep.rows)} times: {hex_below}"


def c12():
    r1, r2 = janssen_test(Lattice2D.square(1.0)), janssen_test(Lattice2D.square(2.0))
    ok = (abs(r1.b_tilde - 2.0150) <= 1e-4 and r1.b_tilde > 2 and not r1.certified_frame
          and r2.b_tilde < 2 and r2.certified_frame and r2.a_lower_est <= THETA4_I_SQ)
    return ok, (f"density 1: B~={r1.b_tilde:.6f} certified={r1.certified_frame}; density 2: B~={r2.b_tilde:.6f} "
                f"a_lower_est={r2.a_lower_est:.6f} <= {THETA4_I_SQ:.6f}")


def c13():
    reps = [ex.density_time_check(n, y) for n in (1, 2) for y in (0.5, 1.0, 2.0)]
    worst = max(max(r.rel_mismatch_A, r.rel_mismatch_B) for r in reps)
    return worst < 1e-8, f"max relative mismatch {worst:.3g} (< 1e-8) at densities 2 and 4"


CRITERIA = [c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11, c12, c13]


@pytest.mark.parametrize("idx", range(1, len(CRITERIA) + 1))
def test_criterion(idx, capsys):
    ok, detail = CRITERIA[idx - 1]()
    report(idx, ok, detail, capsys)


if __name__ == "__main__":
    failed = 0
    for i, c in enumerate(CRITERIA, 1):
        ok, detail = c()
        print(f"[{'PASS' if ok else 'FAIL'}] criterion {i:>2}: {detail}")
        failed += not ok
    raise SystemExit(1 if failed else 0)
