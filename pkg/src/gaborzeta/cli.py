"""Command-line entry point.

Every subcommand prints one JSON object (or CSV table) on standard output;
diagnostics go to standard error.  Exit status is 0 on success, 1 when a
computation fails and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import experiments as ex
from .errors import ComputationError, Unsupported
from .eta_zeta import (dedekind_eta, det_laplacian, kronecker_limit, spectral_zeta, zeta_prime_zero,
                       zeta_xi)
from .gabor import frame_bounds_even_density, frame_bounds_integer_density, janssen_test
from .heat import DEFAULT_GRID, min_max_temperature, temperature_field
from .lattice import Lattice2D, Precision, SeparableLattice
from .theta import evaluate

ENV_EPS = "GLB_EPS"
DEFAULT_EPS = 1e-12
VERIFY_Y_GRID = tuple(np.geomspace(0.25, 4.0, 21))


@dataclass(frozen=True)
class Config:
    eps: float = DEFAULT_EPS
    max_radius: float = 50.0
    max_terms: int = 10 ** 7
    grid_n: int = DEFAULT_GRID
    output_format: str = "json"

    def __post_init__(self):
        if self.grid_n < 16:
            raise ValueError("grid_n must be at least 16")
        if self.output_format not in ("json", "csv"):
            raise ValueError("output_format must be json or csv")
        self.precision  # validates the numeric fields

    @property
    def precision(self) -> Precision:
        return Precision(self.eps, self.max_radius, self.max_terms)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- output -----------------------------------------------------------------

def _num(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    if not math.isfinite(v):
        return "null"
    return "%.17g" % v


def to_json(obj) -> str:
    """Deterministic JSON with every float printed to 17 significant digits."""
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {to_json(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(to_json(v) for v in obj) + "]"
    return _num(obj)


def _csv_cell(v) -> str:
    if isinstance(v, (list, tuple)):
        return " ".join(_csv_cell(x) for x in v)
    if isinstance(v, str):
        return v
    return _num(v)


def to_csv(table) -> str:
    """A dict becomes a header plus one row; a list of dicts becomes one row each."""
    rows = table if isinstance(table, list) else [table]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if rows:
        w.writerow(list(rows[0]))
        for r in rows:
            w.writerow([_csv_cell(v) for v in r.values()])
    return buf.getvalue()


# -- subcommands ---------------------------------------------------------------

def _lattice(spec: str) -> Lattice2D:
    try:
        return Lattice2D.parse(spec)
    except ComputationError:
        raise
    except ValueError as exc:
        raise UsageError(f"bad lattice spec {spec!r}: {exc}") from None


def _separable(l: Lattice2D) -> SeparableLattice:
    if l.m12 != 0.0 or l.m21 != 0.0:
        raise Unsupported("sharp bounds need a separable lattice rect:<alpha>,<beta>")
    return SeparableLattice(abs(l.m11), abs(l.m22))


def cmd_theta(a, cfg):
    value, terms = evaluate(a.kind, a.y, a.method, cfg.precision)
    return {"kind": a.kind, "y": a.y, "method": a.method, "value": value, "terms_used": terms}


def cmd_eta(a, cfg):
    return {"y": a.y, "value": dedekind_eta(a.y, cfg.precision), "error_bound": cfg.eps}


def cmd_det(a, cfg):
    p = cfg.precision
    return {"y": a.y, "value": det_laplacian(a.y, p), "zeta_prime_zero": zeta_prime_zero(a.y, p),
            "error_bound": cfg.eps}


def cmd_zeta(a, cfg):
    p = cfg.precision
    return {"y": a.y, "s": a.s, "value": spectral_zeta(a.y, a.s, p), "xi": zeta_xi(a.y, a.s, p),
            "error_bound": cfg.eps}


def cmd_kronecker(a, cfg):
    e0, de0 = kronecker_limit(complex(a.x, a.y), cfg.precision)
    return {"x": a.x, "y": a.y, "value_at_zero": e0, "derivative_at_zero": de0, "error_bound": cfg.eps}


def cmd_heat(a, cfg):
    l = _lattice(a.lattice)
    grid = a.grid or cfg.grid_n
    rep = min_max_temperature(l, a.t, grid, cfg.precision)
    if a.field:
        u, v, temp = temperature_field(l, a.t, grid, cfg.precision)
        with open(a.field, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(("u", "v", "temp"))
            for row in zip(u.ravel(), v.ravel(), temp.ravel()):
                w.writerow([_num(x) for x in row])
    return {"lattice": a.lattice, "t": rep.t, "max_temp": rep.max_temp, "min_temp": rep.min_temp,
            "argmin": list(rep.argmin), "trace": rep.trace}


def cmd_bounds(a, cfg):
    sl = _separable(_lattice(a.lattice))
    n = round(sl.density)
    if n >= 2 and n % 2 == 0 and abs(sl.density - n) <= 1e-8:
        rep = frame_bounds_even_density(sl, cfg.precision)
        method = "closed_form"
    else:
        rep = frame_bounds_integer_density(sl, a.grid or cfg.grid_n, cfg.precision)
        method = "janssen_grid"
    out = {"lattice": a.lattice, "method": method, "lower_a": rep.lower_A, "upper_b": rep.upper_B,
           "b_tilde": rep.b_tilde, "condition_number": rep.condition_number, "density": rep.density,
           "is_frame": rep.is_frame}
    if rep.argmin is not None:
        out["argmin"] = list(rep.argmin)
        out["argmax"] = list(rep.argmax)
    return out


def cmd_janssen(a, cfg):
    res = janssen_test(_lattice(a.lattice), cfg.precision)
    return {"lattice": a.lattice, **res._asdict()}


def cmd_scan(a, cfg):
    try:
        res = ex.scan_extremum(a.r, a.ymin, a.ymax, a.n, cfg.precision)
    except ComputationError:
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    with open(a.out, "w", newline="") as fh:
        ex.write_scan_csv(res.rows, fh)
    return {"r": a.r, "n": a.n, "out": a.out, "argmax_a": res.argmax_A, "argmin_b": res.argmin_B}


def run_verify(cfg) -> dict:
    p = cfg.precision
    chain = ex.implication_chain(p=p)
    ident = max(ex.identity_check(float(y), p) for y in VERIFY_Y_GRID)
    dt = [ex.density_time_check(n, y, p, cfg.grid_n) for n in (1, 2) for y in (1.0, 2.0)]
    hexr = ex.hexagonal_comparison(p=p)
    out = {
        "chain_passed": chain.passed,
        "chain_min_det_margin": min(r.det_margin for r in chain.rows if r.y != 1.0),
        "chain_min_theta_margin": min(r.theta_margin for r in chain.rows if r.y != 1.0),
        "identity_max_residual": ident,
        "identity_passed": ident < 1e-10,
        "density_time_max_mismatch": max(max(r.rel_mismatch_A, r.rel_mismatch_B) for r in dt),
        "density_time_passed": all(r.passed for r in dt),
        "hex_b_tilde": hexr.b_tilde,
        "hex_passed": hexr.passed,
    }
    out["passed"] = bool(out["chain_passed"] and out["identity_passed"] and out["density_time_passed"]
                         and out["hex_passed"])
    return out


def cmd_verify(a, cfg):
    return run_verify(cfg)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--eps", type=float, default=argparse.SUPPRESS)
    common.add_argument("--format", choices=("json", "csv"), default=argparse.SUPPRESS)
    common.add_argument("--max-radius", type=float, default=argparse.SUPPRESS)
    common.add_argument("--max-terms", type=int, default=argparse.SUPPRESS)

    parser = _Parser(prog="gaborzeta", parents=[common],
                     description="Gaussian Gabor frame bounds and the theta/zeta objects behind them.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=func)
        return sp

    sp = add("theta", cmd_theta, "theta null at tau = iy")
    sp.add_argument("--kind", type=int, choices=(2, 3, 4), required=True)
    sp.add_argument("--y", type=float, required=True)
    sp.add_argument("--method", choices=("series", "product", "transform"), default="series")
    for name, func, help_ in (("eta", cmd_eta, "Dedekind eta at iy"),
                              ("det", cmd_det, "determinant of the torus Laplacian")):
        add(name, func, help_).add_argument("--y", type=float, required=True)
    sp = add("zeta", cmd_zeta, "spectral zeta function of the torus")
    sp.add_argument("--y", type=float, required=True)
    sp.add_argument("--s", type=float, required=True)
    sp = add("kronecker", cmd_kronecker, "E(tau, 0) and its s-derivative")
    sp.add_argument("--y", type=float, required=True)
    sp.add_argument("--x", type=float, default=0.0)
    sp = add("heat", cmd_heat, "heat kernel extremes on a torus")
    sp.add_argument("--lattice", required=True)
    sp.add_argument("--t", type=float, required=True)
    sp.add_argument("--grid", type=int)
    sp.add_argument("--field")
    sp = add("bounds", cmd_bounds, "sharp Gabor frame bounds")
    sp.add_argument("--lattice", required=True)
    sp.add_argument("--grid", type=int)
    add("janssen-test", cmd_janssen, "Tolimieri-Orr bound and Janssen's test").add_argument(
        "--lattice", required=True)
    sp = add("scan", cmd_scan, "tabulate A_r, B_r and the determinant over y")
    sp.add_argument("--r", type=float, required=True)
    sp.add_argument("--ymin", type=float, required=True)
    sp.add_argument("--ymax", type=float, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--out", required=True)
    add("verify", cmd_verify, "run every scripted check")
    return parser


def _config(ns, environ) -> Config:
    eps = DEFAULT_EPS
    if environ.get(ENV_EPS):
        try:
            eps = float(environ[ENV_EPS])
        except ValueError:
            raise UsageError(f"{ENV_EPS} is not a number: {environ[ENV_EPS]!r}") from None
    eps = getattr(ns, "eps", eps)
    try:
        return Config(eps=eps, max_radius=getattr(ns, "max_radius", 50.0),
                      max_terms=getattr(ns, "max_terms", 10 ** 7),
                      output_format=getattr(ns, "format", "json"))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def run(argv, stdout=None, stderr=None, environ=None) -> int:
    """Parse ``argv``, run the subcommand, print the result and return the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    environ = os.environ if environ is None else environ
    try:
        ns = build_parser().parse_args(list(argv))
        cfg = _config(ns, environ)
        result = ns.func(ns, cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=stderr)
        return 2
    except ComputationError as exc:
        print(f"computation error: {type(exc).__name__}: {exc}", file=stderr)
        return 1
    except ValueError as exc:
        print(f"usage error: {exc}", file=stderr)
        return 2
    stdout.write(to_json(result) + "\n" if cfg.output_format == "json" else to_csv(result))
    if ns.command == "verify" and not result["passed"]:
        print("verify: at least one check failed", file=stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
