"""Command-line front end.

Exit status is 0 on success, 1 on usage errors and 2 on computational
errors (singular point, stable point, eigensolver failure).  Computational
errors are reported as a JSON object on stderr.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from typing import Optional, Sequence

import numpy as np

from . import bloch, coefficients, diagram, reduced, stokes, validation
from .errors import GcwwError
from .params import (
    DEFAULT_N_MAX,
    DEFAULT_TOL_D,
    DEFAULT_TOL_RES,
    DEFAULT_TOL_ZERO,
    make_params,
)
from .serialize import csv_lines, fmt_float, to_json

REDUCED_HEADER = ["mu", "re_l1p", "im_l1p", "re_l1m", "im_l1m", "re_l0p", "im_l0p", "re_l0m", "im_l0m"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit with status 2
        raise UsageError(f"{self.prog}: {message}")


def _nonneg(name):
    def conv(text):
        v = _finite(name)(text)
        if v < 0:
            raise argparse.ArgumentTypeError(f"{name} must be >= 0, got {text}")
        return v

    return conv


def _positive(name):
    def conv(text):
        v = _finite(name)(text)
        if v <= 0:
            raise argparse.ArgumentTypeError(f"{name} must be > 0, got {text}")
        return v

    return conv


def _finite(name):
    def conv(text):
        try:
            v = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} expects a number, got {text!r}") from None
        if not math.isfinite(v):
            raise argparse.ArgumentTypeError(f"{name} must be finite, got {text}")
        return v

    return conv


def _int_at_least(name, low):
    def conv(text):
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} expects an integer, got {text!r}") from None
        if v < low:
            raise argparse.ArgumentTypeError(f"{name} must be >= {low}, got {text}")
        return v

    return conv


def _add_point(p, eps=False, eps_required=True, mu=False):
    p.add_argument("--kappa", type=_nonneg("--kappa"), required=True, help="surface tension coefficient (>= 0)")
    p.add_argument("--depth", type=_positive("--depth"), required=True, help="fluid depth (> 0)")
    if eps:
        p.add_argument("--eps", type=_nonneg("--eps"), required=eps_required, default=None, help="wave amplitude")
    if mu:
        p.add_argument("--mu", type=_positive("--mu"), required=True, help="Floquet exponent (> 0)")


def _add_tols(p):
    p.add_argument("--tol-res", type=_positive("--tol-res"), default=DEFAULT_TOL_RES)
    p.add_argument("--tol-d", type=_positive("--tol-d"), default=DEFAULT_TOL_D)
    p.add_argument("--tol-zero", type=_positive("--tol-zero"), default=DEFAULT_TOL_ZERO)
    p.add_argument("--n-max", type=_int_at_least("--n-max", 2), default=DEFAULT_N_MAX)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gcww", description="Benjamin-Feir stability of gravity-capillary Stokes waves")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("-o", "--output", default=None, help="write output to this file instead of stdout")
        return p

    p = add("coeffs", "closed-form stability coefficients at one point (JSON)")
    _add_point(p)
    p.add_argument("--tol-zero", type=_positive("--tol-zero"), default=DEFAULT_TOL_ZERO)

    p = add("classify", "stability verdict at one point")
    _add_point(p)
    _add_tols(p)

    p = add("diagram", "verdict grid (CSV)")
    p.add_argument("--kappa-range", nargs=2, type=_nonneg("--kappa-range"), default=[0.0, 2.0])
    p.add_argument("--depth-range", nargs=2, type=_positive("--depth-range"), default=[0.1, 4.0])
    p.add_argument("--nk", type=_int_at_least("--nk", 2), default=400)
    p.add_argument("--nh", type=_int_at_least("--nh", 2), default=400)
    _add_tols(p)

    p = add("curve", "zero curve polyline (CSV of kappa,depth)")
    p.add_argument("--which", required=True, help="ewb, e22, D, chat, r2 or r<n>")
    p.add_argument("--sweep-axis", choices=["kappa", "depth"], default="depth")
    p.add_argument("--sweep-range", nargs=2, type=_finite("--sweep-range"), default=[0.1, 4.0])
    p.add_argument("--scan-range", nargs=2, type=_finite("--scan-range"), default=[0.0, 2.0])
    p.add_argument("--samples", type=_int_at_least("--samples", 2), default=200)
    p.add_argument("--tol", type=_positive("--tol"), default=1e-10)

    p = add("figure8", "leading-order figure-8 locus (CSV)")
    _add_point(p, eps=True)
    p.add_argument("--points", type=_int_at_least("--points", 2), default=201)

    p = add("reduced", "leading-order eigenvalues over a mu grid (CSV)")
    _add_point(p, eps=True)
    p.add_argument("--mu-max", type=_positive("--mu-max"), default=None, help="defaults to 1.5 times the critical mu, or 10 eps")
    p.add_argument("--n-mu", type=_int_at_least("--n-mu", 1), default=50)

    p = add("spectrum", "eigenvalues of the truncated Bloch operator near the origin (JSON)")
    _add_point(p, eps=True, mu=True)
    p.add_argument("--modes", type=_int_at_least("--modes", 4), default=bloch.DEFAULT_N_MODES)
    p.add_argument("--selection", choices=["flat", "nearest"], default="flat")
    p.add_argument("--coefficients", choices=list(bloch.COEFFICIENT_SOURCES), default="series")

    p = add("scan", "spectral growth over a mu grid (CSV)")
    _add_point(p, eps=True)
    p.add_argument("--mu-min", type=_positive("--mu-min"), default=None)
    p.add_argument("--mu-max", type=_positive("--mu-max"), default=None)
    p.add_argument("--n-mu", type=_int_at_least("--n-mu", 1), default=40)
    p.add_argument("--modes", type=_int_at_least("--modes", 4), default=bloch.DEFAULT_N_MODES)
    p.add_argument("--coefficients", choices=list(bloch.COEFFICIENT_SOURCES), default="series")

    p = add("stokes", "Stokes expansion (JSON) or its residual table (CSV)")
    _add_point(p)
    p.add_argument("--route", choices=["closed", "build"], default="closed")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--modes", type=_int_at_least("--modes", 16), default=32)

    add("validate", "run the built-in identity checks")
    return parser


def _threads() -> int:
    raw = os.environ.get("GCWW_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"GCWW_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise UsageError("GCWW_THREADS must be >= 0")
    return n if n > 0 else (os.cpu_count() or 1)


def _check_eps(args):
    if args.eps is not None and args.eps > 0.1:
        raise UsageError(f"--eps must be <= 0.1, got {args.eps}")


# Commands ------------------------------------------------------------------


def cmd_coeffs(args) -> str:
    p = make_params(args.kappa, args.depth)
    cs = coefficients.coefficient_set(p, args.tol_zero)
    kc = coefficients.kato_constants(p, args.tol_zero)
    return to_json(
        {
            "params": p.as_dict(),
            "coefficients": cs.as_dict(),
            "composite": {
                "e_wb": coefficients.e_wb_composite(p, args.tol_zero),
                "e22": coefficients.e22_composite(p),
            },
            "kato": kc.as_dict(),
        }
    ) + "\n"


def cmd_classify(args) -> str:
    p = make_params(args.kappa, args.depth)
    v = diagram.classify_point(p, args.tol_res, args.tol_d, args.tol_zero, args.n_max)
    tokens = ";".join(v.flags.tokens())
    return (
        f"verdict={v.region} kappa={fmt_float(p.kappa)} depth={fmt_float(p.depth)} "
        f"e22_ewb={fmt_float(v.e22_ewb)} c_hat_sign={v.c_hat_sign} "
        f"bond={'true' if v.flags.bond_satisfied else 'false'} flags={tokens}\n"
    )


def cmd_diagram(args) -> str:
    g = diagram.scan_grid(args.kappa_range, args.depth_range, args.nk, args.nh, args.tol_res, args.tol_d, args.tol_zero, args.n_max)
    return g.to_csv()


def cmd_curve(args) -> str:
    try:
        diagram.curve_function(args.which)
    except ValueError as exc:
        raise UsageError(f"--which: {exc}") from None
    pts = diagram.trace_curve(args.which, args.sweep_axis, args.sweep_range, args.scan_range, args.samples, args.tol)
    return csv_lines(["kappa", "depth"], [(float(a), float(b)) for a, b in pts])


def cmd_figure8(args) -> str:
    _check_eps(args)
    p = make_params(args.kappa, args.depth)
    loc = reduced.figure8_locus(p, args.eps, args.points)
    n = args.points
    mus = np.linspace(0.0, loc.mu_crit, n)
    mu_col = list(mus) + list(mus[::-1])
    rows = [(float(m), re, im) for m, (re, im) in zip(mu_col, loc.points)]
    return csv_lines(["mu", "re", "im"], rows)


def cmd_reduced(args) -> str:
    _check_eps(args)
    p = make_params(args.kappa, args.depth)
    mu_max = args.mu_max
    if mu_max is None:
        mc = reduced.critical_mu(p, args.eps)
        mu_max = 1.5 * mc if mc else 10.0 * max(args.eps, 1e-3)
    rows = []
    for mu in np.linspace(mu_max / args.n_mu, mu_max, args.n_mu):
        lam = reduced.reduced_eigenvalues(p, float(mu), args.eps)
        row = [float(mu)]
        for z in lam:
            row += [z.real, z.imag]
        rows.append(row)
    return csv_lines(REDUCED_HEADER, rows)


def cmd_spectrum(args) -> str:
    _check_eps(args)
    p = make_params(args.kappa, args.depth)
    res = bloch.eigen_near_origin(bloch.build_operator(p, args.eps, args.mu, args.modes, coefficients=args.coefficients), selection=args.selection)
    return to_json(
        {
            "params": p.as_dict(),
            "eps": args.eps,
            "mu": args.mu,
            "n_modes": args.modes,
            "coefficients": args.coefficients,
            "near_zero": [[z.real, z.imag] for z in res.near_zero],
            "max_growth": res.max_growth,
            "ambiguous": res.ambiguous,
        }
    ) + "\n"


def cmd_scan(args) -> str:
    _check_eps(args)
    p = make_params(args.kappa, args.depth)
    mu_max = args.mu_max if args.mu_max is not None else 10.0 * max(args.eps, 1e-3)
    mu_min = args.mu_min if args.mu_min is not None else mu_max / args.n_mu
    if mu_min > mu_max:
        raise UsageError("--mu-min must not exceed --mu-max")
    grid = np.linspace(mu_min, mu_max, args.n_mu)
    rows_out = bloch.growth_scan(p, args.eps, grid, args.modes, workers=_threads(), coefficients=args.coefficients)
    header = ["mu", "max_growth"] + [f"{part}_{i}" for i in range(1, 5) for part in ("re", "im")] + ["ambiguous", "error"]
    rows = []
    for r in rows_out:
        vals = [r.mu, r.max_growth]
        near = r.near_zero if r.near_zero else [complex(math.nan, math.nan)] * 4
        for z in near:
            vals += [z.real, z.imag]
        vals += ["true" if r.ambiguous else "false", (r.error or "").replace(",", ";")]
        rows.append(vals)
    return csv_lines(header, rows)


def cmd_stokes(args) -> str:
    p = make_params(args.kappa, args.depth)
    exp = stokes.build_expansion(p) if args.route == "build" else stokes.closed_form_expansion(p)
    if args.format == "csv":
        rows = []
        for eps in (1e-3, 2e-3, 5e-3, 1e-2):
            rd, rk = stokes.traveling_residual(exp, eps, args.modes)
            rows.append((eps, rd, rk))
        return csv_lines(["eps", "res_dyn", "res_kin"], rows)
    data = {"params": p.as_dict(), "route": args.route, "c1": exp.c1, "psi1_1": exp.psi1_1}
    data.update(exp.scalars())
    return to_json(data) + "\n"


def cmd_validate(args) -> str:
    checks = validation.run_all()
    lines = [f"{'PASS' if c.passed else 'FAIL'} {c.name}: {c.detail}" for c in checks]
    args._failed = not all(c.passed for c in checks)
    return "\n".join(lines) + "\n"


COMMANDS = {
    "coeffs": cmd_coeffs,
    "classify": cmd_classify,
    "diagram": cmd_diagram,
    "curve": cmd_curve,
    "figure8": cmd_figure8,
    "reduced": cmd_reduced,
    "spectrum": cmd_spectrum,
    "scan": cmd_scan,
    "stokes": cmd_stokes,
    "validate": cmd_validate,
}


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    return build_parser().parse_args(argv)


def run(args: argparse.Namespace) -> int:
    args._failed = False
    text = COMMANDS[args.command](args)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 1 if args._failed else 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = parse_args(argv)
        return run(args)
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return 1
    except GcwwError as exc:
        sys.stderr.write(to_json(exc.to_dict()) + "\n")
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
