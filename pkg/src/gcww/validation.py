"""Quick self-checks of the identities the package relies on.

These are light versions of the acceptance checks, sized to run in a few
seconds from the command line.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import bloch, coefficients, diagram, reduced, stokes
from .params import make_params

CRITICAL_DEPTH = 1.3627827


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str


def _sample_points(rng, n):
    """Random regular points: away from the second resonance and from D = 0."""
    pts = []
    while len(pts) < n:
        k, h = rng.uniform(0.0, 5.0), rng.uniform(0.05, 5.0)
        if abs(coefficients.raw_den_r2(k, h)) > 1e-2 and abs(coefficients.raw_D(k, h)) > 1e-2:
            pts.append((k, h))
    return pts


def check_critical_depth() -> Check:
    h = diagram.critical_depth(0.0)
    return Check("critical depth", bool(abs(h - CRITICAL_DEPTH) < 1e-5), f"h={h:.10f}")


def check_composites(rng, n=500) -> Check:
    worst = 0.0
    for k, h in _sample_points(rng, n):
        a, b = coefficients.raw_e_wb(k, h), coefficients.raw_e_wb_composite(k, h)
        c, d = coefficients.raw_e22(k, h), coefficients.raw_e22_composite(k, h)
        worst = max(worst, abs(a - b) / max(1.0, abs(a)), abs(c - d) / max(1.0, abs(c)))
    return Check("composite routes", bool(worst < 1e-11), f"max rel diff {worst:.3e}")


def check_stokes(rng, n=20) -> Check:
    worst = 0.0
    for k, h in _sample_points(rng, n):
        p = make_params(k, h)
        diff = stokes.relative_difference(stokes.build_expansion(p), stokes.closed_form_expansion(p))
        worst = max(worst, max(diff.values()))
    return Check("stokes double derivation", bool(worst < 1e-11), f"max rel diff {worst:.3e}")


def check_sylvester(rng, n=2000) -> Check:
    worst_det, worst_inv = 0.0, 0.0
    for _ in range(n):
        a, b, c, d, e = rng.uniform(-1, 1, 5)
        det_direct = np.linalg.det(reduced.sylvester_matrix(a, b, c, d, e))
        det_closed = reduced.sylvester_det(a, b, c, d, e)
        worst_det = max(worst_det, abs(det_direct - det_closed) / max(1.0, abs(det_closed)))
        if abs(det_closed) > 1e-8:
            s = reduced.sylvester_system(a, b, c, d, e)
            scale = max(1.0, np.linalg.cond(s.A))
            worst_inv = max(worst_inv, np.abs(s.A @ s.inv - np.eye(4)).max() / scale)
    ok = bool(worst_det < 1e-12 and worst_inv < 1e-12)
    return Check("sylvester det/inverse", ok, f"det {worst_det:.3e}, inverse/cond {worst_inv:.3e}")


def check_flat_spectrum() -> Check:
    p = make_params(0.1, 1.5)
    mu, n = 0.1, 16
    res = bloch.eigen_near_origin(bloch.build_operator(p, 0.0, mu, n))
    exact = bloch.flat_spectrum(mu, p, n)
    err_all = np.abs(res.all_eigenvalues[:, None] - exact[None, :]).min(axis=1).max()
    refs = bloch.flat_references(mu, p)
    err_near = max(min(abs(z - r) for z in res.near_zero) for r in refs)
    ok = bool(err_all < 1e-10 and err_near < 1e-10)
    return Check("flat-water spectrum", ok, f"all {err_all:.3e}, near-zero {err_near:.3e}")


def check_taylor() -> Check:
    p = make_params(0.1, 2.0)
    errs = []
    for mu in (1e-2, 1e-3):
        approx = sorted(reduced.reduced_eigenvalues(p, mu, 0.0)[:2], key=lambda z: z.imag)
        exact = sorted(reduced.exact_flat_lambda1(p, mu), key=lambda z: z.imag)
        errs.append(max(abs(a - b) for a, b in zip(approx, exact)))
    ratio = errs[0] / errs[1]
    return Check("taylor order mu^3", bool(abs(ratio / 1e3 - 1.0) < 0.2), f"ratio {ratio:.1f}")


def run_all(seed: int = 0) -> list:
    rng = np.random.default_rng(seed)
    return [
        check_critical_depth(),
        check_composites(rng),
        check_stokes(rng),
        check_sylvester(rng),
        check_flat_spectrum(),
        check_taylor(),
    ]
