"""Stability diagram in the ``(kappa, depth)`` plane.

A point is unstable when ``e22 * e_wb > 0`` and stable when the product is
negative.  Points too close to a resonance curve or to the degeneracy
curve ``D = 0`` get a third verdict, *excluded*, because ``e_wb`` has a
pole there.  Zero curves are traced by bisection along scanlines.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.optimize

from .coefficients import raw_c_hat, raw_D, raw_den_r2, raw_e_wb, raw_e22
from .errors import RootNotBracketedError
from .serialize import fmt_float
from .params import (
    DEFAULT_N_MAX,
    DEFAULT_TOL_D,
    DEFAULT_TOL_RES,
    DEFAULT_TOL_ZERO,
    PhysicalParams,
    SingularityFlags,
    classify_singularity,
    near_resonance_mask,
    resonance_kappa,
)

UNSTABLE, STABLE, EXCLUDED = "unstable", "stable", "excluded"
_CODES = {UNSTABLE: "U", STABLE: "S", EXCLUDED: "X"}


@dataclass(frozen=True)
class StabilityVerdict:
    region: str
    flags: SingularityFlags
    e22_ewb: float
    c_hat_sign: int

    @property
    def code(self) -> str:
        return _CODES[self.region]


def _region(product, excluded):
    if excluded:
        return EXCLUDED
    return UNSTABLE if product > 0 else STABLE


def classify_point(
    params: PhysicalParams,
    tol_res: float = DEFAULT_TOL_RES,
    tol_D: float = DEFAULT_TOL_D,
    tol_zero: float = DEFAULT_TOL_ZERO,
    n_max: int = DEFAULT_N_MAX,
) -> StabilityVerdict:
    """Classify one point; exclusions are reported as a verdict, never raised."""
    flags = classify_singularity(params, tol_res, tol_D, tol_zero, n_max)
    with np.errstate(divide="ignore", invalid="ignore"):
        product = float(raw_e22(params.kappa, params.depth) * raw_e_wb(params.kappa, params.depth))
    c_hat = raw_c_hat(params.kappa, params.depth)
    return StabilityVerdict(
        region=_region(product, flags.excluded),
        flags=flags,
        e22_ewb=product,
        c_hat_sign=int(np.sign(c_hat)),
    )


CSV_HEADER = "kappa,depth,verdict,e_wb,e22,D,c_hat,den_r2,flags"


fmt = fmt_float


@dataclass(frozen=True)
class DiagramGrid:
    """Verdict codes and coefficient values on a tensor grid.

    Arrays have shape ``(len(depth_axis), len(kappa_axis))``; ``verdicts``
    holds the one-letter codes ``U``, ``S`` and ``X`` and ``flags`` the
    semicolon-joined singularity tokens of each cell.
    """

    kappa_axis: np.ndarray
    depth_axis: np.ndarray
    verdicts: np.ndarray
    e_wb: np.ndarray
    e22: np.ndarray
    D: np.ndarray
    c_hat: np.ndarray
    den_r2: np.ndarray
    flags: np.ndarray

    def write_csv(self, stream) -> None:
        stream.write(CSV_HEADER + "\n")
        for i, h in enumerate(self.depth_axis):
            for j, k in enumerate(self.kappa_axis):
                stream.write(
                    ",".join(
                        [
                            fmt(k), fmt(h), self.verdicts[i, j],
                            fmt(self.e_wb[i, j]), fmt(self.e22[i, j]), fmt(self.D[i, j]),
                            fmt(self.c_hat[i, j]), fmt(self.den_r2[i, j]), self.flags[i, j],
                        ]
                    )
                    + "\n"
                )

    def to_csv(self) -> str:
        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()


def scan_grid(
    kappa_range,
    depth_range,
    nk: int,
    nh: int,
    tol_res: float = DEFAULT_TOL_RES,
    tol_D: float = DEFAULT_TOL_D,
    tol_zero: float = DEFAULT_TOL_ZERO,
    n_max: int = DEFAULT_N_MAX,
) -> DiagramGrid:
    """Evaluate the diagram on ``nk x nh`` equispaced points (vectorised, row-major with depth outer)."""
    k0, k1 = map(float, kappa_range)
    h0, h1 = map(float, depth_range)
    if nk < 2 or nh < 2:
        raise ValueError("nk and nh must be >= 2")
    if not (k1 > k0 >= 0.0 and h1 > h0 > 0.0):
        raise ValueError("ranges must have positive length, kappa >= 0 and depth > 0")
    kappa_axis = np.linspace(k0, k1, nk)
    depth_axis = np.linspace(h0, h1, nh)
    K, H = np.meshgrid(kappa_axis, depth_axis)
    with np.errstate(divide="ignore", invalid="ignore"):
        e_wb = raw_e_wb(K, H)
        e22 = raw_e22(K, H)
        D = raw_D(K, H)
        c_hat = raw_c_hat(K, H)
        den = raw_den_r2(K, H)
    res = near_resonance_mask(K, H, tol_res, n_max)
    res[0] |= np.abs(den) < tol_zero
    near_D = np.abs(D) < tol_D
    near_e22 = np.abs(e22) < tol_zero
    near_ch = np.abs(c_hat) < tol_zero
    excluded = res.any(axis=0) | near_D
    with np.errstate(invalid="ignore"):
        product = e22 * e_wb
    verdicts = np.where(excluded, "X", np.where(product > 0, "U", "S"))

    flags = np.full(K.shape, "", dtype=object)
    any_flag = excluded | near_e22 | near_ch
    for i, j in zip(*np.nonzero(any_flag)):
        tokens = [f"R{n + 2}" for n in np.nonzero(res[:, i, j])[0]]
        if near_D[i, j]:
            tokens.append("D0")
        if near_e22[i, j]:
            tokens.append("E22")
        if near_ch[i, j]:
            tokens.append("CH")
        flags[i, j] = ";".join(tokens)
    return DiagramGrid(
        kappa_axis=kappa_axis, depth_axis=depth_axis, verdicts=verdicts,
        e_wb=e_wb, e22=e22, D=D, c_hat=c_hat, den_r2=den, flags=flags,
    )


# Curve tracing --------------------------------------------------------------


def curve_function(which: str) -> Callable:
    """Vectorised ``f(kappa, depth)`` whose zero set is the requested curve.

    ``which`` is one of ``ewb``, ``e22``, ``D``, ``chat``, ``r2`` or ``rn``
    followed by the order, e.g. ``r5``.
    """
    table = {"ewb": raw_e_wb, "e22": raw_e22, "D": raw_D, "chat": raw_c_hat, "r2": raw_den_r2}
    if which in table:
        return table[which]
    if which.startswith("r") and which[1:].isdigit():
        n = int(which[1:])
        if n < 2:
            raise ValueError("resonance order must be >= 2")
        return lambda kappa, depth: np.asarray(kappa, dtype=float) - resonance_kappa(n, depth)
    raise ValueError(f"unknown curve {which!r}")


def _roots_on_line(f1d: Callable, lo: float, hi: float, n_scan: int, tol: float, accept: float) -> list:
    xs = np.linspace(lo, hi, n_scan)
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = np.asarray(f1d(xs), dtype=float)
    roots = []
    for i in np.nonzero(np.isfinite(vals[:-1]) & np.isfinite(vals[1:]) & (np.sign(vals[:-1]) * np.sign(vals[1:]) < 0))[0]:
        r = scipy.optimize.bisect(lambda x: float(f1d(np.array(x))), xs[i], xs[i + 1], xtol=tol, rtol=4 * np.finfo(float).eps)
        fr_ = abs(float(f1d(np.array(r))))
        # A sign change across a pole also brackets; keep only genuine zeros.
        # Steep zeros next to a pole are kept because |f| still falls far
        # below the bracket values, while at a pole it grows past them.
        if fr_ <= max(accept, 1e-3 * min(abs(vals[i]), abs(vals[i + 1]))):
            roots.append(r)
    return roots


def trace_curve(
    which: str,
    sweep_axis: str,
    sweep_range,
    scan_range,
    n_samples: int = 200,
    tol: float = 1e-10,
    n_scan: int = 2000,
    accept: float = 1e-6,
) -> np.ndarray:
    """Zero set of ``which`` as ``(kappa, depth)`` pairs.

    For every value of ``sweep_axis`` in ``sweep_range`` the other variable
    is scanned over ``scan_range`` and each sign change is refined by
    bisection to a bracket below ``tol``.  Sign changes across poles are
    dropped: the refined point must satisfy ``|f| <= accept`` or fall a
    thousandfold below both bracketing scan values.
    """
    if sweep_axis not in ("kappa", "depth"):
        raise ValueError("sweep_axis must be 'kappa' or 'depth'")
    f = curve_function(which)
    pts = []
    for s in np.linspace(float(sweep_range[0]), float(sweep_range[1]), n_samples):
        if sweep_axis == "kappa":
            g = lambda h, s=s: f(s, h)  # noqa: E731
        else:
            g = lambda k, s=s: f(k, s)  # noqa: E731
        for r in _roots_on_line(g, float(scan_range[0]), float(scan_range[1]), n_scan, tol, accept):
            pts.append((s, r) if sweep_axis == "kappa" else (r, s))
    return np.array(pts, dtype=float).reshape(-1, 2)


ASYMPTOTE_OFFSETS = {"curve4": 0.75, "curve5": 8.75}
_ASYMPTOTE_FUNCS = {"curve4": raw_D, "curve5": raw_e_wb}


def asymptote_offset(which: str, kappa: float, window: float = 3.0) -> float:
    """``h_root(kappa) - (9/4 kappa - offset)`` for the large-capillarity asymptotes.

    Curve 4 is ``D = 0`` with offset ``3/4`` and curve 5 the second branch
    of ``e_wb = 0`` with offset ``35/4``.  The root is searched within
    ``window`` of the asymptotic line.
    """
    if which not in ASYMPTOTE_OFFSETS:
        raise ValueError(f"unknown asymptote {which!r}")
    line = 2.25 * kappa - ASYMPTOTE_OFFSETS[which]
    lo, hi = max(line - window, 1e-3), line + window
    f = _ASYMPTOTE_FUNCS[which]
    roots = _roots_on_line(lambda h: f(kappa, h), lo, hi, 4001, 1e-12, 1e-6)
    if not roots:
        raise RootNotBracketedError(
            "no root near the asymptotic line", which=which, kappa=kappa, lo=lo, hi=hi,
        )
    root = min(roots, key=lambda r: abs(r - line))
    return float(root - line)


def critical_depth(kappa: float = 0.0, bracket=(1.0, 2.0)) -> float:
    """Depth at which ``e_wb(kappa, .)`` changes sign inside ``bracket`` (bisection to 1e-12)."""
    f = lambda h: float(raw_e_wb(kappa, h))  # noqa: E731
    a, b = bracket
    if f(a) * f(b) > 0:
        raise RootNotBracketedError("e_wb does not change sign on the bracket", kappa=kappa, bracket=list(bracket))
    return float(scipy.optimize.bisect(f, a, b, xtol=1e-12))
