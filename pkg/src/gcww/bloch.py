"""Fourier truncation of the Bloch-Floquet linearisation at a Stokes wave.

Unknowns are ordered as the ``eta`` modes ``k = -N..N`` followed by the
``psi`` modes in the same order.  Multiplication by a periodic function
becomes a Toeplitz matrix (:func:`multiplication_block`); Fourier
multipliers become diagonal matrices.  By default the coefficient
functions are the ``eps^2``-truncated closed forms of :mod:`gcww.stokes`,
so eigenvalues near the origin carry an ``O(eps^3)`` absolute error
budget.  Passing ``coefficients="exact"`` uses the Newton-solved wave of
:mod:`gcww.exact_wave` instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import scipy.linalg
import scipy.optimize

from . import fourier as fr
from .errors import EigensolverError, RootNotBracketedError
from .params import PhysicalParams, tanh_clamped
from .exact_wave import ExactStokesWave, solve_stokes_wave
from .stokes import StokesExpansion, closed_form_expansion

DEFAULT_N_MODES = 64


@dataclass(frozen=True)
class BlochMatrix:
    """Dense matrix of the truncated operator, with the data needed to rebuild it."""

    n_modes: int
    mu: float
    eps: float
    entries: np.ndarray
    params: Optional[PhysicalParams] = None

    @property
    def size(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class SpectrumResult:
    all_eigenvalues: np.ndarray
    near_zero: list
    max_growth: float
    # Set when the fourth and fifth closest eigenvalues are within 10% in
    # modulus, so the nearest-four selection may have picked the wrong set.
    ambiguous: bool = False


def multiplication_block(f: fr.FourierField, n_modes: int) -> np.ndarray:
    """Toeplitz matrix ``M[k, j] = f_{k-j}`` on modes ``-N..N``."""
    k = np.arange(-n_modes, n_modes + 1)
    diff = k[:, None] - k[None, :]
    table = {kk: v for kk, v in f.items()}
    out = np.zeros(diff.shape, dtype=complex)
    for kk, v in table.items():
        out[diff == kk] = v
    return out


def _field_from_samples(samples: np.ndarray, n_keep: int) -> fr.FourierField:
    """Keep modes ``|k| <= n_keep`` of real grid samples."""
    m = samples.shape[-1]
    coeffs = np.fft.fft(samples) / m
    data = {k: complex(coeffs[k % m]) for k in range(0, n_keep + 1)}
    return fr.FourierField(data, n_modes=n_keep)


def _trig_field(mean: float, c1: float, c2: float) -> fr.FourierField:
    return fr.FourierField.from_trig(cos={1: c1, 2: c2}, mean=mean, n_modes=2)


@dataclass(frozen=True)
class _Coefficients:
    cp: fr.FourierField  # c_hk + p
    p: fr.FourierField
    one_a: fr.FourierField  # 1 + a
    g: fr.FourierField
    r: fr.FourierField  # 1 / (1 + frakp_x)
    f: float


def _wave_fields(wave: ExactStokesWave, n_modes: int) -> _Coefficients:
    keep = min(2 * n_modes, wave.m // 2 - 1)
    cp = _field_from_samples(wave.cp, keep)
    p = _field_from_samples(wave.cp - wave.params.c_hk, keep)
    return _Coefficients(
        cp=cp, p=p,
        one_a=_field_from_samples(wave.one_a, keep),
        g=_field_from_samples(wave.g, keep),
        r=_field_from_samples(wave.r, keep),
        f=wave.f,
    )


def _coefficient_fields(exp, eps: float, n_modes: int) -> _Coefficients:
    if isinstance(exp, ExactStokesWave):
        if exp.eps != eps:
            raise ValueError(f"wave was solved at eps={exp.eps}, operator requested at eps={eps}")
        return _wave_fields(exp, n_modes)
    c = exp.params.c_hk
    e2 = eps * eps
    p = _trig_field(e2 * exp.p2_0, eps * exp.p1_1, e2 * exp.p2_2)
    cp = _trig_field(c + e2 * exp.p2_0, eps * exp.p1_1, e2 * exp.p2_2)
    one_a = _trig_field(1.0 + e2 * exp.a2_0, eps * exp.a1_1, e2 * exp.a2_2)
    g = _trig_field(1.0 + e2 * exp.g2_0, eps * exp.g1_1, e2 * exp.g2_2)
    m = 4 * (2 * n_modes + 1)
    r = _field_from_samples(1.0 / (1.0 + exp.frakp_x_samples(eps, m)), 2 * n_modes)
    return _Coefficients(cp=cp, p=p, one_a=one_a, g=g, r=r, f=exp.depth_shift(eps))


COEFFICIENT_SOURCES = ("series", "exact")


def coefficient_source(params: PhysicalParams, eps: float, coefficients: str = "series"):
    """Coefficient data for the operator.

    ``"series"`` uses the second-order closed forms; ``"exact"`` solves
    for the Stokes wave by Newton's method so the coefficient fields carry
    no truncation error.
    """
    if coefficients == "series":
        return closed_form_expansion(params)
    if coefficients == "exact":
        return solve_stokes_wave(params, eps)
    raise ValueError(f"coefficients must be one of {COEFFICIENT_SOURCES}, got {coefficients!r}")


def _check_args(eps: float, n_modes: int) -> None:
    if n_modes < 4:
        raise ValueError("n_modes must be >= 4 to hold the mode-2 coefficients")
    if not abs(eps) <= 0.1:
        raise ValueError(f"eps={eps!r} outside the advisory range |eps| <= 0.1")


def sigma_block(exp: StokesExpansion, eps: float, mu: float, n_modes: int) -> np.ndarray:
    """Curvature operator ``r (d + i mu) g (d + i mu) r`` with ``r = 1 / (1 + frakp_x)``."""
    co = _coefficient_fields(exp, eps, n_modes)
    k = np.arange(-n_modes, n_modes + 1)
    T = np.diag(1j * (k + mu))
    R = multiplication_block(co.r, n_modes)
    return R @ T @ multiplication_block(co.g, n_modes) @ T @ R


def build_operator(
    params: PhysicalParams,
    eps: float,
    mu: float,
    n_modes: int = DEFAULT_N_MODES,
    expansion=None,
    coefficients: str = "series",
) -> BlochMatrix:
    """Assemble the truncated operator ``L_{mu,eps}`` in the block form

    ``[[(d+i mu)(c+p), |D+mu| tanh((h+f)|D+mu|)], [-(1+a) + kappa Sigma, (c+p)(d+i mu)]]``.
    """
    _check_args(eps, n_modes)
    exp = expansion if expansion is not None else coefficient_source(params, eps, coefficients)
    co = _coefficient_fields(exp, eps, n_modes)
    N = n_modes
    k = np.arange(-N, N + 1).astype(float)
    km = k + mu
    T = np.diag(1j * km)
    Mcp = multiplication_block(co.cp, N)
    top_left = T @ Mcp
    top_right = np.diag(km * tanh_clamped((params.depth + co.f) * km)).astype(complex)
    R = multiplication_block(co.r, N)
    sigma = R @ T @ multiplication_block(co.g, N) @ T @ R
    bottom_left = -multiplication_block(co.one_a, N) + params.kappa * sigma
    bottom_right = Mcp @ T
    L = np.block([[top_left, top_right], [bottom_left, bottom_right]])
    return BlochMatrix(n_modes=N, mu=float(mu), eps=float(eps), entries=L, params=params)


def build_script_operator(
    params: PhysicalParams,
    eps: float,
    mu: float,
    n_modes: int = DEFAULT_N_MODES,
    expansion=None,
    coefficients: str = "series",
) -> BlochMatrix:
    """The operator with the constant drift ``i c_hk mu`` removed, written as ``J B``.

    It is assembled from its own block formula, with ``p`` appearing
    through ``d (c+p) + i mu p`` rather than ``(d + i mu)(c+p)``, so that
    comparing spectra with :func:`build_operator` is a real check.
    """
    _check_args(eps, n_modes)
    exp = expansion if expansion is not None else coefficient_source(params, eps, coefficients)
    co = _coefficient_fields(exp, eps, n_modes)
    N = n_modes
    k = np.arange(-N, N + 1).astype(float)
    km = k + mu
    Dx = np.diag(1j * k)
    T = np.diag(1j * km)
    Mcp = multiplication_block(co.cp, N)
    Mp = multiplication_block(co.p, N)
    R = multiplication_block(co.r, N)
    sigma = R @ T @ multiplication_block(co.g, N) @ T @ R
    b11 = multiplication_block(co.one_a, N) - params.kappa * sigma
    b12 = -Mcp @ Dx - 1j * mu * Mp
    b21 = Dx @ Mcp + 1j * mu * Mp
    b22 = np.diag(km * tanh_clamped((params.depth + co.f) * km)).astype(complex)
    B = np.block([[b11, b12], [b21, b22]])
    n = 2 * N + 1
    J = np.block([[np.zeros((n, n)), np.eye(n)], [-np.eye(n), np.zeros((n, n))]])
    return BlochMatrix(n_modes=N, mu=float(mu), eps=float(eps), entries=J @ B, params=params)


def exact_flat_eigenvalue(k: int, sign: int, mu: float, params: PhysicalParams) -> complex:
    """Flat-water eigenvalue ``lambda_k^{sign}(mu)``, ``sign`` in ``{+1, -1}``."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    q = abs(k + sign * mu)
    w = math.sqrt((1.0 + params.kappa * q * q) * q * tanh_clamped(params.depth * q))
    return 1j * (params.c_hk * (sign * k + mu) - sign * w)


def flat_spectrum(mu: float, params: PhysicalParams, n_modes: int) -> np.ndarray:
    """Every flat-water eigenvalue on modes ``-N..N`` (two per mode)."""
    out = []
    for k in range(-n_modes, n_modes + 1):
        q = k + mu
        w = math.sqrt((1.0 + params.kappa * q * q) * abs(q) * tanh_clamped(params.depth * abs(q)))
        out.append(1j * (params.c_hk * q + w))
        out.append(1j * (params.c_hk * q - w))
    return np.array(out)


def _sort_key(z: complex):
    return (abs(z), z.real, z.imag)


def flat_references(mu: float, params: PhysicalParams) -> list:
    """The four flat-water eigenvalues that meet at zero when ``mu = 0``."""
    return [exact_flat_eigenvalue(k, s, mu, params) for k in (1, 0) for s in (1, -1)]


def eigen_near_origin(matrix: BlochMatrix, n_select: int = 4, selection: str = "flat") -> SpectrumResult:
    """Full dense eigensolve and selection of the four eigenvalues born at the origin.

    ``selection="flat"`` matches eigenvalues one-to-one to the flat-water
    values ``lambda_1^{+-}(mu), lambda_0^{+-}(mu)`` by minimal total distance,
    which follows the quadruple zero even when an unrelated mode passes
    closer to the origin.  ``selection="nearest"`` simply keeps the
    ``n_select`` eigenvalues of smallest modulus.
    """
    if selection not in ("flat", "nearest"):
        raise ValueError(f"unknown selection {selection!r}")
    A = matrix.entries
    if not np.all(np.isfinite(A)):
        raise EigensolverError("matrix has non-finite entries")
    try:
        vals = scipy.linalg.eigvals(A, check_finite=False)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise EigensolverError(f"eigensolver did not converge: {exc}") from exc
    order = sorted(vals, key=_sort_key)
    if selection == "flat":
        if matrix.params is None or n_select != 4:
            raise ValueError("flat selection needs the matrix parameters and n_select = 4")
        refs = np.array(flat_references(matrix.mu, matrix.params))
        cost = np.abs(refs[:, None] - vals[None, :])
        _, cols = scipy.optimize.linear_sum_assignment(cost)
        chosen = [vals[j] for j in cols]
    else:
        chosen = order[:n_select]
    near = sorted(chosen, key=lambda z: (z.real, z.imag))
    ambiguous = False
    if len(order) > n_select:
        a4, a5 = abs(order[n_select - 1]), abs(order[n_select])
        ambiguous = bool(a5 - a4 <= 0.1 * max(a5, 1e-300))
    growth = max(z.real for z in near)
    return SpectrumResult(
        all_eigenvalues=np.asarray(vals),
        near_zero=[complex(z) for z in near],
        max_growth=float(growth),
        ambiguous=ambiguous,
    )


def hamiltonian_defect(values: np.ndarray) -> float:
    """Largest distance from ``-conj(lambda)`` to the computed set, over all ``lambda``."""
    v = np.asarray(values)
    mirrored = -np.conj(v)
    d = np.abs(mirrored[:, None] - v[None, :]).min(axis=1)
    return float(d.max())


@dataclass(frozen=True)
class ScanRow:
    mu: float
    max_growth: float
    near_zero: list
    ambiguous: bool
    error: Optional[str] = None


def growth_scan(
    params: PhysicalParams,
    eps: float,
    mu_grid: Sequence[float],
    n_modes: int = DEFAULT_N_MODES,
    workers: int = 1,
    coefficients: str = "series",
) -> list:
    """One :class:`ScanRow` per ``mu``; eigensolver failures are recorded and the scan continues."""
    mus = np.asarray(mu_grid, dtype=float)
    if mus.ndim != 1 or np.any(mus <= 0) or np.any(np.diff(mus) < 0):
        raise ValueError("mu_grid must be a sorted 1-D array of positive values")
    exp = coefficient_source(params, eps, coefficients)

    def one(mu: float) -> ScanRow:
        try:
            res = eigen_near_origin(build_operator(params, eps, mu, n_modes, expansion=exp))
        except EigensolverError as exc:
            return ScanRow(mu=float(mu), max_growth=math.nan, near_zero=[], ambiguous=True, error=str(exc))
        return ScanRow(mu=float(mu), max_growth=res.max_growth, near_zero=res.near_zero, ambiguous=res.ambiguous)

    if workers and workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, mus))
    return [one(mu) for mu in mus]


def lambda1_pair(result: SpectrumResult, params: PhysicalParams, mu: float):
    """Pick the two eigenvalues continuing ``lambda_1^{+-}`` from the near-zero four.

    The ``lambda_0`` pair stays close to ``i c_hk mu -+ i sqrt(mu tanh(h mu))``;
    the two eigenvalues farthest from those predictions are returned,
    ordered by real part (largest first).
    """
    w0 = math.sqrt(mu * tanh_clamped(params.depth * mu) * (1.0 + params.kappa * mu * mu))
    refs = [1j * params.c_hk * mu - 1j * w0, 1j * params.c_hk * mu + 1j * w0]
    remaining = list(result.near_zero)
    for ref in refs:
        j = int(np.argmin([abs(z - ref) for z in remaining]))
        remaining.pop(j)
    return tuple(sorted(remaining, key=lambda z: -z.real))


def spectral_window_end(
    params: PhysicalParams,
    eps: float,
    bracket,
    n_modes: int = DEFAULT_N_MODES,
    coefficients: str = "series",
    threshold: float = 1e-10,
) -> float:
    """Floquet exponent where the spectral ``lambda_1`` pair returns to the imaginary axis.

    Brent's method on ``Re lambda_1^+(mu) - threshold`` inside ``bracket``,
    which must straddle the end of the instability window.
    """
    source = coefficient_source(params, eps, coefficients)

    def growth(mu):
        res = eigen_near_origin(build_operator(params, eps, mu, n_modes, expansion=source))
        return lambda1_pair(res, params, mu)[0].real - threshold

    lo, hi = map(float, bracket)
    if growth(lo) * growth(hi) > 0:
        raise RootNotBracketedError("growth does not change sign on the bracket", bracket=[lo, hi])
    return float(scipy.optimize.brentq(growth, lo, hi, xtol=1e-10))


def spectral_figure8(
    params: PhysicalParams,
    eps: float,
    mu_end: float,
    n_points: int = 80,
    n_modes: int = DEFAULT_N_MODES,
    coefficients: str = "series",
) -> np.ndarray:
    """Closed ``(Re, Im)`` polyline traced by the spectral ``lambda_1`` pair on ``(0, mu_end]``.

    Same layout as :meth:`gcww.reduced.Figure8Locus.as_array`: from the
    origin up the growing branch to the tip at ``mu_end`` and back down the
    decaying branch.
    """
    source = coefficient_source(params, eps, coefficients)
    up, down = [], []
    for mu in np.linspace(0.0, mu_end, n_points + 1)[1:-1]:
        res = eigen_near_origin(build_operator(params, eps, mu, n_modes, expansion=source))
        a, b = lambda1_pair(res, params, mu)
        up.append((a.real, a.imag))
        down.append((b.real, b.imag))
    res = eigen_near_origin(build_operator(params, eps, mu_end, n_modes, expansion=source))
    tip = (0.0, float(np.mean([z.imag for z in lambda1_pair(res, params, mu_end)])))
    return np.array([(0.0, 0.0)] + up + [tip] + down[::-1] + [(0.0, 0.0)])


def densify(polyline: np.ndarray, per_segment: int = 40) -> np.ndarray:
    """Insert ``per_segment - 1`` equispaced points inside every segment."""
    P = np.asarray(polyline, dtype=float)
    t = np.linspace(0.0, 1.0, per_segment, endpoint=False)[:, None]
    pieces = [P[i] + (P[i + 1] - P[i]) * t for i in range(len(P) - 1)]
    return np.vstack(pieces + [P[-1:]])


def polyline_hausdorff(a: np.ndarray, b: np.ndarray, per_segment: int = 40) -> float:
    """Symmetric Hausdorff distance between two densified polylines."""
    from scipy.spatial.distance import directed_hausdorff

    A, B = densify(a, per_segment), densify(b, per_segment)
    return float(max(directed_hausdorff(A, B)[0], directed_hausdorff(B, A)[0]))
