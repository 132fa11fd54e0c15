"""Stokes waves computed to machine precision in conformal coordinates.

The surface is parametrised by the flattened variable ``x'`` through
``x = x' + frakp(x')`` and ``eta(x) = zeta(x')``.  With
``frakp = H / tanh((h + f)|D|) zeta`` and ``f`` the mean of ``zeta``, the
kinematic condition is solved by ``psi(x(x')) = c frakp(x')``, which
leaves one even scalar equation (the Bernoulli condition) for the cosine
modes of ``zeta`` and the speed ``c``.  The amplitude is fixed by
``zeta_1 = eps``, which agrees with the series normalisation up to
``O(eps^3)``.

The coefficient fields of the linearised operator (``c + p``, ``1 + a``,
``g``, ``1 / (1 + frakp_x)`` and the depth shift ``f``) are then plain
pointwise expressions on the uniform ``x'`` grid.  This removes the
``O(eps^3)`` coefficient truncation of the series route.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.optimize

from . import fourier as fr
from .errors import GcwwError
from .params import PhysicalParams, tanh_clamped
from .stokes import closed_form_expansion


class StokesSolveError(GcwwError):
    code = "STOKES_NEWTON_FAILED"


@dataclass(frozen=True)
class ExactStokesWave:
    """A Stokes wave sampled on ``m`` equispaced conformal points."""

    params: PhysicalParams
    eps: float
    c: float
    zeta_cos: np.ndarray  # cosine coefficients of zeta, modes 0..M
    f: float
    cp: np.ndarray  # c_hk + p, samples
    one_a: np.ndarray  # 1 + a, samples
    g: np.ndarray
    r: np.ndarray  # 1 / (1 + frakp_x), samples
    residual: float

    @property
    def m(self) -> int:
        return self.cp.shape[0]


def _frakp_symbol(params: PhysicalParams, f: float, m: int) -> np.ndarray:
    """Symbol of ``H / tanh((h + f)|D|)`` on the FFT wavenumbers (zero at ``k = 0``)."""
    k = fr.wavenumbers(m)
    out = np.zeros(m, dtype=complex)
    nz = k != 0
    out[nz] = -1j * np.sign(k[nz]) / tanh_clamped((params.depth + f) * np.abs(k[nz]))
    return out


def _apply(samples: np.ndarray, symbol: np.ndarray) -> np.ndarray:
    return np.fft.ifft(np.fft.fft(samples) * symbol).real


def _fields(params: PhysicalParams, zeta_cos: np.ndarray, c: float, m: int):
    """Surface quantities on the conformal grid for a given ``zeta`` and ``c``."""
    x = fr.grid(m)
    modes = np.arange(zeta_cos.shape[0])
    zeta = np.cos(np.outer(x, modes)) @ zeta_cos
    f = float(zeta_cos[0])
    frakp = _apply(zeta, _frakp_symbol(params, f, m))
    J = 1.0 + fr.deriv(frakp)
    dzeta = fr.deriv(zeta)
    eta_x = dzeta / J
    psi_x = c * (J - 1.0) / J
    return x, zeta, f, J, dzeta, eta_x, psi_x


def _bernoulli(params: PhysicalParams, zeta_cos: np.ndarray, c: float, m: int) -> np.ndarray:
    _, zeta, _, J, dzeta, eta_x, psi_x = _fields(params, zeta_cos, c, m)
    curvature = fr.deriv(dzeta / np.sqrt(J * J + dzeta * dzeta)) / J
    return (
        c * psi_x
        - zeta
        - 0.5 * psi_x**2
        + 0.5 * eta_x**2 * (psi_x - c) ** 2 / (1.0 + eta_x**2)
        + params.kappa * curvature
    )


def solve_stokes_wave(
    params: PhysicalParams,
    eps: float,
    n_modes: int = 32,
    tol: float = 1e-13,
) -> ExactStokesWave:
    """Newton solve for the Stokes wave with ``zeta_1 = eps``.

    The initial guess is the second-order series.  ``n_modes`` cosine modes
    of ``zeta`` are kept and the equation is collocated on ``4 n_modes``
    points, which is ample for ``|eps| <= 0.1`` away from resonances.
    """
    if n_modes < 4:
        raise ValueError("n_modes must be >= 4")
    m = 4 * n_modes
    series = closed_form_expansion(params)
    e2 = eps * eps
    # zeta = eta(x + frakp) to second order: mean picks up -eps^2 frakp1_1 / 2
    # and mode 2 picks up +eps^2 frakp1_1 / 2.
    guess = np.zeros(n_modes + 1)
    guess[0] = e2 * (series.eta2_0 - 0.5 * series.frakp1_1)
    guess[1] = eps
    guess[2] = e2 * (series.eta2_2 + 0.5 * series.frakp1_1)
    c0 = params.c_hk + e2 * series.c2
    free = [i for i in range(n_modes + 1) if i != 1]

    def unpack(z):
        coeffs = np.empty(n_modes + 1)
        coeffs[free] = z[:-1]
        coeffs[1] = eps
        return coeffs, z[-1]

    def equations(z):
        coeffs, c = unpack(z)
        res = _bernoulli(params, coeffs, c, m)
        spec = np.fft.rfft(res).real / m
        spec[1:] *= 2.0
        return spec[: n_modes + 1]

    z0 = np.concatenate([guess[free], [c0]])
    sol = scipy.optimize.root(equations, z0, method="hybr", options={"xtol": 1e-15})
    coeffs, c = unpack(sol.x)
    residual = float(np.abs(_bernoulli(params, coeffs, c, m)).max())
    if not np.isfinite(residual) or residual > tol * max(1.0, params.kappa):
        raise StokesSolveError(
            "Newton iteration for the Stokes wave did not converge",
            kappa=params.kappa, depth=params.depth, eps=eps, residual=residual,
        )

    _, _, f, J, _, eta_x, psi_x = _fields(params, coeffs, c, m)
    B = (psi_x - c) * eta_x / (1.0 + eta_x**2)
    V = psi_x - B * eta_x
    B_x = fr.deriv(B) / J
    cp = (c - V) / J
    one_a = (1.0 + (V - c) * B_x) / J
    g = (1.0 + eta_x**2) ** -1.5 / J
    return ExactStokesWave(
        params=params, eps=float(eps), c=float(c), zeta_cos=coeffs, f=f,
        cp=cp, one_a=one_a, g=g, r=1.0 / J, residual=residual,
    )
