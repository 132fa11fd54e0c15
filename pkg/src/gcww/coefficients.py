"""Closed-form scalar stability coefficients.

Every formula is transcribed in powers of ``c = c_h`` and ``K = 1 + kappa``
exactly as it is printed in the source derivation, without algebraic
simplification, so each line can be audited against the original.  The
``raw_*`` functions are vectorised over numpy arrays of ``kappa`` and
``depth``; the public functions take a :class:`PhysicalParams`.

Two coefficients, ``e_wb`` and ``e22``, have a second, compositional
evaluation route (``*_composite``).  Agreement between the two routes is
the main internal consistency check of this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import SingularPointError
from .params import DEFAULT_TOL_ZERO, PhysicalParams, one_minus_c4, tanh_clamped


def _base(kappa, depth):
    kappa = np.asarray(kappa, dtype=float)
    h = np.asarray(depth, dtype=float)
    c = np.sqrt(tanh_clamped(h))
    return kappa, h, c, 1.0 + kappa


def _out(x):
    return x if np.ndim(x) else float(x)


def raw_den_r2(kappa, depth):
    """``(1 + kappa) c^4 - 3 kappa``, which vanishes on the second resonance curve."""
    kappa, h, c, K = _base(kappa, depth)
    return _out(c**4 * K - 3.0 * kappa)


def raw_e12(kappa, depth):
    """Twice the linear group velocity; strictly positive."""
    kappa, h, c, K = _base(kappa, depth)
    e12 = 2.0 * np.sqrt(K) * c * ((c**2 + one_minus_c4(h) * h) / (2.0 * c**2) + kappa / K)
    return _out(e12)


def raw_D(kappa, depth):
    """``D = h - e12^2 / 4``; its zero set is the degeneracy curve."""
    h = np.asarray(depth, dtype=float)
    e12 = raw_e12(kappa, depth)
    return _out(h - 0.25 * np.asarray(e12) ** 2)


def raw_e11_numerator(kappa, depth):
    kappa, h, c, K = _base(kappa, depth)
    c4 = c**4
    c8 = c4 * c4
    return _out((21.0 - 25.0 * c4 + 6.0 * c8) * K**2 + (-12.0 + 6.0 * c4 + 3.0 * c8) * K + 9.0 * c4)


def raw_e11(kappa, depth):
    kappa, h, c, K = _base(kappa, depth)
    num = np.asarray(raw_e11_numerator(kappa, h))
    den = 8.0 * c**3 * np.sqrt(K) * (c**4 * K - 3.0 * kappa)
    return _out(num / den)


def raw_f11(kappa, depth):
    kappa, h, c, K = _base(kappa, depth)
    return _out(-0.5 * (c**2.5 - c**-1.5) * K**0.75)


def raw_e_wb(kappa, depth):
    """Whitham-Benjamin function, closed form (two addends)."""
    kappa, h, c, K = _base(kappa, depth)
    c2 = c * c
    c4 = c2 * c2
    c6 = c4 * c2
    c8 = c4 * c4
    first = np.asarray(raw_e11(kappa, h))
    D = np.asarray(raw_D(kappa, h))
    poly = (3.0 * h * c8 - 6.0 * c6 - 6.0 * h * c4 + 6.0 * c2 + 3.0 * h) * K + 4.0 * c6
    second = np.sqrt(K) * poly / (4.0 * c**3 * D)
    return _out(first - second)


def raw_e22(kappa, depth):
    """Closed form of ``e22``; its sign times that of ``e_wb`` decides stability."""
    kappa, h, c, K = _base(kappa, depth)
    c2 = c * c
    c4 = c2 * c2
    c6 = c4 * c2
    c8 = c4 * c4
    h2 = h * h
    num = (
        (-3.0 * c8 * h2 + 6.0 * c6 * h + 2.0 * c4 * h2 - 3.0 * c4 - 6.0 * c2 * h + h2) * K**2
        + (4.0 * c2 * h - 4.0 * c6 * h) * K
        + 4.0 * c4
    )
    return _out(num / (c**3 * K**1.5))


def raw_c_hat(kappa, depth):
    """``2 c_hk - e12``; its sign picks the half-plane hosting the figure 8."""
    kappa, h, c, K = _base(kappa, depth)
    return _out(2.0 * np.sqrt(K) * c - np.asarray(raw_e12(kappa, h)))


# Constants of the Kato-basis expansion ------------------------------------


def raw_gamma(kappa, depth):
    kappa, h, c, K = _base(kappa, depth)
    return _out(1.0 + h * (c**-2 - c**2) - 2.0 * kappa / K)


def raw_zeta(kappa, depth):
    kappa, h, c, K = _base(kappa, depth)
    return _out(0.125 * c * np.sqrt(K) * np.asarray(raw_gamma(kappa, h)) ** 2)


def raw_b_big(kappa, depth):
    kappa, h, c, K = _base(kappa, depth)
    g = np.asarray(raw_gamma(kappa, h))
    sK = np.sqrt(K)
    return _out(g * c * sK + h / c * sK * one_minus_c4(h) * (g - 2.0 * (1.0 - h * c**2)))


def raw_b_hat(kappa, depth):
    kappa, h, c, K = _base(kappa, depth)
    return _out(np.sqrt(K) / c * (c**2 + one_minus_c4(h) * h))


def raw_e22_composite(kappa, depth):
    """``e22`` assembled from the Kato constants ``b``, ``zeta`` and ``gamma``."""
    kappa, h, c, K = _base(kappa, depth)
    b = np.asarray(raw_b_big(kappa, h))
    zeta = np.asarray(raw_zeta(kappa, h))
    g = np.asarray(raw_gamma(kappa, h))
    return _out(2.0 * (b - 4.0 * zeta - 2.0 * kappa / np.sqrt(K) * c * (1.0 + g)))


def raw_e11_tilde(kappa, depth):
    """Correction added to ``e11`` by the block decoupling."""
    kappa, h, c, K = _base(kappa, depth)
    f11 = np.asarray(raw_f11(kappa, h))
    e12 = np.asarray(raw_e12(kappa, h))
    D = np.asarray(raw_D(kappa, h))
    s = c**-0.5 * K**0.25
    return _out(-(np.sqrt(K) / c + h * f11**2 + e12 * f11 * s) / D)


def raw_e_wb_composite(kappa, depth):
    """``e_wb = e11 + e11_tilde``, the route through the reduced 4x4 model."""
    return _out(np.asarray(raw_e11(kappa, depth)) + np.asarray(raw_e11_tilde(kappa, depth)))


# Public API ----------------------------------------------------------------


@dataclass(frozen=True)
class CoefficientSet:
    """All closed-form scalar coefficients at one parameter point.

    ``e_hk = sqrt(8 e_wb / e22)`` is only present when the ratio is positive,
    that is when the point is Benjamin-Feir unstable.
    """

    e_wb: float
    e11: float
    e12: float
    e22: float
    f11: float
    D: float
    c_hat: float
    e_hk: Optional[float]
    den_r2: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class KatoConstants:
    alpha: float
    beta: float
    gamma: float
    delta: float
    b1: float
    b2: float
    b3: float
    zeta: float
    b_big: float
    b_hat: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def _guard(params: PhysicalParams, tol_zero: float, need_D: bool = True) -> None:
    den = raw_den_r2(params.kappa, params.depth)
    if abs(den) < tol_zero:
        raise SingularPointError(
            "parameter point lies on the second resonance curve",
            kappa=params.kappa, depth=params.depth, den_r2=den,
        )
    if need_D:
        D = raw_D(params.kappa, params.depth)
        if abs(D) < tol_zero:
            raise SingularPointError(
                "parameter point lies on the degeneracy curve D = 0",
                kappa=params.kappa, depth=params.depth, D=D,
            )


def coefficient_set(params: PhysicalParams, tol_zero: float = DEFAULT_TOL_ZERO) -> CoefficientSet:
    """Evaluate every closed-form coefficient at ``params``.

    Raises :class:`SingularPointError` when ``|den_r2|`` or ``|D|`` is below
    ``tol_zero`` because ``e_wb`` has a pole on both curves.
    """
    _guard(params, tol_zero)
    k, h = params.kappa, params.depth
    e_wb = raw_e_wb(k, h)
    e22 = raw_e22(k, h)
    ratio = e_wb / e22 if e22 != 0.0 else math.nan
    return CoefficientSet(
        e_wb=e_wb,
        e11=raw_e11(k, h),
        e12=raw_e12(k, h),
        e22=e22,
        f11=raw_f11(k, h),
        D=raw_D(k, h),
        c_hat=raw_c_hat(k, h),
        e_hk=math.sqrt(8.0 * ratio) if ratio > 0 else None,
        den_r2=raw_den_r2(k, h),
    )


def e_wb_composite(params: PhysicalParams, tol_zero: float = DEFAULT_TOL_ZERO) -> float:
    """Whitham-Benjamin function via ``e11`` plus the decoupling correction."""
    _guard(params, tol_zero)
    return raw_e_wb_composite(params.kappa, params.depth)


def e22_composite(params: PhysicalParams) -> float:
    """``e22`` via ``2 (b - 4 zeta - 2 kappa K^(-1/2) c (1 + gamma))``."""
    return raw_e22_composite(params.kappa, params.depth)


def kato_constants(params: PhysicalParams, tol_zero: float = DEFAULT_TOL_ZERO) -> KatoConstants:
    """Constants appearing in the expansion of the symplectic Kato basis."""
    _guard(params, tol_zero, need_D=False)
    kappa, h = params.kappa, params.depth
    c = params.c_h
    K = 1.0 + kappa
    c4 = c**4
    den = c4 * K - 3.0 * kappa
    alpha = (c4 * K - 3.0 * kappa + 3.0) / (2.0 * c**1.5 * K**0.25 * den)
    beta = (3.0 - c4) * (c4 + 1.0) * K**1.25 / (4.0 * c**2.5 * den)
    delta = 0.25 * K**0.25 * c**-0.5 * (c**2 + 3.0 * c**-2)
    b1 = 0.5 * K**0.75 * c**2.5 * (1.0 - c**-4)
    b2 = (K * c4 + 5.0 * kappa - 1.0) / (2.0 * c**1.5 * K**0.25)
    b3 = (c / math.sqrt(K)) ** -0.5 * (c**2 + h * one_minus_c4(h))
    return KatoConstants(
        alpha=alpha,
        beta=beta,
        gamma=raw_gamma(kappa, h),
        delta=delta,
        b1=b1,
        b2=b2,
        b3=b3,
        zeta=raw_zeta(kappa, h),
        b_big=raw_b_big(kappa, h),
        b_hat=raw_b_hat(kappa, h),
    )
