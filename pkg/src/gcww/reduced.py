"""Leading-order 4x4 reduced model of the Benjamin-Feir eigenvalues.

Every formula here keeps only the leading terms in ``(mu, eps)``; the
remainders are not available in closed form.  In particular

* block entries carry errors of relative order ``O(eps, mu)``,
* ``critical_mu`` is exact only to first order in ``eps``,
* eigenvalues carry absolute errors ``O(mu eps^2, mu^2 eps, mu^3)``.

The Fourier-truncated operator in :mod:`gcww.bloch` is the ground truth
these formulas are compared against.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .coefficients import coefficient_set
from .errors import SingularSylvesterError, StablePointError
from .params import DEFAULT_TOL_ZERO, PhysicalParams, tanh_clamped


@dataclass(frozen=True)
class ReducedBlocks:
    """Leading-order entries of the blocks ``E, F, G`` and their ``mu``-rescaled forms."""

    E: np.ndarray
    F: np.ndarray
    G: np.ndarray
    E1: np.ndarray
    F1: np.ndarray
    G1: np.ndarray
    mu: float
    eps: float

    def B(self) -> np.ndarray:
        """The self-adjoint 4x4 matrix ``[[E, F], [F*, G]]``."""
        return np.block([[self.E, self.F], [self.F.conj().T, self.G]])

    def L(self) -> np.ndarray:
        """Hamiltonian 4x4 matrix ``J4 B``."""
        J2 = np.array([[0.0, 1.0], [-1.0, 0.0]])
        J4 = np.block([[J2, np.zeros((2, 2))], [np.zeros((2, 2)), J2]])
        return J4 @ self.B()


def _coeff_values(params: PhysicalParams, tol_zero: float):
    cs = coefficient_set(params, tol_zero)
    return cs


def assemble_blocks(params: PhysicalParams, mu: float, eps: float, tol_zero: float = DEFAULT_TOL_ZERO) -> ReducedBlocks:
    """Leading-order ``E, F, G`` and their rescaled versions ``E1, F1, G1``.

    The rescaled blocks divide the second row and column of ``E`` and ``F``
    by ``mu`` where the leading entry is ``O(mu)``; they are what the
    Sylvester decoupling acts on.
    """
    cs = _coeff_values(params, tol_zero)
    kappa, h = params.kappa, params.depth
    c = params.c_h
    s = c**-0.5 * (1.0 + kappa) ** 0.25
    e11, e12, e22, f11 = cs.e11, cs.e12, cs.e22, cs.f11

    E = np.array(
        [
            [e11 * eps**2 - e22 * mu**2 / 8.0, 0.5j * e12 * mu],
            [-0.5j * e12 * mu, -e22 * mu**2 / 8.0],
        ]
    )
    F = np.array([[f11 * eps, 1j * mu * eps * s], [0.0, 0.0]], dtype=complex)
    G = np.diag([1.0 + kappa * mu**2, mu * tanh_clamped(h * mu)]).astype(complex)

    E1 = np.array(
        [
            [e11 * mu * eps**2 - e22 * mu**3 / 8.0, 0.5j * e12 * mu],
            [-0.5j * e12 * mu, -e22 * mu / 8.0],
        ]
    )
    F1 = np.array([[f11 * mu * eps, 1j * mu * eps * s], [0.0, 0.0]], dtype=complex)
    G1 = np.diag([mu + kappa * mu**3, tanh_clamped(h * mu)]).astype(complex)
    return ReducedBlocks(E=E, F=F, G=G, E1=E1, F1=F1, G1=G1, mu=float(mu), eps=float(eps))


# Sylvester system ---------------------------------------------------------


@dataclass(frozen=True)
class SylvesterSystem:
    """The 4x4 linear system solved by the decoupling matrix, with its closed-form det and inverse."""

    a: float
    b: float
    c: float
    d: float
    e: float
    A: np.ndarray
    det_closed: float
    inv: Optional[np.ndarray]


def sylvester_matrix(a, b, c, d, e) -> np.ndarray:
    return np.array(
        [
            [a, b, c, 0.0],
            [d, a, 0.0, -c],
            [e, 0.0, a, -b],
            [0.0, -e, -d, a],
        ],
        dtype=float,
    )


def sylvester_det(a, b, c, d, e) -> float:
    return (b * d - a * a) ** 2 - 2.0 * c * e * (a * a + b * d - 0.5 * c * e)


def sylvester_cofactor(a, b, c, d, e) -> np.ndarray:
    """Adjugate of the Sylvester matrix as printed (before division by the determinant)."""
    a2, bd, ce = a * a, b * d, c * e
    return np.array(
        [
            [a * (a2 - bd - ce), b * (-a2 + bd - ce), -c * (a2 + bd - ce), -2.0 * a * b * c],
            [d * (-a2 + bd - ce), a * (a2 - bd - ce), 2.0 * a * c * d, -c * (-a2 - bd + ce)],
            [-e * (a2 + bd - ce), 2.0 * a * b * e, a * (a2 - bd - ce), b * (a2 - bd + ce)],
            [-2.0 * a * d * e, -e * (-a2 - bd + ce), d * (a2 - bd + ce), a * (a2 - bd - ce)],
        ],
        dtype=float,
    )


def sylvester_system(a: float, b: float, c: float, d: float, e: float, rel_tol: float = 1e-14) -> SylvesterSystem:
    """Assemble the system and, when it is regular, its inverse from the cofactor formula.

    Raises :class:`SingularSylvesterError` when ``|det| < rel_tol * scale**4``
    with ``scale`` the largest of ``|a|..|e|``.
    """
    A = sylvester_matrix(a, b, c, d, e)
    det = sylvester_det(a, b, c, d, e)
    scale = max(abs(a), abs(b), abs(c), abs(d), abs(e))
    if scale == 0.0 or abs(det) < rel_tol * scale**4:
        raise SingularSylvesterError("Sylvester system is singular", det=det, scale=scale)
    inv = sylvester_cofactor(a, b, c, d, e) / det
    return SylvesterSystem(a=a, b=b, c=c, d=d, e=e, A=A, det_closed=det, inv=inv)


def physical_sylvester(params: PhysicalParams, mu: float, tol_zero: float = DEFAULT_TOL_ZERO) -> SylvesterSystem:
    """The system at a physical point, leading order in ``(mu, eps)``."""
    cs = _coeff_values(params, tol_zero)
    return sylvester_system(-0.5 * cs.e12 * mu, mu, -cs.e22 * mu / 8.0, mu * params.depth, 0.0)


def decoupling_X(params: PhysicalParams, eps: float, tol_zero: float = DEFAULT_TOL_ZERO) -> np.ndarray:
    """Leading-order decoupling matrix ``[[x11, i x12], [i x21, x22]]``; error ``O(eps^2, mu eps)``."""
    cs = _coeff_values(params, tol_zero)
    s = params.c_h**-0.5 * (1.0 + params.kappa) ** 0.25
    x21 = -0.5 / cs.D * (cs.e12 * cs.f11 + 2.0 * s) * eps
    x22 = 0.5 / cs.D * (s * cs.e12 + 2.0 * params.depth * cs.f11) * eps
    return np.array([[0.0, 0.0], [1j * x21, x22]], dtype=complex)


def decoupling_correction(params: PhysicalParams, mu: float, eps: float, tol_zero: float = DEFAULT_TOL_ZERO) -> complex:
    """``(J2 X J2 F1*)_{11}``, the shift added to the ``(1,1)`` entry of ``E1``.

    Divided by ``mu eps^2`` it reproduces the correction ``e11_tilde`` that
    turns ``e11`` into the Whitham-Benjamin function.
    """
    X = decoupling_X(params, eps, tol_zero)
    F1 = assemble_blocks(params, mu, eps, tol_zero).F1
    J2 = np.array([[0.0, 1.0], [-1.0, 0.0]])
    return complex((J2 @ X @ J2 @ F1.conj().T)[0, 0])


# Discriminant and eigenvalues -----------------------------------------------


def _ewb_e22(params: PhysicalParams, tol_zero: float):
    cs = _coeff_values(params, tol_zero)
    return cs.e_wb, cs.e22


def bf_discriminant(params: PhysicalParams, mu: float, eps: float, tol_zero: float = DEFAULT_TOL_ZERO) -> float:
    """``8 eps^2 e22 e_wb - e22^2 mu^2``; remainders ``O(eps^3, mu eps^2)`` and ``O(mu^3)`` dropped."""
    e_wb, e22 = _ewb_e22(params, tol_zero)
    return 8.0 * eps**2 * e22 * e_wb - e22**2 * mu**2


def critical_mu(params: PhysicalParams, eps: float, tol_zero: float = DEFAULT_TOL_ZERO) -> Optional[float]:
    """Upper end of the unstable band, ``eps sqrt(8 e_wb / e22)``, or ``None`` when stable."""
    e_wb, e22 = _ewb_e22(params, tol_zero)
    ratio = e_wb / e22
    if not ratio > 0:
        return None
    return abs(eps) * math.sqrt(8.0 * ratio)


def reduced_eigenvalues(params: PhysicalParams, mu: float, eps: float, tol_zero: float = DEFAULT_TOL_ZERO):
    """Leading-order ``(lambda1+, lambda1-, lambda0+, lambda0-)``.

    A negative discriminant enters through the principal square root, so
    past the band edge both ``lambda1`` are purely imaginary.
    """
    if mu < 0:
        raise ValueError("mu must be >= 0")
    cs = _coeff_values(params, tol_zero)
    delta = 8.0 * eps**2 * cs.e22 * cs.e_wb - cs.e22**2 * mu**2
    root = cmath.sqrt(delta)
    centre = 0.5j * cs.c_hat * mu
    l1p = centre + mu / 8.0 * root
    l1m = centre - mu / 8.0 * root
    w0 = math.sqrt(mu * tanh_clamped(params.depth * mu) * (1.0 + params.kappa * mu**2))
    l0p = 1j * params.c_hk * mu - 1j * w0
    l0m = 1j * params.c_hk * mu + 1j * w0
    return complex(l1p), complex(l1m), complex(l0p), complex(l0m)


@dataclass(frozen=True)
class Figure8Locus:
    """Closed curve of the two unstable eigenvalues for ``mu`` in ``[0, mu_crit]``.

    ``points`` runs along the ``+`` branch from ``mu = 0`` to ``mu_crit`` and
    back along the ``-`` branch; ``branch`` tells which half-plane hosts it.
    """

    points: list
    mu_crit: float
    branch: str

    def as_array(self) -> np.ndarray:
        return np.asarray(self.points, dtype=float)


def _require_unstable(params: PhysicalParams, eps: float, tol_zero: float) -> float:
    mu_c = critical_mu(params, eps, tol_zero)
    if mu_c is None:
        e_wb, e22 = _ewb_e22(params, tol_zero)
        raise StablePointError(
            "point is Benjamin-Feir stable, no unstable eigenvalues",
            kappa=params.kappa, depth=params.depth, e_wb=e_wb, e22=e22,
        )
    return mu_c


def figure8_locus(params: PhysicalParams, eps: float, n_points: int = 201, tol_zero: float = DEFAULT_TOL_ZERO) -> Figure8Locus:
    if n_points < 2:
        raise ValueError("n_points must be >= 2")
    mu_c = _require_unstable(params, eps, tol_zero)
    cs = _coeff_values(params, tol_zero)
    mu = np.linspace(0.0, mu_c, n_points)
    rad = np.clip(8.0 * eps**2 * cs.e22 * cs.e_wb - cs.e22**2 * mu**2, 0.0, None)
    re = mu / 8.0 * np.sqrt(rad)
    re[0] = re[-1] = 0.0
    im = 0.5 * cs.c_hat * mu
    upper = [(float(r), float(i)) for r, i in zip(re, im)]
    lower = [(float(-r), float(i)) for r, i in zip(re[::-1], im[::-1])]
    branch = "upper" if cs.c_hat >= 0 else "lower"
    return Figure8Locus(points=upper + lower, mu_crit=mu_c, branch=branch)


def max_growth_rate(params: PhysicalParams, eps: float, tol_zero: float = DEFAULT_TOL_ZERO):
    """Peak of ``Re lambda1+`` over ``mu``: ``(mu_crit / sqrt 2, eps^2 |e_wb| / 2)``."""
    mu_c = _require_unstable(params, eps, tol_zero)
    e_wb, _ = _ewb_e22(params, tol_zero)
    return mu_c / math.sqrt(2.0), 0.5 * eps**2 * abs(e_wb)


def exact_flat_lambda1(params: PhysicalParams, mu: float):
    """The two flat-water eigenvalues bifurcating from ``k = 1`` (used as the Taylor reference)."""
    from .bloch import exact_flat_eigenvalue

    return exact_flat_eigenvalue(1, +1, mu, params), exact_flat_eigenvalue(1, -1, mu, params)


__all__ = [
    "ReducedBlocks", "SylvesterSystem", "Figure8Locus",
    "assemble_blocks", "sylvester_matrix", "sylvester_det", "sylvester_cofactor",
    "sylvester_system", "physical_sylvester", "decoupling_X", "decoupling_correction",
    "bf_discriminant", "critical_mu", "reduced_eigenvalues", "figure8_locus",
    "max_growth_rate", "exact_flat_lambda1",
]
