"""Second-order Stokes expansion of gravity-capillary travelling waves.

Two independent routes produce the same :class:`StokesExpansion`:

* :func:`closed_form_expansion` evaluates the printed coefficient formulas.
* :func:`build_expansion` repeats the order-by-order construction
  numerically.  The first- and second-order equations are solved mode by
  mode with :func:`mode_matrix`; ``c2`` comes from the solvability
  condition at third order; the conformal change of variables and the
  coefficient functions ``p``, ``a``, ``g`` and the curvature operator
  ``Sigma`` are composed from grid products and spectral derivatives.

:func:`traveling_residual` plugs an expansion back into the full
travelling-wave equations and is the ground truth for both routes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fourier as fr
from .coefficients import raw_den_r2
from .errors import SingularPointError
from .params import DEFAULT_TOL_ZERO, PhysicalParams, tanh_clamped

# Grid used for the order-by-order construction.  All fields involved are
# trigonometric polynomials of degree <= 4, so 32 points resolve every
# product exactly.
_BUILD_GRID = 32


@dataclass(frozen=True)
class StokesExpansion:
    """Fourier coefficients of the Stokes wave and derived fields to order eps^2.

    Naming follows ``<field><order>_<mode>``.  For instance ``p2_0`` is the
    mean of the order-eps^2 part of ``p`` and ``a2_2`` its ``cos 2x``
    amplitude.  Sine amplitudes are used for the odd fields ``psi``, ``frakp``
    (the conformal shift) and ``e`` in ``Sigma``.
    """

    params: PhysicalParams
    eta1: fr.FourierField
    psi1: fr.FourierField
    eta2_0: float
    eta2_2: float
    psi2_2: float
    c1: float
    c2: float
    frakp1_1: float
    frakp2_2: float
    f_eps2: float
    p1_1: float
    p2_0: float
    p2_2: float
    a1_1: float
    a2_0: float
    a2_2: float
    g1_1: float
    g2_0: float
    g2_2: float
    sigma1: tuple[float, float, float]
    sigma2: tuple[float, float, float, float, float]

    SCALAR_FIELDS = (
        "eta2_0", "eta2_2", "psi2_2", "c2", "frakp1_1", "frakp2_2", "f_eps2",
        "p1_1", "p2_0", "p2_2", "a1_1", "a2_0", "a2_2", "g1_1", "g2_0", "g2_2",
    )
    SIGMA1_NAMES = ("d1_1", "e1_1", "h1_1")
    SIGMA2_NAMES = ("d2_0", "d2_2", "e2_2", "h2_0", "h2_2")

    def scalars(self) -> dict[str, float]:
        """Flat name -> value map of every scalar coefficient."""
        out = {name: getattr(self, name) for name in self.SCALAR_FIELDS}
        out.update(zip(self.SIGMA1_NAMES, self.sigma1))
        out.update(zip(self.SIGMA2_NAMES, self.sigma2))
        return out

    @property
    def psi1_1(self) -> float:
        return -2.0 * self.psi1.coeff(1).imag

    # Coefficient functions on a grid -------------------------------------

    def p_samples(self, eps: float, m: int) -> np.ndarray:
        x = fr.grid(m)
        return eps * self.p1_1 * np.cos(x) + eps**2 * (self.p2_0 + self.p2_2 * np.cos(2 * x))

    def a_samples(self, eps: float, m: int) -> np.ndarray:
        x = fr.grid(m)
        return eps * self.a1_1 * np.cos(x) + eps**2 * (self.a2_0 + self.a2_2 * np.cos(2 * x))

    def g_samples(self, eps: float, m: int) -> np.ndarray:
        x = fr.grid(m)
        return 1.0 + eps * self.g1_1 * np.cos(x) + eps**2 * (self.g2_0 + self.g2_2 * np.cos(2 * x))

    def frakp_x_samples(self, eps: float, m: int) -> np.ndarray:
        """Derivative of the conformal shift ``frakp`` on the grid."""
        x = fr.grid(m)
        return eps * self.frakp1_1 * np.cos(x) + 2.0 * eps**2 * self.frakp2_2 * np.cos(2 * x)

    def depth_shift(self, eps: float) -> float:
        return eps**2 * self.f_eps2


def mode_matrix(k: int, params: PhysicalParams) -> np.ndarray:
    """Action of the flat linearised operator on ``(cos kx, 0)`` and ``(0, sin kx)``.

    Rows give the ``cos kx`` amplitude of the first component and the
    ``sin kx`` amplitude of the second.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    c = params.c_hk
    return np.array(
        [
            [1.0 + params.kappa * k * k, -c * k],
            [-c * k, k * tanh_clamped(params.depth * k)],
        ]
    )


def _check_regular(params: PhysicalParams, tol_zero: float) -> None:
    den = raw_den_r2(params.kappa, params.depth)
    if abs(den) < tol_zero:
        raise SingularPointError(
            "Stokes expansion is singular on the second resonance curve",
            kappa=params.kappa, depth=params.depth, den_r2=den,
        )


def closed_form_expansion(params: PhysicalParams, tol_zero: float = DEFAULT_TOL_ZERO) -> StokesExpansion:
    """Evaluate every printed coefficient formula at ``params``."""
    _check_regular(params, tol_zero)
    kappa = params.kappa
    c = params.c_h
    K = 1.0 + kappa
    sK = np.sqrt(K)
    c2_, c4 = c * c, c**4
    c8, c12 = c4 * c4, c4**3
    den = c4 * K - 3.0 * kappa

    eta2_0 = K / 4.0 * (c2_ - 1.0 / c2_)
    eta2_2 = -(c4 - 3.0) * K / (4.0 * c2_ * den)
    psi2_2 = sK * (9.0 * kappa + 3.0 - 6.0 * c4 * kappa + K * c8) / (8.0 * c**3 * den)
    c2 = (
        9.0 * c4
        + (6.0 * c4 + 3.0 * c8 - 12.0) * K
        + (15.0 - 13.0 * c4) * K**2
        + (-2.0 * c12 + 10.0 * c8 - 14.0 * c4 + 6.0) * K**3
    ) / (16.0 * c**3 * sK * den)

    frakp2_2 = (c4 + 1.0) * (c4 * kappa - 3.0 * kappa + c4 + 3.0) / (8.0 * c4 * den)
    f_eps2 = (c4 * K - 3.0 - kappa) / (4.0 * c2_)

    p1_1 = -2.0 * sK / c
    p2_0 = (
        9.0 * c4
        + (60.0 - 18.0 * c4 + 3.0 * c8) * K
        + (-57.0 + 35.0 * c4 - 8.0 * c8) * K**2
        + (6.0 - 14.0 * c4 + 10.0 * c8 - 2.0 * c12) * K**3
    ) / (16.0 * sK * c**3 * den)
    p2_2 = -sK * (2.0 * kappa * (3.0 - c4) + c4 + 3.0) / (2.0 * c**3 * den)

    a1_1 = -(1.0 / c2_ + c2_ * K)
    a2_0 = (3.0 * K * c4 + 1.0) / (2.0 * c4)
    a2_2 = ((10.0 * c8 - 30.0 * c4) * K**2 + (-c8 + 22.0 * c4 - 3.0) * K - 6.0 * c4) / (4.0 * c4 * den)

    g1_1 = -1.0 / c2_
    g2_0 = (2.0 - 3.0 * c4) / (4.0 * c4)
    g2_2 = -(3.0 * kappa + 5.0 * c4 * kappa - 2.0 * c8 * kappa + 2.0 * c4 - 2.0 * c8 + 3.0) / (4.0 * c4 * den)

    sigma1 = (-3.0 / c2_, 3.0 / c2_, 1.0 / c2_)
    d2_0 = 3.0 * (4.0 - c4) / (4.0 * c4)
    d2_2 = -9.0 * (-kappa * c4 + 3.0 * kappa + 1.0) / (4.0 * c4 * den)
    e2_2 = (-9.0 * kappa * c4 + 27.0 * kappa + 9.0) / (2.0 * c4 * den)
    h2_0 = -0.5 / c4
    h2_2 = (15.0 * kappa - 11.0 * c4 * kappa + 2.0 * c8 * kappa + c4 + 2.0 * c8 + 6.0) / (2.0 * c4 * den)

    return StokesExpansion(
        params=params,
        eta1=fr.FourierField.from_trig(cos={1: 1.0}),
        psi1=fr.FourierField.from_trig(sin={1: sK / c}),
        eta2_0=eta2_0, eta2_2=eta2_2, psi2_2=psi2_2, c1=0.0, c2=c2,
        frakp1_1=1.0 / c2_, frakp2_2=frakp2_2, f_eps2=f_eps2,
        p1_1=p1_1, p2_0=p2_0, p2_2=p2_2,
        a1_1=a1_1, a2_0=a2_0, a2_2=a2_2,
        g1_1=g1_1, g2_0=g2_0, g2_2=g2_2,
        sigma1=sigma1, sigma2=(d2_0, d2_2, e2_2, h2_0, h2_2),
    )


# Dirichlet-Neumann expansion -------------------------------------------------


class _DN:
    """Terms of the Dirichlet-Neumann operator expanded in powers of ``eta``.

    ``D = -i d/dx`` maps real samples to imaginary ones, so intermediate
    values are kept complex and only the final result is made real.
    """

    def __init__(self, depth: float):
        self.h = depth

    @staticmethod
    def _mult(f, symbol):
        m = f.shape[-1]
        k = fr.wavenumbers(m)
        sym = np.asarray(symbol(k), dtype=complex)
        sym[m // 2] = 0.0
        return np.fft.ifft(np.fft.fft(f) * sym)

    def D(self, f):
        return self._mult(f, lambda k: k)

    def T(self, f):
        return self._mult(f, lambda k: tanh_clamped(self.h * k))

    def G0(self, psi):
        return self._mult(psi, lambda k: k * tanh_clamped(self.h * k)).real

    def G1(self, eta, psi):
        w = self.D(psi)
        return self.D(eta * w - self.T(eta * self.T(w))).real

    def G2(self, eta, psi):
        w = self.D(psi)
        e2 = eta * eta
        inner = (
            self.D(e2 * self.T(w))
            + self.T(e2 * self.D(w))
            - 2.0 * self.T(eta * self.D(self.T(eta * self.T(w))))
        )
        return -0.5 * self.D(inner).real


def _solve_modes(params: PhysicalParams, rhs1: np.ndarray, rhs2: np.ndarray, kmax: int):
    """Solve the flat system mode by mode for ``k = 0, 2..kmax``.

    ``rhs1`` must be even and ``rhs2`` odd.  Returns ``{k: (eta_k, psi_k)}``
    as cosine and sine amplitudes.  The kernel direction ``k = 1`` is
    handled by the caller through the solvability condition.
    """
    out = {0: (fr.cos_coeff(rhs1, 0), 0.0)}
    for k in range(2, kmax + 1):
        M = mode_matrix(k, params)
        b = np.array([fr.cos_coeff(rhs1, k), fr.sin_coeff(rhs2, k)])
        out[k] = tuple(np.linalg.solve(M, b))
    return out


def _kernel_vector(params: PhysicalParams) -> np.ndarray:
    """Null vector of ``mode_matrix(1)`` normalised to unit ``eta`` amplitude."""
    _, _, vt = np.linalg.svd(mode_matrix(1, params))
    v = vt[-1]
    return v / v[0]


def build_expansion(params: PhysicalParams, tol_zero: float = DEFAULT_TOL_ZERO) -> StokesExpansion:
    """Rebuild the expansion order by order, independently of the printed formulas."""
    _check_regular(params, tol_zero)
    m = _BUILD_GRID
    x = fr.grid(m)
    dn = _DN(params.depth)
    c_hk = params.c_hk
    dx = fr.deriv

    # First order: the kernel of the flat operator.
    kern = _kernel_vector(params)
    eta1 = np.cos(x)
    psi1 = kern[1] * np.sin(x)
    kern_fields = (eta1, psi1)

    def solvability(f1, f2) -> float:
        return fr.inner(f1, kern_fields[0]) + fr.inner(f2, kern_fields[1])

    # Second order.  The speed correction c1 enters linearly and is fixed by
    # orthogonality of the right-hand side to the kernel.
    g0psi1 = dn.G0(psi1)
    base1 = -0.5 * dx(psi1) ** 2 + 0.5 * g0psi1**2
    base2 = -dn.G1(eta1, psi1)
    lin1, lin2 = dx(psi1), -dx(eta1)
    c1 = -solvability(base1, base2) / solvability(lin1, lin2)
    rhs1 = base1 + c1 * lin1
    rhs2 = base2 + c1 * lin2
    sol2 = _solve_modes(params, rhs1, rhs2, kmax=4)
    eta2_0 = sol2[0][0]
    eta2_2, psi2_2 = sol2[2]
    eta2 = eta2_0 + sum(sol2[k][0] * np.cos(k * x) for k in range(2, 5))
    psi2 = sum(sol2[k][1] * np.sin(k * x) for k in range(2, 5))

    # Third order: only the solvability condition is needed, and it fixes c2.
    e1x, e1xx = dx(eta1), dx(eta1, 2)
    p1x, p2x, e2x = dx(psi1), dx(psi2), dx(eta2)
    base1 = (
        -p1x * p2x
        - e1x**2 * p1x * c_hk
        + e1x * e2x * c_hk**2
        - 1.5 * params.kappa * e1x**2 * e1xx
    )
    base2 = -dn.G1(eta1, psi2) - dn.G1(eta2, psi1) - dn.G2(eta1, psi1)
    lin1, lin2 = p1x, -e1x
    c2 = -solvability(base1, base2) / solvability(lin1, lin2)

    # Conformal flattening: frakp = H / tanh(h|D|) [eta(x + frakp)] to order 2.
    h = params.depth

    def hilbert_over_tanh(f):
        def sym(k):
            out = np.zeros(k.shape, dtype=complex)
            nz = k != 0
            out[nz] = -1j * np.sign(k[nz]) / tanh_clamped(h * np.abs(k[nz]))
            return out

        return fr.apply_symbol(f, sym)

    frakp1 = hilbert_over_tanh(eta1)
    src2 = e1x * frakp1 + eta2
    frakp2 = hilbert_over_tanh(src2)
    f_eps2 = float(np.mean(src2))

    # Velocity field at the surface, expanded from its definitions
    #   B = (psi_x - c) eta_x / (1 + eta_x^2),  V = psi_x - B eta_x.
    B1 = -c_hk * e1x
    B2 = p1x * e1x - c_hk * e2x
    V1 = p1x
    V2 = p2x - B1 * e1x
    l2 = -1.5 * e1x**2

    q1, q1x, q1xx, q1xxx = frakp1, dx(frakp1), dx(frakp1, 2), dx(frakp1, 3)
    q2x, q2xx, q2xxx = dx(frakp2), dx(frakp2, 2), dx(frakp2, 3)
    B1x, B1xx, B2x = dx(B1), dx(B1, 2), dx(B2)
    V1x = dx(V1)

    p1 = -V1 - c_hk * q1x
    p2 = c2 + V1 * q1x - V2 - V1x * q1 - c_hk * q2x + c_hk * q1x**2
    a1 = -q1x - c_hk * B1x
    a2 = q1x**2 - q2x - c_hk * B2x - c_hk * B1xx * q1 + B1x * V1 + c_hk * B1x * q1x
    g1 = -q1x
    g2 = -q2x + q1x**2 + l2
    g1x = dx(g1)
    g2x = dx(g2)

    d1 = g1 - 2.0 * q1x
    e1 = g1x - 2.0 * q1xx
    h1 = -q1xxx
    d2 = g2 - 2.0 * q2x + 3.0 * q1x**2 - 2.0 * g1 * q1x
    e2 = g2x - 2.0 * q2xx - 2.0 * g1 * q1xx - 2.0 * g1x * q1x + 6.0 * q1xx * q1x
    h2 = 2.0 * q1xx**2 - q2xxx - q1xx * g1x + 3.0 * q1xxx * q1x - g1 * q1xxx

    cc, sc = fr.cos_coeff, fr.sin_coeff
    return StokesExpansion(
        params=params,
        eta1=fr.FourierField.from_trig(cos={1: 1.0}),
        psi1=fr.FourierField.from_trig(sin={1: float(kern[1])}),
        eta2_0=eta2_0, eta2_2=eta2_2, psi2_2=psi2_2, c1=c1, c2=c2,
        frakp1_1=sc(frakp1, 1), frakp2_2=sc(frakp2, 2), f_eps2=f_eps2,
        p1_1=cc(p1, 1), p2_0=cc(p2, 0), p2_2=cc(p2, 2),
        a1_1=cc(a1, 1), a2_0=cc(a2, 0), a2_2=cc(a2, 2),
        g1_1=cc(g1, 1), g2_0=cc(g2, 0), g2_2=cc(g2, 2),
        sigma1=(cc(d1, 1), sc(e1, 1), cc(h1, 1)),
        sigma2=(cc(d2, 0), cc(d2, 2), sc(e2, 2), cc(h2, 0), cc(h2, 2)),
    )


def evaluate_profiles(exp: StokesExpansion, eps: float, m_points: int):
    """Sample the truncated ``eta``, ``psi`` on ``m_points`` nodes and return ``(eta, psi, c)``."""
    if m_points < 16 or m_points & (m_points - 1):
        raise ValueError("m_points must be a power of two >= 16")
    x = fr.grid(m_points)
    eta = eps * exp.eta1.samples(m_points) + eps**2 * (exp.eta2_0 + exp.eta2_2 * np.cos(2 * x))
    psi = eps * exp.psi1.samples(m_points) + eps**2 * exp.psi2_2 * np.sin(2 * x)
    c = exp.params.c_hk + eps**2 * exp.c2
    return eta, psi, c


def traveling_residual(exp: StokesExpansion, eps: float, n_modes: int = 32):
    """L2 norms of the dynamic and kinematic residuals of the travelling-wave equations.

    The Dirichlet-Neumann operator is truncated after its quadratic term,
    so both residuals are ``O(eps^3)`` for a correct expansion.
    """
    if n_modes < 16:
        raise ValueError("n_modes must be >= 16")
    m = 4 * n_modes
    eta, psi, c = evaluate_profiles(exp, eps, m)
    kappa = exp.params.kappa
    dn = _DN(exp.params.depth)
    ex = fr.deriv(eta)
    px = fr.deriv(psi)
    slope = ex / np.sqrt(1.0 + ex**2)
    dyn = (
        -c * px
        + eta
        + 0.5 * px**2
        - ex**2 * (c - px) ** 2 / (2.0 * (1.0 + ex**2))
        - kappa * fr.deriv(slope)
    )
    kin = c * ex + dn.G0(psi) + dn.G1(eta, psi) + dn.G2(eta, psi)
    return float(np.sqrt(np.mean(dyn**2))), float(np.sqrt(np.mean(kin**2)))


def residual_slope(exp: StokesExpansion, eps_values=(1e-3, 2e-3, 5e-3, 1e-2), n_modes: int = 32):
    """Least-squares slopes of ``log(residual)`` against ``log(eps)`` for both equations."""
    eps_values = np.asarray(eps_values, dtype=float)
    res = np.array([traveling_residual(exp, e, n_modes) for e in eps_values])
    le = np.log(eps_values)
    return tuple(float(np.polyfit(le, np.log(res[:, j]), 1)[0]) for j in range(2))


def relative_difference(a: StokesExpansion, b: StokesExpansion) -> dict[str, float]:
    """Per-coefficient ``|a - b| / max(1, |b|)``."""
    sa, sb = a.scalars(), b.scalars()
    return {k: abs(sa[k] - sb[k]) / max(1.0, abs(sb[k])) for k in sb}
