"""Physical parameters, dispersion utilities and singular-set detection.

Units are dimensionless throughout: gravity and the carrier wavenumber are
both normalised to one, so a parameter point is just the pair
``(kappa, depth)`` of surface-tension coefficient and fluid depth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

# Above this argument tanh equals 1 to double precision; clamping keeps
# intermediate expressions such as (1 - tanh) free of spurious noise.
TANH_CLAMP = 30.0

DEFAULT_TOL_RES = 1e-3
DEFAULT_TOL_D = 1e-3
DEFAULT_TOL_ZERO = 1e-3
DEFAULT_N_MAX = 100


def tanh_clamped(x):
    """``tanh`` with arguments beyond :data:`TANH_CLAMP` mapped to +-1."""
    x = np.asarray(x, dtype=float)
    out = np.tanh(np.clip(x, -TANH_CLAMP, TANH_CLAMP))
    out = np.where(x > TANH_CLAMP, 1.0, out)
    out = np.where(x < -TANH_CLAMP, -1.0, out)
    return out if out.ndim else float(out)


def one_minus_tanh(depth):
    """``1 - tanh(h)`` without cancellation, valid for every ``h >= 0``."""
    h = np.asarray(depth, dtype=float)
    q = np.exp(-2.0 * h)
    out = 2.0 * q / (1.0 + q)
    return out if out.ndim else float(out)


def one_minus_c4(depth):
    """``1 - c_h**4 = (1 - t)(1 + t)`` with ``t = tanh(h)``.

    Written as a product so the small factor ``1 - t`` is computed directly;
    in deep water the naive difference loses every significant digit.
    """
    t = tanh_clamped(depth)
    out = one_minus_tanh(depth) * (1.0 + t)
    return out


@dataclass(frozen=True)
class PhysicalParams:
    """A validated ``(kappa, depth)`` point together with its linear speeds.

    ``c_h`` is the linear phase speed without capillarity and ``c_hk`` the
    gravity-capillary one, ``c_hk = sqrt(1 + kappa) * c_h``.
    """

    kappa: float
    depth: float
    c_h: float = field(init=False)
    c_hk: float = field(init=False)

    def __post_init__(self) -> None:
        kappa = float(self.kappa)
        depth = float(self.depth)
        if not (math.isfinite(kappa) and math.isfinite(depth)):
            raise ValueError(f"kappa and depth must be finite, got ({kappa!r}, {depth!r})")
        if kappa < 0.0:
            raise ValueError(f"kappa must be >= 0, got {kappa!r}")
        if depth <= 0.0:
            raise ValueError(f"depth must be > 0, got {depth!r}")
        c_h = math.sqrt(tanh_clamped(depth))
        object.__setattr__(self, "kappa", kappa)
        object.__setattr__(self, "depth", depth)
        object.__setattr__(self, "c_h", c_h)
        object.__setattr__(self, "c_hk", c_h * math.sqrt(1.0 + kappa))

    @property
    def bond(self) -> bool:
        """True when the Bond number condition ``kappa > depth**2 / 3`` holds."""
        return self.kappa > self.depth**2 / 3.0

    def as_dict(self) -> dict:
        return {"kappa": self.kappa, "depth": self.depth, "c_h": self.c_h, "c_hk": self.c_hk}


def make_params(kappa: float, depth: float) -> PhysicalParams:
    """Build a :class:`PhysicalParams`, rejecting out-of-domain input."""
    return PhysicalParams(kappa, depth)


def resonance_kappa(n, depth):
    """Capillarity at which Fourier mode ``n`` moves at the mode-1 phase speed.

    Works elementwise on arrays. The result can be negative for some
    ``(n, depth)``; callers interested in physical points filter ``kappa >= 0``.
    """
    n_arr = np.asarray(n)
    if np.any(n_arr < 2):
        raise ValueError("resonance order n must be >= 2")
    h = np.asarray(depth, dtype=float)
    if np.any(h <= 0):
        raise ValueError("depth must be > 0")
    n_f = n_arr.astype(float)
    t1 = tanh_clamped(h)
    tn = tanh_clamped(n_f * h)
    out = (tn - n_f * t1) / (n_f * (t1 - n_f * tn))
    return out if np.ndim(out) else float(out)


def flat_dispersion(k: float, params: PhysicalParams) -> float:
    """Linear frequency ``omega(k) = sqrt((1 + kappa k^2) k tanh(k h))`` for ``k > 0``."""
    if not k > 0:
        raise ValueError(f"wavenumber must be > 0, got {k!r}")
    return math.sqrt((1.0 + params.kappa * k * k) * k * tanh_clamped(k * params.depth))


@dataclass(frozen=True)
class SingularityFlags:
    """Proximity of a parameter point to the curves where the theory degenerates."""

    near_resonance: tuple[int, ...]
    near_degeneracy: bool
    near_e22_zero: bool
    near_chat_zero: bool
    bond_satisfied: bool

    @property
    def excluded(self) -> bool:
        return bool(self.near_resonance) or self.near_degeneracy

    def tokens(self) -> list[str]:
        """Short labels used in CSV output (``R2``, ``D0``, ``E22``, ``CH``)."""
        out = [f"R{n}" for n in self.near_resonance]
        if self.near_degeneracy:
            out.append("D0")
        if self.near_e22_zero:
            out.append("E22")
        if self.near_chat_zero:
            out.append("CH")
        return out


def near_resonance_mask(kappa, depth, tol_res: float, n_max: int):
    """Boolean array of shape ``(n_max - 1,) + broadcast_shape``.

    Row ``n - 2`` marks points whose capillarity is within ``tol_res`` of the
    resonant value for order ``n``.
    """
    kappa = np.asarray(kappa, dtype=float)
    depth = np.asarray(depth, dtype=float)
    shape = np.broadcast(kappa, depth).shape
    orders = np.arange(2, n_max + 1).reshape((-1,) + (1,) * len(shape))
    k_res = resonance_kappa(orders, np.broadcast_to(depth, shape)[None, ...])
    return np.abs(kappa[None, ...] - k_res) < tol_res


def classify_singularity(
    params: PhysicalParams,
    tol_res: float = DEFAULT_TOL_RES,
    tol_D: float = DEFAULT_TOL_D,
    tol_zero: float = DEFAULT_TOL_ZERO,
    n_max: int = DEFAULT_N_MAX,
) -> SingularityFlags:
    """Flag closeness to the resonance curves, to ``D = 0``, and to the zero sets of e22 and c_hat."""
    if min(tol_res, tol_D, tol_zero) <= 0:
        raise ValueError("tolerances must be positive")
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    from .coefficients import raw_c_hat, raw_D, raw_den_r2, raw_e22

    mask = near_resonance_mask(params.kappa, params.depth, tol_res, n_max)
    near = set(int(n) for n in np.nonzero(mask)[0] + 2)
    # The second resonance also shows up as a vanishing Stokes denominator.
    if abs(raw_den_r2(params.kappa, params.depth)) < tol_zero:
        near.add(2)
    near = tuple(sorted(near))
    return SingularityFlags(
        near_resonance=near,
        near_degeneracy=bool(abs(raw_D(params.kappa, params.depth)) < tol_D),
        near_e22_zero=bool(abs(raw_e22(params.kappa, params.depth)) < tol_zero),
        near_chat_zero=bool(abs(raw_c_hat(params.kappa, params.depth)) < tol_zero),
        bond_satisfied=params.bond,
    )
