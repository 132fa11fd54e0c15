"""Small pseudospectral toolkit for real 2*pi-periodic functions.

Functions are held either as samples on the uniform grid
``x_j = 2*pi*j/m`` or as a :class:`FourierField` (a sparse map from
wavenumber to complex amplitude).  Derivatives and Fourier multipliers act
in coefficient space; products are taken pointwise on the grid.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np


def grid(m: int) -> np.ndarray:
    return 2.0 * np.pi * np.arange(m) / m


def wavenumbers(m: int) -> np.ndarray:
    """Integer wavenumbers in numpy FFT order."""
    return np.fft.fftfreq(m, d=1.0 / m)


def apply_symbol(samples: np.ndarray, symbol: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Apply the Fourier multiplier ``symbol(k)`` to real grid samples.

    The Nyquist mode is discarded so that odd multipliers stay real.
    """
    m = samples.shape[-1]
    k = wavenumbers(m)
    coeffs = np.fft.fft(samples)
    sym = np.asarray(symbol(k), dtype=complex)
    if m % 2 == 0:
        sym = sym.copy()
        sym[m // 2] = 0.0
    out = np.fft.ifft(coeffs * sym)
    return out.real


def deriv(samples: np.ndarray, order: int = 1) -> np.ndarray:
    return apply_symbol(samples, lambda k: (1j * k) ** order)


def mode(samples: np.ndarray, k: int) -> complex:
    """Complex amplitude of ``exp(i k x)`` in the samples."""
    m = samples.shape[-1]
    return complex(np.fft.fft(samples)[k % m] / m)


def cos_coeff(samples: np.ndarray, k: int) -> float:
    """Coefficient of ``cos(k x)`` (or the mean when ``k == 0``)."""
    if k == 0:
        return float(np.mean(samples))
    return 2.0 * mode(samples, k).real


def sin_coeff(samples: np.ndarray, k: int) -> float:
    return -2.0 * mode(samples, k).imag


def inner(f: np.ndarray, g: np.ndarray) -> float:
    """Normalised L2 pairing ``(1/2pi) * integral of f g``."""
    return float(np.mean(f * g))


@dataclass(frozen=True)
class FourierField:
    """A real trigonometric polynomial stored as ``{k: amplitude of exp(ikx)}``.

    Only ``k >= 0`` is stored; negative modes follow from real-valuedness,
    ``coeff(-k) = conj(coeff(k))``.
    """

    coeffs: Mapping[int, complex]
    parity: str = "none"
    n_modes: int = 2
    _full: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.parity not in ("even", "odd", "none"):
            raise ValueError(f"unknown parity {self.parity!r}")
        full: dict[int, complex] = {}
        for k, v in self.coeffs.items():
            k = int(k)
            if abs(k) > self.n_modes:
                raise ValueError(f"mode {k} outside truncation {self.n_modes}")
            if k < 0:
                k, v = -k, np.conj(v)
            full[k] = complex(v)
        if 0 in full and abs(full[0].imag) > 0:
            raise ValueError("mean of a real field must be real")
        for k, v in list(full.items()):
            full[-k] = np.conj(v)
        object.__setattr__(self, "_full", full)

    @classmethod
    def from_trig(cls, cos=None, sin=None, mean: float = 0.0, n_modes: int | None = None) -> "FourierField":
        """Build from ``{k: a_k}`` cosine and ``{k: b_k}`` sine amplitudes."""
        cos = dict(cos or {})
        sin = dict(sin or {})
        coeffs: dict[int, complex] = {}
        if mean:
            coeffs[0] = complex(mean)
        for k, a in cos.items():
            coeffs[k] = coeffs.get(k, 0j) + 0.5 * a
        for k, b in sin.items():
            coeffs[k] = coeffs.get(k, 0j) - 0.5j * b
        if sin and not cos and not mean:
            parity = "odd"
        elif not sin:
            parity = "even"
        else:
            parity = "none"
        top = max([0, *coeffs.keys()])
        return cls(coeffs, parity=parity, n_modes=n_modes if n_modes is not None else max(top, 1))

    def coeff(self, k: int) -> complex:
        return self._full.get(int(k), 0j)

    def items(self):
        return sorted(self._full.items())

    def samples(self, m: int) -> np.ndarray:
        x = grid(m)
        out = np.zeros(m, dtype=complex)
        for k, v in self._full.items():
            out += v * np.exp(1j * k * x)
        return out.real

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=complex)
        for k, v in self._full.items():
            out = out + v * np.exp(1j * k * x)
        return out.real
