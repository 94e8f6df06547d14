"""Uniform 1-D grids and the unitary transform pair used everywhere else.

The spatial grid is centred on the origin, ``x_j = (j - n/2) dx``, so it holds
``x = 0`` exactly and stops one sample short of ``+L/2``. Wavenumbers are kept
in the standard FFT wrap order.

Transform convention
--------------------
``forward`` computes ``F_m = n**-0.5 * sum_j f_j exp(-i k_m x_j)`` with the
centred ``x_j``; ``inverse`` is its adjoint. Both are unitary, so discrete
Parseval holds exactly. A continuum transform with the symmetric
``(2 pi)**-0.5`` normalization relates to the samples by

    psi_hat(k_m) ~= dx * sqrt(n / (2 pi)) * F_m

and the finite-range integral ``int f(x) exp(-i k x) dx`` is ``dx sqrt(n) F_m``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ConfigurationError, DegenerateInputError


@dataclass(frozen=True)
class Lattice:
    """Uniform grid of ``n`` samples with spacing ``dx``.

    Use :func:`make_lattice` to build one from a sample count and extent.
    """

    n: int
    dx: float

    def __post_init__(self):
        if self.n < 2 or self.n & (self.n - 1):
            raise ConfigurationError(f"n must be a power of two >= 2, got {self.n}")
        if not np.isfinite(self.dx) or self.dx <= 0:
            raise ConfigurationError(f"dx must be positive, got {self.dx}")

    @property
    def extent(self) -> float:
        return self.n * self.dx

    @cached_property
    def x(self) -> np.ndarray:
        x = (np.arange(self.n) - self.n // 2) * self.dx
        x.flags.writeable = False
        return x

    @cached_property
    def k(self) -> np.ndarray:
        k = 2 * np.pi * np.fft.fftfreq(self.n, d=self.dx)
        k.flags.writeable = False
        return k

    @property
    def k_nyquist(self) -> float:
        return np.pi / self.dx

    def zeros(self) -> "Field":
        return Field(self, np.zeros(self.n, dtype=complex))


def make_lattice(n: int, extent: float) -> Lattice:
    """Grid of ``n`` samples spanning ``extent`` (so ``dx = extent / n``)."""
    if isinstance(n, bool) or int(n) != n:
        raise ConfigurationError(f"n must be an integer, got {n!r}")
    if not np.isfinite(extent) or extent <= 0:
        raise ConfigurationError(f"extent must be positive, got {extent}")
    if n < 2:
        raise ConfigurationError(f"n must be a power of two >= 2, got {n}")
    return Lattice(int(n), float(extent) / int(n))


def _checked_samples(lattice: Lattice, values, what: str) -> np.ndarray:
    arr = np.array(values, dtype=complex)
    if arr.shape != (lattice.n,):
        raise ConfigurationError(
            f"{what} needs {lattice.n} samples, got shape {arr.shape}"
        )
    if not np.all(np.isfinite(arr)):
        raise ConfigurationError(f"{what} contains NaN or Inf samples")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class Field:
    """Complex samples of a transverse wave function on ``lattice.x``."""

    lattice: Lattice
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "values", _checked_samples(self.lattice, self.values, "field")
        )

    @property
    def density(self) -> np.ndarray:
        return np.abs(self.values) ** 2

    def with_values(self, values) -> "Field":
        return Field(self.lattice, values)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Complex amplitudes indexed by ``lattice.k`` (wrap order)."""

    lattice: Lattice
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "values", _checked_samples(self.lattice, self.values, "spectrum")
        )

    @property
    def power(self) -> np.ndarray:
        return np.abs(self.values) ** 2


def forward(field: Field) -> Spectrum:
    # ifftshift moves the x = 0 sample to index 0, which supplies the
    # exp(+i k L/2) phase of the centred grid.
    values = np.fft.fft(np.fft.ifftshift(field.values), norm="ortho")
    return Spectrum(field.lattice, values)


def inverse(spectrum: Spectrum) -> Field:
    values = np.fft.fftshift(np.fft.ifft(spectrum.values, norm="ortho"))
    return Field(spectrum.lattice, values)


def norm_squared(field: Field) -> float:
    """Riemann-sum probability ``sum |psi|^2 dx``."""
    return float(np.sum(field.density) * field.lattice.dx)


def normalize(field: Field) -> Field:
    norm2 = norm_squared(field)
    if norm2 <= 0.0:
        raise DegenerateInputError("cannot normalize a zero field")
    return field.with_values(field.values / np.sqrt(norm2))
