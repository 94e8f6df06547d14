"""Time evolution of a transverse packet.

:func:`evolve_spectral` is the production path: one FFT, a phase per
wavenumber bin, one inverse FFT. :func:`evolve_propagator` evaluates the free
Schrodinger kernel by brute-force quadrature and is kept as an independent
cross-check. :func:`far_field_density` is the long-time limit in which the
density becomes the squared Fourier transform of the initial packet.
"""
from __future__ import annotations

import warnings

import numpy as np

from .dispersion import DispersionSpec, PhysicalConstants, omega_transverse
from .errors import ConfigurationError, UndersampledKernelWarning
from .lattice import Field, Lattice, Spectrum, forward, inverse

FRAUNHOFER_PHASE_LIMIT = 0.05
_CHUNK = 1024
_SUPPORT_FLOOR = 1e-10
_MAX_PADDED = 2**22


def evolve_spectral(field0: Field, spec: DispersionSpec, t: float) -> Field:
    """Evolve ``field0`` for a time ``t`` under the transverse law of ``spec``."""
    if t < 0:
        raise ConfigurationError(f"t must be non-negative, got {t}")
    if t == 0:
        return field0
    spectrum = forward(field0)
    phase = np.exp(-1j * omega_transverse(spec, field0.lattice.k) * t)
    return inverse(Spectrum(field0.lattice, spectrum.values * phase))


def chirp_phase_per_sample(lattice: Lattice, scale: float) -> float:
    """Phase advance of ``exp(i (x-x')^2 / (2 scale))`` per sample at the edge.

    ``scale`` is ``hbar t / m`` for matter waves and ``z / k0`` for light.
    """
    return lattice.dx * lattice.extent / (2 * scale)


def quadratic_kernel_convolution(field0: Field, scale: float) -> Field:
    """Riemann sum of ``sqrt(1/(2 pi i s)) int exp(i (x-x')^2/(2 s)) f(x') dx'``.

    Costs O(n^2). Warns when the kernel is undersampled at the domain edge.
    """
    lattice = field0.lattice
    if chirp_phase_per_sample(lattice, scale) > np.pi:
        warnings.warn(
            f"kernel chirp advances {chirp_phase_per_sample(lattice, scale):.3g} rad "
            "per sample at the domain edge; quadrature is unreliable",
            UndersampledKernelWarning,
            stacklevel=3,
        )
    x = lattice.x
    pref = lattice.dx / np.sqrt(2j * np.pi * scale)
    src = field0.values
    out = np.empty(lattice.n, dtype=complex)
    for start in range(0, lattice.n, _CHUNK):
        xs = x[start : start + _CHUNK, None]
        kernel = np.exp(1j * (xs - x[None, :]) ** 2 / (2 * scale))
        out[start : start + _CHUNK] = pref * (kernel @ src)
    return Field(lattice, out)


def evolve_propagator(field0: Field, constants: PhysicalConstants, t: float) -> Field:
    """Free-particle evolution by direct quadrature of the real-space propagator."""
    if t <= 0:
        raise ConfigurationError(f"propagator needs t > 0, got {t}")
    return quadratic_kernel_convolution(field0, constants.hbar * t / constants.m)


def fourier_integral(field0: Field, k, bins_per_fringe: int = 256) -> np.ndarray:
    """``int f(x') exp(-i k x') dx'`` at arbitrary wavenumbers ``k``.

    The transform is taken on a zero-padded grid fine enough to resolve the
    narrowest spectral feature of the field's support with ``bins_per_fringe``
    bins, then linearly interpolated (real and imaginary parts separately).
    Wavenumbers beyond Nyquist wrap, as the sampled transform is periodic.
    """
    lattice = field0.lattice
    n, dx = lattice.n, lattice.dx
    width = max(support_width(field0) / dx, 1.0)
    size = int(2 ** np.ceil(np.log2(width * bins_per_fringe)))
    size = max(n, min(size, _MAX_PADDED))
    padded = np.zeros(size, dtype=complex)
    padded[size // 2 - n // 2 : size // 2 + n // 2] = field0.values
    values = np.fft.fftshift(np.fft.fft(np.fft.ifftshift(padded))) * dx
    kgrid = np.fft.fftshift(2 * np.pi * np.fft.fftfreq(size, d=dx))
    k = np.asarray(k, dtype=float)
    period = 2 * np.pi / dx
    re = np.interp(k, kgrid, values.real, period=period)
    im = np.interp(k, kgrid, values.imag, period=period)
    return re + 1j * im


def support_width(field: Field) -> float:
    """Length of the smallest interval holding every non-negligible sample."""
    mag = np.abs(field.values)
    if not mag.any():
        return 0.0
    nz = np.flatnonzero(mag > _SUPPORT_FLOOR * mag.max())
    return float((nz[-1] - nz[0] + 1) * field.lattice.dx)


def fraunhofer_phase(width: float, scale: float) -> float:
    """Quadratic phase neglected at the aperture edge, ``width^2 / (2 scale)``."""
    return width**2 / (2 * scale)


def far_field_density(
    field0: Field,
    constants: PhysicalConstants,
    t: float,
    x=None,
    bins_per_fringe: int = 256,
) -> np.ndarray:
    """Long-time density ``(m / 2 pi hbar t) |int exp(-i m x x' / hbar t) psi dx'|^2``.

    Sampled on ``field0.lattice.x`` unless other positions ``x`` are given;
    the far-field pattern is usually much wider than the source grid. Only
    meaningful when the packet is
    compact enough that ``m a^2 / (2 hbar t)`` is small; see
    :func:`fraunhofer_phase` and ``FRAUNHOFER_PHASE_LIMIT``.
    """
    if t <= 0:
        raise ConfigurationError(f"far-field density needs t > 0, got {t}")
    scale = constants.hbar * t / constants.m
    x = field0.lattice.x if x is None else np.asarray(x, dtype=float)
    amp = fourier_integral(field0, x / scale, bins_per_fringe)
    return np.abs(amp) ** 2 / (2 * np.pi * scale)
