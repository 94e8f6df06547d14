"""Propagation of a monochromatic field from the plane z = 0 to a plane z.

All propagators work on the angular spectrum: each transverse wavenumber
``kx`` picks up the phase of its longitudinal wavenumber over ``z``. Returned
fields keep the overall ``exp(i k0 z)`` carrier; densities do not see it.
Components with ``|kx| > k0`` are evanescent and decay with z.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, FraunhoferValidityWarning
from .evolution import (
    FRAUNHOFER_PHASE_LIMIT,
    fourier_integral,
    fraunhofer_phase,
    support_width,
)
from .lattice import Field, Spectrum, forward, inverse


def _check(k0, z, strict=False):
    if not np.isfinite(k0) or k0 <= 0:
        raise ConfigurationError(f"k0 must be positive, got {k0}")
    if z < 0 or (strict and z == 0):
        raise ConfigurationError(f"z must be {'positive' if strict else 'non-negative'}, got {z}")


def longitudinal_wavenumber(kx, k0: float) -> np.ndarray:
    """``sqrt(k0^2 - kx^2)``, continued to ``i sqrt(kx^2 - k0^2)`` past ``k0``.

    The branch is the one that decays for positive z.
    """
    kx = np.asarray(kx, dtype=float)
    diff = k0**2 - kx**2
    return np.where(diff >= 0, np.sqrt(np.abs(diff)) + 0j, 1j * np.sqrt(np.abs(diff)))


def evanescent_fraction(field0: Field, k0: float) -> float:
    """Share of spectral power carried by components with ``|kx| > k0``."""
    power = forward(field0).power
    total = power.sum()
    if total == 0:
        return 0.0
    return float(power[np.abs(field0.lattice.k) > k0].sum() / total)


def _apply(field0: Field, transfer) -> Field:
    spectrum = forward(field0)
    return inverse(Spectrum(field0.lattice, spectrum.values * transfer))


def propagate_exact(field0: Field, k0: float, z: float) -> Field:
    _check(k0, z)
    if z == 0:
        return field0
    kz = longitudinal_wavenumber(field0.lattice.k, k0)
    return _apply(field0, np.exp(1j * kz * z))


def propagate_fresnel(field0: Field, k0: float, z: float) -> Field:
    """Paraxial propagation with ``kz ~ k0 - kx^2 / (2 k0)``."""
    _check(k0, z)
    if z == 0:
        return field0
    kx = field0.lattice.k
    return _apply(field0, np.exp(1j * (k0 - kx**2 / (2 * k0)) * z))


@dataclass(frozen=True)
class FarField:
    """Peak-normalized far-field density and the validity of the approximation.

    ``quadratic_phase`` is ``k0 a^2 / (2 z)`` for the aperture width ``a``;
    ``valid`` is False when it exceeds the threshold the call was made with.
    """

    density: np.ndarray
    quadratic_phase: float
    valid: bool


def propagate_fraunhofer(
    field0: Field,
    k0: float,
    z: float,
    threshold: float = FRAUNHOFER_PHASE_LIMIT,
    x=None,
    bins_per_fringe: int = 256,
) -> FarField:
    """Far-field pattern ``|int exp(-i k0 x x' / z) phi(x') dx'|^2`` at the plane z.

    Evaluated on ``field0.lattice.x`` unless positions ``x`` are given.
    """
    _check(k0, z, strict=True)
    scale = z / k0
    x = field0.lattice.x if x is None else np.asarray(x, dtype=float)
    amp = fourier_integral(field0, x / scale, bins_per_fringe)
    density = np.abs(amp) ** 2
    peak = density.max()
    if peak == 0:
        raise ConfigurationError("far field of a zero aperture is undefined")
    phase = fraunhofer_phase(support_width(field0), scale)
    valid = phase <= threshold
    if not valid:
        warnings.warn(
            f"quadratic aperture phase {phase:.3g} rad exceeds {threshold:g}; "
            "far-field pattern is approximate",
            FraunhoferValidityWarning,
            stacklevel=2,
        )
    return FarField(density / peak, phase, valid)
