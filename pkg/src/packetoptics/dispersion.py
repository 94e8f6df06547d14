"""Dispersion relations for De Broglie, electromagnetic and Klein-Gordon waves.

Each family supplies two things: the transverse law ``omega(kx)`` that drives
the time evolution of a packet along x, and the group velocity of the incident
beam at its carrier wavenumber ``k0``. The ``*Exact`` families keep the full
square roots with ``k_z`` pinned at ``k0``; they exist to measure how much the
paraxial expansion throws away.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConfigurationError


class Family(str, enum.Enum):
    DE_BROGLIE = "DeBroglie"
    EM_PARAXIAL = "ElectromagneticParaxial"
    EM_EXACT = "ElectromagneticExact"
    KG_PARAXIAL = "KleinGordonParaxial"
    KG_EXACT = "KleinGordonExact"

    @property
    def paraxial(self) -> "Family":
        return {
            Family.EM_EXACT: Family.EM_PARAXIAL,
            Family.KG_EXACT: Family.KG_PARAXIAL,
        }.get(self, self)


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = 1.0
    m: float = 1.0
    c: float = 1.0

    def __post_init__(self):
        for name in ("hbar", "m", "c"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise ConfigurationError(f"{name} must be positive, got {value}")


@dataclass(frozen=True)
class DispersionSpec:
    family: Family
    constants: PhysicalConstants = field(default_factory=PhysicalConstants)
    k0: float | None = None

    def __post_init__(self):
        try:
            object.__setattr__(self, "family", Family(self.family))
        except ValueError:
            names = ", ".join(f.value for f in Family)
            raise ConfigurationError(
                f"unknown dispersion family {self.family!r}; expected one of {names}"
            ) from None
        if self.k0 is not None and (not np.isfinite(self.k0) or self.k0 <= 0):
            raise ConfigurationError(f"k0 must be positive, got {self.k0}")
        if self.k0 is None and self.family is not Family.DE_BROGLIE:
            raise ConfigurationError(f"{self.family.value} needs a carrier k0")

    def paraxial(self) -> "DispersionSpec":
        return replace(self, family=self.family.paraxial)

    def require_k0(self) -> float:
        if self.k0 is None:
            raise ConfigurationError(
                f"{self.family.value}: carrier wavenumber k0 is not set"
            )
        return self.k0


def _kg_wavenumber(spec: DispersionSpec) -> float:
    """sqrt(k0^2 + (mc/hbar)^2), the total wavenumber scale of a KG beam."""
    c = spec.constants
    return float(np.hypot(spec.k0, c.m * c.c / c.hbar))


def omega_transverse(spec: DispersionSpec, kx):
    """Angular frequency as a function of transverse wavenumber ``kx``.

    Works elementwise on arrays.
    """
    kx = np.asarray(kx, dtype=float)
    c = spec.constants
    fam = spec.family
    if fam is Family.DE_BROGLIE:
        return c.hbar * kx**2 / (2 * c.m)
    if fam is Family.EM_PARAXIAL:
        return c.c * spec.k0 + c.c * kx**2 / (2 * spec.k0)
    if fam is Family.EM_EXACT:
        return c.c * np.hypot(spec.k0, kx)
    kk = _kg_wavenumber(spec)
    if fam is Family.KG_PARAXIAL:
        return c.c * kk + c.c * kx**2 / (2 * kk)
    return c.c * np.hypot(kk, kx)


def omega_longitudinal(spec: DispersionSpec, k0=None):
    """Frequency of the incident beam as a function of its wavenumber."""
    k0 = spec.require_k0() if k0 is None else np.asarray(k0, dtype=float)
    c = spec.constants
    fam = spec.family
    if fam is Family.DE_BROGLIE:
        return c.hbar * k0**2 / (2 * c.m)
    if fam in (Family.EM_PARAXIAL, Family.EM_EXACT):
        return c.c * k0
    return c.c * np.sqrt(k0**2 + (c.m * c.c / c.hbar) ** 2)


def spreading_coefficient(spec: DispersionSpec) -> float:
    """Curvature ``d^2 omega / d kx^2`` of the paraxial law (hbar/m for matter waves).

    A packet evolved for a time t spreads like a matter wave with
    ``hbar t / m`` replaced by this coefficient times t.
    """
    c = spec.constants
    fam = spec.family.paraxial
    if fam is Family.DE_BROGLIE:
        return c.hbar / c.m
    if fam is Family.EM_PARAXIAL:
        return c.c / spec.k0
    return c.c / _kg_wavenumber(spec)


def group_velocity(spec: DispersionSpec) -> float:
    k0 = spec.require_k0()
    c = spec.constants
    if spec.family is Family.DE_BROGLIE:
        return c.hbar * k0 / c.m
    if spec.family in (Family.EM_PARAXIAL, Family.EM_EXACT):
        return c.c
    return c.c * k0 / _kg_wavenumber(spec)


def transit_time(spec: DispersionSpec, z: float) -> float:
    """Time for the packet envelope to cover distance ``z`` along the beam."""
    if z < 0:
        raise ConfigurationError(f"z must be non-negative, got {z}")
    return z / group_velocity(spec)
