"""Check that time-evolved and space-propagated densities coincide at t = z / v_g.

The packet is evolved in time under the paraxial transverse law of the
chosen dispersion family, while the same initial field is propagated in space
to the plane z. In Fresnel mode both routes multiply each spectral bin by the
same ``kx``-dependent phase ``kx^2 z / (2 k0)``, so the densities agree to
rounding. In exact mode the gap measures the error of the paraxial expansion.

Densities are compared after peak normalization: pattern claims are about
shape, and the far-field routes only produce shapes.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np

from .apertures import ApertureSpec, build
from .dispersion import DispersionSpec, group_velocity
from .errors import ConfigurationError, TotalEvanescenceError, WraparoundError
from .evolution import evolve_spectral
from .lattice import Field, Lattice, norm_squared
from .propagation import evanescent_fraction, propagate_exact, propagate_fresnel

DEFAULT_TOLERANCE = {"fresnel": 1e-9, "exact": 5e-3}
EDGE_TOLERANCE = 1e-6
_ZERO_NORM = 1e-24


class DensityGap(NamedTuple):
    l2_rel: float
    linf_peak: float


def _peak_normalized(d, name):
    d = np.asarray(d, dtype=float)
    if np.any(d < 0):
        raise ConfigurationError(f"{name} has negative samples")
    peak = d.max() if d.size else 0.0
    if peak == 0:
        raise ConfigurationError(f"{name} is all zero")
    return d / peak


def compare_densities(d1, d2) -> DensityGap:
    """Relative L2 and max-abs gap between two peak-normalized densities."""
    if np.shape(d1) != np.shape(d2):
        raise ConfigurationError(
            f"density lengths differ: {np.shape(d1)} vs {np.shape(d2)}"
        )
    a = _peak_normalized(d1, "first density")
    b = _peak_normalized(d2, "second density")
    diff = a - b
    return DensityGap(
        float(np.linalg.norm(diff) / np.linalg.norm(a)),
        float(np.max(np.abs(diff))),
    )


@dataclass(frozen=True)
class MatchReport:
    """Outcome of one time-versus-space comparison.

    ``linf_peak`` is the largest absolute difference between the two
    peak-normalized densities and decides ``verdict`` ("pass" or "fail").
    ``evanescent_fraction`` is the spectral power of the initial field beyond
    ``k0``, which no small-angle description can account for.
    """

    z: float
    k0: float
    v_g: float
    t: float
    l2_rel: float
    linf_peak: float
    evanescent_fraction: float
    verdict: str
    mode: str

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "MatchReport":
        return cls(**json.loads(text))


def check_edges(density, edge_tol: float, what: str) -> None:
    """Raise :class:`WraparoundError` if the edge samples are not negligible."""
    peak = density.max()
    edge = max(density[0], density[-1])
    if edge > edge_tol * peak:
        raise WraparoundError(
            f"{what}: edge density is {edge / peak:.3g} of peak (limit {edge_tol:g}); "
            "the pattern has reached the periodic boundary"
        )


@dataclass(frozen=True)
class MatchFields:
    """The two fields behind a :class:`MatchReport`, for callers that want them."""

    initial: Field
    evolved: Field
    propagated: Field


def match_fields(
    aperture: ApertureSpec,
    spec: DispersionSpec,
    lattice: Lattice,
    z: float,
    mode: str = "fresnel",
    tol: float | None = None,
    time_scale: float = 1.0,
    edge_tol: float | None = EDGE_TOLERANCE,
) -> tuple[MatchReport, MatchFields]:
    """Like :func:`run_match` but also returns the compared fields."""
    k0 = spec.require_k0()
    if not z > 0:
        raise ConfigurationError(f"z must be positive, got {z}")
    if mode not in DEFAULT_TOLERANCE:
        raise ConfigurationError(f"mode must be 'fresnel' or 'exact', got {mode!r}")
    if not time_scale > 0:
        raise ConfigurationError(f"time_scale must be positive, got {time_scale}")
    tol = DEFAULT_TOLERANCE[mode] if tol is None else tol

    field0 = build(aperture, lattice)
    v_g = group_velocity(spec)
    t = time_scale * z / v_g
    evolved = evolve_spectral(field0, spec.paraxial(), t)
    propagate = propagate_fresnel if mode == "fresnel" else propagate_exact
    propagated = propagate(field0, k0, z)

    if norm_squared(propagated) <= _ZERO_NORM * norm_squared(field0):
        raise TotalEvanescenceError(
            f"field propagated to z={z:g} is numerically zero (k0={k0:g})"
        )
    d_t, d_z = evolved.density, propagated.density
    if edge_tol is not None:
        check_edges(d_t, edge_tol, "time-evolved density")
        check_edges(d_z, edge_tol, "propagated density")

    gap = compare_densities(d_t, d_z)
    report = MatchReport(
        z=float(z),
        k0=float(k0),
        v_g=float(v_g),
        t=float(t),
        l2_rel=gap.l2_rel,
        linf_peak=gap.linf_peak,
        evanescent_fraction=evanescent_fraction(field0, k0),
        verdict="pass" if gap.linf_peak <= tol else "fail",
        mode=mode,
    )
    return report, MatchFields(field0, evolved, propagated)


def run_match(
    aperture: ApertureSpec,
    spec: DispersionSpec,
    lattice: Lattice,
    z: float,
    mode: str = "fresnel",
    tol: float | None = None,
    time_scale: float = 1.0,
    edge_tol: float | None = EDGE_TOLERANCE,
) -> MatchReport:
    """Evolve to ``time_scale * z / v_g``, propagate to ``z``, compare densities.

    ``tol`` defaults to 1e-9 in Fresnel mode and 5e-3 in exact mode.
    ``time_scale`` other than 1 deliberately mistimes the evolution, which is
    how the check is shown to fail. ``edge_tol=None`` disables the
    wraparound guard.
    """
    report, _ = match_fields(aperture, spec, lattice, z, mode, tol, time_scale, edge_tol)
    return report
