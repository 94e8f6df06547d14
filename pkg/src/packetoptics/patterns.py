"""Closed-form single- and double-slit patterns, and a feature extractor.

The closed forms are the far-field limits: a slit of width ``a`` gives
``sinc^2(m a x / 2 hbar t)`` and two point slits ``d`` apart give
``cos^2(m d x / 2 hbar t)``. For light replace ``hbar t / m`` by ``z / k0``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dispersion import PhysicalConstants
from .errors import ConfigurationError, DegenerateInputError
from .lattice import Lattice


def _scale(constants: PhysicalConstants, t: float) -> float:
    if t <= 0:
        raise ConfigurationError(f"t must be positive, got {t}")
    return constants.hbar * t / constants.m


def sinc2_profile(x, a: float, scale: float) -> np.ndarray:
    """``sinc^2(a x / 2 scale)`` for a spreading length ``scale`` (hbar t/m or z/k0)."""
    if a <= 0:
        raise ConfigurationError(f"slit width must be positive, got {a}")
    u = a * np.asarray(x, dtype=float) / (2 * scale)
    # np.sinc(v) = sin(pi v) / (pi v), with the limit 1 at v = 0
    return np.sinc(u / np.pi) ** 2


def cos2_profile(x, d: float, scale: float) -> np.ndarray:
    if d <= 0:
        raise ConfigurationError(f"slit separation must be positive, got {d}")
    return np.cos(d * np.asarray(x, dtype=float) / (2 * scale)) ** 2


def sinc2_pattern(lattice: Lattice, a: float, constants: PhysicalConstants, t: float) -> np.ndarray:
    return sinc2_profile(lattice.x, a, _scale(constants, t))


def cos2_pattern(lattice: Lattice, d: float, constants: PhysicalConstants, t: float) -> np.ndarray:
    return cos2_profile(lattice.x, d, _scale(constants, t))


def sinc2_zeros(a: float, constants: PhysicalConstants, t: float, count: int = 5) -> np.ndarray:
    """Positive zeros ``n 2 pi hbar t / (m a)`` for ``n = 1..count``."""
    return np.arange(1, count + 1) * 2 * np.pi * _scale(constants, t) / a


def cos2_period(d: float, constants: PhysicalConstants, t: float) -> float:
    return 2 * np.pi * _scale(constants, t) / d


@dataclass(frozen=True)
class PatternFeatures:
    maxima: list[float] = field(default_factory=list)
    minima: list[float] = field(default_factory=list)
    fringe_spacing: float | None = None
    central_peak_width: float | None = None

    @property
    def extrema_positions(self) -> list[float]:
        return sorted(self.maxima + self.minima)


def _refine(d, j):
    """Vertex of the parabola through samples j-1, j, j+1, in index units."""
    if j == 0 or j == len(d) - 1:
        return float(j)
    y0, y1, y2 = d[j - 1], d[j], d[j + 1]
    denom = y0 - 2 * y1 + y2
    if denom == 0:
        return float(j)
    return j + 0.5 * (y0 - y2) / denom


def _extrema(d):
    step = np.sign(np.diff(d))
    moving = np.flatnonzero(step)
    maxima, minima = [], []
    for i1, i2 in zip(moving[:-1], moving[1:]):
        s1, s2 = step[i1], step[i2]
        if s1 == s2:
            continue
        if i2 == i1 + 1:
            pos = _refine(d, i2)
        else:
            # flat run from i1+1 to i2
            pos = 0.5 * (i1 + 1 + i2)
        (maxima if s1 > 0 else minima).append((pos, d[i1 + 1]))
    return maxima, minima


def extract_features(
    density,
    lattice: Lattice,
    min_height: float = 0.0,
    window: tuple[float, float] | None = None,
) -> PatternFeatures:
    """Locate interior maxima and minima with sub-grid parabolic refinement.

    Parameters
    ----------
    density : array_like
        Non-negative samples on ``lattice.x``.
    min_height : float
        Ignore maxima below this fraction of the global peak. Minima are kept
        only between the outermost retained maxima.
    window : (float, float), optional
        Only report extrema whose refined position lies in this x interval.
    """
    d = np.asarray(density, dtype=float)
    if d.shape != (lattice.n,):
        raise ConfigurationError(f"density needs {lattice.n} samples, got shape {d.shape}")
    if np.any(d < 0) or not np.all(np.isfinite(d)):
        raise ConfigurationError("density must be finite and non-negative")
    peak = d.max()
    if peak == 0:
        raise DegenerateInputError("cannot extract features of an all-zero density")

    raw_max, raw_min = _extrema(d)
    x0, dx = lattice.x[0], lattice.dx
    lo, hi = window if window is not None else (-np.inf, np.inf)

    maxima = [
        (x0 + p * dx, v) for p, v in raw_max if v >= min_height * peak and lo <= x0 + p * dx <= hi
    ]
    minima = [x0 + p * dx for p, _ in raw_min if lo <= x0 + p * dx <= hi]
    if min_height > 0:
        minima = [m for m in minima if maxima and maxima[0][0] <= m <= maxima[-1][0]]

    max_pos = [p for p, _ in maxima]
    spacing = None
    if len(max_pos) >= 2:
        spacing = (max_pos[-1] - max_pos[0]) / (len(max_pos) - 1)

    width = None
    if maxima:
        top = max(maxima, key=lambda pv: pv[1])[0]
        before = [m for m in minima if m < top]
        after = [m for m in minima if m > top]
        if before and after:
            width = after[0] - before[-1]

    return PatternFeatures(max_pos, minima, spacing, width)
