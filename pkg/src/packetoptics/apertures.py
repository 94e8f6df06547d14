"""Initial wave functions: slits, Gaussians and fields read from CSV.

Slit windows are sampled by cell coverage: each sample takes the fraction of
its cell ``[x - dx/2, x + dx/2]`` that lies inside the slit. A slit edge that
falls on a sample therefore gets weight 1/2, which keeps centred apertures
exactly even and puts the zeros of the discrete spectrum at ``k = 2 pi n / a``.
"""
from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigurationError, FieldFormatError
from .lattice import Field, Lattice, normalize

MARGIN_FRACTION = 0.25
GAUSSIAN_SUPPORT_SIGMAS = 4.0


class Kind(str, enum.Enum):
    RECT = "Rect"
    DOUBLE_SLIT = "DoubleSlit"
    GAUSSIAN = "Gaussian"
    FROM_FILE = "FromFile"


@dataclass(frozen=True)
class ApertureSpec:
    """Parameters of an aperture; only the ones relevant to ``kind`` are read.

    ``w`` defaults to ``d / 20`` for a double slit.
    """

    kind: Kind
    a: float | None = None
    d: float | None = None
    w: float | None = None
    sigma: float | None = None
    x_center: float = 0.0
    path: str | None = None

    def __post_init__(self):
        try:
            object.__setattr__(self, "kind", Kind(self.kind))
        except ValueError:
            names = ", ".join(k.value for k in Kind)
            raise ConfigurationError(
                f"unknown aperture kind {self.kind!r}; expected one of {names}"
            ) from None
        kind = self.kind
        if kind is Kind.RECT:
            _positive("a", self.a)
        elif kind is Kind.DOUBLE_SLIT:
            _positive("d", self.d)
            if self.w is None:
                object.__setattr__(self, "w", self.d / 20)
            _positive("w", self.w)
            if not self.d > self.w:
                raise ConfigurationError(
                    f"slit separation d={self.d} must exceed slit width w={self.w}"
                )
        elif kind is Kind.GAUSSIAN:
            _positive("sigma", self.sigma)
            if not np.isfinite(self.x_center):
                raise ConfigurationError("x_center must be finite")
        elif not self.path:
            raise ConfigurationError("FromFile aperture needs a path")

    def support(self) -> tuple[float, float]:
        """Interval outside of which the aperture is (effectively) zero."""
        if self.kind is Kind.RECT:
            return -self.a / 2, self.a / 2
        if self.kind is Kind.DOUBLE_SLIT:
            half = (self.d + self.w) / 2
            return -half, half
        if self.kind is Kind.GAUSSIAN:
            r = GAUSSIAN_SUPPORT_SIGMAS * self.sigma
            return self.x_center - r, self.x_center + r
        raise ConfigurationError("support of a FromFile aperture depends on its data")


def _positive(name, value):
    if value is None or not np.isfinite(value) or value <= 0:
        raise ConfigurationError(f"aperture parameter {name} must be positive, got {value}")


def check_margin(lo: float, hi: float, lattice: Lattice) -> None:
    """Reject support reaching into the outer quarter of the domain on either side."""
    limit = (0.5 - MARGIN_FRACTION) * lattice.extent
    if lo < -limit - 1e-12 * lattice.extent or hi > limit + 1e-12 * lattice.extent:
        raise ConfigurationError(
            f"aperture support [{lo:g}, {hi:g}] leaves less than "
            f"{MARGIN_FRACTION:.0%} margin on the domain [{-lattice.extent / 2:g}, "
            f"{lattice.extent / 2:g}]"
        )


def window(lattice: Lattice, center: float, width: float) -> np.ndarray:
    """Cell-coverage samples of a unit-height window."""
    x, dx = lattice.x, lattice.dx
    lo = np.clip(x - dx / 2, center - width / 2, center + width / 2)
    hi = np.clip(x + dx / 2, center - width / 2, center + width / 2)
    return (hi - lo) / dx


def build(spec: ApertureSpec, lattice: Lattice) -> Field:
    """Sample ``spec`` on ``lattice`` and normalize to unit probability."""
    if spec.kind is Kind.FROM_FILE:
        field = load_field(spec.path, lattice)
        nz = np.flatnonzero(field.values)
        if nz.size:
            check_margin(lattice.x[nz[0]], lattice.x[nz[-1]], lattice)
        return normalize(field)

    check_margin(*spec.support(), lattice)
    if spec.kind is Kind.RECT:
        values = window(lattice, 0.0, spec.a)
    elif spec.kind is Kind.DOUBLE_SLIT:
        if spec.w < 2 * lattice.dx:
            raise ConfigurationError(
                f"slit width w={spec.w:g} is below two grid cells (dx={lattice.dx:g})"
            )
        values = window(lattice, -spec.d / 2, spec.w) + window(lattice, spec.d / 2, spec.w)
    else:
        values = np.exp(-((lattice.x - spec.x_center) ** 2) / (4 * spec.sigma**2))
    return normalize(Field(lattice, values))


# -- CSV field files ---------------------------------------------------------


def format_field_csv(field: Field, density: bool = True, header: str | None = None) -> str:
    """Render a field as ``x,re,im[,density]`` rows with round-trip precision."""
    buf = io.StringIO()
    if header:
        for line in header.splitlines():
            buf.write(f"# {line}\n")
    cols = ["x", "re", "im"] + (["density"] if density else [])
    buf.write(",".join(cols) + "\n")
    x = field.lattice.x
    v = field.values
    dens = field.density
    for j in range(field.lattice.n):
        row = [x[j], v[j].real, v[j].imag] + ([dens[j]] if density else [])
        buf.write(",".join(f"{val:.17g}" for val in row) + "\n")
    return buf.getvalue()


def load_field(path, lattice: Lattice) -> Field:
    """Read a field CSV written by :func:`format_field_csv`.

    Lines starting with ``#`` are comments. Extra columns after ``im`` are
    ignored. The field is returned as stored, without normalization.
    """
    text = Path(path).read_text()
    rows = [
        (lineno, line)
        for lineno, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not rows:
        raise FieldFormatError(f"{path}: no header row")
    lineno, head = rows[0]
    cols = [c.strip() for c in head.split(",")]
    if cols[:3] != ["x", "re", "im"]:
        raise FieldFormatError(f"{path}:{lineno}: expected header 'x,re,im', got {head!r}")
    data = rows[1:]
    if len(data) != lattice.n:
        raise FieldFormatError(
            f"{path}: {len(data)} data rows, lattice has n={lattice.n}"
        )
    values = np.empty(lattice.n, dtype=complex)
    for j, (lineno, line) in enumerate(data):
        cells = next(csv.reader([line]))
        if len(cells) < 3:
            raise FieldFormatError(f"{path}:{lineno}: expected at least 3 columns")
        try:
            re, im = float(cells[1]), float(cells[2])
        except ValueError:
            raise FieldFormatError(f"{path}:{lineno}: non-numeric entry in {line!r}") from None
        if not (np.isfinite(re) and np.isfinite(im)):
            raise FieldFormatError(f"{path}:{lineno}: non-finite entry")
        values[j] = complex(re, im)
    return Field(lattice, values)
