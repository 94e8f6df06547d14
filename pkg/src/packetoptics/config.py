"""Flat ``section.key`` experiment configuration.

A config file is a single JSON object whose keys are dotted names such as
``"lattice.n"`` or ``"aperture.kind"``. Anything left out takes the value in
:data:`DEFAULTS`. Errors name the offending key and, when it came from a
file, the line it sits on.
"""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from pathlib import Path

from .apertures import ApertureSpec, Kind, build as build_aperture
from .dispersion import DispersionSpec, PhysicalConstants
from .errors import ConfigurationError, PacketOpticsError
from .lattice import Lattice, make_lattice

DEFAULTS: dict[str, object] = {
    "lattice.n": 4096,
    "lattice.extent": 1.0,
    "constants.hbar": 1.0,
    "constants.m": 1.0,
    "constants.c": 1.0,
    "dispersion.family": "DeBroglie",
    "dispersion.k0": None,
    "aperture.kind": "Rect",
    "aperture.a": None,
    "aperture.d": None,
    "aperture.w": None,
    "aperture.sigma": None,
    "aperture.x_center": 0.0,
    "aperture.path": None,
    "run.t": None,
    "run.z": None,
    "run.mode": "fresnel",
    "run.tolerance": None,
    "run.time_scale": 1.0,
    "run.edge_tol": 1e-6,
    "run.fraunhofer_threshold": 0.05,
    "run.fringe_min_height": 0.2,
    "output.prefix": "",
    "output.plot": False,
}

NUMERIC_KEYS = {
    key for key, value in DEFAULTS.items() if isinstance(value, float) and key != "output.plot"
} | {
    "lattice.n", "dispersion.k0", "aperture.a", "aperture.d", "aperture.w",
    "aperture.sigma", "run.t", "run.z", "run.tolerance",
}


class ConfigError(ConfigurationError):
    """A configuration problem tied to a key (and possibly a file line)."""

    def __init__(self, key: str | None, message: str, where: str | None = None):
        self.key = key
        self._args = (key, message, where)
        prefix = ""
        if where:
            prefix += f"{where}: "
        if key:
            prefix += f"{key}: "
        super().__init__(prefix + message)

    def __reduce__(self):
        # keeps the error intact across sweep worker processes
        return type(self), self._args


@dataclass
class ExperimentConfig:
    """Resolved configuration plus the objects built from it."""

    values: dict
    lattice: Lattice
    constants: PhysicalConstants
    dispersion: DispersionSpec
    aperture: ApertureSpec
    source: str | None = None
    raw: dict | None = None

    def __getitem__(self, key):
        return self.values[key]

    def to_json(self) -> str:
        return json.dumps(self.values, sort_keys=True, separators=(",", ":"))


def _key_line(text: str, key: str) -> int | None:
    needle = json.dumps(key)
    for lineno, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return lineno
    return None


def parse_value(raw: str):
    """Interpret an override value as JSON, falling back to a bare string."""
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        return raw


def load_config(path=None, overrides=()) -> ExperimentConfig:
    """Read ``path`` (optional), apply ``key=value`` overrides, validate."""
    values = dict(DEFAULTS)
    origins: dict[str, str] = {}
    text = None
    if path is not None:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(None, f"cannot read config: {exc.strerror}", str(path)) from None
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(None, exc.msg, f"{path}:{exc.lineno}:{exc.colno}") from None
        if not isinstance(doc, dict):
            raise ConfigError(None, "top level must be a JSON object", str(path))
        for key, value in doc.items():
            line = _key_line(text, key)
            where = f"{path}:{line}" if line else str(path)
            if key not in DEFAULTS:
                raise ConfigError(key, "unknown key", where)
            values[key] = value
            origins[key] = where
    for item in overrides:
        key, sep, raw = item.partition("=")
        key = key.strip()
        if not sep:
            raise ConfigError(None, f"override {item!r} is not of the form key=value", "--override")
        if key not in DEFAULTS:
            raise ConfigError(key, "unknown key", "--override")
        values[key] = parse_value(raw)
        origins[key] = "--override"
    return resolve(values, origins, source=str(path) if path else None)


def resolve(values: dict, origins: dict | None = None, source=None) -> ExperimentConfig:
    origins = origins or {}

    def fail(key, message):
        raise ConfigError(key, message, origins.get(key))

    for key in NUMERIC_KEYS:
        value = values[key]
        if value is None:
            continue
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            fail(key, f"expected a number, got {value!r}")
        if not math.isfinite(value):
            fail(key, f"expected a finite number, got {value!r}")

    def build(keys, factory):
        try:
            return factory()
        except PacketOpticsError as exc:
            # attribute the failure to the key the message names
            names = sorted(keys, key=lambda k: -len(k.split(".", 1)[1]))
            key = next(
                (k for k in names if re.search(rf"\b{k.split('.', 1)[1]}\b", str(exc))),
                keys[0],
            )
            fail(key, str(exc))

    lattice = build(
        ["lattice.n", "lattice.extent"],
        lambda: make_lattice(values["lattice.n"], values["lattice.extent"]),
    )
    constants = build(
        ["constants.hbar", "constants.m", "constants.c"],
        lambda: PhysicalConstants(
            values["constants.hbar"], values["constants.m"], values["constants.c"]
        ),
    )
    dispersion = build(
        ["dispersion.family", "dispersion.k0"],
        lambda: DispersionSpec(values["dispersion.family"], constants, values["dispersion.k0"]),
    )
    aperture = build(
        ["aperture.kind", "aperture.a", "aperture.d", "aperture.w", "aperture.sigma",
         "aperture.x_center", "aperture.path"],
        lambda: ApertureSpec(
            values["aperture.kind"],
            a=values["aperture.a"],
            d=values["aperture.d"],
            w=values["aperture.w"],
            sigma=values["aperture.sigma"],
            x_center=values["aperture.x_center"],
            path=values["aperture.path"],
        ),
    )
    size_key = {Kind.RECT: "aperture.a", Kind.DOUBLE_SLIT: "aperture.d", Kind.GAUSSIAN: "aperture.sigma"}
    if aperture.kind is not Kind.FROM_FILE:
        build(
            [size_key[aperture.kind], "aperture.w", "aperture.x_center"],
            lambda: build_aperture(aperture, lattice),
        )
    if values["run.mode"] not in ("fresnel", "exact", "fraunhofer"):
        fail("run.mode", f"expected fresnel, exact or fraunhofer, got {values['run.mode']!r}")
    for key in ("run.t", "run.z"):
        if values[key] is not None and values[key] < 0:
            fail(key, f"must be non-negative, got {values[key]}")
    for key in ("run.time_scale", "run.fraunhofer_threshold"):
        if values[key] <= 0:
            fail(key, f"must be positive, got {values[key]}")
    for key in ("run.tolerance", "run.edge_tol"):
        if values[key] is not None and values[key] < 0:
            fail(key, f"must be non-negative, got {values[key]}")
    if not isinstance(values["output.plot"], bool):
        fail("output.plot", f"expected true or false, got {values['output.plot']!r}")
    if not isinstance(values["output.prefix"], str):
        fail("output.prefix", f"expected a string, got {values['output.prefix']!r}")
    raw = dict(values)
    # resolved values carry the w default the aperture filled in
    values = dict(values)
    if aperture.kind is Kind.DOUBLE_SLIT:
        values["aperture.w"] = aperture.w
    return ExperimentConfig(values, lattice, constants, dispersion, aperture, source, raw)
