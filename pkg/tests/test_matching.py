import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from packetoptics.apertures import ApertureSpec, format_field_csv
from packetoptics.dispersion import DispersionSpec, PhysicalConstants, transit_time
from packetoptics.errors import ConfigurationError, TotalEvanescenceError, WraparoundError
from packetoptics.lattice import Field, make_lattice
from packetoptics.matching import (
    DEFAULT_TOLERANCE,
    MatchReport,
    compare_densities,
    match_fields,
    run_match,
)
from packetoptics.patterns import extract_features

K0 = 2 * np.pi
UNIT = PhysicalConstants()
FIELDS = {"z", "k0", "v_g", "t", "l2_rel", "linf_peak", "evanescent_fraction", "verdict", "mode"}

# a Gaussian packet that stays well inside the domain, so the edge guard stays on
GAUSS_LAT = make_lattice(2048, 128.0)
GAUSS = ApertureSpec("Gaussian", sigma=1.0)


def spec(family, k0=K0, constants=UNIT):
    return DispersionSpec(family, constants, k0)


class TestCompareDensities:
    def test_identical(self):
        d = np.exp(-np.linspace(-3, 3, 101) ** 2)
        assert compare_densities(d, d) == (0.0, 0.0)

    def test_scale_invariant(self):
        d = np.exp(-np.linspace(-3, 3, 101) ** 2)
        gap = compare_densities(d, 2 * d)
        assert gap.l2_rel == 0.0 and gap.linf_peak == 0.0

    def test_one_cell_shift(self):
        lat = make_lattice(4096, 20.0)
        d1 = np.exp(-lat.x**2 / (2 * 0.05**2))
        d2 = np.roll(d1, 1)
        slope = np.exp(-0.5) / 0.05  # max |d1'| of the Gaussian
        # first-order in dx / sigma ~ 0.1
        assert compare_densities(d1, d2).linf_peak == pytest.approx(lat.dx * slope, rel=1e-2)

    def test_errors(self):
        with pytest.raises(ConfigurationError):
            compare_densities(np.ones(3), np.ones(4))
        with pytest.raises(ConfigurationError):
            compare_densities(np.zeros(3), np.ones(3))
        with pytest.raises(ConfigurationError):
            compare_densities(np.ones(3), -np.ones(3))

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.floats(0, 1e3), min_size=2, max_size=50).filter(lambda v: max(v) > 0))
    def test_metrics_nonnegative_and_symmetric_linf(self, values):
        d1 = np.array(values)
        d2 = d1[::-1].copy()
        g12, g21 = compare_densities(d1, d2), compare_densities(d2, d1)
        assert g12.l2_rel >= 0 and g12.linf_peak >= 0
        assert g12.linf_peak == g21.linf_peak
        assert g12.linf_peak <= 1.0


class TestIdentity:
    @pytest.mark.parametrize(
        "family, constants, k0",
        [
            ("DeBroglie", UNIT, K0),
            ("DeBroglie", PhysicalConstants(hbar=0.5, m=3.0), K0),
            ("ElectromagneticParaxial", UNIT, K0),
            ("ElectromagneticExact", PhysicalConstants(c=3.0), K0),
            ("KleinGordonParaxial", UNIT, 5.0),
            ("KleinGordonExact", PhysicalConstants(m=2.0, c=0.5), 5.0),
        ],
    )
    def test_fresnel_identity(self, family, constants, k0):
        r = run_match(GAUSS, spec(family, k0, constants), GAUSS_LAT, z=30.0)
        assert r.linf_peak <= 1e-10
        assert r.passed

    @pytest.mark.parametrize(
        "aperture",
        [ApertureSpec("Rect", a=2.0), ApertureSpec("DoubleSlit", d=2.0, w=0.25), GAUSS],
    )
    def test_every_aperture(self, aperture):
        lat = make_lattice(4096, 64.0)
        r = run_match(aperture, spec("KleinGordonParaxial", 5.0), lat, z=3.0, edge_tol=None)
        assert r.linf_peak <= 1e-10

    def test_transit_time_consistency(self):
        for family, k0 in [("DeBroglie", 3.0), ("ElectromagneticParaxial", 3.0), ("KleinGordonParaxial", 5.0)]:
            s = spec(family, k0)
            r = run_match(GAUSS, s, GAUSS_LAT, z=17.0)
            assert r.t * r.v_g == pytest.approx(17.0, rel=1e-12)
            assert r.t == pytest.approx(transit_time(s, 17.0), rel=1e-12)

    def test_kg_time(self):
        r = run_match(GAUSS, spec("KleinGordonParaxial", 5.0), GAUSS_LAT, z=10.0)
        assert r.v_g == pytest.approx(5 / math.sqrt(26), rel=1e-14)
        assert r.t == pytest.approx(10 * math.sqrt(26) / 5, rel=1e-14)


class TestExactMode:
    def test_wide_angle_gaussian_shows_gap(self):
        # sigma chosen so that 1% of the spectral power lies beyond 0.1 k0
        sigma = 1.8214 / (0.1 * math.sqrt(2) * K0)
        assert math.erfc(0.1 * K0 * sigma * math.sqrt(2)) == pytest.approx(0.01, rel=1e-3)
        lat = make_lattice(4096, 128.0)
        r = run_match(ApertureSpec("Gaussian", sigma=sigma), spec("DeBroglie"), lat, z=20.0, mode="exact")
        assert r.linf_peak > 1e-6
        assert r.mode == "exact"
        fresnel = run_match(ApertureSpec("Gaussian", sigma=sigma), spec("DeBroglie"), lat, z=20.0)
        assert fresnel.linf_peak < 1e-12

    def test_gap_shrinks_as_aperture_widens(self):
        # far-field regime: z is past a^2 / wavelength for the widest slit
        lat = make_lattice(8192, 512.0)
        wavelength = 2 * np.pi / K0
        gaps = [
            run_match(ApertureSpec("Rect", a=m * wavelength), spec("DeBroglie"), lat, z=1000.0,
                      mode="exact", edge_tol=None).l2_rel
            for m in (5, 10, 20)
        ]
        assert gaps[0] > gaps[1] > gaps[2]

    def test_default_tolerances(self):
        assert DEFAULT_TOLERANCE == {"fresnel": 1e-9, "exact": 5e-3}
        r = run_match(GAUSS, spec("DeBroglie"), GAUSS_LAT, z=30.0, mode="exact")
        assert r.passed


class TestMismatch:
    def test_mistimed_double_slit_fails(self):
        lat = make_lattice(2**16, 655.36)
        ap = ApertureSpec("DoubleSlit", d=1.6, w=0.08)
        r = run_match(ap, spec("DeBroglie"), lat, z=3.0, time_scale=0.9)
        assert r.linf_peak >= 1e-3
        assert r.verdict == "fail"
        assert r.t == pytest.approx(0.9 * 3.0 / r.v_g)

    def test_scale_covariance(self):
        lat = make_lattice(2**16, 655.36)
        ap = ApertureSpec("DoubleSlit", d=1.6, w=0.08)
        spacings = []
        for z in (1.5, 3.0):
            r, f = match_fields(ap, spec("DeBroglie"), lat, z)
            assert r.passed
            spacings.append(extract_features(f.evolved.density, lat, min_height=0.5).fringe_spacing)
        assert spacings[1] / spacings[0] == pytest.approx(2.0, rel=1e-3)


class TestReport:
    def test_json_fields(self):
        r = run_match(GAUSS, spec("DeBroglie"), GAUSS_LAT, z=30.0)
        doc = json.loads(r.to_json())
        assert set(doc) == FIELDS
        assert doc["verdict"] in ("pass", "fail")
        assert MatchReport.from_json(r.to_json()) == r
        assert 0.0 <= doc["evanescent_fraction"] <= 1.0

    def test_tolerance_override(self):
        r = run_match(GAUSS, spec("DeBroglie"), GAUSS_LAT, z=30.0, mode="exact", tol=1e-12)
        assert r.verdict == "fail"


class TestErrors:
    def test_nonpositive_z(self):
        for z in (0.0, -1.0):
            with pytest.raises(ConfigurationError):
                run_match(GAUSS, spec("DeBroglie"), GAUSS_LAT, z=z)

    def test_missing_k0(self):
        with pytest.raises(ConfigurationError):
            run_match(GAUSS, DispersionSpec("DeBroglie", UNIT), GAUSS_LAT, z=1.0)

    def test_bad_mode(self):
        with pytest.raises(ConfigurationError):
            run_match(GAUSS, spec("DeBroglie"), GAUSS_LAT, z=1.0, mode="fraunhofer")

    def test_total_evanescence(self, tmp_path):
        lat = make_lattice(256, 64.0)
        # Gaussian envelope on a carrier far beyond k0, cut to the allowed support
        env = np.exp(-(lat.x**2) / 4) * (np.abs(lat.x) < lat.extent / 4)
        path = tmp_path / "evanescent.csv"
        path.write_text(format_field_csv(Field(lat, env * np.exp(8j * lat.x))))
        ap = ApertureSpec("FromFile", path=str(path))
        with pytest.raises(TotalEvanescenceError):
            run_match(ap, spec("DeBroglie", k0=1.0), lat, z=100.0, mode="exact")

    def test_wraparound(self):
        lat = make_lattice(256, 16.0)
        with pytest.raises(WraparoundError):
            run_match(ApertureSpec("Gaussian", sigma=0.5), spec("DeBroglie"), lat, z=200.0)

    def test_guard_trips_on_sharp_rect_fixture(self):
        # sharp edges put power at every k; at this z the tail reaches the boundary
        lat = make_lattice(4096, 1.0)
        k0 = 400 * np.pi
        with pytest.raises(WraparoundError):
            run_match(ApertureSpec("Rect", a=0.1), spec("DeBroglie", k0), lat, z=2.0)
        r = run_match(ApertureSpec("Rect", a=0.1), spec("DeBroglie", k0), lat, z=2.0, edge_tol=None)
        assert r.linf_peak <= 1e-9
