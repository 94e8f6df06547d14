import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from packetoptics.errors import ConfigurationError, DegenerateInputError
from packetoptics.lattice import (
    Field,
    Spectrum,
    forward,
    inverse,
    make_lattice,
    norm_squared,
    normalize,
)
from oracles import direct_dft, relative_l2


def random_field(lattice, seed=0):
    rng = np.random.default_rng(seed)
    return Field(lattice, rng.normal(size=lattice.n) + 1j * rng.normal(size=lattice.n))


class TestMakeLattice:
    def test_four_samples(self):
        lat = make_lattice(4, 4.0)
        assert lat.dx == 1.0
        np.testing.assert_array_equal(lat.x, [-2, -1, 0, 1])
        np.testing.assert_allclose(lat.k, [0, np.pi / 2, -np.pi, -np.pi / 2], atol=1e-15)

    def test_two_samples(self):
        lat = make_lattice(2, 2.0)
        assert lat.dx == 1.0
        np.testing.assert_array_equal(lat.x, [-1, 0])

    def test_nyquist(self):
        lat = make_lattice(4096, 40.96)
        assert lat.dx == pytest.approx(0.01, rel=1e-15)
        assert np.max(np.abs(lat.k)) == pytest.approx(100 * np.pi, rel=1e-13)
        assert lat.k_nyquist == pytest.approx(100 * np.pi, rel=1e-13)
        assert len(lat.x) == len(lat.k) == 4096

    @pytest.mark.parametrize("n", [0, 1, 3, 6, 1000])
    def test_rejects_non_power_of_two(self, n):
        with pytest.raises(ConfigurationError):
            make_lattice(n, 1.0)

    @pytest.mark.parametrize("extent", [0.0, -1.0, np.inf, np.nan])
    def test_rejects_bad_extent(self, extent):
        with pytest.raises(ConfigurationError):
            make_lattice(8, extent)

    def test_grids_are_read_only(self):
        lat = make_lattice(8, 1.0)
        with pytest.raises(ValueError):
            lat.x[0] = 1.0


class TestFieldInvariants:
    def test_length_checked(self):
        with pytest.raises(ConfigurationError):
            Field(make_lattice(8, 1.0), np.zeros(7))

    def test_non_finite_rejected(self):
        values = np.zeros(8, dtype=complex)
        values[3] = np.nan
        with pytest.raises(ConfigurationError):
            Field(make_lattice(8, 1.0), values)
        with pytest.raises(ConfigurationError):
            Spectrum(make_lattice(8, 1.0), np.full(8, np.inf))


class TestForward:
    def test_constant_goes_to_zero_bin(self):
        lat = make_lattice(64, 3.0)
        spec = forward(Field(lat, np.full(lat.n, 2.5)))
        assert spec.values[0] == pytest.approx(2.5 * np.sqrt(lat.n))
        assert np.max(np.abs(spec.values[1:])) < 1e-12

    @pytest.mark.parametrize("j", [1, 5, 31, 32, 40])
    def test_plane_wave_lands_on_its_bin(self, j):
        lat = make_lattice(64, 3.0)
        spec = forward(Field(lat, np.exp(1j * lat.k[j] * lat.x)))
        # exp(-ikx) sign convention: the bin value is +sqrt(n), not a phase
        assert spec.values[j] == pytest.approx(np.sqrt(lat.n), abs=1e-12)
        others = np.delete(spec.power, j)
        assert others.max() < 1e-24 * spec.power[j]

    @pytest.mark.parametrize("n", [2, 8, 64, 512])
    def test_agrees_with_direct_summation(self, n):
        lat = make_lattice(n, 7.0)
        f = random_field(lat, seed=n)
        ref = direct_dft(f.values, lat.x, lat.k)
        assert relative_l2(ref, forward(f).values) <= 1e-10

    @pytest.mark.parametrize("p", [1, 4, 9, 12, 16])
    def test_round_trip(self, p):
        lat = make_lattice(2**p, 1.0)
        f = random_field(lat, seed=p)
        assert relative_l2(f.values, inverse(forward(f)).values) <= 1e-12

    @pytest.mark.parametrize("p", [1, 4, 9, 12, 16])
    def test_parseval(self, p):
        lat = make_lattice(2**p, 1.0)
        f = random_field(lat, seed=p)
        e_x = np.sum(np.abs(f.values) ** 2)
        e_k = np.sum(forward(f).power)
        assert abs(e_x - e_k) / e_x <= 1e-13


class TestInverse:
    def test_zero_bin_gives_constant(self):
        lat = make_lattice(32, 1.0)
        values = np.zeros(32, dtype=complex)
        values[0] = 1.0
        f = inverse(Spectrum(lat, values))
        np.testing.assert_allclose(f.values, 1 / np.sqrt(32), atol=1e-15)

    def test_single_bin_gives_plane_wave(self):
        lat = make_lattice(32, 1.0)
        values = np.zeros(32, dtype=complex)
        values[3] = np.sqrt(32)
        f = inverse(Spectrum(lat, values))
        np.testing.assert_allclose(f.values, np.exp(1j * lat.k[3] * lat.x), atol=1e-13)

    def test_matches_adjoint_of_direct_dft(self):
        lat = make_lattice(128, 2.0)
        rng = np.random.default_rng(3)
        s = rng.normal(size=128) + 1j * rng.normal(size=128)
        ref = np.exp(1j * np.outer(lat.x, lat.k)) @ s / np.sqrt(128)
        assert relative_l2(ref, inverse(Spectrum(lat, s)).values) <= 1e-10


@settings(max_examples=40, deadline=None)
@given(
    p=st.integers(min_value=1, max_value=11),
    seed=st.integers(min_value=0, max_value=2**31),
    extent=st.floats(min_value=1e-3, max_value=1e3),
)
def test_round_trip_and_parseval_property(p, seed, extent):
    lat = make_lattice(2**p, extent)
    f = random_field(lat, seed)
    spec = forward(f)
    assert relative_l2(f.values, inverse(spec).values) <= 1e-12
    e = np.sum(np.abs(f.values) ** 2)
    assert abs(e - np.sum(spec.power)) / e <= 1e-13


class TestNorm:
    def test_zero_field(self):
        assert norm_squared(make_lattice(16, 1.0).zeros()) == 0.0

    def test_unit_rect(self):
        lat = make_lattice(1024, 10.24)
        values = np.zeros(lat.n)
        values[462:562] = 1.0  # 100 samples of dx = 0.01
        assert norm_squared(Field(lat, values)) == pytest.approx(1.0, abs=1e-12)

    def test_normalized_gaussian(self):
        lat = make_lattice(4096, 40.96)
        sigma = 0.7
        psi = (2 * np.pi * sigma**2) ** -0.25 * np.exp(-(lat.x**2) / (4 * sigma**2))
        # analytic integral of |psi|^2 is 1
        assert norm_squared(Field(lat, psi)) == pytest.approx(1.0, abs=1e-9)


class TestNormalize:
    def test_any_field_gets_unit_norm(self):
        f = random_field(make_lattice(256, 3.3), seed=9)
        assert norm_squared(normalize(f)) == pytest.approx(1.0, abs=1e-12)

    def test_idempotent(self):
        f = normalize(random_field(make_lattice(256, 3.3), seed=1))
        np.testing.assert_allclose(normalize(f).values, f.values, rtol=0, atol=1e-15)

    def test_rect_height(self):
        lat = make_lattice(1024, 10.24)
        values = np.zeros(lat.n)
        values[462:562] = 3.0
        out = normalize(Field(lat, values))
        np.testing.assert_allclose(out.values[462:562], 1.0, atol=1e-12)

    def test_zero_field_is_degenerate(self):
        with pytest.raises(DegenerateInputError):
            normalize(make_lattice(16, 1.0).zeros())
