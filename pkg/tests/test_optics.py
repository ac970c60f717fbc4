import math
from dataclasses import replace

import pytest

from frft_uncertainty.bounds import bound_frft_single, classical_constant
from frft_uncertainty.chirp import GaussianChirp2D, chirp2d_moments
from frft_uncertainty.errors import DomainError
from frft_uncertainty.optics import (
    OpticalSetup,
    Variant,
    bandwidth_floor,
    frft_bandwidth_floor,
    optical_spread_floor,
)

from conftest import ALPHA


@pytest.fixture
def general():
    return chirp2d_moments(GaussianChirp2D.unit_norm(0.7, 1.9, 0.4, 2.6))


def top(r):
    return classical_constant(r.ndim, r.norm_sq) + r.abs_cov**2


class TestSetup:
    def test_fresnel_angle(self):
        assert OpticalSetup.fresnel(2.0, 4.0).alpha == pytest.approx(math.pi / 4, abs=1e-15)

    def test_lens_derives_focal(self):
        st = OpticalSetup.lens(2.0, 2.0)
        assert st.alpha == pytest.approx(math.pi / 6, abs=1e-15)
        assert st.focal == pytest.approx(4.0 * math.tan(math.pi / 12), rel=1e-15)

    def test_lens_accepts_consistent_triple(self):
        z = 4.0 * math.tan(math.pi / 12)
        assert OpticalSetup.lens(2.0, 2.0, z).alpha == pytest.approx(math.pi / 6, abs=1e-12)

    def test_lens_obtuse_branch(self):
        z = 4.0 * math.tan(5 * math.pi / 12)
        assert OpticalSetup.lens(2.0, 2.0, z).alpha == pytest.approx(5 * math.pi / 6, abs=1e-12)

    @pytest.mark.parametrize("s,d,z", [(1.0, 0.8, 1.5), (2.0, 2.0, 1.0), (1.0, 0.5, 0.2)])
    def test_lens_rejects_inconsistent(self, s, d, z):
        with pytest.raises(DomainError):
            OpticalSetup.lens(s, d, z)

    def test_lens_tolerance_edge(self):
        z = 4.0 * math.tan(math.pi / 12)
        OpticalSetup.lens(2.0, 2.0, z * (1 + 1e-12))
        with pytest.raises(DomainError):
            OpticalSetup.lens(2.0, 2.0, z * (1 + 1e-6))

    def test_lens_rejects_long_distance(self):
        with pytest.raises(DomainError):
            OpticalSetup.lens(1.0, 1.5)

    @pytest.mark.parametrize("s,d", [(0.0, 1.0), (1.0, -1.0), (math.inf, 1.0)])
    def test_rejects_bad_geometry(self, s, d):
        with pytest.raises(ValueError):
            OpticalSetup.fresnel(s, d)

    def test_fresnel_has_no_focal(self):
        with pytest.raises(ValueError):
            OpticalSetup(Variant.FRESNEL, 1.0, 1.0, 0.5)

    def test_to_dict(self):
        d = OpticalSetup.fresnel(1.0, 1.0).to_dict()
        assert d["variant"] == "fresnel" and d["z"] is None


class TestBandwidth:
    def test_case_a(self, case_a):
        f = bandwidth_floor(chirp2d_moments(case_a))
        assert f.freq_floor == pytest.approx(0.275330295910584 / 0.75, abs=1e-12)

    def test_real_function_floors_coincide(self, general):
        f = bandwidth_floor(replace(general, abs_cov=0.0, cov=0.0))
        assert f.freq_floor == f.freq_floor_classical

    def test_case_b_equality(self, case_b):
        r = chirp2d_moments(case_b)
        assert r.spread_w == pytest.approx(bandwidth_floor(r).freq_floor, abs=1e-15)

    def test_zero_spread(self, general):
        with pytest.raises(DomainError):
            bandwidth_floor(replace(general, spread_x=0.0))


class TestFrftBandwidth:
    def test_case_a(self, case_a):
        f = frft_bandwidth_floor(chirp2d_moments(case_a), ALPHA)
        assert f.floor_main == pytest.approx(0.347122721932938 / 0.75, abs=1e-12)

    @pytest.mark.parametrize("a", [0.3, 1.0, ALPHA, 3.0, -2.0])
    def test_chain_when_cov_zero(self, case_a, a):
        f = frft_bandwidth_floor(chirp2d_moments(case_a), a)
        assert f.floor_main >= f.floor_real >= f.floor_classical

    def test_zero_angle(self, case_a):
        r = chirp2d_moments(case_a)
        f = frft_bandwidth_floor(r, 0.0)
        assert f.floor_main == pytest.approx(r.spread_x, rel=1e-15)
        assert f.floor_classical == 0.0

    def test_below_frft_spread(self, general):
        for a in (0.2, 1.1, 2.5):
            s, c = math.sin(a), math.cos(a)
            su = c * c * general.spread_x + s * s * general.spread_w + 2 * s * c * general.cov
            assert su >= frft_bandwidth_floor(general, a).floor_main - 1e-15


class TestOpticalFloor:
    @pytest.mark.parametrize("s,d", [(1.0, 0.3), (1.5, 2.0), (0.7, 10.0)])
    def test_fresnel_cross_check(self, general, s, d):
        st = OpticalSetup.fresnel(s, d)
        expected = bound_frft_single(general, st.alpha).sharper / general.spread_x
        assert optical_spread_floor(st, general) == pytest.approx(expected, rel=0, abs=1e-12)
        assert optical_spread_floor(st, general) == pytest.approx(
            frft_bandwidth_floor(general, st.alpha).floor_main, rel=0, abs=1e-12
        )

    def test_fresnel_short_distance(self, general):
        got = optical_spread_floor(OpticalSetup.fresnel(1.0, 1e-9), general)
        assert got == pytest.approx(general.spread_x, rel=1e-6)

    def test_fresnel_long_distance(self, general):
        got = optical_spread_floor(OpticalSetup.fresnel(1.0, 1e9), general)
        assert got == pytest.approx(top(general) / general.spread_x, rel=1e-6)

    def test_fresnel_continuous(self, general):
        f = lambda d: optical_spread_floor(OpticalSetup.fresnel(1.0, d), general)
        assert f(1.0 + 1e-9) == pytest.approx(f(1.0), abs=1e-7)

    def test_lens_d_equals_z(self, general):
        # with d = z, 2t / (1 + t^2) = t for t = z / s^2 forces z = s^2
        st = OpticalSetup.lens(1.0, 1.0, 1.0)
        assert st.dist == st.focal
        got = optical_spread_floor(st, general)
        assert got == pytest.approx(top(general) / general.spread_x, rel=1e-15)

    def test_lens_matches_frft_floor(self, general):
        st = OpticalSetup.lens(2.0, 2.0)
        expected = frft_bandwidth_floor(general, st.alpha).floor_main
        assert optical_spread_floor(st, general) == pytest.approx(expected, rel=1e-12)

    def test_zero_spread(self, general):
        with pytest.raises(DomainError):
            optical_spread_floor(OpticalSetup.fresnel(1.0, 1.0), replace(general, spread_x=0.0))
