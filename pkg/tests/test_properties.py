import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frft_uncertainty.bounds import (
    bound_frft_single,
    bound_ft_classical,
    bound_ft_sharper,
    bound_report,
    bound_two_frft,
    frft_spread_from_moments,
    product_identity_check,
)
from frft_uncertainty.chirp import GaussianChirp2D, chirp2d_moments, chirp2d_products
from frft_uncertainty.grid import Axis, GridFunction, integrate, l2_norm_sq, phase_density
from frft_uncertainty.moments import MomentReport, abs_covariance, covariance
from frft_uncertainty.transforms import ft_nd

pos = st.floats(0.3, 3.0)
angle = st.floats(-2 * math.pi, 2 * math.pi)
chirps = st.builds(GaussianChirp2D.unit_norm, pos, pos, pos, pos)

AXIS = Axis.symmetric(4.0, 64)  # count * step^2 = 1


@st.composite
def windowed_noise(draw):
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    x = AXIS.coords
    v = (rng.standard_normal(64) + 1j * rng.standard_normal(64)) * np.exp(-x * x / 2)
    return GridFunction((AXIS,), v)


@st.composite
def reports(draw):
    ndim = draw(st.integers(1, 4))
    sx, sw = draw(pos), draw(pos)
    cov = draw(st.floats(-1.0, 1.0))
    return MomentReport(ndim=ndim, norm_sq=draw(st.floats(0.1, 4.0)), x0=(0.0,) * ndim, w0=(0.0,) * ndim,
                        spread_x=sx, spread_w=sw, cov=cov, abs_cov=abs(cov) + draw(st.floats(0.0, 1.0)))


@given(windowed_noise())
def test_abs_cov_dominates_cov(f):
    assert abs_covariance(f) >= abs(covariance(f))


@given(windowed_noise())
def test_ft_parseval_on_self_dual_grid(f):
    assert l2_norm_sq(ft_nd(f)) == pytest.approx(l2_norm_sq(f), rel=1e-12)


@given(windowed_noise(), st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False))
def test_integrate_linear(f, c):
    g = GridFunction(f.axes, np.abs(f.values))
    lhs = integrate(GridFunction(f.axes, c * f.values + g.values))
    assert lhs == pytest.approx(c * integrate(f) + integrate(g), rel=1e-12, abs=1e-12)


@given(windowed_noise())
def test_phase_density_conjugate(f):
    g = GridFunction(f.axes, np.conj(f.values))
    assert np.allclose(phase_density(g, 0).values, -phase_density(f, 0).values, rtol=0, atol=1e-14)


@given(reports(), angle, angle)
def test_two_angle_bound_symmetric(r, a, b):
    assert bound_two_frft(r, a, b) == bound_two_frft(r, b, a)


@given(reports(), angle)
def test_beta_zero_reduction(r, a):
    assert bound_two_frft(r, a, 0.0).main == bound_frft_single(r, a).sharper


@given(reports(), angle, angle)
def test_product_identity(r, a, b):
    scale = (r.spread_x + r.spread_w + abs(r.cov)) ** 2
    assert abs(product_identity_check(r, a, b)) <= 1e-12 * scale


@given(reports())
def test_sharper_above_classical(r):
    assert bound_ft_sharper(r) >= bound_ft_classical(r)


@given(chirps, angle, angle)
def test_closed_form_products_respect_bounds(p, a, b):
    r = chirp2d_moments(p)
    prod = chirp2d_products(p, a, b)
    tol = 1e-12
    assert prod.xw >= bound_ft_sharper(r) * (1 - tol)
    assert prod.xu >= bound_frft_single(r, a).sharper * (1 - tol)
    assert prod.uu >= bound_two_frft(r, a, b).main * (1 - tol)


@given(chirps, angle, angle)
def test_analytic_report_has_no_violations(p, a, b):
    assert bound_report(chirp2d_moments(p), a, b).violations == ()


@given(pos, pos, angle, angle)
def test_hierarchy_when_cov_vanishes(z, e, a, b):
    r = chirp2d_moments(GaussianChirp2D.unit_norm(z, z, e, e))
    assert r.cov == 0.0
    two = bound_two_frft(r, a, b)
    assert two.main >= two.zhang


@given(chirps, angle)
def test_frft_spread_is_positive(p, a):
    assert frft_spread_from_moments(chirp2d_moments(p), a) > 0
