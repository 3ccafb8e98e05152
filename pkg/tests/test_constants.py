import math

import pytest
from hypothesis import given, strategies as st
from scipy import integrate

from cheeger_lab.geometry.constants import (
    Constants,
    cap_volume,
    gamma_constant,
    signed_cap_volume,
    sphere_cap_area,
    unit_ball_volume,
    unit_sphere_area,
)


def test_unit_ball_volume_small_dims():
    assert unit_ball_volume(1) == pytest.approx(2.0, abs=1e-15)
    assert unit_ball_volume(2) == pytest.approx(math.pi, abs=1e-15)
    assert unit_ball_volume(3) == pytest.approx(4 * math.pi / 3, abs=1e-15)


@pytest.mark.parametrize("d", [0, 21, -3])
def test_unit_ball_volume_rejects_out_of_range(d):
    with pytest.raises(ValueError):
        unit_ball_volume(d)


def test_circular_segment_against_planar_quadrature():
    # area of {x^2 + y^2 <= 1, x >= 1/2} integrated directly in the plane
    oracle = integrate.dblquad(lambda y, x: 1.0, 0.5, 1.0, lambda x: -math.sqrt(1 - x * x), lambda x: math.sqrt(1 - x * x))[0]
    assert cap_volume(2, 0.5) == pytest.approx(oracle, abs=1e-10)
    assert cap_volume(2, 0.5) == pytest.approx(math.acos(0.5) - 0.5 * math.sqrt(0.75), abs=1e-12)


@pytest.mark.parametrize("d", range(1, 8))
def test_cap_endpoints(d):
    assert abs(cap_volume(d, 0.0) - unit_ball_volume(d) / 2) <= 1e-12
    assert abs(cap_volume(d, 1.0)) <= 1e-12


@pytest.mark.parametrize("eta", [-0.1, 1.01, math.nan])
def test_cap_rejects_heights_outside_unit_interval(eta):
    with pytest.raises(ValueError):
        cap_volume(2, eta)


@given(st.integers(1, 10), st.floats(0, 1), st.floats(0, 1))
def test_cap_volume_nonincreasing(d, a, b):
    lo, hi = min(a, b), max(a, b)
    assert cap_volume(d, hi) <= cap_volume(d, lo) + 1e-15


@given(st.integers(1, 6), st.floats(-1, 1))
def test_signed_cap_pairs_to_whole_ball(d, eta):
    assert signed_cap_volume(d, eta) + signed_cap_volume(d, -eta) == pytest.approx(unit_ball_volume(d), abs=1e-12)


def test_gamma_closed_forms():
    assert gamma_constant(1) == pytest.approx(0.5, abs=1e-12)
    assert gamma_constant(2) == pytest.approx(2 / 3, abs=1e-12)
    assert gamma_constant(3) == pytest.approx(math.pi / 4, abs=1e-12)


@pytest.mark.parametrize("d", range(1, 11))
def test_gamma_matches_lower_sphere_closed_form(d):
    # integrating the cap height by parts gives gamma_d = omega_{d-1} / (d + 1)
    oracle = (unit_ball_volume(d - 1) if d > 1 else 1.0) / (d + 1)
    assert abs(gamma_constant(d) - oracle) <= 1e-9
    assert 0 < gamma_constant(d) < unit_ball_volume(d) / 2


def test_sphere_cap_area_hemisphere_and_full():
    for d in (2, 3, 4):
        assert sphere_cap_area(d, 0.0) == pytest.approx(unit_sphere_area(d) / 2, abs=1e-12)
        assert sphere_cap_area(d, -1.0) == pytest.approx(unit_sphere_area(d), abs=1e-12)
    # circle: arc of the unit circle with x >= 1/2 has angle 2 pi / 3
    assert sphere_cap_area(2, 0.5) == pytest.approx(2 * math.pi / 3, abs=1e-12)


def test_constants_record():
    c = Constants.for_dim(2)
    assert (c.d, c.omega_d, c.gamma_d) == (2, unit_ball_volume(2), gamma_constant(2))
    assert c.cut_scale_factor == pytest.approx(math.pi / (2 / 3))
