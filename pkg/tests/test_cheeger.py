import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cheeger_lab.geometry import (
    Ball,
    HalfSpace,
    cheeger_orbit,
    halfplane_cheeger_sweep,
    inner_parallel,
    known_cheeger,
    l1_distance,
    orbit_l1,
)
from cheeger_lab.geometry.constants import cap_volume
from cheeger_lab.geometry.domains import Disk, Rectangle
from cheeger_lab.geometry.lemmas import quarter_ball_witness, witness_is_valid

from conftest import grid_area

UNIT = Disk((0.0, 0.0), 1.0)


@pytest.mark.parametrize("R", [0.3, 1.0, 2.5])
def test_disk_cheeger_constant(R):
    assert known_cheeger(Disk((0.0, 0.0), R)).value == pytest.approx(4 / (math.pi * R), rel=1e-15)


def test_three_dimensional_ball():
    # 2 * omega_2 / (omega_3 * R) = 3 / (2R)
    assert known_cheeger(Disk((0.0, 0.0, 0.0), 1.0)).value == pytest.approx(1.5, rel=1e-15)


@pytest.mark.parametrize("r", [0.05, 0.2, 0.5])
def test_inner_parallel_cheeger_ratio(r):
    R = 1.0
    ratio = known_cheeger(inner_parallel(UNIT, r)).value / known_cheeger(UNIT).value
    assert abs(ratio - R / (R - r)) <= 1e-12


def test_halfplane_sweep_recovers_known_values():
    value, _, offset = halfplane_cheeger_sweep(UNIT, n_angles=6)
    assert value == pytest.approx(4 / math.pi, abs=1e-8)
    assert offset == pytest.approx(0.0, abs=1e-4)
    M = Rectangle((0.5, 0.5), (0.8, 0.5), rounding=0.02)
    assert halfplane_cheeger_sweep(M, n_angles=12)[0] == pytest.approx(known_cheeger(M).value, abs=1e-8)


def test_orbit_members_are_cheeger_sets():
    for A in cheeger_orbit(UNIT, n_angles=8):
        assert A.signed_distance(np.zeros((1, 2)))[0] == pytest.approx(0.0, abs=1e-15)


def _strip(a):
    """Area of {0 < x < a} in the unit disk."""
    return math.pi / 2 - cap_volume(2, a)


def test_l1_between_parallel_halfspaces():
    A, B = HalfSpace((1.0, 0.0), 0.0), HalfSpace((1.0, 0.0), 0.3)
    assert l1_distance(A, B, UNIT) == pytest.approx(_strip(0.3), abs=1e-12)
    assert l1_distance(A, A.complemented(), UNIT) == pytest.approx(math.pi, abs=1e-12)
    assert l1_distance(A, HalfSpace((-1.0, 0.0), 0.0, complement=True), UNIT) == pytest.approx(0.0, abs=1e-12)


def test_l1_grid_path_against_independent_grid():
    A, B = HalfSpace.from_angle(0.4, 0.1), Ball((0.2, 0.1), 0.5)
    oracle = grid_area(lambda p: UNIT.contains(p) & (A.contains(p) != B.contains(p)), (-1, -1), (1, 1), m=1500)
    assert l1_distance(A, B, UNIT) == pytest.approx(oracle, abs=3e-3)


@given(st.floats(0, 2 * math.pi), st.floats(-0.6, 0.6))
def test_orbit_l1_for_halfspaces_is_the_offset_strip(angle, offset):
    score, closest = orbit_l1(HalfSpace.from_angle(angle, offset), UNIT)
    assert score == pytest.approx(_strip(abs(offset)), abs=1e-10)
    assert closest.offset == pytest.approx(0.0, abs=1e-15)


@given(st.floats(0, 2 * math.pi), st.floats(0, 0.999), st.floats(0.01, 0.2), st.floats(2.0, 10.0))
def test_quarter_ball_witness_fits(theta, rad, r, scale):
    alpha = min(1.0, r * scale)
    x = rad * np.array([math.cos(theta), math.sin(theta)])
    z, radius = quarter_ball_witness(UNIT, x, alpha, r)
    assert radius == alpha / 4
    assert witness_is_valid(UNIT, x, alpha, r, z, radius)


def test_quarter_ball_witness_near_the_center_uses_the_center():
    z, _ = quarter_ball_witness(UNIT, (0.05, 0.0), 0.8, 0.2)
    assert np.array_equal(z, [0.0, 0.0])


def test_quarter_ball_witness_rejects_bad_radii():
    with pytest.raises(ValueError):
        quarter_ball_witness(UNIT, (0.0, 0.0), 0.1, 0.1)
