import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cheeger_lab.geometry import Ball, HalfSpace, RoundedSlab, region_integral, relative_cut_quantities, tube_volume
from cheeger_lab.geometry.cuts import normalized_cut
from cheeger_lab.geometry.domains import Annulus, Disk, Rectangle

from conftest import grid_area

UNIT = Disk((0.0, 0.0), 1.0)


def test_diameter_of_unit_disk():
    cq = relative_cut_quantities(HalfSpace((1.0, 0.0), 0.0), UNIT)
    assert cq.perimeter == pytest.approx(2.0, abs=1e-12)
    assert cq.vol_in == pytest.approx(math.pi / 2, abs=1e-12)
    assert cq.vol_out == pytest.approx(math.pi / 2, abs=1e-12)
    assert cq.h == pytest.approx(4 / math.pi, abs=1e-12)


def test_small_interior_ball():
    cq = relative_cut_quantities(Ball((0.0, 0.0), 0.1), UNIT)
    assert cq.perimeter == pytest.approx(0.2 * math.pi, abs=1e-12)
    assert cq.vol_in == pytest.approx(0.01 * math.pi, abs=1e-12)
    assert cq.h == pytest.approx(20.0, abs=1e-9)


def test_candidate_covering_the_domain_is_degenerate():
    cq = relative_cut_quantities(Ball((0.0, 0.0), 2.0), UNIT)
    assert cq.perimeter == 0.0 and cq.vol_out == pytest.approx(0.0, abs=1e-12)
    assert cq.h == math.inf
    assert relative_cut_quantities(HalfSpace((1.0, 0.0), -1.5), UNIT).h == math.inf


def test_normalized_cut_reads_empty_sides_as_infinite():
    assert normalized_cut(0.0, 0.0, 1.0) == math.inf
    assert normalized_cut(1.0, 2.0, 4.0) == 0.5


@given(st.floats(0, 2 * math.pi), st.floats(-0.9, 0.9))
def test_complement_swaps_volumes(angle, offset):
    A = HalfSpace.from_angle(angle, offset)
    a, b = relative_cut_quantities(A, UNIT), relative_cut_quantities(A.complemented(), UNIT)
    assert b == a.swapped()


@given(st.floats(-0.8, 0.8), st.floats(-0.8, 0.8), st.floats(0.05, 0.6))
def test_ball_cut_volumes_add_up(cx, cy, radius):
    cq = relative_cut_quantities(Ball((cx, cy), radius), UNIT)
    assert cq.vol_in + cq.vol_out == pytest.approx(math.pi, abs=1e-12)
    assert 0 <= cq.perimeter <= 2 * math.pi * radius + 1e-12


@pytest.mark.parametrize(
    "M,A",
    [
        (Disk((0.5, 0.5), 0.4), Ball((0.7, 0.6), 0.3)),
        (Annulus((0.5, 0.5), 0.15, 0.4), Ball((0.6, 0.5), 0.2)),
        (Rectangle((0.5, 0.5), (0.8, 0.5)), Ball((0.85, 0.7), 0.2)),
        (Rectangle((0.5, 0.5), (0.6, 0.3), rounding=0.05), HalfSpace.from_angle(0.8, 0.9)),
    ],
    ids=["disk-ball", "annulus-ball", "rectangle-ball", "rounded-halfspace"],
)
def test_volume_in_against_grid(M, A):
    lo, hi = M.bbox()
    cq = relative_cut_quantities(A, M)
    assert cq.vol_in == pytest.approx(grid_area(lambda p: M.contains(p) & A.contains(p), lo, hi), abs=3e-4)


def test_arc_inside_rectangle_for_a_corner_ball():
    # quarter circle of radius 0.2 around the corner (0.1, 0.25) of a sharp rectangle
    M = Rectangle((0.5, 0.5), (0.8, 0.5), rounding=0.0)
    cq = relative_cut_quantities(Ball((0.1, 0.25), 0.2), M)
    assert cq.perimeter == pytest.approx(0.1 * math.pi, abs=1e-9)
    assert cq.vol_in == pytest.approx(0.01 * math.pi, abs=1e-8)


def test_rectangle_bisection():
    cq = relative_cut_quantities(HalfSpace((1.0, 0.0), 0.5), Rectangle((0.5, 0.5), (0.8, 0.5), rounding=0.0))
    assert (cq.perimeter, cq.vol_in, cq.h) == pytest.approx((0.5, 0.2, 2.5), abs=1e-12)


def test_deep_rounded_slab_reduces_to_its_halfspace():
    S = RoundedSlab.from_angle(0.3, 0.1, 0.05, (-1.5, -1.5), (1.5, 1.5))
    assert relative_cut_quantities(S, UNIT) == relative_cut_quantities(S.halfspace, UNIT)
    shallow = RoundedSlab.from_angle(0.3, 0.1, 0.05, (-1.1, -1.1), (1.1, 1.1))
    with pytest.raises(NotImplementedError):
        relative_cut_quantities(shallow, UNIT)


def test_region_integral_first_moment_of_half_disk():
    # centroid of the left half-disk is -4/(3 pi); times its area pi/2
    value = region_integral(UNIT, lambda x, y: x, A=HalfSpace((-1.0, 0.0), 0.0))
    assert value == pytest.approx(-2 / (3 * math.pi) * math.pi, abs=1e-9)
    assert region_integral(UNIT) == pytest.approx(math.pi, abs=1e-9)


def test_tube_volume_of_ball_is_exact_annulus():
    B = Ball((0.0, 0.0), 0.3)
    assert tube_volume(B, 0.1) == pytest.approx(math.pi * (0.16 - 0.04), abs=1e-15)
    with pytest.raises(ValueError):
        tube_volume(B, 0.3)


def test_tube_volume_of_rounded_slab_against_grid():
    S = RoundedSlab.from_angle(0.7, 0.05, 0.08, (-0.5, -0.5), (0.5, 0.5))
    r = 0.05
    oracle = grid_area(lambda p: np.abs(S.signed_distance(p)) < r, (-0.6, -0.6), (0.6, 0.6), m=2400)
    assert tube_volume(S, r) == pytest.approx(oracle, abs=5e-4)


def test_halfspace_tube_is_bounded_by_the_domain():
    A = HalfSpace((1.0, 0.0), 0.0)
    assert tube_volume(A, 0.1, UNIT) == pytest.approx(0.4, abs=1e-12)
    with pytest.raises(ValueError):
        tube_volume(A, 0.1)
