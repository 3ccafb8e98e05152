import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.spatial import cKDTree

from cheeger_lab.geometry import Ball, HalfSpace, RoundedSlab
from cheeger_lab.geometry.serialize import from_text, to_text

from conftest import grid_area

angles = st.floats(0, 2 * math.pi)


def _slab(angle=0.6, offset=0.1, rounding=0.05, complement=False):
    return RoundedSlab.from_angle(angle, offset, rounding, (-0.5, -0.5), (0.5, 0.5), complement)


def _points(seed=0, k=3000, lo=-0.6, hi=0.6):
    return np.random.default_rng(seed).uniform(lo, hi, (k, 2))


@given(angles, st.floats(-0.5, 0.5), st.booleans())
def test_halfspace_signed_distance_is_exact(angle, offset, comp):
    A = HalfSpace.from_angle(angle, offset, comp)
    pts = _points(1, 200)
    sd = offset - pts @ np.array([math.cos(angle), math.sin(angle)])
    assert np.allclose(A.signed_distance(pts), -sd if comp else sd, atol=1e-15)


@given(st.floats(-0.3, 0.3), st.floats(-0.3, 0.3), st.floats(0.01, 0.5))
def test_ball_contains_agrees_with_signed_distance(cx, cy, radius):
    B = Ball((cx, cy), radius)
    pts = _points(2, 500)
    sd = B.signed_distance(pts)
    assert np.allclose(sd, np.hypot(pts[:, 0] - cx, pts[:, 1] - cy) - radius)
    clear = np.abs(sd) > 1e-12
    assert np.array_equal(B.contains(pts)[clear], (sd < 0)[clear])


@pytest.mark.parametrize("A", [HalfSpace.from_angle(1.0, 0.1), Ball((0.1, -0.2), 0.3), _slab()], ids=lambda A: A.kind)
def test_complement_flips_membership_and_sign(A):
    pts = _points(3)
    B = A.complemented()
    assert B.complemented() == A
    assert np.array_equal(B.contains(pts), ~A.contains(pts))
    assert np.array_equal(B.signed_distance(pts), -A.signed_distance(pts))


def _opening_oracle(S: RoundedSlab, pts, m=900):
    """Signed distance of the opening from a dense lattice of the eroded set."""
    lo = np.asarray(S.box_lo) + S.rounding
    hi = np.asarray(S.box_hi) - S.rounding
    g = np.linspace(-0.7, 0.7, m)
    X, Y = np.meshgrid(g, g)
    grid = np.column_stack([X.ravel(), Y.ravel()])
    in_core = lambda p: np.all((p >= lo) & (p <= hi), axis=1) & (p @ np.asarray(S.normal) >= S.offset + S.rounding)
    core = in_core(grid)
    d_core = cKDTree(grid[core]).query(pts)[0]
    d_out = cKDTree(grid[~core]).query(pts)[0]
    # inside the (convex) eroded set the depth adds to the rounding radius
    return np.where(in_core(pts), -d_out, d_core) - S.rounding


@pytest.mark.parametrize("angle,offset", [(0.6, 0.1), (2.2, -0.25), (0.0, 0.3), (4.0, 0.0)])
def test_rounded_slab_signed_distance_against_lattice_oracle(angle, offset):
    S = _slab(angle, offset, rounding=0.06)
    pts = _points(4, 2000)
    h = 1.4 / 899
    assert np.max(np.abs(S.signed_distance(pts) - _opening_oracle(S, pts))) <= 2 * h


def test_rounded_slab_matches_halfspace_in_deep_region():
    S = _slab(0.9, 0.05, 0.04)
    pts = _points(5, 5000, -0.5, 0.5)
    deep = S.deep_mask(pts)
    assert deep.any() and not deep.all()
    assert np.array_equal(S.contains(pts)[deep], S.halfspace.contains(pts)[deep])
    sd, flat = S.signed_distance(pts)[deep], S.halfspace.signed_distance(pts)[deep]
    near = np.abs(flat) <= S.rounding
    assert np.array_equal(sd[near], flat[near])
    for rho in (0.01, S.rounding):
        assert np.array_equal(sd <= -rho, flat <= -rho)
        assert np.array_equal(sd >= rho, flat >= rho)


@pytest.mark.parametrize("angle,offset", [(0.6, 0.1), (2.2, -0.25)])
def test_rounded_slab_area_and_perimeter(angle, offset):
    S = _slab(angle, offset, rounding=0.06)
    assert S.area() == pytest.approx(grid_area(S.contains, (-0.5, -0.5), (0.5, 0.5)), abs=3e-4)
    # for a convex set rounded by rho, the band |sd| < eps < rho has area 2 eps perimeter
    eps = 0.02
    band = grid_area(lambda p: np.abs(S.signed_distance(p)) < eps, (-0.55, -0.55), (0.55, 0.55), m=3000)
    assert S.boundary_measure() == pytest.approx(band / (2 * eps), rel=5e-3)


def test_rounded_slab_rejects_bad_parameters():
    with pytest.raises(ValueError):
        _slab(rounding=0.0)
    with pytest.raises(ValueError):
        RoundedSlab.from_angle(0.0, 0.0, 0.3, (0, 0), (0.5, 0.5))


@pytest.mark.parametrize(
    "A",
    [HalfSpace.from_angle(0.3, 0.05), HalfSpace.from_angle(0.3, 0.05, True), Ball((0.1, 0.0), 0.25), _slab(), _slab(complement=True)],
    ids=["halfspace", "halfspace-c", "ball", "slab", "slab-c"],
)
def test_threshold_form_reproduces_base_membership(A):
    key, score, threshold = A.threshold_form()
    pts = _points(6)
    base = ~A.contains(pts) if A.complement else A.contains(pts)
    if A.kind == "rounded-slab":
        deep = A.deep_mask(pts)
        pts, base = pts[deep], base[deep]
    assert np.array_equal(score(pts) > threshold, base)


def test_parallel_candidates_share_a_group_key():
    a = HalfSpace.from_angle(0.4, 0.0).threshold_form()[0]
    b = HalfSpace.from_angle(0.4, 0.3, True).threshold_form()[0]
    c = HalfSpace.from_angle(0.5, 0.0).threshold_form()[0]
    assert a == b != c


@pytest.mark.parametrize("A", [HalfSpace.from_angle(1.1, -0.2, True), Ball((0.1, 0.2), 0.3), _slab()], ids=lambda A: A.kind)
def test_text_round_trip(A):
    assert from_text(to_text(A)) == A
