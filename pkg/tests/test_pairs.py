import math

import numpy as np
import pytest

from cheeger_lab.geometry import Ball, HalfSpace
from cheeger_lab.geometry.domains import Disk, Rectangle
from cheeger_lab.geometry.pairs import disk_distance_cdf, perimeter_kernel_mean, volume_kernel_mean
from cheeger_lab.sampling import sample_uniform

UNIT = Disk((0.0, 0.0), 1.0)


def _pairs(M, k, seed):
    pts = sample_uniform(M, 2 * k, seed).points
    return pts[:k], pts[k:]


def test_distance_cdf_endpoints_and_monte_carlo():
    assert disk_distance_cdf(0.0) == 0.0 and disk_distance_cdf(2.0) == 1.0
    x, y = _pairs(UNIT, 400_000, 1)
    dist = np.linalg.norm(x - y, axis=1)
    for s in (0.1, 0.5, 1.3):
        p = disk_distance_cdf(s)
        assert abs(np.mean(dist <= s) - p) <= 4 * math.sqrt(p * (1 - p) / len(dist))
    # scale covariance
    assert disk_distance_cdf(0.6, radius=2.0) == pytest.approx(disk_distance_cdf(0.3), rel=1e-15)


def test_distance_cdf_small_s():
    # P(|X - Y| <= s) ~ pi s^2 / pi for small s
    assert disk_distance_cdf(1e-4) == pytest.approx(1e-8, rel=1e-3)


@pytest.mark.parametrize("A,r", [(HalfSpace((1.0, 0.0), 0.0), 0.3), (HalfSpace.from_angle(0.7, 0.35), 0.2), (HalfSpace((1.0, 0.0), -0.4, True), 0.5)])
def test_volume_kernel_against_monte_carlo(A, r):
    x, y = _pairs(UNIT, 500_000, 2)
    phi = 0.5 * (A.contains(x).astype(float) + A.contains(y)) * (np.linalg.norm(x - y, axis=1) <= r)
    se = phi.std() / math.sqrt(len(phi))
    assert abs(phi.mean() - volume_kernel_mean(A, UNIT, r)) <= 4 * se


def test_volume_kernel_is_continuous_at_the_center_cut():
    r = 0.3
    assert volume_kernel_mean(HalfSpace((1.0, 0.0), 1e-9), UNIT, r) == pytest.approx(
        volume_kernel_mean(HalfSpace((1.0, 0.0), 0.0), UNIT, r), abs=1e-8
    )


def test_volume_kernel_small_radius_limit():
    # Vol(A) omega_2 r^2 / tau^2 = r^2 / 2 for a half-disk
    r = 1e-3
    assert volume_kernel_mean(HalfSpace((1.0, 0.0), 0.0), UNIT, r) == pytest.approx(r * r / 2, rel=2e-3)


@pytest.mark.parametrize("A,r", [(HalfSpace((1.0, 0.0), 0.0), 0.3), (HalfSpace.from_angle(2.0, -0.3), 0.25)])
def test_perimeter_kernel_against_monte_carlo(A, r):
    x, y = _pairs(UNIT, 500_000, 3)
    ax, ay = A.contains(x), A.contains(y)
    phibar = 0.5 * ((ax & ~ay).astype(float) + (ay & ~ax)) * (np.linalg.norm(x - y, axis=1) <= r)
    se = phibar.std() / math.sqrt(len(phibar))
    assert abs(phibar.mean() - perimeter_kernel_mean(A, UNIT, r)) <= 4 * se


def test_perimeter_kernel_small_radius_limit():
    # gamma_2 r^3 Per / tau^2 with Per = 2, up to O(r) curvature corrections
    r = 0.01
    assert perimeter_kernel_mean(HalfSpace((1.0, 0.0), 0.0), UNIT, r) == pytest.approx(2 * (2 / 3) * r**3 / math.pi**2, rel=2e-2)


def test_perimeter_kernel_ignores_orientation():
    A = HalfSpace.from_angle(0.4, 0.2)
    assert perimeter_kernel_mean(A, UNIT, 0.2) == pytest.approx(perimeter_kernel_mean(A.complemented(), UNIT, 0.2), rel=1e-12)


@pytest.mark.parametrize(
    "A,M", [(Ball((0.0, 0.0), 0.5), UNIT), (HalfSpace((1.0, 0.0), 0.5), Rectangle((0.5, 0.5), (0.8, 0.5)))], ids=["ball", "rectangle"]
)
def test_kernel_means_refuse_unsupported_cuts(A, M):
    with pytest.raises(NotImplementedError):
        volume_kernel_mean(A, M, 0.1)
    with pytest.raises(NotImplementedError):
        perimeter_kernel_mean(A, M, 0.1)
