"""Means of the pair kernels for two independent uniform points of a planar domain.

    volume kernel     phi(x, y)    = 1/2 (1_A(x) + 1_A(y)) 1{|x - y| <= r}
    perimeter kernel  phibar(x, y) = 1/2 (1_A(x) 1_{A^c}(y) + 1_A(y) 1_{A^c}(x)) 1{|x - y| <= r}

By symmetry E phi = P(X in A, |X - Y| <= r) and E phibar = P(X in A, Y in A^c, |X - Y| <= r).
"""

from __future__ import annotations

import math

from scipy import integrate

from cheeger_lab.geometry.candidates import CandidateSet
from cheeger_lab.geometry.cuts import as_halfspace, ball_intersection_volume
from cheeger_lab.geometry.domains import Disk, Domain


def disk_distance_cdf(s: float, radius: float = 1.0) -> float:
    """P(|X - Y| <= s) for X, Y independent and uniform on a disk."""
    if s <= 0:
        return 0.0
    x = s / radius
    if x >= 2:
        return 1.0
    root = math.sqrt(1 - x * x / 4)
    return 1 + (2 / math.pi) * ((x * x - 1) * math.acos(x / 2) - (x / 2) * (1 + x * x / 2) * root)


def _require_disk_cut(A: CandidateSet, M: Domain) -> tuple[float, bool]:
    """Offset of A's cut measured from the disk center along its normal, and the complement flag."""
    if not (isinstance(M, Disk) and M.dim == 2):
        raise NotImplementedError("kernel means are implemented for planar disks")
    hs = as_halfspace(A, M)
    if hs is None:
        raise NotImplementedError("kernel means are implemented for half-space cuts")
    return hs.offset - float(hs.normal_array @ M.center_array), hs.complement


def volume_kernel_mean(A: CandidateSet, M: Domain, r: float, tol: float = 1e-12) -> float:
    """E phi for a half-plane cut of a disk.

    The overlap Vol(B(x, r) cap M) depends on |x - c| only, so the mean is a
    radial integral weighted by the arc of each circle |x - c| = rho lying in A.
    """
    t, flip = _require_disk_cut(A, M)
    R = M.radius
    if t == 0.0:
        # the reflection through the cut swaps A and A^c
        return 0.5 * disk_distance_cdf(r, R)

    def integrand(rho):
        if rho == 0.0:
            return 0.0
        arc = 2 * rho * math.acos(min(max(t / rho, -1.0), 1.0))
        if flip:
            arc = 2 * math.pi * rho - arc
        return arc * ball_intersection_volume(2, (rho, 0.0), r, (0.0, 0.0), R)

    points = [p for p in (R - r, abs(t)) if 0 < p < R]
    value = integrate.quad(integrand, 0.0, R, points=points or None, epsabs=tol, epsrel=tol, limit=200)[0]
    return value / M.volume() ** 2


def _lens_strip_area(R: float, t: float, a: float, b: float, tol: float) -> float:
    """Area of {|x| < R, |x + (-a, b)| < R, t < x1 < t + a} for a > 0."""

    def chord(x1):
        w1 = R * R - x1 * x1
        w2 = R * R - (x1 - a) ** 2
        if w1 <= 0 or w2 <= 0:
            return 0.0
        w1, w2 = math.sqrt(w1), math.sqrt(w2)
        return max(0.0, min(w1, w2 - b) - max(-w1, -w2 - b))

    lo, hi = max(t, a - R), min(t + a, R)
    if hi <= lo:
        return 0.0
    return integrate.quad(chord, lo, hi, epsabs=tol, epsrel=1e-8, limit=100)[0]


def perimeter_kernel_mean(A: CandidateSet, M: Domain, r: float, tol: float = 1e-10) -> float:
    """E phibar for a half-plane cut of a disk.

    Writing Y = X + z, the mean is (1/tau^2) times the integral over |z| <= r
    with z pointing out of A of the area of {x in A cap M : x + z in A^c cap M},
    a lens of two disks cut by a strip of width |<z, u>|.  phibar is
    unchanged under A -> A^c, so only the offset matters.
    """
    t, _ = _require_disk_cut(A, M)
    R = M.radius

    def over_angle(rho):
        # z = rho (cos th, sin th) with th in (pi/2, pi); th -> -th doubles it
        f = lambda th: _lens_strip_area(R, t, -rho * math.cos(th), rho * math.sin(th), 0.01 * tol)
        return 2 * rho * integrate.quad(f, 0.5 * math.pi, math.pi, epsabs=tol, epsrel=1e-8, limit=100)[0]

    value = integrate.quad(over_angle, 0.0, r, epsabs=tol, epsrel=1e-8, limit=100)[0]
    return value / M.volume() ** 2
