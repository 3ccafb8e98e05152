"""Relative perimeter and volumes of a candidate cut against a domain."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize

from cheeger_lab.geometry.candidates import Ball, CandidateSet, HalfSpace, RoundedSlab
from cheeger_lab.geometry.constants import signed_cap_volume, sphere_cap_area, unit_ball_volume, unit_sphere_area
from cheeger_lab.geometry.domains import Annulus, Disk, Domain, Rectangle
from cheeger_lab.geometry.intervals import INF, intersect, interval_union_length

DEFAULT_CUT_TOL = 1e-9


@dataclass(frozen=True)
class CutQuantities:
    perimeter: float
    vol_in: float
    vol_out: float
    h: float

    def swapped(self) -> "CutQuantities":
        return CutQuantities(self.perimeter, self.vol_out, self.vol_in, self.h)


def normalized_cut(perimeter: float, vol_in: float, vol_out: float) -> float:
    """perimeter / min(vol_in, vol_out) with 0/0 (and x/0) read as infinity."""
    low = min(vol_in, vol_out)
    if low <= 0.0:
        return INF
    return perimeter / low


def as_halfspace(A: CandidateSet, M: Domain) -> HalfSpace | None:
    """The half-space that agrees with A on M, when there is one."""
    if isinstance(A, HalfSpace):
        return A
    if isinstance(A, RoundedSlab) and A.domain_is_deep(M):
        return A.halfspace
    return None


def ball_intersection_volume(d: int, c1, r1: float, c2, r2: float) -> float:
    """Vol(B(c1, r1) cap B(c2, r2)) as a sum of two caps."""
    dist = float(np.linalg.norm(np.asarray(c1, float) - np.asarray(c2, float)))
    if dist >= r1 + r2:
        return 0.0
    if dist <= abs(r1 - r2):
        return unit_ball_volume(d) * min(r1, r2) ** d
    x = (dist * dist + r1 * r1 - r2 * r2) / (2 * dist)
    return r1**d * signed_cap_volume(d, x / r1) + r2**d * signed_cap_volume(d, (dist - x) / r2)


def sphere_inside_ball_area(d: int, c1, r1: float, c2, r2: float) -> float:
    """(d-1)-measure of the sphere |x - c1| = r1 lying inside the open ball B(c2, r2)."""
    dist = float(np.linalg.norm(np.asarray(c1, float) - np.asarray(c2, float)))
    if dist >= r1 + r2 or dist + r2 <= r1:
        return 0.0
    if dist + r1 <= r2:
        return unit_sphere_area(d) * r1 ** (d - 1)
    x = (dist * dist + r1 * r1 - r2 * r2) / (2 * dist)
    return r1 ** (d - 1) * sphere_cap_area(d, x / r1)


def _halfspace_quantities(A: HalfSpace, M: Domain) -> tuple[float, float, float]:
    u = A.normal_array
    per = M.section_measure(u, A.offset)
    vol_in = M.halfspace_volume(u, A.offset)
    vol_out = M.halfspace_volume(-u, -A.offset)
    return per, vol_in, vol_out


def _circle_arc_inside(M: Domain, center, radius: float, n_grid: int = 4096, tol: float = 1e-13) -> float:
    """Length of the circle |x - center| = radius inside a planar domain (root bracketing)."""
    c = np.asarray(center, float)
    point = lambda th: c + radius * np.array([math.cos(th), math.sin(th)])
    f = lambda th: float(M.signed_distance(point(th))[0])
    grid = np.linspace(0.0, 2 * math.pi, n_grid + 1)
    pts = c + radius * np.stack([np.cos(grid), np.sin(grid)], axis=1)
    vals = M.signed_distance(pts)
    breaks = [0.0]
    for k in range(n_grid):
        if (vals[k] < 0) != (vals[k + 1] < 0):
            breaks.append(optimize.brentq(f, grid[k], grid[k + 1], xtol=tol))
    breaks.append(2 * math.pi)
    total = 0.0
    for a, b in zip(breaks[:-1], breaks[1:]):
        if b > a and f(0.5 * (a + b)) < 0:
            total += (b - a) * radius
    return total


def region_integral(M: Domain, f=None, A: CandidateSet | None = None, tol: float = 1e-11) -> float:
    """Integral of f over M (intersected with A) for planar domains via nested quadrature.

    f takes (x, y) and defaults to 1.  Inner integrals run over vertical
    sections, which are exact interval lists for every planar domain kind.
    """
    if M.dim != 2:
        raise NotImplementedError("region integrals are implemented for planar domains")
    lo, hi = M.bbox()

    def sections(x):
        ivs = M.line_intervals((x, 0.0), (0.0, 1.0))
        if A is not None:
            ivs = intersect(ivs, A.line_intervals((x, 0.0), (0.0, 1.0)))
        return ivs

    def inner(x):
        total = 0.0
        for a, b in sections(x):
            if f is None:
                total += b - a
            else:
                total += integrate.quad(lambda y: f(x, y), a, b, epsabs=tol, epsrel=tol, limit=200)[0]
        return total

    points = _x_breakpoints(M, A)
    points = [p for p in points if lo[0] < p < hi[0]]
    value, _ = integrate.quad(inner, lo[0], hi[0], points=points or None, epsabs=tol, epsrel=tol, limit=400)
    return value


def _x_breakpoints(M: Domain, A: CandidateSet | None) -> list[float]:
    pts: list[float] = []
    c = M.center_array
    if isinstance(M, Rectangle):
        a = M.inner_sides[0] / 2
        pts += [c[0] - a, c[0] + a]
    if isinstance(M, Annulus):
        pts += [c[0] - M.inner, c[0] + M.inner]
    if isinstance(A, Ball):
        pts += [A.center[0] - A.radius, A.center[0], A.center[0] + A.radius]
    if isinstance(A, HalfSpace):
        n = A.normal_array
        p0, v = A.offset * n, np.array([-n[1], n[0]])
        pts += [p0[0] + s * v[0] for iv in M.line_intervals(p0, v) for s in iv]
        if n[1] == 0.0:
            pts.append(A.offset / n[0])
    return sorted(set(pts))


def relative_cut_quantities(A: CandidateSet, M: Domain, tol: float = DEFAULT_CUT_TOL) -> CutQuantities:
    """Vol_{d-1}(dA cap M), Vol_d(A cap M), Vol_d(A^c cap M) and their normalized cut."""
    flip = A.complement
    base = A.complemented() if flip else A
    hs = as_halfspace(base, M)
    if hs is not None:
        per, vin, vout = _halfspace_quantities(hs, M)
    elif isinstance(base, Ball):
        per, vin, vout = _ball_quantities(base, M, tol)
    elif isinstance(base, RoundedSlab):
        raise NotImplementedError("rounded slabs are supported only when the domain lies in their deep region")
    else:
        raise NotImplementedError(f"no cut quantities for {type(base).__name__} against {M.kind}")
    if flip:
        vin, vout = vout, vin
    return CutQuantities(per, vin, vout, normalized_cut(per, vin, vout))


def _ball_quantities(B: Ball, M: Domain, tol: float) -> tuple[float, float, float]:
    d = B.dim
    if isinstance(M, Disk):
        vin = ball_intersection_volume(d, B.center, B.radius, M.center, M.radius)
        per = sphere_inside_ball_area(d, B.center, B.radius, M.center, M.radius)
    elif isinstance(M, Annulus):
        vin = ball_intersection_volume(2, B.center, B.radius, M.center, M.outer) - ball_intersection_volume(
            2, B.center, B.radius, M.center, M.inner
        )
        per = sphere_inside_ball_area(2, B.center, B.radius, M.center, M.outer) - sphere_inside_ball_area(
            2, B.center, B.radius, M.center, M.inner
        )
    elif isinstance(M, Rectangle) and M.dim == 2:
        vin = region_integral(M, A=B, tol=tol * 1e-2)
        per = _circle_arc_inside(M, B.center, B.radius)
    else:
        raise NotImplementedError(f"ball cuts against {M.kind} in dimension {d}")
    return per, vin, M.volume() - vin


def tube_volume(A: CandidateSet, r: float, domain: Domain | None = None) -> float:
    """Volume of the tube of radius r about the boundary of A.

    Balls and rounded slabs use their whole (closed) boundary.  Half-spaces
    are unbounded, so the tube is taken about the relative boundary inside
    ``domain`` (points projecting onto the flat cut), which is 2 r times its
    (d-1)-measure.
    """
    if not 0 <= r < A.certified_reach:
        raise ValueError(f"tube radius {r} must lie in [0, reach={A.certified_reach})")
    if isinstance(A, Ball):
        return unit_ball_volume(A.dim) * ((A.radius + r) ** A.dim - (A.radius - r) ** A.dim)
    if isinstance(A, RoundedSlab):
        if A.dim != 2:
            raise NotImplementedError("rounded-slab tubes are implemented in 2-D")
        return 2 * r * A.boundary_measure()
    if isinstance(A, HalfSpace):
        if domain is None:
            raise ValueError("half-space tubes need a domain to bound the cut")
        return 2 * r * domain.section_measure(A.normal_array, A.offset)
    raise NotImplementedError(type(A).__name__)


def boundary_measure(A: CandidateSet, domain: Domain | None = None) -> float:
    """(d-1)-measure of the boundary matching ``tube_volume``'s convention."""
    if isinstance(A, (Ball, RoundedSlab)):
        return A.boundary_measure()
    if isinstance(A, HalfSpace):
        if domain is None:
            raise ValueError("half-space boundary needs a domain")
        return domain.section_measure(A.normal_array, A.offset)
    raise NotImplementedError(type(A).__name__)
