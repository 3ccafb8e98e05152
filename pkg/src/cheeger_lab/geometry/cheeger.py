"""Known Cheeger constants and Cheeger-set orbits, plus L1 recovery scores."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from cheeger_lab.geometry.candidates import Ball, CandidateSet, HalfSpace
from cheeger_lab.geometry.constants import unit_ball_volume
from cheeger_lab.geometry.cuts import as_halfspace, relative_cut_quantities
from cheeger_lab.geometry.domains import Disk, Domain, Rectangle

ORBIT_ANGLES = 72
L1_GRID = 2048


@dataclass(frozen=True)
class CheegerTarget:
    value: float
    representative: CandidateSet


def known_cheeger(M: Domain) -> CheegerTarget:
    """Cheeger constant of a disk (diametral cut) or rounded rectangle (short-axis bisection)."""
    if isinstance(M, Disk):
        if M.dim < 2:
            raise ValueError("Cheeger constant of an interval is not modelled")
        d = M.dim
        value = 2 * unit_ball_volume(d - 1) / (unit_ball_volume(d) * M.radius)
        normal = np.zeros(d)
        normal[0] = 1.0
        return CheegerTarget(value, HalfSpace(normal, M.center[0]))
    if isinstance(M, Rectangle):
        axis = int(np.argmax(M.sides))
        normal = np.zeros(M.dim)
        normal[axis] = 1.0
        A = HalfSpace(normal, M.center[axis])
        return CheegerTarget(relative_cut_quantities(A, M).h, A)
    raise ValueError(f"no known Cheeger constant for {M.kind}")


def cheeger_orbit(M: Domain, n_angles: int = ORBIT_ANGLES) -> list[CandidateSet]:
    """A finite list of Cheeger sets of M (sampled rotations for the disk)."""
    target = known_cheeger(M)
    if isinstance(M, Disk) and M.dim == 2:
        c = M.center_array
        out = []
        for k in range(n_angles):
            th = 2 * math.pi * k / n_angles
            u = np.array([math.cos(th), math.sin(th)])
            out.append(HalfSpace(u, float(c @ u)))
        return out
    if isinstance(M, Rectangle):
        return [target.representative, target.representative.complemented()]
    return [target.representative, target.representative.complemented()]


def halfplane_cheeger_sweep(M: Domain, n_angles: int = 36, xatol: float = 1e-10):
    """Minimum of h(A; M) over half-planes: bounded 1-D minimization in the offset per angle.

    Returns (value, angle, offset).  Used as an oracle for H(M) on disks,
    their inner parallel sets and rectangles.
    """
    best = (math.inf, 0.0, 0.0)
    for k in range(n_angles):
        th = math.pi * k / n_angles
        u = np.array([math.cos(th), math.sin(th)])
        lo, hi = M.extent_along(u)
        mid = 0.5 * (lo + hi)
        h = lambda t: relative_cut_quantities(HalfSpace(u, t), M).h
        # the minimizer sits at the balanced cut for the symmetric domains used here
        res = optimize.minimize_scalar(h, bounds=(mid - 0.45 * (hi - lo), mid + 0.45 * (hi - lo)), method="bounded", options={"xatol": xatol})
        cands = [(res.fun, res.x), (h(mid), mid)]
        for val, t in cands:
            if val < best[0]:
                best = (val, th, t)
    return best


def _halfspace_interval(hs: HalfSpace, u: np.ndarray):
    """Interval in the coordinate <x, u> occupied by hs, for hs with normal +-u."""
    dot = float(np.dot(hs.normal, u))
    if dot > 0:
        lo, hi = hs.offset, math.inf
    else:
        lo, hi = -math.inf, -hs.offset
    if hs.complement:
        return [(-math.inf, lo), (hi, math.inf)]
    return [(lo, hi)]


def _interval_volume(M: Domain, u, lo: float, hi: float) -> float:
    if hi <= lo:
        return 0.0
    top = M.halfspace_volume(u, lo) if lo > -math.inf else M.volume()
    bottom = M.halfspace_volume(u, hi) if hi < math.inf else 0.0
    return top - bottom


def _set_volume(M: Domain, u, intervals) -> float:
    return sum(_interval_volume(M, u, a, b) for a, b in intervals if b > a)


def l1_distance(R: CandidateSet, A: CandidateSet, M: Domain, grid: int = L1_GRID) -> float:
    """Vol((R cap M) symmetric-difference (A cap M)).

    Closed form for two parallel half-spaces; otherwise midpoint quadrature on
    a grid x grid lattice over the bounding box of a planar domain.
    """
    hr, ha = as_halfspace(R, M), as_halfspace(A, M)
    if hr is not None and ha is not None and abs(abs(float(np.dot(hr.normal, ha.normal))) - 1.0) < 1e-15:
        u = np.asarray(hr.normal)
        ir, ia = _halfspace_interval(hr, u), _halfspace_interval(ha, u)
        both = [(max(a0, b0), min(a1, b1)) for a0, a1 in ir for b0, b1 in ia]
        vol_r, vol_a, vol_both = _set_volume(M, u, ir), _set_volume(M, u, ia), _set_volume(M, u, both)
        return max(vol_r + vol_a - 2 * vol_both, 0.0)
    return _grid_l1(R, [A], M, grid)[0]


def _grid_l1(R: CandidateSet, others: list[CandidateSet], M: Domain, grid: int) -> list[float]:
    if M.dim != 2:
        raise NotImplementedError("grid L1 scores are implemented for planar domains")
    lo, hi = M.bbox()
    hx, hy = (hi - lo) / grid
    xs = lo[0] + hx * (np.arange(grid) + 0.5)
    totals = np.zeros(len(others))
    for start in range(0, grid, 256):
        ys = lo[1] + hy * (np.arange(start, min(start + 256, grid)) + 0.5)
        X, Y = np.meshgrid(xs, ys)
        pts = np.column_stack([X.ravel(), Y.ravel()])
        inside = M.contains(pts)
        pts = pts[inside]
        in_r = R.contains(pts)
        for k, A in enumerate(others):
            totals[k] += np.count_nonzero(in_r != A.contains(pts))
    return list(totals * hx * hy)


def orbit_l1(R: CandidateSet, M: Domain, grid: int = L1_GRID) -> tuple[float, CandidateSet]:
    """Smallest L1 distance from R cap M to a Cheeger set of M, and that Cheeger set.

    For a disk and a half-space-like R the aligned half-disk is optimal
    (Vol(X delta Y) >= |Vol X - Vol Y| with equality for nested sets), so the
    score is exact; other cases minimize over the sampled orbit.
    """
    hr = as_halfspace(R, M)
    if isinstance(M, Disk) and M.dim == 2 and hr is not None:
        u = np.asarray(hr.normal)
        aligned = HalfSpace(u, float(M.center_array @ u), complement=hr.complement)
        return l1_distance(hr, aligned, M), aligned
    orbit = cheeger_orbit(M)
    if hr is not None and all(as_halfspace(A, M) is not None for A in orbit) and not isinstance(M, Disk):
        scores = [l1_distance(R, A, M, grid) for A in orbit]
    else:
        scores = _grid_l1(R, orbit, M, grid)
    k = int(np.argmin(scores))
    return float(scores[k]), orbit[k]
