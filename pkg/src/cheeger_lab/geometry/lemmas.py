"""Geometric predicates behind the volume lemmas, checked on disks."""

from __future__ import annotations

import numpy as np

from cheeger_lab.geometry.domains import Disk


def quarter_ball_witness(M: Disk, x, alpha: float, r: float) -> tuple[np.ndarray, float]:
    """Center and radius alpha/4 of a ball inside B(x, alpha) cap M_r.

    Requires 0 < 2r <= alpha <= reach(dM) and x in M.  For a disk the
    rolling ball of radius reach(dM) through any x is the disk itself, so its
    center is M's center y.  The witness is z = x + (r + alpha/4)(y - x)/|y - x|;
    when |y - x| < r + alpha/4 that step overshoots y and z = y is used
    instead, which always works since alpha/4 <= reach - r there.
    """
    x = np.asarray(x, float)
    if not 0 < 2 * r <= alpha <= M.reach():
        raise ValueError("need 0 < 2r <= alpha <= reach(dM)")
    y = M.center_array
    gap = float(np.linalg.norm(y - x))
    step = r + alpha / 4
    if gap <= step:
        return y.copy(), alpha / 4
    return x + step * (y - x) / gap, alpha / 4


def witness_is_valid(M: Disk, x, alpha: float, r: float, z, radius: float, slack: float = 1e-12) -> bool:
    """B(z, radius) inside B(x, alpha) and inside M_r (a disk of radius R - r)."""
    x = np.asarray(x, float)
    z = np.asarray(z, float)
    in_ball = np.linalg.norm(z - x) + radius <= alpha + slack
    in_inner = np.linalg.norm(z - M.center_array) + radius <= M.radius - r + slack
    return bool(in_ball and in_inner)
