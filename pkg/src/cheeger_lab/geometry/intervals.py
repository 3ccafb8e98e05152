"""Line clipping and 1-D interval-list helpers used by the section integrals."""

from __future__ import annotations

import math

import numpy as np

Interval = tuple[float, float]
INF = math.inf


def clip_line_box(p, v, lo, hi) -> Interval | None:
    """Parameter range of p + s v inside the closed box [lo, hi] (Liang-Barsky)."""
    s0, s1 = -INF, INF
    for k in range(len(p)):
        if v[k] == 0.0:
            if p[k] < lo[k] or p[k] > hi[k]:
                return None
            continue
        a = (lo[k] - p[k]) / v[k]
        b = (hi[k] - p[k]) / v[k]
        if a > b:
            a, b = b, a
        s0, s1 = max(s0, a), min(s1, b)
        if s0 > s1:
            return None
    return (s0, s1)


def clip_line_disk(p, v, c, radius: float) -> Interval | None:
    """Parameter range of p + s v inside the closed ball B(c, radius)."""
    w = np.asarray(p, float) - np.asarray(c, float)
    a = float(np.dot(v, v))
    b = float(np.dot(w, v))
    cc = float(np.dot(w, w)) - radius * radius
    disc = b * b - a * cc
    if disc <= 0.0:
        return None
    root = math.sqrt(disc)
    return ((-b - root) / a, (-b + root) / a)


def normalize(intervals) -> list[Interval]:
    """Sort and merge overlapping intervals, dropping empty ones."""
    out: list[list[float]] = []
    for a, b in sorted(iv for iv in intervals if iv[1] > iv[0]):
        if out and a <= out[-1][1]:
            out[-1][1] = max(out[-1][1], b)
        else:
            out.append([a, b])
    return [(a, b) for a, b in out]


def intersect(xs, ys) -> list[Interval]:
    out = []
    for a0, a1 in xs:
        for b0, b1 in ys:
            lo, hi = max(a0, b0), min(a1, b1)
            if hi > lo:
                out.append((lo, hi))
    return normalize(out)


def complement(xs) -> list[Interval]:
    out = []
    cursor = -INF
    for a, b in normalize(xs):
        if a > cursor:
            out.append((cursor, a))
        cursor = max(cursor, b)
    if cursor < INF:
        out.append((cursor, INF))
    return out


def interval_union_length(xs) -> float:
    return float(sum(b - a for a, b in normalize(xs)))
