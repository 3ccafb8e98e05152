"""Candidate cut regions: half-spaces, balls and rounded slabs."""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field, replace

import numpy as np

from cheeger_lab.geometry.constants import unit_ball_volume
from cheeger_lab.geometry.domains import Domain, _as_points, _unit
from cheeger_lab.geometry.intervals import INF, clip_line_disk, complement

Interval = tuple[float, float]


class CandidateSet(ABC):
    """Open set A (or its complement when ``complement`` is set).

    ``signed_distance`` is negative inside the represented set, so a point x
    carries a ball B(x, rho) inside the set iff signed_distance(x) <= -rho
    and inside the complement iff signed_distance(x) >= rho.
    """

    kind: str = ""
    complement: bool

    @property
    @abstractmethod
    def dim(self) -> int: ...

    @property
    @abstractmethod
    def certified_reach(self) -> float: ...

    @abstractmethod
    def _base_contains(self, pts: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def _base_signed_distance(self, pts: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def _base_line_intervals(self, p, v) -> list[Interval]: ...

    @abstractmethod
    def params(self) -> dict: ...

    def contains(self, points) -> np.ndarray:
        inside = self._base_contains(_as_points(points, self.dim))
        return ~inside if self.complement else inside

    def signed_distance(self, points) -> np.ndarray:
        sd = self._base_signed_distance(_as_points(points, self.dim))
        return -sd if self.complement else sd

    def line_intervals(self, p, v) -> list[Interval]:
        ivs = self._base_line_intervals(p, v)
        return complement(ivs) if self.complement else ivs

    def complemented(self) -> "CandidateSet":
        return replace(self, complement=not self.complement)

    def threshold_form(self):
        """(group key, score function, threshold) with base membership == score > threshold.

        Candidates sharing a group key share the score function, which lets a
        family be evaluated by one sort per group.  None when not available.
        """
        return None

    def describe(self) -> str:
        parts = [self.kind]
        for key, value in self.params().items():
            if isinstance(value, tuple):
                value = "/".join(f"{v:.17g}" for v in value)
            elif isinstance(value, float):
                value = f"{value:.17g}"
            parts.append(f"{key}={value}")
        if self.complement:
            parts.append("complement=true")
        return ";".join(parts)


@dataclass(frozen=True)
class HalfSpace(CandidateSet):
    """Open half-space {x : <x, normal> > offset}."""

    normal: tuple[float, ...]
    offset: float
    complement: bool = False
    kind: str = field(default="halfspace", init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "normal", tuple(float(c) for c in _unit(self.normal)))
        object.__setattr__(self, "offset", float(self.offset))

    @classmethod
    def from_angle(cls, angle: float, offset: float, complement: bool = False) -> "HalfSpace":
        return cls((math.cos(angle), math.sin(angle)), offset, complement)

    @property
    def dim(self):
        return len(self.normal)

    @property
    def normal_array(self):
        return np.asarray(self.normal)

    @property
    def certified_reach(self):
        return INF

    def project(self, pts):
        return pts @ self.normal_array

    def _base_contains(self, pts):
        return self.project(pts) > self.offset

    def _base_signed_distance(self, pts):
        return self.offset - self.project(pts)

    def _base_line_intervals(self, p, v):
        a = float(np.dot(p, self.normal))
        b = float(np.dot(v, self.normal))
        if b == 0.0:
            return [(-INF, INF)] if a > self.offset else []
        s = (self.offset - a) / b
        return [(s, INF)] if b > 0 else [(-INF, s)]

    def threshold_form(self):
        return ("proj", self.normal), self.project, self.offset

    def params(self):
        return {"normal": self.normal, "offset": self.offset}


@dataclass(frozen=True)
class Ball(CandidateSet):
    """Open ball B(center, radius)."""

    center: tuple[float, ...]
    radius: float
    complement: bool = False
    kind: str = field(default="ball", init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        if not self.radius > 0:
            raise ValueError("ball radius must be positive")

    @property
    def dim(self):
        return len(self.center)

    @property
    def certified_reach(self):
        return self.radius

    def volume(self):
        return unit_ball_volume(self.dim) * self.radius**self.dim

    def boundary_measure(self):
        return self.dim * unit_ball_volume(self.dim) * self.radius ** (self.dim - 1)

    def _sq(self, pts):
        return np.sum((pts - np.asarray(self.center)) ** 2, axis=1)

    def _neg_sq(self, pts):
        return -self._sq(pts)

    def _base_contains(self, pts):
        return self._sq(pts) < self.radius * self.radius

    def _base_signed_distance(self, pts):
        return np.sqrt(self._sq(pts)) - self.radius

    def _base_line_intervals(self, p, v):
        iv = clip_line_disk(np.asarray(p, float), np.asarray(v, float), np.asarray(self.center), self.radius)
        return [iv] if iv is not None else []

    def threshold_form(self):
        # -|x - c|^2 > -radius^2 is bit-identical to |x - c|^2 < radius^2
        return ("sqdist", self.center), self._neg_sq, -(self.radius * self.radius)

    def params(self):
        return {"center": self.center, "radius": self.radius}


def _clip_polygon(poly: list[np.ndarray], normal: np.ndarray, level: float) -> list[np.ndarray]:
    """Sutherland-Hodgman clip of a convex polygon to {<x, normal> >= level}."""
    out = []
    m = len(poly)
    for k in range(m):
        a, b = poly[k], poly[(k + 1) % m]
        fa, fb = float(a @ normal) - level, float(b @ normal) - level
        if fa >= 0:
            out.append(a)
        if (fa >= 0) != (fb >= 0):
            out.append(a + (b - a) * (fa / (fa - fb)))
    return out


def _segment_distances(pts: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    ab = b - a
    denom = float(ab @ ab)
    if denom == 0.0:
        return np.sqrt(np.sum((pts - a) ** 2, axis=1))
    s = np.clip((pts - a) @ ab / denom, 0.0, 1.0)
    proj = a + s[:, None] * ab
    return np.sqrt(np.sum((pts - proj) ** 2, axis=1))


@dataclass(frozen=True)
class RoundedSlab(CandidateSet):
    """Morphological opening by a ball of radius ``rounding`` of {<x, normal> > offset} within a box.

    Inside the ``deep`` region (points at least 3 * rounding from every box
    face) the set and every ball condition of radius <= rounding coincide
    with those of the plain half-space, and so does the signed distance
    within +-rounding of the cut.  Elsewhere the signed distance comes from
    the eroded polygon and is exact in 2-D.
    """

    normal: tuple[float, ...]
    offset: float
    rounding: float
    box_lo: tuple[float, ...] = (0.0, 0.0)
    box_hi: tuple[float, ...] = (1.0, 1.0)
    complement: bool = False
    kind: str = field(default="rounded-slab", init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "normal", tuple(float(c) for c in _unit(self.normal)))
        object.__setattr__(self, "offset", float(self.offset))
        object.__setattr__(self, "box_lo", tuple(float(c) for c in self.box_lo))
        object.__setattr__(self, "box_hi", tuple(float(c) for c in self.box_hi))
        if not self.rounding > 0:
            raise ValueError("rounding radius must be positive")
        if not (len(self.normal) == len(self.box_lo) == len(self.box_hi)):
            raise ValueError("normal and box must share a dimension")
        if any(h - l <= 2 * self.rounding for l, h in zip(self.box_lo, self.box_hi)):
            raise ValueError("box too small for the rounding radius")

    @classmethod
    def from_angle(cls, angle, offset, rounding, box_lo, box_hi, complement=False):
        return cls((math.cos(angle), math.sin(angle)), offset, rounding, box_lo, box_hi, complement)

    @property
    def dim(self):
        return len(self.normal)

    @property
    def certified_reach(self):
        return self.rounding

    @property
    def halfspace(self) -> HalfSpace:
        return HalfSpace(self.normal, self.offset, self.complement)

    def deep_mask(self, pts) -> np.ndarray:
        pts = _as_points(pts, self.dim)
        margin = 3 * self.rounding
        return np.all((pts >= np.asarray(self.box_lo) + margin) & (pts <= np.asarray(self.box_hi) - margin), axis=1)

    def domain_is_deep(self, domain: Domain) -> bool:
        return self.box_is_deep(*domain.bbox())

    def box_is_deep(self, lo, hi) -> bool:
        """Whether the axis box [lo, hi] lies in the deep region."""
        margin = 3 * self.rounding
        return bool(np.all(lo >= np.asarray(self.box_lo) + margin) and np.all(hi <= np.asarray(self.box_hi) - margin))

    def core_polygon(self) -> list[np.ndarray]:
        """Vertices of the eroded set {<x, n> >= offset + rounding} within the box shrunk by rounding."""
        if self.dim != 2:
            raise NotImplementedError("rounded-slab polygon geometry is implemented in 2-D only")
        lo = np.asarray(self.box_lo) + self.rounding
        hi = np.asarray(self.box_hi) - self.rounding
        square = [np.array([lo[0], lo[1]]), np.array([hi[0], lo[1]]), np.array([hi[0], hi[1]]), np.array([lo[0], hi[1]])]
        return _clip_polygon(square, np.asarray(self.normal), self.offset + self.rounding)

    def _core_signed_distance(self, pts):
        poly = self.core_polygon()
        if not poly:
            return np.full(len(pts), INF)
        dist = np.full(len(pts), INF)
        for k in range(len(poly)):
            dist = np.minimum(dist, _segment_distances(pts, poly[k], poly[(k + 1) % len(poly)]))
        if len(poly) < 3:
            return dist
        inside = np.ones(len(pts), dtype=bool)
        for k in range(len(poly)):
            a, b = poly[k], poly[(k + 1) % len(poly)]
            edge = b - a
            cross = edge[0] * (pts[:, 1] - a[1]) - edge[1] * (pts[:, 0] - a[0])
            inside &= cross >= 0
        return np.where(inside, -dist, dist)

    def _base_signed_distance(self, pts):
        out = self.offset - pts @ np.asarray(self.normal)
        # the flat part of the boundary is nearest only for deep points close to the cut
        near = self.deep_mask(pts) & (np.abs(out) <= self.rounding)
        if np.all(near):
            return out
        rest = ~near
        out = out.astype(float)
        out[rest] = self._core_signed_distance(pts[rest]) - self.rounding
        return out

    def _base_contains(self, pts):
        deep = self.deep_mask(pts)
        inside = pts @ np.asarray(self.normal) > self.offset
        if np.all(deep):
            return inside
        rest = ~deep
        inside[rest] = self._core_signed_distance(pts[rest]) - self.rounding < 0
        return inside

    def _base_line_intervals(self, p, v):
        raise NotImplementedError("line sections of rounded slabs are taken through the half-space in deep domains")

    def area(self) -> float:
        poly = self.core_polygon()
        if not poly:
            return 0.0
        return _polygon_area(poly) + self.rounding * _polygon_perimeter(poly) + math.pi * self.rounding**2

    def boundary_measure(self) -> float:
        poly = self.core_polygon()
        if not poly:
            return 0.0
        return _polygon_perimeter(poly) + 2 * math.pi * self.rounding

    def threshold_form(self):
        return ("proj", self.normal), lambda pts: pts @ np.asarray(self.normal), self.offset

    def params(self):
        return {
            "normal": self.normal,
            "offset": self.offset,
            "rounding": self.rounding,
            "box_lo": self.box_lo,
            "box_hi": self.box_hi,
        }


def _polygon_area(poly) -> float:
    if len(poly) < 3:
        return 0.0
    xs = np.array([p[0] for p in poly])
    ys = np.array([p[1] for p in poly])
    return 0.5 * abs(float(np.dot(xs, np.roll(ys, -1)) - np.dot(ys, np.roll(xs, -1))))


def _polygon_perimeter(poly) -> float:
    if len(poly) == 1:
        return 0.0
    if len(poly) == 2:
        return 2 * float(np.linalg.norm(poly[1] - poly[0]))
    return float(sum(np.linalg.norm(poly[(k + 1) % len(poly)] - poly[k]) for k in range(len(poly))))


CANDIDATE_KINDS = {"halfspace": HalfSpace, "ball": Ball, "rounded-slab": RoundedSlab}
