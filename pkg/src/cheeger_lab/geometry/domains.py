"""Parametric bounded domains with closed-form volume, boundary and reach."""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import integrate

from cheeger_lab.geometry.constants import signed_cap_volume, unit_ball_volume
from cheeger_lab.geometry.intervals import clip_line_box, clip_line_disk, interval_union_length

Interval = tuple[float, float]


class EmptySetError(ValueError):
    """Raised when an inner parallel set would be empty."""


def _omega(k: int) -> float:
    return 1.0 if k == 0 else unit_ball_volume(k)


def _elementary_symmetric(values) -> list[float]:
    e = [1.0]
    for a in values:
        nxt = e + [0.0]
        for j in range(len(e), 0, -1):
            nxt[j] += a * e[j - 1]
        e = nxt
    return e


def rounded_box_volume(inner_sides, rho: float) -> float:
    """Volume of (box with the given sides) dilated by a ball of radius rho (Steiner)."""
    d = len(inner_sides)
    e = _elementary_symmetric(inner_sides)
    return sum(_omega(k) * rho**k * e[d - k] for k in range(d + 1))


def rounded_box_boundary(inner_sides, rho: float) -> float:
    d = len(inner_sides)
    e = _elementary_symmetric(inner_sides)
    return sum(k * _omega(k) * rho ** (k - 1) * e[d - k] for k in range(1, d + 1))


def _as_points(points, d: int) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts.reshape(1, -1)
    if pts.shape[1] != d:
        raise ValueError(f"expected points of dimension {d}, got shape {pts.shape}")
    return pts


def _unit(u) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    norm = np.linalg.norm(u)
    if norm == 0.0:
        raise ValueError("direction must be nonzero")
    return u / norm


class Domain(ABC):
    """A bounded open region of R^d.

    Subclasses are frozen dataclasses; every quantity is a closed form in
    the parameters except half-space volumes of tilted rectangles, which
    use adaptive quadrature of the section length.
    """

    kind: str = ""
    margin: float | None

    @property
    @abstractmethod
    def dim(self) -> int: ...

    @property
    def center_array(self) -> np.ndarray:
        return np.asarray(self.center, dtype=float)

    @abstractmethod
    def volume(self) -> float: ...

    @abstractmethod
    def boundary_measure(self) -> float: ...

    @abstractmethod
    def reach(self) -> float: ...

    @abstractmethod
    def inradius(self) -> float: ...

    @abstractmethod
    def signed_distance(self, points) -> np.ndarray:
        """Euclidean signed distance to the boundary, negative inside."""

    @abstractmethod
    def bbox(self) -> tuple[np.ndarray, np.ndarray]: ...

    @abstractmethod
    def inner_parallel(self, r: float) -> "Domain": ...

    @abstractmethod
    def extent_along(self, u) -> tuple[float, float]:
        """Range of <x, u> over the closure, u a unit vector."""

    @abstractmethod
    def line_intervals(self, p, v) -> list[Interval]:
        """Parameter intervals of {p + s v} lying in the closure (2-D only for some kinds)."""

    @abstractmethod
    def section_measure(self, u, s: float) -> float:
        """(d-1)-volume of the hyperplane section {x in M : <x, u> = s}."""

    @abstractmethod
    def halfspace_volume(self, u, t: float) -> float:
        """Volume of {x in M : <x, u> > t}."""

    @abstractmethod
    def params(self) -> dict: ...

    def contains(self, points) -> np.ndarray:
        return self.signed_distance(points) < 0.0

    def domain_quantities(self) -> tuple[float, float, float]:
        return self.volume(), self.boundary_measure(), self.reach()

    def check_unit_box(self, margin: float) -> None:
        lo, hi = self.bbox()
        if np.any(lo < margin) or np.any(hi > 1.0 - margin):
            raise ValueError(
                f"{self.kind} closure {lo.tolist()}..{hi.tolist()} is not inside the unit box with margin {margin}"
            )

    def _parallel_radius(self, r: float) -> float:
        if not r >= 0:
            raise ValueError(f"parallel-set radius must be nonnegative, got {r}")
        if r >= self.inradius():
            raise EmptySetError(f"inner parallel set at r={r} of {self.kind} with inradius {self.inradius()} is empty")
        return r

    def _validate_common(self) -> None:
        if self.margin is not None:
            if self.margin < 0:
                raise ValueError("margin must be nonnegative")
            self.check_unit_box(self.margin)


@dataclass(frozen=True)
class Disk(Domain):
    """Open ball B(center, radius); a disk when len(center) == 2."""

    center: tuple[float, ...]
    radius: float
    margin: float | None = None
    kind: str = field(default="disk", init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        if not self.radius > 0:
            raise ValueError("disk radius must be positive")
        self._validate_common()

    @property
    def dim(self) -> int:
        return len(self.center)

    def volume(self) -> float:
        return unit_ball_volume(self.dim) * self.radius**self.dim

    def boundary_measure(self) -> float:
        return self.dim * unit_ball_volume(self.dim) * self.radius ** (self.dim - 1)

    def reach(self) -> float:
        return self.radius

    def inradius(self) -> float:
        return self.radius

    def signed_distance(self, points) -> np.ndarray:
        pts = _as_points(points, self.dim)
        return np.sqrt(np.sum((pts - self.center_array) ** 2, axis=1)) - self.radius

    def bbox(self):
        c = self.center_array
        return c - self.radius, c + self.radius

    def inner_parallel(self, r: float) -> "Disk":
        if self._parallel_radius(r) == 0:
            return self
        return replace(self, radius=self.radius - r)

    def extent_along(self, u):
        s = float(np.dot(self.center_array, _unit(u)))
        return s - self.radius, s + self.radius

    def line_intervals(self, p, v):
        iv = clip_line_disk(np.asarray(p, float), np.asarray(v, float), self.center_array, self.radius)
        return [iv] if iv is not None else []

    def section_measure(self, u, s):
        z = s - float(np.dot(self.center_array, _unit(u)))
        if abs(z) >= self.radius:
            return 0.0
        d = self.dim
        return _omega(d - 1) * (self.radius**2 - z * z) ** ((d - 1) / 2)

    def halfspace_volume(self, u, t):
        z = t - float(np.dot(self.center_array, _unit(u)))
        return self.radius**self.dim * signed_cap_volume(self.dim, z / self.radius)

    def params(self):
        return {"center": self.center, "radius": self.radius}


@dataclass(frozen=True)
class Rectangle(Domain):
    """Axis-aligned box with corners (and edges, for d > 2) rounded at radius ``rounding``.

    The set is the inner box of sides ``sides - 2 * rounding`` dilated by a
    ball of radius ``rounding``; ``rounding = 0`` gives the sharp box.
    """

    center: tuple[float, ...]
    sides: tuple[float, ...]
    rounding: float = 0.02
    margin: float | None = None
    kind: str = field(default="rectangle", init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        object.__setattr__(self, "sides", tuple(float(s) for s in self.sides))
        if len(self.sides) != len(self.center):
            raise ValueError("sides and center must have the same dimension")
        if min(self.sides) <= 0:
            raise ValueError("rectangle sides must be positive")
        if not 0 <= self.rounding <= min(self.sides) / 2:
            raise ValueError("rounding radius must lie in [0, min(sides)/2]")
        self._validate_common()

    @property
    def dim(self) -> int:
        return len(self.center)

    @property
    def inner_sides(self) -> np.ndarray:
        return np.asarray(self.sides) - 2 * self.rounding

    def volume(self):
        return rounded_box_volume(self.inner_sides, self.rounding)

    def boundary_measure(self):
        return rounded_box_boundary(self.inner_sides, self.rounding)

    def reach(self):
        return self.rounding

    def inradius(self):
        return min(self.sides) / 2

    def signed_distance(self, points):
        pts = _as_points(points, self.dim)
        q = np.abs(pts - self.center_array) - self.inner_sides / 2
        outside = np.sqrt(np.sum(np.maximum(q, 0.0) ** 2, axis=1))
        inside = np.minimum(np.max(q, axis=1), 0.0)
        return outside + inside - self.rounding

    def bbox(self):
        c = self.center_array
        half = np.asarray(self.sides) / 2
        return c - half, c + half

    def inner_parallel(self, r):
        if self._parallel_radius(r) == 0:
            return self
        sides = tuple(s - 2 * r for s in self.sides)
        return replace(self, sides=sides, rounding=max(self.rounding - r, 0.0))

    def extent_along(self, u):
        u = _unit(u)
        s = float(np.dot(self.center_array, u))
        w = float(np.sum(np.abs(u) * self.inner_sides / 2)) + self.rounding
        return s - w, s + w

    def _pieces(self):
        """Convex pieces whose union is the rounded rectangle (2-D)."""
        c = self.center_array
        a = self.inner_sides / 2
        rho = self.rounding
        boxes = [(c - a - [rho, 0.0], c + a + [rho, 0.0]), (c - a - [0.0, rho], c + a + [0.0, rho])]
        disks = []
        if rho > 0:
            for sx in (-1, 1):
                for sy in (-1, 1):
                    disks.append(c + a * [sx, sy])
        return boxes, disks

    def line_intervals(self, p, v):
        if self.dim != 2:
            raise NotImplementedError("line sections of rectangles are implemented in 2-D only")
        p = np.asarray(p, float)
        v = np.asarray(v, float)
        boxes, disks = self._pieces()
        found = [clip_line_box(p, v, lo, hi) for lo, hi in boxes]
        found += [clip_line_disk(p, v, q, self.rounding) for q in disks]
        found = [iv for iv in found if iv is not None]
        if not found:
            return []
        # the union of the pieces is convex, so the section is one interval
        return [(min(iv[0] for iv in found), max(iv[1] for iv in found))]

    def _axis(self, u):
        u = _unit(u)
        nz = np.flatnonzero(np.abs(u) > 1e-15)
        if len(nz) == 1:
            return int(nz[0]), float(np.sign(u[nz[0]]))
        return None

    def section_measure(self, u, s):
        u = _unit(u)
        axis = self._axis(u)
        if axis is not None and self.dim != 2:
            k, sign = axis
            z = abs(sign * s - self.center[k])
            a = self.inner_sides
            rest = np.delete(a, k)
            if z <= a[k] / 2:
                return rounded_box_volume(rest, self.rounding)
            if z < a[k] / 2 + self.rounding:
                return rounded_box_volume(rest, math.sqrt(self.rounding**2 - (z - a[k] / 2) ** 2))
            return 0.0
        if self.dim != 2:
            raise NotImplementedError("tilted sections of rectangles are implemented in 2-D only")
        v = np.array([-u[1], u[0]])
        return interval_union_length(self.line_intervals(s * u, v))

    def _breakpoints(self, u):
        u = _unit(u)
        c = self.center_array
        a = self.inner_sides / 2
        rho = self.rounding
        pts = []
        for corner in np.array(np.meshgrid(*[[-1.0, 1.0]] * self.dim)).reshape(self.dim, -1).T:
            base = float(np.dot(c + a * corner, u))
            pts.extend([base, base + rho, base - rho])
            for k in range(self.dim):
                off = np.zeros(self.dim)
                off[k] = rho * corner[k]
                pts.append(float(np.dot(c + a * corner + off, u)))
        return sorted(set(pts))

    def halfspace_volume(self, u, t, tol: float = 1e-12):
        lo, hi = self.extent_along(u)
        if t >= hi:
            return 0.0
        if t <= lo:
            return self.volume()
        # the section is smooth between breakpoints; nearly equal breakpoints
        # (directions close to an axis) are merged rather than handed to one quad call
        knots = [t]
        for b in self._breakpoints(u):
            if knots[-1] + 1e-9 < b < hi - 1e-9:
                knots.append(b)
        knots.append(hi)
        return sum(
            integrate.quad(lambda s: self.section_measure(u, s), a, b, epsabs=tol, epsrel=tol, limit=200)[0]
            for a, b in zip(knots[:-1], knots[1:])
        )

    def params(self):
        return {"center": self.center, "sides": self.sides, "rounding": self.rounding}


@dataclass(frozen=True)
class Annulus(Domain):
    """Planar annulus inner < |x - center| < outer."""

    center: tuple[float, float]
    inner: float
    outer: float
    margin: float | None = None
    kind: str = field(default="annulus", init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        if len(self.center) != 2:
            raise ValueError("annulus is a planar domain")
        if not 0 < self.inner < self.outer:
            raise ValueError("annulus radii must satisfy 0 < inner < outer")
        self._validate_common()

    @property
    def dim(self) -> int:
        return 2

    def volume(self):
        return math.pi * (self.outer**2 - self.inner**2)

    def boundary_measure(self):
        return 2 * math.pi * (self.inner + self.outer)

    def reach(self):
        return self.inner

    def inradius(self):
        return (self.outer - self.inner) / 2

    def signed_distance(self, points):
        pts = _as_points(points, 2)
        rr = np.sqrt(np.sum((pts - self.center_array) ** 2, axis=1))
        return np.maximum(rr - self.outer, self.inner - rr)

    def bbox(self):
        c = self.center_array
        return c - self.outer, c + self.outer

    def inner_parallel(self, r):
        if self._parallel_radius(r) == 0:
            return self
        return replace(self, inner=self.inner + r, outer=self.outer - r)

    def extent_along(self, u):
        s = float(np.dot(self.center_array, _unit(u)))
        return s - self.outer, s + self.outer

    def line_intervals(self, p, v):
        p = np.asarray(p, float)
        v = np.asarray(v, float)
        out = clip_line_disk(p, v, self.center_array, self.outer)
        if out is None:
            return []
        hole = clip_line_disk(p, v, self.center_array, self.inner)
        if hole is None:
            return [out]
        return [iv for iv in ((out[0], hole[0]), (hole[1], out[1])) if iv[1] > iv[0]]

    def section_measure(self, u, s):
        z = abs(s - float(np.dot(self.center_array, _unit(u))))
        chord = lambda rad: 2 * math.sqrt(rad * rad - z * z) if z < rad else 0.0
        return chord(self.outer) - chord(self.inner)

    def halfspace_volume(self, u, t):
        z = t - float(np.dot(self.center_array, _unit(u)))
        return self.outer**2 * signed_cap_volume(2, z / self.outer) - self.inner**2 * signed_cap_volume(
            2, z / self.inner
        )

    def params(self):
        return {"center": self.center, "inner": self.inner, "outer": self.outer}


DOMAIN_KINDS = {"disk": Disk, "rectangle": Rectangle, "annulus": Annulus}
