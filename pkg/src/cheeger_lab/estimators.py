"""Normalized discrete volume, perimeter and cut estimators on G_{n,r}.

With tau = Vol(M), omega = Vol(unit ball) and gamma the cap-average constant:

    mu_n(A) = tau / (omega n (n-1) r^d)       * delta(A cap X_n)
    nu_n(A) = tau / (gamma n (n-1) r^(d+1))   * sigma(A cap X_n)
    h_n(A)  = nu_n(A) / min(mu_n(A), mu_n(A^c)) = omega / (gamma r) * h(A cap X_n; G)

The penalized estimator h_n^dd(R) equals h_n(R) when both R and R^c contain
a ball of radius rho_n centered at a sample point, and +inf otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from cheeger_lab.geometry.candidates import Ball, CandidateSet, RoundedSlab
from cheeger_lab.geometry.constants import Constants
from cheeger_lab.geometry.domains import Domain
from cheeger_lab.graph import NeighborhoodGraph, build_graph, cut_counts, graph_normalized_cut
from cheeger_lab.sampling import Sample

INF = math.inf


def log_squared_radius(n: int, d: int) -> float:
    """((log n)^2 / n)^(1/(d+1)); n r^(d+1) / log n = log n diverges."""
    return (math.log(n) ** 2 / n) ** (1.0 / (d + 1))


def power_radius(n: int, d: int) -> float:
    """n^(-1/(2d+2)); n r^(2d+1) = n^(1/(2d+2)) diverges."""
    return n ** (-1.0 / (2 * d + 2))


def inverse_log_rho(n: int) -> float:
    return 1.0 / math.log(n)


@dataclass(frozen=True, eq=False)
class EstimatorContext:
    graph: NeighborhoodGraph
    domain: Domain
    constants: Constants
    r: float

    def __post_init__(self):
        if self.constants.d != self.domain.dim:
            raise ValueError("constants dimension does not match the domain")
        if not math.isnan(self.graph.r) and self.graph.r != self.r:
            raise ValueError("estimator radius must equal the graph construction radius")
        if self.graph.points is None:
            raise ValueError("estimators need a graph built from sample points")

    @classmethod
    def from_sample(cls, sample: Sample | np.ndarray, domain: Domain, r: float) -> "EstimatorContext":
        graph = build_graph(sample, r)
        return cls(graph, domain, Constants.for_dim(domain.dim), float(r))

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def points(self) -> np.ndarray:
        return self.graph.points

    @property
    def cut_scale(self) -> float:
        """omega_d / (gamma_d r)."""
        return self.constants.omega_d / (self.constants.gamma_d * self.r)

    def _require_pairs(self):
        if self.n < 2:
            raise ValueError("estimators need at least two sample points")

    def volume_scale(self) -> float:
        d = self.constants.d
        return self.domain.volume() / (self.constants.omega_d * self.n * (self.n - 1) * self.r**d)

    def perimeter_scale(self) -> float:
        d = self.constants.d
        return self.domain.volume() / (self.constants.gamma_d * self.n * (self.n - 1) * self.r ** (d + 1))

    def counts(self, A: CandidateSet) -> tuple[int, int, int]:
        return cut_counts(self.graph, A.contains(self.points))


def mu_n(ctx: EstimatorContext, A: CandidateSet) -> float:
    ctx._require_pairs()
    delta, _, _ = ctx.counts(A)
    return ctx.volume_scale() * delta


def nu_n(ctx: EstimatorContext, A: CandidateSet) -> float:
    ctx._require_pairs()
    _, _, sigma = ctx.counts(A)
    return ctx.perimeter_scale() * sigma


def h_n_ratio(ctx: EstimatorContext, A: CandidateSet) -> float:
    """nu_n(A) / min(mu_n(A), mu_n(A^c))."""
    ctx._require_pairs()
    delta, delta_c, sigma = ctx.counts(A)
    low = min(ctx.volume_scale() * delta, ctx.volume_scale() * delta_c)
    if low == 0.0:
        return INF
    return ctx.perimeter_scale() * sigma / low


def h_n(ctx: EstimatorContext, A: CandidateSet, rel_tol: float = 1e-12) -> float:
    """Rescaled graph cut omega/(gamma r) * h(A cap X_n; G), checked against the ratio form."""
    ctx._require_pairs()
    delta, delta_c, sigma = ctx.counts(A)
    graph_form = ctx.cut_scale * graph_normalized_cut(sigma, delta, delta_c)
    ratio_form = h_n_ratio(ctx, A)
    if graph_form != ratio_form and not math.isclose(graph_form, ratio_form, rel_tol=rel_tol):
        raise ArithmeticError(f"h_n forms disagree: {graph_form!r} vs {ratio_form!r}")
    return graph_form


@dataclass(frozen=True, eq=False)
class PenalizedConfig:
    rho_n: float
    candidate_family: Sequence[CandidateSet]
    r_n: float
    n: int

    def __post_init__(self):
        if not self.rho_n > 0:
            raise ValueError("rho_n must be positive")
        for R in self.candidate_family:
            if R.certified_reach < self.rho_n:
                raise ValueError(f"candidate {R.describe()} has reach {R.certified_reach} < rho_n={self.rho_n}")


def ball_condition(R: CandidateSet, points: np.ndarray, rho: float) -> bool:
    """Both R and R^c contain a ball of radius rho centered at one of the points."""
    if len(points) == 0:
        return False
    sd = R.signed_distance(points)
    return bool(np.any(sd <= -rho) and np.any(sd >= rho))


def h_n_ddag(ctx: EstimatorContext, cfg: PenalizedConfig, R: CandidateSet) -> float:
    ctx._require_pairs()
    if not ball_condition(R, ctx.points, cfg.rho_n):
        return INF
    delta, delta_c, sigma = ctx.counts(R)
    return ctx.cut_scale * graph_normalized_cut(sigma, delta, delta_c)


@dataclass(frozen=True, eq=False)
class PenalizedMinimum:
    value: float
    argmin: CandidateSet | None
    index: int | None
    values: np.ndarray = field(repr=False)

    @property
    def failed(self) -> bool:
        return self.argmin is None


def _group_family(family: Sequence[CandidateSet], points: np.ndarray):
    groups: dict = {}
    loose = []
    lo, hi = points.min(axis=0), points.max(axis=0)
    for k, R in enumerate(family):
        form = R.threshold_form()
        if form is None or (isinstance(R, RoundedSlab) and not R.box_is_deep(lo, hi)):
            loose.append(k)
            continue
        key, score, threshold = form
        groups.setdefault(key, (score, []))[1].append((k, threshold))
    return groups, loose


def family_values(ctx: EstimatorContext, cfg: PenalizedConfig) -> np.ndarray:
    """h_n^dd over the family, in family order.

    Candidates sharing a score function (half-spaces and rounded slabs with
    one normal, balls with one center) are evaluated together: each point
    gets the number of thresholds below its score, which fixes its side for
    every candidate of the group, and crossing counts follow from two
    bincounts over the edges.  Results equal ``h_n_ddag`` candidate by
    candidate.
    """
    ctx._require_pairs()
    family = list(cfg.candidate_family)
    pts = ctx.points
    G = ctx.graph
    deg = G.degree
    total = 2 * G.edge_count
    scale = ctx.cut_scale
    values = np.full(len(family), INF)
    groups, loose = _group_family(family, pts)
    tail = np.ascontiguousarray(G.edges[:, 0]), np.ascontiguousarray(G.edges[:, 1])
    for k in loose:
        values[k] = h_n_ddag(ctx, cfg, family[k])
    for score_fn, members in groups.values():
        scores = score_fn(pts)
        thresholds = np.array([t for _, t in members])
        order = np.argsort(thresholds, kind="stable")
        sorted_t = thresholds[order]
        K = len(sorted_t)
        below = np.searchsorted(sorted_t, scores, side="left")
        if K < 255:
            below = below.astype(np.uint8)
        # an edge lies inside candidate q iff both ends have more than q thresholds below them
        lo = np.minimum(below.take(tail[0]), below.take(tail[1]))
        inner = G.edge_count - np.cumsum(np.bincount(lo, minlength=K + 1))
        delta = total - np.cumsum(np.bincount(below, weights=deg, minlength=K + 1)).astype(np.int64)
        sigma = delta - 2 * inner
        extremes = pts[[int(np.argmax(scores)), int(np.argmin(scores))]]
        for q, pos in enumerate(order):
            k, _ = members[pos]
            R = family[k]
            if not ball_condition(R, extremes, cfg.rho_n):
                continue
            d_in, d_out, s = int(delta[q]), total - int(delta[q]), int(sigma[q])
            if R.complement:
                d_in, d_out = d_out, d_in
            values[k] = scale * graph_normalized_cut(s, d_in, d_out)
    return values


def minimize_h_n_ddag(ctx: EstimatorContext, cfg: PenalizedConfig) -> PenalizedMinimum:
    """Exhaustive scan of the finite family; ties go to the earliest family member."""
    if not cfg.candidate_family:
        raise ValueError("candidate family is empty")
    values = family_values(ctx, cfg)
    k = int(np.argmin(values))
    if not np.isfinite(values[k]):
        return PenalizedMinimum(INF, None, None, values)
    return PenalizedMinimum(float(values[k]), cfg.candidate_family[k], k, values)


def candidate_family(
    domain: Domain,
    rho: float,
    k_angle: int = 36,
    k_offset: int = 41,
    ball_grid: int = 0,
    ball_radii: Sequence[float] = (),
    box: tuple[Sequence[float], Sequence[float]] | None = None,
) -> list[CandidateSet]:
    """Rounded slabs (angle-major, then offset) followed by balls (center grid index, then radius).

    Slab normals sweep [0, pi) since h is symmetric under complement; offsets
    span the domain's extent along each normal, with the middle offset on
    the domain's center.  The bounding box defaults to the domain's box
    widened by 3.5 rho so the domain sits in every slab's deep region.
    """
    if domain.dim != 2:
        raise NotImplementedError("candidate families are built for planar domains")
    lo, hi = domain.bbox()
    if box is None:
        box = (lo - 3.5 * rho, hi + 3.5 * rho)
    box_lo, box_hi = tuple(map(float, box[0])), tuple(map(float, box[1]))
    out: list[CandidateSet] = []
    for a in range(k_angle):
        theta = math.pi * a / k_angle
        u = np.array([math.cos(theta), math.sin(theta)])
        e_lo, e_hi = domain.extent_along(u)
        mid, half = 0.5 * (e_lo + e_hi), 0.5 * (e_hi - e_lo)
        for t in np.linspace(-1.0, 1.0, k_offset) if k_offset > 1 else [0.0]:
            out.append(RoundedSlab(tuple(u), mid + half * float(t), rho, box_lo, box_hi))
    if ball_grid > 0:
        for radius in ball_radii:
            if radius < rho:
                raise ValueError("ball radii must be at least rho")
        xs = np.linspace(lo[0], hi[0], ball_grid + 2)[1:-1]
        ys = np.linspace(lo[1], hi[1], ball_grid + 2)[1:-1]
        for y in ys:
            for x in xs:
                if not domain.contains(np.array([x, y]))[0]:
                    continue
                for radius in ball_radii:
                    out.append(Ball((float(x), float(y)), float(radius)))
    return out


@dataclass(frozen=True)
class KernelSpec:
    kind: str
    A: CandidateSet | None = None
    r: float = 0.0
    func: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None

    def __post_init__(self):
        if self.kind not in ("volume", "perimeter", "custom"):
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        if self.kind != "custom" and (self.A is None or not self.r > 0):
            raise ValueError("graph kernels need a candidate set and a positive radius")
        if self.kind == "custom" and self.func is None:
            raise ValueError("custom kernels need a function")

    def __call__(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Evaluate on paired rows of x and y."""
        if self.kind == "custom":
            return self.func(x, y)
        close = np.sum((x - y) ** 2, axis=-1) <= self.r * self.r
        ax, ay = self.A.contains(x), self.A.contains(y)
        if self.kind == "volume":
            return 0.5 * (ax.astype(float) + ay) * close
        return 0.5 * ((ax & ~ay).astype(float) + (ay & ~ax)) * close


def u_statistic(kernel: KernelSpec, sample: Sample | np.ndarray, graph: NeighborhoodGraph | None = None) -> float:
    """(1 / (n(n-1))) sum over i != j of kernel(X_i, X_j).

    The two graph kernels sum to delta(A cap X_n) and sigma(A cap X_n) on
    G_{n,r}; custom kernels run the double loop.
    """
    pts = sample.points if isinstance(sample, Sample) else np.asarray(sample, float)
    n = len(pts)
    if n < 2:
        raise ValueError("U-statistics need at least two points")
    if kernel.kind == "custom":
        total = 0.0
        for i in range(n):
            others = np.delete(np.arange(n), i)
            total += float(np.sum(kernel(np.broadcast_to(pts[i], (n - 1, pts.shape[1])), pts[others])))
        return total / (n * (n - 1))
    if graph is None:
        graph = build_graph(pts, kernel.r)
    delta, _, sigma = cut_counts(graph, kernel.A.contains(pts))
    return (delta if kernel.kind == "volume" else sigma) / (n * (n - 1))


def hoeffding_tail_bound(n: int, t: float, sigma2: float, b: float) -> float:
    """exp(-n t^2 / (5 sigma^2 + 3 b t)) for a centered kernel bounded by b with variance sigma^2."""
    if n < 2 or not t > 0 or not b > 0 or sigma2 < 0:
        raise ValueError("need n >= 2, t > 0, b > 0 and sigma2 >= 0")
    return math.exp(-n * t * t / (5.0 * sigma2 + 3.0 * b * t))
