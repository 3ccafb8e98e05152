"""Neighborhood graphs G_{n,r} and their normalized cuts.

Adjacency is boundary-inclusive: i ~ j iff sum_k (x_ik - x_jk)^2 <= r*r,
evaluated with exactly that expression everywhere (grid search and the
brute-force oracle alike).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from itertools import product

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from cheeger_lab.sampling import Sample, generator

EXACT_BUDGET = 24
PAIR_CHUNK = 4_000_000
# cells are a hair wider than r so that rounding in (x - lo) / side can never
# put two points at distance exactly r two cells apart
CELL_SLACK = 1.0 + 2.0**-20


class BudgetError(ValueError):
    """Raised when exhaustive enumeration exceeds the vertex budget."""


@dataclass(frozen=True, eq=False)
class NeighborhoodGraph:
    """Unit-weight graph; ``edges`` holds each edge once as (i, j), i < j, sorted."""

    n: int
    r: float
    edges: np.ndarray
    points: np.ndarray | None = None

    @classmethod
    def from_edges(cls, n: int, edges, r: float = math.nan, points=None) -> "NeighborhoodGraph":
        e = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64).reshape(-1, 2)
        if len(e) and (e.min() < 0 or e.max() >= n):
            raise ValueError("edge endpoint out of range")
        if np.any(e[:, 0] == e[:, 1]):
            raise ValueError("self-loops are not allowed")
        e = np.sort(e, axis=1)
        e = np.unique(e, axis=0)
        return cls(n, r, e, points)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def degree(self) -> np.ndarray:
        return np.bincount(self.edges.ravel(), minlength=self.n).astype(np.int64)

    @cached_property
    def _csr(self) -> csr_matrix:
        i, j = self.edges[:, 0], self.edges[:, 1]
        data = np.ones(2 * len(i), dtype=np.float64)
        mat = csr_matrix((data, (np.concatenate([i, j]), np.concatenate([j, i]))), shape=(self.n, self.n))
        mat.sort_indices()
        return mat

    @property
    def indptr(self) -> np.ndarray:
        return self._csr.indptr

    @property
    def indices(self) -> np.ndarray:
        return self._csr.indices

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i] : self.indptr[i + 1]]

    def adjacency_matrix(self) -> csr_matrix:
        return self._csr

    def relabeled(self, perm) -> "NeighborhoodGraph":
        """Graph with vertex v renamed perm[v]."""
        perm = np.asarray(perm)
        pts = None
        if self.points is not None:
            pts = np.empty_like(self.points)
            pts[perm] = self.points
        return NeighborhoodGraph.from_edges(self.n, perm[self.edges], self.r, pts)

    def to_edgelist(self) -> str:
        lines = [f"{self.n} {self.edge_count} {format(float(self.r), '.17g')}"]
        lines += [f"{i} {j}" for i, j in self.edges.tolist()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_edgelist(cls, text: str) -> "NeighborhoodGraph":
        rows = [line.split() for line in text.splitlines() if line.strip()]
        n, m, r = int(rows[0][0]), int(rows[0][1]), float(rows[0][2])
        edges = [(int(a), int(b)) for a, b in rows[1:]]
        if len(edges) != m:
            raise ValueError(f"header announces {m} edges, found {len(edges)}")
        for a, b in edges:
            if not a < b:
                raise ValueError(f"edge ({a}, {b}) is not written with i < j")
        return cls.from_edges(n, edges, r)


def _pairs_from_ranges(owner: np.ndarray, start: np.ndarray, stop: np.ndarray):
    lens = stop - start
    keep = lens > 0
    owner, start, lens = owner[keep], start[keep], lens[keep]
    total = int(lens.sum())
    if total == 0:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    offsets = np.repeat(np.cumsum(lens) - lens, lens)
    j = np.arange(total, dtype=np.int64) - offsets + np.repeat(start, lens)
    return np.repeat(owner, lens), j


def build_graph(sample, r: float) -> NeighborhoodGraph:
    """Fixed-radius neighbor graph by uniform-grid bucketing (3^d neighbor cells per point)."""
    if not r > 0:
        raise ValueError("connection radius must be positive")
    pts = sample.points if isinstance(sample, Sample) else np.asarray(sample, dtype=float)
    n = len(pts)
    if n < 2:
        return NeighborhoodGraph(n, float(r), np.empty((0, 2), np.int64), pts)
    d = pts.shape[1]
    # cells wider than r only cost extra distance checks; cap the count so keys fit in int64
    span = float(np.max(pts.max(axis=0) - pts.min(axis=0)))
    side = max(r * CELL_SLACK, span / (2.0 ** (62 / d) - 4))
    cells = np.floor((pts - pts.min(axis=0)) / side).astype(np.int64) + 1
    shape = cells.max(axis=0) + 2
    strides = np.cumprod(np.concatenate([[1], shape[:-1]])).astype(np.int64)
    keys = cells @ strides
    order = np.argsort(keys, kind="stable")
    skeys = keys[order]
    spts = pts[order]
    ukeys, ustart, ucount = np.unique(skeys, return_index=True, return_counts=True)
    cell_of = np.searchsorted(ukeys, skeys)
    own_stop = (ustart + ucount)[cell_of]
    r2 = r * r
    idx = np.arange(n, dtype=np.int64)

    offsets = [np.array(o) for o in product((-1, 0, 1), repeat=d)]
    forward = [o for o in offsets if tuple(o) > (0,) * d]
    out_i, out_j = [], []

    def emit(owner, start, stop):
        step = max(1, PAIR_CHUNK // max(1, int(np.mean(stop - start)) + 1))
        for a in range(0, len(owner), step):
            i, j = _pairs_from_ranges(owner[a : a + step], start[a : a + step], stop[a : a + step])
            if len(i) == 0:
                continue
            diff = spts[i] - spts[j]
            close = np.sum(diff * diff, axis=1) <= r2
            out_i.append(i[close])
            out_j.append(j[close])

    emit(idx, idx + 1, own_stop)
    for o in forward:
        nkeys = skeys + int(o @ strides)
        pos = np.searchsorted(ukeys, nkeys)
        pos = np.minimum(pos, len(ukeys) - 1)
        hit = ukeys[pos] == nkeys
        start = np.where(hit, ustart[pos], 0)
        stop = np.where(hit, ustart[pos] + ucount[pos], 0)
        emit(idx, start, stop)

    if out_i:
        i = order[np.concatenate(out_i)]
        j = order[np.concatenate(out_j)]
    else:
        i = j = np.empty(0, np.int64)
    e = np.stack([np.minimum(i, j), np.maximum(i, j)], axis=1)
    e = e[np.lexsort((e[:, 1], e[:, 0]))]
    return NeighborhoodGraph(n, float(r), e, pts)


def subset_mask(G: NeighborhoodGraph, S) -> np.ndarray:
    """Boolean membership vector from a mask, an int bitmask (n <= 64) or an index iterable."""
    if isinstance(S, np.ndarray) and S.dtype == bool:
        if S.shape != (G.n,):
            raise ValueError("mask length must equal the vertex count")
        return S
    if isinstance(S, (int, np.integer)) and not isinstance(S, bool):
        if G.n > 64:
            raise ValueError("bitmask subsets are limited to n <= 64")
        bits = int(S)
        return np.array([(bits >> k) & 1 == 1 for k in range(G.n)], dtype=bool)
    mask = np.zeros(G.n, dtype=bool)
    members = np.fromiter(S, dtype=np.int64)
    if len(members) and (members.min() < 0 or members.max() >= G.n):
        raise ValueError("subset index out of range")
    mask[members] = True
    return mask


@dataclass(frozen=True)
class CutEvaluation:
    subset: int | tuple[int, ...]
    delta_S: int
    delta_Sc: int
    sigma_S: int
    h: float
    degenerate: bool


def cut_counts(G: NeighborhoodGraph, mask: np.ndarray) -> tuple[int, int, int]:
    """(delta(S), delta(S^c), sigma(S)) as exact integers."""
    total = 2 * G.edge_count
    delta = int(G.degree[mask].sum())
    sigma = int(np.count_nonzero(mask[G.edges[:, 0]] != mask[G.edges[:, 1]]))
    return delta, total - delta, sigma


def graph_normalized_cut(sigma: int, delta: int, delta_c: int) -> float:
    low = min(delta, delta_c)
    return math.inf if low == 0 else sigma / low


def evaluate_cut(G: NeighborhoodGraph, S) -> CutEvaluation:
    mask = subset_mask(G, S)
    delta, delta_c, sigma = cut_counts(G, mask)
    members = np.flatnonzero(mask)
    if G.n <= 64:
        desc: int | tuple[int, ...] = int(sum(1 << int(k) for k in members))
    else:
        desc = tuple(int(k) for k in members)
    degenerate = len(members) in (0, G.n)
    return CutEvaluation(desc, delta, delta_c, sigma, graph_normalized_cut(sigma, delta, delta_c), degenerate)


@dataclass(frozen=True)
class ExactConductance:
    H: float
    bitmask: int | None
    members: tuple[int, ...]


def conductance_exact(G: NeighborhoodGraph) -> ExactConductance:
    """H(G) by enumerating one representative per complement pair.

    Representatives are the subsets of the first n-1 vertices (vertex n-1
    always lies in the complement), built in bitmask order with
    e(S + {b}) = e(S) + |adj(b) & S| so sigma(S) = delta(S) - 2 e(S).
    Ties go to the smallest bitmask.
    """
    n = G.n
    if n > EXACT_BUDGET:
        raise BudgetError(f"exact conductance needs n <= {EXACT_BUDGET} (got {n}); use spectral_sweep instead")
    if n < 2:
        return ExactConductance(math.inf, None, ())
    k = n - 1
    adj = np.zeros(n, dtype=np.int64)
    for a, b in G.edges.tolist():
        adj[a] |= 1 << b
        adj[b] |= 1 << a
    deg = G.degree
    masks = np.zeros(1, dtype=np.int64)
    vol = np.zeros(1, dtype=np.int64)
    inner = np.zeros(1, dtype=np.int64)
    for b in range(k):
        masks = np.concatenate([masks, masks | (1 << b)])
        vol = np.concatenate([vol, vol + deg[b]])
        inner = np.concatenate([inner, inner + np.bitwise_count(masks[: len(masks) // 2] & adj[b]).astype(np.int64)])
    total = 2 * G.edge_count
    sigma = vol - 2 * inner
    low = np.minimum(vol, total - vol)
    with np.errstate(divide="ignore", invalid="ignore"):
        h = np.where(low > 0, sigma / np.where(low > 0, low, 1), np.inf)
    h[0] = np.inf  # empty set
    best = int(np.argmin(h))
    if not np.isfinite(h[best]):
        return ExactConductance(math.inf, None, ())
    members = tuple(v for v in range(k) if (best >> v) & 1)
    return ExactConductance(float(h[best]), best, members)


@dataclass(frozen=True)
class SweepResult:
    h_upper: float
    members: tuple[int, ...]
    lambda2: float
    converged: bool
    iterations: int


def _second_eigenpair(A: csr_matrix, deg: np.ndarray, tol: float, max_iter: int):
    """Deflated power iteration on (I + D^-1/2 A D^-1/2) / 2; returns (mu, v, converged, iterations)."""
    inv_sqrt = 1.0 / np.sqrt(deg)
    top = np.sqrt(deg)
    top /= np.linalg.norm(top)
    v = generator(0x5EED).standard_normal(len(deg))
    v -= (top @ v) * top
    v /= np.linalg.norm(v)
    mu_prev = math.inf
    for it in range(1, max_iter + 1):
        w = 0.5 * (v + inv_sqrt * (A @ (inv_sqrt * v)))
        w -= (top @ w) * top
        mu = float(v @ w)
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return 0.0, v, True, it
        v = w / norm
        if abs(mu - mu_prev) < tol:
            return mu, v, True, it
        mu_prev = mu
    return mu, v, False, max_iter


def spectral_sweep(G: NeighborhoodGraph, tol: float = 1e-8, max_iter: int = 10_000) -> SweepResult:
    """Upper bound on H(G) from the best prefix cut along the approximate Fiedler order."""
    if G.edge_count == 0:
        return SweepResult(math.inf, (), 0.0, True, 0)
    ncomp, labels = connected_components(G.adjacency_matrix(), directed=False)
    sizes = np.bincount(labels, minlength=ncomp)
    nontrivial = [c for c in range(ncomp) if sizes[c] > 1]
    if len(nontrivial) >= 2:
        members = tuple(int(v) for v in np.flatnonzero(labels == nontrivial[0]))
        return SweepResult(0.0, members, 0.0, True, 0)
    comp = np.flatnonzero(labels == nontrivial[0])
    sub = G.adjacency_matrix()[comp][:, comp].tocsr()
    deg = G.degree[comp].astype(float)
    if len(comp) == 2:
        return SweepResult(1.0, (int(comp[0]),), 2.0, True, 0)
    mu, v, converged, iters = _second_eigenpair(sub, deg, tol, max_iter)
    lambda2 = 2.0 - 2.0 * mu
    order = np.argsort(v / np.sqrt(deg), kind="stable")
    pos = np.empty(len(comp), dtype=np.int64)
    pos[order] = np.arange(len(comp))
    local = np.searchsorted(comp, G.edges)
    inside = np.isin(G.edges[:, 0], comp)
    le = pos[local[inside]]
    lo, hi = le.min(axis=1), le.max(axis=1)
    nc = len(comp)
    # prefix k holds the first k vertices of the order; an edge crosses iff lo < k <= hi
    sigma = np.cumsum(np.bincount(lo, minlength=nc)) - np.cumsum(np.bincount(hi, minlength=nc))
    sigma = sigma[: nc - 1]
    delta = np.cumsum(deg[order])[: nc - 1]
    total = deg.sum()
    low = np.minimum(delta, total - delta)
    h = np.where(low > 0, sigma / np.where(low > 0, low, 1), np.inf)
    best = int(np.argmin(h))
    members = tuple(sorted(int(v) for v in comp[order[: best + 1]]))
    return SweepResult(float(h[best]), members, lambda2, converged, iters)
