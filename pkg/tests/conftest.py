"""Independent oracles shared by the test modules.

Nothing here calls into the code under test except for plain data access,
so agreement with these helpers is real evidence.
"""

from __future__ import annotations

import itertools
import math

import numpy as np
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def brute_edges(points: np.ndarray, r: float) -> np.ndarray:
    """All pairs i < j with squared distance <= r*r, lexicographic."""
    n = len(points)
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            if float(np.sum((points[i] - points[j]) ** 2)) <= r * r:
                out.append((i, j))
    return np.array(out, dtype=np.int64).reshape(-1, 2)


def brute_cut(n: int, edges, S) -> tuple[int, int, int, float]:
    """(delta_S, delta_Sc, sigma_S, h) by direct counting."""
    S = set(S)
    deg = [0] * n
    for i, j in edges:
        deg[i] += 1
        deg[j] += 1
    d_in = sum(deg[i] for i in S)
    d_out = sum(deg) - d_in
    sigma = sum(1 for i, j in edges if (i in S) != (j in S))
    low = min(d_in, d_out)
    return d_in, d_out, sigma, (math.inf if low == 0 else sigma / low)


def brute_conductance(n: int, edges) -> float:
    """min h(S) over every nonempty proper subset, by itertools."""
    best = math.inf
    for k in range(1, n):
        for S in itertools.combinations(range(n), k):
            best = min(best, brute_cut(n, edges, S)[3])
    return best


def grid_area(contains, lo, hi, m: int = 2000) -> float:
    """Midpoint-rule area of {contains} in the box [lo, hi]."""
    xs = lo[0] + (hi[0] - lo[0]) * (np.arange(m) + 0.5) / m
    ys = lo[1] + (hi[1] - lo[1]) * (np.arange(m) + 0.5) / m
    X, Y = np.meshgrid(xs, ys)
    pts = np.column_stack([X.ravel(), Y.ravel()])
    return float(np.count_nonzero(contains(pts))) * (hi[0] - lo[0]) * (hi[1] - lo[1]) / m**2


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
