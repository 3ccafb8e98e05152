"""Reproducible uniform sampling from domains.

Random numbers come from the Philox4x64-10 counter-based generator
(Salmon et al., SC'11) keyed directly by the 64-bit seed with a zero
counter, via ``numpy.random.Philox(key=seed)``.  Each uniform double is
``(next_uint64 >> 11) * 2**-53``.  Rejection sampling draws fixed blocks of
``BLOCK`` candidate points from the bounding box, coordinates filled
row-major, and keeps those inside the domain in draw order, so a sample of
size n is always a prefix of a larger sample with the same seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from cheeger_lab.geometry.domains import Domain

BLOCK = 8192
MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


@dataclass(frozen=True, eq=False)
class Sample:
    points: np.ndarray
    seed: int
    domain: Domain

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def dim(self) -> int:
        return self.points.shape[1]


def _splitmix64_finalize(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(master_seed: int, replicate_index: int) -> int:
    """Seed for one replicate: SplitMix64 finalizer of master + (index + 1) * golden gamma (mod 2**64).

    Both steps are bijections of 64-bit words, so distinct indices below
    2**64 never collide for a fixed master seed.
    """
    z = (master_seed + (replicate_index + 1) * GOLDEN) & MASK64
    return _splitmix64_finalize(z)


def generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=int(seed) & MASK64))


def sample_uniform(M: Domain, n: int, seed: int) -> Sample:
    """n i.i.d. uniform points of M by rejection from its bounding box."""
    if n < 0:
        raise ValueError("sample size must be nonnegative")
    d = M.dim
    if n == 0:
        return Sample(np.empty((0, d)), seed, M)
    lo, hi = M.bbox()
    rng = generator(seed)
    kept = []
    count = 0
    while count < n:
        cand = lo + (hi - lo) * rng.random((BLOCK, d))
        cand = cand[M.contains(cand)]
        kept.append(cand)
        count += len(cand)
    points = np.concatenate(kept)[:n]
    return Sample(np.ascontiguousarray(points), seed, M)


def points_csv_text(points: np.ndarray) -> str:
    """Point-cloud dump: header x1,...,xd then one point per row at 17 significant digits."""
    d = points.shape[1]
    lines = [",".join(f"x{k + 1}" for k in range(d))]
    lines += [",".join(format(float(v), ".17g") for v in row) for row in points]
    return "\n".join(lines) + "\n"


def write_points_csv(path, points: np.ndarray) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(points_csv_text(points))


def read_points_csv(path) -> np.ndarray:
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        rows = [[float(v) for v in line.split(",")] for line in fh if line.strip()]
    if not rows:
        return np.empty((0, len(header)))
    return np.asarray(rows, dtype=float)
