"""Experiment runners.

Every runner maps (scheduled n, replicate index) to report rows.  Replicate
k draws its sample with ``derive_seed(master_seed, k)`` at every n, so the
sample at a smaller n is a prefix of the sample at a larger one.  Tasks run
on a thread pool capped by ``CHEEGER_LAB_THREADS``; rows are emitted in
(n, replicate) order whatever the scheduling.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from cheeger_lab.estimators import (
    EstimatorContext,
    KernelSpec,
    PenalizedConfig,
    candidate_family,
    h_n,
    hoeffding_tail_bound,
    minimize_h_n_ddag,
    mu_n,
    nu_n,
    u_statistic,
)
from cheeger_lab.geometry.candidates import CandidateSet, HalfSpace
from cheeger_lab.geometry.cheeger import known_cheeger, orbit_l1
from cheeger_lab.geometry.constants import Constants, unit_ball_volume
from cheeger_lab.geometry.cuts import region_integral, relative_cut_quantities
from cheeger_lab.geometry.domains import Domain
from cheeger_lab.geometry.pairs import perimeter_kernel_mean, volume_kernel_mean
from cheeger_lab.geometry.serialize import to_text
from cheeger_lab.graph import EXACT_BUDGET, BudgetError, build_graph, conductance_exact, spectral_sweep
from cheeger_lab.harness.config import ExperimentConfig
from cheeger_lab.harness.report import ExperimentReport, ReportRow, row_with_target
from cheeger_lab.sampling import derive_seed, generator, sample_uniform

THREADS_ENV = "CHEEGER_LAB_THREADS"


def worker_count() -> int:
    text = os.environ.get(THREADS_ENV, "")
    if text.strip():
        return max(1, int(text))
    return max(1, min(os.cpu_count() or 1, 8))


def _run_tasks(cfg: ExperimentConfig, task: Callable[[int, int], list[ReportRow]]) -> list[ReportRow]:
    jobs = [(n, k) for n in cfg.schedule for k in range(cfg.replicates)]

    def timed(job):
        start = time.perf_counter()
        rows = task(*job)
        if cfg.record_timing:
            ms = 1000.0 * (time.perf_counter() - start)
            rows = [replace(r, wall_ms=ms) for r in rows]
        return rows

    workers = worker_count()
    if workers == 1:
        results = [timed(job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(timed, jobs))
    return [row for rows in results for row in rows]


def _base(cfg: ExperimentConfig, n: int, k: int, with_rho: bool) -> tuple[dict, int]:
    seed = derive_seed(cfg.master_seed, k)
    base = dict(
        experiment=cfg.experiment,
        n=n,
        replicate=k,
        seed=seed,
        r_n=cfg.r_n(n),
        rho_n=cfg.rho_n(n) if with_rho else None,
    )
    return base, seed


def default_cut(M: Domain) -> HalfSpace:
    """The cut through the domain's center orthogonal to the first axis."""
    normal = np.zeros(M.dim)
    normal[0] = 1.0
    return HalfSpace(normal, float(M.center_array[0]))


def pointwise_targets(A: CandidateSet, M: Domain) -> dict[str, float]:
    cq = relative_cut_quantities(A, M)
    tau = M.volume()
    return {"mu_n": cq.vol_in / tau, "nu_n": cq.perimeter / tau, "h_n": cq.h}


def run_pointwise(cfg: ExperimentConfig) -> ExperimentReport:
    M, A = cfg.domain, cfg.candidate
    targets = pointwise_targets(A, M)

    def task(n, k):
        base, seed = _base(cfg, n, k, with_rho=False)
        ctx = EstimatorContext.from_sample(sample_uniform(M, n, seed), M, base["r_n"])
        values = {"mu_n": mu_n(ctx, A), "nu_n": nu_n(ctx, A), "h_n": h_n(ctx, A)}
        rows = []
        for name, value in values.items():
            flag = "degenerate" if name == "h_n" and math.isinf(value) else ""
            rows.append(row_with_target(base, name, value, targets[name], flag=flag))
        return rows

    return ExperimentReport(cfg.experiment, _run_tasks(cfg, task), cfg.raw)


@dataclass(frozen=True)
class PenalizedOutcome:
    value: float
    argmin: CandidateSet | None
    l1: float | None
    closest: CandidateSet | None
    inside: np.ndarray | None


def _penalized_fit(cfg: ExperimentConfig, n: int, seed: int):
    M = cfg.domain
    r, rho = cfg.r_n(n), cfg.rho_n(n)
    sample = sample_uniform(M, n, seed)
    ctx = EstimatorContext.from_sample(sample, M, r)
    family = candidate_family(M, rho, cfg.k_angle, cfg.k_offset, cfg.ball_grid, cfg.ball_radii)
    result = minimize_h_n_ddag(ctx, PenalizedConfig(rho, family, r, n))
    if result.failed:
        return PenalizedOutcome(math.inf, None, None, None, None), sample
    l1, closest = orbit_l1(result.argmin, M)
    inside = result.argmin.contains(sample.points)
    return PenalizedOutcome(result.value, result.argmin, l1, closest, inside), sample


def _estimate_rows(base: dict, outcome: PenalizedOutcome, H: float) -> list[ReportRow]:
    if outcome.argmin is None:
        return [row_with_target(base, "h_ddag_min", math.inf, H, flag="failed", detail="every candidate is infinite")]
    return [
        row_with_target(base, "h_ddag_min", outcome.value, H, detail=outcome.argmin.describe()),
        ReportRow(quantity="l1_recovery", value=outcome.l1, detail=outcome.closest.describe(), **base),
    ]


def run_estimate(cfg: ExperimentConfig) -> ExperimentReport:
    H = known_cheeger(cfg.domain).value

    def task(n, k):
        base, seed = _base(cfg, n, k, with_rho=True)
        outcome, _ = _penalized_fit(cfg, n, seed)
        return _estimate_rows(base, outcome, H)

    return ExperimentReport(cfg.experiment, _run_tasks(cfg, task), cfg.raw)


def suite_functions(M: Domain) -> dict[str, Callable]:
    """Bounded continuous test functions: constant, centered coordinates and an off-center Gaussian bump."""
    c = M.center_array
    s = M.inradius()
    bump = c + 0.25 * s * np.array([1.0, 0.5])
    width2 = 2 * (0.5 * s) ** 2
    return {
        "one": lambda x, y: 1.0 + 0.0 * x,
        "x1": lambda x, y: x - c[0],
        "x2": lambda x, y: y - c[1],
        "bump": lambda x, y: np.exp(-((x - bump[0]) ** 2 + (y - bump[1]) ** 2) / width2),
    }


_TARGET_CACHE: dict[tuple[str, str, str], float] = {}


def measure_target(M: Domain, A: CandidateSet, name: str) -> float:
    """Q f = (1 / Vol M) * integral of f over A cap M, by nested quadrature."""
    key = (to_text(M), to_text(A), name)
    if key not in _TARGET_CACHE:
        f = suite_functions(M)[name]
        _TARGET_CACHE[key] = region_integral(M, lambda x, y: float(f(x, y)), A=A) / M.volume()
    return _TARGET_CACHE[key]


def run_measure(cfg: ExperimentConfig) -> ExperimentReport:
    M = cfg.domain
    H = known_cheeger(M).value
    suite = suite_functions(M)

    def task(n, k):
        base, seed = _base(cfg, n, k, with_rho=True)
        outcome, sample = _penalized_fit(cfg, n, seed)
        rows = _estimate_rows(base, outcome, H)
        if outcome.argmin is None:
            return rows
        pts = sample.points
        worst = 0.0
        for name, f in suite.items():
            q_n = float(np.sum(np.where(outcome.inside, f(pts[:, 0], pts[:, 1]), 0.0))) / n
            target = measure_target(M, outcome.closest, name)
            rows.append(row_with_target(base, "Q_n", q_n, target, param=name))
            worst = max(worst, abs(q_n - target))
        rows.append(row_with_target(base, "max_discrepancy", worst, 0.0))
        return rows

    return ExperimentReport(cfg.experiment, _run_tasks(cfg, task), cfg.raw)


@dataclass(frozen=True)
class KernelBounds:
    mean: float
    sigma2: float
    b: float


def kernel_bounds(kind: str, A: CandidateSet, M: Domain, r: float) -> KernelBounds:
    """Mean of the kernel and the variance and range bounds fed to the tail bound.

    Volume kernel: Var <= E phi^2 <= E phi <= mu(A) * omega_d r^d / tau and
    |phi - E phi| <= 1.  Perimeter kernel: phibar takes values in {0, 1/2},
    so Var <= E phibar^2 = E phibar / 2 and |phibar - E phibar| <= 1/2.
    """
    tau = M.volume()
    if kind == "volume":
        mu_A = relative_cut_quantities(A, M).vol_in / tau
        return KernelBounds(volume_kernel_mean(A, M, r), mu_A * unit_ball_volume(M.dim) * r**M.dim / tau, 1.0)
    mean = perimeter_kernel_mean(A, M, r)
    return KernelBounds(mean, 0.5 * mean, 0.5)


def t_grid(n: int, bounds: KernelBounds, points: int, floor: float) -> np.ndarray:
    """``points`` evenly spaced t up to where the tail bound falls to ``floor``."""
    L = -math.log(floor)
    b, s2 = bounds.b, bounds.sigma2
    t_max = (3 * b * L + math.sqrt(9 * b * b * L * L + 20 * n * s2 * L)) / (2 * n)
    return t_max * np.arange(1, points + 1) / points


def run_hoeffding(cfg: ExperimentConfig) -> ExperimentReport:
    M = cfg.domain
    A = cfg.candidate or default_cut(M)
    rows: list[ReportRow] = []
    for n in cfg.schedule:
        r = cfg.r_n(n)
        bounds = kernel_bounds(cfg.kernel, A, M, r)
        kernel = KernelSpec(cfg.kernel, A, r)

        def task(n_, k):
            base, seed = _base(cfg, n_, k, with_rho=False)
            sample = sample_uniform(M, n_, seed)
            value = u_statistic(kernel, sample, build_graph(sample, r))
            return [row_with_target(base, "u_statistic", value, bounds.mean)]

        sub = replace(cfg, schedule=(n,))
        per_rep = _run_tasks(sub, task)
        rows.extend(per_rep)
        deviations = np.array([row.value for row in per_rep]) - bounds.mean
        N = len(deviations)
        agg = dict(experiment=cfg.experiment, n=n, replicate=-1, seed=None, r_n=r, rho_n=None)
        for t in t_grid(n, bounds, cfg.t_points, cfg.bound_floor):
            t = float(t)
            empirical = float(np.count_nonzero(deviations >= t)) / N
            bound = hoeffding_tail_bound(n, t, bounds.sigma2, bounds.b)
            se = math.sqrt(bound * (1 - bound) / N)
            flag = "exceeds" if empirical > bound + cfg.se_multiplier * se else ""
            detail = f"se={format(se, '.17g')};sigma2={format(bounds.sigma2, '.17g')};b={format(bounds.b, '.17g')}"
            rows.append(
                ReportRow(
                    quantity="exceedance",
                    param=format(t, ".17g"),
                    value=empirical,
                    target=bound,
                    abs_error=empirical - bound,
                    flag=flag,
                    detail=detail,
                    **agg,
                )
            )
    return ExperimentReport(cfg.experiment, rows, cfg.raw)


def run_graph_oracle(cfg: ExperimentConfig) -> ExperimentReport:
    M = cfg.domain
    if max(cfg.schedule) > EXACT_BUDGET:
        raise BudgetError(f"exact conductance is limited to n <= {EXACT_BUDGET}; schedule has {max(cfg.schedule)}")
    try:
        H_M = known_cheeger(M).value
    except ValueError:
        H_M = None
    consts = Constants.for_dim(M.dim)

    def task(n, k):
        base, seed = _base(cfg, n, k, with_rho=False)
        r = base["r_n"]
        G = build_graph(sample_uniform(M, n, seed), r)
        exact = conductance_exact(G)
        sweep = spectral_sweep(G)
        perm = generator(seed).permutation(n)
        relabeled = conductance_exact(G.relabeled(perm)).H
        tol = 1e-12 * (1.0 if math.isinf(exact.H) else max(1.0, exact.H))
        dominated = sweep.h_upper >= exact.H or abs(sweep.h_upper - exact.H) <= tol
        scaled = consts.omega_d / (consts.gamma_d * r) * exact.H
        members = " ".join(map(str, exact.members))
        return [
            ReportRow(quantity="exact_H", value=exact.H, detail=f"members={members}", **base),
            row_with_target(base, "sweep_h", sweep.h_upper, exact.H, flag="" if dominated else "violation",
                            detail=f"lambda2={format(sweep.lambda2, '.17g')};converged={sweep.converged}"),
            row_with_target(base, "relabel_H", relabeled, exact.H, flag="" if relabeled == exact.H else "violation"),
            row_with_target(base, "scaled_H", scaled, H_M),
        ]

    return ExperimentReport(cfg.experiment, _run_tasks(cfg, task), cfg.raw)


RUNNERS = {
    "pointwise": run_pointwise,
    "estimate": run_estimate,
    "measure": run_measure,
    "hoeffding": run_hoeffding,
    "graph-oracle": run_graph_oracle,
}


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    return RUNNERS[cfg.experiment](cfg)
