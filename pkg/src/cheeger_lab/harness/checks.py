"""Pass/fail thresholds applied to finished reports (``--check`` mode)."""

from __future__ import annotations

from dataclasses import asdict, dataclass

from cheeger_lab.harness.config import ExperimentConfig
from cheeger_lab.harness.report import ExperimentReport


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def as_dict(self) -> dict:
        return asdict(self)

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}: {self.detail}"


def improving_steps(medians: list[float], strict: bool = False) -> int:
    """Number of consecutive pairs along which the sequence does not increase (decreases when strict)."""
    return sum(1 for a, b in zip(medians, medians[1:]) if (b < a if strict else b <= a))


def trend_check(name: str, medians: dict[int, float], wanted: int, strict: bool) -> CheckResult:
    values = [medians[n] for n in sorted(medians)]
    steps = len(values) - 1
    need = min(wanted, steps)
    got = improving_steps(values, strict)
    shown = ", ".join(f"{n}:{medians[n]:.4g}" for n in sorted(medians))
    return CheckResult(name, got >= need, f"{got} of {steps} steps improve (need {need}); medians {shown}")


def _at_largest(medians: dict[int, float]) -> tuple[int, float]:
    n = max(medians)
    return n, medians[n]


def check_pointwise(report: ExperimentReport, cfg: ExperimentConfig) -> list[CheckResult]:
    rel = report.medians("h_n", "rel_error")
    n, med = _at_largest(rel)
    return [
        CheckResult("h_n relative error", med <= cfg.check_rel_error, f"median {med:.4g} at n={n} (limit {cfg.check_rel_error})"),
        trend_check("h_n error trend", report.medians("h_n", "abs_error"), cfg.trend_steps, strict=False),
    ]


def _estimate_checks(report: ExperimentReport, cfg: ExperimentConfig) -> list[CheckResult]:
    failed = sum(1 for r in report.rows if r.flag == "failed")
    out = [CheckResult("finite minimum", failed == 0, f"{failed} replicates with an all-infinite family")]
    if failed:
        return out
    rel = report.medians("h_ddag_min", "rel_error")
    n, med = _at_largest(rel)
    out.append(CheckResult("min h_ddag relative error", med <= cfg.check_rel_error, f"median {med:.4g} at n={n} (limit {cfg.check_rel_error})"))
    l1 = report.medians("l1_recovery", "value")
    n, med = _at_largest(l1)
    limit = cfg.check_l1_fraction * cfg.domain.volume()
    out.append(CheckResult("L1 recovery", med <= limit, f"median {med:.4g} at n={n} (limit {limit:.4g})"))
    return out


def check_measure(report: ExperimentReport, cfg: ExperimentConfig) -> list[CheckResult]:
    out = _estimate_checks(report, cfg)
    if not out[0].passed:
        return out
    disc = report.medians("max_discrepancy", "value")
    n, med = _at_largest(disc)
    out.append(CheckResult("max discrepancy", med <= cfg.check_discrepancy, f"median {med:.4g} at n={n} (limit {cfg.check_discrepancy})"))
    out.append(trend_check("discrepancy trend", disc, cfg.trend_steps, strict=True))
    return out


def check_hoeffding(report: ExperimentReport, cfg: ExperimentConfig) -> list[CheckResult]:
    rows = report.select("exceedance")
    bad = [r for r in rows if r.flag == "exceeds"]
    worst = max((r.abs_error for r in rows), default=0.0)
    return [CheckResult("tail bound", not bad, f"{len(bad)} of {len(rows)} grid points exceed bound + {cfg.se_multiplier:g} SE; largest margin {worst:.3g}")]


def check_graph_oracle(report: ExperimentReport, cfg: ExperimentConfig) -> list[CheckResult]:
    sweep = report.select("sweep_h")
    relabel = report.select("relabel_H")
    return [
        CheckResult("sweep dominates exact", all(r.flag == "" for r in sweep), f"{sum(r.flag != '' for r in sweep)} violations in {len(sweep)} instances"),
        CheckResult("relabeling invariance", all(r.flag == "" for r in relabel), f"{sum(r.flag != '' for r in relabel)} violations in {len(relabel)} instances"),
    ]


CHECKS = {
    "pointwise": check_pointwise,
    "estimate": _estimate_checks,
    "measure": check_measure,
    "hoeffding": check_hoeffding,
    "graph-oracle": check_graph_oracle,
}


def check_report(report: ExperimentReport, cfg: ExperimentConfig) -> list[CheckResult]:
    results = CHECKS[cfg.experiment](report, cfg)
    report.checks = results
    return results
