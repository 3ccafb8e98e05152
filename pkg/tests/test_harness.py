import math
import pathlib

import pytest
from hypothesis import given, strategies as st

from cheeger_lab.cli import EXIT_BUDGET, EXIT_CHECK, EXIT_CONFIG, EXIT_OK, main
from cheeger_lab.estimators import hoeffding_tail_bound, log_squared_radius
from cheeger_lab.harness import ConfigError, ExperimentReport, ReportRow, check_report, parse_config, run_experiment
from cheeger_lab.harness.checks import improving_steps, trend_check
from cheeger_lab.harness.defaults import DEFAULTS
from cheeger_lab.harness.experiments import measure_target, pointwise_targets, worker_count
from cheeger_lab.harness.report import errors, format_float, parse_float

CONFIGS = pathlib.Path(__file__).resolve().parent.parent / "configs"

SMALL = """\
experiment = pointwise
domain = disk
domain.center = 0, 0
domain.radius = 1
candidate = halfspace
candidate.angle = 0
candidate.offset = 0
schedule = 200, 400
replicates = 3
master_seed = 9
"""


@pytest.mark.parametrize("kind", sorted(DEFAULTS))
def test_shipped_configs_equal_the_defaults(kind):
    assert (CONFIGS / f"{kind}.cfg").read_text() == DEFAULTS[kind]
    assert parse_config(DEFAULTS[kind]).experiment == kind


def test_parse_small_config():
    cfg = parse_config(SMALL)
    assert cfg.schedule == (200, 400) and cfg.replicates == 3
    assert cfg.r_n(400) == log_squared_radius(400, 2)
    assert cfg.candidate.offset == 0.0


@pytest.mark.parametrize(
    "text,line,needle",
    [
        (SMALL + "colour = blue\n", 11, "unknown key"),
        (SMALL + "replicates = 4\n", 11, "duplicate key"),
        (SMALL.replace("schedule = 200, 400", "schedule = 400, 200"), 8, "strictly increasing"),
        (SMALL.replace("schedule = 200, 400", "schedule = 1, 2"), 8, "at least 2"),
        (SMALL + "r_rate = 0.1, 0.2, 0.3\n", 11, "one value or one per"),
        (SMALL + "r_rate = -0.1\n", 11, "positive"),
        (SMALL + "r_rate = fastest\n", 11, "must be one of"),
        (SMALL.replace("replicates = 3", "replicates = three"), 9, "integer"),
        (SMALL.replace("domain.radius = 1", "domain.radius = -1"), 2, "bad domain"),
        (SMALL + "just words\n", 11, "key = value"),
    ],
)
def test_config_errors_carry_line_numbers(text, line, needle):
    with pytest.raises(ConfigError) as info:
        parse_config(text, source="x.cfg")
    assert info.value.line == line
    assert str(info.value).startswith(f"x.cfg:{line}: ")
    assert needle in str(info.value)


def test_missing_required_key():
    with pytest.raises(ConfigError, match="missing required key 'schedule'"):
        parse_config(SMALL.replace("schedule = 200, 400\n", ""))


def test_per_n_rates_and_overrides():
    cfg = parse_config(SMALL + "r_rate = 0.3, 0.2\nrho_rate = 0.05\n")
    assert (cfg.r_n(200), cfg.r_n(400), cfg.rho_n(400)) == (0.3, 0.2, 0.05)
    cfg2 = cfg.with_overrides({"schedule": "100, 200", "r_rate": "0.25"})
    assert cfg2.schedule == (100, 200) and cfg2.r_n(100) == 0.25 and cfg2.replicates == 3


@given(st.one_of(st.floats(allow_nan=False), st.just(math.inf), st.just(-math.inf), st.none()))
def test_float_cells_round_trip(x):
    assert parse_float(format_float(x)) == x


def test_errors_helper():
    assert errors(1.0, None) == (None, None)
    assert errors(1.5, 1.0) == (0.5, 0.5)
    assert errors(0.1, 0.0) == (0.1, None)
    assert errors(math.inf, math.inf) == (0.0, 0.0)


def test_report_csv_round_trip_is_byte_identical():
    report = run_experiment(parse_config(SMALL))
    text = report.to_csv()
    assert ExperimentReport.from_csv(text).to_csv() == text
    assert text.splitlines()[0] == "experiment,n,replicate,seed,r_n,rho_n,quantity,param,value,target,abs_error,rel_error,flag,detail,wall_ms"


def test_rows_are_ordered_by_n_then_replicate(monkeypatch):
    monkeypatch.setenv("CHEEGER_LAB_THREADS", "3")
    assert worker_count() == 3
    rows = run_experiment(parse_config(SMALL)).rows
    keys = [(r.n, r.replicate) for r in rows]
    assert keys == sorted(keys)


def test_runs_are_reproducible_across_thread_counts(monkeypatch):
    cfg = parse_config(SMALL)
    monkeypatch.setenv("CHEEGER_LAB_THREADS", "1")
    a = run_experiment(cfg).to_csv()
    monkeypatch.setenv("CHEEGER_LAB_THREADS", "4")
    assert run_experiment(cfg).to_csv() == a


def test_targets_recompute_from_geometry():
    cfg = parse_config(SMALL)
    targets = pointwise_targets(cfg.candidate, cfg.domain)
    for row in run_experiment(cfg).rows:
        assert abs(row.target - targets[row.quantity]) <= 1e-12 * max(1.0, abs(targets[row.quantity]))
    assert targets["h_n"] == pytest.approx(4 / math.pi, abs=1e-12)


def test_first_moment_target_of_the_half_disk():
    cfg = parse_config(SMALL)
    left = cfg.candidate.complemented()
    assert abs(measure_target(cfg.domain, left, "x1") + 2 / (3 * math.pi)) <= 1e-8


def test_hoeffding_rows_recompute_the_bound():
    cfg = parse_config(DEFAULTS["hoeffding"]).with_overrides({"replicates": "200", "schedule": "50"})
    report = run_experiment(cfg)
    rows = report.select("exceedance")
    assert len(rows) == 10
    for r in rows:
        sigma2 = float(r.detail.split("sigma2=")[1].split(";")[0])
        assert abs(r.target - hoeffding_tail_bound(50, float(r.param), sigma2, 1.0)) <= 1e-15
    # the kernel is bounded by 1, so deviations past 1 never happen
    far = parse_config(DEFAULTS["hoeffding"]).with_overrides({"replicates": "50", "schedule": "50", "bound_floor": "1e-300"})
    assert run_experiment(far).select("exceedance")[-1].value == 0.0


def test_trend_helpers():
    assert improving_steps([3, 2, 2, 1]) == 3
    assert improving_steps([3, 2, 2, 1], strict=True) == 2
    assert trend_check("t", {1: 3.0, 2: 2.0, 3: 2.5, 4: 1.0}, 3, strict=False).passed is False
    assert trend_check("t", {1: 3.0, 2: 2.0}, 3, strict=False).passed is True


def test_failed_rows_mark_the_report():
    row = ReportRow("estimate", 10, 0, 1, 0.5, 0.1, "h_ddag_min", value=math.inf, flag="failed")
    assert ExperimentReport("estimate", [row]).failed


def test_graph_oracle_reports_zero_on_disconnected_instances():
    cfg = parse_config(DEFAULTS["graph-oracle"]).with_overrides({"r_rate": "0.45", "replicates": "30"})
    report = run_experiment(cfg)
    exact = report.select("exact_H")
    sweep = report.select("sweep_h")
    zero = [k for k, row in enumerate(exact) if row.value == 0.0]
    assert zero, "expected some disconnected instances at this radius"
    assert all(sweep[k].value == 0.0 for k in zero)
    assert all(c.passed for c in check_report(report, cfg))


def test_cli_exit_codes(tmp_path, capsys):
    good = tmp_path / "small.cfg"
    good.write_text(SMALL)
    assert main(["experiment", "pointwise", "--config", str(good), "--output", str(tmp_path / "run")]) == EXIT_OK
    assert (tmp_path / "run.csv").exists() and (tmp_path / "run.json").exists()
    bad = tmp_path / "bad.cfg"
    bad.write_text(SMALL + "colour = blue\n")
    assert main(["experiment", "pointwise", "--config", str(bad)]) == EXIT_CONFIG
    assert f"{bad}:11:" in capsys.readouterr().err
    assert main(["experiment", "graph-oracle", "--schedule", "30", "--replicates", "1"]) == EXIT_BUDGET
    # an impossible threshold makes --check fail
    code = main(["experiment", "pointwise", "--config", str(good), "--check", "--set", "check.rel_error=1e-9"])
    assert code == EXIT_CHECK
    assert "FAIL  h_n relative error" in capsys.readouterr().out


def test_cli_small_commands(tmp_path, capsys):
    assert main(["constants", "--dims", "2"]) == EXIT_OK
    assert "gamma_d=0.66666666666666" in capsys.readouterr().out
    assert main(["constants", "--dims", "0"]) == EXIT_CONFIG
    pts = tmp_path / "p.csv"
    edges = tmp_path / "g.txt"
    assert main(["sample", "--n", "12", "--seed", "3", "--out", str(pts)]) == EXIT_OK
    assert main(["graph", "--points", str(pts), "--r", "0.9", "--out", str(edges)]) == EXIT_OK
    capsys.readouterr()
    assert main(["exact-cheeger", "--edges", str(edges)]) == EXIT_OK
    exact = float(capsys.readouterr().out.split("H = ")[1].split()[0])
    assert main(["sweep", "--edges", str(edges)]) == EXIT_OK
    sweep = float(capsys.readouterr().out.split("h_upper = ")[1].split()[0])
    assert sweep >= exact
    assert main(["cut", "--offset", "0"]) == EXIT_OK
    assert "h = 1.2732395447351" in capsys.readouterr().out
    assert main(["cut", "--edges", str(edges), "--subset", "0,1,2"]) == EXIT_OK
    assert "sigma_S" in capsys.readouterr().out
