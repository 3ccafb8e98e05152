"""Configuration, experiment runners, reports and pass/fail checks."""

from cheeger_lab.harness.checks import CheckResult, check_report
from cheeger_lab.harness.config import ConfigError, ExperimentConfig, load_config, parse_config
from cheeger_lab.harness.experiments import (
    run_estimate,
    run_experiment,
    run_graph_oracle,
    run_hoeffding,
    run_measure,
    run_pointwise,
)
from cheeger_lab.harness.report import ExperimentReport, ReportRow
