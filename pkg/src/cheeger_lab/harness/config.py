"""Flat ``key = value`` experiment configuration.

Example::

    experiment = pointwise
    domain = disk
    domain.center = 0, 0
    domain.radius = 1
    candidate = halfspace
    candidate.angle = 0
    candidate.offset = 0
    schedule = 500, 2000, 8000, 20000
    replicates = 20
    master_seed = 20240611
    r_rate = log_squared

Rates are ``log_squared``, ``power`` (for ``r_rate``), ``inverse_log``
(for ``rho_rate``), a single number used at every n, or one number per
scheduled n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from cheeger_lab.estimators import inverse_log_rho, log_squared_radius, power_radius
from cheeger_lab.geometry.candidates import CandidateSet
from cheeger_lab.geometry.domains import Domain
from cheeger_lab.geometry.serialize import candidate_from_mapping, domain_from_mapping

EXPERIMENTS = ("pointwise", "estimate", "measure", "hoeffding", "graph-oracle")
R_RATES = {"log_squared": log_squared_radius, "power": power_radius}
RHO_RATES = {"inverse_log": lambda n, d: inverse_log_rho(n)}
DEFAULT_R_RATE = {
    "pointwise": "log_squared",
    "estimate": "power",
    "measure": "power",
    "hoeffding": "log_squared",
    "graph-oracle": "log_squared",
}


class ConfigError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str = "<config>"):
        self.line = line
        prefix = f"{source}:{line}: " if line is not None else f"{source}: "
        super().__init__(prefix + message)


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    domain: Domain
    schedule: tuple[int, ...]
    replicates: int = 20
    master_seed: int = 0
    candidate: CandidateSet | None = None
    r_rate: str | tuple[float, ...] = "log_squared"
    rho_rate: str | tuple[float, ...] = "inverse_log"
    k_angle: int = 36
    k_offset: int = 41
    ball_grid: int = 0
    ball_radii: tuple[float, ...] = ()
    kernel: str = "volume"
    t_points: int = 10
    bound_floor: float = 1e-3
    se_multiplier: float = 3.0
    check_rel_error: float = 0.10
    check_l1_fraction: float = 0.10
    check_discrepancy: float = 0.05
    trend_steps: int = 3
    output: str | None = None
    record_timing: bool = False
    raw: tuple[tuple[str, str], ...] = field(default=(), compare=False, repr=False)

    def rate_at(self, which: str, n: int) -> float:
        spec = self.r_rate if which == "r" else self.rho_rate
        table = R_RATES if which == "r" else RHO_RATES
        if isinstance(spec, str):
            return float(table[spec](n, self.domain.dim))
        if len(spec) == 1:
            return float(spec[0])
        return float(spec[self.schedule.index(n)])

    def r_n(self, n: int) -> float:
        return self.rate_at("r", n)

    def rho_n(self, n: int) -> float:
        return self.rate_at("rho", n)

    def with_overrides(self, overrides: dict[str, str]) -> "ExperimentConfig":
        merged = dict(self.raw)
        merged.update(overrides)
        return parse_config("".join(f"{k} = {v}\n" for k, v in merged.items()), source="<overrides>")


_INT_KEYS = {"replicates", "master_seed", "k_angle", "k_offset", "ball_grid", "t_points", "trend_steps"}
_FLOAT_KEYS = {
    "bound_floor": "bound_floor",
    "se_multiplier": "se_multiplier",
    "check.rel_error": "check_rel_error",
    "check.l1_fraction": "check_l1_fraction",
    "check.discrepancy": "check_discrepancy",
}
KNOWN_KEYS = (
    {"experiment", "domain", "candidate", "schedule", "r_rate", "rho_rate", "ball_radii", "kernel", "output", "record_timing"}
    | _INT_KEYS
    | set(_FLOAT_KEYS)
)


def _numbers(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.split(",") if v.strip())


def _parse_lines(text: str, source: str) -> tuple[dict[str, str], dict[str, int]]:
    values: dict[str, str] = {}
    lines: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno, source)
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError("empty key", lineno, source)
        if key in values:
            raise ConfigError(f"duplicate key {key!r} (first set on line {lines[key]})", lineno, source)
        values[key] = value
        lines[key] = lineno
    return values, lines


def parse_config(text: str, source: str = "<config>") -> ExperimentConfig:
    values, lines = _parse_lines(text, source)

    def fail(key, message):
        raise ConfigError(message, lines.get(key), source)

    for key in values:
        if key in KNOWN_KEYS or key.startswith(("domain.", "candidate.")):
            continue
        fail(key, f"unknown key {key!r}")
    for key in ("experiment", "domain", "schedule"):
        if key not in values:
            raise ConfigError(f"missing required key {key!r}", None, source)

    experiment = values["experiment"]
    if experiment not in EXPERIMENTS:
        fail("experiment", f"unknown experiment {experiment!r}; expected one of {', '.join(EXPERIMENTS)}")

    def sub_mapping(prefix):
        m = {k[len(prefix) + 1 :]: v for k, v in values.items() if k.startswith(prefix + ".")}
        m["kind"] = values[prefix]
        return m

    try:
        domain = domain_from_mapping(sub_mapping("domain"))
    except (KeyError, ValueError) as exc:
        fail("domain", f"bad domain: {exc}")
    candidate = None
    if "candidate" in values:
        try:
            candidate = candidate_from_mapping(sub_mapping("candidate"))
        except (KeyError, ValueError) as exc:
            fail("candidate", f"bad candidate: {exc}")
    elif experiment == "pointwise":
        raise ConfigError("pointwise experiments need a candidate", None, source)

    try:
        schedule = tuple(int(v) for v in values["schedule"].split(","))
    except ValueError:
        fail("schedule", "schedule must be a comma-separated list of integers")
    if any(b <= a for a, b in zip(schedule, schedule[1:])):
        fail("schedule", "schedule must be strictly increasing")
    if not schedule or schedule[0] < 2:
        fail("schedule", "every scheduled n must be at least 2")

    kwargs: dict = {}
    for key in _INT_KEYS & values.keys():
        try:
            kwargs[key] = int(values[key])
        except ValueError:
            fail(key, f"{key} must be an integer")
    for key, attr in _FLOAT_KEYS.items():
        if key in values:
            try:
                kwargs[attr] = float(values[key])
            except ValueError:
                fail(key, f"{key} must be a number")
    if kwargs.get("replicates", 1) < 1:
        fail("replicates", "replicates must be at least 1")
    if kwargs.get("master_seed", 0) < 0:
        fail("master_seed", "master_seed must be nonnegative")

    def rate(key, table, default):
        text = values.get(key, default)
        if text in table:
            return text
        try:
            nums = _numbers(text)
        except ValueError:
            fail(key, f"{key} must be one of {', '.join(table)} or numbers")
        if len(nums) not in (1, len(schedule)):
            fail(key, f"{key} needs one value or one per scheduled n ({len(schedule)})")
        if any(not (v > 0 and math.isfinite(v)) for v in nums):
            fail(key, f"{key} values must be positive")
        return nums

    kwargs["r_rate"] = rate("r_rate", R_RATES, DEFAULT_R_RATE[experiment])
    kwargs["rho_rate"] = rate("rho_rate", RHO_RATES, "inverse_log")
    if "ball_radii" in values:
        try:
            kwargs["ball_radii"] = _numbers(values["ball_radii"])
        except ValueError:
            fail("ball_radii", "ball_radii must be numbers")
    if "kernel" in values:
        if values["kernel"] not in ("volume", "perimeter"):
            fail("kernel", "kernel must be volume or perimeter")
        kwargs["kernel"] = values["kernel"]
    if "output" in values:
        kwargs["output"] = values["output"] or None
    if "record_timing" in values:
        flag = values["record_timing"].lower()
        if flag not in ("true", "false"):
            fail("record_timing", "record_timing must be true or false")
        kwargs["record_timing"] = flag == "true"

    cfg = ExperimentConfig(
        experiment=experiment,
        domain=domain,
        schedule=schedule,
        candidate=candidate,
        raw=tuple(values.items()),
        **kwargs,
    )
    for n in schedule:
        for which, key in (("r", "r_rate"), ("rho", "rho_rate")):
            v = cfg.rate_at(which, n)
            if not (v > 0 and math.isfinite(v)):
                fail(key, f"{key} is not positive at n={n}")
    return cfg


def load_config(path) -> ExperimentConfig:
    with open(path) as fh:
        return parse_config(fh.read(), source=str(path))
