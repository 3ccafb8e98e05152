"""Built-in experiment configurations, identical to the files in ``configs/``."""

from __future__ import annotations

DISK = """\
domain = disk
domain.center = 0, 0
domain.radius = 1
"""

DEFAULTS = {
    "pointwise": f"""\
# fixed diameter cut of the unit disk; h(A; M) = 4 / pi
experiment = pointwise
{DISK}candidate = halfspace
candidate.angle = 0
candidate.offset = 0
schedule = 500, 2000, 8000, 20000
replicates = 20
master_seed = 1001
r_rate = log_squared
check.rel_error = 0.10
trend_steps = 3
""",
    "estimate": f"""\
# penalized minimum over rounded slabs; H(M) = 4 / pi
experiment = estimate
{DISK}schedule = 20000
replicates = 20
master_seed = 2002
r_rate = power
rho_rate = inverse_log
k_angle = 36
k_offset = 41
check.rel_error = 0.15
check.l1_fraction = 0.10
""",
    "measure": f"""\
# empirical measure of the selected cut against the nearest half-disk
experiment = measure
{DISK}schedule = 500, 2000, 8000, 20000
replicates = 20
master_seed = 3003
r_rate = power
rho_rate = inverse_log
k_angle = 36
k_offset = 41
check.rel_error = 0.15
check.l1_fraction = 0.10
check.discrepancy = 0.05
trend_steps = 3
""",
    "hoeffding": f"""\
# centered volume kernel of the diameter cut
experiment = hoeffding
{DISK}candidate = halfspace
candidate.angle = 0
candidate.offset = 0
kernel = volume
schedule = 50, 200
replicates = 2000
master_seed = 4004
r_rate = log_squared
t_points = 10
bound_floor = 0.001
se_multiplier = 3
""",
    "graph-oracle": f"""\
# exact conductance against the spectral sweep on small samples
experiment = graph-oracle
{DISK}schedule = 14
replicates = 100
master_seed = 5005
r_rate = 0.8
""",
}
