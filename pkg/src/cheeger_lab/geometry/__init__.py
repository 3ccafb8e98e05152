"""Exact constants, parametric domains and candidate cut sets."""

from cheeger_lab.geometry.constants import (
    Constants,
    cap_volume,
    gamma_constant,
    sphere_cap_area,
    unit_ball_volume,
)
from cheeger_lab.geometry.domains import Annulus, Disk, Domain, EmptySetError, Rectangle
from cheeger_lab.geometry.candidates import Ball, CandidateSet, HalfSpace, RoundedSlab
from cheeger_lab.geometry.cuts import (
    CutQuantities,
    as_halfspace,
    boundary_measure,
    region_integral,
    relative_cut_quantities,
    tube_volume,
)
from cheeger_lab.geometry.cheeger import (
    CheegerTarget,
    cheeger_orbit,
    halfplane_cheeger_sweep,
    known_cheeger,
    l1_distance,
    orbit_l1,
)


def domain_quantities(M: Domain) -> tuple[float, float, float]:
    """(volume, boundary measure, reach of the boundary)."""
    return M.domain_quantities()


def inner_parallel(M: Domain, r: float) -> Domain:
    return M.inner_parallel(r)
