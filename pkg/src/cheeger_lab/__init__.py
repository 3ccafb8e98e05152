"""Normalized cuts and Cheeger constants on random neighborhood graphs."""

from cheeger_lab.geometry import (
    Annulus,
    Ball,
    Constants,
    Disk,
    HalfSpace,
    Rectangle,
    RoundedSlab,
    cap_volume,
    gamma_constant,
    relative_cut_quantities,
    unit_ball_volume,
)
from cheeger_lab.sampling import Sample, derive_seed, sample_uniform
from cheeger_lab.graph import (
    NeighborhoodGraph,
    build_graph,
    conductance_exact,
    evaluate_cut,
    spectral_sweep,
)

__version__ = "0.1.0"
