"""Ahlfors' H0 for finite point sets on the Riemann sphere.

The modules build up in layers: ``sphere_geom`` (points, chords, circular
arcs, areas), ``lens_lune`` (closed forms for lenses and disks),
``functionals`` (the R, H, n-bar ledger), ``surface_builder`` (the standard
surface over an arc polygon) and ``extremal_search`` (the finite search for
H0).  ``properties`` holds the randomised checks and ``cli`` the command line.
"""

from .extremal_search import (
    Candidate,
    NoFeasibleCurvature,
    SearchOptions,
    SearchReport,
    WrongQ,
    compute_H0,
    enumerate_tuples,
    optimize_curvature,
    q3_closed_form,
)
from .functionals import Configuration, ConfigurationError, SurfaceStats, delta_Eq, dufresnoy_bound
from .lens_lune import A_lens, L_lens, h_disk, h_family, max_h_theta
from .sphere_geom import SpherePoint, contour_area, dist, stereographic
from .surface_builder import BoundaryPartition, build_solution, r_of_solution, validate_s0

__version__ = "0.1.0"

__all__ = [
    "A_lens",
    "BoundaryPartition",
    "Candidate",
    "Configuration",
    "ConfigurationError",
    "L_lens",
    "NoFeasibleCurvature",
    "SearchOptions",
    "SearchReport",
    "SpherePoint",
    "SurfaceStats",
    "WrongQ",
    "build_solution",
    "compute_H0",
    "contour_area",
    "delta_Eq",
    "dist",
    "dufresnoy_bound",
    "enumerate_tuples",
    "h_disk",
    "h_family",
    "max_h_theta",
    "optimize_curvature",
    "q3_closed_form",
    "r_of_solution",
    "stereographic",
    "validate_s0",
]
