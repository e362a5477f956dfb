"""Attractors of skew products ``(theta, t) -> (ell theta, lam t + tau(theta))``."""

from .affine import (BoundaryPair, ConvergenceError, Itinerary, SkewParams, apply,
                     boundary_fixed_point, boundary_operator, dist_lambda, preimages,
                     sample_attractor, t_lambda, trapping_radius)
from .circle import (CircleFunction, TrigPoly, evaluate, extrema, fourier, from_callable,
                     from_samples, from_trig_poly, sup_norm)
from .cohomology import (Decomposition, JordanRoot, NotSolvable, apply_L,
                         canonical_representative, coboundary_order_bound, decompose,
                         dk_functional, dk_table, scan_jordan, solve_L)
from .examples import (FatHoleParams, annulus_scan_log_quadratic, build_fat_hole,
                       fat_hole_params, verify_fat_hole)
from .orbits import PeriodicOrbit, birkhoff_extremes, coboundary_witness, periodic_orbits
from .perturbed import (CylinderMap, FailsPreservation, GraphConstants, affine_lift,
                        estimate_constants, graph_transform, log_quadratic_map,
                        perturbed_boundaries, rescale_conjugate, rescaled_limit)
from .topology import AttractorClassification, annulus_margin, classify, contact_set, union_defect

__version__ = "0.1.0"
