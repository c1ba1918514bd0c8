"""Exact combinatorics of bipartite torus tilings and their quiver moduli:
perfect matchings, characteristic polygons, stable-matching fans, jigsaw
transformations, vertex markings and tautological divisor classes."""

from .errors import (CoverageError, DegenerateModelError, DimerError, InputError,
                     InvariantError, RayMultiplicityError, TheoremError, TilingError)
from .model import (DimerModel, Edge, Node, Quiver, dual_quiver, lift_subquiver,
                    reconstruct_dimer, validate_dimer)
from .io import load_fixture, parse_dimer, serialize_dimer
from .matchings import (characteristic_polygon, check_consistency, enumerate_matchings,
                        height_change, zigzag_paths)
from .fan import StabilityParameter, build_fan, cone_module, is_stable_support, stable_matchings
from .jigsaw import fundamental_hexagon, jigsaw_pieces, jigsaw_transform, meandering_walk, tau_quivers
from .recipe import classify_vertices, mark_lattice_points, mark_line_segments
from .bundles import (ClassGroup, arrow_divisor, bundle_class, degree_on_curve,
                      path_divisor, verify_pic_relations)
from .mckay import AbelianGroupData, crosscheck_recipes, mckay_dimer, nakamura_gigsaw

__version__ = "0.1.0"

__all__ = [
    "AbelianGroupData", "ClassGroup", "CoverageError", "DegenerateModelError",
    "DimerError", "DimerModel", "Edge", "InputError", "InvariantError", "Node",
    "Quiver", "RayMultiplicityError", "StabilityParameter", "TheoremError",
    "TilingError", "arrow_divisor", "build_fan", "bundle_class",
    "characteristic_polygon", "check_consistency", "classify_vertices",
    "cone_module", "crosscheck_recipes", "degree_on_curve", "dual_quiver",
    "enumerate_matchings", "fundamental_hexagon", "height_change",
    "is_stable_support", "jigsaw_pieces", "jigsaw_transform", "lift_subquiver",
    "load_fixture", "mark_lattice_points", "mark_line_segments", "mckay_dimer",
    "meandering_walk", "nakamura_gigsaw", "parse_dimer", "path_divisor",
    "reconstruct_dimer", "serialize_dimer", "stable_matchings", "tau_quivers",
    "validate_dimer", "verify_pic_relations", "zigzag_paths",
]
