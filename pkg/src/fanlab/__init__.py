"""Exact invariants of rational fans and their toric varieties."""

__version__ = "0.1.0"

from .bound import kappa0_upper_bound
from .brauer import FieldDescriptor, brauer_nu, brauer_real, h1_mu, invariant_factors
from .cech import build_cech, class_group, invariant_report, kappa, phi_kernel_dim, rank_identity
from .cones import Cone, dual_description, faces, intersect
from .fan import Fan, FanError, build_fan, face_poset, fan_stats, poset_isomorphic
from .linalg import AbelianGroup, smith_normal_form

__all__ = [
    "AbelianGroup",
    "Cone",
    "Fan",
    "FanError",
    "FieldDescriptor",
    "brauer_nu",
    "brauer_real",
    "build_cech",
    "build_fan",
    "class_group",
    "dual_description",
    "face_poset",
    "faces",
    "fan_stats",
    "h1_mu",
    "intersect",
    "invariant_factors",
    "invariant_report",
    "kappa",
    "kappa0_upper_bound",
    "phi_kernel_dim",
    "poset_isomorphic",
    "rank_identity",
    "smith_normal_form",
]
