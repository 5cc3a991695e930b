"""Nonlinear bending-strain measures for shell mid-surfaces.

Surfaces are written as closed-form expressions in the convected
coordinates ``xi1, xi2``; derivatives come from exact second-order jets.
"""

__version__ = "0.1.0"

from .diffgeo import PointGeometry, mixed_curvature, point_geometry, surface_geometry
from .jets import Jet2, jet_var
from .kinematics import DeformationState, polar_decompose, pullback_metric, u_frobenius_norm
from .measures import (MeasureSet, bending_measures, pulled_back_curvature,
                       scaling_transform_law, u_dot_B)
from .surface_lang import SurfaceExpr, eval_surface, parse_expr, to_text
from .transforms import RigidMotion, random_rotation, rigid_transform_surface, scale_surface

__all__ = [
    "DeformationState", "Jet2", "MeasureSet", "PointGeometry", "RigidMotion", "SurfaceExpr",
    "bending_measures", "eval_surface", "jet_var", "mixed_curvature", "parse_expr",
    "point_geometry", "polar_decompose", "pulled_back_curvature", "pullback_metric",
    "random_rotation", "rigid_transform_surface", "scale_surface", "scaling_transform_law",
    "surface_geometry", "to_text", "u_dot_B", "u_frobenius_norm",
]
