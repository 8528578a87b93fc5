"""Combinatorics engine for the 2-cell category and its cellular sets."""

from .delta import (
    CompositionError,
    DeltaError,
    Shuffle,
    SimplicialOperator,
    classify_simplicial,
    compose_simplicial,
    ez_factor_delta,
    op_dual_simplicial,
    point_classification,
    shuffle_corners,
    shuffle_covers,
    shuffle_leq,
    shuffles,
)
from .theta import (
    CellularOperator,
    HyperfaceLabel,
    ThetaError,
    ThetaShape,
    classify_cellular,
    co_dual,
    codim,
    compose_cellular,
    face_factors_through,
    hyperfaces,
    is_mono_vertebral,
    op_dual_theta,
    outer_hyperface_order,
    reedy_factor,
    vertebrae,
)

__all__ = [
    "CompositionError",
    "DeltaError",
    "Shuffle",
    "SimplicialOperator",
    "classify_simplicial",
    "compose_simplicial",
    "ez_factor_delta",
    "op_dual_simplicial",
    "point_classification",
    "shuffle_corners",
    "shuffle_covers",
    "shuffle_leq",
    "shuffles",
    "CellularOperator",
    "HyperfaceLabel",
    "ThetaError",
    "ThetaShape",
    "classify_cellular",
    "co_dual",
    "codim",
    "compose_cellular",
    "face_factors_through",
    "hyperfaces",
    "is_mono_vertebral",
    "op_dual_theta",
    "outer_hyperface_order",
    "reedy_factor",
    "vertebrae",
]
