"""Degeneracy points of resonance doublets in piecewise-constant radial potentials.

Evaluate the Jost function with exact derivatives, certify its zeros by the
argument principle, locate rank-one degeneracy (exceptional) points of an
isolated doublet, extract the local two-parameter unfolding, and trace the
crossing/anticrossing phenomenology along parameter paths.
"""

from .crossing import CrossingClass, SectionResult, SectionSample, classify, section
from .demo import (
    DEMO_K_D,
    DEMO_SPEC,
    DEMO_VALIDITY_RADIUS,
    DEMO_X_STAR,
    demo_ep,
    demo_model,
)
from .errors import (
    BoundaryZeroError,
    ConfigError,
    ContinuationError,
    DegenerateUnfoldingError,
    EpdoubletError,
    EvaluationDomainError,
    EvaluationRangeError,
    HigherOrderDegeneracyError,
    InvalidParameterError,
    IsolationLostError,
    NoConvergenceError,
    RefinementError,
    ValidityRangeError,
    WindingError,
)
from .exceptional import ExceptionalPoint, ParamGrid, locate, scan_seeds
from .jost import JostValue, evaluate, symmetry_check
from .potential import Binding, Layer, ParamPoint, PotentialSpec, load_config
from .tracer import PathSpec, Trajectory, TrajectoryRecord, loop, trace
from .unfolding import (
    OffsetVector,
    UnfoldingModel,
    branch_sqrt,
    exact_doublet,
    extract,
    model_energy,
    model_k,
    validity_radius,
)
from .zeros import PoleSet, SearchRegion, count_zeros, find_zeros

__version__ = "0.1.0"

__all__ = [
    "Binding",
    "BoundaryZeroError",
    "ConfigError",
    "ContinuationError",
    "CrossingClass",
    "DEMO_K_D",
    "DEMO_SPEC",
    "DEMO_VALIDITY_RADIUS",
    "DEMO_X_STAR",
    "DegenerateUnfoldingError",
    "EpdoubletError",
    "EvaluationDomainError",
    "EvaluationRangeError",
    "ExceptionalPoint",
    "HigherOrderDegeneracyError",
    "InvalidParameterError",
    "IsolationLostError",
    "JostValue",
    "Layer",
    "NoConvergenceError",
    "OffsetVector",
    "ParamGrid",
    "ParamPoint",
    "PathSpec",
    "PoleSet",
    "PotentialSpec",
    "RefinementError",
    "SearchRegion",
    "SectionResult",
    "SectionSample",
    "Trajectory",
    "TrajectoryRecord",
    "UnfoldingModel",
    "ValidityRangeError",
    "WindingError",
    "branch_sqrt",
    "classify",
    "count_zeros",
    "demo_ep",
    "demo_model",
    "evaluate",
    "exact_doublet",
    "extract",
    "find_zeros",
    "load_config",
    "locate",
    "loop",
    "model_energy",
    "model_k",
    "scan_seeds",
    "section",
    "symmetry_check",
    "trace",
    "validity_radius",
]
