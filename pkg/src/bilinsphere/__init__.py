"""Controllability and constructive steering for bilinear systems on the sphere."""

from .errors import (
    BilinSphereError,
    BracketVanishes,
    DegenerateB3,
    DegenerateRotation,
    InternalValidation,
    LatitudeOutOfRange,
    NonFiniteState,
    NotOnSphere,
    NotSkew,
    ZeroMatrix,
)
from .induced_fields import SystemPair, bracket_closure, induced_field, matrix_bracket
from .larc import LarcReport, Verdict, check_larc, larc_at_point, larc_global, larc_skew
from .linalg3 import SkewMatrix3, rotation_exp, skew_extract, skew_materialize
from .normal_form import NormalFormData, ensure_b3_nonzero, reduce_system, skew_normal_form
from .planner import ControlSegment, SteeringPlan, plan, validate_plan
from .simulator import Trajectory, endpoint_error, integrate

__version__ = "0.1.0"
