from deformation.curves import (
    CurvePoleError,
    CurveResult,
    CurveSpec,
    CurveVerificationError,
    LimitMismatchError,
    SingularCurveError,
    SpecialPoint,
    scaling_edge,
    verify_curve,
)
from deformation.direct_sum import DirectSumError, derive_direct_sum_edge, derive_direct_sum_edges
from deformation.edges import Edge, ExternalSpec, Provenance
from deformation.loader import CurveLoader, CurveSet, load_curves
from deformation.obstructions import ObstructionReport, check_obstructions, compare_profiles

__all__ = [
    "CurveLoader",
    "CurvePoleError",
    "CurveResult",
    "CurveSet",
    "CurveSpec",
    "CurveVerificationError",
    "DirectSumError",
    "Edge",
    "ExternalSpec",
    "LimitMismatchError",
    "ObstructionReport",
    "Provenance",
    "SingularCurveError",
    "SpecialPoint",
    "check_obstructions",
    "compare_profiles",
    "derive_direct_sum_edge",
    "derive_direct_sum_edges",
    "load_curves",
    "scaling_edge",
    "verify_curve",
]
