from scalars.errors import (
    InputError,
    Jorn5Error,
    PoleError,
    ScalarSyntaxError,
    UnboundParameterError,
    VerificationError,
)
from scalars.field import ExactScalar
from scalars.poly import Poly, RatFunc
from scalars.parser import format_scalar, parse_scalar_expr, ratfunc_eval, ratfunc_is_zero

__all__ = [
    "ExactScalar",
    "InputError",
    "Jorn5Error",
    "PoleError",
    "Poly",
    "RatFunc",
    "ScalarSyntaxError",
    "UnboundParameterError",
    "VerificationError",
    "format_scalar",
    "parse_scalar_expr",
    "ratfunc_eval",
    "ratfunc_is_zero",
]
