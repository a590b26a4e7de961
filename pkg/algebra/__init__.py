from algebra.linalg import DimensionMismatchError, SingularMatrixError, Subspace
from algebra.tensor import (
    StructureTensor,
    apply_basis_change,
    compose,
    direct_sum,
    multiply,
    subspace_product,
    tensors_equal,
)
from algebra.identities import is_associative, is_jordan
from algebra.invariants import InvariantProfile, invariant_profile

__all__ = [
    "DimensionMismatchError",
    "InvariantProfile",
    "SingularMatrixError",
    "StructureTensor",
    "Subspace",
    "apply_basis_change",
    "compose",
    "direct_sum",
    "invariant_profile",
    "is_associative",
    "is_jordan",
    "multiply",
    "subspace_product",
    "tensors_equal",
]
