from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Mapping, Optional

from algebra.linalg import SingularMatrixError
from algebra.tensor import apply_basis_change, basis_change_det, tensor_diff
from catalog.models import AlgebraId, Catalog, IsoWitness, expand_free_params
from scalars.errors import VerificationError
from scalars.field import ExactScalar
from scalars.parser import format_scalar, parse_constant

logger = logging.getLogger(__name__)


class WitnessMismatchError(VerificationError):
    pass


@dataclass
class WitnessResult:
    witness_id: str
    source: AlgebraId
    target: AlgebraId
    bindings: dict[str, ExactScalar] = field(default_factory=dict)
    diff: list = field(default_factory=list)
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return not self.diff and self.error is None

    def describe(self) -> str:
        if self.ok:
            return f"{self.witness_id}: {self.source} -> {self.target} ok"
        if self.error:
            return f"{self.witness_id}: {self.error}"
        first = self.diff[0]
        return (
            f"{self.witness_id}: {self.source} -> {self.target} differs at "
            f"n{first[0]}n{first[1]}[n{first[2]}]: {first[3]} != {first[4]}"
        )


def witness_matrix(witness: IsoWitness, bindings: Mapping[str, ExactScalar]) -> list[list[ExactScalar]]:
    return [[parse_constant(x, bindings) for x in row] for row in witness.matrix]


def verify_witness(catalog: Catalog, witness: IsoWitness,
                   bindings: Optional[Mapping[str, ExactScalar]] = None) -> WitnessResult:
    """Check that the matrix carries source to target exactly at one binding of the free parameters."""
    bindings = dict(bindings or {})
    source = catalog.resolve(witness.source, bindings)
    target = catalog.resolve(witness.target, bindings)
    result = WitnessResult(witness.id, source, target, bindings)
    g = witness_matrix(witness, bindings)
    if basis_change_det(g).is_zero():
        raise SingularMatrixError(f"{witness.id}: witness matrix is singular at {_show(bindings)}")
    mapped = apply_basis_change(catalog.instantiate(source, witness.allow_excluded), g)
    result.diff = tensor_diff(mapped, catalog.instantiate(target, witness.allow_excluded))
    if result.ok:
        logger.debug("Witness %s ok at %s", witness.id, _show(bindings))
    else:
        logger.warning("Witness %s failed: %s", witness.id, result.describe())
    return result


def verify_all_witnesses(catalog: Catalog) -> list[WitnessResult]:
    results = []
    for witness in catalog.witnesses:
        for bindings in expand_free_params(witness.free_params):
            try:
                results.append(verify_witness(catalog, witness, bindings))
            except SingularMatrixError as e:
                results.append(WitnessResult(
                    witness.id, AlgebraId(witness.source.label), AlgebraId(witness.target.label),
                    bindings, error=str(e),
                ))
    return results


def _show(bindings: Mapping[str, ExactScalar]) -> str:
    if not bindings:
        return "no parameters"
    return ", ".join(f"{k}={format_scalar(v)}" for k, v in bindings.items())
