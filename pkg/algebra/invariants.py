from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field
from typing import Optional

from algebra.identities import is_associative
from algebra.linalg import EchelonBasis, Subspace
from algebra.tensor import StructureTensor, subspace_product
from scalars.errors import Jorn5Error

logger = logging.getLogger(__name__)


class NonNilpotentError(Jorn5Error):
    pass


@dataclass(frozen=True)
class InvariantProfile:
    ann_dim: int
    power_dims: tuple[int, ...]
    nilindex: int
    nilpotency_type: tuple[int, ...]
    center_dim: int
    jacobi_dim: int
    der_dim: int
    orbit_dim: int
    associative: bool
    h2_dim: Optional[int] = None
    z2_dim: Optional[int] = field(default=None, compare=False)
    b2_dim: Optional[int] = field(default=None, compare=False)

    @property
    def j2_dim(self) -> int:
        return self.power_dims[1] if len(self.power_dims) > 1 else 0

    @property
    def aut_dim(self) -> int:
        return self.der_dim

    def field_value(self, name: str):
        aliases = {"aut_dim": self.der_dim, "j2_dim": self.j2_dim}
        if name in aliases:
            return aliases[name]
        return getattr(self, name)

    def to_dict(self) -> dict:
        data = asdict(self)
        data["power_dims"] = list(self.power_dims)
        data["nilpotency_type"] = list(self.nilpotency_type)
        data["j2_dim"] = self.j2_dim
        return data


def _solution_space(tensor: StructureTensor, rows, ncols: int) -> list[tuple]:
    echelon = EchelonBasis(ncols).extend(rows)
    return echelon.nullspace(tensor.zero, tensor.one)


def annihilator(tensor: StructureTensor) -> Subspace:
    """{a : a e_j = 0 for all j}."""
    n = tensor.dim
    rows = []
    for j in range(n):
        for k in range(n):
            row = {l: tensor.c[l][j][k] for l in range(n) if not tensor.c[l][j][k].is_zero()}
            if row:
                rows.append(row)
    return Subspace(n, _solution_space(tensor, rows, n), tensor.zero)


def ann_dim(tensor: StructureTensor) -> int:
    return annihilator(tensor).dim


def powers(tensor: StructureTensor) -> list[Subspace]:
    """[J^1, J^2, ...] with J^m = sum_k J^(m-k) J^k, ending at the first zero power."""
    n = tensor.dim
    chain = [Subspace.whole(n, tensor.zero, tensor.one)]
    while chain[-1].dim:
        m = len(chain) + 1
        if m > n + 1:
            raise NonNilpotentError(f"Power chain does not vanish: dims {[s.dim for s in chain]}")
        total = Subspace(n, (), tensor.zero)
        for k in range(1, m // 2 + 1):
            total = total + subspace_product(tensor, chain[m - k - 1], chain[k - 1])
        if total == chain[-1]:
            raise NonNilpotentError(f"Power chain stabilizes at dimension {total.dim}")
        chain.append(total)
    return chain


def power_chain(tensor: StructureTensor) -> tuple[tuple[int, ...], int, tuple[int, ...]]:
    """(dims of J^1..J^nilindex, nilindex, nilpotency type)."""
    chain = powers(tensor)
    dims = tuple(s.dim for s in chain)
    nil_type = tuple(dims[m] - dims[m + 1] for m in range(len(dims) - 1))
    return dims, len(chain), nil_type


def _operator_rows(tensor: StructureTensor, image) -> list[dict]:
    """Rows of the linear system image(e_l)[index] = 0, unknown a = sum a_l e_l.

    image(l) returns a dict {equation key: vector} for the basis element e_l.
    """
    n = tensor.dim
    by_key: dict = {}
    for l in range(n):
        for key, vec in image(l).items():
            for k, value in enumerate(vec):
                if not value.is_zero():
                    by_key.setdefault((key, k), {})[l] = value
    return list(by_key.values())


def center(tensor: StructureTensor) -> Subspace:
    """{a : (a,J,J) = (J,a,J) = (J,J,a) = 0}."""
    t = tensor
    n = t.dim

    def image(l: int) -> dict:
        out = {}
        for i in range(n):
            for j in range(n):
                # (e_l, e_i, e_j)
                out[(0, i, j)] = [
                    x - y for x, y in zip(t.mul_basis(t.c[l][i], j), t.mul_basis(t.c[i][j], l))
                ]
                # (e_i, e_l, e_j)
                out[(1, i, j)] = [
                    x - y for x, y in zip(t.mul_basis(t.c[i][l], j), t.mul_basis(t.c[l][j], i))
                ]
                # (e_i, e_j, e_l)
                out[(2, i, j)] = [
                    x - y for x, y in zip(t.mul_basis(t.c[i][j], l), t.mul_basis(t.c[j][l], i))
                ]
        return out

    return Subspace(n, _solution_space(t, _operator_rows(t, image), n), t.zero)


def center_dim(tensor: StructureTensor) -> int:
    return center(tensor).dim


def jacobi_space(tensor: StructureTensor) -> Subspace:
    """{a : a(xy) = (ax)y + x(ay)}."""
    t = tensor
    n = t.dim

    def image(l: int) -> dict:
        out = {}
        for i in range(n):
            for j in range(i, n):
                lhs = t.mul_basis(t.c[i][j], l)
                r1 = t.mul_basis(t.c[l][i], j)
                r2 = t.mul_basis(t.c[l][j], i)
                out[(i, j)] = [x - y - z for x, y, z in zip(lhs, r1, r2)]
        return out

    return Subspace(n, _solution_space(t, _operator_rows(t, image), n), t.zero)


def jacobi_dim(tensor: StructureTensor) -> int:
    return jacobi_space(tensor).dim


def derivation_rows(tensor: StructureTensor) -> list[dict]:
    """Linear system for D with D(e_i) = sum_m D[i][m] e_m; unknown (l, m) at l*n + m."""
    t = tensor
    n = t.dim
    rows = []
    for i in range(n):
        for j in range(i, n):
            for k in range(n):
                row: dict = {}

                def bump(index: int, value) -> None:
                    if value.is_zero():
                        return
                    updated = row[index] + value if index in row else value
                    if updated.is_zero():
                        row.pop(index, None)
                    else:
                        row[index] = updated

                # D(e_i e_j) = sum_l c_ij^l D(e_l)
                for l in range(n):
                    bump(l * n + k, t.c[i][j][l])
                # - D(e_i) e_j - e_i D(e_j)
                for m in range(n):
                    bump(i * n + m, -t.c[m][j][k])
                    bump(j * n + m, -t.c[i][m][k])
                if row:
                    rows.append(row)
    return rows


def derivations(tensor: StructureTensor) -> list[tuple]:
    n = tensor.dim
    return _solution_space(tensor, derivation_rows(tensor), n * n)


def der_dim(tensor: StructureTensor) -> int:
    n = tensor.dim
    return n * n - EchelonBasis(n * n).extend(derivation_rows(tensor)).rank


def orbit_dim(tensor: StructureTensor) -> int:
    return tensor.dim ** 2 - der_dim(tensor)


def invariant_profile(tensor: StructureTensor, with_cohomology: bool = True) -> InvariantProfile:
    from algebra.cohomology import cohomology_dims

    dims, nilindex, nil_type = power_chain(tensor)
    der = der_dim(tensor)
    h2 = z2 = b2 = None
    if with_cohomology:
        z2, b2, h2 = cohomology_dims(tensor, der)
    return InvariantProfile(
        ann_dim=ann_dim(tensor),
        power_dims=dims,
        nilindex=nilindex,
        nilpotency_type=nil_type,
        center_dim=center_dim(tensor),
        jacobi_dim=jacobi_dim(tensor),
        der_dim=der,
        orbit_dim=tensor.dim ** 2 - der,
        associative=is_associative(tensor),
        h2_dim=h2,
        z2_dim=z2,
        b2_dim=b2,
    )
