from __future__ import annotations

import logging
from typing import Iterable, Mapping, Optional, Sequence

from algebra.linalg import DimensionMismatchError, Subspace, determinant, inverse, mat_mul
from scalars.field import ExactScalar
from scalars.poly import RatFunc

logger = logging.getLogger(__name__)

MAX_DIM = 8


def _domain_of(values: Iterable) -> type:
    for v in values:
        if isinstance(v, RatFunc):
            return RatFunc
    return ExactScalar


class StructureTensor:
    """Structure constants c[i][j][k] of a commutative algebra: e_i e_j = sum_k c[i][j][k] e_k.

    Indices are 0-based internally; catalog files and reports use 1-based labels.
    """

    __slots__ = ("dim", "c", "domain")

    def __init__(self, dim: int, c: Sequence[Sequence[Sequence]], domain: type = ExactScalar):
        if dim > MAX_DIM:
            raise DimensionMismatchError(f"Dimension {dim} exceeds {MAX_DIM}")
        self.dim = dim
        self.domain = domain
        self.c = tuple(tuple(tuple(domain.coerce(x) for x in cell) for cell in row) for row in c)

    @classmethod
    def from_products(
        cls,
        dim: int,
        products: Mapping[tuple[int, int], Mapping[int, object]],
        domain: type = ExactScalar,
    ) -> StructureTensor:
        """Build from {(i, j): {k: coeff}} with 0-based indices; (j, i) is filled in."""
        zero = domain.zero()
        c = [[[zero] * dim for _ in range(dim)] for _ in range(dim)]
        for (i, j), out in products.items():
            for k, coeff in out.items():
                if not (0 <= i < dim and 0 <= j < dim and 0 <= k < dim):
                    raise DimensionMismatchError(f"Index ({i}, {j}, {k}) outside dimension {dim}")
                value = domain.coerce(coeff)
                c[i][j][k] = value
                c[j][i][k] = value
        return cls(dim, c, domain)

    @classmethod
    def zero_algebra(cls, dim: int, domain: type = ExactScalar) -> StructureTensor:
        return cls.from_products(dim, {}, domain)

    @property
    def zero(self):
        return self.domain.zero()

    @property
    def one(self):
        return self.domain.one()

    def basis_vector(self, i: int) -> tuple:
        return tuple(self.one if k == i else self.zero for k in range(self.dim))

    def is_commutative(self) -> bool:
        n = self.dim
        return all(self.c[i][j] == self.c[j][i] for i in range(n) for j in range(i + 1, n))

    def products(self) -> dict[tuple[int, int], dict[int, object]]:
        """Nonzero constants for i <= j."""
        out: dict[tuple[int, int], dict[int, object]] = {}
        for i in range(self.dim):
            for j in range(i, self.dim):
                row = {k: v for k, v in enumerate(self.c[i][j]) if not v.is_zero()}
                if row:
                    out[(i, j)] = row
        return out

    def mul_basis(self, x: Sequence, j: int) -> list:
        """x * e_j."""
        out = [self.zero] * self.dim
        for l, xl in enumerate(x):
            if xl.is_zero():
                continue
            for k, v in enumerate(self.c[l][j]):
                if not v.is_zero():
                    out[k] = out[k] + xl * v
        return out

    def multiply(self, x: Sequence, y: Sequence) -> list:
        n = self.dim
        if len(x) != n or len(y) != n:
            raise DimensionMismatchError(f"Vectors of length {len(x)}, {len(y)} in dimension {n}")
        zero = _domain_of(list(x) + list(y)).zero() if self.domain is ExactScalar else self.zero
        out = [zero] * n
        for i, xi in enumerate(x):
            if xi.is_zero():
                continue
            for j, yj in enumerate(y):
                if yj.is_zero():
                    continue
                coeff = xi * yj
                for k, v in enumerate(self.c[i][j]):
                    if not v.is_zero():
                        out[k] = out[k] + coeff * v
        return out

    def map(self, fn, domain: Optional[type] = None) -> StructureTensor:
        domain = domain or self.domain
        return StructureTensor(
            self.dim,
            [[[fn(x) for x in cell] for cell in row] for row in self.c],
            domain,
        )

    def evaluate(self, t0) -> StructureTensor:
        """Entrywise value at t = t0 of a tensor over RatFunc."""
        if self.domain is not RatFunc:
            return self
        return self.map(lambda f: f.evaluate(t0), ExactScalar)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StructureTensor):
            return NotImplemented
        return self.dim == other.dim and self.c == other.c

    def __hash__(self) -> int:
        return hash((self.dim, self.c))

    def __repr__(self) -> str:
        return f"StructureTensor(dim={self.dim}, {format_products(self)})"


def format_products(tensor: StructureTensor) -> str:
    parts = []
    for (i, j), out in tensor.products().items():
        rhs = " + ".join(
            f"{'' if v == 1 else f'({v})'}n{k + 1}" for k, v in sorted(out.items())
        )
        parts.append(f"n{i + 1}n{j + 1}={rhs}")
    return ", ".join(parts) if parts else "zero"


def multiply(tensor: StructureTensor, x: Sequence, y: Sequence) -> list:
    return tensor.multiply(x, y)


def tensors_equal(a: StructureTensor, b: StructureTensor) -> bool:
    if a.dim != b.dim:
        raise DimensionMismatchError(f"Cannot compare dimensions {a.dim} and {b.dim}")
    return a.c == b.c


def tensor_diff(a: StructureTensor, b: StructureTensor) -> list[tuple[int, int, int, object, object]]:
    """(i, j, k, a_value, b_value) for every differing entry with i <= j, 1-based."""
    diff = []
    for i in range(a.dim):
        for j in range(i, a.dim):
            for k in range(a.dim):
                if a.c[i][j][k] != b.c[i][j][k]:
                    diff.append((i + 1, j + 1, k + 1, a.c[i][j][k], b.c[i][j][k]))
    return diff


def apply_basis_change(tensor: StructureTensor, g: Sequence[Sequence]) -> StructureTensor:
    """Re-express the product in the basis whose i-th vector is row i of g (old coordinates).

    e'_i e'_j = v expanded in old coordinates, then c'_ij = v * g^-1.
    """
    n = tensor.dim
    if len(g) != n or any(len(row) != n for row in g):
        raise DimensionMismatchError(f"Basis change must be {n}x{n}")
    domain = RatFunc if (tensor.domain is RatFunc or _domain_of(x for row in g for x in row) is RatFunc) else ExactScalar
    g = [[domain.coerce(x) for x in row] for row in g]
    g_inv = inverse(g)
    zero = domain.zero()
    c = [[[zero] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            v = tensor.multiply(g[i], g[j])
            for k in range(n):
                acc = zero
                for l, vl in enumerate(v):
                    if not vl.is_zero() and not g_inv[l][k].is_zero():
                        acc = acc + vl * g_inv[l][k]
                c[i][j][k] = acc
                c[j][i][k] = acc
    return StructureTensor(n, c, domain)


def compose(g: Sequence[Sequence], h: Sequence[Sequence]) -> list[list]:
    """Basis change equal to applying g first, then h (rows of h in g-coordinates)."""
    return mat_mul(h, g)


def basis_change_det(g: Sequence[Sequence]):
    domain = _domain_of(x for row in g for x in row)
    return determinant([[domain.coerce(x) for x in row] for row in g])


def direct_sum(*summands: StructureTensor) -> StructureTensor:
    domain = RatFunc if any(s.domain is RatFunc for s in summands) else ExactScalar
    products: dict[tuple[int, int], dict[int, object]] = {}
    offset = 0
    for s in summands:
        for (i, j), out in s.products().items():
            products[(i + offset, j + offset)] = {k + offset: v for k, v in out.items()}
        offset += s.dim
    return StructureTensor.from_products(offset, products, domain)


def subspace_product(tensor: StructureTensor, u: Subspace, v: Subspace) -> Subspace:
    vectors = [tensor.multiply(a, b) for a in u.basis for b in v.basis]
    return Subspace(tensor.dim, vectors, tensor.zero)


def scale_matrix(n: int, factor) -> list[list]:
    """factor * I_n."""
    factor = RatFunc.coerce(factor)
    return [[factor if i == j else RatFunc.zero() for j in range(n)] for i in range(n)]
