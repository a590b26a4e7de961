from __future__ import annotations

from itertools import combinations_with_replacement
from typing import Iterator, Sequence

from algebra.tensor import StructureTensor


def _sub(x: Sequence, y: Sequence) -> list:
    return [a - b for a, b in zip(x, y)]


def _is_zero_vector(x: Sequence) -> bool:
    return all(v.is_zero() for v in x)


def associator(tensor: StructureTensor, x: Sequence, y: Sequence, z: Sequence) -> list:
    """(x, y, z) = (xy)z - x(yz)."""
    return _sub(
        tensor.multiply(tensor.multiply(x, y), z),
        tensor.multiply(x, tensor.multiply(y, z)),
    )


def jordan_defect(tensor: StructureTensor, x: Sequence, y: Sequence) -> list:
    """((xx)y)x - (xx)(yx)."""
    xx = tensor.multiply(x, x)
    return _sub(
        tensor.multiply(tensor.multiply(xx, y), x),
        tensor.multiply(xx, tensor.multiply(y, x)),
    )


def polarized_jordan(tensor: StructureTensor, a: int, b: int, c: int, d: int) -> list:
    """Trilinear part of the Jordan identity on e_a, e_b, e_c with y = e_d.

    Sum over the choice of outer factor r of ((e_p e_q) e_d) e_r - (e_p e_q)(e_d e_r).
    """
    t = tensor
    total = [t.zero] * t.dim
    for p, q, r in ((a, b, c), (b, c, a), (c, a, b)):
        pq = t.c[p][q]
        left = t.mul_basis(t.mul_basis(pq, d), r)
        right = t.multiply(pq, t.c[d][r])
        total = [s + l - rr for s, l, rr in zip(total, left, right)]
    return total


def jordan_quadruples(dim: int) -> Iterator[tuple[int, int, int, int]]:
    for a, b, c in combinations_with_replacement(range(dim), 3):
        for d in range(dim):
            yield a, b, c, d


def is_jordan(tensor: StructureTensor) -> bool:
    if not tensor.is_commutative():
        return False
    return all(
        _is_zero_vector(polarized_jordan(tensor, a, b, c, d))
        for a, b, c, d in jordan_quadruples(tensor.dim)
    )


def is_associative(tensor: StructureTensor) -> bool:
    t = tensor
    for a in range(t.dim):
        for b in range(t.dim):
            for c in range(t.dim):
                if t.mul_basis(t.c[a][b], c) != t.mul_basis(t.c[b][c], a):
                    return False
    return True
