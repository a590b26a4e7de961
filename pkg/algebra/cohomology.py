"""Second cohomology H^2(J, J) of a Jordan algebra with adjoint coefficients.

Z^2 is the space of symmetric bilinear h for which mu + s*h satisfies the
polarized Jordan identity to first order in s. B^2 is spanned by the
coboundaries (df)(x, y) = f(x)y + x f(y) - f(xy).
"""
from __future__ import annotations

import logging
from typing import Optional, Sequence

from algebra.identities import is_jordan, jordan_quadruples
from algebra.linalg import EchelonBasis
from algebra.tensor import StructureTensor
from scalars.errors import InputError, VerificationError

logger = logging.getLogger(__name__)


class NonJordanError(InputError):
    pass


class CoboundaryRankError(VerificationError):
    pass


class _CochainSpace:
    """Indexing of symmetric bilinear maps h: unknown h_pq^k (p <= q) -> column."""

    def __init__(self, dim: int):
        self.dim = dim
        self.columns: dict[tuple[int, int, int], int] = {}
        for p in range(dim):
            for q in range(p, dim):
                for k in range(dim):
                    self.columns[(p, q, k)] = len(self.columns)

    def column(self, p: int, q: int, k: int) -> int:
        return self.columns[(p, q, k) if p <= q else (q, p, k)]

    @property
    def size(self) -> int:
        return len(self.columns)


def _add_into(form: dict, column: int, value) -> None:
    if value.is_zero():
        return
    updated = form[column] + value if column in form else value
    if updated.is_zero():
        form.pop(column, None)
    else:
        form[column] = updated


class _Forms:
    """Vectors whose components are linear forms in the cochain unknowns."""

    def __init__(self, tensor: StructureTensor, space: _CochainSpace):
        self.t = tensor
        self.space = space

    def empty(self) -> list[dict]:
        return [{} for _ in range(self.t.dim)]

    def h(self, u: Sequence, v: Sequence) -> list[dict]:
        """h(u, v) for constant vectors u, v."""
        out = self.empty()
        for p, up in enumerate(u):
            if up.is_zero():
                continue
            for q, vq in enumerate(v):
                if vq.is_zero():
                    continue
                coeff = up * vq
                for k in range(self.t.dim):
                    _add_into(out[k], self.space.column(p, q, k), coeff)
        return out

    def mul(self, forms: list[dict], v: Sequence) -> list[dict]:
        """mu(L, v) for a form-vector L and a constant vector v."""
        out = self.empty()
        for p, form in enumerate(forms):
            if not form:
                continue
            w = self.t.mul_basis(v, p)
            for k, wk in enumerate(w):
                if wk.is_zero():
                    continue
                for column, value in form.items():
                    _add_into(out[k], column, wk * value)
        return out

    def accumulate(self, total: list[dict], forms: list[dict], sign: int) -> None:
        for k, form in enumerate(forms):
            for column, value in form.items():
                _add_into(total[k], column, value if sign > 0 else -value)


def cocycle_rows(tensor: StructureTensor, space: Optional[_CochainSpace] = None) -> list[dict]:
    """Rows of the first-order polarized Jordan condition on all basis quadruples."""
    t = tensor
    space = space or _CochainSpace(t.dim)
    forms = _Forms(t, space)
    rows = []
    for a, b, c, d in jordan_quadruples(t.dim):
        e_d = t.basis_vector(d)
        total = forms.empty()
        for p, q, r in ((a, b, c), (b, c, a), (c, a, b)):
            e_p, e_q, e_r = t.basis_vector(p), t.basis_vector(q), t.basis_vector(r)
            pq = t.c[p][q]
            dr = t.c[d][r]
            h_pq = forms.h(e_p, e_q)
            # ((x_p x_q) y) x_r
            forms.accumulate(total, forms.h(t.mul_basis(pq, d), e_r), 1)
            forms.accumulate(total, forms.mul(forms.h(pq, e_d), e_r), 1)
            forms.accumulate(total, forms.mul(forms.mul(h_pq, e_d), e_r), 1)
            # (x_p x_q)(y x_r)
            forms.accumulate(total, forms.h(pq, dr), -1)
            forms.accumulate(total, forms.mul(h_pq, dr), -1)
            forms.accumulate(total, forms.mul(forms.h(e_d, e_r), pq), -1)
        rows.extend(form for form in total if form)
    return rows


def coboundary_rows(tensor: StructureTensor, space: Optional[_CochainSpace] = None) -> list[dict]:
    """d(E_lm) for the elementary maps E_lm: e_l -> e_m, as vectors in cochain coordinates."""
    t = tensor
    n = t.dim
    space = space or _CochainSpace(n)
    rows = []
    for l in range(n):
        for m in range(n):
            row: dict = {}
            for i in range(n):
                for j in range(i, n):
                    # f(e_i) e_j + e_i f(e_j) - f(e_i e_j)
                    for k in range(n):
                        value = t.zero
                        if i == l:
                            value = value + t.c[m][j][k]
                        if j == l:
                            value = value + t.c[i][m][k]
                        if k == m:
                            value = value - t.c[i][j][l]
                        _add_into(row, space.column(i, j, k), value)
            if row:
                rows.append(row)
    return rows


def coboundary_dim(tensor: StructureTensor, space: Optional[_CochainSpace] = None) -> int:
    """dim B^2, the rank of the coboundary map on linear maps."""
    space = space or _CochainSpace(tensor.dim)
    return EchelonBasis(space.size).extend(coboundary_rows(tensor, space)).rank


def cohomology_dims(tensor: StructureTensor, der: Optional[int] = None) -> tuple[int, int, int]:
    """(dim Z^2, dim B^2, dim H^2)."""
    from algebra.invariants import der_dim

    if not is_jordan(tensor):
        raise NonJordanError("Second cohomology requires a Jordan algebra")
    space = _CochainSpace(tensor.dim)
    cocycle_rank = EchelonBasis(space.size).extend(cocycle_rows(tensor, space)).rank
    z2 = space.size - cocycle_rank
    b2 = coboundary_dim(tensor, space)
    der = der_dim(tensor) if der is None else der
    if b2 != tensor.dim ** 2 - der:
        raise CoboundaryRankError(
            f"dim B^2 = {b2} but n^2 - dim Der = {tensor.dim ** 2 - der}"
        )
    logger.debug("Z2=%d B2=%d H2=%d", z2, b2, z2 - b2)
    return z2, b2, z2 - b2


def h2_dim(tensor: StructureTensor) -> int:
    return cohomology_dims(tensor)[2]
