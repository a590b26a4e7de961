from __future__ import annotations

from typing import Iterable, Optional, Sequence

from scalars.errors import InputError, Jorn5Error


class DimensionMismatchError(InputError):
    pass


class SingularMatrixError(Jorn5Error):
    pass


SparseRow = dict  # column -> nonzero scalar


def to_sparse(vector: Sequence) -> SparseRow:
    return {k: v for k, v in enumerate(vector) if not v.is_zero()}


class EchelonBasis:
    """Reduced row-echelon basis grown one sparse row at a time.

    Every stored row has a 1 at its pivot and zeros at every other pivot.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: dict[int, SparseRow] = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, row: SparseRow) -> SparseRow:
        row = dict(row)
        for pivot in [k for k in row if k in self.rows]:
            coeff = row.pop(pivot)
            for col, value in self.rows[pivot].items():
                if col == pivot:
                    continue
                updated = row[col] - coeff * value if col in row else -(coeff * value)
                if updated.is_zero():
                    row.pop(col, None)
                else:
                    row[col] = updated
        return row

    def add(self, row: SparseRow) -> bool:
        """Insert a row; return True when it raised the rank."""
        row = self.reduce(row)
        if not row:
            return False
        pivot = min(row)
        inv = row[pivot].inverse()
        row = {col: value * inv for col, value in row.items()}
        for other in self.rows.values():
            coeff = other.get(pivot)
            if coeff is None:
                continue
            for col, value in row.items():
                updated = other[col] - coeff * value if col in other else -(coeff * value)
                if updated.is_zero():
                    other.pop(col, None)
                else:
                    other[col] = updated
        self.rows[pivot] = row
        return True

    def extend(self, rows: Iterable[SparseRow]) -> "EchelonBasis":
        for row in rows:
            self.add(row)
        return self

    def contains(self, row: SparseRow) -> bool:
        return not self.reduce(row)

    def dense_rows(self, zero) -> list[tuple]:
        out = []
        for pivot in sorted(self.rows):
            dense = [zero] * self.ncols
            for col, value in self.rows[pivot].items():
                dense[col] = value
            out.append(tuple(dense))
        return out

    def nullspace(self, zero, one) -> list[tuple]:
        """Basis of {x : row . x = 0 for every stored row}."""
        free = [c for c in range(self.ncols) if c not in self.rows]
        basis = []
        for f in free:
            x = [zero] * self.ncols
            x[f] = one
            for pivot, row in self.rows.items():
                value = row.get(f)
                if value is not None:
                    x[pivot] = -value
            basis.append(tuple(x))
        return basis


def rank(rows: Iterable[SparseRow], ncols: int) -> int:
    return EchelonBasis(ncols).extend(rows).rank


class Subspace:
    """Subspace of k^n held as a reduced row-echelon basis."""

    __slots__ = ("ambient_dim", "basis", "_echelon")

    def __init__(self, ambient_dim: int, vectors: Iterable[Sequence] = (), zero=None):
        echelon = EchelonBasis(ambient_dim)
        vectors = list(vectors)
        for v in vectors:
            if len(v) != ambient_dim:
                raise DimensionMismatchError(
                    f"Vector of length {len(v)} in ambient dimension {ambient_dim}"
                )
            echelon.add(to_sparse(v))
        if zero is None and vectors:
            zero = type(vectors[0][0]).zero()
        self.ambient_dim = ambient_dim
        self._echelon = echelon
        self.basis = tuple(echelon.dense_rows(zero)) if echelon.rank else ()

    @classmethod
    def whole(cls, n: int, zero, one) -> Subspace:
        return cls(n, [tuple(one if i == j else zero for j in range(n)) for i in range(n)], zero)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, vector: Sequence) -> bool:
        return self._echelon.contains(to_sparse(vector))

    def is_subspace_of(self, other: Subspace) -> bool:
        return all(other.contains(v) for v in self.basis)

    def __add__(self, other: Subspace) -> Subspace:
        return Subspace(self.ambient_dim, self.basis + other.basis)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.basis))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def identity(n: int, zero, one) -> list[list]:
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    if len(a[0]) != len(b):
        raise DimensionMismatchError("Matrix shapes do not align")
    cols = len(b[0])
    out = []
    for row in a:
        new_row = []
        for j in range(cols):
            acc = None
            for k, x in enumerate(row):
                if x.is_zero() or b[k][j].is_zero():
                    continue
                term = x * b[k][j]
                acc = term if acc is None else acc + term
            new_row.append(acc if acc is not None else type(row[0]).zero())
        out.append(new_row)
    return out


def _pivot_row(m: list[list], col: int, start: int) -> Optional[int]:
    for r in range(start, len(m)):
        if not m[r][col].is_zero():
            return r
    return None


def determinant(matrix: Sequence[Sequence]):
    m = [list(row) for row in matrix]
    n = len(m)
    det = type(m[0][0]).one()
    for col in range(n):
        r = _pivot_row(m, col, col)
        if r is None:
            return type(m[0][0]).zero()
        if r != col:
            m[col], m[r] = m[r], m[col]
            det = -det
        pivot = m[col][col]
        det = det * pivot
        inv = pivot.inverse()
        for r2 in range(col + 1, n):
            factor = m[r2][col]
            if factor.is_zero():
                continue
            factor = factor * inv
            for c in range(col, n):
                if not m[col][c].is_zero():
                    m[r2][c] = m[r2][c] - factor * m[col][c]
    return det


def inverse(matrix: Sequence[Sequence]) -> list[list]:
    n = len(matrix)
    zero, one = type(matrix[0][0]).zero(), type(matrix[0][0]).one()
    m = [list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(matrix)]
    for col in range(n):
        r = _pivot_row(m, col, col)
        if r is None:
            raise SingularMatrixError("Matrix is singular")
        m[col], m[r] = m[r], m[col]
        inv = m[col][col].inverse()
        m[col] = [x * inv for x in m[col]]
        for r2 in range(n):
            if r2 == col or m[r2][col].is_zero():
                continue
            factor = m[r2][col]
            m[r2] = [x - factor * y for x, y in zip(m[r2], m[col])]
    return [row[n:] for row in m]
