from __future__ import annotations

import random
from typing import Optional

from algebra.linalg import mat_mul
from scalars.field import ExactScalar


def random_invertible(n: int, rng: Optional[random.Random] = None, max_entry: int = 2) -> list[list[ExactScalar]]:
    """g = D*L*U*P with unit triangular L, U, a nonzero diagonal D and a permutation P.

    Entries of the factors are small integers, so transformed tensors stay small.
    """
    rng = rng or random.Random()
    zero, one = ExactScalar.zero(), ExactScalar.one()

    def entry() -> ExactScalar:
        return ExactScalar(rng.randint(-max_entry, max_entry))

    lower = [[one if i == j else (entry() if j < i else zero) for j in range(n)] for i in range(n)]
    upper = [[one if i == j else (entry() if j > i else zero) for j in range(n)] for i in range(n)]
    diag = []
    for i in range(n):
        d = 0
        while d == 0:
            d = rng.randint(-max_entry, max_entry)
        diag.append([ExactScalar(d) if j == i else zero for j in range(n)])
    order = list(range(n))
    rng.shuffle(order)
    perm = [[one if j == order[i] else zero for j in range(n)] for i in range(n)]
    return mat_mul(mat_mul(mat_mul(diag, lower), upper), perm)
