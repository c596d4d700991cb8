"""Exact Gaussian elimination over the rationals (small dense systems)."""
from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence


class SingularSystemError(ArithmeticError):
    pass


def solve_exact(matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Sequence[Fraction]]) -> List[List[Fraction]]:
    """Solve ``A X = B`` for square ``A``; ``rhs`` is a list of columns of ``B``."""
    n = len(matrix)
    k = len(rhs)
    aug = [
        [Fraction(x) for x in matrix[i]] + [Fraction(col[i]) for col in rhs] for i in range(n)
    ]
    for c in range(n):
        piv = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if piv is None:
            raise SingularSystemError(f"singular at column {c}")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        row_c = [x * inv for x in aug[c]]
        aug[c] = row_c
        for i in range(n):
            if i != c and aug[i][c]:
                f = aug[i][c]
                row = aug[i]
                aug[i] = [x - f * y for x, y in zip(row, row_c)]
    return [[aug[i][n + j] for i in range(n)] for j in range(k)]
