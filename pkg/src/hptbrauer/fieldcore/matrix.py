"""Fraction-free determinant for polynomial matrices."""
from __future__ import annotations

from typing import Sequence

from .mpoly import MPoly


class NonSquareMatrix(ValueError):
    pass


def determinant(m: Sequence[Sequence[MPoly]]) -> MPoly:
    """Bareiss elimination; every division is exact."""
    n = len(m)
    if any(len(row) != n for row in m):
        raise NonSquareMatrix(f"matrix rows have lengths {[len(r) for r in m]}, expected {n}")
    if n == 0:
        raise NonSquareMatrix("empty matrix has no variable list")
    variables = m[0][0].variables
    a = [list(row) for row in m]
    sign = 1
    prev = MPoly.const(1, variables)
    for k in range(n - 1):
        if a[k][k].is_zero():
            for i in range(k + 1, n):
                if not a[i][k].is_zero():
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return MPoly.zero(variables)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]).exact_div(prev)
        prev = a[k][k]
    return a[n - 1][n - 1] * sign
