"""Exact linear algebra over the rationals.

Matrices are plain lists of lists of Fraction.  Everything here is a
straightforward fraction-free-of-surprises Gaussian elimination; sizes at
desk scale are small enough that no pivoting strategy beyond "first nonzero"
is needed.
"""

from __future__ import annotations

from fractions import Fraction

Matrix = list[list[Fraction]]


def zeros(nrows: int, ncols: int) -> Matrix:
    return [[Fraction(0)] * ncols for _ in range(nrows)]


def identity(n: int) -> Matrix:
    out = zeros(n, n)
    for i in range(n):
        out[i][i] = Fraction(1)
    return out


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if a and b and len(a[0]) != len(b):
        raise ValueError("matrix dimensions do not match")
    n, k = len(a), len(b)
    m = len(b[0]) if b else 0
    out = zeros(n, m)
    for i in range(n):
        for t in range(k):
            x = a[i][t]
            if x == 0:
                continue
            row_b = b[t]
            row_o = out[i]
            for j in range(m):
                if row_b[j]:
                    row_o[j] += x * row_b[j]
    return out


def is_zero_matrix(a: Matrix) -> bool:
    return all(x == 0 for row in a for x in row)


def rank(a: Matrix, column_order: list[int] | None = None) -> int:
    """Rank by Gaussian elimination.

    `column_order` permutes the elimination order of the columns; the result
    is of course the same, which makes a reversed order a cheap independent
    cross-check of the elimination code.
    """
    if not a or not a[0]:
        return 0
    nrows, ncols = len(a), len(a[0])
    cols = column_order if column_order is not None else list(range(ncols))
    work = [row[:] for row in a]
    r = 0
    for j in cols:
        pivot = None
        for i in range(r, nrows):
            if work[i][j] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        pv = work[r][j]
        work[r] = [x / pv for x in work[r]]
        for i in range(nrows):
            if i != r and work[i][j] != 0:
                f = work[i][j]
                work[i] = [x - f * y for x, y in zip(work[i], work[r])]
        r += 1
        if r == nrows:
            break
    return r


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("matrix is not square")
    work = [row[:] + ident_row for row, ident_row in zip(a, identity(n))]
    r = 0
    for j in range(n):
        pivot = None
        for i in range(r, n):
            if work[i][j] != 0:
                pivot = i
                break
        if pivot is None:
            raise ValueError("matrix is singular")
        work[r], work[pivot] = work[pivot], work[r]
        pv = work[r][j]
        work[r] = [x / pv for x in work[r]]
        for i in range(n):
            if i != r and work[i][j] != 0:
                f = work[i][j]
                work[i] = [x - f * y for x, y in zip(work[i], work[r])]
        r += 1
    return [row[n:] for row in work]


def det(a: Matrix) -> Fraction:
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("matrix is not square")
    work = [row[:] for row in a]
    result = Fraction(1)
    for j in range(n):
        pivot = None
        for i in range(j, n):
            if work[i][j] != 0:
                pivot = i
                break
        if pivot is None:
            return Fraction(0)
        if pivot != j:
            work[j], work[pivot] = work[pivot], work[j]
            result = -result
        result *= work[j][j]
        pv = work[j][j]
        for i in range(j + 1, n):
            if work[i][j] != 0:
                f = work[i][j] / pv
                work[i] = [x - f * y for x, y in zip(work[i], work[j])]
    return result


def solve_columns(columns: list[list[Fraction]], target: list[Fraction]) -> list[Fraction] | None:
    """Express `target` as a linear combination of `columns`, or None.

    Returns one exact coefficient vector (free coefficients set to zero)
    when the system is consistent.
    """
    ncols = len(columns)
    nrows = len(target)
    if any(len(c) != nrows for c in columns):
        raise ValueError("column length mismatch")
    work = [[columns[j][i] for j in range(ncols)] + [target[i]] for i in range(nrows)]
    pivots: list[tuple[int, int]] = []
    r = 0
    for j in range(ncols):
        pivot = None
        for i in range(r, nrows):
            if work[i][j] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        pv = work[r][j]
        work[r] = [x / pv for x in work[r]]
        for i in range(nrows):
            if i != r and work[i][j] != 0:
                f = work[i][j]
                work[i] = [x - f * y for x, y in zip(work[i], work[r])]
        pivots.append((r, j))
        r += 1
    for i in range(r, nrows):
        if work[i][ncols] != 0:
            return None
    coeffs = [Fraction(0)] * ncols
    for i, j in pivots:
        coeffs[j] = work[i][ncols]
    return coeffs
