"""Exact Gaussian elimination over the rationals.

Matrices are lists of row lists of :class:`~fractions.Fraction`.  Only the
handful of routines the Jacobian-ring and quadric-span code needs.
"""

from fractions import Fraction


def to_fraction_matrix(rows):
    return [[Fraction(x) for x in row] for row in rows]


def rref(rows):
    """Reduced row echelon form; returns ``(matrix, pivot_columns)``."""
    m = to_fraction_matrix(rows)
    if not m:
        return m, []
    ncols = len(m[0])
    pivots = []
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][col]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][col]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col]:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows):
    return len(rref(rows)[1])


def reduce_vector(echelon, pivots, vec):
    """Remainder of ``vec`` after subtracting its component in the row space of ``echelon``."""
    v = [Fraction(x) for x in vec]
    for row, col in zip(echelon, pivots):
        if v[col]:
            f = v[col]
            v = [a - f * b for a, b in zip(v, row)]
    return v


def determinant(rows):
    m = to_fraction_matrix(rows)
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        pivot = next((i for i in range(col, n) if m[i][col]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        for i in range(col + 1, n):
            if m[i][col]:
                f = m[i][col] / m[col][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[col])]
    return det


def inverse(rows):
    n = len(rows)
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(red) < n:
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in red]


def is_positive_definite(rows):
    """Sylvester's criterion on leading principal minors (symmetric input)."""
    n = len(rows)
    return all(determinant([r[:k] for r in rows[:k]]) > 0 for k in range(1, n + 1))
