"""Small exact linear algebra over Q(i): RREF, rank, kernel, solve, inverse.

Everything is deterministic (first usable pivot, rows in given order) so
serialized output built on these routines is byte-stable.
"""

from __future__ import annotations

from .gaussian import QI


def _rows(matrix):
    return [[QI.of(x) for x in row] for row in matrix]


def rref(matrix):
    """Row-reduce; returns (rows, pivot column list)."""
    rows = _rows(matrix)
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for col in range(ncols):
        pivot = None
        for i in range(r, len(rows)):
            if not rows[i][col].is_zero():
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = QI(1) / rows[r][col]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not rows[i][col].is_zero():
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(matrix) -> int:
    return len(rref(matrix)[1])


def kernel_basis(matrix):
    """Basis of the right null space, one vector per free column."""
    rows, pivots = rref(matrix)
    if not rows:
        return []
    ncols = len(rows[0])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [QI(0)] * ncols
        v[fc] = QI(1)
        for r, pc in enumerate(pivots):
            v[pc] = -rows[r][fc]
        basis.append(v)
    return basis


def solve(matrix, rhs):
    """One exact solution of matrix @ x = rhs, or None if inconsistent."""
    rows = _rows(matrix)
    b = [QI.of(x) for x in rhs]
    aug = [row + [bb] for row, bb in zip(rows, b)]
    red, pivots = rref(aug)
    ncols = len(rows[0]) if rows else 0
    if ncols in pivots:
        return None
    x = [QI(0)] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][ncols]
    return x


def inverse(matrix):
    n = len(matrix)
    aug = [[QI.of(x) for x in row] + [QI(1 if i == j else 0) for j in range(n)]
           for i, row in enumerate(matrix)]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in red]


def mat_vec(matrix, vec):
    vec = [QI.of(x) for x in vec]
    return [sum((QI.of(a) * v for a, v in zip(row, vec)), QI(0))
            for row in matrix]


def mat_mul(a, b):
    return [[sum((QI.of(a[i][k]) * QI.of(b[k][j]) for k in range(len(b))), QI(0))
             for j in range(len(b[0]))] for i in range(len(a))]
