"""Exact integer matrix helpers (row vectors act on the left: v -> v M)."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = tuple  # tuple of row tuples


def as_matrix(rows) -> Matrix:
    m = tuple(tuple(int(x) for x in row) for row in rows)
    if any(len(r) != len(m) for r in m):
        raise ValueError("matrix must be square")
    return m


def identity(d: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(d)) for i in range(d))


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    Bt = list(zip(*B))
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in Bt) for row in A)


def vec_mat(v: Sequence[int], M: Matrix) -> tuple:
    d = len(v)
    return tuple(sum(v[i] * M[i][j] for i in range(d)) for j in range(len(M[0])))


def vec_add(u, v) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def vec_neg(u) -> tuple:
    return tuple(-a for a in u)


def det(M: Matrix) -> int:
    """Bareiss fraction-free elimination."""
    n = len(M)
    A = [list(r) for r in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for r in range(k + 1, n):
                if A[r][k] != 0:
                    A[k], A[r] = A[r], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1] if n else 1


def inverse(M: Matrix) -> Matrix:
    """Inverse of a unimodular integer matrix (exact)."""
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c] != 0), None)
        if p is None:
            raise ValueError("singular matrix")
        A[c], A[p] = A[p], A[c]
        piv = A[c][c]
        A[c] = [x / piv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    out = []
    for row in A:
        vals = row[n:]
        if any(v.denominator != 1 for v in vals):
            raise ValueError("matrix is not invertible over the integers")
        out.append(tuple(int(v) for v in vals))
    return tuple(out)


def block_diag(*blocks: Matrix) -> Matrix:
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[off + i][off + j] = x
        off += len(b)
    return tuple(tuple(r) for r in out)


def submatrix(M: Matrix, rows: Sequence[int], cols: Sequence[int]) -> Matrix:
    return tuple(tuple(M[i][j] for j in cols) for i in rows)


def mat_pow(M: Matrix, k: int) -> Matrix:
    if k < 0:
        M, k = inverse(M), -k
    out = identity(len(M))
    for _ in range(k):
        out = mat_mul(out, M)
    return out
