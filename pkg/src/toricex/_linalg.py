"""Exact integer linear algebra on lists of Python ints.

Everything here works with arbitrary-precision integers; no floating point.
Matrices are lists of rows.
"""

from __future__ import annotations

from math import gcd
from typing import Sequence

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def as_matrix(rows: Sequence[Sequence[int]]) -> Matrix:
    return [[int(x) for x in row] for row in rows]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def transpose(a: Sequence[Sequence[int]]) -> Matrix:
    return [list(col) for col in zip(*a)]


def det(a: Sequence[Sequence[int]]) -> int:
    """Determinant by Bareiss fraction-free elimination."""
    m = as_matrix(a)
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def inverse_unimodular(a: Sequence[Sequence[int]]) -> Matrix:
    """Exact inverse of an integer matrix with determinant +-1.

    Raises ValueError if the matrix is singular or not unimodular.
    """
    n = len(a)
    aug = [list(map(int, row)) + identity(n)[i] for i, row in enumerate(a)]
    # Integer Gauss-Jordan with Euclidean pivoting keeps every step unimodular.
    for col in range(n):
        while True:
            rows = [i for i in range(col, n) if aug[i][col] != 0]
            if not rows:
                raise ValueError("matrix is singular")
            piv = min(rows, key=lambda i: abs(aug[i][col]))
            aug[col], aug[piv] = aug[piv], aug[col]
            done = True
            for i in range(col + 1, n):
                q = aug[i][col] // aug[col][col]
                if q:
                    aug[i] = [x - q * y for x, y in zip(aug[i], aug[col])]
                if aug[i][col] != 0:
                    done = False
            if done:
                break
        if abs(aug[col][col]) != 1:
            raise ValueError("matrix is not unimodular")
        if aug[col][col] < 0:
            aug[col] = [-x for x in aug[col]]
    for col in range(n - 1, -1, -1):
        for i in range(col):
            q = aug[i][col]
            if q:
                aug[i] = [x - q * y for x, y in zip(aug[i], aug[col])]
    return [row[n:] for row in aug]


def rank(a: Sequence[Sequence[int]]) -> int:
    """Rank over the rationals (fraction-free row reduction)."""
    rows = [list(map(int, r)) for r in a if any(r)]
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][col]
        for i in range(r + 1, len(rows)):
            x = rows[i][col]
            if x:
                new = [p * u - x * v for u, v in zip(rows[i], rows[r])]
                g = 0
                for u in new:
                    g = gcd(g, u)
                rows[i] = [u // g for u in new] if g > 1 else new
        r += 1
        if r == len(rows):
            break
    return r


def smith_normal_form(a: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form ``U @ A @ V == D``.

    ``U`` (rows x rows) and ``V`` (cols x cols) are unimodular and ``D`` is
    diagonal with nonnegative entries, each dividing the next.
    """
    d = as_matrix(a)
    m = len(d)
    n = len(d[0]) if m else 0
    u = identity(m)
    v = identity(n)

    def swap_rows(i: int, j: int) -> None:
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int) -> None:
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    for t in range(min(m, n)):
        entries = [(abs(d[i][j]), i, j) for i in range(t, m) for j in range(t, n) if d[i][j]]
        if not entries:
            break
        _, i0, j0 = min(entries)
        swap_rows(t, i0)
        swap_cols(t, j0)
        while True:
            changed = False
            for i in range(t + 1, m):
                if d[i][t]:
                    q = d[i][t] // d[t][t]
                    d[i] = [x - q * y for x, y in zip(d[i], d[t])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[t])]
                    if d[i][t]:
                        swap_rows(t, i)
                        changed = True
            for j in range(t + 1, n):
                if d[t][j]:
                    q = d[t][j] // d[t][t]
                    for row in d:
                        row[j] -= q * row[t]
                    for row in v:
                        row[j] -= q * row[t]
                    if d[t][j]:
                        swap_cols(t, j)
                        changed = True
            if changed:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if d[i][j] % d[t][t]),
                None,
            )
            if bad is None:
                break
            d[t] = [x + y for x, y in zip(d[t], d[bad])]
            u[t] = [x + y for x, y in zip(u[t], u[bad])]
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
    return u, d, v
