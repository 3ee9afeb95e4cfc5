"""Exact integer and rational linear algebra on lists of lists."""
from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

Matrix = List[List[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list:
    if not a:
        return []
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(cols)]
            for i in range(len(a))]


def vecmat(v: Sequence, m: Sequence[Sequence]) -> list:
    cols = len(m[0]) if m else 0
    return [sum(v[k] * m[k][j] for k in range(len(m))) for j in range(cols)]


def smith_normal_form(a: Sequence[Sequence[int]]) -> Tuple[Matrix, Matrix, Matrix]:
    """Return ``(D, U, V)`` with ``D = U a V`` diagonal, U and V unimodular.

    Diagonal entries are nonnegative and each divides the next.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    d = [list(row) for row in a]
    u = identity(m)
    v = identity(n)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, c):  # row dst += c * row src
        d[dst] = [x + c * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, c):
        for row in d:
            row[dst] += c * row[src]
        for row in v:
            row[dst] += c * row[src]

    for k in range(min(m, n)):
        while True:
            nz = [(abs(d[i][j]), i, j) for i in range(k, m) for j in range(k, n) if d[i][j]]
            if not nz:
                return d, u, v
            _, i, j = min(nz)
            swap_rows(k, i)
            swap_cols(k, j)
            p = d[k][k]
            clean = True
            for i in range(k + 1, m):
                q = d[i][k] // p
                if q:
                    add_row(k, i, -q)
                if d[i][k]:
                    clean = False
            for j in range(k + 1, n):
                q = d[k][j] // p
                if q:
                    add_col(k, j, -q)
                if d[k][j]:
                    clean = False
            if not clean:
                continue
            # enforce divisibility of the remaining block
            bad = next(((i, j) for i in range(k + 1, m) for j in range(k + 1, n)
                        if d[i][j] % p), None)
            if bad is None:
                break
            add_row(bad[0], k, 1)
        if d[k][k] < 0:
            d[k] = [-x for x in d[k]]
            u[k] = [-x for x in u[k]]
    return d, u, v


def hermite_rows(a: Sequence[Sequence[int]]) -> Matrix:
    """Row-style Hermite normal form; zero rows are dropped."""
    h = [list(r) for r in a]
    rows = len(h)
    cols = len(h[0]) if rows else 0
    r = 0
    for c in range(cols):
        while True:
            nz = [i for i in range(r, rows) if h[i][c]]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(h[i][c]))
            h[r], h[piv] = h[piv], h[r]
            done = True
            for i in range(r + 1, rows):
                q = h[i][c] // h[r][c]
                if q:
                    h[i] = [x - q * y for x, y in zip(h[i], h[r])]
                if h[i][c]:
                    done = False
            if done:
                break
        if r < rows and h[r][c]:
            if h[r][c] < 0:
                h[r] = [-x for x in h[r]]
            for i in range(r):
                q = h[i][c] // h[r][c]
                if q:
                    h[i] = [x - q * y for x, y in zip(h[i], h[r])]
            r += 1
    return [row for row in h if any(row)]


def solve_rational(a: Sequence[Sequence], b: Sequence) -> Optional[List[Fraction]]:
    """Some solution x of ``a x = b`` over Q, or None if inconsistent.

    Free variables are set to zero.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    aug = [[Fraction(x) for x in a[i]] + [Fraction(b[i])] for i in range(m)]
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if aug[i][c] != 0), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        pv = aug[r][c]
        aug[r] = [x / pv for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    if any(aug[i][n] != 0 for i in range(r, m)):
        return None
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = aug[i][n]
    return x


def rational_rank(a: Sequence[Sequence]) -> int:
    m = len(a)
    n = len(a[0]) if m else 0
    rows = [[Fraction(x) for x in r] for r in a]
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        for i in range(r + 1, m):
            f = rows[i][c] / rows[r][c]
            if f:
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
    return r


def kernel_rational(a: Sequence[Sequence]) -> List[List[Fraction]]:
    """Basis of the right kernel ``{x : a x = 0}`` over Q."""
    m = len(a)
    n = len(a[0]) if m else 0
    rows = [[Fraction(x) for x in r] for r in a]
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    basis = []
    for free in (c for c in range(n) if c not in pivots):
        x = [Fraction(0)] * n
        x[free] = Fraction(1)
        for i, c in enumerate(pivots):
            x[c] = -rows[i][free]
        basis.append(x)
    return basis
