"""Exact integer linear algebra: extended gcd, Hermite normal form, kernels."""
from __future__ import annotations

from typing import Sequence


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``a*x + b*y == g == gcd(a, b) >= 0``."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def hnf(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Zero rows are dropped.  Pivots are positive and every entry above a pivot
    lies in ``[0, pivot)``, so the result depends only on the lattice, not on
    the generating set.
    """
    A = [list(map(int, row)) for row in rows]
    if not A:
        return []
    m, n = len(A), len(A[0])
    top = 0
    for col in range(n):
        if top >= m:
            break
        for i in range(top + 1, m):
            b = A[i][col]
            if not b:
                continue
            a = A[top][col]
            g, x, y = xgcd(a, b)
            ag, bg = a // g, b // g
            p_row, i_row = A[top], A[i]
            A[top] = [x * u + y * w for u, w in zip(p_row, i_row)]
            A[i] = [-bg * u + ag * w for u, w in zip(p_row, i_row)]
        piv = A[top][col]
        if piv == 0:
            continue
        if piv < 0:
            A[top] = [-u for u in A[top]]
            piv = -piv
        for i in range(top):
            q = A[i][col] // piv
            if q:
                A[i] = [u - q * w for u, w in zip(A[i], A[top])]
        top += 1
    return A[:top]


def kernel_basis(row: Sequence[int]) -> list[list[int]]:
    """Saturated basis of ``{x in Z^n : row . x == 0}``, in Hermite normal form."""
    n = len(row)
    aug = [[int(row[j])] + [1 if k == j else 0 for k in range(n)] for j in range(n)]
    reduced = hnf(aug)
    tails = [r[1:] for r in reduced if r[0] == 0]
    return hnf(tails)


def in_span(rows: Sequence[Sequence[int]], y: Sequence[int]) -> bool:
    """Whether ``y`` is an integer combination of ``rows``."""
    y = list(map(int, y))
    for row in hnf(rows):
        col = next(j for j, u in enumerate(row) if u)
        if y[col] % row[col]:
            return False
        q = y[col] // row[col]
        if q:
            y = [u - q * w for u, w in zip(y, row)]
    return not any(y)
