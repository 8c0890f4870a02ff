"""Fraction-free exact linear algebra over the rationals.

Rows are cleared of denominators and reduced with Bareiss-style
fraction-free Gauss-Jordan elimination, so every intermediate entry is an
integer and every division is exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import List, Sequence, Tuple


def integer_rows(rows: Sequence[Sequence]) -> List[List[int]]:
    """Scale each row by the lcm of its denominators."""
    out = []
    for row in rows:
        qs = [Fraction(x) for x in row]
        m = 1
        for q in qs:
            m = lcm(m, q.denominator)
        out.append([int(q * m) for q in qs])
    return out


def gauss_jordan(rows: Sequence[Sequence], ncols: int = None) -> Tuple[List[List[int]], List[int], int]:
    """Fraction-free reduced echelon form.

    Returns ``(R, pivots, d)``: in ``R`` every pivot row has the value ``d``
    at its pivot column and zeros at all other pivot columns, so dividing by
    ``d`` gives the usual RREF.  Elimination stops at column ``ncols`` (all
    columns by default), which lets callers solve augmented systems.
    """
    M = integer_rows(rows)
    if not M:
        return [], [], 1
    width = len(M[0])
    ncols = width if ncols is None else ncols
    prev = 1
    pivots: List[int] = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][col] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        p = M[r][col]
        prow = M[r]
        for i in range(len(M)):
            if i == r:
                continue
            row = M[i]
            a = row[col]
            M[i] = [(p * x - a * y) // prev for x, y in zip(row, prow)]
        prev = p
        pivots.append(col)
        r += 1
        if r == len(M):
            break
    return M, pivots, prev


def rank(rows: Sequence[Sequence]) -> int:
    return len(gauss_jordan(rows)[1])


def row_basis(rows: Sequence[Sequence]) -> List[List[int]]:
    """Integer rows spanning the same row space, linearly independent."""
    R, pivots, _ = gauss_jordan(rows)
    return [R[i] for i in range(len(pivots))]


def solve(A: Sequence[Sequence], B: Sequence[Sequence]) -> List[List[Fraction]]:
    """Solve ``A X = B`` for square nonsingular ``A`` (``B`` given as rows)."""
    n = len(A)
    aug = [list(map(Fraction, a)) + list(map(Fraction, b)) for a, b in zip(A, B)]
    R, pivots, d = gauss_jordan(aug, ncols=n)
    if len(pivots) != n:
        raise ZeroDivisionError("matrix is singular")
    return [[Fraction(x, R[i][i]) for x in R[i][n:]] for i in range(n)]


def projector(rows: Sequence[Sequence]) -> List[List[Fraction]]:
    """Orthogonal projector onto the row space of ``rows``.

    Uses the normal equations ``P = B^T (B B^T)^{-1} B`` on an independent
    row basis ``B``.
    """
    B = row_basis(rows)
    if not B:
        width = len(rows[0]) if rows else 0
        return [[Fraction(0)] * width for _ in range(width)]
    N = len(B[0])
    gram = [[sum(x * y for x, y in zip(bi, bj)) for bj in B] for bi in B]
    X = solve(gram, B)  # (B B^T)^{-1} B, r x N
    P = [[Fraction(0)] * N for _ in range(N)]
    for bi, xi in zip(B, X):
        for a, ba in enumerate(bi):
            if ba == 0:
                continue
            row = P[a]
            for c, xc in enumerate(xi):
                if xc:
                    row[c] += ba * xc
    return P
