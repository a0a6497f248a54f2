"""Exact Gaussian elimination over the Gaussian rationals."""
from __future__ import annotations

from typing import List, Sequence

from .cnum import CNum, as_cnum

__all__ = ["rref", "nullspace", "solve_linear"]


def rref(rows: Sequence[Sequence[object]]):
    """Reduced row echelon form; returns (matrix, pivot columns)."""
    m = [[as_cnum(v) for v in r] for r in rows]
    if not m:
        return m, []
    ncol = len(m[0])
    pivots: List[int] = []
    r = 0
    for c in range(ncol):
        p = next((k for k in range(r, len(m)) if m[k][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = CNum(1) / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for k in range(len(m)):
            if k != r and m[k][c]:
                f = m[k][c]
                m[k] = [a - f * b for a, b in zip(m[k], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def nullspace(rows: Sequence[Sequence[object]], ncols: int | None = None) -> List[List[CNum]]:
    """Basis of {v : A v = 0}, one vector per free column."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if not rows:
        return [[CNum(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    m, piv = rref(rows)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [CNum(0)] * ncols
        v[f] = CNum(1)
        for r, pc in enumerate(piv):
            v[pc] = -m[r][f]
        basis.append(v)
    return basis


def solve_linear(rows, rhs):
    """One solution of A v = b, or None when inconsistent."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    ncols = len(rows[0]) if rows else 0
    m, piv = rref(aug)
    if ncols in piv:
        return None
    v = [CNum(0)] * ncols
    for r, pc in enumerate(piv):
        v[pc] = m[r][ncols]
    return v
