"""Pure-Python exact row reduction over Q and modular rank.

Reference implementation of the kernel contract; the compiled module
``_kernels`` must agree with it entry for entry.
"""

from __future__ import annotations

from fractions import Fraction


def _height(x: Fraction) -> int:
    return x.numerator.bit_length() + x.denominator.bit_length()


def rref(rows, ncols: int):
    """Reduced row echelon form of ``rows`` (lists of rationals).

    Returns ``(nonzero_rows, pivots)`` where ``pivots[i]`` is the pivot
    column of the i-th returned row.  Pivots are chosen by smallest
    height to limit coefficient growth.
    """
    m = [[Fraction(x) for x in row] for row in rows]
    for row in m:
        if len(row) != ncols:
            raise ValueError("ragged row")
    nrows = len(m)
    pivots: list[int] = []
    top = 0
    for col in range(ncols):
        if top == nrows:
            break
        best = -1
        besth = 0
        for r in range(top, nrows):
            x = m[r][col]
            if x:
                h = _height(x)
                if best < 0 or h < besth:
                    best, besth = r, h
        if best < 0:
            continue
        m[top], m[best] = m[best], m[top]
        prow = m[top]
        f = prow[col]
        support = [j for j in range(col, ncols) if prow[j]]
        for j in support:
            prow[j] /= f
        for r in range(nrows):
            if r == top:
                continue
            row = m[r]
            f = row[col]
            if not f:
                continue
            for j in support:
                row[j] -= f * prow[j]
        pivots.append(col)
        top += 1
    return m[:top], pivots


def rank_profile(rows, ncols: int) -> list[int]:
    """Pivot columns of the reduced row echelon form of ``rows``."""
    return rref(rows, ncols)[1]


def rank_mod_p(rows, ncols: int, p: int) -> int:
    """Rank of ``rows`` reduced modulo the prime ``p``; -1 if a denominator vanishes."""
    m = []
    for row in rows:
        out = []
        for x in row:
            if not x:
                out.append(0)
                continue
            x = Fraction(x)
            den = x.denominator % p
            if den == 0:
                return -1
            out.append(x.numerator * pow(den, p - 2, p) % p)
        m.append(out)
    nrows = len(m)
    top = 0
    for col in range(ncols):
        if top == nrows:
            break
        r = top
        while r < nrows and m[r][col] == 0:
            r += 1
        if r == nrows:
            continue
        m[top], m[r] = m[r], m[top]
        prow = m[top]
        inv = pow(prow[col], p - 2, p)
        for r in range(top + 1, nrows):
            f = m[r][col]
            if f:
                f = f * inv % p
                row = m[r]
                for j in range(col, ncols):
                    if prow[j]:
                        row[j] = (row[j] - f * prow[j]) % p
        top += 1
    return top
