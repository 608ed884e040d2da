"""Quadratic forms over Q: square classes, Hilbert symbols, Witt invariants.

Two nondegenerate quadratic forms over Q are isometric iff they have the
same dimension, determinant (square class), Hasse invariants at every
prime and signature.  Hermitian forms over a quaternion algebra with its
canonical involution are classified by their trace forms ``Trd o h``.
"""

from __future__ import annotations

import math
from functools import lru_cache
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .linalg import InputError, MatrixQ, q

INF = "inf"
FACTOR_CAP = 10 ** 40
_SMALL_PRIMES = [p for p in range(2, 1000) if all(p % r for r in range(2, math.isqrt(p) + 1))]


def _factor(n: int) -> dict[int, int]:
    """Prime factorization of ``n > 0``: trial division, then sympy for a large cofactor."""
    return dict(_factor_cached(n))


@lru_cache(maxsize=4096)
def _factor_cached(n: int) -> tuple[tuple[int, int], ...]:
    out: dict[int, int] = {}
    for p in _SMALL_PRIMES:
        if p * p > n:
            break
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    if n > 1:
        if n < 1_000_000 or all(n % p for p in _SMALL_PRIMES) and n < _SMALL_PRIMES[-1] ** 2:
            out[n] = out.get(n, 0) + 1
        else:
            if n > FACTOR_CAP:
                raise ArithmeticError(f"cannot factor {n}: cofactor exceeds the 10^40 cap")
            from sympy import factorint
            for p, e in factorint(n).items():
                out[p] = out.get(p, 0) + e
    return tuple(sorted(out.items()))


def squarefree_part(n: int) -> int:
    if n == 0:
        raise InputError("zero has no square class")
    s = -1 if n < 0 else 1
    out = 1
    for p, e in _factor(abs(n)).items():
        if e % 2:
            out *= p
    return s * out


def square_class(r) -> int:
    """The square-free integer representing ``r`` modulo squares."""
    r = q(r)
    if not r:
        raise InputError("zero has no square class")
    a, b = squarefree_part(r.numerator), squarefree_part(r.denominator)
    g = math.gcd(a, b)
    return a * b // (g * g)


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    for r in _SMALL_PRIMES:
        if r * r > p:
            return True
        if p % r == 0:
            return p == r
    return len(_factor(p)) == 1 and _factor(p).get(p) == 1


def _legendre(a: int, p: int) -> int:
    t = pow(a % p, (p - 1) // 2, p)
    return -1 if t == p - 1 else t


def _split(n: int, p: int) -> tuple[int, int]:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k, n


def hilbert_symbol(a, b, place) -> int:
    """``(a, b)_v`` for a prime ``v`` or ``v = "inf"``."""
    a, b = square_class(a), square_class(b)
    if place == INF:
        return -1 if a < 0 and b < 0 else 1
    if not isinstance(place, int) or not is_prime(place):
        raise InputError(f"{place!r} is not a prime or 'inf'")
    p = place
    al, u = _split(a, p)
    be, v = _split(b, p)
    if p == 2:
        eps = lambda x: ((x - 1) // 2) % 2
        omega = lambda x: ((x * x - 1) // 8) % 2
        e = eps(u) * eps(v) + al * omega(v) + be * omega(u)
        return -1 if e % 2 else 1
    s = (-1) ** ((al * be * ((p - 1) // 2)) % 2)
    if be % 2:
        s *= _legendre(u, p)
    if al % 2:
        s *= _legendre(v, p)
    return s


def relevant_primes(values: Sequence) -> list[int]:
    """2 and the odd primes dividing the square-free part of some value."""
    ps = {2}
    for x in values:
        for p in _factor(abs(square_class(x))):
            ps.add(p)
    return sorted(ps)


@dataclass(frozen=True)
class WittInvariants:
    """Complete isometry invariants of a nondegenerate quadratic form over Q."""

    dim: int
    det: int
    hasse: tuple[int, ...]
    signature: tuple[int, int]

    def text(self) -> str:
        h = ",".join(str(p) for p in self.hasse)
        return f"dim={self.dim} det={self.det} hasse=[{h}] sig=({self.signature[0]},{self.signature[1]})"

    def as_dict(self) -> dict:
        return {"dim": self.dim, "det": self.det, "hasse_minus": list(self.hasse),
                "signature": list(self.signature)}



def reciprocity_holds(a, b) -> bool:
    """``prod_v (a, b)_v = 1`` over the infinite place, 2 and the odd primes of ``a`` and ``b``."""
    s = hilbert_symbol(a, b, INF)
    for p in relevant_primes([a, b]):
        s *= hilbert_symbol(a, b, p)
    return s == 1


def diagonalize(gram: MatrixQ, allow_degenerate: bool = False) -> list[Fraction]:
    """A diagonal form congruent to the symmetric matrix ``gram``.

    Symmetric Gaussian elimination; when every remaining diagonal entry
    vanishes a basis change ``x -> x + y`` creates a nonzero pivot.  With
    ``allow_degenerate`` the radical is dropped and only the nonzero
    diagonal entries are returned.
    """
    n = gram.rows
    if gram.cols != n:
        raise InputError("Gram matrix must be square")
    m = gram.row_list()
    for i in range(n):
        for j in range(i):
            if m[i][j] != m[j][i]:
                raise InputError("Gram matrix is not symmetric")
    out: list[Fraction] = []
    idx = list(range(n))
    while idx:
        piv = None
        best = None
        for i in idx:
            x = m[i][i]
            if x:
                h = x.numerator.bit_length() + x.denominator.bit_length()
                if best is None or h < best:
                    piv, best = i, h
        if piv is None:
            pair = next(((i, j) for i in idx for j in idx if i < j and m[i][j]), None)
            if pair is None:
                if allow_degenerate:
                    break
                raise InputError("degenerate form")
            i, j = pair
            # e_i <- e_i + e_j
            for k in range(n):
                m[i][k] += m[j][k]
            for k in range(n):
                m[k][i] += m[k][j]
            piv = i
        a = m[piv][piv]
        out.append(a)
        idx.remove(piv)
        row = m[piv]
        for i in idx:
            c = row[i] / a
            if c:
                ri = m[i]
                for k in idx:
                    ri[k] -= c * row[k]
        for i in idx:
            m[i][piv] = m[piv][i] = Fraction(0)
    return out


def invariants(entries: Sequence) -> WittInvariants:
    """Witt invariants of the diagonal form ``<a_1, ..., a_n>``."""
    a = [square_class(x) for x in entries]
    n = len(a)
    det = 1
    for x in a:
        g = math.gcd(det, x)
        det = det * x // (g * g)
    pos = sum(1 for x in a if x > 0)
    hasse = []
    for p in relevant_primes(a) if a else []:
        h = 1
        for i in range(n):
            for j in range(i + 1, n):
                h *= hilbert_symbol(a[i], a[j], p)
        if h == -1:
            hasse.append(p)
    return WittInvariants(n, det, tuple(hasse), (pos, n - pos))


def gram_invariants(gram: MatrixQ) -> WittInvariants:
    return invariants(diagonalize(gram))


def is_isometric(f: Sequence, g: Sequence) -> bool:
    return invariants(f) == invariants(g)


def parse_invariants(text: str) -> WittInvariants:
    """Inverse of :meth:`WittInvariants.text`."""
    parts = dict(p.split("=", 1) for p in text.split())
    hasse = tuple(int(x) for x in parts["hasse"].strip("[]").split(",") if x)
    s = parts["sig"].strip("()").split(",")
    return WittInvariants(int(parts["dim"]), int(parts["det"]), hasse, (int(s[0]), int(s[1])))


def jacobson_transfer(h) -> list[Fraction]:
    """Diagonalized ``Trd o h`` for a hermitian form over a quaternion algebra with its
    canonical involution; isometric hermitian forms have isometric transfers and conversely."""
    algs = h.algebras
    if len(algs) != 1 or algs[0].kind[0] != "quaternion" or algs[0].epsilon != -1:
        raise InputError("Jacobson transfer needs a quaternion algebra with its canonical involution")
    if h.eps != 1:
        raise InputError("Jacobson transfer needs a hermitian (eps = +1) form")
    return diagonalize(h.trace_gram())


def jacobson_invariants(h) -> WittInvariants:
    return invariants(jacobson_transfer(h))
