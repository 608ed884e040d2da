"""Exact dense linear algebra over the rationals.

Every entry is a :class:`fractions.Fraction`, so values are always reduced
with a positive denominator.  Row reduction is delegated to
:mod:`hermlambda.kernels`, which picks the compiled GMP backend when it is
available.

Subspaces are stored in reduced column echelon form, which makes equality
of subspaces a plain comparison of bases.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from . import kernels

Q = Fraction
ZERO = Fraction(0)
ONE = Fraction(1)


class InputError(ValueError):
    """Malformed input: wrong shapes, invalid parameters, bad files."""


def q(x) -> Fraction:
    """Coerce ints, strings like ``"-3/4"`` and fractions to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise InputError("floating point values are not accepted")
    return Fraction(x)


class MatrixQ:
    """Immutable dense rational matrix."""

    __slots__ = ("rows", "cols", "_r", "_hash")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        ent = [q(x) for x in entries]
        if len(ent) != rows * cols:
            raise InputError(f"expected {rows * cols} entries, got {len(ent)}")
        self.rows = rows
        self.cols = cols
        self._r = tuple(tuple(ent[i * cols:(i + 1) * cols]) for i in range(rows))
        self._hash = None

    @classmethod
    def _raw(cls, rows: int, cols: int, r) -> "MatrixQ":
        m = object.__new__(cls)
        m.rows = rows
        m.cols = cols
        m._r = tuple(tuple(x) for x in r)
        m._hash = None
        return m

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "MatrixQ":
        rows = [[q(x) for x in r] for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise InputError("ragged matrix rows")
        return cls._raw(len(rows), cols, rows)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int | None = None) -> "MatrixQ":
        cols = [[q(x) for x in c] for c in columns]
        if rows is None:
            rows = len(cols[0]) if cols else 0
        if any(len(c) != rows for c in cols):
            raise InputError("ragged matrix columns")
        return cls._raw(rows, len(cols), [[c[i] for c in cols] for i in range(rows)])

    @classmethod
    def zero(cls, rows: int, cols: int | None = None) -> "MatrixQ":
        cols = rows if cols is None else cols
        return cls._raw(rows, cols, [[ZERO] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, n: int) -> "MatrixQ":
        return cls.diag([ONE] * n)

    @classmethod
    def diag(cls, values: Sequence) -> "MatrixQ":
        n = len(values)
        r = [[ZERO] * n for _ in range(n)]
        for i, v in enumerate(values):
            r[i][i] = q(v)
        return cls._raw(n, n, r)

    @property
    def entries(self) -> tuple[Fraction, ...]:
        return tuple(x for r in self._r for x in r)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._r[i]

    def row_list(self) -> list[list[Fraction]]:
        return [list(r) for r in self._r]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self._r)

    def columns(self) -> list[tuple[Fraction, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self._r[i][j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatrixQ):
            return NotImplemented
        return self.shape == other.shape and self._r == other._r

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self._r))
        return self._hash

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in r) for r in self._r)
        return f"MatrixQ({self.rows}x{self.cols}: [{body}])"

    def _check_same(self, other: "MatrixQ") -> None:
        if self.shape != other.shape:
            raise InputError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "MatrixQ") -> "MatrixQ":
        self._check_same(other)
        return MatrixQ._raw(self.rows, self.cols,
                            [[a + b for a, b in zip(r, s)] for r, s in zip(self._r, other._r)])

    def __sub__(self, other: "MatrixQ") -> "MatrixQ":
        self._check_same(other)
        return MatrixQ._raw(self.rows, self.cols,
                            [[a - b for a, b in zip(r, s)] for r, s in zip(self._r, other._r)])

    def __neg__(self) -> "MatrixQ":
        return self.scale(-1)

    def scale(self, c) -> "MatrixQ":
        c = q(c)
        return MatrixQ._raw(self.rows, self.cols, [[c * x for x in r] for r in self._r])

    def __matmul__(self, other: "MatrixQ") -> "MatrixQ":
        if self.cols != other.rows:
            raise InputError(f"cannot multiply {self.shape} by {other.shape}")
        ocols = other.columns()
        out = []
        for r in self._r:
            nz = [(k, x) for k, x in enumerate(r) if x]
            out.append([sum((x * c[k] for k, x in nz), ZERO) for c in ocols])
        return MatrixQ._raw(self.rows, other.cols, out)

    def apply(self, v: Sequence) -> tuple[Fraction, ...]:
        """Matrix times column vector."""
        if len(v) != self.cols:
            raise InputError(f"vector of length {len(v)} for {self.shape} matrix")
        nz = [(k, q(x)) for k, x in enumerate(v) if x]
        return tuple(sum((r[k] * x for k, x in nz), ZERO) for r in self._r)

    def transpose(self) -> "MatrixQ":
        return MatrixQ._raw(self.cols, self.rows, [list(c) for c in zip(*self._r)] if self.rows else
                            [[] for _ in range(self.cols)])

    @property
    def T(self) -> "MatrixQ":
        return self.transpose()

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return not any(x for r in self._r for x in r)

    def trace(self) -> Fraction:
        if not self.is_square():
            raise InputError("trace of a non-square matrix")
        return sum((self._r[i][i] for i in range(self.rows)), ZERO)

    def rref(self) -> tuple["MatrixQ", list[int]]:
        rows, piv = kernels.rref(self.row_list(), self.cols)
        return MatrixQ._raw(len(rows), self.cols, rows), list(piv)

    def rank(self) -> int:
        return len(kernels.rref(self.row_list(), self.cols)[1])

    def det(self) -> Fraction:
        if not self.is_square():
            raise InputError("determinant of a non-square matrix")
        n = self.rows
        m = [list(r) for r in self._r]
        d = ONE
        for c in range(n):
            p = next((r for r in range(c, n) if m[r][c]), None)
            if p is None:
                return ZERO
            if p != c:
                m[c], m[p] = m[p], m[c]
                d = -d
            piv = m[c][c]
            d *= piv
            for r in range(c + 1, n):
                f = m[r][c]
                if f:
                    f /= piv
                    m[r] = [a - f * b for a, b in zip(m[r], m[c])]
        return d

    def inverse(self) -> "MatrixQ":
        if not self.is_square():
            raise InputError("inverse of a non-square matrix")
        n = self.rows
        aug = [list(r) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(self._r)]
        rows, piv = kernels.rref(aug, 2 * n)
        if piv[:n] != list(range(n)) or len(piv) < n:
            raise InputError("matrix is singular")
        return MatrixQ._raw(n, n, [r[n:] for r in rows[:n]])

    def kron(self, other: "MatrixQ") -> "MatrixQ":
        return kron(self, other)

    def hstack(self, other: "MatrixQ") -> "MatrixQ":
        if self.rows != other.rows:
            raise InputError("hstack row mismatch")
        return MatrixQ._raw(self.rows, self.cols + other.cols,
                            [list(a) + list(b) for a, b in zip(self._r, other._r)])

    def vstack(self, other: "MatrixQ") -> "MatrixQ":
        if self.cols != other.cols:
            raise InputError("vstack column mismatch")
        return MatrixQ._raw(self.rows + other.rows, self.cols, list(self._r) + list(other._r))

    def power(self, k: int) -> "MatrixQ":
        out = MatrixQ.identity(self.rows)
        for _ in range(k):
            out = out @ self
        return out


def kron(a: MatrixQ, b: MatrixQ) -> MatrixQ:
    """Kronecker product; row index is ``i_a * b.rows + i_b``."""
    out = []
    for ra in a._r:
        for rb in b._r:
            out.append([x * y if x and y else ZERO for x in ra for y in rb])
    return MatrixQ._raw(a.rows * b.rows, a.cols * b.cols, out)


def kernel(m: MatrixQ) -> "Subspace":
    """Null space ``{x : m x = 0}``."""
    n = m.cols
    rows, piv = kernels.rref(m.row_list(), n)
    pivset = set(piv)
    vecs = []
    for f in range(n):
        if f in pivset:
            continue
        v = [ZERO] * n
        v[f] = ONE
        for r, p in zip(rows, piv):
            v[p] = -r[f]
        vecs.append(v)
    return Subspace.span(n, vecs)


def image(m: MatrixQ) -> "Subspace":
    """Column space of ``m``."""
    return Subspace.span(m.rows, m.columns())


def solve(m: MatrixQ, b: Sequence) -> tuple[Fraction, ...] | None:
    """A solution of ``m x = b``, or None when the system is inconsistent."""
    if len(b) != m.rows:
        raise InputError(f"right-hand side of length {len(b)} for {m.shape} matrix")
    n = m.cols
    aug = [list(r) + [q(x)] for r, x in zip(m._r, b)]
    rows, piv = kernels.rref(aug, n + 1)
    if piv and piv[-1] == n:
        return None
    x = [ZERO] * n
    for r, p in zip(rows, piv):
        x[p] = r[n]
    return tuple(x)


def modular_rank(m: MatrixQ) -> int:
    """Rank modulo a fixed 62-bit prime; -1 if a denominator vanishes mod p.

    Never exceeds the exact rank; used only as a quick certificate.
    """
    return kernels.rank_mod_p(m.row_list(), m.cols, kernels.PRIME)


class Subspace:
    """Subspace of Q^n with a canonical basis (reduced column echelon form)."""

    __slots__ = ("ambient_dim", "_vecs", "_pivots")

    def __init__(self, ambient_dim: int, vecs, pivots):
        self.ambient_dim = ambient_dim
        self._vecs = tuple(tuple(v) for v in vecs)
        self._pivots = tuple(pivots)

    @classmethod
    def span(cls, ambient_dim: int, vectors: Iterable[Sequence]) -> "Subspace":
        vecs = [[q(x) for x in v] for v in vectors]
        for v in vecs:
            if len(v) != ambient_dim:
                raise InputError(f"vector of length {len(v)} in ambient dimension {ambient_dim}")
        vecs = [v for v in vecs if any(v)]
        if not vecs:
            return cls(ambient_dim, [], [])
        rows, piv = kernels.rref(vecs, ambient_dim)
        return cls(ambient_dim, rows, piv)

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, [], [])

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, [[ONE if i == j else ZERO for j in range(n)] for i in range(n)], range(n))

    @property
    def dim(self) -> int:
        return len(self._vecs)

    @property
    def basis(self) -> MatrixQ:
        """Basis vectors as the columns of a matrix."""
        return MatrixQ.from_columns(self._vecs, self.ambient_dim)

    @property
    def pivots(self) -> tuple[int, ...]:
        return self._pivots

    def vectors(self) -> list[tuple[Fraction, ...]]:
        return list(self._vecs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self._vecs == other._vecs

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self._vecs))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"

    def coordinates(self, v: Sequence) -> tuple[Fraction, ...] | None:
        """Coefficients of ``v`` in the canonical basis, or None if ``v`` is outside."""
        v = [q(x) for x in v]
        if len(v) != self.ambient_dim:
            raise InputError("vector length does not match ambient dimension")
        c = tuple(v[p] for p in self._pivots)
        for i in range(self.ambient_dim):
            s = sum((ci * b[i] for ci, b in zip(c, self._vecs) if ci), ZERO)
            if s != v[i]:
                return None
        return c

    def contains(self, v: Sequence) -> bool:
        return self.coordinates(v) is not None

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(v) for v in other._vecs)

    def _check(self, other: "Subspace") -> None:
        if self.ambient_dim != other.ambient_dim:
            raise InputError("ambient dimension mismatch")

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.span(self.ambient_dim, list(self._vecs) + list(other._vecs))

    def intersect(self, other: "Subspace") -> "Subspace":
        return intersect(self, other)


def intersect(u: Subspace, v: Subspace) -> Subspace:
    """Intersection via the kernel of the stacked basis matrix ``[U | -V]``."""
    u._check(v)
    if u.dim == 0 or v.dim == 0:
        return Subspace.zero(u.ambient_dim)
    cols = list(u._vecs) + [tuple(-x for x in w) for w in v._vecs]
    k = kernel(MatrixQ.from_columns(cols, u.ambient_dim))
    out = []
    for c in k.vectors():
        out.append([sum((ci * b[i] for ci, b in zip(c[:u.dim], u._vecs) if ci), ZERO)
                    for i in range(u.ambient_dim)])
    return Subspace.span(u.ambient_dim, out)


def sum_of(subspaces: Sequence[Subspace], n: int) -> Subspace:
    vecs = [v for s in subspaces for v in s.vectors()]
    return Subspace.span(n, vecs)


def intersect_all(subspaces: Sequence[Subspace], n: int) -> Subspace:
    out = Subspace.full(n)
    for s in subspaces:
        out = intersect(out, s)
    return out


def independent_columns(vectors: Sequence[dict], n: int) -> list[int]:
    """Indices of a maximal linearly independent subfamily of sparse vectors.

    ``vectors`` are dicts ``{coordinate: value}`` in Q^n.  The earliest
    vectors are preferred, so the result is the pivot columns of the
    matrix whose columns are the vectors.
    """
    if not vectors:
        return []
    used = sorted({i for v in vectors for i in v})
    pos = {i: r for r, i in enumerate(used)}
    rows = [[ZERO] * len(vectors) for _ in used]
    for c, v in enumerate(vectors):
        for i, x in v.items():
            if x:
                rows[pos[i]][c] = x
    return list(kernels.rank_profile(rows, len(vectors)))
