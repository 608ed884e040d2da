"""epsilon-hermitian forms with values in tensor powers of an algebra.

A form lives on a K-space with basis ``w_0, ..., w_{n-1}`` and takes values
in ``C = A_1 (x) ... (x) A_r`` (``r = 0`` is the base field).  Values are
sparse tensor elements (see :mod:`hermlambda.algebra`); the right action of
``C`` on the space, when known, is given by matrices for the generators
``1 (x) .. (x) a_b (x) .. (x) 1``.

Conventions: ``h(x a, y b) = sigma(a) h(x, y) b`` and
``sigma(h(x, y)) = eps h(y, x)``.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Callable, Sequence

from .algebra import Algebra, Elt, TElt, tadd, tmul, tpure, tscale, tsigma, tunit
from .linalg import ONE, ZERO, InputError, MatrixQ, solve
from .qform import WittInvariants, diagonalize, invariants
from .tensor import DEFAULT_CAP, AltPower, FreeModule, SVec, SumSplit, alt_power, axpy, direct_sum


class FormError(InputError):
    """The data does not describe a valid hermitian form."""


# coefficient helpers


def ctrd(algs: Sequence[Algebra], x: TElt) -> Fraction:
    """Reduced trace on ``A_1 (x) ... (x) A_r``."""
    tv = [a._trace_vector() for a in algs]
    out = ZERO
    for key, c in x.items():
        t = c
        for f, k in enumerate(key):
            t *= tv[f][k]
            if not t:
                break
        out += t
    return out


def scalar_value(x: TElt) -> Fraction:
    """The rational number represented by a value over the base field."""
    if any(k != () for k in x):
        raise InputError("value is not a scalar")
    return x.get((), ZERO)


def elt_to_telt(x: Elt) -> TElt:
    return {(i,): c for i, c in enumerate(x) if c}


def telt_to_elt(a: Algebra, x: TElt) -> Elt:
    out = [ZERO] * a.dim
    for (i,), c in x.items():
        out[i] += c
    return tuple(out)


class HermitianForm:
    """A form given by a value function on a K-basis, evaluated lazily and cached."""

    def __init__(self, algebras: Sequence[Algebra], eps: int, dim: int,
                 entry: Callable[[int, int], TElt] | None = None,
                 gram: Sequence[Sequence[TElt]] | None = None,
                 action: Callable[[int, int], MatrixQ] | None = None, name: str = ""):
        if eps not in (1, -1):
            raise FormError("sign must be +1 or -1")
        self.algebras = tuple(algebras)
        self.eps = eps
        self.dim = dim
        self.name = name
        self._entry = entry
        self._cache: dict[tuple[int, int], TElt] = {}
        if gram is not None:
            if len(gram) != dim or any(len(r) != dim for r in gram):
                raise FormError("value table has the wrong shape")
            for s in range(dim):
                for t in range(dim):
                    self._cache[(s, t)] = {k: v for k, v in gram[s][t].items() if v}
        elif entry is None:
            raise FormError("need a value table or an entry function")
        self._action = action
        self._action_cache: dict[tuple[int, int], MatrixQ] = {}

    @property
    def degree(self) -> int:
        return math.prod(a.degree for a in self.algebras)

    @property
    def rdim(self) -> Fraction:
        return Fraction(self.dim, self.degree)

    def value(self, s: int, t: int) -> TElt:
        v = self._cache.get((s, t))
        if v is None:
            v = self._entry(s, t)
            self._cache[(s, t)] = v
        return v

    def gram(self) -> list[list[TElt]]:
        return [[self.value(s, t) for t in range(self.dim)] for s in range(self.dim)]

    def evaluate(self, x: SVec, y: SVec) -> TElt:
        """``h(x, y)`` for K-combinations of basis vectors."""
        out: TElt = {}
        for s, a in x.items():
            for t, b in y.items():
                out = tadd(out, self.value(s, t), a * b)
        return out

    def has_action(self) -> bool:
        return self._action is not None

    def action(self, f: int, b: int) -> MatrixQ:
        """Matrix (columns = images of basis vectors) of right multiplication by generator ``(f, b)``."""
        if self._action is None:
            raise FormError("form has no module structure")
        m = self._action_cache.get((f, b))
        if m is None:
            m = self._action(f, b)
            self._action_cache[(f, b)] = m
        return m

    def trace_gram(self) -> MatrixQ:
        """Gram matrix of the K-bilinear form ``Trd o h``."""
        n = self.dim
        return MatrixQ.from_rows([[ctrd(self.algebras, self.value(s, t)) for t in range(n)]
                                  for s in range(n)], n)

    def scalar_gram(self) -> MatrixQ:
        if self.algebras:
            raise FormError("form is not over the base field")
        n = self.dim
        return MatrixQ.from_rows([[scalar_value(self.value(s, t)) for t in range(n)] for s in range(n)], n)

    # checks

    def is_hermitian(self) -> bool:
        for s in range(self.dim):
            for t in range(s, self.dim):
                if tsigma(self.algebras, self.value(s, t)) != tscale(self.eps, self.value(t, s)):
                    return False
        return True

    def is_sesquilinear(self) -> bool:
        """``h(w_s a, w_t) = sigma(a) h(w_s, w_t)`` for all generators ``a``."""
        if self._action is None:
            raise FormError("form has no module structure")
        algs = self.algebras
        for f, a in enumerate(algs):
            for b in range(a.dim):
                m = self.action(f, b)
                gen = tpure([a.basis(b) if g == f else x.one for g, x in enumerate(algs)])
                sg = tsigma(algs, gen)
                for s in range(self.dim):
                    for t in range(self.dim):
                        lhs: TElt = {}
                        for k in range(self.dim):
                            c = m[k, s]
                            if c:
                                lhs = tadd(lhs, self.value(k, t), c)
                        if lhs != tmul(algs, sg, self.value(s, t)):
                            return False
        return True

    def is_nondegenerate(self) -> bool:
        return self.trace_gram().rank() == self.dim

    def check(self) -> None:
        if not self.is_hermitian():
            raise FormError(f"form is not {self.eps:+d}-hermitian")
        if self._action is not None and not self.is_sesquilinear():
            raise FormError("form is not sesquilinear")
        if not self.is_nondegenerate():
            raise FormError("form is degenerate")

    def trace_invariants(self) -> WittInvariants:
        """Witt invariants of ``Trd o h`` (symmetric forms only)."""
        if self.eps != 1:
            raise FormError("trace form of a skew form is alternating")
        return invariants(diagonalize(self.trace_gram()))


class FreeForm(HermitianForm):
    """A form on the free module ``A^m`` given by its matrix ``H`` (``H[r][r'] = h(e_r, e_r')``)."""

    def __init__(self, algebra: Algebra, matrix: Sequence[Sequence[Elt]], eps: int, name: str = ""):
        m = len(matrix)
        if any(len(r) != m for r in matrix):
            raise FormError("form matrix must be square")
        self.algebra = algebra
        self.module = FreeModule(algebra, m)
        self.matrix = tuple(tuple(algebra.elt(x) for x in row) for row in matrix)
        a = algebra
        for r in range(m):
            for t in range(m):
                if a.sigma(self.matrix[r][t]) != a.smul(eps, self.matrix[t][r]):
                    raise FormError(f"entry ({r}, {t}) breaks {eps:+d}-hermitian symmetry")
        da = a.dim
        n = m * da
        e = [a.basis(i) for i in range(da)]
        se = [a.sigma(x) for x in e]
        # hv[x][y] = h(e_r a_s, e_t a_u) = sigma(a_s) H_rt a_u
        hv = []
        for x in range(n):
            r, s = divmod(x, da)
            row = []
            left = [a.mul(se[s], self.matrix[r][t]) for t in range(m)]
            for y in range(n):
                t, u = divmod(y, da)
                row.append(a.mul(left[t], e[u]))
            hv.append(row)
        self.hv = hv
        self.hv_sparse = [[tuple((k, c) for k, c in enumerate(v) if c) for v in row] for row in hv]
        mod = self.module
        super().__init__([a], eps, n, entry=lambda s, t: elt_to_telt(self.hv[s][t]),
                         action=lambda f, b: mod.right_matrix(b), name=name)

    @property
    def rank(self) -> int:
        return self.module.rank


def diagonal_form(algebra: Algebra, entries: Sequence) -> FreeForm:
    """``<a_1, ..., a_m>_sigma``: ``h(x, y) = sum sigma(x_i) a_i y_i``."""
    a = algebra
    elts = []
    for x in entries:
        if isinstance(x, (int, Fraction)) or not hasattr(x, "__len__"):
            elts.append(a.scalar(x))
        else:
            elts.append(a.elt(x))
    eps = None
    for x in elts:
        if a.inverse(x) is None:
            raise FormError(f"diagonal entry {x} is not invertible")
        sx = a.sigma(x)
        e = 1 if sx == x else (-1 if sx == a.smul(-1, x) else 0)
        if e == 0:
            raise FormError(f"diagonal entry {x} is neither symmetric nor skew")
        if eps is not None and e != eps:
            raise FormError("diagonal entries have mixed symmetry")
        eps = e
    if eps is None:
        eps = 1
    m = len(elts)
    matrix = [[elts[r] if r == t else a.zero() for t in range(m)] for r in range(m)]
    return FreeForm(a, matrix, eps)


def form_from_gram(algebra: Algebra, matrix: Sequence[Sequence], eps: int) -> FreeForm:
    return FreeForm(algebra, [[algebra.elt(x) if hasattr(x, "__len__") else algebra.scalar(x)
                               for x in row] for row in matrix], eps)


# algebra of forms


def orthogonal_sum(h1: HermitianForm, h2: HermitianForm) -> HermitianForm:
    if len(h1.algebras) != len(h2.algebras) or any(a is not b for a, b in zip(h1.algebras, h2.algebras)):
        raise FormError("orthogonal sum of forms over different algebras")
    if h1.eps != h2.eps:
        raise FormError("orthogonal sum of forms with different signs")
    if isinstance(h1, FreeForm) and isinstance(h2, FreeForm):
        a = h1.algebra
        m1, m2 = h1.rank, h2.rank
        z = a.zero()
        mat = [list(r) + [z] * m2 for r in h1.matrix] + [[z] * m1 + list(r) for r in h2.matrix]
        return FreeForm(a, mat, h1.eps)
    n1 = h1.dim

    def entry(s, t):
        if s < n1 and t < n1:
            return h1.value(s, t)
        if s >= n1 and t >= n1:
            return h2.value(s - n1, t - n1)
        return {}

    action = None
    if h1.has_action() and h2.has_action():
        def action(f, b):
            a1, a2 = h1.action(f, b), h2.action(f, b)
            return _block_diag(a1, a2)
    return HermitianForm(h1.algebras, h1.eps, n1 + h2.dim, entry=entry, action=action)


def _block_diag(a: MatrixQ, b: MatrixQ) -> MatrixQ:
    n = a.rows + b.rows
    rows = [list(a.row(i)) + [ZERO] * b.cols for i in range(a.rows)]
    rows += [[ZERO] * a.cols + list(b.row(i)) for i in range(b.rows)]
    return MatrixQ.from_rows(rows, n)


def tensor_form(h1: HermitianForm, h2: HermitianForm) -> HermitianForm:
    """``h1 (x) h2`` over the concatenated coefficient algebras; basis index ``s1 * dim h2 + s2``."""
    n2 = h2.dim
    r1 = len(h1.algebras)

    def entry(s, t):
        s1, s2 = divmod(s, n2)
        t1, t2 = divmod(t, n2)
        x, y = h1.value(s1, t1), h2.value(s2, t2)
        return {k1 + k2: c1 * c2 for k1, c1 in x.items() for k2, c2 in y.items()}

    action = None
    if h1.has_action() and h2.has_action():
        def action(f, b):
            if f < r1:
                return h1.action(f, b).kron(MatrixQ.identity(n2))
            return MatrixQ.identity(h1.dim).kron(h2.action(f - r1, b))
    return HermitianForm(h1.algebras + h2.algebras, h1.eps * h2.eps, h1.dim * n2,
                         entry=entry, action=action)


def scale(lam, h: HermitianForm) -> HermitianForm:
    """``<lam> h`` for a nonzero rational ``lam``."""
    lam = Fraction(lam)
    if not lam:
        raise FormError("scaling by zero")
    if isinstance(h, FreeForm):
        a = h.algebra
        return FreeForm(a, [[a.smul(lam, x) for x in row] for row in h.matrix], h.eps)
    return HermitianForm(h.algebras, h.eps, h.dim, entry=lambda s, t: tscale(lam, h.value(s, t)),
                         action=h._action)


def quadratic_form(values: Sequence) -> HermitianForm:
    """Diagonal symmetric bilinear form over the base field."""
    vals = [Fraction(v) for v in values]
    n = len(vals)
    return HermitianForm((), 1, n, gram=[[{(): vals[s]} if s == t and vals[s] else {}
                                          for t in range(n)] for s in range(n)])


def gram_form(m: MatrixQ, eps: int = 1) -> HermitianForm:
    """Bilinear form over the base field with Gram matrix ``m``."""
    n = m.rows
    return HermitianForm((), eps, n, gram=[[{(): m[s, t]} if m[s, t] else {} for t in range(n)]
                                           for s in range(n)])


# isometries


def transport(m: MatrixQ, h: HermitianForm) -> list[list[TElt]]:
    """Values ``h(M w_s, M w_t)`` for the columns of ``m``."""
    cols = [{k: m[k, s] for k in range(m.rows) if m[k, s]} for s in range(m.cols)]
    return [[h.evaluate(cols[s], cols[t]) for t in range(m.cols)] for s in range(m.cols)]


def verify_isometry(m: MatrixQ, h1: HermitianForm, h2: HermitianForm) -> bool:
    """``m`` maps the space of ``h1`` bijectively onto that of ``h2``, is A-linear
    (when both carry actions) and transports values exactly."""
    if m.shape != (h2.dim, h1.dim) or h1.dim != h2.dim:
        return False
    if h1.algebras != h2.algebras or h1.eps != h2.eps:
        return False
    if h1.dim and m.rank() != h1.dim:
        return False
    if h1.has_action() and h2.has_action():
        for f, a in enumerate(h1.algebras):
            for b in range(a.dim):
                if m @ h1.action(f, b) != h2.action(f, b) @ m:
                    return False
    moved = transport(m, h2)
    return all(moved[s][t] == h1.value(s, t) for s in range(h1.dim) for t in range(h1.dim))


# adjoint involution


def adjoint_involution(h: FreeForm) -> MatrixQ:
    """The involution ``sigma_h`` of ``End_A(V)`` with ``h(u x, y) = h(x, sigma_h(u) y)``,
    as a matrix on the basis of :meth:`FreeModule.endo_algebra`."""
    mod = h.module
    if mod.rank < 1:
        raise FormError("adjoint involution of the zero module")
    a = h.algebra
    e_alg = mod.endo_algebra()
    ne = e_alg.dim
    n = mod.dim
    lefts = [mod.endo_left_matrix(c) for c in range(ne)]
    cols = []
    for u in range(ne):
        rows = []
        rhs = []
        lu = lefts[u]
        for x in range(n):
            ux = {k: lu[k, x] for k in range(n) if lu[k, x]}
            for y in range(n):
                target = a.zero()
                for k, c in ux.items():
                    target = a.add(target, a.smul(c, h.hv[k][y]))
                # sum_c z_c h(x, e_c y)
                coeffs = []
                for c in range(ne):
                    lc = lefts[c]
                    v = a.zero()
                    for k in range(n):
                        w = lc[k, y]
                        if w:
                            v = a.add(v, a.smul(w, h.hv[x][k]))
                    coeffs.append(v)
                for i in range(a.dim):
                    rows.append([cf[i] for cf in coeffs])
                    rhs.append(target[i])
        sol = solve(MatrixQ.from_rows(rows, ne), rhs)
        if sol is None:
            raise FormError("form is degenerate: no adjoint")
        cols.append(sol)
    return MatrixQ.from_columns(cols, ne)


def adjoint_algebra(h: FreeForm) -> Algebra:
    """``End_A(V)`` with the adjoint involution of ``h``."""
    e_alg = h.module.endo_algebra()
    inv = adjoint_involution(h)
    out = Algebra(e_alg.labels, [[list(c) for c in row] for row in e_alg.table], e_alg.one, inv,
                  kind=e_alg.kind, name=f"End({e_alg.name})")
    out._goldman = None
    return out


# trace forms of an involution


class TraceForms:
    """``T_sigma(x, y) = Trd(sigma(x) y)`` on A and on the symmetric/skew parts."""

    def __init__(self, a: Algebra):
        self.algebra = a
        n = a.dim
        e = [a.basis(i) for i in range(n)]
        self.full = MatrixQ.from_rows([[a.trd(a.mul(a.sigma(e[s]), e[t])) for t in range(n)]
                                       for s in range(n)], n)
        self.sym = a.sym_basis(1)
        self.skew = a.sym_basis(-1)
        self.plus = self._restrict(self.sym.vectors())
        self.minus = self._restrict(self.skew.vectors())

    def _restrict(self, vecs) -> MatrixQ:
        k = len(vecs)
        g = self.full
        rows = []
        for u in vecs:
            gu = [sum((u[i] * g[i, j] for i in range(len(u)) if u[i]), ZERO) for j in range(g.cols)]
            rows.append([sum((gu[j] * v[j] for j in range(len(v)) if v[j]), ZERO) for v in vecs])
        return MatrixQ.from_rows(rows, k) if k else MatrixQ.zero(0)

    def adapted(self) -> MatrixQ:
        """``T_sigma`` on the basis ``Sym+ | Sym-``: block diagonal."""
        vecs = self.sym.vectors() + self.skew.vectors()
        return self._restrict(vecs)

    def part(self, eps: int) -> MatrixQ:
        return self.plus if eps == 1 else self.minus


def involution_trace_forms(a: Algebra) -> TraceForms:
    return TraceForms(a)


# alternating powers


class AltForm(HermitianForm):
    """``Alt^d(h)`` on ``Alt^d(V)``: ``Alt^d(h)(s_d x, s_d y) = h^{(x) d}(s_d x, y)``."""

    def __init__(self, h: FreeForm, d: int, cap: int = DEFAULT_CAP):
        self.base = h
        self.alt: AltPower = alt_power(h.module, d, cap)
        self.d = d
        tp = self.alt.tp
        self._pre_digits = [tp.digits(p) for p in self.alt.preimages]
        super().__init__([h.algebra] * d, h.eps ** d, self.alt.dim, entry=self._entry_fn,
                         action=lambda f, b: self.alt.right_action_matrix(f, b))

    def power_value(self, x: SVec, y_digits: Sequence[int]) -> TElt:
        """``h^{(x) d}(x, y)`` for a pure basis tensor ``y``."""
        tp = self.alt.tp
        hs = self.base.hv_sparse
        d = self.d
        out: TElt = {}
        for idx, c in x.items():
            dg = tp.digits(idx)
            partial = {(): c}
            for f in range(d):
                cell = hs[dg[f]][y_digits[f]]
                if not cell:
                    partial = None
                    break
                partial = {k + (i,): v * w for k, v in partial.items() for i, w in cell}
            if partial:
                for k, v in partial.items():
                    w = out.get(k, ZERO) + v
                    if w:
                        out[k] = w
                    else:
                        del out[k]
        return out

    def power_form(self, x: SVec, y: SVec) -> TElt:
        """``h^{(x) d}(x, y)`` for arbitrary vectors of ``V^{(x) d}``."""
        tp = self.alt.tp
        out: TElt = {}
        for j, c in y.items():
            out = tadd(out, self.power_value(x, tp.digits(j)), c)
        return out

    def _entry_fn(self, s: int, t: int) -> TElt:
        return self.power_value(self.alt.vectors[s], self._pre_digits[t])


def alt_power_form(h: FreeForm, d: int, cap: int = DEFAULT_CAP) -> AltForm:
    if d < 0:
        raise InputError("alternating power of negative degree")
    return AltForm(h, d, cap)


def restriction_scalar_holds(af: AltForm) -> bool:
    """``h^{(x) d}`` restricted to ``Alt^d(V)`` equals ``<d!> Alt^d(h)``."""
    fact = math.factorial(af.d)
    vecs = af.alt.vectors
    for s in range(af.dim):
        for t in range(af.dim):
            if af.power_form(vecs[s], vecs[t]) != tscale(fact, af.value(s, t)):
                return False
    return True


def antisymmetrizer_self_adjoint(af: AltForm, pairs: Sequence[tuple[SVec, SVec]]) -> bool:
    """``h^{(x) d}(s_d x, y) = h^{(x) d}(x, s_d y)`` on the given vector pairs."""
    tp = af.alt.tp
    return all(af.power_form(tp.antisymmetrize(x), y) == af.power_form(x, tp.antisymmetrize(y))
               for x, y in pairs)


class AdditionIsometry:
    """The shuffle map ``sum Alt^p(h1) (x) Alt^q(h2) -> Alt^d(h1 + h2)`` and its check."""

    def __init__(self, h1: FreeForm, h2: FreeForm, d: int, cap: int = DEFAULT_CAP):
        self.split = SumSplit(h1.module, h2.module, d, cap)
        self.target = alt_power_form(orthogonal_sum(h1, h2), d, cap)
        if self.target.alt.vectors != self.split.target.vectors:
            raise ArithmeticError("alternating power bases disagree")
        pieces = []
        for p, q, ap, aq, start, end in self.split.blocks:
            fp = alt_power_form(h1, p, cap)
            fq = alt_power_form(h2, q, cap)
            pieces.append(tensor_form(fp, fq))
        src = pieces[0]
        for piece in pieces[1:]:
            src = orthogonal_sum(src, piece)
        self.source = src
        self.matrix = self.split.matrix()

    def verify(self) -> bool:
        return verify_isometry(self.matrix, self.source, self.target)


def addition_isometry(h1: FreeForm, h2: FreeForm, d: int, cap: int = DEFAULT_CAP) -> AdditionIsometry:
    if h1.algebra is not h2.algebra or h1.eps != h2.eps:
        raise FormError("addition formula needs forms over the same algebra with the same sign")
    return AdditionIsometry(h1, h2, d, cap)


# classical exterior powers over the base field


def exterior_gram(m: MatrixQ, d: int) -> MatrixQ:
    """Gram matrix of the d-th exterior power: ``det(b(u_i, v_j))`` on ``e_I``, ``I`` increasing."""
    n = m.rows
    subsets = list(itertools.combinations(range(n), d))
    rows = []
    for i in subsets:
        row = []
        for j in subsets:
            sub = MatrixQ.from_rows([[m[a, b] for b in j] for a in i], d) if d else MatrixQ.identity(0)
            row.append(sub.det() if d else ONE)
        rows.append(row)
    return MatrixQ.from_rows(rows, len(subsets))


def exterior_diagonal(values: Sequence, d: int) -> list[Fraction]:
    """``lambda^d <a_1, ..., a_n> = perp_{|I| = d} <prod_{i in I} a_i>``."""
    return [math.prod((Fraction(values[i]) for i in idx), start=ONE)
            for idx in itertools.combinations(range(len(values)), d)]
