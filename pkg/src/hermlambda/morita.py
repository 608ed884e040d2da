"""Hermitian Morita equivalences: composition, transfer and pushforward.

An equivalence ``(B, tau) -> (A, sigma)`` is a K-space ``U`` with a left
``B``-action, a right ``A``-action and an eps-hermitian form ``g`` valued
in ``A`` with ``g(b u, u') = g(u, tau(b) u')``.  Composing a form ``phi`` on
a right ``B``-module ``W`` with it gives ``f`` on ``W (x)_B U``,

    f(w (x) u, w' (x) u') = g(u, phi(w, w') u').

Since ``B`` is simple and ``U`` is generated by one vector ``u0``, every
element of ``W (x)_B U`` is some ``w (x) u0`` and ``W (x)_B U`` is the
quotient of ``W`` by the radical of ``F(w, w') = l(phi(w, w'))`` with
``l(b) = g(u0, b u0)``.  :func:`compose_form` works with this radical;
:func:`explicit_compose` builds the quotient by the defining relations
instead and serves as an independent check.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Callable, Sequence

from .algebra import Algebra, TElt, tadd, tmul, tpure, tscale, tsigma
from .hermitian import FormError, FreeForm, HermitianForm, elt_to_telt
from .linalg import ONE, ZERO, InputError, MatrixQ, solve
from .tensor import SVec, axpy, dense, tensor_over_algebra


def same_algebra(a: Algebra, b: Algebra) -> bool:
    return a is b or (a.table == b.table and a.one == b.one and a.involution == b.involution)


def _check_match(have: Sequence[Algebra], want: Sequence[Algebra], what: str) -> None:
    if len(have) != len(want) or not all(same_algebra(x, y) for x, y in zip(have, want)):
        raise FormError(f"{what}: coefficient algebras do not match the equivalence")


def _coords(algs: Sequence[Algebra], x: TElt) -> list[Fraction]:
    """Dense coordinates of a tensor element (keys in lexicographic order)."""
    dims = [a.dim for a in algs]
    n = 1
    for d in dims:
        n *= d
    out = [ZERO] * n
    for key, c in x.items():
        idx = 0
        for k, d in zip(key, dims):
            idx = idx * d + k
        out[idx] = c
    return out


def _apply(m: MatrixQ, v: SVec) -> SVec:
    out: SVec = {}
    for j, c in v.items():
        for i in range(m.rows):
            x = m[i, j]
            if x:
                w = out.get(i, ZERO) + c * x
                if w:
                    out[i] = w
                else:
                    del out[i]
    return out


class Equivalence:
    """A hermitian bimodule ``U`` from ``(B_1 (x) ... (x) B_r)`` to ``(A_1 (x) ... (x) A_s)``.

    ``left(f, b)`` and ``right(f, b)`` are the matrices (columns = images)
    of the generators ``1 (x) b_b (x) 1`` acting on U; ``value(i, j)`` is
    ``g`` on basis vectors.  ``ell`` may supply ``l(key) = g(u0, b_key u0)``
    in closed form.
    """

    def __init__(self, source: Sequence[Algebra], target: Sequence[Algebra], eps: int, dim: int,
                 value: Callable[[int, int], TElt], left: Callable[[int, int], MatrixQ] | None,
                 right: Callable[[int, int], MatrixQ] | None, u0: SVec,
                 ell: Callable[[tuple], TElt] | None = None,
                 lift: Callable[[int, int], TElt] | None = None, name: str = ""):
        self.source = tuple(source)
        self.target = tuple(target)
        self.eps = eps
        self.dim = dim
        self._value = value
        self._left = left
        self._right = right
        self.u0 = dict(u0)
        self._ell_closed = ell
        self._lift_closed = lift
        self.name = name
        self._ell: dict[tuple, TElt] = {}
        self._lefts: dict[tuple[int, int], MatrixQ] = {}
        self._rights: dict[tuple[int, int], MatrixQ] = {}
        self._lifts: dict[tuple[int, int], TElt] = {}
        self._vals: dict[tuple[int, int], TElt] = {}

    def __repr__(self) -> str:
        return f"Equivalence({self.name or '?'}, dim={self.dim})"

    # actions

    @property
    def has_matrices(self) -> bool:
        return self._left is not None

    def left(self, f: int, b: int) -> MatrixQ:
        if self._left is None:
            raise FormError("equivalence is given in closed form only")
        m = self._lefts.get((f, b))
        if m is None:
            m = self._lefts[(f, b)] = self._left(f, b)
        return m

    def right(self, f: int, b: int) -> MatrixQ:
        if self._right is None:
            raise FormError("equivalence has no target action")
        m = self._rights.get((f, b))
        if m is None:
            m = self._rights[(f, b)] = self._right(f, b)
        return m

    def value(self, i: int, j: int) -> TElt:
        v = self._vals.get((i, j))
        if v is None:
            v = self._vals[(i, j)] = self._value(i, j)
        return v

    def evaluate(self, x: SVec, y: SVec) -> TElt:
        out: TElt = {}
        for i, a in x.items():
            for j, b in y.items():
                out = tadd(out, self.value(i, j), a * b)
        return out

    def act_key(self, key: Sequence[int], u: SVec) -> SVec:
        for f, b in enumerate(key):
            u = _apply(self.left(f, b), u)
        return u

    def apply(self, beta: TElt, u: SVec) -> SVec:
        out: SVec = {}
        for key, c in beta.items():
            axpy(out, self.act_key(key, u), c)
        return out

    # the functional l

    def ell(self, key: tuple) -> TElt:
        v = self._ell.get(key)
        if v is None:
            if self._ell_closed is not None:
                v = self._ell_closed(key)
            else:
                v = self.evaluate(self.u0, self.act_key(key, self.u0))
            self._ell[key] = v
        return v

    def functional(self, beta: TElt) -> TElt:
        out: TElt = {}
        for key, c in beta.items():
            out = tadd(out, self.ell(key), c)
        return out

    def lift(self, f: int, b: int) -> TElt:
        """An element ``beta`` of the source with ``beta u0 = u0 a_b``."""
        v = self._lifts.get((f, b))
        if v is not None:
            return v
        if self._lift_closed is not None:
            v = self._lift_closed(f, b)
        else:
            target = dense(_apply(self.right(f, b), self.u0), self.dim)
            keys = list(product(*[range(a.dim) for a in self.source]))
            cols = [dense(self.act_key(k, self.u0), self.dim) for k in keys]
            sol = solve(MatrixQ.from_columns(cols, self.dim), target)
            if sol is None:
                raise FormError("the base vector does not generate the module")
            v = {k: c for k, c in zip(keys, sol) if c}
        self._lifts[(f, b)] = v
        return v

    def as_form(self) -> HermitianForm:
        """``g`` as a hermitian form over the target."""
        return HermitianForm(self.target, self.eps, self.dim, entry=self.value,
                             action=self.right if self._right is not None else None)

    # validation

    def generates(self) -> bool:
        keys = list(product(*[range(a.dim) for a in self.source]))
        vecs = [dense(self.act_key(k, self.u0), self.dim) for k in keys]
        return MatrixQ.from_columns(vecs, self.dim).rank() == self.dim if vecs else self.dim == 0

    def check(self) -> dict[str, bool]:
        """Bimodule, hermitian and compatibility identities on generators."""
        out = {}
        n = self.dim
        units = [{i: ONE} for i in range(n)]
        form = self.as_form()
        out["hermitian"] = form.is_hermitian()
        out["nondegenerate"] = form.is_nondegenerate()
        if self._right is not None:
            out["sesquilinear"] = form.is_sesquilinear()
        if self._left is not None:
            commute = True
            compat = True
            for f, a in enumerate(self.source):
                for b in range(a.dim):
                    lm = self.left(f, b)
                    if self._right is not None:
                        for g, t in enumerate(self.target):
                            for c in range(t.dim):
                                rm = self.right(g, c)
                                commute &= lm @ rm == rm @ lm
                    # g(b u, u') = g(u, tau(b) u')
                    sb = a.sigma(a.basis(b))
                    for i in range(n):
                        bu = _apply(lm, units[i])
                        for j in range(n):
                            rhs: SVec = {}
                            for k, c in enumerate(sb):
                                if c:
                                    axpy(rhs, _apply(self.left(f, k), units[j]), c)
                            compat &= self.evaluate(bu, units[j]) == self.evaluate(units[i], rhs)
            out["bimodule"] = commute
            out["compatible"] = compat
            out["generated"] = self.generates()
        return out


# constructors


def _strip_field(target: Sequence[Algebra]) -> bool:
    return len(target) == 1 and target[0].dim == 1


def module_equivalence(source: Algebra, g: FreeForm, rho: Sequence[MatrixQ], name: str = "") -> Equivalence:
    """``(U, g)`` with ``U = A^m`` free over the target and ``rho[b]`` the action of ``b_b`` on U.

    A target equal to the base field is dropped, so the values are plain scalars.
    """
    a = g.algebra
    n = g.dim
    if len(rho) != source.dim or any(m.shape != (n, n) for m in rho):
        raise InputError(f"action needs {source.dim} matrices of size {n}")
    field = a.dim == 1
    target = () if field else (a,)
    if field:
        value = lambda i, j: {(): g.hv[i][j][0]} if g.hv[i][j][0] else {}
        right = None
    else:
        value = g.value
        right = lambda f, b: g.module.right_matrix(b)
    eq = Equivalence((source,), target, g.eps, n, value, lambda f, b: rho[b], right, {}, name=name)
    eq.u0 = _find_generator(eq)
    return eq


def _find_generator(eq: Equivalence) -> SVec:
    n = eq.dim
    cands = [{i: ONE} for i in range(n)]
    cands.append({i: ONE for i in range(n)})
    cands.extend({i: Fraction(i + 1) ** k for i in range(n)} for k in (2, 3))
    for c in cands:
        eq.u0 = c
        if eq.generates():
            return c
    raise FormError("module is not cyclic over the source algebra")


def identity_equivalence(a: Algebra) -> Equivalence:
    """``(A, <1>_sigma)`` from ``(A, sigma)`` to itself."""
    g = FreeForm(a, [[a.one]], 1)
    lefts = [a.left_matrix(a.basis(b)) for b in range(a.dim)]
    eq = Equivalence((a,), (a,), 1, a.dim, g.value, lambda f, b: lefts[b],
                     lambda f, b: g.module.right_matrix(b), {i: c for i, c in enumerate(a.one) if c},
                     ell=lambda key: elt_to_telt(a.basis(key[0])), lift=lambda f, b: elt_to_telt(a.basis(b)),
                     name=f"id({a.name})")
    return eq


def trace_equivalence(a: Algebra, k: int) -> Equivalence:
    """From ``(A^{(x) k}, sigma^{(x) k})`` to ``(K, id)`` (k even) or ``(A, sigma)`` (k odd).

    ``U = |A|^{(x) h} (x) A`` (the last factor only for odd k, ``h = k // 2``),
    where factors ``i`` and ``i + h`` act on the i-th ``|A|`` by
    ``(x (x) y) . z = x z sigma(y)`` and ``T_sigma(z, z') = Trd(sigma(z) z')``.
    """
    if k < 0:
        raise InputError("negative tensor degree")
    h = k // 2
    odd = k % 2 == 1
    da = a.dim
    nf = h + (1 if odd else 0)
    n = da ** nf
    trd = [[a.trd(a.mul(a.sigma(a.basis(s)), a.basis(t))) for t in range(da)] for s in range(da)]
    lmul = [a.left_matrix(a.basis(b)) for b in range(da)]
    rsig = [a.right_matrix(a.sigma(a.basis(b))) for b in range(da)]
    rmul = [a.right_matrix(a.basis(b)) for b in range(da)]
    eye = MatrixQ.identity(da)

    def digits(i):
        return [(i // da ** (nf - 1 - f)) % da for f in range(nf)]

    def value(i, j):
        di, dj = digits(i), digits(j)
        c = ONE
        for f in range(h):
            c *= trd[di[f]][dj[f]]
            if not c:
                return {}
        if not odd:
            return {(): c}
        x = a.mul(a.sigma(a.basis(di[-1])), a.basis(dj[-1]))
        return {(t,): c * v for t, v in enumerate(x) if v}

    def place(f, m):
        out = MatrixQ.identity(1)
        for g in range(nf):
            out = out.kron(m if g == f else eye)
        return out

    def left(f, b):
        if f < h:
            return place(f, lmul[b])
        if f < 2 * h:
            return place(f - h, rsig[b])
        return place(h, lmul[b])

    def right(f, b):
        return place(h, rmul[b])

    trd_pair = {}

    def ell(key):
        c = ONE
        for f in range(h):
            p = (key[f], key[f + h])
            t = trd_pair.get(p)
            if t is None:
                t = trd_pair[p] = a.trd(a.mul(a.basis(p[0]), a.sigma(a.basis(p[1]))))
            c *= t
            if not c:
                return {}
        if not odd:
            return {(): c}
        return {(key[-1],): c}

    def lift(f, b):
        return tpure([a.one] * (2 * h) + [a.basis(b)])

    u0: SVec = {(): ONE}
    for _ in range(nf):
        u0 = {key + (i,): c * x for key, c in u0.items() for i, x in enumerate(a.one) if x}
    u0 = {sum(d * da ** (nf - 1 - f) for f, d in enumerate(key)): c for key, c in u0.items()}
    return Equivalence([a] * k, (a,) if odd else (), 1, n, value, left, right if odd else None, u0,
                       ell=ell, lift=lift if odd else None, name=f"trace({a.name},{k})")


def tensor_equivalence(e1: Equivalence, e2: Equivalence) -> Equivalence:
    """``e1 (x) e2`` on ``U1 (x) U2`` (index ``i1 * dim U2 + i2``)."""
    n2 = e2.dim
    r1, t1 = len(e1.source), len(e1.target)

    def value(i, j):
        x = e1.value(i // n2, j // n2)
        y = e2.value(i % n2, j % n2)
        return {k1 + k2: c1 * c2 for k1, c1 in x.items() for k2, c2 in y.items()}

    left = right = None
    if e1.has_matrices and e2.has_matrices:
        def left(f, b):
            if f < r1:
                return e1.left(f, b).kron(MatrixQ.identity(n2))
            return MatrixQ.identity(e1.dim).kron(e2.left(f - r1, b))
    if e1._right is not None or e2._right is not None:
        def right(f, b):
            if f < t1:
                return e1.right(f, b).kron(MatrixQ.identity(n2))
            return MatrixQ.identity(e1.dim).kron(e2.right(f - t1, b))

    def ell(key):
        x = e1.ell(tuple(key[:r1]))
        y = e2.ell(tuple(key[r1:]))
        return {k1 + k2: c1 * c2 for k1, c1 in x.items() for k2, c2 in y.items()}

    def lift(f, b):
        if f < t1:
            return {k + tuple(u): c * x for k, c in e1.lift(f, b).items() for u, x in _unit_keys(e2.source)}
        return {tuple(u) + k: c * x for u, x in _unit_keys(e1.source) for k, c in e2.lift(f - t1, b).items()}

    u0 = {i * n2 + j: c * d for i, c in e1.u0.items() for j, d in e2.u0.items()}
    return Equivalence(e1.source + e2.source, e1.target + e2.target, e1.eps * e2.eps, e1.dim * n2,
                       value, left, right, u0, ell=ell, lift=lift, name=f"{e1.name}(x){e2.name}")


def _unit_keys(algs: Sequence[Algebra]) -> list[tuple[tuple, Fraction]]:
    return list(tpure([a.one for a in algs]).items())


def equivalence_power(e: Equivalence, n: int) -> Equivalence:
    if n < 1:
        raise InputError("tensor power of an equivalence needs n >= 1")
    out = e
    for _ in range(n - 1):
        out = tensor_equivalence(out, e)
    return out


# composition through the radical


class _Echelon:
    """Incremental row echelon form over Q (sparse rows)."""

    def __init__(self):
        self.rows: list[tuple[int, dict]] = []

    def reduce(self, v: dict) -> dict:
        v = dict(v)
        for p, r in self.rows:
            c = v.get(p)
            if c:
                for k, x in r.items():
                    w = v.get(k, ZERO) - c * x
                    if w:
                        v[k] = w
                    else:
                        v.pop(k, None)
        return v

    def add(self, v: dict) -> bool:
        v = self.reduce(v)
        if not v:
            return False
        p = min(v)
        c = v[p]
        v = {k: x / c for k, x in v.items()}
        for i, (q, r) in enumerate(self.rows):
            d = r.get(p)
            if d:
                r = dict(r)
                for k, x in v.items():
                    w = r.get(k, ZERO) - d * x
                    if w:
                        r[k] = w
                    else:
                        r.pop(k, None)
                self.rows[i] = (q, r)
        self.rows.append((p, v))
        return True


class Composite(HermitianForm):
    """``f`` on ``W (x)_B U``: basis ``w_s (x) u0`` for the chosen ``w_s`` (indices ``rows``)."""

    def __init__(self, phi: HermitianForm, eq: Equivalence):
        _check_match(phi.algebras, eq.source, "composition")
        self.phi = phi
        self.eq = eq
        src_dim = 1
        for a in eq.source:
            src_dim *= a.dim
        num = phi.dim * eq.dim
        if num % src_dim:
            raise FormError("module dimensions are incompatible with a simple middle algebra")
        expected = num // src_dim
        self._f: dict[tuple[int, int], TElt] = {}
        tdims = [a.dim for a in eq.target]
        self._tsize = 1
        for d in tdims:
            self._tsize *= d
        ech = _Echelon()
        rows = []
        for s in range(phi.dim):
            if len(rows) == expected:
                break
            if ech.add(self._row({s: ONE})):
                rows.append(s)
        if len(rows) != expected:
            raise FormError("composite form is degenerate")
        self.rows = rows
        super().__init__(eq.target, phi.eps * eq.eps, len(rows), entry=self._entry,
                         action=self._target_action if eq.target else None)
        self._solver = None

    def big_f(self, s: int, t: int) -> TElt:
        v = self._f.get((s, t))
        if v is None:
            v = self._f[(s, t)] = self.eq.functional(self.phi.value(s, t))
        return v

    def f_vec(self, x: SVec, t: int) -> TElt:
        out: TElt = {}
        for s, c in x.items():
            out = tadd(out, self.big_f(s, t), c)
        return out

    def _row(self, x: SVec) -> dict:
        """Coordinates of ``F(x, .)`` on all basis vectors of W."""
        out = {}
        ts = self._tsize
        for t in range(self.phi.dim):
            for i, c in enumerate(_coords(self.eq.target, self.f_vec(x, t))):
                if c:
                    out[t * ts + i] = c
        return out

    def _entry(self, s: int, t: int) -> TElt:
        return self.big_f(self.rows[s], self.rows[t])

    def classes(self, x: SVec) -> list[Fraction]:
        """Coordinates of the class of ``x (x) u0`` in the basis ``w_s (x) u0``."""
        n = self.dim
        ts = self._tsize
        if self._solver is None:
            cols = []
            for s in self.rows:
                col = []
                for t in self.rows:
                    col.extend(_coords(self.eq.target, self.big_f(s, t)))
                cols.append(col)
            self._solver = MatrixQ.from_columns(cols, n * ts) if n else None
        rhs = []
        for t in self.rows:
            rhs.extend(_coords(self.eq.target, self.f_vec(x, t)))
        if not n:
            return []
        sol = solve(self._solver, rhs)
        if sol is None:
            raise FormError("vector has no class in the composite")
        return list(sol)

    def act_source(self, beta: TElt, x: SVec) -> SVec:
        """``x . beta`` for the right action of the middle algebra on W."""
        out: SVec = {}
        for key, c in beta.items():
            v = x
            for f, b in enumerate(key):
                v = _apply(self.phi.action(f, b), v)
            axpy(out, v, c)
        return out

    def _target_action(self, f: int, b: int) -> MatrixQ:
        beta = self.eq.lift(f, b)
        cols = [self.classes(self.act_source(beta, {s: ONE})) for s in self.rows]
        return MatrixQ.from_columns(cols, self.dim)


def compose_form(phi: HermitianForm, eq: Equivalence) -> Composite:
    """The form ``phi`` carried along ``eq`` (radical route)."""
    return Composite(phi, eq)


def morita_transfer(phi: HermitianForm) -> Composite:
    """Transfer of a form over ``(A^{(x) k}, sigma^{(x) k})`` to ``(K, id)`` or ``(A, sigma)``.

    Factors ``i`` and ``i + k // 2`` are paired through the trace form.
    """
    algs = phi.algebras
    if not algs:
        raise FormError("form is already over the base field")
    a = algs[0]
    if any(not same_algebra(a, b) for b in algs):
        raise FormError("transfer needs a tensor power of a single algebra")
    eq = trace_equivalence(a, len(algs))
    eq.source = tuple(algs)
    return Composite(phi, eq)


def morita_pushforward(h: HermitianForm, eq: Equivalence) -> Composite:
    """``h`` over ``B^{(x) n}`` pushed along ``eq^{(x) n}``."""
    n = len(h.algebras)
    if n == 0:
        raise FormError("nothing to push forward")
    return Composite(h, equivalence_power(eq, n))


def morita_compose(e1: Equivalence, e2: Equivalence) -> Equivalence:
    """``e1: (C) -> (B)`` followed by ``e2: (B) -> (A)``."""
    comp = Composite(e1.as_form(), e2)
    n = comp.dim
    if not e1.has_matrices:
        raise FormError("first equivalence needs explicit actions")

    def left(f, b):
        return MatrixQ.from_columns([comp.classes(_apply(e1.left(f, b), {s: ONE})) for s in comp.rows], n)

    right = comp._target_action if e2.target else None
    out = Equivalence(e1.source, e2.target, comp.eps, n, comp.value, left, right, {},
                      name=f"{e2.name}o{e1.name}")
    out.u0 = _find_generator(out)
    return out


# explicit quotient route


def explicit_compose(phi: HermitianForm, eq: Equivalence) -> HermitianForm:
    """``W (x)_B U`` as ``W (x)_K U`` modulo ``w b (x) u - w (x) b u`` (small cases)."""
    _check_match(phi.algebras, eq.source, "composition")
    gens = [(f, b) for f, a in enumerate(eq.source) for b in range(a.dim)]
    qs = tensor_over_algebra(phi.dim, eq.dim, [phi.action(f, b) for f, b in gens],
                             [eq.left(f, b) for f, b in gens])
    pairs = [qs.pair(i) for i in range(qs.dim)]

    def entry(s, t):
        w, u = pairs[s]
        w2, u2 = pairs[t]
        return eq.evaluate({u: ONE}, eq.apply(phi.value(w, w2), {u2: ONE}))

    action = None
    if eq.target:
        def action(f, b):
            rm = eq.right(f, b)
            cols = []
            for w, u in pairs:
                img = {w * eq.dim + k: c for k, c in _apply(rm, {u: ONE}).items()}
                cols.append(dense(qs.project(img), qs.dim))
            return MatrixQ.from_columns(cols, qs.dim)
    return HermitianForm(eq.target, phi.eps * eq.eps, qs.dim, entry=entry, action=action)


def explicit_transfer(phi: HermitianForm) -> HermitianForm:
    algs = phi.algebras
    eq = trace_equivalence(algs[0], len(algs))
    eq.source = tuple(algs)
    return explicit_compose(phi, eq)


def k_form(h: HermitianForm) -> FreeForm:
    """A form over the base field as a :class:`FreeForm` over ``Q`` (for further powers)."""
    from .algebra import make_field
    if any(a.dim != 1 for a in h.algebras):
        raise FormError("form is not over the base field")
    k = make_field()
    g = h.trace_gram()
    return FreeForm(k, [[(g[s, t],) for t in range(h.dim)] for s in range(h.dim)], h.eps)
