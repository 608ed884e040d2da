"""Reduced tensor and alternating powers for an involution of the first kind.

For a free module ``V = A^m`` the reduced power
``V^[2d] = V^{(x) d} (x)_{A^{(x) d}} (twisted V)^{(x) d}`` has the K-basis
``e_R (.) f_t`` with ``R`` in ``[m]^d`` and ``t`` a basis tensor of
``V^{(x) d}``.  Interleaving coordinates, a basis element is a sequence of
``d`` "pair digits" ``p_f = r_f N + n_f`` (``N = dim_K V``), so that
``h^[2d]`` is the d-th tensor power of the K-form

    b((r, n), (r', n')) = Trd(sigma(H_rr') h(e_n, e_n')).

The projection from ``V^{(x) 2d}`` sends ``(e_R a_S) (x) y`` to
``e_R (.) y sigma(a_S)``; the section sends ``e_R (.) f_t`` to
``(e_R . 1) (x) f_t``.  The Goldman action of ``S_2d`` commutes with the
right action, hence descends: ``t_i(q) = project(t_i(section(q)))``.

Odd powers are ``V^[2d+1] = V^[2d] (x)_K V`` (index ``q N + n``).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from . import perms
from .algebra import Algebra, TElt, tadd, tmul, tpure, tscale, tsigma
from .hermitian import FormError, FreeForm, HermitianForm, elt_to_telt
from .linalg import ONE, ZERO, InputError, MatrixQ, Subspace, independent_columns, intersect_all, kernel
from .tensor import (DEFAULT_CAP, ResourceCapError, SVec, SymmetricAction, TensorPower, alt_power,
                     axpy, dense, span_coordinates)


def _first_kind(a: Algebra) -> int:
    return a.epsilon


class ReducedPower(SymmetricAction):
    """``V^[2d]`` (``odd=False``) or ``V^[2d+1]`` (``odd=True``) with the descended Goldman action."""

    def __init__(self, h: FreeForm, d: int, odd: bool = False, cap: int = DEFAULT_CAP):
        if d < 0:
            raise InputError("reduced power of negative degree")
        self.form = h
        self.half = d
        self.odd = odd
        a = h.algebra
        self.algebra = a
        self.eps_sigma = _first_kind(a)
        v = h.module
        self.module = v
        self.n = v.dim
        self.m = v.rank
        self.pair = self.m * self.n
        self.even_size = self.pair ** d
        self.d = 2 * d + (1 if odd else 0)
        self.size = self.even_size * (self.n if odd else 1)
        if self.size > cap:
            raise ResourceCapError(f"V^[{self.d}]", self.size, cap)
        self.cap = cap
        self.tp = TensorPower(v, self.d, cap=max(cap, self.n ** self.d))
        self._cache: dict[tuple[int, int], SVec] = {}
        da = a.dim
        # right multiplication of V-basis n by sigma(a_s): proj[s][n] = ((n', c), ...)
        proj = []
        for s in range(da):
            row = []
            for x in range(self.n):
                acc: dict[int, Fraction] = {}
                for i, sg in a._sig_cols[s]:
                    for k, c in v.ract[x][i]:
                        acc[k] = acc.get(k, ZERO) + sg * c
                row.append(tuple((k, c) for k, c in acc.items() if c))
            proj.append(row)
        self._proj = proj
        self._unit = tuple((u, c) for u, c in enumerate(a.one) if c)
        # K-form b on pair digits
        hv = h.hv
        mat = h.matrix
        b = []
        for p in range(self.pair):
            r, x = divmod(p, self.n)
            row = []
            for p2 in range(self.pair):
                r2, y = divmod(p2, self.n)
                row.append(a.trd(a.mul(a.sigma(mat[r][r2]), hv[x][y])))
            b.append(row)
        self.bform = b

    # indexing

    def pair_digits(self, q: int) -> tuple[int, ...]:
        d = self.half
        return tuple((q // self.pair ** (d - 1 - f)) % self.pair for f in range(d))

    def split(self, idx: int) -> tuple[int, int]:
        """``(even index, last V index)``; the last is 0 for even powers."""
        if self.odd:
            return divmod(idx, self.n)
        return idx, 0

    # section and projection

    def section(self, idx: int) -> SVec:
        """A preimage in ``V^{(x) d}`` of the basis element ``idx``."""
        q, last = self.split(idx)
        dg = self.pair_digits(q)
        n = self.n
        da = self.algebra.dim
        xs: dict[tuple, Fraction] = {(): ONE}
        for p in dg:
            r = p // n
            xs = {k + (r * da + u,): c * w for k, c in xs.items() for u, w in self._unit}
        tail = [p % n for p in dg]
        if self.odd:
            tail.append(last)
        out: SVec = {}
        tp = self.tp
        for k, c in xs.items():
            out[tp.flat(list(k) + tail)] = c
        return out

    def project(self, vec: SVec) -> SVec:
        """Image of a vector of ``V^{(x) d}`` in the reduced power."""
        d = self.half
        n = self.n
        da = self.algebra.dim
        tp = self.tp
        out: SVec = {}
        for idx, c in vec.items():
            dg = tp.digits(idx)
            partial = {0: c}
            for f in range(d):
                r, s = divmod(dg[f], da)
                cell = self._proj[s][dg[d + f]]
                nxt: dict[int, Fraction] = {}
                for key, v in partial.items():
                    for k, w in cell:
                        kk = key * self.pair + r * n + k
                        nxt[kk] = nxt.get(kk, ZERO) + v * w
                partial = nxt
            for key, v in partial.items():
                if self.odd:
                    key = key * n + dg[2 * d]
                if v:
                    w = out.get(key, ZERO) + v
                    if w:
                        out[key] = w
                    else:
                        del out[key]
        return out

    # symmetric group action

    def _basis_image(self, i: int, idx: int) -> SVec:
        key = (i, idx)
        img = self._cache.get(key)
        if img is None:
            img = self.project(self.tp.transposition(i, self.section(idx)))
            self._cache[key] = img
        return img

    def transposition(self, i: int, vec: SVec) -> SVec:
        if not 0 <= i < self.d - 1:
            raise InputError(f"no transposition ({i}, {i + 1}) in degree {self.d}")
        out: SVec = {}
        for idx, c in vec.items():
            axpy(out, self._basis_image(i, idx), c)
        return out

    def place_permutation(self, p: Sequence[int], vec: SVec) -> SVec:
        """Descent of a plain factor permutation (well defined only for some ``p``)."""
        out: SVec = {}
        for idx, c in vec.items():
            axpy(out, self.project(self.tp.permute_factors(p, self.section(idx))), c)
        return out

    def mirror(self, i: int, vec: SVec) -> SVec:
        """Exchange of the i-th factors of ``x`` and ``y`` in ``x (.) y``."""
        d = self.half
        p = list(range(self.d))
        p[i], p[i + d] = i + d, i
        return self.place_permutation(p, vec)

    def right_act(self, b: int, vec: SVec) -> SVec:
        """Right action of ``a_b`` on the last factor (odd powers)."""
        if not self.odd:
            raise InputError("even reduced powers carry no right action")
        ract = self.module.ract
        out: SVec = {}
        for idx, c in vec.items():
            q, x = divmod(idx, self.n)
            for k, w in ract[x][b]:
                key = q * self.n + k
                v = out.get(key, ZERO) + c * w
                if v:
                    out[key] = v
                else:
                    del out[key]
        return out

    # forms

    def form_value(self, i: int, j: int) -> TElt:
        """``h^[2d]`` (a scalar) or ``h^[2d+1] = h^[2d] (x) h`` on basis elements."""
        qi, xi = self.split(i)
        qj, xj = self.split(j)
        c = ONE
        for p, p2 in zip(self.pair_digits(qi), self.pair_digits(qj)):
            c *= self.bform[p][p2]
            if not c:
                return {}
        if not self.odd:
            return {(): c}
        return {k: c * v for k, v in elt_to_telt(self.form.hv[xi][xj]).items()}

    def evaluate(self, x: SVec, y: SVec) -> TElt:
        out: TElt = {}
        for i, a in x.items():
            for j, b in y.items():
                v = self.form_value(i, j)
                if v:
                    out = tadd(out, v, a * b)
        return out


class ReducedAlt(HermitianForm):
    """``RAlt^k(V)`` with the form ``RAlt^k(h)(s x, s y) = h^[k](s x, y)``.

    Basis vectors are ``s_k(q)`` for basis elements ``q`` of ``V^[k]``
    (``preimages``).
    """

    def __init__(self, space: ReducedPower, vectors: list[SVec], preimages: list[int]):
        self.space = space
        self.vectors = vectors
        self.preimages = preimages
        self.k = space.d
        h = space.form
        if space.odd:
            algs = [space.algebra]
            eps = h.eps
            action = self._action_matrix
        else:
            algs = []
            eps = 1
            action = None
        super().__init__(algs, eps, len(vectors), entry=self._entry_fn, action=action)

    def _entry_fn(self, s: int, t: int) -> TElt:
        return self.space.evaluate(self.vectors[s], {self.preimages[t]: ONE})

    def _action_matrix(self, f: int, b: int) -> MatrixQ:
        imgs = [self.space.right_act(b, v) for v in self.vectors]
        coords = span_coordinates(self.vectors, imgs)
        return MatrixQ.from_columns(coords, self.dim) if self.dim else MatrixQ.zero(0)

    def subspace(self) -> Subspace:
        return Subspace.span(self.space.size, [dense(v, self.space.size) for v in self.vectors])

    def restriction_scalar_holds(self) -> bool:
        """``h^[k]`` restricted to ``RAlt^k`` equals ``<k!> RAlt^k(h)``."""
        fact = math.factorial(self.k)
        for s in range(self.dim):
            for t in range(self.dim):
                if self.space.evaluate(self.vectors[s], self.vectors[t]) != tscale(fact, self.value(s, t)):
                    return False
        return True


def reduced_alt_even(h: FreeForm, d: int, cap: int = DEFAULT_CAP) -> ReducedAlt:
    """``RAlt^{2d}(h)``, a symmetric bilinear form over K."""
    space = ReducedPower(h, d, False, cap)
    vecs, pres = [], []
    for q in range(space.size):
        v = space.antisymmetrize({q: ONE})
        if v:
            vecs.append(v)
            pres.append(q)
    keep = independent_columns(vecs, space.size)
    return ReducedAlt(space, [vecs[i] for i in keep], [pres[i] for i in keep])


def reduced_alt_odd(h: FreeForm, d: int, cap: int = DEFAULT_CAP) -> ReducedAlt:
    """``RAlt^{2d+1}(h)``, an eps-hermitian form over ``(A, sigma)``.

    Built as ``sh_{2d,1}(RAlt^{2d} (x) V)``; a candidate ``sh(s_2d(q) (x) e_n)``
    equals ``s_{2d+1}(q (x) e_n)``.
    """
    even = reduced_alt_even(h, d, cap)
    space = ReducedPower(h, d, True, cap)
    n = space.n
    k = space.d
    vecs, pres = [], []
    for v, q in zip(even.vectors, even.preimages):
        for j in range(n):
            c = space.shuffle_last(k, {i * n + j: x for i, x in v.items()})
            if c:
                vecs.append(c)
                pres.append(q * n + j)
    keep = independent_columns(vecs, space.size)
    return ReducedAlt(space, [vecs[i] for i in keep], [pres[i] for i in keep])


def reduced_alt(h: FreeForm, k: int, cap: int = DEFAULT_CAP) -> ReducedAlt:
    if k < 0:
        raise InputError("reduced power of negative degree")
    if k % 2:
        return reduced_alt_odd(h, k // 2, cap)
    return reduced_alt_even(h, k // 2, cap)


def anti_mirror_check(h: FreeForm, d: int, cap: int = DEFAULT_CAP) -> dict[str, bool]:
    """``RAlt^{2d}(V) = AM(V) cap pi(Alt^d(V) (x) V^{(x) d})`` and the mirror/Goldman relation."""
    ra = reduced_alt_even(h, d, cap)
    sp = ra.space
    n = sp.size
    eps = sp.eps_sigma
    eye = MatrixQ.identity(n)
    mirrors = [sp.matrix(lambda v, i=i: sp.mirror(i, v), limit=cap) for i in range(d)]
    am = intersect_all([kernel(m + eye.scale(eps)) for m in mirrors], n)
    alt = alt_power(sp.module, d, cap)
    tpd = TensorPower(sp.module, d, cap=max(cap, sp.n ** d))
    gens = []
    for v in alt.vectors:
        for t in range(tpd.size):
            gens.append(dense(sp.project({i * tpd.size + t: c for i, c in v.items()}), n))
    alt_part = Subspace.span(n, gens)
    lhs = ra.subspace()
    # the mirror equals eps times the Goldman action of (i, i + d)
    goldman_ok = True
    for i in range(d):
        p = list(range(2 * d))
        p[i], p[i + d] = i + d, i
        g = sp.matrix(lambda v, p=tuple(p): sp.goldman(p, v), limit=cap)
        goldman_ok &= mirrors[i] == g.scale(eps)
    return {"intersection": lhs == intersect_all([am, alt_part], n), "mirror_goldman": goldman_ok}


class UnitReduced(SymmetricAction):
    """``A^{(x) d}`` identified with ``A^[2d]`` by ``x (.) y -> x sigma(y)``.

    ``S_2d`` acts through the twisted action ``(a (x) b) . z = a z sigma(b)``:
    transpositions inside the first ``d`` factors multiply by the Goldman
    element on the left, those inside the last ``d`` on the right, and the
    middle one multiplies factor ``d-1`` on the left and factor 0 on the right.
    """

    def __init__(self, a: Algebra, d: int, cap: int = DEFAULT_CAP):
        if d < 1:
            raise InputError("degree must be positive")
        self.algebra = a
        self.half = d
        self.d = 2 * d
        self.size = a.dim ** d
        if self.size > cap:
            raise ResourceCapError(f"A^(x){d}", self.size, cap)
        self.algs = [a] * d
        g = a.goldman().coeffs
        self._g = [(i, j, c) for (i, j), c in g.items()]
        self._gs = [(i, a.sigma(a.basis(j)), c) for (i, j), c in g.items()]

    def key(self, idx: int) -> tuple[int, ...]:
        n = self.algebra.dim
        return tuple((idx // n ** (self.half - 1 - f)) % n for f in range(self.half))

    def index(self, key: Sequence[int]) -> int:
        n = self.algebra.dim
        out = 0
        for k in key:
            out = out * n + k
        return out

    def _telt(self, vec: SVec) -> TElt:
        return {self.key(i): c for i, c in vec.items()}

    def _svec(self, x: TElt) -> SVec:
        return {self.index(k): c for k, c in x.items() if c}

    def transposition(self, i: int, vec: SVec) -> SVec:
        a = self.algebra
        d = self.half
        x = self._telt(vec)
        out: TElt = {}
        one = a.one
        for u, w, c in (self._gs if i == d - 1 else self._g):
            if i < d - 1:
                left = tpure([a.basis(u) if f == i else (a.basis(w) if f == i + 1 else one)
                              for f in range(d)])
                out = tadd(out, tmul(self.algs, left, x), c)
            elif i >= d:
                f0 = i - d
                right = tpure([a.sigma(a.basis(u)) if f == f0 else
                               (a.sigma(a.basis(w)) if f == f0 + 1 else one) for f in range(d)])
                out = tadd(out, tmul(self.algs, x, right), c)
            else:
                left = tpure([a.basis(u) if f == d - 1 else one for f in range(d)])
                right = tpure([w if f == 0 else one for f in range(d)])
                out = tadd(out, tmul(self.algs, tmul(self.algs, left, x), right), c)
        return self._svec(out)

    def sigma_at(self, f: int, vec: SVec) -> SVec:
        """``sigma`` applied to the f-th factor only."""
        a = self.algebra
        out: TElt = {}
        for key, c in self._telt(vec).items():
            for i, s in a._sig_cols[key[f]]:
                k = key[:f] + (i,) + key[f + 1:]
                out[k] = out.get(k, ZERO) + c * s
        return self._svec(out)


class UnitReducedAlt(HermitianForm):
    """``s_2d A^{(x) d}`` with ``(s x, s y) -> (-eps)^d Trd((s x) y)``."""

    def __init__(self, a: Algebra, d: int, cap: int = DEFAULT_CAP):
        self.space = UnitReduced(a, d, cap)
        sp = self.space
        vecs, pres = [], []
        for q in range(sp.size):
            v = sp.antisymmetrize({q: ONE})
            if v:
                vecs.append(v)
                pres.append(q)
        keep = independent_columns(vecs, sp.size)
        self.vectors = [vecs[i] for i in keep]
        self.preimages = [pres[i] for i in keep]
        self.sign = (-a.epsilon) ** d
        super().__init__([], 1, len(self.vectors), entry=self._entry_fn)

    def _entry_fn(self, s: int, t: int) -> TElt:
        sp = self.space
        x = sp._telt(self.vectors[s])
        y = {sp.key(self.preimages[t]): ONE}
        from .hermitian import ctrd
        c = self.sign * ctrd(sp.algs, tmul(sp.algs, x, y))
        return {(): c} if c else {}

    def subspace(self) -> Subspace:
        return Subspace.span(self.space.size, [dense(v, self.space.size) for v in self.vectors])

    def totally_antisymmetric(self) -> Subspace:
        """``TA^{2d}(A, sigma) = {x : sigma_i(x) = -eps x for all i}``."""
        sp = self.space
        n = sp.size
        eye = MatrixQ.identity(n)
        eps = self.algebra_eps
        mats = [sp.matrix(lambda v, f=f: sp.sigma_at(f, v), limit=n) for f in range(sp.half)]
        return intersect_all([kernel(m + eye.scale(eps)) for m in mats], n)

    @property
    def algebra_eps(self) -> int:
        return self.space.algebra.epsilon

    def ta_alt_check(self) -> bool:
        """``s_2d A^{(x) d} = TA^{2d}(A, sigma) cap Alt^d(A)``."""
        from .tensor import FreeModule
        sp = self.space
        alt = alt_power(FreeModule(sp.algebra, 1), sp.half)
        alt_sub = alt.subspace()
        return self.subspace() == intersect_all([self.totally_antisymmetric(), alt_sub], sp.size)


def ralt_unit_form(a: Algebra, d: int, cap: int = DEFAULT_CAP) -> UnitReducedAlt:
    return UnitReducedAlt(a, d, cap)
