"""Tensor powers of free right modules with the Goldman action.

A free module ``V = A^m`` has the K-basis ``e_r (x) a_s`` (index
``r * dim A + s``).  Its endomorphism ring ``B = End_A(V)`` is
``M_m(K) (x) A`` acting on the left, so the Goldman element of ``B`` acts
on ``V (x) V`` by

    (e_r (x) x) (x) (e_t (x) y)  ->  sum g_ij (e_t (x) a_i x) (x) (e_r (x) a_j y)

where ``g = sum g_ij a_i (x) a_j`` is the Goldman element of ``A``.  The
transposition ``(i, i+1)`` of the symmetric group acts on ``V^{(x) d}`` by
this map on factors ``i, i+1``.

Vectors of ``V^{(x) d}`` are sparse dicts from flat indices to Fractions;
the flat index of ``n_0 (x) ... (x) n_{d-1}`` is ``sum n_f N^(d-1-f)``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Sequence

from . import perms
from .algebra import Algebra, Elt, goldman_in_power, make_matrix_algebra, tensor_with_goldman
from .linalg import ONE, ZERO, InputError, MatrixQ, Subspace, independent_columns, kernels

SVec = dict[int, Fraction]

DEFAULT_CAP = 4096


class ResourceCapError(RuntimeError):
    """A computation would exceed the configured ambient dimension cap."""

    def __init__(self, what: str, dim: int, cap: int):
        super().__init__(f"{what}: ambient dimension {dim} exceeds cap {cap}")
        self.dim = dim
        self.cap = cap


def axpy(out: SVec, x: SVec, c=ONE) -> SVec:
    """``out += c x`` in place; returns ``out``."""
    for k, v in x.items():
        w = out.get(k, ZERO) + c * v
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    return out


def vscale(c, x: SVec) -> SVec:
    if not c:
        return {}
    return {k: c * v for k, v in x.items()}


def dense(x: SVec, n: int) -> list[Fraction]:
    out = [ZERO] * n
    for k, v in x.items():
        out[k] = v
    return out


def sparse(v: Sequence) -> SVec:
    return {i: Fraction(x) for i, x in enumerate(v) if x}


class FreeModule:
    """The right A-module ``A^m`` with its Goldman data."""

    def __init__(self, algebra: Algebra, rank: int):
        if rank < 0:
            raise InputError("module rank must be nonnegative")
        self.algebra = algebra
        self.rank = rank
        self.dim = rank * algebra.dim
        a = algebra
        da = a.dim
        # right action: ract[n][b] = e_n . a_b
        self.ract = tuple(tuple(tuple((r * da + k, c) for k, c in a.table[s][b]) for b in range(da))
                          for r in range(rank) for s in range(da))
        self._gl = None

    @property
    def rdim(self) -> Fraction:
        return Fraction(self.dim, self.algebra.degree)

    def index(self, r: int, s: int) -> int:
        return r * self.algebra.dim + s

    def vector(self, coords: Sequence[Elt]) -> tuple[Fraction, ...]:
        """K-coordinates of the element with A-coordinates ``coords``."""
        if len(coords) != self.rank:
            raise InputError("wrong number of module coordinates")
        return tuple(x for c in coords for x in c)

    def split(self, v: Sequence) -> list[Elt]:
        da = self.algebra.dim
        return [tuple(v[r * da:(r + 1) * da]) for r in range(self.rank)]

    def right_matrix(self, b: int) -> MatrixQ:
        n = self.dim
        cols = []
        for j in range(n):
            col = [ZERO] * n
            for k, c in self.ract[j][b]:
                col[k] += c
            cols.append(col)
        return MatrixQ.from_columns(cols, n)

    def act(self, v: Sequence, a: Elt) -> tuple[Fraction, ...]:
        """``v . a`` for a dense vector ``v``."""
        return self.vector([self.algebra.mul(x, a) for x in self.split(v)])

    def goldman_local(self):
        """Sparse map of the Goldman transposition on ``V (x) V`` (flat index ``x*N + y``)."""
        if self._gl is None:
            a = self.algebra
            da = a.dim
            n = self.dim
            g = a.goldman().coeffs
            left = {}
            for (i, j) in g:
                for s in range(da):
                    left[(i, s)] = a.table[i][s]
                    left[(j, s)] = a.table[j][s]
            gl = []
            for x in range(n):
                r, s = divmod(x, da)
                for y in range(n):
                    t, u = divmod(y, da)
                    out: dict[int, Fraction] = {}
                    for (i, j), c in g.items():
                        for k1, c1 in left[(i, s)]:
                            for k2, c2 in left[(j, u)]:
                                key = (t * da + k1) * n + (r * da + k2)
                                v = out.get(key, ZERO) + c * c1 * c2
                                if v:
                                    out[key] = v
                                else:
                                    out.pop(key, None)
                    gl.append(tuple(out.items()))
            self._gl = tuple(gl)
        return self._gl

    def endo_algebra(self) -> Algebra:
        """``End_A(V) = M_m(K) (x) A``, with its Goldman element from the product formula."""
        if self.rank < 1:
            raise InputError("endomorphism algebra of the zero module")
        mm = make_matrix_algebra(self.rank)
        if self.rank == 1:
            return self.algebra
        return tensor_with_goldman(mm, self.algebra)

    def endo_left_matrix(self, e: int) -> MatrixQ:
        """Left action on V of the basis element ``e`` of :meth:`endo_algebra`."""
        a = self.algebra
        da = a.dim
        if self.rank == 1:
            return a.left_matrix(a.basis(e))
        pq, b = divmod(e, da)
        p, qq = divmod(pq, self.rank)
        n = self.dim
        cols = []
        for j in range(n):
            r, s = divmod(j, da)
            col = [ZERO] * n
            if r == qq:
                for k, c in a.table[b][s]:
                    col[p * da + k] += c
            cols.append(col)
        return MatrixQ.from_columns(cols, n)


def direct_sum(u: FreeModule, v: FreeModule) -> FreeModule:
    if u.algebra is not v.algebra:
        raise InputError("direct sum of modules over different algebras")
    return FreeModule(u.algebra, u.rank + v.rank)


class SymmetricAction:
    """Operations derived from a Goldman-type action of ``S_d``.

    Subclasses provide ``d``, ``size`` (ambient K-dimension) and
    ``transposition(i, vec)`` for the adjacent transposition ``(i, i+1)``.
    """

    d: int
    size: int

    def transposition(self, i: int, vec: SVec) -> SVec:
        raise NotImplementedError

    def goldman(self, p: Sequence[int], vec: SVec) -> SVec:
        """Goldman action of the permutation ``p`` (composite of adjacent generators)."""
        if len(p) != self.d or not perms.is_perm(p):
            raise InputError("not a permutation of the tensor factors")
        for i in reversed(perms.adjacent_word(p)):
            vec = self.transposition(i, vec)
        return vec

    def shuffle_last(self, k: int, vec: SVec) -> SVec:
        """``sh_{k-1,1}`` acting on the first ``k`` factors."""
        acc = dict(vec)
        y = vec
        sign = ONE
        for j in range(k - 2, -1, -1):
            y = self.transposition(j, y)
            sign = -sign
            axpy(acc, y, sign)
        return acc

    def antisymmetrize(self, vec: SVec, k: int | None = None) -> SVec:
        """``s_k`` on the first ``k`` factors (default all), via ``s_k = sh_{k-1,1}(s_{k-1} (x) 1)``."""
        k = self.d if k is None else k
        for j in range(2, k + 1):
            vec = self.shuffle_last(j, vec)
        return vec

    def antisymmetrize_naive(self, vec: SVec) -> SVec:
        """``sum sign(p) p . vec`` over all permutations."""
        out: SVec = {}
        for p in perms.all_perms(self.d):
            axpy(out, self.goldman(p, vec), perms.sign(p))
        return out

    def shuffle(self, sizes: Sequence[int], vec: SVec) -> SVec:
        """The signed shuffle sum for the block decomposition ``sizes``."""
        if sum(sizes) != self.d:
            raise InputError("block sizes do not add up to the degree")
        out: SVec = {}
        for p in perms.shuffles(sizes):
            axpy(out, self.goldman(p, vec), perms.sign(p))
        return out

    def young_antisymmetrize(self, sizes: Sequence[int], vec: SVec) -> SVec:
        """``s_{I_1} (x) ... (x) s_{I_r}`` for consecutive blocks."""
        out: SVec = {}
        start = 0
        gens = []
        for n in sizes:
            gens.append(list(range(start, start + n)))
            start += n
        for choice in _product_perms(sizes):
            p = []
            for blk, q in zip(gens, choice):
                p.extend(blk[0] + x for x in q)
            sgn = 1
            for q in choice:
                sgn *= perms.sign(q)
            axpy(out, self.goldman(tuple(p), vec), sgn)
        return out

    def matrix(self, op: Callable[[SVec], SVec], limit: int = 1024) -> MatrixQ:
        if self.size > limit:
            raise ResourceCapError("dense operator", self.size, limit)
        cols = [dense(op({j: ONE}), self.size) for j in range(self.size)]
        return MatrixQ.from_columns(cols, self.size)

    def goldman_matrix(self, p: Sequence[int]) -> MatrixQ:
        return self.matrix(lambda v: self.goldman(p, v))

    def antisymmetrizer_matrix(self) -> MatrixQ:
        return self.matrix(self.antisymmetrize)


class TensorPower(SymmetricAction):
    """``V^{(x) d}`` with the Goldman action and the right ``A^{(x) d}``-action."""

    def __init__(self, base: FreeModule, d: int, cap: int = DEFAULT_CAP):
        if d < 0:
            raise InputError("tensor degree must be nonnegative")
        self.base = base
        self.d = d
        self.n = base.dim
        self.size = self.n ** d
        if self.size > cap:
            raise ResourceCapError(f"V^(x){d}", self.size, cap)
        self.cap = cap
        self.w = tuple(self.n ** (d - 1 - f) for f in range(d))

    def digits(self, idx: int) -> tuple[int, ...]:
        return tuple((idx // w) % self.n for w in self.w)

    def flat(self, digits: Sequence[int]) -> int:
        return sum(x * w for x, w in zip(digits, self.w))

    def pure(self, vectors: Sequence[SVec]) -> SVec:
        """``v_0 (x) ... (x) v_{d-1}`` for sparse vectors of V."""
        out: SVec = {0: ONE}
        for v in vectors:
            nxt: SVec = {}
            for k, c in out.items():
                for i, x in v.items():
                    nxt[k * self.n + i] = c * x
            out = nxt
        return out

    # left Goldman action

    def transposition(self, i: int, vec: SVec) -> SVec:
        """Goldman action of ``(i, i+1)`` (0-based)."""
        if not 0 <= i < self.d - 1:
            raise InputError(f"no transposition ({i}, {i + 1}) in degree {self.d}")
        n = self.n
        gl = self.base.goldman_local()
        wi, wj = self.w[i], self.w[i + 1]
        out: SVec = {}
        for idx, c in vec.items():
            x = (idx // wi) % n
            y = (idx // wj) % n
            base = idx - x * wi - y * wj
            for key, g in gl[x * n + y]:
                xx, yy = divmod(key, n)
                k = base + xx * wi + yy * wj
                v = out.get(k, ZERO) + c * g
                if v:
                    out[k] = v
                else:
                    del out[k]
        return out

    # right action

    def right_act(self, f: int, b: int, vec: SVec) -> SVec:
        """Right multiplication by ``1 (x) .. (x) a_b (x) .. (x) 1`` (``a_b`` in factor ``f``)."""
        n = self.n
        wf = self.w[f]
        ract = self.base.ract
        out: SVec = {}
        for idx, c in vec.items():
            x = (idx // wf) % n
            base = idx - x * wf
            for k, g in ract[x][b]:
                key = base + k * wf
                v = out.get(key, ZERO) + c * g
                if v:
                    out[key] = v
                else:
                    del out[key]
        return out

    def right_elt(self, elt: dict, vec: SVec) -> SVec:
        """Right multiplication by a sparse element of ``A^{(x) d}``."""
        out: SVec = {}
        for key, c in elt.items():
            y = vec
            for f, b in enumerate(key):
                y = self.right_act(f, b, y)
            axpy(out, y, c)
        return out

    def right_translate(self, p: Sequence[int], vec: SVec) -> SVec:
        """Right action of ``p``: multiplication by its Goldman image in ``A^{(x) d}``."""
        return self.right_elt(goldman_in_power(self.base.algebra, self.d, p), vec)

    def permute_factors(self, p: Sequence[int], vec: SVec) -> SVec:
        """Plain K-linear place permutation: factor ``k`` moves to position ``p[k]``."""
        out: SVec = {}
        for idx, c in vec.items():
            dg = self.digits(idx)
            nd = [0] * self.d
            for k in range(self.d):
                nd[p[k]] = dg[k]
            out[self.flat(nd)] = c
        return out

    # dense matrices (small ambient only)

    def right_matrix(self, f: int, b: int) -> MatrixQ:
        return self.matrix(lambda v: self.right_act(f, b, v))

    def right_translate_matrix(self, p: Sequence[int]) -> MatrixQ:
        return self.matrix(lambda v: self.right_translate(p, v))

    def embed(self, vec: SVec, other: "TensorPower", offset: int) -> SVec:
        """Image under ``V -> W`` sending basis ``n`` to ``n + offset`` in each factor."""
        out: SVec = {}
        for idx, c in vec.items():
            out[other.flat([x + offset for x in self.digits(idx)])] = c
        return out


def _product_perms(sizes):
    if not sizes:
        yield ()
        return
    for p in perms.all_perms(sizes[0]):
        for rest in _product_perms(sizes[1:]):
            yield (p,) + rest


def tensor_vectors(x: SVec, y: SVec, q_size: int) -> SVec:
    """``x (x) y`` where ``y`` lives in a space of dimension ``q_size``."""
    return {i * q_size + j: a * b for i, a in x.items() for j, b in y.items()}


def span_coordinates(basis: Sequence[SVec], vecs: Sequence[SVec]) -> list[list[Fraction]]:
    """Coordinates of ``vecs`` in the independent family ``basis`` (one joint RREF)."""
    k = len(basis)
    if k == 0:
        if any(vecs):
            raise ArithmeticError("vector outside the span")
        return [[] for _ in vecs]
    used = sorted({i for v in basis for i in v} | {i for v in vecs for i in v})
    pos = {i: r for r, i in enumerate(used)}
    width = k + len(vecs)
    rows = [[ZERO] * width for _ in used]
    for c, v in enumerate(list(basis) + list(vecs)):
        for i, x in v.items():
            rows[pos[i]][c] = x
    red, piv = kernels.rref(rows, width)
    if piv[:k] != list(range(k)) or len(piv) > k:
        raise ArithmeticError("vector outside the span")
    return [[red[r][k + j] for r in range(k)] for j in range(len(vecs))]


class AltPower:
    """``Alt^d(V) = s_d V^{(x) d}`` with a K-basis of the form ``s_d(pure tensor)``.

    ``vectors[s] = s_d(preimages[s])`` where ``preimages[s]`` is the flat
    index of a pure basis tensor.
    """

    def __init__(self, tp: TensorPower, vectors: list[SVec], preimages: list[int]):
        self.tp = tp
        self.vectors = vectors
        self.preimages = preimages
        self._subspace = None

    @property
    def d(self) -> int:
        return self.tp.d

    @property
    def dim(self) -> int:
        return len(self.vectors)

    @property
    def rdim(self) -> Fraction:
        return Fraction(self.dim, self.tp.base.algebra.degree ** self.d)

    def subspace(self) -> Subspace:
        """Canonical (reduced echelon) form of the span."""
        if self._subspace is None:
            self._subspace = Subspace.span(self.tp.size, [dense(v, self.tp.size) for v in self.vectors])
        return self._subspace

    def coordinates(self, vecs: Sequence[SVec]) -> list[list[Fraction]]:
        """Coordinates of vectors of the span in the stored basis."""
        return span_coordinates(self.vectors, vecs)

    def right_action_matrix(self, f: int, b: int) -> MatrixQ:
        imgs = [self.tp.right_act(f, b, v) for v in self.vectors]
        coords = self.coordinates(imgs)
        return MatrixQ.from_columns(coords, self.dim) if self.dim else MatrixQ.zero(0)


def alt_power(base: FreeModule, d: int, cap: int = DEFAULT_CAP) -> AltPower:
    """Compute ``Alt^d(V)`` recursively as ``sh_{d-1,1}(Alt^{d-1}(V) (x) V)``.

    Each candidate ``sh(s_{d-1}(x) (x) e_n) = s_d(x (x) e_n)`` keeps its
    pure preimage; a maximal independent family of candidates is the basis.
    """
    tp = TensorPower(base, d, cap)
    n = base.dim
    if d == 0:
        return AltPower(tp, [{0: ONE}], [0])
    if d == 1:
        return AltPower(tp, [{j: ONE} for j in range(n)], list(range(n)))
    prev = alt_power(base, d - 1, cap)
    cands = []
    pres = []
    for v, p in zip(prev.vectors, prev.preimages):
        for j in range(n):
            c = tp.shuffle_last(d, {i * n + j: x for i, x in v.items()})
            if c:
                cands.append(c)
                pres.append(p * n + j)
    keep = independent_columns(cands, tp.size)
    return AltPower(tp, [cands[i] for i in keep], [pres[i] for i in keep])


def kernel_image_lemma(tp: TensorPower) -> dict[str, bool]:
    """Exact check of ``im s_d = cap ker(1 + t_i)`` and ``ker s_d = sum ker(1 - t_i)``."""
    from .linalg import image, intersect_all, kernel, sum_of
    n = tp.size
    s = tp.antisymmetrizer_matrix()
    eye = MatrixQ.identity(n)
    ts = [tp.matrix(lambda v, i=i: tp.transposition(i, v)) for i in range(tp.d - 1)]
    im = image(s)
    ker = kernel(s)
    im2 = intersect_all([kernel(eye + t) for t in ts], n)
    ker2 = sum_of([kernel(eye - t) for t in ts], n) if ts else Subspace.zero(n)
    return {"image": im == im2, "kernel": ker == ker2}


def shuffle_factorization(tp: TensorPower, sizes: Sequence[int]) -> bool:
    """``s_d = sh_sizes . (s_{I_1} (x) ... (x) s_{I_r})`` as a matrix identity."""
    lhs = tp.antisymmetrizer_matrix()
    rhs = tp.matrix(lambda v: tp.shuffle(sizes, tp.young_antisymmetrize(sizes, v)))
    return lhs == rhs


def shuffle_product(tp_p: TensorPower, x: SVec, tp_q: TensorPower, y: SVec, cap: int = DEFAULT_CAP) -> SVec:
    """``x # y = sh_{p,q}(x (x) y)``."""
    if tp_p.base is not tp_q.base and tp_p.base.dim != tp_q.base.dim:
        raise InputError("shuffle product of different modules")
    tp = TensorPower(tp_p.base, tp_p.d + tp_q.d, cap)
    return tp.shuffle([tp_p.d, tp_q.d], tensor_vectors(x, y, tp_q.size))


class SumSplit:
    """The shuffle isomorphism ``sum_{p+q=d} Alt^p(U) (x) Alt^q(V) -> Alt^d(U + V)``."""

    def __init__(self, u: FreeModule, v: FreeModule, d: int, cap: int = DEFAULT_CAP):
        self.u, self.v, self.d = u, v, d
        self.w = direct_sum(u, v)
        self.target = alt_power(self.w, d, cap)
        tw = self.target.tp
        self.blocks = []
        images = []
        for p in range(d + 1):
            q = d - p
            if p > 0 and u.dim == 0 or q > 0 and v.dim == 0:
                continue
            ap = alt_power(u, p, cap)
            aq = alt_power(v, q, cap)
            tp_w = TensorPower(self.w, p, cap)
            tq_w = TensorPower(self.w, q, cap)
            start = len(images)
            for xs in ap.vectors:
                xe = ap.tp.embed(xs, tp_w, 0)
                for ys in aq.vectors:
                    ye = aq.tp.embed(ys, tq_w, u.dim)
                    images.append(tw.shuffle([p, q], tensor_vectors(xe, ye, tq_w.size)))
            self.blocks.append((p, q, ap, aq, start, len(images)))
        self.images = images

    def matrix(self) -> MatrixQ:
        """Coordinates of the images in the basis of ``Alt^d(U + V)`` (columns)."""
        coords = self.target.coordinates(self.images)
        return MatrixQ.from_columns(coords, self.target.dim) if coords else MatrixQ.zero(self.target.dim, 0)

    def is_bijective(self) -> bool:
        n = len(self.images)
        if n != self.target.dim:
            return False
        return len(independent_columns(self.images, self.target.tp.size)) == n


def rdim_binomial_ok(alt: AltPower, base: FreeModule) -> bool:
    r = base.rdim
    if r.denominator != 1:
        return False
    return alt.rdim == math.comb(int(r), alt.d)


class QuotientSpace:
    """``W (x)_B U`` as the quotient of ``W (x)_K U`` by ``w b (x) u - w (x) b u``.

    Basis: the coordinates of ``W (x) U`` that are not pivots of the
    relation span; ``project`` reduces a vector modulo relations.
    """

    def __init__(self, w_dim: int, u_dim: int, right_w: Sequence[MatrixQ], left_u: Sequence[MatrixQ]):
        if len(right_w) != len(left_u):
            raise InputError("mismatched middle algebra")
        self.w_dim, self.u_dim = w_dim, u_dim
        n = w_dim * u_dim
        rels = []
        for rw, lu in zip(right_w, left_u):
            for i in range(w_dim):
                for j in range(u_dim):
                    rel: SVec = {}
                    for k in range(w_dim):
                        c = rw[k, i]
                        if c:
                            rel[k * u_dim + j] = rel.get(k * u_dim + j, ZERO) + c
                    for k in range(u_dim):
                        c = lu[k, j]
                        if c:
                            rel[i * u_dim + k] = rel.get(i * u_dim + k, ZERO) - c
                    rel = {a: b for a, b in rel.items() if b}
                    if rel:
                        rels.append(dense(rel, n))
        red, piv = kernels.rref(rels, n) if rels else ([], [])
        self.rel_rows = red
        self.rel_pivots = piv
        pset = set(piv)
        self.basis = [k for k in range(n) if k not in pset]
        self.pos = {k: i for i, k in enumerate(self.basis)}
        self.dim = len(self.basis)
        self.ambient = n

    def project(self, vec: SVec) -> SVec:
        """Coordinates of the class of ``vec`` in the quotient basis."""
        v = dict(vec)
        for row, p in zip(self.rel_rows, self.rel_pivots):
            c = v.get(p)
            if c:
                for k, x in enumerate(row):
                    if x:
                        w = v.get(k, ZERO) - c * x
                        if w:
                            v[k] = w
                        else:
                            v.pop(k, None)
        return {self.pos[k]: x for k, x in v.items() if x}

    def pair(self, q: int) -> tuple[int, int]:
        """The pure tensor ``(w index, u index)`` representing basis element ``q``."""
        return divmod(self.basis[q], self.u_dim)


def tensor_over_algebra(w_dim: int, u_dim: int, right_w: Sequence[MatrixQ],
                        left_u: Sequence[MatrixQ]) -> QuotientSpace:
    return QuotientSpace(w_dim, u_dim, right_w, left_u)
