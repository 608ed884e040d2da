# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled exact row reduction over Q (GMP rationals) and modular rank.

Same contract as :mod:`hermlambda._kernels_py`; see that module for the
reference implementation.
"""

from fractions import Fraction

from libc.stdlib cimport malloc, free


cdef extern from "gmp.h":
    ctypedef struct __mpz_struct:
        pass
    ctypedef __mpz_struct mpz_t[1]
    ctypedef struct __mpq_struct:
        pass
    ctypedef __mpq_struct mpq_t[1]
    ctypedef __mpz_struct* mpz_ptr
    ctypedef __mpq_struct* mpq_ptr

    void mpz_init(mpz_t)
    void mpz_clear(mpz_t)
    void mpz_set_si(mpz_t, long)
    int mpz_set_str(mpz_t, const char*, int)
    char* mpz_get_str(char*, int, mpz_t)
    long mpz_get_si(mpz_t)
    int mpz_fits_slong_p(mpz_t)
    size_t mpz_sizeinbase(mpz_t, int)

    void mpq_init(mpq_t)
    void mpq_clear(mpq_t)
    void mpq_set(mpq_t, mpq_t)
    void mpq_set_num(mpq_t, mpz_t)
    void mpq_set_den(mpq_t, mpz_t)
    void mpq_set_si(mpq_t, long, unsigned long)
    void mpq_canonicalize(mpq_t)
    void mpq_mul(mpq_t, mpq_t, mpq_t)
    void mpq_sub(mpq_t, mpq_t, mpq_t)
    void mpq_div(mpq_t, mpq_t, mpq_t)
    int mpq_sgn(mpq_t)
    mpz_ptr mpq_numref(mpq_t)
    mpz_ptr mpq_denref(mpq_t)

    void __gmp_free_func "free"(void*)


cdef long SMALL = 1 << 62

_new = object.__new__


cdef object _make_fraction(object n, object d):
    f = _new(Fraction)
    f._numerator = n
    f._denominator = d
    return f


cdef void _set_mpz(mpz_ptr z, object n):
    if -SMALL < n < SMALL:
        mpz_set_si(z, <long>n)
    else:
        s = format(n, "x").encode("ascii")
        mpz_set_str(z, s, 16)


cdef object _get_mpz(mpz_ptr z):
    cdef char* buf
    if mpz_fits_slong_p(z):
        return mpz_get_si(z)
    buf = mpz_get_str(NULL, 16, z)
    try:
        return int(buf.decode("ascii"), 16)
    finally:
        __gmp_free_func(buf)


cdef void _set_mpq(mpq_ptr q, object x):
    if type(x) is int:
        _set_mpz(mpq_numref(q), x)
        mpz_set_si(mpq_denref(q), 1)
    else:
        _set_mpz(mpq_numref(q), x.numerator)
        _set_mpz(mpq_denref(q), x.denominator)


cdef object _get_mpq(mpq_ptr q):
    return _make_fraction(_get_mpz(mpq_numref(q)), _get_mpz(mpq_denref(q)))


cdef size_t _height(mpq_ptr q):
    return mpz_sizeinbase(mpq_numref(q), 2) + mpz_sizeinbase(mpq_denref(q), 2)


def rref(rows, Py_ssize_t ncols):
    """Reduced row echelon form of ``rows`` (lists of rationals).

    Returns ``(nonzero_rows, pivots)`` where ``pivots[i]`` is the pivot
    column of the i-th returned row.
    """
    return _eliminate(rows, ncols, True)


def rank_profile(rows, Py_ssize_t ncols):
    """Pivot columns of the reduced row echelon form of ``rows``."""
    return _eliminate(rows, ncols, False)[1]


cdef _eliminate(rows, Py_ssize_t ncols, bint want_rows):
    cdef Py_ssize_t nrows = len(rows)
    cdef Py_ssize_t i, j, k, r, col, best, top, nsupp
    cdef size_t h, besth
    cdef mpq_t* m
    cdef Py_ssize_t* supp
    cdef mpq_t f, t
    if nrows == 0 or ncols == 0:
        return [], []
    m = <mpq_t*>malloc(nrows * ncols * sizeof(mpq_t))
    supp = <Py_ssize_t*>malloc(ncols * sizeof(Py_ssize_t))
    if m == NULL or supp == NULL:
        free(m)
        free(supp)
        raise MemoryError()
    for i in range(nrows * ncols):
        mpq_init(m[i])
    mpq_init(f)
    mpq_init(t)
    pivots = []
    try:
        for i in range(nrows):
            row = rows[i]
            if len(row) != ncols:
                raise ValueError("ragged row")
            for j in range(ncols):
                x = row[j]
                if x:
                    _set_mpq(m[i * ncols + j], x)
        top = 0
        for col in range(ncols):
            if top == nrows:
                break
            best = -1
            besth = 0
            for r in range(top, nrows):
                if mpq_sgn(m[r * ncols + col]) != 0:
                    h = _height(m[r * ncols + col])
                    if best < 0 or h < besth:
                        best = r
                        besth = h
            if best < 0:
                continue
            if best != top:
                for j in range(ncols):
                    mpq_set(t, m[best * ncols + j])
                    mpq_set(m[best * ncols + j], m[top * ncols + j])
                    mpq_set(m[top * ncols + j], t)
            mpq_set(f, m[top * ncols + col])
            nsupp = 0
            for j in range(col, ncols):
                if mpq_sgn(m[top * ncols + j]) != 0:
                    mpq_div(m[top * ncols + j], m[top * ncols + j], f)
                    supp[nsupp] = j
                    nsupp += 1
            for r in range(nrows):
                if r == top or mpq_sgn(m[r * ncols + col]) == 0:
                    continue
                mpq_set(f, m[r * ncols + col])
                for k in range(nsupp):
                    j = supp[k]
                    mpq_mul(t, f, m[top * ncols + j])
                    mpq_sub(m[r * ncols + j], m[r * ncols + j], t)
            pivots.append(col)
            top += 1
        out = []
        if not want_rows:
            return out, pivots
        zero = Fraction(0)
        for i in range(top):
            row = []
            for j in range(ncols):
                if mpq_sgn(m[i * ncols + j]) == 0:
                    row.append(zero)
                else:
                    row.append(_get_mpq(m[i * ncols + j]))
            out.append(row)
        return out, pivots
    finally:
        for i in range(nrows * ncols):
            mpq_clear(m[i])
        free(m)
        free(supp)
        mpq_clear(f)
        mpq_clear(t)


cdef extern from *:
    """
    typedef unsigned __int128 hl_u128;
    static inline unsigned long long hl_mulmod(unsigned long long a,
                                               unsigned long long b,
                                               unsigned long long p) {
        return (unsigned long long)(((hl_u128)a * b) % p);
    }
    """
    unsigned long long hl_mulmod(unsigned long long, unsigned long long, unsigned long long)


cdef unsigned long long _powmod(unsigned long long a, unsigned long long e,
                                unsigned long long p):
    cdef unsigned long long r = 1
    while e:
        if e & 1:
            r = hl_mulmod(r, a, p)
        a = hl_mulmod(a, a, p)
        e >>= 1
    return r


def rank_mod_p(rows, Py_ssize_t ncols, unsigned long long p):
    """Rank of ``rows`` reduced modulo the prime ``p`` (< 2**63).

    Returns -1 when some denominator is divisible by ``p``.
    """
    cdef Py_ssize_t nrows = len(rows)
    cdef Py_ssize_t i, j, r, col, top
    cdef unsigned long long inv, f, v
    cdef unsigned long long* m
    if nrows == 0 or ncols == 0:
        return 0
    m = <unsigned long long*>malloc(nrows * ncols * sizeof(unsigned long long))
    if m == NULL:
        raise MemoryError()
    try:
        for i in range(nrows):
            row = rows[i]
            for j in range(ncols):
                x = row[j]
                if not x:
                    m[i * ncols + j] = 0
                    continue
                num = x.numerator % p
                den = x.denominator % p
                if den == 0:
                    return -1
                m[i * ncols + j] = hl_mulmod(num, _powmod(den, p - 2, p), p)
        top = 0
        for col in range(ncols):
            if top == nrows:
                break
            r = top
            while r < nrows and m[r * ncols + col] == 0:
                r += 1
            if r == nrows:
                continue
            if r != top:
                for j in range(col, ncols):
                    v = m[r * ncols + j]
                    m[r * ncols + j] = m[top * ncols + j]
                    m[top * ncols + j] = v
            inv = _powmod(m[top * ncols + col], p - 2, p)
            for r in range(top + 1, nrows):
                f = m[r * ncols + col]
                if f == 0:
                    continue
                f = hl_mulmod(f, inv, p)
                for j in range(col, ncols):
                    v = m[top * ncols + j]
                    if v:
                        m[r * ncols + j] = (m[r * ncols + j] + p - hl_mulmod(f, v, p)) % p
            top += 1
        return top
    finally:
        free(m)
