# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels for the q = 2 hot paths.

Residue-field elements of F_2[x]/(v) are packed into 64-bit words, one bit
per coefficient, so multiplication is a carry-less multiply followed by
reduction mod v.  Everything returns the same plain-int structures as the
pure backend in _kernels_py; results are bit-identical.

Only q = 2 with deg v <= 32 is handled here; the dispatcher falls back to
the pure backend otherwise.
"""

from libc.stdlib cimport calloc, free
from libc.string cimport memset

from .errors import BadReduction, DescentFailure

BACKEND = "cython"

ctypedef unsigned long long u64


cdef inline u64 mulred2(u64 a, u64 b, u64 vf, int d) noexcept:
    """a*b mod v over F_2; a, b of degree < d, v monic of degree d."""
    cdef u64 r = 0
    cdef int i
    for i in range(d):
        if (a >> i) & 1ULL:
            r ^= b << i
    for i in range(2 * d - 2, d - 1, -1):
        if (r >> i) & 1ULL:
            r ^= vf << (i - d)
    return r


cdef inline u64 frob2(u64 a, u64 vf, int d) noexcept:
    """a^2 mod v: squaring over F_2 spreads the bits."""
    cdef u64 s = 0
    cdef int i
    for i in range(d):
        if (a >> i) & 1ULL:
            s ^= 1ULL << (2 * i)
    for i in range(2 * d - 2, d - 1, -1):
        if (s >> i) & 1ULL:
            s ^= vf << (i - d)
    return s


cdef inline u64 red2(u64 w, u64 vf, int d) noexcept:
    """Reduce a polynomial of degree <= 62 mod v."""
    cdef int i
    for i in range(62, d - 1, -1):
        if (w >> i) & 1ULL:
            w ^= vf << (i - d)
    return w


def irreducibles2(int d):
    """Ascending encodings of monic irreducibles of degree d over F_2."""
    if d == 1:
        return [0, 1]
    cdef long total = 1L << d
    cdef unsigned char* comp = <unsigned char*>calloc(total, 1)
    if comp == NULL:
        raise MemoryError()
    cdef int e, i
    cdef long fm, fcount
    cdef u64 p, f, prod, mask = total - 1
    try:
        for e in range(1, d // 2 + 1):
            fcount = 1L << (d - e)
            for pm in irreducibles2(e):
                p = (<u64>pm) | (1ULL << e)
                for fm in range(fcount):
                    f = (<u64>fm) | (1ULL << (d - e))
                    prod = 0
                    for i in range(e + 1):
                        if (p >> i) & 1ULL:
                            prod ^= f << i
                    comp[prod & mask] = 1
        return [m for m in range(total) if not comp[m]]
    finally:
        free(comp)


cdef struct Work:
    # matrix chain workspace; entries are t-polynomials with u64 coefficients
    u64* sred      # reduced sigma matrix, r*r*st
    u64* prod
    u64* cur
    u64* nxt
    int* pdeg
    int* cdeg
    int* ndeg
    u64* dscr      # det scratch polys
    int* iscr      # det scratch index arrays
    u64* ej        # one poly


cdef void pdet2(u64* M, int* Mdeg, int R, int stride, int* rows, int* cols, int n,
                u64* out, int* odeg, u64 vf, int d, u64* scratch, int* iscratch) noexcept:
    """Determinant of the n x n submatrix (rows x cols) over F_2[x]/(v) [t].

    Characteristic 2: addition is xor, signs vanish.
    """
    cdef int i, j, k, a, b, e, mdeg
    cdef u64* minor
    cdef int* subcols
    for i in range(stride):
        out[i] = 0
    if n == 1:
        e = rows[0] * R + cols[0]
        for i in range(Mdeg[e] + 1):
            out[i] = M[e * stride + i]
        odeg[0] = Mdeg[e]
        return
    minor = scratch
    subcols = iscratch
    for j in range(n):
        e = rows[0] * R + cols[j]
        if Mdeg[e] < 0:
            continue
        k = 0
        for i in range(n):
            if i != j:
                subcols[k] = cols[i]
                k += 1
        pdet2(M, Mdeg, R, stride, rows + 1, subcols, n - 1,
              minor, &mdeg, vf, d, scratch + stride, iscratch + n)
        if mdeg < 0:
            continue
        for a in range(Mdeg[e] + 1):
            if M[e * stride + a]:
                for b in range(mdeg + 1):
                    if minor[b]:
                        out[a + b] ^= mulred2(M[e * stride + a], minor[b], vf, d)
    odeg[0] = -1
    for i in range(stride - 1, -1, -1):
        if out[i]:
            odeg[0] = i
            break


cdef int chain2(Work* w, u64 vf, int d, int r, int st, int stride) noexcept:
    """prod = S * S^(2) * ... * S^(2^(d-1)) from the reduced matrix w.sred."""
    cdef int i, j, k, a, b, step, e, deg
    cdef u64 c
    # init prod and cur from sred
    for e in range(r * r):
        deg = -1
        for a in range(stride):
            w.prod[e * stride + a] = 0
        for a in range(st):
            c = w.sred[e * st + a]
            w.prod[e * stride + a] = c
            w.cur[e * st + a] = c
            if c:
                deg = a
        w.pdeg[e] = deg
        w.cdeg[e] = deg
    for step in range(d - 1):
        for e in range(r * r):
            for a in range(w.cdeg[e] + 1):
                if w.cur[e * st + a]:
                    w.cur[e * st + a] = frob2(w.cur[e * st + a], vf, d)
        for i in range(r):
            for j in range(r):
                e = i * r + j
                for a in range(stride):
                    w.nxt[e * stride + a] = 0
                deg = -1
                for k in range(r):
                    if w.pdeg[i * r + k] < 0 or w.cdeg[k * r + j] < 0:
                        continue
                    for a in range(w.pdeg[i * r + k] + 1):
                        c = w.prod[(i * r + k) * stride + a]
                        if c:
                            for b in range(w.cdeg[k * r + j] + 1):
                                if w.cur[(k * r + j) * st + b]:
                                    w.nxt[e * stride + a + b] ^= mulred2(
                                        c, w.cur[(k * r + j) * st + b], vf, d)
                for a in range(stride - 1, -1, -1):
                    if w.nxt[e * stride + a]:
                        deg = a
                        break
                w.ndeg[e] = deg
        # swap prod and nxt
        w.prod, w.nxt = w.nxt, w.prod
        w.pdeg, w.ndeg = w.ndeg, w.pdeg
    return 0


def _subsets(int r):
    """Index tuples of all nonempty subsets of range(r), grouped by size."""
    import itertools
    out = []
    for j in range(1, r + 1):
        out.append([list(s) for s in itertools.combinations(range(r), j)])
    return out


cdef int place_charpoly(Work* w, u64 vf, int d, int r, int st, int stride,
                        list numbits, u64 denbits, list subsets, list out_cs) except -1:
    """Reduce mod v, run the chain, extract c_j coefficient lists into out_cs."""
    cdef int i, j, a, e, odeg, mdeg
    cdef u64 c, dred
    # reduce entries
    for e in range(r * r):
        ent = numbits[e]
        for a in range(st):
            w.sred[e * st + a] = 0
        for a in range(len(ent)):
            w.sred[e * st + a] = red2(<u64>ent[a], vf, d)
    dred = red2(denbits, vf, d)
    if dred == 0:
        raise BadReduction("denominator vanishes at this place")
    # over F_2 the norm of a nonzero element is 1: no scaling needed
    chain2(w, vf, d, r, st, stride)
    del out_cs[:]
    for j in range(1, r + 1):
        for a in range(stride):
            w.ej[a] = 0
        odeg = -1
        for sub in subsets[j - 1]:
            for i in range(j):
                w.iscr[i] = <int>sub[i]
            pdet2(w.prod, w.pdeg, r, stride, w.iscr, w.iscr, j,
                  w.dscr, &mdeg, vf, d, w.dscr + stride, w.iscr + j)
            for a in range(mdeg + 1):
                w.ej[a] ^= w.dscr[a]
        for a in range(stride - 1, -1, -1):
            if w.ej[a]:
                odeg = a
                break
        c_list = []
        for a in range(odeg + 1):
            c = w.ej[a]
            if c > 1:
                raise DescentFailure("Euler factor coefficient not in F_2[t]")
            c_list.append(<int>c)
        out_cs.append(c_list)
    return 0


cdef Work* work_alloc(int r, int st, int stride) except NULL:
    cdef Work* w = <Work*>calloc(1, sizeof(Work))
    if w == NULL:
        raise MemoryError()
    w.sred = <u64*>calloc(r * r * st, sizeof(u64))
    w.prod = <u64*>calloc(r * r * stride, sizeof(u64))
    w.cur = <u64*>calloc(r * r * st, sizeof(u64))
    w.nxt = <u64*>calloc(r * r * stride, sizeof(u64))
    w.pdeg = <int*>calloc(r * r, sizeof(int))
    w.cdeg = <int*>calloc(r * r, sizeof(int))
    w.ndeg = <int*>calloc(r * r, sizeof(int))
    w.dscr = <u64*>calloc((r + 2) * stride, sizeof(u64))
    w.iscr = <int*>calloc((r + 2) * (r + 2), sizeof(int))
    w.ej = <u64*>calloc(stride, sizeof(u64))
    if (w.sred == NULL or w.prod == NULL or w.cur == NULL or w.nxt == NULL or
            w.pdeg == NULL or w.cdeg == NULL or w.ndeg == NULL or
            w.dscr == NULL or w.iscr == NULL or w.ej == NULL):
        work_free(w)
        raise MemoryError()
    return w


cdef void work_free(Work* w) noexcept:
    if w == NULL:
        return
    free(w.sred); free(w.prod); free(w.cur); free(w.nxt)
    free(w.pdeg); free(w.cdeg); free(w.ndeg)
    free(w.dscr); free(w.iscr); free(w.ej)
    free(w)


def _pack_bits(num, den, int r, int st):
    """Flatten num into r*r lists of theta-bit ints; den into one int."""
    numbits = []
    for i in range(r):
        for j in range(r):
            ent = []
            for tc in num[i][j]:
                b = 0
                for k, c in enumerate(tc):
                    if c & 1:
                        b |= 1 << k
                if b >> 63:
                    raise OverflowError("theta degree too large for packed kernel")
                ent.append(b)
            numbits.append(ent)
    b = 0
    for k, c in enumerate(den):
        if c & 1:
            b |= 1 << k
    if b >> 63:
        raise OverflowError("theta degree too large for packed kernel")
    return numbits, b


def charpolys2(int d, encodings, num, den, int r, int st):
    """q = 2 version of the charpolys kernel contract."""
    if st < 1:
        st = 1
    # determinant expansion terms can exceed the final degree before
    # cancellation: size buffers for r entries of full chain degree
    cdef int stride = r * d * (st - 1) + 2
    numbits, denbits = _pack_bits(num, den, r, st)
    subsets = _subsets(r)
    cdef Work* w = work_alloc(r, st, stride)
    cdef u64 vf
    out = []
    cs = []
    try:
        for m in encodings:
            vf = (<u64>m) | (1ULL << d)
            place_charpoly(w, vf, d, r, st, stride, numbits, <u64>denbits, subsets, cs)
            trimmed = []
            for c in cs:
                cc = list(c)
                while cc and cc[len(cc) - 1] == 0:
                    cc.pop()
                trimmed.append(cc)
            out.append(trimmed)
    finally:
        work_free(w)
    return out


cdef inline u64 sermul2(u64 a, u64 b, int W) noexcept:
    """Truncated product of F_2 power series packed as bits, W+1 terms."""
    cdef u64 r = 0
    cdef int i
    for i in range(W + 1):
        if (a >> i) & 1ULL:
            r ^= b << i
    if W < 63:
        r &= (1ULL << (W + 1)) - 1
    return r


cdef inline u64 serinv2(u64 a, int W) noexcept:
    """Inverse of a series with constant term 1, packed as bits."""
    cdef u64 h = 1
    cdef int i, j, s
    for i in range(1, W + 1):
        s = 0
        for j in range(1, i + 1):
            if ((a >> j) & 1ULL) and ((h >> (i - j)) & 1ULL):
                s ^= 1
        if s:
            h |= 1ULL << i
    return h


def partial_product2(int d, encodings, num, den, int r, int st, int n, int W):
    """q = 2 version of the partial_product kernel contract (W <= 62)."""
    if W > 62:
        raise OverflowError("working precision too large for packed kernel")
    if st < 1:
        st = 1
    cdef int stride = r * d * (st - 1) + 2
    numbits, denbits = _pack_bits(num, den, r, st)
    subsets = _subsets(r)
    cdef Work* w = work_alloc(r, st, stride)
    cdef u64 vf, b, h, hp, factor, acc = 1
    cdef int m_deg = d * n
    cdef int i, j, k, shift
    cs = []
    try:
        for m in encodings:
            vf = (<u64>m) | (1ULL << d)
            place_charpoly(w, vf, d, r, st, stride, numbits, <u64>denbits, subsets, cs)
            # b = reversal of Nv^n, truncated to W+1 terms
            if n == 1:
                b = 0
                for i in range(min(d, W) + 1):
                    if (vf >> (d - i)) & 1ULL:
                        b |= 1ULL << i
            else:
                gm = int(m) | (1 << d)
                gp = 1
                for i in range(n):
                    acc_g = 0
                    t = gp
                    sh = 0
                    while t:
                        if t & 1:
                            acc_g ^= gm << sh
                        t >>= 1
                        sh += 1
                    gp = acc_g
                b = 0
                for i in range(min(m_deg, W) + 1):
                    if (gp >> (m_deg - i)) & 1:
                        b |= 1ULL << i
            h = serinv2(b, W)
            factor = 1
            hp = 1
            for j in range(1, r + 1):
                hp = sermul2(hp, h, W)
                c = cs[j - 1]
                for k in range(len(c)):
                    if c[k]:
                        shift = j * m_deg - k
                        if shift < 0:
                            raise ValueError("Euler factor term with nonpositive valuation")
                        if shift <= W:
                            factor ^= hp << shift
            if W < 63:
                factor &= (1ULL << (W + 1)) - 1
            acc = sermul2(acc, serinv2(factor, W), W)
    finally:
        work_free(w)
    return [(acc >> i) & 1 for i in range(W + 1)]
