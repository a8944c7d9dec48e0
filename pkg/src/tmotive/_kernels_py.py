"""Pure-Python reference kernels.

Same contract as the compiled extension in ``_kernels.pyx``; selected at
import time by :mod:`tmotive.kernels` when the extension is missing or
disabled.  Everything here works on plain ints and lists so results are
bit-identical to the compiled path.

Encodings: a monic degree-d polynomial v = x^d + sum_{i<d} c_i x^i over
F_q is the integer m = sum_{i<d} c_i q^i.  Residue-field elements are
coefficient lists of length d (little-endian).
"""

from __future__ import annotations

from .errors import BadReduction, DescentFailure

BACKEND = "python"


def decode(q, d, m):
    """Coefficient list (length d+1, monic) of the encoded polynomial."""
    coeffs = []
    for _ in range(d):
        coeffs.append(m % q)
        m //= q
    coeffs.append(1)
    return coeffs


def encode(q, coeffs):
    """Inverse of :func:`decode`; drops the leading 1."""
    m = 0
    for c in reversed(coeffs[:-1]):
        m = m * q + c
    return m


# -- irreducible enumeration --------------------------------------------------


def irreducibles(q, d):
    """Ascending encodings of all monic irreducibles of degree d over F_q.

    Sieve of Eratosthenes over monic polynomials: for every monic
    irreducible p with deg p <= d/2 mark every product p * (monic of
    complementary degree).
    """
    if d == 1:
        return list(range(q))
    composite = bytearray(q**d)
    for e in range(1, d // 2 + 1):
        for pm in irreducibles(q, e):
            p = decode(q, e, pm)
            for fm in range(q ** (d - e)):
                f = decode(q, d - e, fm)
                prod = [0] * (d + 1)
                for i, a in enumerate(p):
                    if a:
                        for j, b in enumerate(f):
                            prod[i + j] = (prod[i + j] + a * b) % q
                composite[encode(q, prod)] = 1
    return [m for m in range(q**d) if not composite[m]]


# -- residue field helpers ----------------------------------------------------


def _mulmod(q, d, v, a, b):
    # v: full coefficient list length d+1 (monic); a, b: length-d lists
    prod = [0] * (2 * d - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    for i in range(2 * d - 2, d - 1, -1):
        c = prod[i] % q
        if c:
            for j in range(d):
                prod[i - d + j] -= c * v[j]
        prod[i] = 0
    return [c % q for c in prod[:d]]


def _powmod(q, d, v, a, e):
    result = [1] + [0] * (d - 1)
    base = a[:]
    while e:
        if e & 1:
            result = _mulmod(q, d, v, result, base)
        base = _mulmod(q, d, v, base, base)
        e >>= 1
    return result


def _frob(q, d, v, a):
    return _powmod(q, d, v, a, q)


# -- t-polynomials with k(v) coefficients --------------------------------------


def _tp_mul(q, d, v, a, b):
    out = [[0] * d for _ in range(len(a) + len(b) - 1)]
    for i, x in enumerate(a):
        if any(x):
            for j, y in enumerate(b):
                if any(y):
                    p = _mulmod(q, d, v, x, y)
                    o = out[i + j]
                    for k in range(d):
                        o[k] = (o[k] + p[k]) % q
    return out


def _tp_add(q, a, b):
    if len(a) < len(b):
        a, b = b, a
    out = [c[:] for c in a]
    for i, y in enumerate(b):
        o = out[i]
        for k in range(len(y)):
            o[k] = (o[k] + y[k]) % q
    return out


def _tp_neg(q, a):
    return [[(-c) % q for c in y] for y in a]


def _det(q, d, v, rows):
    """Determinant over k(v)[t] by cofactor expansion (small matrices only)."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    acc = None
    for j in range(n):
        entry = rows[0][j]
        if not any(any(c) for c in entry):
            continue
        minor = [[row[k] for k in range(n) if k != j] for row in rows[1:]]
        term = _tp_mul(q, d, v, entry, _det(q, d, v, minor))
        if j % 2:
            term = _tp_neg(q, term)
        acc = term if acc is None else _tp_add(q, acc, term)
    return acc if acc is not None else [[0] * d]


# -- Euler factor characteristic polynomials -----------------------------------


def _charpoly_one(q, d, m, num, den, r):
    """[c_1, ..., c_r] t-coefficient lists of det(1 - X B) at one place."""
    import itertools

    v = decode(q, d, m)
    xred = [(-v[0]) % q] if d == 1 else [0, 1] + [0] * (d - 2)

    def red(theta_coeffs):
        e = [0] * d
        for i, c in enumerate(theta_coeffs):
            if c:
                if i < d:
                    e[i] = (e[i] + c) % q
                else:
                    xpow = _powmod(q, d, v, xred, i)
                    for k in range(d):
                        e[k] = (e[k] + c * xpow[k]) % q
        return e

    mat = [[[red(tc) for tc in num[i][j]] or [[0] * d] for j in range(r)] for i in range(r)]
    dred = red(den)
    if not any(dred):
        raise BadReduction(f"denominator vanishes at place encoding {m}")
    # norm of the denominator: product of its Frobenius orbit, lands in F_q
    dn = dred[:]
    dnorm = dred[:]
    for _ in range(d - 1):
        dn = _frob(q, d, v, dn)
        dnorm = _mulmod(q, d, v, dnorm, dn)
    if any(dnorm[1:]):
        raise DescentFailure("denominator norm did not land in F_q")
    dinv = pow(dnorm[0], q - 2, q)

    # chain product B = S * S^(q) * ... * S^(q^(d-1)) over k(v)[t]
    cur = [[[c[:] for c in ent] for ent in row] for row in mat]
    prod = mat
    for _ in range(d - 1):
        cur = [[[_frob(q, d, v, c) for c in ent] for ent in row] for row in cur]
        nxt = []
        for i in range(r):
            nrow = []
            for j in range(r):
                acc = [[0] * d]
                for k in range(r):
                    acc = _tp_add(q, acc, _tp_mul(q, d, v, prod[i][k], cur[k][j]))
                nrow.append(acc)
            nxt.append(nrow)
        prod = nxt

    # c_j = (-1)^j * e_j(B), e_j = sum of principal j x j minors
    cs = []
    scale = 1
    for j in range(1, r + 1):
        ej = None
        for subset in itertools.combinations(range(r), j):
            minor = [[prod[a][b] for b in subset] for a in subset]
            dt = _det(q, d, v, minor)
            ej = dt if ej is None else _tp_add(q, ej, dt)
        if j % 2:
            ej = _tp_neg(q, ej)
        scale = scale * dinv % q
        c = []
        for coef in ej:
            if any(coef[1:]):
                raise DescentFailure("Euler factor coefficient not in F_q[t]")
            c.append(coef[0] * scale % q)
        while c and c[-1] == 0:
            c.pop()
        cs.append(c)
    return cs


def charpolys(q, d, encodings, num, den, r, st):
    """Characteristic polynomial data of Frobenius for a batch of places.

    num[i][j] is the (i,j) entry of the numerator sigma-matrix: a list of
    theta-coefficient lists indexed by t-degree (<= st).  den is the
    common denominator in theta.  For each encoded place v of degree d
    this returns [c_1, ..., c_r]: little-endian t-coefficient lists over
    F_q with det(1 - X B) = 1 + sum_j c_j X^j, where B is the d-fold
    twisted product of sigma reduced mod v.
    """
    return [_charpoly_one(q, d, m, num, den, r) for m in encodings]


# -- truncated power series in u = 1/t over F_q ---------------------------------


def _ser_mul(q, a, b, W):
    out = [0] * (W + 1)
    for i, x in enumerate(a):
        if x:
            top = W - i
            for j, y in enumerate(b[: top + 1]):
                if y:
                    out[i + j] = (out[i + j] + x * y) % q
    return out


def _ser_inv(q, a, W):
    if a[0] % q == 0:
        raise ZeroDivisionError("series with zero constant term")
    c0 = pow(a[0], q - 2, q)
    h = [0] * (W + 1)
    h[0] = c0
    for i in range(1, W + 1):
        s = 0
        for j in range(1, min(i, len(a) - 1) + 1):
            if a[j]:
                s += a[j] * h[i - j]
        h[i] = (-s * c0) % q
    return h


def partial_product(q, d, encodings, num, den, r, st, n, W):
    """u-series (u = 1/t, length W+1) of prod_v P_v(Nv^{-n})^{-1} over a place block.

    Same matrix packing as charpolys.  Raises ValueError when a factor has a
    term of nonpositive u-valuation (the product then diverges).
    """
    acc = [0] * (W + 1)
    acc[0] = 1
    m = d * n
    for enc in encodings:
        cs = _charpoly_one(q, d, enc, num, den, r)
        v = decode(q, d, enc)
        # g = Nv^n monic of degree m; b = its reversal, so Nv^{-n} = u^m / b(u)
        g = [1]
        for _ in range(n):
            gn = [0] * (len(g) + d)
            for i, x in enumerate(g):
                if x:
                    for j, y in enumerate(v):
                        gn[i + j] = (gn[i + j] + x * y) % q
            g = gn
        b = g[::-1]
        h = _ser_inv(q, b, W)
        factor = [0] * (W + 1)
        factor[0] = 1
        hp = [0] * (W + 1)
        hp[0] = 1
        for j, c in enumerate(cs, start=1):
            hp = _ser_mul(q, hp, h, W)
            for k, ck in enumerate(c):
                if ck:
                    shift = j * m - k
                    if shift < 0:
                        raise ValueError("Euler factor term with nonpositive valuation")
                    if shift > W:
                        continue
                    for i, y in enumerate(hp[: W + 1 - shift]):
                        if y:
                            factor[shift + i] = (factor[shift + i] + ck * y) % q
        acc = _ser_mul(q, acc, _ser_inv(q, factor, W), W)
    return acc
