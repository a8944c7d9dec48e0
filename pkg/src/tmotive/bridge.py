"""Between sigma-modules and t-modules.

A finitely generated effective sigma-module M (all Newton slopes negative)
is the motive of an abelian t-module E.  This module makes the equivalence
constructive in both directions:

* motive_to_module: find d = n unit monomials of K[t]^r spanning the
  cokernel of the sigma-span, then express t times each one over the
  K[tau]-span by exact linear algebra, which is the matrix phi(t) of E.
* module_to_motive: regard K[tau]^d with t acting through phi(t) and sigma
  as componentwise left multiplication by tau, discover a K[t]-basis, and
  read off the sigma-matrix (used as a round-trip consistency check).
* w_map / lattice_det: the quotient w : Lie_E -> W_E = Lie_E/(t-theta)Lie_E
  and the determinant of the integral image lattice w(O_K^d).
"""

from __future__ import annotations

from dataclasses import dataclass

from .bipoly import BiPoly
from .errors import DegreeCapExceeded, DimensionMismatch, NotFinitelyGenerated
from .gfpoly import Poly, poly_gcd
from .ratfun import RationalFn
from .tmodule import TModule, _ident, _msub, _mscale


class SkewPoly:
    """Twisted polynomial sum a_i tau^i over F_q(theta), tau*a = a^q*tau."""

    __slots__ = ("q", "coeffs")

    def __init__(self, q, coeffs, *, _norm=False):
        if not _norm:
            coeffs = [c if isinstance(c, RationalFn) else RationalFn.parse(q, str(c), "x")
                      for c in coeffs]
            while coeffs and coeffs[-1].is_zero():
                coeffs.pop()
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "coeffs", tuple(coeffs))

    def __setattr__(self, *a):
        raise AttributeError("SkewPoly is immutable")

    @classmethod
    def zero(cls, q):
        return cls(q, (), _norm=True)

    @classmethod
    def one(cls, q):
        return cls(q, (RationalFn.one(q),), _norm=True)

    @classmethod
    def tau(cls, q, s=1):
        return cls(q, [RationalFn.zero(q)] * s + [RationalFn.one(q)])

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        z = RationalFn.zero(self.q)
        out = [
            (self.coeffs[i] if i < len(self.coeffs) else z)
            + (other.coeffs[i] if i < len(other.coeffs) else z)
            for i in range(n)
        ]
        return SkewPoly(self.q, out)

    def __neg__(self):
        return SkewPoly(self.q, tuple(-c for c in self.coeffs), _norm=True)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, RationalFn):
            other = SkewPoly(self.q, (other,))
        z = RationalFn.zero(self.q)
        out = [z] * (len(self.coeffs) + len(other.coeffs) - 1) if self.coeffs and other.coeffs else []
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b.qpower(i)
        return SkewPoly(self.q, out)

    def __eq__(self, other):
        return isinstance(other, SkewPoly) and self.q == other.q and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.q, self.coeffs))

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            if i == 0:
                parts.append(str(c))
            else:
                v = "tau" if i == 1 else f"tau^{i}"
                parts.append(v if c.is_one() else f"({c})*{v}")
        return " + ".join(parts)

    def __repr__(self):
        return f"SkewPoly({self})"


class _Echelon:
    """Sparse Gaussian elimination over F_q(theta) with expression tracking.

    Vectors are dicts mapping orderable coordinate keys to RationalFn.
    Each stored row remembers how it combines the tags it was inserted
    under, so reduce() can report an exact expression of its input.
    """

    def __init__(self, q):
        self.q = q
        self.rows = {}

    def reduce(self, vec, comb=None):
        """(remainder, combination): remainder has no pivot in common with the
        stored rows; input - remainder = sum of combination[tag] * tagged rows."""
        vec = {k: v for k, v in vec.items() if not v.is_zero()}
        comb = dict(comb or {})
        while vec:
            p = max(vec)
            row = self.rows.get(p)
            if row is None:
                return vec, comb
            rvec, rcomb = row
            c = vec[p] / rvec[p]
            for k, x in rvec.items():
                nv = vec.get(k, RationalFn.zero(self.q)) - c * x
                if nv.is_zero():
                    vec.pop(k, None)
                else:
                    vec[k] = nv
            for k, x in rcomb.items():
                comb[k] = comb.get(k, RationalFn.zero(self.q)) + c * x
        return {}, comb

    def insert(self, vec, tag=None):
        """Reduce and store; returns the new pivot or None if dependent."""
        rem, comb = self.reduce(vec)
        if not rem:
            return None
        comb = {k: -v for k, v in comb.items()}
        if tag is not None:
            comb[tag] = comb.get(tag, RationalFn.zero(self.q)) + RationalFn.one(self.q)
        p = max(rem)
        self.rows[p] = (rem, comb)
        return p

    def pivots(self):
        return set(self.rows)


@dataclass(frozen=True)
class BridgeResult:
    module: TModule
    basis: tuple
    w_matrix: tuple
    dim_w: int
    integral: bool

    @property
    def lie_matrix(self):
        return self.module.lie_matrix


def _column_vector(M, j, shift=0):
    """Column j of the sigma-matrix as a sparse K[t]^r vector, times t^shift."""
    out = {}
    for i in range(M.r):
        e = M.matrix[i][j]
        if e.is_zero():
            continue
        for k in range(e.t_degree + 1):
            c = e.coeff(k)
            if not c.is_zero():
                out[(k + shift, i)] = c
    return out


def _sigma_vec(M, v):
    """sigma applied to a sparse K[t]^r vector: S times the q-powered vector."""
    out = {}
    for (k, l), c in v.items():
        cq = c.qpower(1)
        for i in range(M.r):
            e = M.matrix[i][l]
            if e.is_zero():
                continue
            for k2 in range(e.t_degree + 1):
                a = e.coeff(k2)
                if a.is_zero():
                    continue
                key = (k + k2, i)
                s = out.get(key)
                out[key] = a * cq if s is None else s + a * cq
    return {k: v for k, v in out.items() if not v.is_zero()}


def _cokernel_basis(M, degree_cap):
    """Unit monomials t^a e_i spanning K[t]^r modulo the K-span of sigma(M).

    The span is generated by t^k sigma(e_j); eliminating always at the
    highest t-degree leaves low-degree unit coordinates as a complement.
    The loop stops when the complement has size n and is unchanged for two
    consecutive degree levels.
    """
    ech = _Echelon(M.q)
    prev = None
    stable = 0
    for k in range(degree_cap + 1):
        for j in range(M.r):
            ech.insert(_column_vector(M, j, shift=k))
        piv = ech.pivots()
        nonpiv = sorted(
            (a, i) for a in range(k + 1) for i in range(M.r) if (a, i) not in piv
        )
        if nonpiv == prev and len(nonpiv) == M.n:
            stable += 1
            if stable >= 2:
                return nonpiv
        else:
            stable = 0
        prev = nonpiv
    raise DegreeCapExceeded(
        f"cokernel did not stabilize at dimension {M.n} within t-degree {degree_cap}"
    )


def motive_to_module(M, degree_cap=60, order_cap=30):
    """The abelian t-module of a finitely generated effective sigma-module.

    Returns a BridgeResult whose TModule has dimension n (the exponent in
    det = alpha*(t-theta)^n) and whose basis lists the chosen unit monomials
    (a, i) standing for t^a e_i.
    """
    slopes = M.newton_slopes()  # raises NotFinitelyGenerated on a slope >= 0
    del slopes
    q = M.q
    basis = _cokernel_basis(M, degree_cap)
    d = len(basis)
    one = RationalFn.one(q)

    units = [{key: one} for key in basis]
    tech = _Echelon(q)
    layers = []  # layers[s][i] = sigma^s(n_i) as sparse vector
    layers.append(units)
    for i, u in enumerate(units):
        tech.insert(u, tag=(i, 0))
    smax = 0

    def express(v):
        nonlocal smax
        while True:
            rem, comb = tech.reduce(v)
            if not rem:
                return comb
            if smax >= order_cap:
                raise DegreeCapExceeded(
                    f"skew reduction needs tau-order beyond {order_cap}; "
                    "the module may not be finitely generated"
                )
            smax += 1
            nxt = [_sigma_vec(M, w) for w in layers[-1]]
            layers.append(nxt)
            for i, w in enumerate(nxt):
                tech.insert(w, tag=(i, smax))

    rows = []  # rows[j] = {(i, s): coefficient} for t * n_j
    for (a, i0) in basis:
        tv = {(a + 1, i0): one}
        rows.append(express(tv))

    kmax = max((s for row in rows for (_, s) in row), default=0)
    zero = RationalFn.zero(q)
    mats = []
    for s in range(kmax + 1):
        mats.append([[rows[j].get((i, s), zero) for i in range(d)] for j in range(d)])
    E = TModule(q, mats)

    w_matrix, dim_w = w_map(E)
    integral = all(x.is_polynomial() for mat in E.matrices for row in mat for x in row)
    return BridgeResult(
        module=E,
        basis=tuple(basis),
        w_matrix=w_matrix,
        dim_w=dim_w,
        integral=integral,
    )


def w_map(E):
    """(w_matrix, dim W_E): the projection Lie_E -> Lie_E/(t-theta)Lie_E.

    Rows form a reduced basis of the left kernel of N = A_0 - theta*I,
    cleared to primitive F_q[theta] entries for a deterministic integral
    model of the image lattice.
    """
    q, d = E.q, E.d
    N = E.nilpotent_part()
    # row-reduce N to expose its column space; left kernel = rows y with yN = 0
    # solve via elimination on the transpose
    cols = [[N[i][j] for i in range(d)] for j in range(d)]  # N^T rows
    # reduced row echelon of N^T with recorded pivots
    mat = [row[:] for row in cols]
    pivots = []
    rank = 0
    for col in range(d):
        sel = None
        for r_ in range(rank, d):
            if not mat[r_][col].is_zero():
                sel = r_
                break
        if sel is None:
            continue
        mat[rank], mat[sel] = mat[sel], mat[rank]
        inv = mat[rank][col].inverse()
        mat[rank] = [x * inv for x in mat[rank]]
        for r_ in range(d):
            if r_ != rank and not mat[r_][col].is_zero():
                c = mat[r_][col]
                mat[r_] = [x - c * y for x, y in zip(mat[r_], mat[rank])]
        pivots.append(col)
        rank += 1
    free = [c for c in range(d) if c not in pivots]
    rows = []
    for f in free:
        y = [RationalFn.zero(q)] * d
        y[f] = RationalFn.one(q)
        for r_, p in enumerate(pivots):
            y[p] = -mat[r_][f]
        rows.append(_primitive_row(q, y))
    return tuple(tuple(r) for r in rows), len(rows)


def _primitive_row(q, row):
    """Scale a K-vector to coprime F_q[theta] entries with monic content."""
    den = Poly.one(q, "x")
    for x in row:
        if not x.is_zero():
            g = poly_gcd(den, x.den)
            den = den * (x.den // g)
    cleared = [x * RationalFn.from_poly(den) for x in row]
    content = Poly.zero(q, "x")
    for x in cleared:
        if not x.is_zero():
            content = poly_gcd(content, x.num) if not content.is_zero() else x.num
    if not content.is_zero() and not content.is_one():
        inv = RationalFn.one(q) / RationalFn.from_poly(content)
        cleared = [x * inv for x in cleared]
    return cleared


def lattice_det(w_matrix):
    """Determinant (monic, up to F_q^x) of the lattice spanned over F_q[theta]
    by the columns of an integral w-matrix; gcd of its maximal minors."""
    import itertools

    w = len(w_matrix)
    if w == 0:
        raise DimensionMismatch("empty w-matrix")
    d = len(w_matrix[0])
    q = w_matrix[0][0].q
    g = Poly.zero(q, "x")
    for subset in itertools.combinations(range(d), w):
        minor = _rf_det([[w_matrix[i][j] for j in subset] for i in range(w)])
        if minor.is_zero():
            continue
        if not minor.is_polynomial():
            raise ValueError("w-matrix is not integral")
        g = minor.num if g.is_zero() else poly_gcd(g, minor.num)
    if g.is_zero():
        raise DimensionMismatch("w-matrix has rank below dim W_E")
    return g * pow(g.lead, q - 2, q)


def _rf_det(rows):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    acc = RationalFn.zero(rows[0][0].q)
    for j in range(n):
        e = rows[0][j]
        if e.is_zero():
            continue
        minor = _rf_det([[row[k] for k in range(n) if k != j] for row in rows[1:]])
        term = e * minor
        acc = acc + (-term if j % 2 else term)
    return acc


def module_to_motive(E, rank, order_cap=40, span_cap=40):
    """Rebuild a sigma-module from a t-module (round-trip consistency check).

    K[tau]^d carries t through phi(t) (composition on the right) and sigma
    as componentwise left multiplication by tau; `rank` is the expected
    K[t]-rank.  Greedy basis discovery plus exact expression of sigma of
    each basis element yields the sigma-matrix.
    """
    q, d = E.q, E.d

    def t_act(v):
        out = {}
        for (s, i), c in v.items():
            for u, mat in enumerate(E.matrices):
                for j in range(d):
                    a = mat[i][j]
                    if a.is_zero():
                        continue
                    key = (s + u, j)
                    term = a.qpower(s) * c
                    prev = out.get(key)
                    out[key] = term if prev is None else prev + term
        return {k: v for k, v in out.items() if not v.is_zero()}

    def sigma_act(v):
        return {(s + 1, i): c.qpower(1) for (s, i), c in v.items()}

    one = RationalFn.one(q)
    ech = _Echelon(q)
    chosen = []  # (key, vector)
    tmults = []  # tmults[m][a] = t^a * chosen[m], grown on demand
    amax = 0

    def grow():
        nonlocal amax
        amax += 1
        if amax > span_cap:
            raise DegreeCapExceeded(f"t-span beyond degree {span_cap}")
        for m, chain in enumerate(tmults):
            chain.append(t_act(chain[-1]))
            ech.insert(chain[-1], tag=(m, amax))

    for s in range(order_cap):
        for i in range(d):
            if len(chosen) == rank:
                break
            cand = {(s, i): one}
            rem, _ = ech.reduce(cand)
            if not rem:
                continue
            m = len(chosen)
            chosen.append(((s, i), cand))
            tmults.append([cand])
            ech.insert(cand, tag=(m, 0))
            # catch the new element up with the current t-span depth
            for a in range(1, amax + 1):
                tmults[m].append(t_act(tmults[m][-1]))
                ech.insert(tmults[m][-1], tag=(m, a))
        if len(chosen) == rank:
            break
    if len(chosen) < rank:
        raise DegreeCapExceeded(f"found only {len(chosen)} of {rank} basis elements")

    def express(v):
        while True:
            rem, comb = ech.reduce(v)
            if not rem:
                return comb
            grow()

    # generators must land in the t-span of the basis (round-trip on generators)
    for i in range(d):
        express({(0, i): one})

    cols = []
    for _, vec in chosen:
        comb = express(sigma_act(vec))
        cols.append(comb)
    zero = RationalFn.zero(q)
    entries = []
    for i in range(rank):
        row = []
        for j in range(rank):
            amax_ij = max((a for (m, a) in cols[j] if m == i), default=0)
            row.append(BiPoly(q, [cols[j].get((i, a), zero) for a in range(amax_ij + 1)]))
        entries.append(row)
    from .sigma import SigmaModule

    return SigmaModule(q, entries)
