"""Sigma-modules over O_K with good models.

A SigmaModule is an r x r matrix over F_q(x)[t] describing the semilinear
map sigma on a chosen basis, convention sigma(m_j) = sum_i Sigma[i][j] m_i,
so coordinates transform x -> Sigma . x^(q).  Effectivity means
det Sigma = alpha (t - theta)^n with alpha a nonzero constant.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from . import bipoly, kernels
from .bipoly import BiPoly
from .errors import (
    BadLeadingCoeff,
    NotEffective,
    NotFinitelyGenerated,
    RankOverflow,
)
from .gfpoly import Poly
from .ratfun import RationalFn

RANK_CAP = 64


class SigmaModule:
    """An effective sigma-module given by its matrix on an O_K[t]-basis."""

    __slots__ = ("q", "r", "matrix", "alpha", "n", "_packed")

    def __init__(self, q, matrix):
        matrix = tuple(tuple(self._entry(q, e) for e in row) for row in matrix)
        r = len(matrix)
        if r == 0 or any(len(row) != r for row in matrix):
            raise ValueError("sigma matrix must be square and nonempty")
        if r > RANK_CAP:
            raise RankOverflow(f"rank {r} exceeds cap {RANK_CAP}")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "matrix", matrix)
        alpha, n = self._effectivity()
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "_packed", None)

    @staticmethod
    def _entry(q, e):
        if isinstance(e, BiPoly):
            return e
        if isinstance(e, str):
            return BiPoly.parse(q, e)
        return BiPoly(q, [e]) if isinstance(e, (int, Poly, RationalFn)) else BiPoly(q, e)

    def __setattr__(self, *a):
        raise AttributeError("SigmaModule is immutable")

    def _effectivity(self):
        d = bipoly.det([list(row) for row in self.matrix])
        if d.is_zero():
            raise NotEffective("sigma matrix is degenerate (zero determinant)")
        n = d.t_degree
        lead = d.coeff(n)
        if not (lead.is_constant() and not lead.is_zero()):
            raise NotEffective(f"determinant {d} is not of the form a*(t-x)^n")
        alpha = lead.num.constant_term()
        if d != BiPoly.t_minus_theta(self.q) ** n * alpha:
            raise NotEffective(f"determinant {d} is not of the form a*(t-x)^n")
        return alpha, n

    # -- construction ---------------------------------------------------------

    @classmethod
    def carlitz(cls, q):
        return cls(q, [[BiPoly.t_minus_theta(q)]])

    @classmethod
    def carlitz_power(cls, q, n):
        if n < 1:
            raise ValueError("carlitz power needs n >= 1")
        return cls(q, [[BiPoly.t_minus_theta(q) ** n]])

    @classmethod
    def drinfeld(cls, q, coeffs):
        """The motive of the Drinfeld module t -> theta + a_1 tau + ... + a_r tau^r.

        Basis {1, tau, ..., tau^(r-1)} of K[tau], using
        tau^r = a_r^{-1} ((t - theta) - a_1 tau - ... - a_{r-1} tau^{r-1}).
        a_r must be a nonzero constant; earlier a_i may be rational in theta.
        """
        a = [BiPoly._lift(q, c) for c in coeffs]
        r = len(a)
        if r < 1:
            raise ValueError("need at least one coefficient")
        top = a[-1]
        if not (top.is_constant() and not top.is_zero()):
            raise BadLeadingCoeff(f"leading coefficient {top} must be in F_q^x")
        inv_top = top.inverse()
        zero = BiPoly.zero(q)
        mat = [[zero] * r for _ in range(r)]
        for j in range(r - 1):
            mat[j + 1][j] = BiPoly.one(q)
        mat[0][r - 1] = BiPoly.t_minus_theta(q) * inv_top
        for i in range(1, r):
            mat[i][r - 1] = BiPoly(q, [-(a[i - 1] * inv_top)])
        return cls(q, mat)

    # -- tensor operations ----------------------------------------------------

    def tensor(self, other):
        if self.q != other.q:
            raise ValueError("tensor over different base fields")
        a, b = self.matrix, other.matrix
        out = []
        for i1 in range(self.r):
            for i2 in range(other.r):
                out.append(
                    [a[i1][j1] * b[i2][j2] for j1 in range(self.r) for j2 in range(other.r)]
                )
        return SigmaModule(self.q, out)

    def sym2(self):
        """Symmetric square on the basis {m_i m_j, i <= j}."""
        r = self.r
        pairs = [(i, j) for i in range(r) for j in range(i, r)]
        idx = {p: k for k, p in enumerate(pairs)}
        zero = BiPoly.zero(self.q)
        out = [[zero] * len(pairs) for _ in range(len(pairs))]
        a = self.matrix
        for (j1, j2), col in idx.items():
            # sigma(m_j1 m_j2) = sum_{i1,i2} a[i1][j1] a[i2][j2] m_i1 m_i2
            for i1 in range(r):
                for i2 in range(r):
                    row = idx[(i1, i2) if i1 <= i2 else (i2, i1)]
                    out[row][col] = out[row][col] + a[i1][j1] * a[i2][j2]
        return SigmaModule(self.q, out)

    def det_module(self):
        d = BiPoly.t_minus_theta(self.q) ** self.n * self.alpha
        return SigmaModule(self.q, [[d]])

    def direct_sum(self, other):
        if self.q != other.q:
            raise ValueError("direct sum over different base fields")
        zero = BiPoly.zero(self.q)
        out = []
        for i, row in enumerate(self.matrix):
            out.append(list(row) + [zero] * other.r)
        for row in other.matrix:
            out.append([zero] * self.r + list(row))
        return SigmaModule(self.q, out)

    def dual_twist(self):
        """The effective motive M^dual tensor C^n, matrix alpha^{-1} adj(Sigma)^T."""
        adj = bipoly.adjugate([list(row) for row in self.matrix])
        ainv = pow(self.alpha, self.q - 2, self.q)
        return SigmaModule(self.q, [[adj[j][i] * ainv for j in range(self.r)] for i in range(self.r)])

    # -- reduction data --------------------------------------------------------

    def packed(self):
        """(num, den, r, st) arrays for the charpoly kernels.

        num[i][j][k] is the x-coefficient int list of t^k in denominator-cleared
        entry (i,j); den is the int list of the common denominator in x.
        """
        if self._packed is not None:
            return self._packed
        den = bipoly.common_denominator(e for row in self.matrix for e in row)
        num = []
        st = 0
        for row in self.matrix:
            nrow = []
            for e in row:
                ecoeffs = []
                for c in e.coeffs:
                    p = c.num * (den // c.den)
                    ecoeffs.append(list(p.coeffs))
                nrow.append(ecoeffs)
                st = max(st, len(ecoeffs))
            num.append(nrow)
        packed = (num, list(den.coeffs), self.r, st)
        object.__setattr__(self, "_packed", packed)
        return packed

    def euler_factor(self, place):
        num, den, r, st = self.packed()
        (cs,) = kernels.charpolys(self.q, place.d, [place.encoding()], num, den, r, st)
        return EulerFactor(place, [Poly(self.q, "t", c) for c in cs])

    # -- slopes -----------------------------------------------------------------

    def newton_slopes(self):
        """Valuations (val = -deg_t) of the eigenvalues of Sigma over K((t^{-1})).

        Newton polygon of det(X I - Sigma).  Raises NotFinitelyGenerated when
        some slope is >= 0 (the Euler product for L(M^dual, 0) then diverges).
        """
        slopes = self.slopes_raw()
        if any(s >= 0 for s in slopes):
            raise NotFinitelyGenerated(f"nonnegative Newton slope in {slopes}")
        return slopes

    def slopes_raw(self):
        """newton_slopes without the negativity requirement, sorted ascending."""
        r = self.r
        rows = [list(row) for row in self.matrix]
        # char poly X^r + a_1 X^{r-1} + ... + a_r, a_j = (-1)^j e_j(Sigma)
        pts = [(0, 0)]
        for j in range(1, r + 1):
            ej = BiPoly.zero(self.q)
            for subset in itertools.combinations(range(r), j):
                ej = ej + bipoly.det([[rows[a][b] for b in subset] for a in subset])
            if not ej.is_zero():
                pts.append((j, -ej.t_degree))
        # lower convex hull from (0,0) to (r, val(a_r)); a_r = +-det != 0
        hull = [pts[0]]
        for p in pts[1:]:
            while len(hull) >= 2:
                (x1, y1), (x2, y2) = hull[-2], hull[-1]
                if (y2 - y1) * (p[0] - x1) >= (p[1] - y1) * (x2 - x1):
                    hull.pop()
                else:
                    break
            hull.append(p)
        slopes = []
        for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
            s = Fraction(y2 - y1, x2 - x1)
            slopes.extend([s] * (x2 - x1))
        return sorted(slopes[:r])

    def __eq__(self, other):
        return isinstance(other, SigmaModule) and self.q == other.q and self.matrix == other.matrix

    def __repr__(self):
        rows = "; ".join(", ".join(str(e) for e in row) for row in self.matrix)
        return f"SigmaModule(q={self.q}, r={self.r}, [{rows}])"


class EulerFactor:
    """P_v(X) = 1 + c_1 X + ... + c_r X^r with c_j in F_q[t]."""

    __slots__ = ("place", "coeffs")

    def __init__(self, place, coeffs):
        object.__setattr__(self, "place", place)
        object.__setattr__(self, "coeffs", tuple(coeffs))

    def __setattr__(self, *a):
        raise AttributeError("EulerFactor is immutable")

    @property
    def q(self):
        return self.place.q

    def degree(self):
        d = len(self.coeffs)
        while d and self.coeffs[d - 1].is_zero():
            d -= 1
        return d

    def evaluate(self, x):
        """P_v at a LaurentSeries x, e.g. x = Nv^{-n}."""
        from .series import LaurentSeries, poly_to_series

        acc = LaurentSeries.one(x.q, x.var, x.prec)
        xp = None
        for c in self.coeffs:
            xp = x if xp is None else xp * x
            if not c.is_zero():
                acc = acc + poly_to_series(c) * xp
        return acc

    def as_tuples(self):
        return tuple(tuple(c.coeffs) for c in self.coeffs)

    def __eq__(self, other):
        return isinstance(other, EulerFactor) and self.as_tuples() == other.as_tuples()

    def __str__(self):
        parts = ["1"]
        for j, c in enumerate(self.coeffs, start=1):
            if c.is_zero():
                continue
            xs = "X" if j == 1 else f"X^{j}"
            cs = str(c)
            if len([v for v in c.coeffs if v]) > 1:
                cs = f"({cs})"
            parts.append(xs if cs == "1" else f"{cs}*{xs}")
        return " + ".join(parts)

    def __repr__(self):
        return f"EulerFactor({self.place}, {self})"


def parse_motive(q, config):
    """Build a SigmaModule from the config schema.

    config: {"kind": "carlitz", "power": n} | {"kind": "drinfeld", "coeffs": [...]}
    | {"kind": "matrix", "sigma": [[...]]}, entries in BiPoly text form, plus an
    optional "wrappers" list among {"tensor_carlitz", "sym2", "det", "dual_twist"}
    applied in order.
    """
    kind = config.get("kind")
    if kind == "carlitz":
        m = SigmaModule.carlitz_power(q, int(config.get("power", 1)))
    elif kind == "drinfeld":
        coeffs = [RationalFn.parse(q, str(c), "x") for c in config["coeffs"]]
        m = SigmaModule.drinfeld(q, coeffs)
    elif kind == "matrix":
        m = SigmaModule(q, [[BiPoly.parse(q, str(e)) for e in row] for row in config["sigma"]])
    else:
        raise ValueError(f"unknown motive kind {kind!r}")
    for w in config.get("wrappers", []):
        if w == "tensor_carlitz":
            m = m.tensor(SigmaModule.carlitz(q))
        elif w == "sym2":
            m = m.sym2()
        elif w == "det":
            m = m.det_module()
        elif w == "dual_twist":
            m = m.dual_twist()
        else:
            raise ValueError(f"unknown wrapper {w!r}")
    return m
