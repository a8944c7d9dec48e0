"""Polynomials in t with coefficients in F_q(x), x standing for theta.

Sigma-matrix entries live here.  Good models have entries in F_q[x][t];
rational coefficients are allowed so that motives like the bad-reduction
Drinfeld module t -> theta + theta^{-1} tau + tau^2 can be represented,
with denominators cleared only when reducing at a place.
"""

from __future__ import annotations

from .gfpoly import Poly, poly_gcd
from .ratfun import RationalFn


def _strip(coeffs):
    n = len(coeffs)
    while n and coeffs[n - 1].is_zero():
        n -= 1
    return coeffs[:n]


class BiPoly:
    """sum_k c_k(x) t^k with c_k in F_q(x); coeffs little-endian in t."""

    __slots__ = ("q", "coeffs")

    def __init__(self, q, coeffs, *, _norm=False):
        if not _norm:
            coeffs = _strip([self._lift(q, c) for c in coeffs])
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "coeffs", tuple(coeffs))

    def __setattr__(self, *a):
        raise AttributeError("BiPoly is immutable")

    @staticmethod
    def _lift(q, c):
        if isinstance(c, RationalFn):
            return c
        if isinstance(c, Poly):
            return RationalFn.from_poly(c if c.var == "x" else c.with_var("x"))
        if isinstance(c, int):
            return RationalFn.constant(q, c)
        if isinstance(c, str):
            return RationalFn.parse(q, c, "x")
        raise TypeError(f"cannot use {type(c).__name__} as a coefficient")

    @classmethod
    def zero(cls, q):
        return cls(q, (), _norm=True)

    @classmethod
    def one(cls, q):
        return cls(q, (RationalFn.one(q),), _norm=True)

    @classmethod
    def constant(cls, q, c):
        return cls(q, [c])

    @classmethod
    def t_gen(cls, q):
        return cls(q, [0, 1])

    @classmethod
    def theta_gen(cls, q):
        return cls(q, [Poly.gen(q, "x")])

    @classmethod
    def t_minus_theta(cls, q):
        return cls(q, [-Poly.gen(q, "x"), Poly.one(q, "x")])

    @classmethod
    def from_t_poly(cls, p):
        """Poly in t -> BiPoly with constant x-coefficients."""
        return cls(p.q, [RationalFn.constant(p.q, c) for c in p.coeffs])

    @property
    def t_degree(self):
        return len(self.coeffs) - 1 if self.coeffs else float("-inf")

    def is_zero(self):
        return not self.coeffs

    def is_one(self):
        return len(self.coeffs) == 1 and self.coeffs[0].is_one()

    def is_integral(self):
        """True when every coefficient lies in F_q[x]."""
        return all(c.is_polynomial() for c in self.coeffs)

    def coeff(self, k):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return RationalFn.zero(self.q)

    def _coerce(self, other):
        if isinstance(other, BiPoly):
            return other
        if isinstance(other, (RationalFn, Poly, int)):
            return BiPoly(self.q, [other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return BiPoly(self.q, _strip(out), _norm=True)

    __radd__ = __add__

    def __neg__(self):
        return BiPoly(self.q, tuple(-c for c in self.coeffs), _norm=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return BiPoly.zero(self.q)
        out = [RationalFn.zero(self.q) for _ in range(len(self.coeffs) + len(other.coeffs) - 1)]
        for i, a in enumerate(self.coeffs):
            if not a.is_zero():
                for j, b in enumerate(other.coeffs):
                    if not b.is_zero():
                        out[i + j] = out[i + j] + a * b
        return BiPoly(self.q, _strip(out), _norm=True)

    __rmul__ = __mul__

    def __pow__(self, e):
        result = BiPoly.one(self.q)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def qpower(self, e=1):
        """Apply x -> x^(q^e) to every coefficient (Frobenius twist)."""
        return BiPoly(self.q, tuple(c.qpower(e) for c in self.coeffs), _norm=True)

    def evaluate_theta(self, val):
        """Substitute a value for x; returns a Poly in t (val: constant int)."""
        coeffs = []
        for c in self.coeffs:
            d = c.den.evaluate(val)
            if d == 0:
                raise ZeroDivisionError("denominator vanishes at substitution point")
            coeffs.append(c.num.evaluate(val) * pow(d, self.q - 2, self.q) % self.q)
        return Poly(self.q, "t", coeffs)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.q == other.q and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.q, self.coeffs))

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c.is_zero():
                continue
            tpart = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            if c.is_one() and tpart:
                parts.append(tpart)
            else:
                cs = str(c)
                if ("+" in cs and not cs.startswith("(")) and tpart:
                    cs = f"({cs})"
                parts.append(f"{cs}*{tpart}" if tpart else cs)
        return "+".join(parts)

    def __repr__(self):
        return f"BiPoly({self})"

    @classmethod
    def parse(cls, q, text):
        """Parse sums of monomial terms like "t^2+t*x+x^2" or "2*t^3*x".

        A term is '*'-separated factors: an integer, t^k, x^k, or a rational
        x-coefficient like "1/x" or "(x+1)/(x^2+1)".
        """
        text = text.strip().replace(" ", "")
        if not text or text == "0":
            return cls.zero(q)
        # split into signed terms at top-level +/- only
        terms = []
        depth = 0
        cur = ""
        for ch in text:
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            if ch in "+-" and depth == 0 and cur:
                terms.append(cur)
                cur = ch if ch == "-" else ""
            else:
                cur += "" if (ch == "+" and depth == 0 and not cur) else ch
        if cur:
            terms.append(cur)
        total = cls.zero(q)
        for term in terms:
            sign = 1
            while term.startswith("-"):
                sign = -sign
                term = term[1:]
            if not term:
                raise ValueError(f"dangling sign in {text!r}")
            tdeg = 0
            coef = RationalFn.constant(q, sign % q)
            for factor in term.split("*"):
                if not factor:
                    raise ValueError(f"empty factor in term {term!r}")
                if factor[0] == "t":
                    tdeg += 1 if factor == "t" else int(factor[2:])
                else:
                    coef = coef * RationalFn.parse(q, factor, "x")
            total = total + cls(q, [RationalFn.zero(q)] * tdeg + [coef])
        return total


def common_denominator(entries):
    """Monic lcm in F_q[x] of the denominators of an iterable of BiPoly."""
    first = None
    den = None
    for b in entries:
        for c in b.coeffs:
            if first is None:
                first = c
                den = Poly.one(c.q, "x")
            if not c.den.is_one():
                g = poly_gcd(den, c.den)
                den = (den // g) * c.den
    if den is None:
        raise ValueError("no entries")
    return den


def det(rows):
    """Determinant of a square matrix of BiPoly by cofactor expansion."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    q = rows[0][0].q
    acc = BiPoly.zero(q)
    for j in range(n):
        entry = rows[0][j]
        if entry.is_zero():
            continue
        minor = [[row[k] for k in range(n) if k != j] for row in rows[1:]]
        term = entry * det(minor)
        acc = acc + (-term if j % 2 else term)
    return acc


def adjugate(rows):
    """adj(A) with A·adj(A) = det(A)·I; cofactor transpose."""
    n = len(rows)
    q = rows[0][0].q
    if n == 1:
        return [[BiPoly.one(q)]]
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[rows[a][b] for b in range(n) if b != j] for a in range(n) if a != i]
            c = det(minor)
            out[j][i] = -c if (i + j) % 2 else c
    return out


def mat_mul(a, b):
    n, m, p = len(a), len(b), len(b[0])
    q = a[0][0].q
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            acc = BiPoly.zero(q)
            for k in range(m):
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out
