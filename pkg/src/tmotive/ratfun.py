"""Rational functions over F_q[theta], kept in lowest terms with monic denominator."""

from __future__ import annotations

from .gfpoly import Poly, poly_gcd


class RationalFn:
    """num/den with gcd(num, den) = 1 and den monic nonzero."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, _reduced=False):
        if den is None:
            den = Poly.one(num.q, num.var)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not _reduced:
            g = poly_gcd(num, den)
            if not g.is_one():
                num, den = num // g, den // g
            if not den.is_monic():
                c = pow(den.lead, den.q - 2, den.q)
                num, den = num * c, den * c
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *a):
        raise AttributeError("RationalFn is immutable")

    @classmethod
    def zero(cls, q, var="x"):
        return cls(Poly.zero(q, var), Poly.one(q, var), _reduced=True)

    @classmethod
    def one(cls, q, var="x"):
        return cls(Poly.one(q, var), Poly.one(q, var), _reduced=True)

    @classmethod
    def constant(cls, q, c, var="x"):
        return cls(Poly.constant(q, var, c), Poly.one(q, var), _reduced=True)

    @classmethod
    def from_poly(cls, p):
        return cls(p, Poly.one(p.q, p.var), _reduced=True)

    @property
    def q(self):
        return self.num.q

    @property
    def var(self):
        return self.num.var

    def is_zero(self):
        return self.num.is_zero()

    def is_one(self):
        return self.num.is_one() and self.den.is_one()

    def is_polynomial(self):
        return self.den.is_one()

    def is_constant(self):
        return self.num.is_constant() and self.den.is_one()

    def valuation_at_infinity(self):
        """deg(den) - deg(num); the theta^{-1}-adic valuation.  None for 0."""
        if self.is_zero():
            return None
        return self.den.degree - self.num.degree

    def _coerce(self, other):
        if isinstance(other, RationalFn):
            return other
        if isinstance(other, Poly):
            return RationalFn.from_poly(other)
        if isinstance(other, int):
            return RationalFn.constant(self.q, other, self.var)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFn(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFn(-self.num, self.den, _reduced=True)

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
        # cross-reduce first to keep intermediate degrees down
        a = RationalFn(self.num, other.den)
        b = RationalFn(other.num, self.den)
        return RationalFn(a.num * b.num, a.den * b.den, _reduced=True)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RationalFn(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        return RationalFn(self.num**e, self.den**e, _reduced=True)

    def qpower(self, e=1):
        """self**(q**e), cheap via coefficient spreading."""
        return RationalFn(self.num.qpower(e), self.den.qpower(e), _reduced=True)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __str__(self):
        if self.den.is_one():
            return str(self.num)
        num = str(self.num)
        if len(self.num.coeffs) - self.num.coeffs.count(0) > 1:
            num = f"({num})"
        den = str(self.den)
        if len(self.den.coeffs) - self.den.coeffs.count(0) > 1:
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self):
        return f"RationalFn({self})"

    @classmethod
    def parse(cls, q, text, var=None):
        text = text.strip()
        if "/" in text:
            num, den = text.split("/", 1)
            return cls(
                Poly.parse(q, num.strip().strip("()"), var),
                Poly.parse(q, den.strip().strip("()"), var),
            )
        return cls.from_poly(Poly.parse(q, text, var))
