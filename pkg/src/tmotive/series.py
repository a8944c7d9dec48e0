"""Truncated Laurent series in the inverse of a named variable, with explicit precision.

A series over F_q in the variable ``v`` (``'t'`` or ``'x'`` = theta) is
stored as a leading exponent ``v0`` and a dense run of coefficients for
exponents v0, v0-1, ...; ``prec = N`` means every coefficient at exponent
> -N is exact and nothing is claimed at exponents <= -N ("known modulo
v^-N").  Exact values (e.g. polynomials) carry ``prec = math.inf``.

Arithmetic never claims more precision than the operands justify:

* add/sub: min precision;
* mul:     N' = min(Na - val(b), Nb - val(a));
* inv:     N' = N + v0 + min(v0, 0)  (conservative for positive valuation).
"""

from __future__ import annotations

import math
import re

from .errors import ZeroLeadingTerm
from .gfpoly import Poly


class LaurentSeries:
    __slots__ = ("q", "var", "v0", "coeffs", "prec")

    def __init__(self, q, var, v0, coeffs, prec, *, _norm=False):
        if not _norm:
            coeffs = [c % q for c in coeffs]
            # strip leading zeros
            i = 0
            while i < len(coeffs) and coeffs[i] == 0:
                i += 1
            coeffs = coeffs[i:]
            v0 = v0 - i if coeffs else None
            if coeffs is not None and v0 is not None and prec is not math.inf:
                # drop anything at exponent <= -prec
                keep = v0 + prec  # exponents v0 .. v0-keep+1 are > -prec
                if keep <= 0:
                    coeffs, v0 = [], None
                else:
                    coeffs = coeffs[:keep]
            # re-strip trailing zeros for a tidy canonical form
            while coeffs and coeffs[-1] == 0:
                coeffs.pop()
            if not coeffs:
                v0 = None
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "var", var)
        object.__setattr__(self, "v0", v0)
        object.__setattr__(self, "coeffs", tuple(coeffs))
        object.__setattr__(self, "prec", prec)

    def __setattr__(self, *a):
        raise AttributeError("LaurentSeries is immutable")

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, q, var, prec=math.inf):
        return cls(q, var, None, (), prec, _norm=True)

    @classmethod
    def one(cls, q, var, prec=math.inf):
        return cls(q, var, 0, (1,), prec)

    @classmethod
    def constant(cls, q, var, c, prec=math.inf):
        return cls(q, var, 0, (c,), prec)

    @classmethod
    def monomial(cls, q, var, e, c=1, prec=math.inf):
        return cls(q, var, e, (c,), prec)

    @classmethod
    def from_poly(cls, p, prec=math.inf):
        return cls(p.q, p.var, p.degree if p.coeffs else None, tuple(reversed(p.coeffs)), prec)

    # -- queries ----------------------------------------------------------

    def is_zero(self):
        """True when indistinguishable from 0 at this precision."""
        return not self.coeffs

    def is_exact_zero(self):
        return not self.coeffs and self.prec is math.inf

    @property
    def valuation(self):
        """Leading exponent, or None for (0 mod precision)."""
        return self.v0

    def _val_floor(self):
        # lower bound usable in precision bookkeeping
        return self.v0 if self.coeffs else (-self.prec if self.prec is not math.inf else math.inf)

    def coeff(self, e):
        if self.prec is not math.inf and e <= -self.prec:
            raise ValueError(f"coefficient at exponent {e} is below precision O({self.var}^-{self.prec})")
        if self.v0 is None:
            return 0
        i = self.v0 - e
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def known_exponents(self):
        lo = 1 - self.prec if self.prec is not math.inf else (self.v0 - len(self.coeffs) + 1 if self.coeffs else 0)
        hi = self.v0 if self.v0 is not None else lo - 1
        return range(hi, lo - 1, -1)

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other):
        if self.q != other.q or self.var != other.var:
            raise ValueError("mixed series rings")

    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentSeries.constant(self.q, self.var, other)
        self._check(other)
        prec = min(self.prec, other.prec)
        if self.is_zero():
            return other.truncate(prec)
        if other.is_zero():
            return self.truncate(prec)
        hi = max(self.v0, other.v0)
        lo = min(self.v0 - len(self.coeffs) + 1, other.v0 - len(other.coeffs) + 1)
        out = [0] * (hi - lo + 1)
        for s in (self, other):
            base = hi - s.v0
            for i, c in enumerate(s.coeffs):
                out[base + i] = (out[base + i] + c) % self.q
        return LaurentSeries(self.q, self.var, hi, out, prec)

    __radd__ = __add__

    def __neg__(self):
        q = self.q
        return LaurentSeries(q, self.var, self.v0, tuple((-c) % q for c in self.coeffs), self.prec, _norm=True)

    def __sub__(self, other):
        if isinstance(other, int):
            other = LaurentSeries.constant(self.q, self.var, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            c = other % self.q
            if c == 0:
                return LaurentSeries.zero(self.q, self.var, self.prec)
            return LaurentSeries(
                self.q, self.var, self.v0,
                tuple(a * c % self.q for a in self.coeffs), self.prec, _norm=True)
        self._check(other)
        if self.is_exact_zero() or other.is_exact_zero():
            return LaurentSeries.zero(self.q, self.var)
        # precision of the product
        na = self.prec + (0 if other._val_floor() is math.inf else -other._val_floor()) \
            if self.prec is not math.inf else math.inf
        nb = other.prec + (0 if self._val_floor() is math.inf else -self._val_floor()) \
            if other.prec is not math.inf else math.inf
        prec = min(na, nb)
        if self.is_zero() or other.is_zero():
            return LaurentSeries.zero(self.q, self.var, prec)
        v0 = self.v0 + other.v0
        length = len(self.coeffs) + len(other.coeffs) - 1
        if prec is not math.inf:
            length = min(length, v0 + prec)
        out = [0] * length
        q = self.q
        for i, a in enumerate(self.coeffs):
            if a and i < length:
                top = min(len(other.coeffs), length - i)
                for j in range(top):
                    out[i + j] += a * other.coeffs[j]
        return LaurentSeries(q, self.var, v0, [c % q for c in out], prec)

    __rmul__ = __mul__

    def inverse(self):
        """Multiplicative inverse; requires a nonzero leading term and finite data."""
        if self.is_zero():
            raise ZeroLeadingTerm("series is 0 at its precision; cannot invert")
        if self.prec is math.inf and len(self.coeffs) > 1:
            raise ValueError("cannot invert an exact multi-term series to infinite precision; truncate first")
        q, v0 = self.q, self.v0
        if self.prec is math.inf:  # monomial
            c = pow(self.coeffs[0], q - 2, q)
            return LaurentSeries(q, self.var, -v0, (c,), math.inf)
        prec = self.prec + v0 + min(v0, 0)
        n_out = prec + (-v0)  # known coefficients of the result
        if n_out <= 0:
            return LaurentSeries.zero(q, self.var, prec)
        inv_lead = pow(self.coeffs[0], q - 2, q)
        a = self.coeffs
        out = [0] * n_out
        out[0] = inv_lead
        for k in range(1, n_out):
            s = 0
            for j in range(1, min(k, len(a) - 1) + 1):
                s += a[j] * out[k - j]
            out[k] = (-s * inv_lead) % q
        return LaurentSeries(q, self.var, -v0, out, prec)

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        result = LaurentSeries.one(self.q, self.var, math.inf)
        base = self
        first = True
        while e:
            if e & 1:
                result = base if first else result * base
                first = False
            e >>= 1
            if e:
                base = base * base
        return result if not first else LaurentSeries.one(self.q, self.var, self.prec)

    def qpower(self, e=1):
        """The q^e-th power, exact in characteristic p: exponents scale by q^e."""
        if e == 0 or self.is_exact_zero():
            return self
        p = self.q**e
        prec = self.prec if self.prec is math.inf else self.prec * p
        if self.is_zero():
            return LaurentSeries.zero(self.q, self.var, prec)
        out = [0] * ((len(self.coeffs) - 1) * p + 1)
        for i, c in enumerate(self.coeffs):
            out[i * p] = c  # c^(q^e) = c in F_q
        return LaurentSeries(self.q, self.var, self.v0 * p, out, prec)

    def shift(self, k):
        """Multiply by var^k."""
        prec = self.prec if self.prec is math.inf else self.prec - k
        if self.is_zero():
            return LaurentSeries.zero(self.q, self.var, prec)
        return LaurentSeries(self.q, self.var, self.v0 + k, self.coeffs, prec, _norm=True)

    def truncate(self, prec):
        if prec >= self.prec:
            return self
        return LaurentSeries(self.q, self.var, self.v0 if self.coeffs else None, self.coeffs, prec)

    def with_var(self, var):
        """Relabel the variable; coefficient data and precision unchanged."""
        return LaurentSeries(self.q, var, self.v0, self.coeffs, self.prec, _norm=True)

    # -- analysis --------------------------------------------------------------

    def constant_deviation(self):
        """(c, k): nearest constant c in F_q and the positive exponent k of the
        first term deviating from c; k = prec when no deviation is visible."""
        c = self.coeff(0) if (self.prec is math.inf or self.prec > 0) else 0
        dev = self - LaurentSeries.constant(self.q, self.var, c)
        if dev.is_zero():
            return c, dev.prec
        return c, -dev.v0

    def agrees_with(self, other, through):
        """Exact coefficient agreement at every exponent > -through."""
        d = self - other
        return d.is_zero() or d.v0 <= -through

    # -- text form --------------------------------------------------------------

    def __str__(self):
        parts = []
        if self.coeffs:
            for i, c in enumerate(self.coeffs):
                if not c:
                    continue
                e = self.v0 - i
                if e == 0:
                    parts.append(str(c))
                else:
                    v = self.var if e == 1 else f"{self.var}^{e}"
                    parts.append(v if c == 1 else f"{c}*{v}")
        if not parts:
            parts.append("0")
        s = " + ".join(parts)
        if self.prec is not math.inf:
            o = f"O({self.var}^-{self.prec})"
            s = o if s == "0" else f"{s} + {o}"
        return s

    def __repr__(self):
        return f"LaurentSeries({self})"

    def __eq__(self, other):
        return (
            isinstance(other, LaurentSeries)
            and self.q == other.q
            and self.var == other.var
            and self.v0 == other.v0
            and self.coeffs == other.coeffs
            and self.prec == other.prec
        )

    def __hash__(self):
        return hash((self.q, self.var, self.v0, self.coeffs, self.prec))

    @classmethod
    def parse(cls, q, text, var=None):
        text = text.replace(" ", "")
        prec = math.inf
        m = re.search(r"\+?O\(([a-zA-Z])\^(-?\d+)\)$", text)
        if m:
            var = var or m.group(1)
            prec = -int(m.group(2))
            text = text[: m.start()]
        terms = {}
        if text not in ("", "0"):
            # a term's exponent may be negative, so splitting on +/- alone
            # would cut "t^-2" in half; match whole terms instead
            token = re.compile(r"([+-]?)(?:(\d+)\*?)?(?:([a-zA-Z])(?:\^(-?\d+))?)?")
            pos = 0
            while pos < len(text):
                tm = token.match(text, pos)
                if tm is None or tm.end() == pos or (
                    tm.group(2) is None and tm.group(3) is None
                ):
                    raise ValueError(f"cannot parse series at {text[pos:]!r}")
                pos = tm.end()
                c = int(tm.group(2)) if tm.group(2) else 1
                if tm.group(1) == "-":
                    c = -c
                if tm.group(3):
                    var = var or tm.group(3)
                    e = int(tm.group(4)) if tm.group(4) else 1
                else:
                    e = 0
                terms[e] = (terms.get(e, 0) + c) % q
        if var is None:
            var = "x"
        if not terms:
            return cls.zero(q, var, prec)
        hi = max(terms)
        lo = min(terms)
        coeffs = [terms.get(e, 0) for e in range(hi, lo - 1, -1)]
        return cls(q, var, hi, coeffs, prec)


def laurent_inv(s):
    """Inverse of a series with a nonzero leading term within its precision."""
    return s.inverse()


def substitute_t_theta(s):
    """Relabel a series in t as a series in theta (printed 'x'); t = theta."""
    if s.var != "t":
        raise ValueError("substitute_t_theta expects a series in t")
    return s.with_var("x")


def poly_to_series(p, prec=math.inf):
    return LaurentSeries.from_poly(p, prec)


def rational_to_laurent(r, n_prec):
    """Expand num/den in F_q((1/theta)) with all exponents > -n_prec exact."""
    num, den = r.num, r.den
    if num.is_zero():
        return LaurentSeries.zero(r.q, r.var, n_prec)
    q = r.q
    v0 = num.degree - den.degree
    count = v0 + n_prec  # exponents v0 .. -n_prec+1
    if count <= 0:
        return LaurentSeries.zero(q, r.var, n_prec)
    a = list(reversed(num.coeffs))  # descending
    b = list(reversed(den.coeffs))
    inv_lead = pow(b[0], q - 2, q)
    out = []
    # synthetic long division with an implicit infinite tail of zeros
    work = a + [0] * max(count - len(a), 0)
    for k in range(count):
        c = work[k] * inv_lead % q
        out.append(c)
        if c:
            for j in range(1, len(b)):
                if k + j < len(work):
                    work[k + j] = (work[k + j] - c * b[j]) % q
    return LaurentSeries(q, r.var, v0, out, n_prec)
