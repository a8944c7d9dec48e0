"""Dense polynomial arithmetic over prime fields F_q.

Field elements are plain ints in ``range(q)``.  A :class:`Poly` is an
immutable dense polynomial carrying a variable tag: ``'t'`` for the
coefficient ring A = F_q[t] and ``'x'`` for the base ring F_q[theta]
(theta is printed as ``x`` in all text formats).

Binary polynomials get a bit-packed fast path for multiplication,
division and gcd; all other characteristics use schoolbook arithmetic,
which is plenty at the degrees this package works with (well under 10^4).
"""

from __future__ import annotations

import re

from .errors import NotInvertible, NotIrreducible

NEG_INF = float("-inf")

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def is_prime(n):
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False
    d = 49
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n):
    """Distinct prime factors of a positive integer."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


class PrimeField:
    """The field F_q for a prime q, acting on plain ints in range(q)."""

    __slots__ = ("q",)

    def __init__(self, q):
        if not is_prime(q):
            raise ValueError(f"q must be prime, got {q}")
        self.q = q

    def add(self, a, b):
        return (a + b) % self.q

    def sub(self, a, b):
        return (a - b) % self.q

    def mul(self, a, b):
        return (a * b) % self.q

    def neg(self, a):
        return (-a) % self.q

    def inv(self, a):
        a %= self.q
        if a == 0:
            raise NotInvertible("0 has no inverse in F_q")
        return pow(a, self.q - 2, self.q)

    def pow(self, a, e):
        if e < 0:
            return pow(self.inv(a), -e, self.q)
        return pow(a, e, self.q)

    def elements(self):
        return range(self.q)

    def units(self):
        return range(1, self.q)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.q == self.q

    def __hash__(self):
        return hash(("PrimeField", self.q))

    def __repr__(self):
        return f"PrimeField({self.q})"


def _strip(coeffs):
    n = len(coeffs)
    while n and coeffs[n - 1] == 0:
        n -= 1
    return coeffs[:n]


class Poly:
    """Immutable dense polynomial over F_q with no trailing zero coefficients."""

    __slots__ = ("q", "var", "coeffs")

    def __init__(self, q, var, coeffs, *, _norm=False):
        if _norm:
            cs = tuple(coeffs)
        else:
            cs = tuple(_strip([c % q for c in coeffs]))
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "var", var)
        object.__setattr__(self, "coeffs", cs)

    def __setattr__(self, *a):  # immutability guard
        raise AttributeError("Poly is immutable")

    # -- constructors ------------------------------------------------

    @classmethod
    def zero(cls, q, var):
        return cls(q, var, (), _norm=True)

    @classmethod
    def one(cls, q, var):
        return cls(q, var, (1,), _norm=True)

    @classmethod
    def constant(cls, q, var, c):
        c %= q
        return cls(q, var, (c,) if c else (), _norm=True)

    @classmethod
    def gen(cls, q, var):
        return cls(q, var, (0, 1), _norm=True)

    @classmethod
    def monomial(cls, q, var, k, c=1):
        c %= q
        if c == 0:
            return cls.zero(q, var)
        return cls(q, var, (0,) * k + (c,), _norm=True)

    # -- basic queries -----------------------------------------------

    @property
    def degree(self):
        """Degree, with -inf for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self):
        return not self.coeffs

    def is_one(self):
        return self.coeffs == (1,)

    def is_constant(self):
        return len(self.coeffs) <= 1

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == 1

    @property
    def lead(self):
        return self.coeffs[-1] if self.coeffs else 0

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def constant_term(self):
        return self[0]

    # -- ring structure ----------------------------------------------

    def _check(self, other):
        if self.q != other.q or self.var != other.var:
            raise ValueError("mixed polynomial rings")

    def __add__(self, other):
        if isinstance(other, int):
            other = Poly.constant(self.q, self.var, other)
        self._check(other)
        a, b, q = self.coeffs, other.coeffs, self.q
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = (out[i] + c) % q
        return Poly(self.q, self.var, _strip(out), _norm=True)

    __radd__ = __add__

    def __neg__(self):
        q = self.q
        return Poly(q, self.var, tuple((-c) % q for c in self.coeffs), _norm=True)

    def __sub__(self, other):
        if isinstance(other, int):
            other = Poly.constant(self.q, self.var, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            other %= self.q
            if other == 0:
                return Poly.zero(self.q, self.var)
            if other == 1:
                return self
            return Poly(
                self.q, self.var, tuple(c * other % self.q for c in self.coeffs), _norm=True
            )
        self._check(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly.zero(self.q, self.var)
        q = self.q
        if q == 2 and len(a) + len(b) > 64:
            return Poly(self.q, self.var, _int_to_bits(_clmul(_bits_to_int(a), _bits_to_int(b))), _norm=True)
        out = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
        return Poly(q, self.var, tuple(c % q for c in out))

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.one(self.q, self.var)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other):
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q = self.q
        if q == 2:
            qt, rm = _divmod2(_bits_to_int(self.coeffs), _bits_to_int(other.coeffs))
            return (
                Poly(q, self.var, _int_to_bits(qt), _norm=True),
                Poly(q, self.var, _int_to_bits(rm), _norm=True),
            )
        rem = list(self.coeffs)
        d = other.degree
        inv_lead = pow(other.coeffs[-1], q - 2, q)
        quo = [0] * max(len(rem) - d, 0)
        for i in range(len(rem) - 1, d - 1, -1):
            c = rem[i] % q
            if c:
                f = c * inv_lead % q
                quo[i - d] = f
                for j, cb in enumerate(other.coeffs):
                    rem[i - d + j] = (rem[i - d + j] - f * cb) % q
        return (
            Poly(q, self.var, _strip(quo), _norm=True),
            Poly(q, self.var, _strip([c % q for c in rem]), _norm=True),
        )

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __eq__(self, other):
        return (
            isinstance(other, Poly)
            and self.q == other.q
            and self.var == other.var
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.q, self.var, self.coeffs))

    # -- extras --------------------------------------------------------

    def monic(self):
        if self.is_zero() or self.coeffs[-1] == 1:
            return self
        return self * pow(self.coeffs[-1], self.q - 2, self.q)

    def shift(self, k):
        """Multiply by var^k (k >= 0)."""
        if self.is_zero():
            return self
        return Poly(self.q, self.var, (0,) * k + self.coeffs, _norm=True)

    def evaluate(self, c):
        """Evaluate at an F_q point (Horner)."""
        q = self.q
        acc = 0
        for a in reversed(self.coeffs):
            acc = (acc * c + a) % q
        return acc

    def qpower(self, e=1):
        """self**(q**e), computed by spreading coefficients: f(x)^{q^e} = f(x^{q^e})."""
        if e == 0 or self.is_constant():
            return self
        step = self.q**e
        out = [0] * ((len(self.coeffs) - 1) * step + 1)
        for i, c in enumerate(self.coeffs):
            out[i * step] = c
        return Poly(self.q, self.var, tuple(out), _norm=True)

    def with_var(self, var):
        return Poly(self.q, var, self.coeffs, _norm=True)

    def pow_mod(self, e, m):
        result = Poly.one(self.q, self.var)
        base = self % m
        while e:
            if e & 1:
                result = result * base % m
            base = base * base % m
            e >>= 1
        return result

    # -- text format -----------------------------------------------------

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                v = self.var if i == 1 else f"{self.var}^{i}"
                parts.append(v if c == 1 else f"{c}*{v}")
        return "+".join(parts)

    def __repr__(self):
        return f"Poly(q={self.q}, {self.var!r}, {self})"

    @classmethod
    def parse(cls, q, text, var=None):
        """Parse the human text form, e.g. "t^2+t+1" or "2*x^3-x".

        The variable letter is inferred from the text unless given; bare
        numbers parse as constants.
        """
        text = text.replace(" ", "")
        if not text:
            raise ValueError("empty polynomial text")
        letters = set(re.findall(r"[a-zA-Z]", text))
        if len(letters) > 1:
            raise ValueError(f"more than one variable letter in {text!r}")
        found = letters.pop() if letters else None
        if var is None:
            var = found if found is not None else "x"
        elif found is not None and found != var:
            raise ValueError(f"expected variable {var!r}, found {found!r}")
        term_re = re.compile(r"(\d+)?\*?(?:([a-zA-Z])(?:\^(\d+))?)?")
        coeffs = {}
        for sign, body in re.findall(r"([+-]?)([^+-]+)", text):
            m = term_re.fullmatch(body)
            if m is None or (m.group(1) is None and m.group(2) is None):
                raise ValueError(f"cannot parse term {body!r}")
            c = int(m.group(1)) if m.group(1) else 1
            e = (int(m.group(3)) if m.group(3) else 1) if m.group(2) else 0
            if sign == "-":
                c = -c
            coeffs[e] = coeffs.get(e, 0) + c
        out = [0] * (max(coeffs) + 1)
        for e, c in coeffs.items():
            out[e] = c % q
        return cls(q, var, out)


# -- gcd machinery ------------------------------------------------------


def poly_gcd(a, b):
    """Monic gcd."""
    a._check(b)
    if a.q == 2:
        x, y = _bits_to_int(a.coeffs), _bits_to_int(b.coeffs)
        while y:
            x, y = y, _divmod2(x, y)[1]
        return Poly(2, a.var, _int_to_bits(x), _norm=True)
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a, b):
    """Extended gcd: returns (g, u, v) with u*a + v*b = g, g monic."""
    q, var = a.q, a.var
    r0, r1 = a, b
    s0, s1 = Poly.one(q, var), Poly.zero(q, var)
    t0, t1 = Poly.zero(q, var), Poly.one(q, var)
    while not r1.is_zero():
        qt, rm = divmod(r0, r1)
        r0, r1 = r1, rm
        s0, s1 = s1, s0 - qt * s1
        t0, t1 = t1, t0 - qt * t1
    if r0.is_zero():
        return r0, s0, t0
    c = pow(r0.lead, q - 2, q)
    return r0 * c, s0 * c, t0 * c


def poly_inv_mod(a, v):
    """Inverse of a modulo a monic irreducible v.

    Irreducibility of v is checked lazily (on first failure to invert a
    nonzero residue it is re-checked to give the more precise error).
    """
    a = a % v
    if a.is_zero():
        raise NotInvertible("residue class of 0 has no inverse")
    g, u, _ = poly_xgcd(a, v)
    if not g.is_one():
        if not is_irreducible(v):
            raise NotIrreducible(f"modulus {v} is not irreducible")
        raise NotInvertible(f"{a} not invertible modulo {v}")
    return u % v


def is_irreducible(v):
    """Rabin test: v irreducible iff x^(q^d) == x mod v and
    gcd(x^(q^(d/p)) - x, v) = 1 for every prime p dividing d."""
    d = v.degree
    if d is NEG_INF or d == 0:
        return False
    if d == 1:
        return True
    q = v.q
    x = Poly.gen(q, v.var)
    for p in prime_factors(d):
        h = x.pow_mod(q ** (d // p), v) - x
        if not poly_gcd(h % v, v).is_one():
            return False
    return x.pow_mod(q**d, v) == x % v


# -- bit-packed helpers for F_2 -------------------------------------------


def _bits_to_int(coeffs):
    n = 0
    for i, c in enumerate(coeffs):
        if c:
            n |= 1 << i
    return n


def _int_to_bits(n):
    return tuple((n >> i) & 1 for i in range(n.bit_length()))


def _clmul(a, b):
    """Carry-less product of bit-packed F_2 polynomials."""
    if a.bit_length() > b.bit_length():
        a, b = b, a
    out = 0
    while a:
        low = a & -a
        out ^= b << (low.bit_length() - 1)
        a ^= low
    return out


def _divmod2(a, b):
    """Bit-packed F_2 polynomial division."""
    db = b.bit_length() - 1
    quo = 0
    while a.bit_length() - 1 >= db and a:
        sh = a.bit_length() - 1 - db
        quo |= 1 << sh
        a ^= b << sh
    return quo, a
