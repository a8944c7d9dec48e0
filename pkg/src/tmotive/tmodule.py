"""Abelian t-modules on G_a^d and their exponential / logarithm series.

A t-module is the twisted polynomial phi(t) = A_0 + A_1 tau + ... + A_k tau^k
with d x d matrix coefficients over F_q(theta) and A_0 = theta*I + N, N
nilpotent.  The exponential is the unique tau-power series exp = sum e_i tau^i
with e_0 = I satisfying exp(A_0 z) = phi(t)(exp(z)); its coefficients come out
of a Sylvester-type recursion, the logarithm's out of series inversion.
Evaluation happens on K_infinity points (vectors of Laurent series in theta)
with a convergence certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (
    DegreeExceeded,
    DimensionMismatch,
    Divergent,
    PolicyExhausted,
    SylvesterSingular,
)
from .gfpoly import Poly
from .ratfun import RationalFn
from .series import LaurentSeries, rational_to_laurent

# matrices are tuples of tuples of RationalFn in theta (var "x")


def _lift(q, value):
    if isinstance(value, RationalFn):
        return value
    if isinstance(value, Poly):
        return RationalFn.from_poly(value)
    if isinstance(value, int):
        return RationalFn.constant(q, value)
    if isinstance(value, str):
        return RationalFn.parse(q, value, "x")
    raise TypeError(f"cannot use {value!r} as a matrix entry")


def _ident(q, d):
    one, zero = RationalFn.one(q), RationalFn.zero(q)
    return tuple(tuple(one if i == j else zero for j in range(d)) for i in range(d))


def _mzero(q, d):
    zero = RationalFn.zero(q)
    return tuple(tuple(zero for _ in range(d)) for _ in range(d))


def _madd(a, b):
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def _msub(a, b):
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def _mmul(a, b):
    d = len(b)
    m = len(b[0])
    return tuple(
        tuple(sum((ra[k] * b[k][j] for k in range(d)), RationalFn.zero(ra[0].q)) for j in range(m))
        for ra in a
    )


def _mscale(c, a):
    return tuple(tuple(c * x for x in row) for row in a)


def _mqpow(a, e):
    return tuple(tuple(x.qpower(e) for x in row) for row in a)


def _mat_is_zero(a):
    return all(x.is_zero() for row in a for x in row)


def skew_compose(a, b):
    """Coefficient list of (sum a_i tau^i)(sum b_j tau^j) using tau*M = M^[q]*tau.

    a, b are lists of matrix coefficients; the result has length
    len(a) + len(b) - 1.
    """
    q = a[0][0][0].q
    d = len(a[0])
    out = [_mzero(q, d) for _ in range(len(a) + len(b) - 1)]
    for i, ai in enumerate(a):
        if _mat_is_zero(ai):
            continue
        for j, bj in enumerate(b):
            out[i + j] = _madd(out[i + j], _mmul(ai, _mqpow(bj, i)))
    return out


class TModule:
    """phi(t) = A_0 + A_1 tau + ... + A_k tau^k acting on G_a^d."""

    __slots__ = ("q", "d", "matrices")

    def __init__(self, q, matrices):
        mats = []
        d = None
        for raw in matrices:
            rows = tuple(tuple(_lift(q, e) for e in row) for row in raw)
            if d is None:
                d = len(rows)
            if len(rows) != d or any(len(r) != d for r in rows):
                raise DimensionMismatch("t-module matrices must be square, same size")
            mats.append(rows)
        while len(mats) > 1 and _mat_is_zero(mats[-1]):
            mats.pop()
        if len(mats) < 2:
            raise ValueError("phi(t) needs at least one nonzero tau term")
        theta = RationalFn.from_poly(Poly.gen(q, "x"))
        n = _msub(mats[0], _mscale(theta, _ident(q, d)))
        power = n
        for _ in range(d - 1):
            power = _mmul(power, n)
        if not _mat_is_zero(power):
            raise ValueError("t - theta does not act nilpotently on the Lie algebra")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "matrices", tuple(mats))

    def __setattr__(self, *a):
        raise AttributeError("TModule is immutable")

    @property
    def k(self):
        return len(self.matrices) - 1

    @property
    def lie_matrix(self):
        """The tangent action d(t) = A_0."""
        return self.matrices[0]

    def nilpotent_part(self):
        """N = A_0 - theta*I."""
        theta = RationalFn.from_poly(Poly.gen(self.q, "x"))
        return _msub(self.matrices[0], _mscale(theta, _ident(self.q, self.d)))

    @classmethod
    def carlitz(cls, q):
        return cls(q, [[["x"]], [[1]]])

    @classmethod
    def drinfeld(cls, q, coeffs):
        """Rank-r Drinfeld module phi(t) = theta + a_1 tau + ... + a_r tau^r."""
        return cls(q, [[["x"]]] + [[[c]] for c in coeffs])

    def apply(self, point, precision=None):
        """phi(t) applied to a K_infinity point."""
        if len(point.coords) != self.d:
            raise DimensionMismatch("point dimension does not match the t-module")
        prec = precision if precision is not None else point.precision
        out = None
        for i, mat in enumerate(self.matrices):
            xi = tuple(c.qpower(i) for c in point.coords)
            term = _apply_matrix(self.q, mat, xi, prec)
            out = term if out is None else tuple(a + b for a, b in zip(out, term))
        return KInfPoint(tuple(c.truncate(prec) for c in out))

    def __str__(self):
        parts = []
        for i, mat in enumerate(self.matrices):
            body = "; ".join(", ".join(str(e) for e in row) for row in mat)
            head = "" if i == 0 else (" tau" if i == 1 else f" tau^{i}")
            parts.append(f"[{body}]{head}")
        return " + ".join(parts)


def _coef_shift(mat):
    # largest downward valuation shift a matrix of rational functions can cause
    shift = 0
    for row in mat:
        for e in row:
            v = e.valuation_at_infinity()
            if v is not None and -v > shift:
                shift = -v
    return shift


def _apply_matrix(q, mat, vec, prec):
    shift = _coef_shift(mat)
    w = prec + shift + 1
    rows = []
    for row in mat:
        acc = LaurentSeries.zero(q, "x", math.inf)
        for e, c in zip(row, vec):
            if e.is_zero():
                continue
            acc = acc + rational_to_laurent(e, w) * c
        rows.append(acc)
    return tuple(rows)


@dataclass(frozen=True)
class ExpSeries:
    """exp = sum e_i tau^i with e_0 = I, matrices over F_q(theta)."""

    module: TModule
    coeffs: tuple

    @property
    def order(self):
        return len(self.coeffs) - 1


@dataclass(frozen=True)
class LogSeries:
    """log = sum l_i tau^i, the compositional inverse of an ExpSeries."""

    module: TModule
    coeffs: tuple

    @property
    def order(self):
        return len(self.coeffs) - 1


def exp_coefficients(E, m):
    """First m+1 coefficients of exp_E from the functional equation.

    The tau^i coefficient of exp(A_0 z) = phi(t)(exp(z)) reads
    e_i A_0^[q^i] - A_0 e_i = sum_{j=1..min(i,k)} A_j e_{i-j}^[q^j].
    With A_0 = theta*I + N this is (lambda + T)(e_i) = RHS where
    lambda = theta^{q^i} - theta and T(Y) = Y N^[q^i] - N Y is nilpotent,
    so the solve is the finite geometric series in T/lambda.
    """
    if m < 0:
        raise ValueError("order must be >= 0")
    q, d = E.q, E.d
    n = E.nilpotent_part()
    theta = RationalFn.from_poly(Poly.gen(q, "x"))
    coeffs = [_ident(q, d)]
    for i in range(1, m + 1):
        rhs = _mzero(q, d)
        for j in range(1, min(i, E.k) + 1):
            rhs = _madd(rhs, _mmul(E.matrices[j], _mqpow(coeffs[i - j], j)))
        lam = theta.qpower(i) - theta
        if lam.is_zero():
            raise SylvesterSingular("theta^{q^i} = theta; the recursion has no solution")
        np_ = _mqpow(n, i)
        inv = lam.inverse()
        x = _mzero(q, d)
        term = rhs
        sign = 1
        power = inv
        for _ in range(2 * d - 1):
            x = _madd(x, _mscale(power if sign > 0 else -power, term))
            term = _msub(_mmul(term, np_), _mmul(n, term))
            if _mat_is_zero(term):
                break
            sign = -sign
            power = power * inv
        a0q = _madd(_mscale(theta.qpower(i), _ident(q, d)), np_)
        if not _mat_is_zero(_msub(_msub(_mmul(x, a0q), _mmul(E.matrices[0], x)), rhs)):
            raise SylvesterSingular("Sylvester residual nonzero; Lie invariant violated")
        coeffs.append(x)
    return ExpSeries(E, tuple(coeffs))


def log_coefficients(exp, m=None):
    """Compositional inverse of exp through order m (default: exp's order).

    l_n = -(e_1 l_{n-1}^[q] + ... + e_n l_0^[q^n]); the reverse composition
    log(exp) = 1 is verified to the same order.
    """
    if m is None:
        m = exp.order
    if m > exp.order:
        raise ValueError("log order cannot exceed the exp order")
    E = exp.module
    q, d = E.q, E.d
    e = exp.coeffs
    l = [_ident(q, d)]
    for n_ in range(1, m + 1):
        s = _mzero(q, d)
        for j in range(1, n_ + 1):
            s = _madd(s, _mmul(e[j], _mqpow(l[n_ - j], j)))
        l.append(_msub(_mzero(q, d), s))
    for n_ in range(1, m + 1):
        s = _mzero(q, d)
        for j in range(0, n_ + 1):
            s = _madd(s, _mmul(l[j], _mqpow(e[n_ - j], j)))
        if not _mat_is_zero(s):
            raise ArithmeticError(f"log(exp) deviates from 1 at tau^{n_}")
    return LogSeries(E, tuple(l))


class KInfPoint:
    """Vector over F_q((1/theta)) with a common tracked precision."""

    __slots__ = ("coords",)

    def __init__(self, coords):
        coords = tuple(coords)
        if not coords:
            raise DimensionMismatch("empty point")
        object.__setattr__(self, "coords", coords)

    def __setattr__(self, *a):
        raise AttributeError("KInfPoint is immutable")

    @classmethod
    def from_rationals(cls, q, values, precision):
        coords = []
        for v in values:
            r = _lift(q, v)
            coords.append(rational_to_laurent(r, precision))
        return cls(coords)

    @classmethod
    def zero(cls, q, d, precision=math.inf):
        return cls([LaurentSeries.zero(q, "x", precision)] * d)

    @property
    def q(self):
        return self.coords[0].q

    @property
    def d(self):
        return len(self.coords)

    @property
    def precision(self):
        return min(c.prec for c in self.coords)

    def valuation(self):
        """min over coordinates of -(leading exponent); precision for zeros."""
        vals = [(-c.v0) if c.coeffs else c.prec for c in self.coords]
        return min(vals)

    def is_zero(self):
        return all(c.is_zero() for c in self.coords)

    def __add__(self, other):
        if self.d != other.d:
            raise DimensionMismatch("point dimensions differ")
        return KInfPoint(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        if self.d != other.d:
            raise DimensionMismatch("point dimensions differ")
        return KInfPoint(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __eq__(self, other):
        return isinstance(other, KInfPoint) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def truncate(self, prec):
        return KInfPoint(tuple(c.truncate(prec) for c in self.coords))

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


@dataclass(frozen=True)
class EvalResult:
    point: KInfPoint
    terms_used: int
    valuations: tuple


def evaluate(series, x, precision, patience=3):
    """sum_i c_i x^[q^i] truncated at `precision`, with a convergence certificate.

    Term valuations must be strictly increasing (after at most `patience`
    consecutive ties or drops) and must exceed the target precision before the
    series coefficients run out; otherwise Divergent resp. PolicyExhausted.
    """
    E = series.module
    q = E.q
    if x.d != E.d:
        raise DimensionMismatch("point dimension does not match the t-module")
    if x.is_zero():
        return EvalResult(KInfPoint.zero(q, E.d, precision), 0, ())
    acc = KInfPoint.zero(q, E.d)
    vals = []
    last = None
    slack = 0
    converged = False
    used = 0
    for i, ci in enumerate(series.coeffs):
        xi = tuple(c.qpower(i) for c in x.coords)
        term = KInfPoint(_apply_matrix(q, ci, xi, precision))
        tv = term.valuation()
        vals.append(tv)
        acc = acc + term
        used = i + 1
        if last is not None:
            if tv <= last:
                slack += 1
                if slack >= patience:
                    raise Divergent(
                        f"term valuations stopped increasing at tau^{i} "
                        f"({last} then {tv}); point outside the domain"
                    )
            else:
                slack = 0
        last = max(tv, last) if last is not None else tv
        if tv > precision and slack == 0:
            converged = True
            break
    if not converged:
        raise PolicyExhausted(
            f"series order {series.order} too small: last term valuation "
            f"{last} has not passed the target precision {precision}"
        )
    return EvalResult(acc.truncate(precision), used, tuple(vals))


def nearest_integral(y, degree_bound):
    """Split a point into its polynomial part and the tail deviation.

    Returns (vector of Poly in theta, deviation): the smallest |exponent|
    among visible negative-exponent terms, or the precision when the point is
    polynomial as far as it is known.
    """
    polys = []
    dev = y.precision
    for s in y.coords:
        poly_coeffs = {}
        tail_top = None
        for i, c in enumerate(s.coeffs):
            e = (s.v0 or 0) - i
            if not c:
                continue
            if e >= 0:
                poly_coeffs[e] = c
            elif tail_top is None:
                tail_top = e
        deg = max(poly_coeffs) if poly_coeffs else -1
        if deg > degree_bound:
            raise DegreeExceeded(f"polynomial part has degree {deg} > bound {degree_bound}")
        polys.append(Poly(s.q, "x", [poly_coeffs.get(e, 0) for e in range(deg + 1)]))
        if tail_top is not None:
            dev = min(dev, -tail_top)
    return tuple(polys), dev
