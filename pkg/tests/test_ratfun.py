import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tmotive.gfpoly import Poly, poly_gcd
from tmotive.ratfun import RationalFn


def rationals(q):
    coeffs = st.lists(st.integers(0, q - 1), max_size=6)
    return st.tuples(coeffs, coeffs).filter(lambda nd: any(nd[1])).map(
        lambda nd: RationalFn(Poly(q, "x", nd[0]), Poly(q, "x", nd[1]))
    )


triples = st.sampled_from([2, 3]).flatmap(
    lambda q: st.tuples(rationals(q), rationals(q), rationals(q))
)


class TestRationalFn:
    @given(triples)
    @settings(max_examples=60)
    def test_field_axioms(self, abc):
        a, b, c = abc
        assert a + b == b + a
        assert a * b == b * a
        assert (a + b) * c == a * c + b * c
        assert a - a == RationalFn.zero(a.q)
        if not a.is_zero():
            assert a * a.inverse() == RationalFn.one(a.q)

    @given(triples)
    @settings(max_examples=60)
    def test_lowest_terms(self, abc):
        a, _, _ = abc
        if a.is_zero():
            assert a.num.is_zero() and a.den.is_one()
            return
        assert a.den.is_monic()
        assert poly_gcd(a.num, a.den).is_one()

    def test_zero_inverse_raises(self):
        with pytest.raises(ZeroDivisionError):
            RationalFn.zero(2).inverse()

    def test_valuation_at_infinity(self):
        cases = [
            ("x^2+1", "x", -1),
            ("1", "x^3", 3),
            ("x+1", "x+1", 0),
            ("2", "1", 0),
        ]
        for num, den, val in cases:
            r = RationalFn(Poly.parse(3, num, "x"), Poly.parse(3, den, "x"))
            assert r.valuation_at_infinity() == val

    @given(triples)
    @settings(max_examples=40)
    def test_qpower(self, abc):
        a, _, _ = abc
        assert a.qpower(1) == a**a.q

    def test_parse(self):
        r = RationalFn.parse(2, "(x^2+1)/(x^3+x)")
        # x^2+1 = (x+1)^2 and x^3+x = x(x+1)^2 over F_2
        assert str(r) == "1/x"
        assert RationalFn.parse(3, "x+2") == RationalFn.from_poly(Poly.parse(3, "x+2", "x"))
