import math

import pytest

from tmotive.bridge import motive_to_module
from tmotive.errors import (
    DegreeExceeded,
    DimensionMismatch,
    Divergent,
    PolicyExhausted,
)
from tmotive.gfpoly import Poly
from tmotive.ratfun import RationalFn
from tmotive.series import rational_to_laurent
from tmotive.sigma import SigmaModule
from tmotive.tmodule import (
    KInfPoint,
    TModule,
    evaluate,
    exp_coefficients,
    log_coefficients,
    nearest_integral,
    skew_compose,
)


def theta(q):
    return RationalFn.from_poly(Poly.gen(q, "x"))


class TestConstruction:
    def test_carlitz(self):
        E = TModule.carlitz(2)
        assert E.d == 1 and E.k == 1

    def test_rejects_mismatched_blocks(self):
        with pytest.raises(DimensionMismatch):
            TModule(2, [[["x"]], [[1, 0], [0, 1]]])

    def test_requires_frobenius_term(self):
        with pytest.raises(ValueError):
            TModule(2, [[["x"]]])

    def test_requires_nilpotent_deviation(self):
        # A_0 = theta^2 is not theta + nilpotent
        with pytest.raises(ValueError):
            TModule(2, [[["x^2"]], [[1]]])


class TestCarlitzClosedForms:
    """exp and log of the Carlitz module have classical product formulas:
    e_i = e_{i-1}^q / (theta^{q^i} - theta), l_i = l_{i-1} / (theta - theta^{q^i}).
    The recursion solver must reproduce them exactly."""

    def run(self, q, order):
        E = TModule.carlitz(q)
        exp = exp_coefficients(E, order)
        log = log_coefficients(exp)
        th = theta(q)
        e = RationalFn.one(q)
        l = RationalFn.one(q)
        for i in range(1, order + 1):
            lam = th.qpower(i) - th
            e = e.qpower(1) / lam
            l = l / (-lam)
            assert exp.coeffs[i][0][0] == e, f"exp order {i}"
            assert log.coeffs[i][0][0] == l, f"log order {i}"

    def test_q2_order_12(self):
        self.run(2, 12)

    def test_q3_order_6(self):
        self.run(3, 6)


class TestComposition:
    def test_exp_log_identity_order_12(self):
        E = TModule.carlitz(2)
        exp = exp_coefficients(E, 12)
        log = log_coefficients(exp)  # verifies log(exp) = 1 internally
        # forward direction exp(log) = 1
        acc = [None] * 13
        for n in range(13):
            s = None
            for j in range(n + 1):
                term = exp.coeffs[j][0][0] * log.coeffs[n - j][0][0].qpower(j)
                s = term if s is None else s + term
            acc[n] = s
        assert acc[0].is_one()
        assert all(a.is_zero() for a in acc[1:])

    def test_matrix_module_composition(self):
        M = SigmaModule(2, [["x+t", "x^2+t^2"], ["x+t", "0"]])
        E = motive_to_module(M).module
        assert E.d == 3
        exp = exp_coefficients(E, 6)
        log_coefficients(exp)  # raises if log(exp) deviates from identity

    def test_functional_equation(self):
        """phi(t) o exp = exp o A_0 as skew power series."""
        E = TModule.drinfeld(3, ["x", "2"])
        exp = exp_coefficients(E, 5)
        phi = [mat for mat in E.matrices]
        lhs = skew_compose(phi, list(exp.coeffs))
        rhs = skew_compose(list(exp.coeffs), [E.matrices[0]])
        for i in range(6):
            assert lhs[i] == rhs[i], f"tau^{i}"


class TestEvaluation:
    def test_carlitz_log_at_one(self):
        """log_C(1) must equal the partial sums of 1/l_i directly."""
        for q, prec in [(2, 20), (3, 20)]:
            E = TModule.carlitz(q)
            log = log_coefficients(exp_coefficients(E, 6))
            got = evaluate(log, KInfPoint.from_rationals(q, ["1"], prec), prec)
            th = theta(q)
            acc = RationalFn.one(q)
            l = RationalFn.one(q)
            for i in range(1, 7):
                l = l / (th - th.qpower(i))
                acc = acc + l
            want = rational_to_laurent(acc, prec)
            assert got.point.coords[0].agrees_with(want, prec)

    def test_exp_log_round_trip_at_point(self):
        E = TModule.carlitz(2)
        exp = exp_coefficients(E, 6)
        log = log_coefficients(exp)
        x = KInfPoint.from_rationals(2, ["1"], 20)
        y = evaluate(log, x, 20).point
        back = evaluate(exp, y, 20).point
        assert back.coords[0].agrees_with(x.coords[0], 20)

    def test_divergent_point_is_flagged(self):
        # |theta^2| is outside the convergence disk of log_C for q = 2
        E = TModule.carlitz(2)
        log = log_coefficients(exp_coefficients(E, 8))
        x = KInfPoint.from_rationals(2, ["x^2"], 15)
        with pytest.raises(Divergent):
            evaluate(log, x, 15)

    def test_order_too_small(self):
        E = TModule.carlitz(2)
        exp = exp_coefficients(E, 2)
        with pytest.raises(PolicyExhausted):
            evaluate(exp, KInfPoint.from_rationals(2, ["1"], 40), 40)

    def test_zero_point(self):
        E = TModule.carlitz(2)
        exp = exp_coefficients(E, 3)
        res = evaluate(exp, KInfPoint.zero(2, 1, 10), 10)
        assert res.point.is_zero() and res.terms_used == 0

    def test_dimension_mismatch(self):
        E = TModule.carlitz(2)
        exp = exp_coefficients(E, 3)
        with pytest.raises(DimensionMismatch):
            evaluate(exp, KInfPoint.zero(2, 2, 10), 10)


class TestNearestIntegral:
    def test_split(self):
        pt = KInfPoint.from_rationals(
            2, [RationalFn.parse(2, "(x^3+x+1)/(x+1)")], 12
        )
        polys, dev = nearest_integral(pt, 5)
        # (x^3+x+1)/(x+1) = x^2+x + 1/(x+1): polynomial part x^2+x
        assert str(polys[0]) == "x^2+x"
        assert dev == 1

    def test_exact_polynomial(self):
        pt = KInfPoint.from_rationals(3, ["x^2+1"], 9)
        polys, dev = nearest_integral(pt, 5)
        assert str(polys[0]) == "x^2+1" and dev == 9

    def test_degree_bound(self):
        pt = KInfPoint.from_rationals(2, ["x^7"], 6)
        with pytest.raises(DegreeExceeded):
            nearest_integral(pt, 5)
