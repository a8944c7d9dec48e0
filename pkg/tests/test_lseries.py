import pytest

from tmotive.errors import CheckpointMismatch, Divergent, PolicyExhausted
from tmotive.lseries import (
    PrecisionPolicy,
    l_value,
    l_value_of_module,
    rank1_twisted_sum,
    zeta_direct,
)
from tmotive.places import Place
from tmotive.series import LaurentSeries, rational_to_laurent
from tmotive.ratfun import RationalFn
from tmotive.gfpoly import Poly
from tmotive.sigma import SigmaModule


def trivial(q):
    return SigmaModule(q, [["1"]])


class TestZeta:
    def test_euler_matches_direct_sum(self):
        """zeta(n) two ways: product over places vs sum over monics."""
        for q in (2, 3):
            for n in (1, 2, 3):
                euler = l_value(trivial(q), n, PrecisionPolicy(9)).series
                direct = zeta_direct(q, n, 9 // n + 1)
                through = min(euler.prec, direct.prec)
                assert euler.agrees_with(direct, through), (q, n)

    def test_q2_opening_digits(self):
        s = l_value(trivial(2), 1, PrecisionPolicy(6)).series
        assert s.agrees_with(LaurentSeries.parse(2, "1 + t^-2 + t^-3 + t^-4 + t^-5"), 6)


class TestLValue:
    def test_carlitz_l_is_zeta_one(self):
        got = l_value_of_module(SigmaModule.carlitz(2), PrecisionPolicy(10)).series
        want = l_value(trivial(2), 1, PrecisionPolicy(10)).series
        assert got.agrees_with(want, 10)

    def test_rank1_twist_matches_direct_sum(self):
        """For phi(t) = theta + alpha tau the L-value is also the twisted sum
        over monic polynomials."""
        for q, alpha in [(3, 2), (5, 3)]:
            M = SigmaModule.drinfeld(q, [str(alpha)])
            got = l_value_of_module(M, PrecisionPolicy(8)).series
            want = rank1_twisted_sum(q, alpha, 8)
            assert got.agrees_with(want, 8)

    def test_divergent_exponent(self):
        with pytest.raises(Divergent):
            l_value(SigmaModule.carlitz(2), 1, PrecisionPolicy(5))

    def test_shift_law_for_values(self):
        """L(M, n) = L(M tensor C, n+1) since each factor rescales by Nv."""
        M = SigmaModule.drinfeld(2, ["1", "1"]).dual_twist()
        T = M.tensor(SigmaModule.carlitz(2))
        a = l_value(M, 1, PrecisionPolicy(8)).series
        b = l_value(T, 2, PrecisionPolicy(8)).series
        assert a.agrees_with(b, 8)

    def test_sharded_equals_serial(self):
        M = SigmaModule.carlitz(2).dual_twist()
        a = l_value(M, 1, PrecisionPolicy(8))
        b = l_value(M, 1, PrecisionPolicy(8), shards=2)
        assert a.series == b.series

    def test_excluded_place(self):
        """Removing a place divides the product by that factor."""
        M = SigmaModule.drinfeld(2, ["1", "1"]).dual_twist()
        v = Place.parse(2, "x")
        full = l_value(M, 1, PrecisionPolicy(10)).series
        part = l_value(M, 1, PrecisionPolicy(10), excluded=(v,)).series
        f = M.euler_factor(v)
        nv_inv = rational_to_laurent(
            RationalFn(Poly.one(2, "t"), Poly.gen(2, "t")), 16
        )
        rebuilt = part * f.evaluate(nv_inv).inverse()
        assert full.agrees_with(rebuilt, 9)


class TestPolicies:
    def test_empirical_stops_early(self):
        M = SigmaModule.carlitz(2).dual_twist()
        emp = l_value(M, 1, PrecisionPolicy(8, mode="empirical"))
        rig = l_value(M, 1, PrecisionPolicy(8))
        assert emp.series.agrees_with(rig.series, 8)

    def test_capped_degree_empirical_unstable_raises(self):
        M = SigmaModule.carlitz(2).dual_twist()
        with pytest.raises(PolicyExhausted):
            l_value(M, 1, PrecisionPolicy(12, mode="empirical", max_degree=3))

    def test_capped_degree_rigorous_lowers_precision(self):
        M = SigmaModule.carlitz(2).dual_twist()
        res = l_value(M, 1, PrecisionPolicy(12, max_degree=5))
        assert res.series.prec == 6  # exact through the first missing degree

    def test_bad_policy(self):
        with pytest.raises(ValueError):
            PrecisionPolicy(0)
        with pytest.raises(ValueError):
            PrecisionPolicy(5, mode="hopeful")


class TestCheckpoints:
    def test_resume_is_bit_identical(self, tmp_path):
        M = SigmaModule.drinfeld(2, ["1", "1"]).dual_twist()
        ck = str(tmp_path / "run.ckpt")
        direct = l_value(M, 1, PrecisionPolicy(9))
        l_value(M, 1, PrecisionPolicy(9, max_degree=4), checkpoint=ck)
        resumed = l_value(M, 1, PrecisionPolicy(9), checkpoint=ck)
        assert resumed.series == direct.series
        assert resumed.degree_log == direct.degree_log

    def test_signature_mismatch(self, tmp_path):
        ck = str(tmp_path / "run.ckpt")
        M = SigmaModule.carlitz(2).dual_twist()
        l_value(M, 1, PrecisionPolicy(6), checkpoint=ck)
        other = SigmaModule.drinfeld(2, ["1", "1"]).dual_twist()
        with pytest.raises(CheckpointMismatch):
            l_value(other, 1, PrecisionPolicy(6), checkpoint=ck)
