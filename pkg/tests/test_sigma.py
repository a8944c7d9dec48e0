import random
from fractions import Fraction

import pytest

from tmotive import bipoly
from tmotive.bipoly import BiPoly
from tmotive.errors import NotEffective, NotFinitelyGenerated
from tmotive.gfpoly import Poly
from tmotive.places import Place, monic_irreducibles
from tmotive.series import LaurentSeries
from tmotive.sigma import SigmaModule, parse_motive


def places_up_to(q, maxd):
    for d in range(1, maxd + 1):
        yield from monic_irreducibles(q, d)


class TestConstruction:
    def test_carlitz_effectivity(self):
        for q in (2, 3):
            C = SigmaModule.carlitz(q)
            assert C.r == 1 and C.n == 1 and C.alpha == 1

    def test_carlitz_power(self):
        M = SigmaModule.carlitz_power(3, 4)
        assert M.r == 1 and M.n == 4

    def test_non_effective_rejected(self):
        # det = t, not a unit times a power of (t - theta)
        with pytest.raises(NotEffective):
            SigmaModule(2, [["t"]])

    def test_drinfeld_shape(self):
        M = SigmaModule.drinfeld(2, ["1", "1"])
        assert M.r == 2 and M.n == 1

    def test_tensor_and_det(self):
        M = SigmaModule.drinfeld(2, ["1", "1"])
        T = M.tensor(SigmaModule.carlitz(2))
        assert T.r == 2 and T.n == M.n + 2  # each factor gains one twist
        D = M.det_module()
        assert D.r == 1 and D.n == M.n


class TestEulerFactors:
    def test_carlitz_factor_is_one_minus_norm(self):
        """The sigma-chain of (t - theta) over the residue field multiplies
        all Frobenius conjugates of (t - root), giving the place polynomial
        itself read in t."""
        for q in (2, 3):
            C = SigmaModule.carlitz(q)
            for pl in places_up_to(q, 3):
                f = C.euler_factor(pl)
                assert f.degree() == 1
                assert f.coeffs[0] == -pl.norm()

    def test_rank2_frobenius_relation_at_rational_places(self):
        """Independent endomorphism-ring oracle for the companion shape.

        At a degree-one place v = x - c the residue field is F_q, so tau
        commutes with constants and Frobenius is pi = tau itself.  Applying
        phi(t) = c + a_1(c) tau + a_2(c) tau^2 gives the monic relation
        pi^2 + (a_1(c)/a_2(c)) pi + (c - t)/a_2(c) = 0, whose coefficients
        must be the Euler factor's.
        """
        for q, coeffs in [(2, ["1", "1"]), (3, ["x", "2"]), (3, ["1", "1"]),
                          (5, ["2", "3"])]:
            M = SigmaModule.drinfeld(q, coeffs)
            a1 = Poly.parse(q, coeffs[0], "x")
            a2 = Poly.parse(q, coeffs[1], "x")
            for pl in monic_irreducibles(q, 1):
                c = (-pl.v.constant_term()) % q
                if a2.evaluate(c) == 0:
                    continue  # bad reduction
                f = M.euler_factor(pl)
                inv = pow(a2.evaluate(c), q - 2, q)
                want1 = Poly.constant(q, "t", a1.evaluate(c) * inv % q)
                want2 = (Poly.constant(q, "t", c) - Poly.gen(q, "t")) * inv
                assert list(f.coeffs) == [want1, want2], str(pl)

    def test_basis_change_invariance(self):
        rng = random.Random(20260823)
        M = SigmaModule(2, [["x+t", "x^2+t^2"], ["x+t", "0"]])
        pls = list(places_up_to(2, 4))
        base = [M.euler_factor(p).as_tuples() for p in pls]
        for trial in range(100):
            P = _random_unimodular(rng, 2, M.r)
            M2 = _change_basis(M, P)
            got = [M2.euler_factor(p).as_tuples() for p in pls]
            assert got == base, f"trial {trial}"

    def test_shift_law(self):
        """Twisting by the Carlitz motive rescales the Frobenius eigenvalues
        by Nv: P_{M tensor C, v}(X) = P_{M, v}(Nv X)."""
        for q, M, maxd in [
            (2, SigmaModule.drinfeld(2, ["1", "1"]), 4),
            (3, SigmaModule.drinfeld(3, ["x", "2"]), 3),
        ]:
            T = M.tensor(SigmaModule.carlitz(q))
            for pl in places_up_to(q, maxd):
                f = M.euler_factor(pl)
                g = T.euler_factor(pl)
                nv = pl.norm()
                scaled = [c * nv ** (j + 1) for j, c in enumerate(f.coeffs)]
                assert list(g.coeffs)[: len(scaled)] == scaled
                assert all(c.is_zero() for c in g.coeffs[len(scaled):])

    def test_direct_sum_multiplicativity(self):
        q = 2
        A = SigmaModule.carlitz(2)
        B = SigmaModule.drinfeld(2, ["1", "1"])
        S = A.direct_sum(B)
        for pl in places_up_to(q, 4):
            fa, fb, fs = (m.euler_factor(pl) for m in (A, B, S))
            one = Poly.one(q, "t")
            pa = [one] + list(fa.coeffs)
            pb = [one] + list(fb.coeffs)
            prod = [Poly.zero(q, "t") for _ in range(len(pa) + len(pb) - 1)]
            for i, ca in enumerate(pa):
                for j, cb in enumerate(pb):
                    prod[i + j] = prod[i + j] + ca * cb
            assert prod[0].is_one()
            got = [one] + list(fs.coeffs)
            assert got[: len(prod)] == prod

    def test_sym2_eigenvalue_law_rank2(self):
        """Roots of the symmetric-square factor are the pairwise products of
        the roots of the rank-2 factor: for P = 1 - aX + bX^2 the square is
        1 - (a^2 - b)X + (a^2 b - b^2)X^2 - b^3 X^3."""
        for q, coeffs, maxd in [(2, ["1", "1"], 2), (3, ["2", "1"], 2)]:
            M = SigmaModule.drinfeld(q, coeffs)
            S = M.sym2()
            for pl in places_up_to(q, maxd):
                f = M.euler_factor(pl)
                a = -f.coeffs[0]
                b = f.coeffs[1]
                g = S.euler_factor(pl)
                expected = [-(a * a - b), a * a * b - b * b, -(b * b * b)]
                assert list(g.coeffs) == expected


class TestSlopes:
    def test_carlitz_slope(self):
        assert list(SigmaModule.carlitz(2).newton_slopes()) == [Fraction(-1)]

    def test_drinfeld_slopes_average(self):
        M = SigmaModule.drinfeld(2, ["1", "1"])
        slopes = M.newton_slopes()
        assert len(slopes) == 2 and sum(slopes) == -1

    def test_dual_of_carlitz_not_finitely_generated(self):
        D = SigmaModule.carlitz(2).dual_twist()
        with pytest.raises(NotFinitelyGenerated):
            D.newton_slopes()


class TestParseMotive:
    def test_kinds(self):
        assert parse_motive(2, {"kind": "carlitz"}).r == 1
        assert parse_motive(2, {"kind": "carlitz", "power": 3}).n == 3
        assert parse_motive(2, {"kind": "drinfeld", "coeffs": ["1", "1"]}).r == 2
        M = parse_motive(2, {"kind": "matrix", "sigma": [["x+t", "x^2+t^2"], ["x+t", "0"]]})
        assert M.r == 2 and M.n == 3

    def test_wrappers(self):
        M = parse_motive(2, {"kind": "drinfeld", "coeffs": ["1", "1"],
                             "wrappers": ["tensor_carlitz"]})
        assert M.n == 3

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            parse_motive(2, {"kind": "elliptic"})


def _random_unimodular(rng, q, r):
    """Product of elementary matrices over F_q[t, theta]; det in F_q^x."""
    one = BiPoly.one(q)
    zero = BiPoly.zero(q)
    P = [[one if i == j else zero for j in range(r)] for i in range(r)]
    gens = [one, BiPoly.t_gen(q), BiPoly.theta_gen(q), BiPoly.t_minus_theta(q)]
    for _ in range(rng.randrange(1, 4)):
        i, j = rng.sample(range(r), 2)
        f = rng.choice(gens) * rng.randrange(1, q)
        for k in range(r):
            P[i][k] = P[i][k] + f * P[j][k]
    if rng.random() < 0.5:
        P.reverse()
    return P


def _change_basis(M, P):
    det = bipoly.det(P)
    assert det.t_degree == 0 and det.coeff(0).is_constant()
    inv_const = det.coeff(0).inverse()
    Pinv = [[e * inv_const for e in row] for row in bipoly.adjugate(P)]
    Pq = [[e.qpower(1) for e in row] for row in P]
    return SigmaModule(M.q, bipoly.mat_mul(Pinv, bipoly.mat_mul(M.matrix, Pq)))
