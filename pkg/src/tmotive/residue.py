"""Residue fields k(v) = F_q[theta]/(v) for monic irreducible v."""

from __future__ import annotations

from .errors import NotIrreducible
from .gfpoly import Poly, is_irreducible, poly_inv_mod


class ResidueField:
    """k(v) with elements represented as Poly in theta reduced mod v."""

    __slots__ = ("v", "d", "q")

    def __init__(self, v, *, check=True):
        if check and not is_irreducible(v):
            raise NotIrreducible(f"{v} is not irreducible")
        if not v.is_monic():
            raise ValueError("modulus must be monic")
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "d", v.degree)
        object.__setattr__(self, "q", v.q)

    def __setattr__(self, *a):
        raise AttributeError("ResidueField is immutable")

    def reduce(self, p):
        return p % self.v

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b % self.v

    def inv(self, a):
        return poly_inv_mod(a, self.v)

    def frobenius(self, a, e=1):
        """a -> a^(q^e), a field automorphism of k(v); identity when e = d."""
        return a.pow_mod(self.q ** (e % self.d if self.d else 1), self.v)

    def elements(self):
        """All q^d elements (small fields only; used by tests)."""
        q, d, var = self.q, self.d, self.v.var
        for m in range(q**d):
            coeffs = []
            n = m
            for _ in range(d):
                coeffs.append(n % q)
                n //= q
            yield Poly(q, var, coeffs)

    def __eq__(self, other):
        return isinstance(other, ResidueField) and self.v == other.v

    def __hash__(self):
        return hash(("ResidueField", self.v))

    def __repr__(self):
        return f"ResidueField({self.v})"
