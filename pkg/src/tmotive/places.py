"""Finite places of K = F_q(theta) and their norms in A = F_q[t].

A finite place is a monic irreducible polynomial v in theta; its norm Nv
is the same polynomial read in t.  Enumeration is in ascending encoding
order (little-endian base-q value of the non-leading coefficients), which
is deterministic and supports contiguous range sharding.
"""

from __future__ import annotations

import os

from . import kernels
from .gfpoly import Poly, is_irreducible, prime_factors


class Place:
    """A monic irreducible polynomial in theta."""

    __slots__ = ("v", "d")

    def __init__(self, v, *, check=True):
        if check:
            if not v.is_monic():
                raise ValueError(f"place polynomial must be monic: {v}")
            if not is_irreducible(v):
                raise ValueError(f"place polynomial must be irreducible: {v}")
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "d", v.degree)

    def __setattr__(self, *a):
        raise AttributeError("Place is immutable")

    @property
    def q(self):
        return self.v.q

    def norm(self):
        """Nv: the place polynomial read as an element of F_q[t]."""
        return Poly(self.q, "t", self.v.coeffs)

    def encoding(self):
        return kernels.encode(self.q, list(self.v.coeffs))

    @classmethod
    def from_encoding(cls, q, d, m):
        return cls(Poly(q, "x", kernels.decode(q, d, m)), check=False)

    @classmethod
    def parse(cls, q, text):
        return cls(Poly.parse(q, text, "x"))

    def __eq__(self, other):
        return isinstance(other, Place) and self.v == other.v

    def __hash__(self):
        return hash(("Place", self.v))

    def __lt__(self, other):
        return (self.d, self.encoding()) < (other.d, other.encoding())

    def __str__(self):
        return str(self.v)

    def __repr__(self):
        return f"Place({self.v})"


def place_norm(p):
    return p.norm()


def count_irreducibles(q, d):
    """Number of monic irreducibles of degree d: (1/d) sum_{e|d} mu(e) q^(d/e)."""
    total = q**d
    sqfree = [1]
    for p in prime_factors(d):
        sqfree += [s * p for s in sqfree]
    for e in sorted(set(sqfree))[1:]:
        k = len(prime_factors(e))
        total += (-1) ** k * q ** (d // e)
    return total // d


def encodings_of_degree(q, d, cache_dir=None):
    """Ascending encodings of all monic irreducibles of degree d.

    With cache_dir set, results are stored one encoding per line in
    ``places_q{q}_d{d}.txt`` and reused on later calls.
    """
    path = None
    if cache_dir is not None:
        path = os.path.join(cache_dir, f"places_q{q}_d{d}.txt")
        if os.path.exists(path):
            with open(path) as fh:
                encs = [int(line) for line in fh if line.strip()]
            if len(encs) == count_irreducibles(q, d):
                return encs
    encs = list(kernels.irreducibles(q, d))
    if path is not None:
        os.makedirs(cache_dir, exist_ok=True)
        tmp = path + ".tmp"
        with open(tmp, "w") as fh:
            fh.write("\n".join(str(m) for m in encs) + "\n")
        os.replace(tmp, path)
    return encs


def monic_irreducibles(q, d, start=0, stop=None, cache_dir=None):
    """Yield places of degree exactly d, ascending; [start, stop) index range."""
    encs = encodings_of_degree(q, d, cache_dir)
    if stop is None:
        stop = len(encs)
    for m in encs[start:stop]:
        yield Place.from_encoding(q, d, m)


def shard_ranges(total, shards):
    """Split range(total) into `shards` contiguous near-equal [start, stop) pairs."""
    base, extra = divmod(total, shards)
    out = []
    pos = 0
    for i in range(shards):
        size = base + (1 if i < extra else 0)
        out.append((pos, pos + size))
        pos += size
    return out
