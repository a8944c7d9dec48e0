import pytest

from tmotive.gfpoly import Poly, is_irreducible
from tmotive.places import (
    Place,
    count_irreducibles,
    encodings_of_degree,
    monic_irreducibles,
    shard_ranges,
)


class TestEnumeration:
    def test_matches_irreducibility_filter(self):
        for q in (2, 3):
            for d in range(1, 5):
                found = {str(p.v) for p in monic_irreducibles(q, d)}
                expected = set()
                for m in range(q**d):
                    digits = []
                    k = m
                    for _ in range(d):
                        digits.append(k % q)
                        k //= q
                    f = Poly(q, "x", digits + [1])
                    if is_irreducible(f):
                        expected.add(str(f))
                assert found == expected

    def test_counts(self):
        for q in (2, 3, 5):
            for d in range(1, 8):
                assert len(encodings_of_degree(q, d)) == count_irreducibles(q, d)

    def test_ascending_order(self):
        encs = encodings_of_degree(2, 9)
        assert encs == sorted(encs)

    def test_norm_renames_variable(self):
        p = Place.parse(2, "x^2+x+1")
        assert str(p.norm()) == "t^2+t+1"
        assert p.norm().coeffs == p.v.coeffs

    def test_rejects_reducible(self):
        with pytest.raises(ValueError):
            Place.parse(2, "x^2+1")  # (x+1)^2


class TestSharding:
    def test_partition(self):
        for total in (0, 1, 7, 100):
            for shards in (1, 2, 3, 8):
                ranges = shard_ranges(total, shards)
                assert ranges[0][0] == 0 and ranges[-1][1] == total
                for (a, b), (c, _) in zip(ranges, ranges[1:]):
                    assert b == c
                sizes = [b - a for a, b in ranges]
                assert max(sizes) - min(sizes) <= 1


class TestCache:
    def test_cache_round_trip(self, tmp_path):
        fresh = encodings_of_degree(3, 5)
        first = encodings_of_degree(3, 5, cache_dir=str(tmp_path))
        assert (tmp_path / "places_q3_d5.txt").exists()
        again = encodings_of_degree(3, 5, cache_dir=str(tmp_path))
        assert fresh == first == again
