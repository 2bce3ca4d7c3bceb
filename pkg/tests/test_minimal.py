import itertools
import math
from fractions import Fraction

import pytest

from ttstar.minimal import (
    FixedPointData,
    alcove_identity_check,
    basic_weight,
    ceff,
    compositions,
    dominant_weight,
    enumerate_fixed_points,
    norm2,
)
from ttstar.stokesdata import rho


def test_enumerate_examples():
    assert sorted(f.k for f in enumerate_fixed_points(1, 5)) == [(0, 3), (1, 2), (2, 1), (3, 0)]
    assert enumerate_fixed_points(1, 4) == []
    for n in range(1, 5):
        ks = [f.k for f in enumerate_fixed_points(n, n + 2)]
        assert sorted(ks) == sorted(tuple(int(i == j) for i in range(n + 1)) for j in range(n + 1))


@pytest.mark.parametrize("n,N", [(n, N) for n in range(1, 4) for N in range(n + 2, 11)])
def test_enumerate_against_brute_force(n, N):
    K = N - n - 1
    brute = {k for k in itertools.product(range(K + 1), repeat=n + 1) if sum(k) == K and math.gcd(K, N) == 1}
    assert {f.k for f in enumerate_fixed_points(n, N)} == brute


def test_fixed_point_validation():
    with pytest.raises(ValueError):
        FixedPointData(1, 4, (1, 1))  # gcd(2, 4) = 2
    with pytest.raises(ValueError):
        FixedPointData(1, 5, (1, 1))
    with pytest.raises(ValueError):
        FixedPointData(1, 5, (-1, 4))


def test_compositions():
    assert sorted(compositions(2, 2)) == [(0, 2), (1, 1), (2, 0)]
    assert len(list(compositions(4, 3))) == math.comb(6, 2)


def test_basic_weights():
    assert basic_weight(1, 1) == (Fraction(1, 2), Fraction(-1, 2))
    for n in range(1, 6):
        for i in range(1, n + 1):
            alpha = [0] * (n + 1)
            alpha[i - 1], alpha[i] = 1, -1
            for j in range(1, n + 1):
                assert sum(a * e for a, e in zip(alpha, basic_weight(n, j))) == (i == j)


def test_dominant_weight_examples():
    w = dominant_weight(FixedPointData(1, 5, (1, 2)))
    assert w.coeffs == (2,) and w.level == 2 and w.level_bound == 3 and w.within_level
    assert w.vector() == (1, -1)
    assert dominant_weight(FixedPointData(2, 4, (1, 0, 0))).vector() == (0, 0, 0)


def test_rho_norm():
    for n in range(1, 8):
        assert norm2(rho(n)) == Fraction(n * (n + 1) * (n + 2), 12)


def test_ceff_examples():
    c = ceff(FixedPointData(1, 5, (1, 2)))
    assert c.value == Fraction(2, 5) and c.m == (Fraction(1, 10), Fraction(-1, 10))
    # k = (3, 0): m_0 - m_1 + 1 = (2/5)(k_1 + 1) gives m = (-3/10, 3/10)
    c = ceff(FixedPointData(1, 5, (3, 0)))
    assert c.m == (Fraction(-3, 10), Fraction(3, 10))
    assert c.value == 1 - 12 * Fraction(5, 2) * (2 * Fraction(3, 10) ** 2) == Fraction(-22, 5)


@pytest.mark.slow
def test_ceff_identity_and_bound():
    for n in range(1, 7):
        for N in range(n + 2, 21):
            for f in enumerate_fixed_points(n, N):
                c = ceff(f)  # raises on any mismatch
                assert c.via_weight == c.via_m
                assert c.value <= n
                assert (c.value == n) == all(x == 0 for x in c.m)
                assert dominant_weight(f).within_level


def test_m_zero_is_never_a_fixed_point():
    # m = 0 forces k_i = k for all i, so N = (n+1)(k+1) shares the factor n+1 with sum k
    for n in range(1, 5):
        for k in range(0, 4):
            with pytest.raises(ValueError):
                FixedPointData(n, (n + 1) * (k + 1), (k,) * (n + 1))
    assert max(ceff(f).value for f in enumerate_fixed_points(2, 11)) < 2


@pytest.mark.parametrize("n,l,size", [(1, 0, 1), (1, 2, 3), (2, 1, 3)])
def test_alcove_examples(n, l, size):
    rep = alcove_identity_check(n, l)
    assert rep.equal
    assert len(rep.shifted_level_weights) == size
    if l == 0:
        assert rep.alcove_weights == frozenset({(1,) * n})


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_alcove_identity(n):
    for l in range(0, 6 if n < 4 else 4):
        rep = alcove_identity_check(n, l)
        assert rep.equal, rep.symmetric_difference
        assert len(rep.alcove_weights) == math.comb(l + n, n)
