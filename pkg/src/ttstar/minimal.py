"""Fixed-point Higgs data, dominant weights and effective central charges.

Everything here is exact rational arithmetic.  The inner product is the
Euclidean one on trace-zero vectors in ``x``-coordinates, which gives
``|rho|^2 = n(n+1)(n+2)/12`` and reproduces the Lee-Yang value 2/5.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .stokesdata import HiggsExponents, higgs_to_m, rho

__all__ = [
    "IdentityViolation",
    "FixedPointData",
    "DominantWeight",
    "CentralCharge",
    "AlcoveReport",
    "basic_weight",
    "norm2",
    "compositions",
    "enumerate_fixed_points",
    "dominant_weight",
    "ceff",
    "alcove_identity_check",
]


class IdentityViolation(ArithmeticError):
    pass


def norm2(v) -> Fraction:
    return sum((Fraction(x) ** 2 for x in v), Fraction(0))


def basic_weight(n: int, j: int) -> tuple:
    """``eps_j`` with ``<alpha_i, eps_j> = delta_ij``, ``alpha_i = x_{i-1} - x_i``."""
    if not 1 <= j <= n:
        raise ValueError("need 1 <= j <= n")
    return tuple(Fraction(1 if i < j else 0) - Fraction(j, n + 1) for i in range(n + 1))


def _combine(n: int, coeffs) -> tuple:
    out = [Fraction(0)] * (n + 1)
    for j, c in enumerate(coeffs, start=1):
        if c:
            for i, e in enumerate(basic_weight(n, j)):
                out[i] += c * e
    return tuple(out)


@dataclass(frozen=True)
class FixedPointData:
    n: int
    N: int
    k: tuple
    kSum: int = field(init=False)

    def __post_init__(self):
        k = tuple(int(x) for x in self.k)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "kSum", sum(k))
        if len(k) != self.n + 1:
            raise ValueError(f"expected {self.n + 1} exponents, got {len(k)}")
        if any(x < 0 for x in k):
            raise ValueError("fixed-point exponents must be nonnegative")
        if self.n + 1 + self.kSum != self.N:
            raise ValueError(f"n + 1 + sum k = {self.n + 1 + self.kSum} != N = {self.N}")
        if math.gcd(self.kSum, self.N) != 1:
            raise ValueError(f"gcd(k={self.kSum}, N={self.N}) != 1")

    def higgs(self) -> HiggsExponents:
        return HiggsExponents(self.n, self.N, self.k, symmetric=False)


@dataclass(frozen=True)
class DominantWeight:
    """``Lambda = sum_{i=1}^n k_i eps_i`` together with a level bound."""

    n: int
    coeffs: tuple
    level_bound: int

    @property
    def level(self) -> int:
        return sum(self.coeffs)

    @property
    def within_level(self) -> bool:
        return all(c >= 0 for c in self.coeffs) and self.level <= self.level_bound

    def vector(self) -> tuple:
        return _combine(self.n, self.coeffs)


def compositions(total: int, parts: int):
    """Nonnegative integer tuples of length ``parts`` summing to ``total``."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_fixed_points(n: int, N: int) -> list:
    """All ``k`` with ``k_i >= 0``, ``n + 1 + sum k = N`` and ``gcd(sum k, N) = 1``."""
    if N <= n + 1:
        raise ValueError("need N > n + 1")
    K = N - n - 1
    if math.gcd(K, N) != 1:
        return []
    return [FixedPointData(n, N, k) for k in compositions(K, n + 1)]


def dominant_weight(f: FixedPointData) -> DominantWeight:
    return DominantWeight(f.n, f.k[1:], f.kSum)


@dataclass(frozen=True)
class CentralCharge:
    via_weight: Fraction
    via_m: Fraction
    m: tuple
    shifted_weight: tuple  # Lambda - (k/(n+1)) rho

    @property
    def value(self) -> Fraction:
        return self.via_weight


def ceff(f: FixedPointData) -> CentralCharge:
    """Effective central charge, computed from the weight and from ``m``.

    ``n - 12 (n+1)/N |Lambda - k rho/(n+1)|^2`` and ``n - 12 N/(n+1) |m|^2``;
    the two agree through ``(N/(n+1))(m + rho) = rho + Lambda``.
    """
    n, N = f.n, f.N
    lam = dominant_weight(f).vector()
    r = rho(n)
    shifted = tuple(l - Fraction(f.kSum, n + 1) * x for l, x in zip(lam, r))
    m = higgs_to_m(f.higgs())

    lhs = tuple(Fraction(N, n + 1) * (mi + ri) for mi, ri in zip(m, r))
    rhs = tuple(ri + li for ri, li in zip(r, lam))
    if lhs != rhs:
        raise IdentityViolation(f"(N/(n+1))(m+rho) = {lhs} but rho + Lambda = {rhs}")

    a = n - 12 * Fraction(n + 1, N) * norm2(shifted)
    b = n - 12 * Fraction(N, n + 1) * norm2(m)
    if a != b:
        raise IdentityViolation(f"c_eff mismatch: {a} vs {b}")
    return CentralCharge(a, b, m, shifted)


@dataclass(frozen=True)
class AlcoveReport:
    n: int
    l: int
    shifted_level_weights: frozenset  # P_l + rho, as coefficient tuples over eps_i
    alcove_weights: frozenset  # dominant weights in the open dilated alcove

    @property
    def equal(self) -> bool:
        return self.shifted_level_weights == self.alcove_weights

    @property
    def symmetric_difference(self) -> frozenset:
        return self.shifted_level_weights ^ self.alcove_weights


def _in_open_dilated_alcove(v, scale) -> bool:
    # strictly decreasing coordinates and v_0 - v_n < scale
    return all(v[i - 1] > v[i] for i in range(1, len(v))) and v[0] - v[-1] < scale


def alcove_identity_check(n: int, l: int) -> AlcoveReport:
    """Compare ``P_l + rho`` with the dominant weights inside ``(l + n + 1) A``.

    The right-hand side is found by brute force: every dominant weight with
    coefficients up to ``l + n + 1`` is tested against the alcove
    inequalities in ``x``-coordinates.
    """
    left = frozenset(tuple(c + 1 for c in a) for a in product(range(l + 1), repeat=n) if sum(a) <= l)
    scale = l + n + 1
    right = frozenset(a for a in product(range(scale + 1), repeat=n) if _in_open_dilated_alcove(_combine(n, a), scale))
    return AlcoveReport(n, l, left, right)
