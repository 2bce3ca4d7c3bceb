"""Asymptotic data, Higgs exponents and Stokes data of global tt*-Toda solutions.

Conventions
-----------
* ``gamma = (gamma_0, ..., gamma_n)`` is the log-coefficient at ``t = 0``:
  ``2 w_i ~ gamma_i log|t|``.  ``m_i = -gamma_i / 2``.
* ``rho = (n/2, n/2 - 1, ..., -n/2)``.
* Admissibility is the closed Weyl alcove condition, read cyclically:
  ``gamma_{i+1} - gamma_i >= -2`` for ``i = 0..n-1`` and the affine wall
  ``gamma_0 - gamma_n >= -2``.  The latter is the ``k_0 >= -1`` condition of
  the Higgs parametrization.
* Rationals (``int``/``Fraction``) stay exact through the m/gamma/Higgs
  conversions; floats are handled with a 1e-12 tolerance.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Sequence

import numpy as np

__all__ = [
    "ConstraintViolation",
    "InconsistentClosure",
    "AsymptoticData",
    "StokesParameters",
    "HiggsExponents",
    "SteinbergMatrix",
    "rho",
    "validate_gamma",
    "elementary_symmetric",
    "stokes_exponentials",
    "stokes_from_gamma",
    "gamma_to_m",
    "m_to_gamma",
    "higgs_to_m",
    "t_from_q",
    "steinberg_matrix",
    "alcove_point",
    "in_alcove",
    "satisfies_star",
    "random_admissible_gamma",
]

TOL = 1e-12


class ConstraintViolation(ValueError):
    """An admissibility constraint fails at ``index``; ``kind`` names it."""

    def __init__(self, index: int, kind: str, detail: str = ""):
        self.index = index
        self.kind = kind
        msg = f"{kind} constraint violated at index {index}"
        super().__init__(f"{msg}: {detail}" if detail else msg)


class InconsistentClosure(ArithmeticError):
    pass


def _exact(x):
    if isinstance(x, (bool, np.bool_)):
        raise TypeError("boolean is not a number")
    if isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, (np.integer,)):
        return Fraction(int(x))
    return float(x)


def _tol(*xs) -> float:
    return 0.0 if all(isinstance(x, Fraction) for x in xs) else TOL


def rho(n: int) -> tuple:
    """Weyl vector ``(n/2, n/2 - 1, ..., -n/2)`` as exact fractions."""
    return tuple(Fraction(n, 2) - i for i in range(n + 1))


# -- gamma / m ------------------------------------------------------------------


@dataclass(frozen=True)
class AsymptoticData:
    n: int
    gamma: tuple

    def __post_init__(self):
        g = tuple(_exact(x) for x in self.gamma)
        object.__setattr__(self, "gamma", g)
        if len(g) != self.n + 1:
            raise ValueError(f"expected {self.n + 1} entries, got {len(g)}")
        for i in range(self.n + 1):
            a, b = g[i], g[self.n - i]
            if abs(a + b) > _tol(a, b):
                raise ConstraintViolation(i, "antisymmetry", f"gamma_{i} + gamma_{self.n - i} = {a + b}")
        for i in range(self.n):
            d = g[i + 1] - g[i]
            if d < -2 - _tol(g[i], g[i + 1]):
                raise ConstraintViolation(i, "slope", f"gamma_{i + 1} - gamma_{i} = {d} < -2")
        d = g[0] - g[self.n]
        if self.n >= 1 and d < -2 - _tol(g[0], g[self.n]):
            raise ConstraintViolation(self.n, "cyclic_slope", f"gamma_0 - gamma_{self.n} = {d} < -2")

    @property
    def m(self) -> tuple:
        return gamma_to_m(self)

    def gaps(self) -> tuple:
        """``m_{i-1} - m_i + 1`` for ``i = 0..n`` (cyclic); all >= 0."""
        m = self.m
        return tuple(m[i - 1] - m[i] + 1 for i in range(self.n + 1))

    def is_strict(self, tol: float = 1e-9) -> bool:
        """True if every alcove inequality holds strictly."""
        return all(float(g) > tol for g in self.gaps())


def validate_gamma(n: int, gamma: Sequence) -> AsymptoticData:
    return AsymptoticData(n, tuple(gamma))


def gamma_to_m(a: AsymptoticData) -> tuple:
    return tuple(-x / 2 for x in a.gamma)


def m_to_gamma(m: Sequence) -> AsymptoticData:
    m = [_exact(x) for x in m]
    return AsymptoticData(len(m) - 1, tuple(-2 * x for x in m))


# -- Stokes parameters ------------------------------------------------------------


@dataclass(frozen=True)
class StokesParameters:
    n: int
    s: tuple

    def __post_init__(self):
        s = tuple(float(x) for x in self.s)
        object.__setattr__(self, "s", s)
        if len(s) != self.n:
            raise ValueError(f"expected {self.n} Stokes parameters, got {len(s)}")

    def is_palindromic(self, tol: float = 1e-9) -> bool:
        return all(abs(self.s[i] - self.s[self.n - 1 - i]) <= tol * max(1.0, abs(self.s[i])) for i in range(self.n))


def elementary_symmetric(xs: Sequence[complex]) -> list:
    """``[e_0, e_1, ..., e_len]`` by the one-variable-at-a-time recurrence."""
    e = [1.0 + 0j] + [0j] * len(xs)
    for j, x in enumerate(xs, start=1):
        for k in range(j, 0, -1):
            e[k] = e[k] + x * e[k - 1]
    return e


def stokes_exponentials(a: AsymptoticData) -> list:
    """``x_j = exp((n - 2j - gamma_j) pi i / (n+1))``."""
    n = a.n
    return [cmath.exp(1j * math.pi * (n - 2 * j - float(g)) / (n + 1)) for j, g in enumerate(a.gamma)]


def stokes_from_gamma(a: AsymptoticData) -> StokesParameters:
    """``s_i = e_i(x_0, ..., x_n)``; the values are real up to rounding."""
    e = elementary_symmetric(stokes_exponentials(a))
    s = []
    for i in range(1, a.n + 1):
        if abs(e[i].imag) > TOL * max(1.0, abs(e[i].real)):
            raise ArithmeticError(f"s_{i} has imaginary part {e[i].imag:.3e}")
        s.append(e[i].real)
    return StokesParameters(a.n, tuple(s))


# -- Higgs exponents ------------------------------------------------------------


@dataclass(frozen=True)
class HiggsExponents:
    """Exponents ``k_0..k_n`` of the chiral matrix, with ``N = n + 1 + sum k``.

    ``symmetric=False`` drops the ``k_i = k_{n-i+1}`` requirement, which is
    what the minimal-model fixed points need.
    """

    n: int
    N: int
    k: tuple
    symmetric: bool = True

    def __post_init__(self):
        k = tuple(int(x) for x in self.k)
        object.__setattr__(self, "k", k)
        if len(k) != self.n + 1:
            raise ValueError(f"expected {self.n + 1} exponents, got {len(k)}")
        if self.N <= 0:
            raise ValueError("N must be positive")
        for i, x in enumerate(k):
            if x < -1:
                raise ConstraintViolation(i, "k_lower_bound", f"k_{i} = {x} < -1")
        if self.n + 1 + sum(k) != self.N:
            raise ConstraintViolation(0, "normalization", f"n + 1 + sum k = {self.n + 1 + sum(k)} != N = {self.N}")
        if self.symmetric:
            for i in range(1, self.n + 1):
                if k[i] != k[self.n - i + 1]:
                    raise ConstraintViolation(i, "k_symmetry", f"k_{i} != k_{self.n - i + 1}")


def higgs_to_m(h: HiggsExponents, convention: str = "mandk") -> tuple:
    """Solve ``m_{i-1} - m_i + 1 = ((n+1)/N)(k_i + 1)`` for ``i = 1..n``.

    The free constant is fixed by ``sum m_i = 0``; for symmetric ``k`` this is
    the same as ``m_i + m_{n-i} = 0``.  The ``i = 0`` relation (indices mod
    ``n+1``) is the cyclic closure and is checked, not imposed.

    ``convention="gamma_inline"`` uses
    ``gamma_i - gamma_{i-1} + 1 = ((n+1)/N)(k_i + 1)`` instead, i.e. the
    differences ``m_{i-1} - m_i`` are halved.
    """
    n, N, k = h.n, h.N, h.k
    ratio = Fraction(n + 1, N)
    if convention == "mandk":
        d = [ratio * (k[i] + 1) - 1 for i in range(n + 1)]
    elif convention == "gamma_inline":
        d = [(ratio * (k[i] + 1) - 1) / 2 for i in range(n + 1)]
    else:
        raise ValueError(f"unknown convention {convention!r}")
    # m_i = m_0 - (d_1 + ... + d_i)
    partial = [Fraction(0)]
    for i in range(1, n + 1):
        partial.append(partial[-1] + d[i])
    m0 = sum(partial, Fraction(0)) / (n + 1)
    m = tuple(m0 - p for p in partial)

    if convention == "mandk":
        closure = sum((m[i - 1] - m[i] + 1 for i in range(n + 1)), Fraction(0))
        if closure != n + 1 or ratio * sum(x + 1 for x in k) != n + 1:
            raise InconsistentClosure(f"cyclic sum {closure} != {n + 1}")
        if m[n] - m[0] + 1 != ratio * (k[0] + 1):
            raise InconsistentClosure("i = 0 relation fails")
    if h.symmetric and any(m[i] + m[n - i] != 0 for i in range(n + 1)):
        raise InconsistentClosure("m is not antisymmetric")
    return m


def t_from_q(h: HiggsExponents, q: complex, branch: int = 0) -> complex:
    """``t = ((n+1)/N) q^(N/(n+1))`` with ``log q`` shifted by ``2 pi i branch``."""
    q = complex(q)
    if q == 0:
        raise ValueError("q must be nonzero")
    expo = h.N / (h.n + 1)
    logq = cmath.log(q) + 2j * math.pi * branch
    return (h.n + 1) / h.N * cmath.exp(expo * logq)


# -- Steinberg cross-section ------------------------------------------------------


@dataclass(frozen=True)
class SteinbergMatrix:
    """Companion matrix with characteristic polynomial
    ``l^(n+1) - s_1 l^n + s_2 l^(n-1) - ... + (-1)^n s_n l + (-1)^(n+1)``.
    """

    n: int
    entries: np.ndarray

    def charpoly(self) -> np.ndarray:
        """Monic characteristic polynomial, highest degree first.

        Faddeev-LeVerrier; exact on integer input up to rounding of the
        divisions, which are exact for the integer traces that occur here.
        """
        A = np.asarray(self.entries, dtype=complex)
        d = A.shape[0]
        c = [1.0 + 0j]
        Mk = np.zeros_like(A)
        I = np.eye(d, dtype=complex)
        for k in range(1, d + 1):
            Mk = A @ Mk + c[-1] * I
            c.append(-np.trace(A @ Mk) / k)
        return np.array(c)

    def stokes(self) -> StokesParameters:
        c = self.charpoly()
        return StokesParameters(self.n, tuple(((-1) ** k * c[k]).real for k in range(1, self.n + 1)))

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvals(np.asarray(self.entries, dtype=complex))

    def det(self) -> complex:
        return complex(np.linalg.det(np.asarray(self.entries, dtype=complex)))


def steinberg_matrix(s: StokesParameters) -> SteinbergMatrix:
    n = s.n
    # charpoly coefficients c_k = (-1)^k s_k, with s_0 = s_{n+1} = 1
    svals = (1.0,) + s.s + (1.0,)
    c = [(-1) ** k * svals[k] for k in range(n + 2)]
    M = np.zeros((n + 1, n + 1))
    for i in range(n):
        M[i + 1, i] = 1.0
    for i in range(n + 1):
        M[i, n] = -c[n + 1 - i]
    return SteinbergMatrix(n, M)


# -- alcove ------------------------------------------------------------------------


def alcove_point(m: Sequence) -> tuple:
    """``(m + rho) / (n + 1)``; requires ``sum m = 0``."""
    m = [_exact(x) for x in m]
    n = len(m) - 1
    if abs(sum(m)) > _tol(*m) * (n + 1):
        raise ValueError("m must have zero sum")
    r = rho(n)
    return tuple((x + r[i]) / (n + 1) for i, x in enumerate(m))


def in_alcove(p: Sequence, tol: float = 1e-12) -> bool:
    """Closed fundamental alcove of sl(n+1), trace-zero coordinates.

    ``p_0 >= p_1 >= ... >= p_n`` and ``p_0 - p_n <= 1``.
    """
    p = [float(x) for x in p]
    n = len(p) - 1
    return all(p[i - 1] - p[i] >= -tol for i in range(1, n + 1)) and p[0] - p[n] <= 1 + tol


def satisfies_star(m: Sequence, tol: float = 1e-12) -> bool:
    """``m_{i-1} - m_i + 1 >= 0`` for ``i = 0..n``, indices mod ``n + 1``."""
    m = [float(x) for x in m]
    return all(m[i - 1] - m[i] + 1 >= -tol for i in range(len(m)))


def random_admissible_gamma(n: int, rng: np.random.Generator) -> AsymptoticData:
    """Uniform sample of antisymmetric admissible data.

    Draws the alcove gaps ``g_0..g_n`` (summing to 1) with ``g_i = g_{n+1-i}``
    and rebuilds ``m`` from them.
    """
    # orbit representatives of i -> n+1-i on 1..n, plus the fixed gap 0
    reps = sorted({min(i, n + 1 - i) for i in range(1, n + 1)})
    weights = rng.dirichlet(np.ones(len(reps) + 1))
    g = np.zeros(n + 1)
    g[0] = weights[0]
    for w, r in zip(weights[1:], reps):
        idx = {r, n + 1 - r}
        for i in idx:
            g[i] = w / len(idx)
    # p_{i-1} - p_i = g_i (i >= 1), sum p = 0
    p = -np.concatenate([[0.0], np.cumsum(g[1:])])
    p -= p.mean()
    m = (n + 1) * p - np.array([float(x) for x in rho(n)])
    m = 0.5 * (m - m[::-1])  # remove rounding asymmetry
    return AsymptoticData(n, tuple(-2 * m))
