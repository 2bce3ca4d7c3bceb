"""Small quantum cohomology of CP^n and its quantum differential equation.

Cohomology classes are truncated polynomials in the degree-2 generator ``b``.
The quantum product imposes ``b^(n+1) = q``; the ordinary product kills every
power above ``n``.  The J-function is the Frobenius solution of
``(hbar d)^(n+1) y = q y`` near ``q = 0`` with ``d = q d/dq``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import sympy as sp

__all__ = [
    "TruncatedClass",
    "QuantumRing",
    "QDEOperator",
    "JFunction",
    "quantum_reduce",
    "chiral_matrix",
    "j_evaluate",
    "qde_residual",
    "qde_tail_bound",
    "cpn_operator",
    "cubic_hypersurface_operator",
    "semiclassical_symbol",
    "gamma_class",
    "Q",
    "HBAR",
    "B",
]

# Symbols used by the operator layer.
Q, HBAR, B = sp.symbols("q hbar b")


class TruncatedClass:
    """Element ``c_0 + c_1 b + ... + c_n b^n`` with ``b^(n+1) = 0``.

    Instances are immutable; arithmetic returns new objects.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Sequence[complex]):
        c = np.array(coeffs, dtype=complex).ravel()
        if c.size == 0:
            raise ValueError("a truncated class needs at least one coefficient")
        c.flags.writeable = False
        self._c = c

    @classmethod
    def one(cls, n: int) -> "TruncatedClass":
        c = np.zeros(n + 1, dtype=complex)
        c[0] = 1.0
        return cls(c)

    @classmethod
    def zero(cls, n: int) -> "TruncatedClass":
        return cls(np.zeros(n + 1, dtype=complex))

    @classmethod
    def generator(cls, n: int) -> "TruncatedClass":
        """The class ``b`` itself (zero when ``n == 0``)."""
        c = np.zeros(n + 1, dtype=complex)
        if n >= 1:
            c[1] = 1.0
        return cls(c)

    @property
    def n(self) -> int:
        return self._c.size - 1

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    def _coerce(self, other) -> "TruncatedClass":
        if isinstance(other, TruncatedClass):
            if other.n != self.n:
                raise ValueError(f"dimension mismatch: n={self.n} vs n={other.n}")
            return other
        c = np.zeros(self.n + 1, dtype=complex)
        c[0] = complex(other)
        return TruncatedClass(c)

    def __add__(self, other):
        return TruncatedClass(self._c + self._coerce(other)._c)

    __radd__ = __add__

    def __sub__(self, other):
        return TruncatedClass(self._c - self._coerce(other)._c)

    def __rsub__(self, other):
        return TruncatedClass(self._coerce(other)._c - self._c)

    def __neg__(self):
        return TruncatedClass(-self._c)

    def __mul__(self, other):
        if isinstance(other, TruncatedClass):
            other = self._coerce(other)
            return TruncatedClass(np.convolve(self._c, other._c)[: self.n + 1])
        return TruncatedClass(self._c * complex(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, TruncatedClass):
            return self * other.inverse()
        return TruncatedClass(self._c / complex(other))

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = TruncatedClass.one(self.n)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def inverse(self) -> "TruncatedClass":
        """Inverse via the finite geometric series of the nilpotent part."""
        c0 = self._c[0]
        if c0 == 0:
            raise ZeroDivisionError("class with zero constant term is not invertible")
        nil = TruncatedClass(np.concatenate([[0.0], self._c[1:]]) / c0)
        out = TruncatedClass.one(self.n)
        term = TruncatedClass.one(self.n)
        for _ in range(self.n):
            term = term * (-nil)
            out = out + term
        return out / c0

    def exp(self) -> "TruncatedClass":
        c0 = self._c[0]
        nil = TruncatedClass(np.concatenate([[0.0], self._c[1:]]))
        out = TruncatedClass.one(self.n)
        term = TruncatedClass.one(self.n)
        for m in range(1, self.n + 1):
            term = term * nil / m
            out = out + term
        return out * cmath.exp(c0)

    def norm(self) -> float:
        """Max of coefficient moduli."""
        return float(np.max(np.abs(self._c)))

    def norm1(self) -> float:
        """Sum of coefficient moduli; submultiplicative."""
        return float(np.sum(np.abs(self._c)))

    def allclose(self, other, atol: float = 1e-12) -> bool:
        return bool(np.allclose(self._c, self._coerce(other)._c, rtol=0.0, atol=atol))

    def __eq__(self, other):
        if not isinstance(other, TruncatedClass):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self._c, other._c))

    def __hash__(self):
        return hash(tuple(self._c.tolist()))

    def __repr__(self):
        return f"TruncatedClass({self._c.tolist()!r})"


@dataclass(frozen=True)
class QuantumRing:
    """``H^*(CP^n)`` with the deformed product ``b^(n+1) = q``."""

    n: int
    q: complex

    def reduce_power(self, j: int) -> TruncatedClass:
        return quantum_reduce(self.n, j, self.q)

    def multiply(self, x: TruncatedClass, y: TruncatedClass) -> TruncatedClass:
        full = np.convolve(x.coeffs, y.coeffs)
        out = np.zeros(self.n + 1, dtype=complex)
        for j, c in enumerate(full):
            d, r = divmod(j, self.n + 1)
            out[r] += c * self.q**d
        return TruncatedClass(out)


def quantum_reduce(n: int, j: int, q: complex) -> TruncatedClass:
    """Return ``b^j`` in the quantum ring: ``q^(j div (n+1)) b^(j mod (n+1))``."""
    if j < 0:
        raise ValueError("exponent must be nonnegative")
    d, r = divmod(j, n + 1)
    c = np.zeros(n + 1, dtype=complex)
    c[r] = q**d if d else 1.0
    return TruncatedClass(c)


def chiral_matrix(n: int, q: complex) -> np.ndarray:
    """Matrix of quantum multiplication by ``b`` in the basis ``1, b, ..., b^n``."""
    C = np.zeros((n + 1, n + 1), dtype=complex)
    for i in range(n):
        C[i + 1, i] = 1.0
    C[0, n] += q
    return C


# -- quantum differential operators -----------------------------------------


@dataclass(frozen=True)
class QDEOperator:
    """``sum_j coeffs[j] (hbar d)^j`` with polynomial coefficients in ``q, hbar``.

    ``coeffs`` is ordered by ascending power of ``hbar d`` and has length
    ``n + 2``.  The leading coefficient must be 1; the all-zero operator is
    admitted as an additive identity.
    """

    n: int
    coeffs: tuple

    def __post_init__(self):
        c = tuple(sp.sympify(x) for x in self.coeffs)
        object.__setattr__(self, "coeffs", c)
        if len(c) != self.n + 2:
            raise ValueError(f"expected {self.n + 2} coefficients, got {len(c)}")
        if all(sp.simplify(x) == 0 for x in c):
            return
        if sp.simplify(c[-1] - 1) != 0:
            raise ValueError("leading coefficient must be 1")

    @property
    def order(self) -> int:
        return self.n + 1

    def subs(self, **values) -> "QDEOperator":
        sym = {"q": Q, "hbar": HBAR}
        rep = {sym[k]: v for k, v in values.items()}
        return QDEOperator(self.n, tuple(sp.expand(c.subs(rep)) for c in self.coeffs))

    def apply(self, y: sp.Expr, var: sp.Symbol = Q, hbar=HBAR) -> sp.Expr:
        """Apply the operator to ``y(var)``; ``d`` is ``var d/dvar``.

        ``hbar`` is the value used inside ``hbar d``; pass the same value
        given to :meth:`subs` when the coefficients were specialized.
        """
        out = sp.Integer(0)
        term = y
        for j, c in enumerate(self.coeffs):
            if j:
                term = hbar * var * sp.diff(term, var)
            out += c.subs(Q, var) * term
        return out


def cpn_operator(n: int) -> QDEOperator:
    """``(hbar d)^(n+1) - q``."""
    return QDEOperator(n, (-Q,) + (0,) * n + (1,))


def cubic_hypersurface_operator(hbar=HBAR) -> QDEOperator:
    """Quantum differential operator of a cubic threefold in CP^4.

    ``(hbar d)^4 - 27 q (hbar d)^2 - 27 hbar q (hbar d) - 6 hbar^2 q``.
    Pass ``hbar=None`` or leave the default to keep ``hbar`` symbolic.
    """
    h = HBAR if hbar is None else sp.nsimplify(hbar)
    return QDEOperator(3, (-6 * h**2 * Q, -27 * h * Q, -27 * Q, 0, 1))


def semiclassical_symbol(op: QDEOperator) -> sp.Expr:
    """Replace ``hbar d`` by ``b`` and set ``hbar = 0``."""
    expr = sum((c * B**j for j, c in enumerate(op.coeffs)), sp.Integer(0))
    return sp.expand(expr.subs(HBAR, 0))


# -- J-function ---------------------------------------------------------------


@dataclass(frozen=True)
class JFunction:
    """Truncated Frobenius solution ``q^(b/hbar) sum_k q^k / prod_j (b + j hbar)^(n+1)``.

    ``branch`` shifts ``log q`` by ``2 pi i * branch``.
    """

    n: int
    hbar: complex
    K: int = 25
    branch: int = 0
    _terms: tuple = field(default=(), init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.hbar == 0:
            raise ValueError("hbar must be nonzero")
        if self.K < 0:
            raise ValueError("truncation order K must be >= 0")
        object.__setattr__(self, "_terms", tuple(self._build_terms()))

    def _build_terms(self):
        n, h = self.n, complex(self.hbar)
        b = TruncatedClass.generator(n)
        term = TruncatedClass.one(n)
        yield term
        for j in range(1, self.K + 1):
            # (b + j hbar)^-1 as a finite nilpotent series
            inv = sum(((-b / (j * h)) ** m for m in range(n + 1)), TruncatedClass.zero(n))
            inv = inv / (j * h)
            term = term * inv ** (n + 1)
            yield term

    @property
    def terms(self) -> tuple:
        """Series coefficients ``a_k(b)`` for ``k = 0..K``."""
        return self._terms

    def log(self, q: complex) -> complex:
        return cmath.log(q) + 2j * math.pi * self.branch

    def prefactor(self, q: complex) -> TruncatedClass:
        """``q^(b/hbar) = exp((log q / hbar) b)`` on the chosen branch."""
        b = TruncatedClass.generator(self.n)
        return (b * (self.log(q) / complex(self.hbar))).exp()

    def __call__(self, q: complex) -> TruncatedClass:
        return j_evaluate(self, q)


def _series(terms, q: complex, n: int) -> TruncatedClass:
    out = TruncatedClass.zero(n)
    qk = 1.0 + 0j
    for a in terms:
        out = out + a * qk
        qk *= q
    return out


def j_evaluate(jf: JFunction, q: complex) -> TruncatedClass:
    """Evaluate the truncated J-function; components are ``y^[0], ..., y^[n]``."""
    q = complex(q)
    if q == 0:
        raise ValueError("q must be nonzero")
    return jf.prefactor(q) * _series(jf.terms, q, jf.n)


def qde_residual(jf: JFunction, q: complex) -> float:
    """Max-norm of ``(hbar d)^(n+1) J - q J`` for the truncated series.

    ``hbar d`` acts on ``q^(k + b/hbar)`` as multiplication by ``b + k hbar``,
    so the operator is applied exactly, term by term.
    """
    q = complex(q)
    n, h = jf.n, complex(jf.hbar)
    b = TruncatedClass.generator(n)
    lhs = TruncatedClass.zero(n)
    rhs = TruncatedClass.zero(n)
    qk = 1.0 + 0j
    for k, a in enumerate(jf.terms):
        lhs = lhs + (b + k * h) ** (n + 1) * a * qk
        rhs = rhs + a * (qk * q)
        qk *= q
    return (jf.prefactor(q) * (lhs - rhs)).norm()


def qde_tail_bound(jf: JFunction, q: complex) -> float:
    """Upper bound for :func:`qde_residual` in exact arithmetic.

    The truncated sum telescopes, leaving ``-q^(K+1) a_K(b) q^(b/hbar)``.
    With the l1 coefficient norm (submultiplicative) this is at most::

        |q|^(K+1) / (|hbar|^K K!)^(n+1)  *  ||q^(b/hbar)||_1  *  P_K

    where ``P_K = prod_{j<=K} (sum_{m<=n} (j|hbar|)^-m)^(n+1)`` grows only
    polynomially in ``K``.  For ``n >= 1`` the leading factor is below
    ``|q|^(K+1) / (K!)^2`` whenever ``|hbar| >= 1``.
    """
    n, K = jf.n, jf.K
    h = abs(complex(jf.hbar))
    log_mag = (K + 1) * math.log(abs(q)) - (n + 1) * (K * math.log(h) + math.lgamma(K + 1))
    for j in range(1, K + 1):
        log_mag += (n + 1) * math.log(sum((j * h) ** (-m) for m in range(n + 1)))
    return math.exp(log_mag) * jf.prefactor(q).norm1()


# -- gamma class --------------------------------------------------------------


def gamma_class(n: int) -> TruncatedClass:
    """``Gamma(1 + b)^(n+1)`` for CP^n, truncated at ``b^n``.

    Uses ``n + 1`` Chern roots equal to ``b`` (Euler sequence) and
    ``log Gamma(1+x) = -gamma_E x + sum_{k>=2} (-1)^k zeta(k) x^k / k``.
    """
    c = np.zeros(n + 1, dtype=complex)
    if n >= 1:
        c[1] = -np.euler_gamma
    for k in range(2, n + 1):
        c[k] = (-1) ** k * float(sp.zeta(k)) / k
    return (TruncatedClass(c) * (n + 1)).exp()
