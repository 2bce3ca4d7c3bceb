"""Root system A_n, Coxeter element, Coxeter plane and polytopic soliton spectra.

Vectors live in R^(n+1) with basis ``x_0..x_n``; roots are ``x_i - x_j`` and
sit in the trace-zero hyperplane.  Root and weight arithmetic is exact
(integers and ``Fraction``); only projections use floating point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np
import sympy as sp

__all__ = [
    "DegeneratePlane",
    "RootSystemA",
    "ProjectedRoot",
    "CoxeterProjection",
    "Soliton",
    "SolitonSpectrum",
    "simple_reflection",
    "coxeter_element",
    "coxeter_plane",
    "soliton_mass",
    "soliton_spectrum",
    "wedge_matrix",
]


class DegeneratePlane(ValueError):
    pass


@dataclass(frozen=True)
class RootSystemA:
    n: int

    @property
    def labels(self) -> list:
        return [(i, j) for i in range(self.n + 1) for j in range(self.n + 1) if i != j]

    def root(self, i: int, j: int) -> tuple:
        """``x_i - x_j`` as an integer vector."""
        v = [0] * (self.n + 1)
        v[i] += 1
        v[j] -= 1
        return tuple(v)

    @property
    def roots(self) -> list:
        return [self.root(i, j) for i, j in self.labels]

    def simple_roots(self) -> list:
        """``alpha_i = x_{i-1} - x_i`` for ``i = 1..n``."""
        return [self.root(i - 1, i) for i in range(1, self.n + 1)]

    def is_root(self, v) -> bool:
        return sorted(v) == [-1] + [0] * (self.n - 1) + [1]

    @staticmethod
    def inner(u, v):
        return sum(a * b for a, b in zip(u, v))


def simple_reflection(n: int, i: int) -> np.ndarray:
    """Matrix of ``r_alpha(v) = v - <alpha, v> alpha`` for ``alpha = x_{i-1} - x_i``."""
    a = np.array(RootSystemA(n).root(i - 1, i), dtype=np.int64)
    return np.eye(n + 1, dtype=np.int64) - np.outer(a, a)


def coxeter_element(n: int) -> np.ndarray:
    """``r_{alpha_1} r_{alpha_2} ... r_{alpha_n}`` as an integer matrix.

    Acting on column vectors it sends ``x_i -> x_{i+1}`` cyclically, so it
    has order ``n + 1``.  On coordinates (the dual action) it is the inverse
    cycle ``n -> n-1 -> ... -> 0 -> n``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    c = np.eye(n + 1, dtype=np.int64)
    for i in range(1, n + 1):
        c = c @ simple_reflection(n, i)
    return c


def soliton_mass(n: int, i: int, j: int) -> float:
    """Mass ``2 sin(|i - j| pi / (n+1))`` attached to the root ``x_i - x_j``."""
    return 2.0 * math.sin(abs(i - j) * math.pi / (n + 1))


def _orbit(n: int, i: int, j: int) -> int:
    # c maps x_i - x_j to x_{i+1} - x_{j+1}; j - i mod (n+1) labels the orbit
    return (j - i) % (n + 1)


@dataclass(frozen=True)
class ProjectedRoot:
    label: tuple
    xy: tuple
    orbit: int
    angle: float

    @property
    def radius(self) -> float:
        return math.hypot(*self.xy)


@dataclass(frozen=True)
class CoxeterProjection:
    n: int
    basis: np.ndarray  # 2 x (n+1), orthonormal rows spanning the plane
    roots: tuple

    def orbits(self) -> dict:
        out: dict = {}
        for r in self.roots:
            out.setdefault(r.orbit, []).append(r.label)
        return out

    def project(self, v) -> np.ndarray:
        return self.basis @ np.asarray(v, dtype=float)

    def rotation(self) -> np.ndarray:
        th = 2 * math.pi / (self.n + 1)
        return np.array([[math.cos(th), -math.sin(th)], [math.sin(th), math.cos(th)]])


def coxeter_plane(n: int) -> CoxeterProjection:
    """Project the roots of A_n onto the Coxeter plane.

    The plane is spanned by the real and imaginary parts of the eigenvector
    ``v = (1, w^-1, w^-2, ...)`` of the Coxeter element with eigenvalue
    ``w = exp(2 pi i / (n+1))``.  Coordinates are taken against the
    orthonormal pair ``(Re v, -Im v) / |Re v|`` so that the Coxeter element
    acts as rotation by ``+2 pi / (n+1)``.
    """
    if n < 2:
        raise DegeneratePlane("the Coxeter plane is degenerate for n = 1")
    w = np.exp(2j * np.pi / (n + 1))
    v = w ** (-np.arange(n + 1))
    e1, e2 = v.real, -v.imag
    basis = np.vstack([e1 / np.linalg.norm(e1), e2 / np.linalg.norm(e2)])
    rs = RootSystemA(n)
    recs = []
    for i, j in rs.labels:
        xy = basis @ np.array(rs.root(i, j), dtype=float)
        recs.append(ProjectedRoot((i, j), (float(xy[0]), float(xy[1])), _orbit(n, i, j), math.atan2(xy[1], xy[0])))
    return CoxeterProjection(n, basis, tuple(recs))


# -- solitons of polytopic models ----------------------------------------------


@dataclass(frozen=True)
class Soliton:
    vacua: tuple  # indices into SolitonSpectrum.weights
    root: tuple  # (i, j) with weight_a - weight_b = x_i - x_j
    mass: float
    type: int  # d = min(|i-j|, n+1-|i-j|); the type of x_0 - x_d


@dataclass(frozen=True)
class SolitonSpectrum:
    n: int
    k: int
    weights: tuple  # k-subsets; weight = sum of x_i over the subset
    solitons: tuple

    def weight_vector(self, a: int) -> tuple:
        return tuple(1 if i in self.weights[a] else 0 for i in range(self.n + 1))

    def counts_by_mass(self, ndigits: int = 12) -> dict:
        out: dict = {}
        for s in self.solitons:
            key = round(s.mass, ndigits)
            out[key] = out.get(key, 0) + 1
        return out

    def counts_by_type(self) -> dict:
        out: dict = {}
        for s in self.solitons:
            out[s.type] = out.get(s.type, 0) + 1
        return dict(sorted(out.items()))


def soliton_spectrum(n: int, k: int) -> SolitonSpectrum:
    """Solitons of the model built on the weights of ``wedge^k`` of the standard rep.

    Two vacua are joined when their weights differ by a single root.  The
    type of a soliton is the Coxeter orbit of its root taken up to sign,
    which for A_n is the same as its mass class.
    """
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    rs = RootSystemA(n)
    weights = tuple(combinations(range(n + 1), k))
    vec = [tuple(1 if i in w else 0 for i in range(n + 1)) for w in weights]
    sols = []
    for a, b in combinations(range(len(weights)), 2):
        diff = tuple(x - y for x, y in zip(vec[a], vec[b]))
        if not rs.is_root(diff):
            continue
        i, j = diff.index(1), diff.index(-1)
        d = abs(i - j)
        sols.append(Soliton((a, b), (i, j), soliton_mass(n, i, j), min(d, n + 1 - d)))
    return SolitonSpectrum(n, k, weights, tuple(sols))


# -- exterior powers ------------------------------------------------------------------


def wedge_matrix(M, k: int, exact: bool = False):
    """``wedge^k M``: entries are the ``k x k`` minors indexed by sorted k-subsets.

    With ``exact=True`` the minors are computed with sympy and a
    ``sympy.Matrix`` is returned.
    """
    if exact:
        A = sp.Matrix(M)
    else:
        A = np.asarray(M)
    d = A.shape[0]
    if A.shape[0] != A.shape[1]:
        raise ValueError("matrix must be square")
    if not 1 <= k <= d:
        raise ValueError("need 1 <= k <= size")
    subsets = list(combinations(range(d), k))
    size = len(subsets)
    if exact:
        W = sp.zeros(size, size)
        for a, rows in enumerate(subsets):
            for b, cols in enumerate(subsets):
                W[a, b] = A.extract(list(rows), list(cols)).det()
        return W
    dtype = np.result_type(A.dtype, float)
    W = np.empty((size, size), dtype=dtype)
    for a, rows in enumerate(subsets):
        for b, cols in enumerate(subsets):
            W[a, b] = np.linalg.det(A[np.ix_(rows, cols)])
    return W

