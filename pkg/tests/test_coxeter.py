import itertools
import math
from math import comb

import numpy as np
import pytest
import sympy as sp

from ttstar.coxeter import (
    DegeneratePlane,
    RootSystemA,
    coxeter_element,
    coxeter_plane,
    simple_reflection,
    soliton_mass,
    soliton_spectrum,
    wedge_matrix,
)


@pytest.mark.parametrize("n", range(1, 9))
def test_root_system(n):
    rs = RootSystemA(n)
    assert len(rs.roots) == n * (n + 1)
    assert all(rs.inner(r, r) == 2 and sum(r) == 0 for r in rs.roots)


@pytest.mark.parametrize("n", range(1, 11))
def test_coxeter_element_order_and_cycle(n):
    c = coxeter_element(n)
    I = np.eye(n + 1, dtype=np.int64)
    powers = [np.linalg.matrix_power(c, k) for k in range(1, n + 2)]
    assert np.array_equal(powers[-1], I)
    assert not any(np.array_equal(p, I) for p in powers[:-1])
    # a permutation matrix sending x_i to x_{i+1}
    for i in range(n + 1):
        e = I[:, i]
        assert np.array_equal(c @ e, I[:, (i + 1) % (n + 1)])


def test_coxeter_element_is_product_of_reflections_symbolically():
    n = 4
    xs = sp.symbols(f"x0:{n + 1}")
    v = sp.Matrix(xs)
    # apply r_{alpha_n} first, r_{alpha_1} last
    for i in range(n, 0, -1):
        a = sp.zeros(n + 1, 1)
        a[i - 1], a[i] = 1, -1
        v = v - (a.T * v)[0] * a
    assert list(v) == list(sp.Matrix(coxeter_element(n)) * sp.Matrix(xs))


def test_n1_is_sign_flip_on_trace_zero_line():
    c = coxeter_element(1)
    assert np.array_equal(c @ np.array([1, -1]), np.array([-1, 1]))


def test_reflections_are_involutions():
    for n in range(1, 6):
        for i in range(1, n + 1):
            r = simple_reflection(n, i)
            assert np.array_equal(r @ r, np.eye(n + 1, dtype=np.int64))


def test_plane_rejects_n1():
    with pytest.raises(DegeneratePlane):
        coxeter_plane(1)


@pytest.mark.parametrize("n", range(2, 9))
def test_plane_orbits_and_equivariance(n):
    proj = coxeter_plane(n)
    orbits = proj.orbits()
    assert len(orbits) == n and all(len(v) == n + 1 for v in orbits.values())
    c = coxeter_element(n)
    R = proj.rotation()
    rs = RootSystemA(n)
    for r in proj.roots:
        v = np.array(rs.root(*r.label))
        assert np.max(np.abs(proj.project(c @ v) - R @ proj.project(v))) < 1e-10
        assert np.allclose(proj.project(-v), -np.array(r.xy))
    # orbits are Coxeter orbits and sit on circles
    for label in rs.labels:
        v = np.array(rs.root(*label))
        w = c @ v
        j = rs.roots.index(tuple(int(x) for x in w))
        assert proj.roots[j].orbit == next(r.orbit for r in proj.roots if r.label == label)
    for members in orbits.values():
        radii = [next(r.radius for r in proj.roots if r.label == lab) for lab in members]
        assert max(radii) - min(radii) < 1e-12


def test_plane_basis_orthonormal():
    B = coxeter_plane(5).basis
    np.testing.assert_allclose(B @ B.T, np.eye(2), atol=1e-14)
    np.testing.assert_allclose(B.sum(axis=1), 0, atol=1e-14)


def test_n4_figure():
    proj = coxeter_plane(4)
    assert len(proj.roots) == 20 and sorted(len(v) for v in proj.orbits().values()) == [5, 5, 5, 5]


def _brute_pairs(n, k):
    ws = [tuple(1 if i in s else 0 for i in range(n + 1)) for s in itertools.combinations(range(n + 1), k)]
    count = 0
    for a, b in itertools.combinations(ws, 2):
        d = [x - y for x, y in zip(a, b)]
        if sorted(d) == [-1] + [0] * (n - 1) + [1]:
            count += 1
    return len(ws), count


def test_solitons_sl4():
    sp_ = soliton_spectrum(3, 1)
    counts = sp_.counts_by_mass()
    assert counts[round(math.sqrt(2), 12)] == 4 and counts[round(2.0, 12)] == 2
    assert sp_.counts_by_type() == {1: 4, 2: 2}


def test_solitons_n1():
    sp_ = soliton_spectrum(1, 1)
    assert len(sp_.solitons) == 1 and sp_.solitons[0].mass == pytest.approx(2)


@pytest.mark.parametrize("n,k", [(n, k) for n in range(1, 7) for k in range(1, n + 1)])
def test_soliton_adjacency_brute_force(n, k):
    sp_ = soliton_spectrum(n, k)
    nw, npairs = _brute_pairs(n, k)
    assert len(sp_.weights) == comb(n + 1, k) == nw
    assert len(sp_.solitons) == npairs
    rs = RootSystemA(n)
    for s in sp_.solitons:
        a, b = (np.array(sp_.weight_vector(x)) for x in s.vacua)
        assert tuple(a - b) == rs.root(*s.root)


@pytest.mark.parametrize("n", range(1, 9))
def test_mass_classes_standard_rep(n):
    sp_ = soliton_spectrum(n, 1)
    by_type = sp_.counts_by_type()
    for d, count in by_type.items():
        assert count == ((n + 1) // 2 if 2 * d == n + 1 else n + 1)
        assert soliton_mass(n, 0, d) == pytest.approx(soliton_mass(n, 0, n + 1 - d))
    for s in sp_.solitons:
        assert s.mass == pytest.approx(2 * math.sin(s.type * math.pi / (n + 1)))


def test_wedge_examples():
    a, b, c = sp.symbols("a b c")
    W = wedge_matrix(sp.diag(a, b, c), 2, exact=True)
    assert W == sp.diag(a * b, a * c, b * c)
    for k in range(1, 5):
        np.testing.assert_allclose(wedge_matrix(np.eye(4), k), np.eye(comb(4, k)))


def test_wedge_eigenvalues():
    rng = np.random.default_rng(0)
    M = rng.normal(size=(4, 4))
    ev = np.linalg.eigvals(M)
    for k in range(1, 5):
        got = np.sort_complex(np.linalg.eigvals(wedge_matrix(M, k)))
        want = np.sort_complex(np.array([np.prod(ev[list(s)]) for s in itertools.combinations(range(4), k)]))
        np.testing.assert_allclose(got, want, atol=1e-9)


def test_wedge_of_unipotent_is_unipotent():
    from ttstar.stokesdata import StokesParameters, steinberg_matrix

    n = 3
    M = steinberg_matrix(StokesParameters(n, [comb(n + 1, k) for k in range(1, n + 1)])).entries
    M = sp.Matrix(M).applyfunc(sp.nsimplify)
    for k in range(1, n + 2):
        W = wedge_matrix(M, k, exact=True)
        lam = sp.symbols("lam")
        assert sp.factor(W.charpoly(lam).as_expr()) == (lam - 1) ** comb(n + 1, k)


def test_wedge_rejects_bad_k():
    with pytest.raises(ValueError):
        wedge_matrix(np.eye(3), 0)
    with pytest.raises(ValueError):
        wedge_matrix(np.eye(3), 4)
