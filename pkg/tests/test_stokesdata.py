import cmath
import itertools
import math
from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ttstar.stokesdata import (
    AsymptoticData,
    ConstraintViolation,
    HiggsExponents,
    StokesParameters,
    alcove_point,
    elementary_symmetric,
    gamma_to_m,
    higgs_to_m,
    in_alcove,
    m_to_gamma,
    random_admissible_gamma,
    rho,
    satisfies_star,
    steinberg_matrix,
    stokes_exponentials,
    stokes_from_gamma,
    t_from_q,
    validate_gamma,
)


def cpn_gamma(n):
    return [n - 2 * i for i in range(n + 1)]


def admissible(n_min=1, n_max=6):
    return st.tuples(st.integers(n_min, n_max), st.integers(0, 2**32 - 1)).map(
        lambda t: random_admissible_gamma(t[0], np.random.default_rng(t[1]))
    )


# -- validation -----------------------------------------------------------------


def test_validate_examples():
    assert validate_gamma(2, (2, 0, -2)).m == (-1, 0, 1)
    assert validate_gamma(1, (0, 0)).m == (0, 0)
    with pytest.raises(ConstraintViolation) as e:
        validate_gamma(1, (3, -3))
    assert e.value.kind == "slope" and e.value.index == 0


def test_validate_antisymmetry_and_length():
    with pytest.raises(ConstraintViolation) as e:
        validate_gamma(2, (1, 0, 0))
    assert e.value.kind == "antisymmetry"
    with pytest.raises(ValueError):
        validate_gamma(2, (1, -1))


def test_validate_cyclic_wall():
    # gamma_0 - gamma_n >= -2 is the affine wall of the alcove
    with pytest.raises(ConstraintViolation) as e:
        validate_gamma(1, (-1.5, 1.5))
    assert e.value.kind == "cyclic_slope"
    validate_gamma(1, (-1, 1))


def test_float_tolerance_and_exact_inputs():
    validate_gamma(1, (0.3, -0.3 + 1e-13))
    a = validate_gamma(2, (Fraction(2, 3), 0, Fraction(-2, 3)))
    assert a.m == (Fraction(-1, 3), 0, Fraction(1, 3))


@given(admissible())
def test_random_samples_are_admissible(a):
    assert satisfies_star(a.m, tol=1e-9)
    assert all(abs(a.gamma[i] + a.gamma[a.n - i]) < 1e-12 for i in range(a.n + 1))


# -- Stokes parameters --------------------------------------------------------------


@pytest.mark.parametrize("n", range(1, 11))
def test_binomial_stokes_data(n):
    s = stokes_from_gamma(validate_gamma(n, cpn_gamma(n))).s
    assert max(abs(s[k - 1] - comb(n + 1, k)) for k in range(1, n + 1)) < 1e-9


def test_n1_closed_form():
    rng = np.random.default_rng(1)
    for g in rng.uniform(-1, 1, 1000):
        s = stokes_from_gamma(validate_gamma(1, (g, -g))).s[0]
        assert abs(s - 2 * math.sin(math.pi * g / 2)) < 1e-12
    assert abs(stokes_from_gamma(validate_gamma(1, (0, 0))).s[0]) < 1e-15


def _brute_e(xs, k):
    return sum(math.prod(c) for c in itertools.combinations(xs, k))


@given(admissible())
def test_elementary_symmetric_against_brute_force(a):
    xs = stokes_exponentials(a)
    e = elementary_symmetric(xs)
    for k in range(len(xs) + 1):
        assert abs(e[k] - (_brute_e(xs, k) if k else 1)) < 1e-10


@given(admissible())
def test_stokes_real_and_palindromic(a):
    s = stokes_from_gamma(a)
    assert s.is_palindromic(1e-9)


def test_exponentials_are_conjugation_closed():
    a = random_admissible_gamma(5, np.random.default_rng(7))
    xs = sorted(stokes_exponentials(a), key=lambda z: (round(z.real, 9), z.imag))
    conj = sorted((z.conjugate() for z in xs), key=lambda z: (round(z.real, 9), z.imag))
    np.testing.assert_allclose(xs, conj, atol=1e-12)


# -- gamma / m --------------------------------------------------------------------------


def test_gamma_m_examples():
    for n in range(1, 6):
        assert gamma_to_m(validate_gamma(n, cpn_gamma(n))) == tuple(-x for x in rho(n))
    assert gamma_to_m(validate_gamma(3, (0, 0, 0, 0))) == (0, 0, 0, 0)


@given(admissible())
def test_gamma_m_roundtrip(a):
    b = m_to_gamma(gamma_to_m(a))
    assert b.n == a.n
    np.testing.assert_allclose([float(x) for x in b.gamma], [float(x) for x in a.gamma], atol=1e-15)


def test_gamma_m_roundtrip_exact():
    a = validate_gamma(3, (Fraction(3, 2), Fraction(1, 7), Fraction(-1, 7), Fraction(-3, 2)))
    assert m_to_gamma(gamma_to_m(a)) == a


# -- Higgs exponents -----------------------------------------------------------------------


def test_higgs_lee_yang():
    assert higgs_to_m(HiggsExponents(1, 5, (1, 2), symmetric=False)) == (Fraction(1, 10), Fraction(-1, 10))


@pytest.mark.parametrize("n", range(1, 7))
@pytest.mark.parametrize("k0", [0, 2, 5])
def test_higgs_cpn(n, k0):
    k = (k0,) + (-1,) * n
    N = n + 1 + sum(k)
    assert higgs_to_m(HiggsExponents(n, N, k)) == tuple(-x for x in rho(n))


def test_higgs_validation():
    with pytest.raises(ConstraintViolation) as e:
        HiggsExponents(2, 3, (1, -2, 1))
    assert e.value.kind == "k_lower_bound"
    with pytest.raises(ConstraintViolation) as e:
        HiggsExponents(2, 7, (1, 1, 1))
    assert e.value.kind == "normalization"
    with pytest.raises(ConstraintViolation) as e:
        HiggsExponents(2, 5, (0, 2, 0))
    assert e.value.kind == "k_symmetry"


def symmetric_k():
    def build(n, vals, k0):
        k = [k0] + [0] * n
        for i in range(1, n + 1):
            k[i] = vals[min(i, n + 1 - i) - 1]
        return n, tuple(k)

    return st.integers(1, 6).flatmap(
        lambda n: st.builds(build, st.just(n), st.lists(st.integers(-1, 4), min_size=n, max_size=n), st.integers(-1, 4))
    ).filter(lambda t: t[0] + 1 + sum(t[1]) > 0)


@given(symmetric_k())
def test_higgs_to_m_properties(nk):
    n, k = nk
    N = n + 1 + sum(k)
    m = higgs_to_m(HiggsExponents(n, N, k))
    ratio = Fraction(n + 1, N)
    for i in range(n + 1):
        assert m[i - 1] - m[i] + 1 == ratio * (k[i] + 1)  # includes the cyclic i = 0 relation
        assert m[i] + m[n - i] == 0
    a = m_to_gamma(m)  # admissible since k_i >= -1
    assert satisfies_star(a.m)


def test_gamma_inline_convention_halves_differences():
    h = HiggsExponents(2, 6, (1, 1, 1))
    a, b = higgs_to_m(h), higgs_to_m(h, "gamma_inline")
    for i in range(1, 3):
        assert b[i - 1] - b[i] == (a[i - 1] - a[i]) / 2
    with pytest.raises(ValueError):
        higgs_to_m(h, "other")


def test_t_from_q():
    h = HiggsExponents(2, 3, (0, 0, 0))
    assert t_from_q(h, 1.7 + 0.2j) == pytest.approx(1.7 + 0.2j)
    assert t_from_q(HiggsExponents(1, 2, (0, 0)), 4) == pytest.approx(4)
    h = HiggsExponents(1, 5, (1, 2), symmetric=False)
    q = 0.3 + 0.8j
    assert t_from_q(h, q, branch=1) == pytest.approx(t_from_q(h, q) * cmath.exp(2j * math.pi * 5 / 2))
    with pytest.raises(ValueError):
        t_from_q(h, 0)


# -- Steinberg matrix ------------------------------------------------------------------------


@pytest.mark.parametrize("n", range(1, 8))
def test_steinberg_unipotent_for_cpn(n):
    S = steinberg_matrix(StokesParameters(n, [comb(n + 1, k) for k in range(1, n + 1)]))
    expected = [(-1) ** k * comb(n + 1, k) for k in range(n + 2)]  # (l - 1)^(n+1)
    np.testing.assert_allclose(S.charpoly(), expected, atol=1e-9)
    N = np.asarray(S.entries) - np.eye(n + 1)
    assert np.allclose(np.linalg.matrix_power(N, n + 1), 0, atol=1e-6)


def test_steinberg_n1_zero():
    ev = sorted(steinberg_matrix(StokesParameters(1, [0])).eigenvalues(), key=lambda z: z.imag)
    np.testing.assert_allclose(ev, [-1j, 1j], atol=1e-14)


@given(st.integers(1, 7).flatmap(lambda n: st.lists(st.floats(-5, 5), min_size=n, max_size=n).map(lambda s: (n, s))))
def test_steinberg_roundtrip_and_det(ns):
    n, s = ns
    S = steinberg_matrix(StokesParameters(n, s))
    np.testing.assert_allclose(S.stokes().s, s, atol=1e-12 * (1 + max(map(abs, s))) * 10 ** (n / 2))
    assert abs(S.det() - 1) < 1e-9 * (1 + max(map(abs, s))) ** n
    # independent oracle for the characteristic polynomial
    np.testing.assert_allclose(S.charpoly(), np.poly(S.entries), atol=1e-8 * (1 + max(map(abs, s))) ** n)


def hausdorff(a, b):
    d = np.abs(np.asarray(a)[:, None] - np.asarray(b)[None, :])
    return max(d.min(axis=1).max(), d.min(axis=0).max())


@given(admissible())
def test_eigenvalues_are_semisimple_part(a):
    n = a.n
    ev = steinberg_matrix(stokes_from_gamma(a)).eigenvalues()
    target = [cmath.exp(2j * math.pi * (float(m) + float(r)) / (n + 1)) for m, r in zip(a.m, rho(n))]
    assert hausdorff(ev, target) < 1e-6  # multiple eigenvalues can lose half the digits
    assert hausdorff(target, stokes_exponentials(a)) < 1e-12


# -- alcove --------------------------------------------------------------------------------


def test_alcove_point_examples():
    for n in range(1, 5):
        assert alcove_point([-x for x in rho(n)]) == (0,) * (n + 1)
        assert alcove_point([0] * (n + 1)) == tuple(x / (n + 1) for x in rho(n))
    with pytest.raises(ValueError):
        alcove_point([1, 0])


@pytest.mark.parametrize("n", range(1, 5))
def test_star_iff_alcove_by_sampling(n):
    rng = np.random.default_rng(n)
    hits = [0, 0]
    for _ in range(4000):
        m = rng.uniform(-n, n, n + 1)
        m -= m.mean()
        star = satisfies_star(m)
        assert star == in_alcove(alcove_point(m))
        hits[star] += 1
    assert min(hits) > 0
    for n_ in range(1, 5):
        assert in_alcove(alcove_point([-x for x in rho(n_)]))
