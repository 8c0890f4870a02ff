import random
from itertools import product

import numpy as np
import pytest

from freeeuler.algebra import NcPoly
from freeeuler.checks import random_poly
from freeeuler.errors import ResourceLimitError
from freeeuler.oracle import build, oracle_xk_check, vacuum_expectation
from freeeuler.semicircular import trace, wick_poly

s1, s2 = NcPoly.gen(1, 2), NcPoly.gen(2, 2)


def test_dimensions_and_tridiagonal_generator():
    assert build(1, 2).dim == 3
    assert build(2, 3).dim == 15
    S = build(1, 4).semicircular[0].toarray()
    assert np.array_equal(S, np.eye(5, k=1) + np.eye(5, k=-1))


def test_creation_and_annihilation_are_adjoint():
    F = build(2, 3)
    for j in (1, 2):
        assert (F.annihilation(j) != F.creation[j - 1].T).nnz == 0


def test_vacuum_expectation_examples():
    F = build(2, 4)
    assert vacuum_expectation(F, s1 ** 4) == 2
    assert vacuum_expectation(F, s1 * s1 * s2 * s2) == 1
    assert vacuum_expectation(F, s1 * s2 * s1 * s2) == 0
    assert vacuum_expectation(F, NcPoly.one(2)) == 1


def test_refuses_beyond_level_and_cap():
    F = build(2, 3)
    with pytest.raises(ValueError):
        vacuum_expectation(F, s1 ** 4)
    with pytest.raises(ValueError):
        vacuum_expectation(F, NcPoly.gen(1, 3))
    with pytest.raises(ResourceLimitError):
        build(3, 20)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_monomial_traces_agree(n):
    F = build(n, 8, cap=10 ** 5)
    for k in range(0, 9 if n < 3 else 7):
        for w in product(range(1, n + 1), repeat=k):
            P = NcPoly.monomial(w, n)
            assert abs(vacuum_expectation(F, P) - complex(trace(P))) < 1e-9


def test_random_polynomial_traces_agree():
    rng = random.Random(4)
    F = build(3, 6)
    for _ in range(30):
        P = random_poly(rng, 3, 6, complex_coeffs=True)
        assert abs(vacuum_expectation(F, P) - complex(trace(P))) < 1e-9


def test_wick_words_map_vacuum_to_basis_vectors():
    # W(w) Omega = e_w, checked against the symbolic Wick polynomials
    F = build(2, 4)
    for k in range(5):
        for w in product((1, 2), repeat=k):
            out = F.act(wick_poly(w, 2), F.vacuum())
            expected = np.zeros(F.dim)
            expected[F.index[w]] = 1
            assert np.allclose(out, expected, atol=1e-12)


@pytest.mark.parametrize("n,k", [(1, 3), (2, 0), (2, 1), (2, 3), (3, 2), (2, 4), (3, 3)])
def test_divergence_free_space_matches_matrix_oracle(n, k):
    assert oracle_xk_check(n, k)


def test_oracle_cap():
    with pytest.raises(ResourceLimitError):
        oracle_xk_check(4, 10)
