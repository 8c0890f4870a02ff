import math
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, strategies as st

from freeeuler.algebra import NcPoly, VectorField, adjoint
from freeeuler.scalars import I
from freeeuler.semicircular import (
    GradedVector,
    apply_number_op,
    apply_ou,
    field_to_fock,
    fock_to_field,
    fock_to_poly,
    herm_norm,
    inner_herm,
    inner_sym,
    pairing_count,
    poly_to_fock,
    tau_pair,
    trace,
    trace_product,
    wick_poly,
)

from conftest import fields, polys, words

s1, s2 = NcPoly.gen(1, 2), NcPoly.gen(2, 2)
zero = NcPoly.zero(2)


def naive_pairings(word):
    """Count non-crossing letter-respecting pair partitions by listing set partitions into pairs."""
    m = len(word)
    if m % 2:
        return 0
    count = 0

    def rec(rest, pairs):
        nonlocal count
        if not rest:
            crossing = any(a < c < b < d for a, b in pairs for c, d in pairs)
            if not crossing and all(word[a] == word[b] for a, b in pairs):
                count += 1
            return
        a = rest[0]
        for i in range(1, len(rest)):
            rec(rest[1:i] + rest[i + 1:], pairs + [(a, rest[i])])

    rec(list(range(m)), [])
    return count


def test_trace_examples():
    assert trace(s1 * s1) == 1
    assert trace(s1 ** 4) == 2
    assert trace(s1 * s2 * s1 * s2) == 0
    assert trace(s1 * s1 * s2 * s2) == 1
    assert trace(NcPoly.one(2)) == 1
    assert trace(s1) == 0


def test_catalan_moments():
    P = NcPoly.gen(1, 1)
    assert [trace(P ** (2 * m)) for m in range(7)] == [1, 1, 2, 5, 14, 42, 132]


@pytest.mark.parametrize("n,length", [(1, 8), (2, 6), (2, 8), (3, 6)])
def test_pairing_count_against_enumeration(n, length):
    for w in product(range(1, n + 1), repeat=length):
        if w[0] == 1:  # first letter fixed to keep the loop small
            assert pairing_count(w) == naive_pairings(w)


@given(polys(max_degree=3), polys(max_degree=3))
def test_traciality(P, Q):
    assert trace(P * Q) == trace(Q * P)


@given(polys(max_degree=4))
def test_trace_of_adjoint_is_conjugate(P):
    assert trace(adjoint(P)) == trace(P).conjugate()


@given(polys(max_degree=3), polys(max_degree=3))
def test_tau_pair_matches_trace(P, Q):
    assert tau_pair(P, Q) == trace(P * Q)


def test_fock_examples():
    assert poly_to_fock(s1 * s1) == GradedVector(2, {(): 1, (1, 1): 1})
    assert poly_to_fock(s1 * s2) == GradedVector(2, {(1, 2): 1})
    assert poly_to_fock(NcPoly.one(2)) == GradedVector.vacuum(2)
    assert fock_to_poly(GradedVector(2, {(1, 1): 1})) == s1 * s1 - 1
    assert fock_to_poly(GradedVector(2, {(1, 1, 1): 1})) == s1 ** 3 - s1.scale(2)
    assert fock_to_poly(GradedVector(2, {(1, 2): 1})) == s1 * s2


@given(polys(max_degree=6, max_terms=8))
def test_fock_round_trip(P):
    assert fock_to_poly(poly_to_fock(P)) == P


@given(st.lists(words(2, 4), min_size=2, max_size=2))
def test_wick_orthonormal(pair):
    # tau(W(u)* W(v)) by pairing counts, independent of the Fock map
    u, v = pair
    value = trace(adjoint(wick_poly(u, 2)) * wick_poly(v, 2))
    assert value == (1 if u == v else 0)


def test_chebyshev_recursion():
    x = NcPoly.gen(1, 1)
    prev, cur = NcPoly.one(1), x
    for k in range(2, 8):
        prev, cur = cur, x * cur - prev
        assert wick_poly((1,) * k, 1) == cur


def test_inner_examples():
    assert inner_sym(VectorField([s1, zero]), VectorField([s1, zero])) == 1
    assert inner_sym(VectorField([s2, -s1]), VectorField([s1, s2])) == 0
    assert inner_herm(VectorField([s1.scale(I), zero]), VectorField([s1.scale(I), zero])) == 1
    assert inner_herm(VectorField([s1 * s2, zero]), VectorField([s1 * s2, zero])) == 1


@given(fields(max_degree=3), fields(max_degree=3))
def test_forms_match_traces(a, b):
    assert inner_sym(a, b) == sum(trace(x * y) for x, y in zip(a, b))
    assert inner_herm(a, b) == sum(trace(x * adjoint(y)) for x, y in zip(a, b))


@given(fields(max_degree=3))
def test_herm_positive(a):
    value = inner_herm(a, a)
    assert value.imag == 0 and value.real >= 0
    assert (value == 0) == a.is_zero()
    assert math.isclose(herm_norm(a) ** 2, float(Fraction(value.real)), rel_tol=1e-12, abs_tol=1e-300)


@given(fields(max_degree=4))
def test_field_round_trip(a):
    assert fock_to_field(field_to_fock(a)) == a


def test_trace_product_exact_and_float():
    P = s1 * s2 + s2 * s2 * s1 - 1
    Q = s1.scale(I) + s2 * s1 * s1
    exact = trace(P * Q * P * Q * Q)
    assert trace_product(P, Q, P, Q, Q) == exact
    approx = trace_product(P.to_float(), Q.to_float(), P.to_float(), Q.to_float(), Q.to_float())
    assert abs(approx - complex(exact)) <= 1e-10 * max(1, abs(complex(exact)))


@given(polys(max_degree=3, max_terms=4), polys(max_degree=3, max_terms=4), polys(max_degree=2, max_terms=4))
def test_trace_product_property(P, Q, R):
    assert trace_product(P, Q, R) == trace(P * Q * R)


def test_number_operator_and_ou():
    v = GradedVector(2, {(): 3, (1, 2): 5, (2,): 7})
    assert apply_number_op(v) == GradedVector(2, {(1, 2): 10, (2,): 7})
    assert apply_ou(0, v) == v
    half = apply_ou(math.log(2), GradedVector(2, {(): 3.0, (1, 2): 8.0}, exact=False))
    assert abs(half[(1, 2)] - 2.0) < 1e-12 and half[()] == 3.0
    assert apply_ou(None, v, ratio=Fraction(1, 2)) == GradedVector(
        2, {(): 3, (1, 2): Fraction(5, 4), (2,): Fraction(7, 2)}
    )
