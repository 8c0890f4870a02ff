from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given

from freeeuler.algebra import NcPoly, VectorField, cyclic_diff, cyclic_grad
from freeeuler.errors import NotGradientError, ResourceLimitError
from freeeuler.leray import (
    build_leray_basis,
    c_map,
    c_map_via_grad,
    galerkin_project,
    gradient_part,
    is_divergence_free,
    leray_project,
    project_coords,
    recover_pressure,
    rotation_class,
    theta,
)
from freeeuler.semicircular import (
    GradedFieldCoords,
    GradedVector,
    field_to_fock,
    fock_to_field,
    inner_herm,
    inner_sym,
    trace,
    wick_poly,
)

from conftest import fields, polys

s1, s2 = NcPoly.gen(1, 2), NcPoly.gen(2, 2)
rot = VectorField([s2, -s1])
rad = VectorField([s1, s2])


def divergence_free_by_definition(a: VectorField) -> bool:
    """``sum_j tau(a_j delta_j R) == 0`` for every monomial ``R`` of degree ``<= deg a + 1``."""
    if a.is_zero():
        return True
    n = a.n
    for k in range(a.degree + 2):
        for w in product(range(1, n + 1), repeat=k):
            R = NcPoly.monomial(w, n)
            if sum(trace(a[j] * cyclic_diff(j + 1, R)) for j in range(n)) != 0:
                return False
    return True


def test_projection_examples():
    assert leray_project(rot) == rot
    assert leray_project(rad).is_zero()
    consts = VectorField([NcPoly.constant(3, 2), NcPoly.constant(Fraction(1, 2), 2)])
    assert leray_project(consts).is_zero()


def test_divergence_free_examples():
    assert is_divergence_free(rot)[0]
    assert not is_divergence_free(rad)[0]
    assert is_divergence_free(VectorField.zero(2))[0]
    ok, residual = is_divergence_free(rad.to_float())
    assert not ok and residual > 1


def test_basis_examples():
    assert build_leray_basis(2, 0).rank == 0
    b = build_leray_basis(2, 1)
    assert b.rank == 1
    assert build_leray_basis(3, 1).rank == 3
    # words are ordered 11, 12, 21, 22; the generator of 12 is (s2, -s1)
    assert b.generator_coords(1) == field_to_fock(rot)
    assert b.generator_coords(2) == field_to_fock(-rot)
    assert b.generator_coords(0).is_zero()


@pytest.mark.parametrize("n", [2, 3, 4])
def test_rank_x1(n):
    b = build_leray_basis(n, 1)
    assert b.rank == n * (n - 1) // 2 == b.reference_rank()


@pytest.mark.parametrize("n,k", [(1, 3), (2, 0), (2, 1), (2, 2), (2, 3), (3, 1), (3, 2)])
def test_class_projection_matches_normal_equations(n, k):
    b = build_leray_basis(n, k)
    assert b.projection_matrix() == b.reference_projection_matrix()
    assert b.rank == b.reference_rank()


def test_cap():
    with pytest.raises(ResourceLimitError):
        build_leray_basis(2, 30)


@pytest.mark.parametrize("n,k", [(2, 1), (2, 3), (3, 2)])
def test_gradient_top_block_is_class_indicator(n, k):
    # top block of delta(W(w)) equals (k+1)/|C| on the rotation class C of w
    for w in product(range(1, n + 1), repeat=k + 1):
        x = field_to_fock(cyclic_grad(wick_poly(w, n)))
        cls = rotation_class(w)
        top = {(j, u): c for j, comp in enumerate(x.components, start=1) for u, c in comp.coords.items() if len(u) == k}
        expected = {(v[-1], v[:-1]): Fraction(k + 1, len(cls)) for v in cls}
        assert top == expected


@given(fields(max_degree=3))
def test_projection_is_idempotent_and_divergence_free(a):
    p = leray_project(a)
    assert leray_project(p) == p
    assert is_divergence_free(p)[0]
    assert divergence_free_by_definition(p)


@given(fields(n=2, max_degree=2, max_terms=4))
def test_membership_matches_definition(a):
    assert is_divergence_free(a)[0] == divergence_free_by_definition(a)


@given(fields(max_degree=3), fields(max_degree=3))
def test_projection_self_adjoint_both_forms(a, b):
    pa, pb = leray_project(a), leray_project(b)
    assert inner_herm(pa, b) == inner_herm(a, pb)
    assert inner_sym(pa, b) == inner_sym(a, pb)


@given(fields(max_degree=4))
def test_projection_preserves_degree_blocks_and_adjoint(a):
    x = field_to_fock(a)
    assert set(project_coords(x).blocks()) <= set(x.blocks())
    assert leray_project(a.adjoint()) == leray_project(a).adjoint()


@given(polys(n=2, max_degree=5, max_terms=6))
def test_gradients_are_removed(R):
    assert leray_project(cyclic_grad(R)).is_zero()


@given(fields(max_degree=4))
def test_galerkin_projection(a):
    # Fock blocks above D are dropped, which is not the same as dropping monomials
    D = 2
    x = field_to_fock(leray_project(a))
    kept = GradedFieldCoords(
        [GradedVector(2, {u: c for u, c in comp.coords.items() if len(u) <= D}) for comp in x.components]
    )
    assert galerkin_project(a, D) == fock_to_field(kept)


def test_theta_and_c_examples():
    assert theta(rot) == (s1 * s2 - s2 * s1).scale(2)
    assert theta(VectorField.zero(2)).is_zero()
    assert c_map(s1 * s2) == s1 * s2 + s2 * s1
    assert c_map(NcPoly.one(2)).is_zero()


@given(polys(n=2, max_degree=6, max_terms=6))
def test_theta_kills_gradients(R):
    assert theta(cyclic_grad(R)).is_zero()


@given(fields(max_degree=5, max_terms=6))
def test_c_theta_and_trace_theta_vanish(a):
    assert c_map(theta(a)).is_zero()
    assert trace(theta(a)) == 0


@given(polys(n=2, max_degree=5))
def test_c_map_two_routes(P):
    assert c_map(P) == c_map_via_grad(P)


def test_pressure_examples():
    p = recover_pressure(rad)
    assert cyclic_grad(p) == rad
    assert trace(p) == 0
    assert p == (s1 * s1 + s2 * s2).scale(Fraction(1, 2)) - 1
    assert recover_pressure(VectorField.zero(2)).is_zero()
    g = cyclic_grad(s1 * s2 * s1)
    q = recover_pressure(g)
    assert cyclic_grad(q) == g
    assert q == (s1 * s1 * s2 + s1 * s2 * s1 + s2 * s1 * s1).scale(Fraction(1, 3))


def test_pressure_rejects_non_gradients():
    with pytest.raises(NotGradientError):
        recover_pressure(rot)


@given(polys(n=2, max_degree=5, max_terms=6))
def test_pressure_round_trip(R):
    p = recover_pressure(cyclic_grad(R))
    assert cyclic_grad(p) == cyclic_grad(R)
    assert trace(p) == 0
    assert theta(cyclic_grad(p)).is_zero()


@given(fields(max_degree=3))
def test_decomposition(a):
    g = gradient_part(a)
    assert g + leray_project(a) == a
    assert cyclic_grad(recover_pressure(g)) == g


def test_float_pressure():
    p = recover_pressure(rad.to_float())
    assert abs(p.coefficient((1, 1)) - 0.5) < 1e-14
    assert abs(p.coefficient(()) + 1) < 1e-14
