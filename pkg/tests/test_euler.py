import random
import warnings
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from freeeuler.algebra import NcPoly, VectorField, bracket, cyclic_grad, directional, poisson_bracket
from freeeuler.checks import random_divfree_sa, random_poly
from freeeuler.errors import InstabilityError, NotDivergenceFreeError
from freeeuler.euler import (
    SimConfig,
    SimState,
    b_form,
    check_vorticity_transport,
    convective,
    euler_rhs,
    galerkin_system,
    pressure_rhs,
    simulate,
    step,
    vorticity,
    vorticity_moments,
)
from freeeuler.leray import c_map, galerkin_project, is_divergence_free, leray_project, theta
from freeeuler.scalars import I
from freeeuler.semicircular import herm_norm, inner_sym, trace

s1, s2 = NcPoly.gen(1, 2), NcPoly.gen(2, 2)
rot = VectorField([s2, -s1])
seeds = st.integers(0, 10 ** 6)


def exact_cfg(D=3, **kw):
    return SimConfig(n=2, trunc_degree=D, mode="exact", **kw)


def test_b_form_examples():
    assert b_form(rot, rot).is_zero()
    assert b_form(rot, VectorField.zero(2)).is_zero()
    with pytest.raises(NotDivergenceFreeError):
        b_form(rot, VectorField([s1, s2]))


@settings(max_examples=15)
@given(seeds)
def test_lemma1_identity(seed):
    # the identity the proof establishes: <[a,b],c> = -<{a,b},c> = <B(c,a),b>
    rng = random.Random(seed)
    a, b, c = (random_divfree_sa(rng, 2, 3) for _ in range(3))
    rhs = inner_sym(b_form(c, a), b)
    assert inner_sym(bracket(a, b), c) == rhs
    assert -inner_sym(poisson_bracket(a, b), c) == rhs


@settings(max_examples=15)
@given(seeds)
def test_b_reduction(seed):
    a = random_divfree_sa(random.Random(seed), 2, 3)
    assert b_form(a, a) == leray_project(convective(a))


@settings(max_examples=20)
@given(seeds)
def test_integration_by_parts(seed):
    rng = random.Random(seed)
    a = random_divfree_sa(rng, 2, 3)
    b, c = random_poly(rng, 2, 3, complex_coeffs=True), random_poly(rng, 2, 2, complex_coeffs=True)
    assert trace(directional(a, b) * c) == -trace(b * directional(a, c))
    assert trace(directional(a, b)) == 0


def test_euler_rhs_examples():
    assert euler_rhs(rot, exact_cfg()).is_zero()
    assert euler_rhs(VectorField.zero(2), exact_cfg()).is_zero()
    with pytest.raises(ValueError):
        euler_rhs(VectorField([s1, s2]), exact_cfg())
    with pytest.raises(ValueError):
        euler_rhs(VectorField([s2 * s1 * s2 * s1, NcPoly.zero(2)]), exact_cfg(D=2))


@settings(max_examples=15)
@given(seeds, st.integers(3, 5))
def test_truncated_energy_identity(seed, D):
    v = random_divfree_sa(random.Random(seed), 2, 3)
    r = euler_rhs(v, exact_cfg(D))
    assert inner_sym(r, v) == 0
    assert r.is_self_adjoint()
    assert is_divergence_free(r)[0]
    assert r.degree <= D


@settings(max_examples=10)
@given(seeds)
def test_viscous_term_dissipates(seed):
    v = random_divfree_sa(random.Random(seed), 2, 3)
    r = euler_rhs(v, exact_cfg(3, viscosity=Fraction(1, 10)))
    assert inner_sym(r, v) < 0


def test_pressure_rotation_field():
    rhs, p = pressure_rhs(rot, exact_cfg())
    assert rhs.is_zero()
    assert cyclic_grad(p) == VectorField([s1, s2])
    assert p == (s1 * s1 + s2 * s2).scale(Fraction(1, 2)) - 1


@settings(max_examples=10)
@given(seeds)
def test_pressure_form_consistency(seed):
    v = random_divfree_sa(random.Random(seed), 2, 2)
    D = 4  # D_v v has degree <= 3, so nothing is truncated
    rhs, p = pressure_rhs(v, exact_cfg(D))
    assert rhs == -convective(v) - cyclic_grad(p)
    assert theta(cyclic_grad(p)).is_zero()
    assert trace(p) == 0


def test_vorticity_examples():
    omega = vorticity(rot)
    assert omega == (s1 * s2 - s2 * s1).scale(2 * I)
    assert omega == omega.adjoint()
    assert vorticity(cyclic_grad(s1 * s2 * s2 + s1)).is_zero()
    assert vorticity(VectorField.zero(2)).is_zero()
    assert vorticity_moments(rot, 3) == [0, 8, 0]
    assert c_map(omega).is_zero()
    assert vorticity_moments(VectorField.zero(2), 2) == [0, 0]


def test_vorticity_transport_examples():
    assert check_vorticity_transport(rot, 2) == 0
    assert check_vorticity_transport(rot, 2, expand=True) == 0
    with pytest.raises(NotDivergenceFreeError):
        check_vorticity_transport(VectorField([s1, s2]), 1)


@settings(max_examples=8)
@given(seeds, st.integers(1, 3))
def test_vorticity_transport_two_routes(seed, m):
    v = random_divfree_sa(random.Random(seed), 2, 2)
    assert check_vorticity_transport(v, m) == check_vorticity_transport(v, m, expand=True) == 0


def test_config_validation():
    with pytest.raises(ValueError):
        SimConfig(n=2, trunc_degree=0)
    with pytest.raises(ValueError):
        SimConfig(n=2, trunc_degree=2, dt=0)
    with pytest.raises(ValueError):
        SimConfig(n=2, trunc_degree=2, viscosity=-1)
    with pytest.raises(ValueError):
        SimConfig(n=2, trunc_degree=2, integrator="leapfrog")
    with pytest.raises(TypeError):
        SimConfig(n=2, trunc_degree=2, mode="exact", dt=object())
    cfg = SimConfig(n=2, trunc_degree=2, mode="exact", dt=0.01, t_end="1/2")
    assert cfg.dt == Fraction(1, 100) and cfg.n_steps == 50
    with pytest.raises(ValueError):
        SimConfig(n=2, trunc_degree=2, mode="exact", dt="1/3", t_end=1.5).n_steps
    assert SimConfig(n=2, trunc_degree=2, dt="1/4").dt == 0.25


def test_step_examples():
    cfg = exact_cfg(dt=Fraction(1, 10), integrator="euler_explicit")
    state = SimState(t=Fraction(0), v=rot)
    assert step(state, cfg).v == rot
    v0 = random_divfree_sa(random.Random(3), 2, 2)
    r = euler_rhs(v0, cfg)
    out = step(SimState(t=Fraction(0), v=v0), cfg)
    assert out.v == galerkin_project(v0 + r.scale(Fraction(1, 10)), 3)
    assert out.t == Fraction(1, 10)
    assert out.v.is_self_adjoint() and is_divergence_free(out.v)[0]
    fcfg = SimConfig(n=2, trunc_degree=3, dt=0.01)
    fstate = step(SimState(t=0.0, v=rot.to_float()), fcfg)
    assert herm_norm(fstate.v - rot.to_float()) <= 1e-12


def test_simulate_trivial_cases():
    cfg = SimConfig(n=2, trunc_degree=3, dt=0.1, t_end=0.5, moments=2)
    states = simulate(VectorField.zero(2).to_float(), cfg)
    assert len(states) == 6
    assert all(s.energy == 0 and s.moments == [0, 0] for s in states)
    cfg = SimConfig(n=2, trunc_degree=3, dt=0.1, t_end=0)
    assert len(simulate(rot.to_float(), cfg)) == 1


def test_simulate_stationary_exact():
    cfg = exact_cfg(dt=Fraction(1, 4), t_end=1)
    states = simulate(rot, cfg)
    assert [s.t for s in states] == [0, Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), 1]
    assert all(s.v == rot and s.energy == 2 and s.moments[1] == 8 for s in states)


def test_simulate_warns_on_projection():
    cfg = SimConfig(n=2, trunc_degree=3, dt=0.1, t_end=0.1)
    v0 = VectorField([s2 + s1, s2 - s1]).to_float()
    with pytest.warns(UserWarning, match="projected"):
        states = simulate(v0, cfg)
    assert herm_norm(states[0].v - rot.to_float()) < 1e-14
    with pytest.raises(ValueError):
        simulate(VectorField([s1.scale(I), NcPoly.zero(2)]), exact_cfg())


def test_exact_and_float_runs_agree():
    v0 = random_divfree_sa(random.Random(11), 2, 2)
    # explicit Euler keeps exact coefficient sizes manageable (RK4 is degree 16 per step)
    kw = dict(integrator="euler_explicit", moments=2)
    ex = simulate(v0, exact_cfg(dt=Fraction(1, 20), t_end=Fraction(3, 20), **kw))
    fl = simulate(v0.to_float(), SimConfig(n=2, trunc_degree=3, dt=0.05, t_end=0.15, **kw))
    assert len(ex) == len(fl) == 4
    for e, f in zip(ex, fl):
        assert herm_norm(e.v.to_float() - f.v) <= 1e-12 * herm_norm(f.v)
        assert abs(float(e.energy) - f.energy) <= 1e-12 * f.energy


def test_galerkin_system_matches_symbolic():
    cfg = SimConfig(n=2, trunc_degree=4)
    system = galerkin_system(2, 4)
    for seed in range(5):
        v = random_divfree_sa(random.Random(seed), 2, 3).to_float()
        sym = euler_rhs(v, cfg)
        arr = system.to_field(system.rhs(system.from_field(v)))
        assert herm_norm(sym - arr) <= 1e-12 * max(1.0, herm_norm(sym))
        x = system.from_field(v)
        assert abs(system.energy(x) - inner_sym(v, v)) < 1e-9


def test_viscous_energy_decreases():
    v0 = random_divfree_sa(random.Random(5), 2, 3).to_float()
    states = simulate(v0, SimConfig(n=2, trunc_degree=4, dt=0.01, t_end=0.5, viscosity=0.1, sample_every=5))
    energies = [s.energy for s in states]
    assert all(b <= a for a, b in zip(energies, energies[1:]))


def test_blow_up_is_reported():
    v0 = random_divfree_sa(random.Random(2), 2, 3).to_float().scale(1e3)
    cfg = SimConfig(n=2, trunc_degree=4, dt=1.0, t_end=50, integrator="euler_explicit", moments=0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        with pytest.raises(InstabilityError):
            simulate(v0, cfg)
