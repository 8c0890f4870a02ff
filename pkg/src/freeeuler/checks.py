"""Seeded invariant suites.

Each suite draws random polynomials and fields from a ``random.Random``
seeded by the caller and checks one family of identities.  Suites return a
:class:`CheckResult`; they never raise on a failed identity.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Dict, List, Optional

from .algebra import (
    NcPoly,
    VectorField,
    adjoint,
    bracket,
    cyclic_diff,
    cyclic_grad,
    directional,
    free_diff,
)
from .euler import (
    SimConfig,
    b_form,
    check_vorticity_transport,
    convective,
    euler_rhs,
    pressure_rhs,
    vorticity,
    vorticity_moments,
)
from .leray import (
    build_leray_basis,
    c_map,
    leray_project,
    project_coords,
    recover_pressure,
    theta,
)
from .oracle import build, oracle_xk_check, vacuum_expectation
from .parsing import format_poly, parse_poly
from .scalars import gauss
from .semicircular import (
    GradedFieldCoords,
    field_to_fock,
    fock_to_poly,
    inner_herm,
    inner_sym,
    poly_to_fock,
    trace,
    wick_poly,
)

# ---------------------------------------------------------------------------
# random inputs


def _coeff(rng: random.Random, exact: bool, complex_coeffs: bool, bound: int = 3):
    re = rng.randint(-bound, bound)
    im = rng.randint(-bound, bound) if complex_coeffs else 0
    if exact:
        q = Fraction(rng.choice((1, 1, 2, 3)))
        return gauss(Fraction(re) / q, Fraction(im) / q)
    return complex(re + rng.random(), im) if complex_coeffs else float(re + rng.random())


def random_poly(
    rng: random.Random,
    n: int,
    degree: int,
    exact: bool = True,
    density: float = 0.4,
    complex_coeffs: bool = False,
) -> NcPoly:
    """Random polynomial with each word of length ``<= degree`` present with probability ``density``."""
    terms = {}
    for k in range(degree + 1):
        for w in product(range(1, n + 1), repeat=k):
            if rng.random() < density:
                terms[w] = _coeff(rng, exact, complex_coeffs)
    return NcPoly(n, terms, exact)


def random_monomial(rng: random.Random, n: int, max_degree: int, exact: bool = True) -> NcPoly:
    k = rng.randint(0, max_degree)
    return NcPoly.monomial(tuple(rng.randint(1, n) for _ in range(k)), n, exact=exact)


def random_field(rng: random.Random, n: int, degree: int, exact: bool = True, **kw) -> VectorField:
    return VectorField([random_poly(rng, n, degree, exact, **kw) for _ in range(n)])


def random_divfree_sa(rng: random.Random, n: int, degree: int, exact: bool = True, **kw) -> VectorField:
    """Nonzero divergence-free self-adjoint field: project the self-adjoint part of a random field."""
    while True:
        v = leray_project(random_field(rng, n, degree, exact, **kw).self_adjoint_part())
        if any(not c.is_zero() for c in v.components):
            return v


# ---------------------------------------------------------------------------
# brute-force pairings


def all_pairings(m: int):
    """Every pair partition of ``range(m)``, as a list of pairs."""
    if m % 2:
        return
    def rec(rest):
        if not rest:
            yield []
            return
        first = rest[0]
        for i in range(1, len(rest)):
            pair = (first, rest[i])
            for tail in rec(rest[1:i] + rest[i + 1:]):
                yield [pair] + tail
    yield from rec(list(range(m)))


def is_noncrossing(pairing) -> bool:
    for a, b in pairing:
        for c, d in pairing:
            if a < c < b < d:
                return False
    return True


def brute_force_trace(word) -> int:
    """Number of non-crossing pairings of ``word`` joining equal letters."""
    return sum(
        1
        for p in all_pairings(len(word))
        if is_noncrossing(p) and all(word[a] == word[b] for a, b in p)
    )


def catalan(m: int) -> int:
    c = 1
    for k in range(m):
        c = c * 2 * (2 * k + 1) // (k + 2)
    return c


# ---------------------------------------------------------------------------
# suites


@dataclass
class CheckResult:
    name: str
    trials: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, ok: bool, what: str) -> None:
        self.trials += 1
        if not ok:
            self.failures.append(what)

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{self.name}: {status} ({self.trials - len(self.failures)}/{self.trials})"


def suite_lemma1(rng, trials, result, sign=1):
    """``sign * <[a,b], c> == <B(c,a), b>`` with ``[a,b] = -{a,b}``."""
    for t in range(trials):
        n = rng.choice((2, 3)) if trials > 1 else 2
        a, b, c = (random_divfree_sa(rng, n, 3 if n == 2 else 2) for _ in range(3))
        lhs = inner_sym(bracket(a, b), c) * sign
        rhs = inner_sym(b_form(c, a), b)
        result.record(lhs == rhs, f"trial {t}: {lhs} != {rhs}")


def suite_lemma1_literal(rng, trials, result):
    suite_lemma1(rng, trials, result, sign=-1)


def suite_b_reduction(rng, trials, result):
    for t in range(trials):
        a = random_divfree_sa(rng, 2, 3)
        result.record(b_form(a, a) == leray_project(convective(a)), f"trial {t}")


def suite_energy(rng, trials, result):
    for t in range(trials):
        D = rng.randint(3, 5)
        v = random_divfree_sa(rng, 2, 3)
        cfg = SimConfig(n=2, trunc_degree=D, mode="exact")
        result.record(inner_sym(euler_rhs(v, cfg), v) == 0, f"trial {t}, D={D}")
    cfg = SimConfig(n=2, trunc_degree=3, mode="exact")
    rot = VectorField([NcPoly.gen(2, 2), -NcPoly.gen(1, 2)])
    rhs = euler_rhs(rot, cfg)
    result.record(all(c.is_zero() for c in rhs.components), "rotation field is not stationary")


def suite_catalan(rng, trials, result):
    F = build(1, 12)
    for m in range(7):
        word = (1,) * (2 * m)
        sym = trace(NcPoly.monomial(word, 1))
        result.record(sym == catalan(m), f"tau(s1^{2 * m}) = {sym}")
        result.record(brute_force_trace(word) == sym, f"brute force at m={m}")
        num = vacuum_expectation(F, NcPoly.monomial(word, 1))
        result.record(abs(num - sym) <= 1e-10 * max(1, sym), f"oracle at m={m}: {num}")
    for t in range(trials):
        n = rng.randint(2, 3)
        word = tuple(rng.randint(1, n) for _ in range(2 * rng.randint(0, 4)))
        result.record(brute_force_trace(word) == trace(NcPoly.monomial(word, n)), f"word {word}")


def suite_trace_oracle(rng, trials, result):
    spaces = {n: build(n, 8) for n in (1, 2, 3)}
    for t in range(trials):
        n = rng.randint(1, 3)
        P = random_monomial(rng, n, 8)
        sym = trace(P)
        num = vacuum_expectation(spaces[n], P)
        result.record(abs(num - sym) <= 1e-10 * max(1, abs(sym)), f"{format_poly(P)}: {sym} vs {num}")


def suite_vorticity_transport(rng, trials, result):
    rot = VectorField([NcPoly.gen(2, 2), -NcPoly.gen(1, 2)])
    result.record(check_vorticity_transport(rot, 2) == 0, "rotation field, m=2")
    for t in range(trials):
        v = random_divfree_sa(rng, 2, 3)
        for m in range(1, 5):
            value = check_vorticity_transport(v, m)
            result.record(value == 0, f"trial {t}, m={m}: {value}")


def suite_vorticity_value(rng, trials, result):
    rot = VectorField([NcPoly.gen(2, 2), -NcPoly.gen(1, 2)])
    omega = vorticity(rot)
    m1, m2 = vorticity_moments(rot, 2)
    result.record(m2 == 8, f"tau(Omega^2) = {m2}")
    result.record(m1 == 0, f"tau(Omega) = {m1}")
    result.record(c_map(omega).is_zero(), "C(Omega) != 0")
    for t in range(trials):
        v = random_divfree_sa(rng, 2, 3)
        om = vorticity(v)
        result.record(om == om.adjoint(), f"trial {t}: Omega not self-adjoint")
        result.record(trace(om) == 0, f"trial {t}: tau(Omega) != 0")


def suite_exact_sequence(rng, trials, result):
    for t in range(trials):
        n = rng.randint(1, 3)
        R = random_poly(rng, n, 5, complex_coeffs=True, density=0.3)
        a = random_field(rng, n, 5, complex_coeffs=True, density=0.3)
        result.record(theta(cyclic_grad(R)).is_zero(), f"trial {t}: theta(delta R)")
        result.record(c_map(theta(a)).is_zero(), f"trial {t}: C(theta(a))")
        result.record(trace(theta(a)) == 0, f"trial {t}: tau(theta(a))")


def _block_k(x: GradedFieldCoords, k: int) -> GradedFieldCoords:
    from .semicircular import GradedVector

    return GradedFieldCoords(
        [GradedVector._make(x.n, {u: c for u, c in comp.coords.items() if len(u) == k}, x.exact) for comp in x.components]
    )


def suite_leray(rng, trials, result, max_k: int = 4, max_n: int = 3):
    for n in range(1, max_n + 1):
        for k in range(max_k + 1):
            basis = build_leray_basis(n, k)
            if n ** (k + 1) <= 81:
                result.record(basis.rank == basis.reference_rank(), f"rank n={n} k={k}")
                result.record(
                    basis.projection_matrix() == basis.reference_projection_matrix(),
                    f"projector n={n} k={k}",
                )
            result.record(oracle_xk_check(n, k), f"oracle n={n} k={k}")
            # X_k is orthogonal to every cyclic gradient under both forms
            grads = [field_to_fock(cyclic_grad(wick_poly(w, n))) for w in product(range(1, n + 1), repeat=k + 1)]
            grads += [field_to_fock(cyclic_grad(random_poly(rng, n, k + 3, density=0.2))) for _ in range(3)]
            grads = [_block_k(g, k) for g in grads]
            for i in range(len(basis.generators)):
                x = basis.generator_coords(i)
                ok = all(inner_herm(x, g) == 0 and inner_sym(x, g) == 0 for g in grads)
                if not ok:
                    result.record(False, f"generator {i} n={n} k={k} not orthogonal")
                    break
            else:
                result.record(True, "")
    for n in (2, 3, 4):
        b = build_leray_basis(n, 1)
        result.record(b.rank == n * (n - 1) // 2 == b.reference_rank(), f"rank X_1 for n={n}")
    for t in range(trials):
        n = rng.randint(1, max_n)
        deg = rng.randint(0, max_k)
        x = field_to_fock(random_field(rng, n, deg, complex_coeffs=True))
        y = field_to_fock(random_field(rng, n, deg, complex_coeffs=True))
        px, py = project_coords(x), project_coords(y)
        result.record(project_coords(px) == px, f"trial {t}: idempotence")
        result.record(inner_herm(px, y) == inner_herm(x, py), f"trial {t}: Hermitian self-adjointness")
        result.record(inner_sym(px, y) == inner_sym(x, py), f"trial {t}: symmetric self-adjointness")
        blocks_in, blocks_out = x.blocks(), px.blocks()
        result.record(set(blocks_out) <= set(blocks_in), f"trial {t}: degree preservation")


def suite_pressure(rng, trials, result):
    for t in range(trials):
        n = rng.randint(1, 3)
        R = random_poly(rng, n, 5, density=0.3)
        p = recover_pressure(cyclic_grad(R))
        result.record(cyclic_grad(p) == cyclic_grad(R), f"trial {t}: gradient mismatch")
        result.record(theta(cyclic_grad(p)).is_zero(), f"trial {t}: theta(delta p)")
        result.record(trace(p) == 0, f"trial {t}: tau(p)")
    for t in range(max(1, trials // 4)):
        v = random_divfree_sa(rng, 2, 2)
        cfg = SimConfig(n=2, trunc_degree=3, mode="exact")
        _, p = pressure_rhs(v, cfg)
        result.record(theta(cyclic_grad(p)).is_zero(), f"pressure of trial {t}")


def suite_leibniz(rng, trials, result):
    for t in range(trials):
        n = rng.randint(1, 3)
        P = random_poly(rng, n, 3, complex_coeffs=True, density=0.3)
        Q = random_poly(rng, n, 2, complex_coeffs=True, density=0.4)
        j = rng.randint(1, n)
        lhs = free_diff(j, P * Q)
        rhs = free_diff(j, P).right_mul(Q) + free_diff(j, Q).left_mul(P)
        result.record(lhs == rhs, f"trial {t}: Leibniz for d_{j}")
        result.record(cyclic_diff(j, adjoint(P)) == adjoint(cyclic_diff(j, P)), f"trial {t}: involution")
        b = random_field(rng, n, 2, complex_coeffs=True, density=0.3)
        lhs = directional(b, P * Q)
        rhs = directional(b, P) * Q + P * directional(b, Q)
        result.record(lhs == rhs, f"trial {t}: derivation")


def suite_lie(rng, trials, result):
    for t in range(trials):
        n = rng.randint(1, 2)
        a, b, c = (random_field(rng, n, 2, density=0.3) for _ in range(3))
        result.record(bracket(a, b) == -bracket(b, a), f"trial {t}: antisymmetry")
        jac = bracket(a, bracket(b, c)) + bracket(b, bracket(c, a)) + bracket(c, bracket(a, b))
        result.record(all(x.is_zero() for x in jac.components), f"trial {t}: Jacobi")
        result.record(bracket(a.adjoint(), b.adjoint()) == bracket(a, b).adjoint(), f"trial {t}: adjoint")


def suite_roundtrip(rng, trials, result):
    for t in range(trials):
        n = rng.randint(1, 3)
        P = random_poly(rng, n, rng.randint(0, 8 if n == 1 else 5), complex_coeffs=rng.random() < 0.5, density=0.2)
        result.record(fock_to_poly(poly_to_fock(P)) == P, f"trial {t}: Fock round trip")
        text = format_poly(P)
        result.record(parse_poly(text, n) == P, f"trial {t}: parse(format) for {text}")


@dataclass(frozen=True)
class Suite:
    run: Callable
    trials: int
    description: str


SUITES: Dict[str, Suite] = {
    "lemma1": Suite(suite_lemma1, 50, "<[a,b],c> = <B(c,a),b> for divergence-free self-adjoint a, b, c"),
    "lemma1-literal": Suite(suite_lemma1_literal, 20, "-<[a,b],c> = <B(c,a),b> with [a,b] = -{a,b} (known to fail)"),
    "b-reduction": Suite(suite_b_reduction, 30, "B(a,a) = Pi(D_a a)"),
    "energy": Suite(suite_energy, 10, "<euler_rhs(v), v> = 0 under truncation; rotation field stationary"),
    "catalan": Suite(suite_catalan, 30, "semicircle moments vs pairing enumeration vs Fock oracle"),
    "trace-oracle": Suite(suite_trace_oracle, 200, "symbolic trace vs vacuum expectation"),
    "vorticity-transport": Suite(suite_vorticity_transport, 10, "tau(D_v Omega^m) = 0, m = 1..4"),
    "vorticity-value": Suite(suite_vorticity_value, 10, "tau(Omega^2) = 8 for the rotation field; tau(Omega) = 0"),
    "exact-sequence": Suite(suite_exact_sequence, 100, "theta(delta R) = 0, C(theta(a)) = 0, tau(theta(a)) = 0"),
    "leray": Suite(suite_leray, 30, "projection structure, orthogonality, ranks, numeric oracle"),
    "pressure": Suite(suite_pressure, 30, "pressure recovery and theta(delta p) = 0"),
    "leibniz": Suite(suite_leibniz, 50, "Leibniz rule, involution compatibility, derivation property"),
    "lie": Suite(suite_lie, 20, "antisymmetry, Jacobi identity, adjoint compatibility"),
    "roundtrip": Suite(suite_roundtrip, 100, "Fock and text round trips"),
}

# suites that run under ``check all``; the literal sign variant is excluded
DEFAULT_SUITES = [name for name in SUITES if name != "lemma1-literal"]


def run_suite(name: str, seed: int = 0, trials: Optional[int] = None) -> CheckResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; known: {', '.join(SUITES)}")
    suite = SUITES[name]
    rng = random.Random(f"{name}:{seed}")
    result = CheckResult(name)
    suite.run(rng, suite.trials if trials is None else trials, result)
    return result
