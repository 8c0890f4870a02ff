"""Free Euler dynamics on polynomial vector fields.

The equation ``dv/dt = -Pi(D_v v)`` is not closed on polynomials of bounded
degree, so the dynamics are Galerkin-truncated: ``D_v v`` is computed in
full, each Fock degree block ``k <= D`` is projected onto the divergence-free
part and blocks above ``D`` are discarded.  The truncated projection is
orthogonal and fixes ``v``, which keeps ``<v, v>`` exactly conserved.

Exact mode runs the symbolic polynomial code.  Float mode compiles the
quadratic right-hand side once per ``(n, D)`` into index arrays
(:class:`GalerkinSystem`).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import List, Optional

import numpy as np

from .algebra import NcPoly, VectorField, _add_into, directional
from .errors import InstabilityError, NotDivergenceFreeError
from .leray import (
    FLOAT_TOL,
    _check_cap,
    canonical_rotation,
    galerkin_project,
    is_divergence_free,
    leray_project,
    project_coords,
    recover_pressure,
    rotation_class,
    theta,
)
from .scalars import I
from .semicircular import (
    GradedFieldCoords,
    GradedVector,
    apply_number_op,
    field_to_fock,
    fock_image,
    fock_to_field,
    herm_norm,
    inner_sym,
    trace,
    trace_product,
    wick,
)

INTEGRATORS = ("rk4", "euler_explicit")


def _rational(x, what):
    if isinstance(x, bool):
        raise TypeError(f"{what} must be a number")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, float):
        # decimal literal, read exactly as written
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"{what} must be rational in exact mode, got {x!r}")


def _real(x) -> float:
    return float(Fraction(x)) if isinstance(x, str) else float(x)


@dataclass
class SimConfig:
    """Run parameters.

    ``sample_every`` is the output cadence in steps; the first and last
    states are always sampled.
    """

    n: int
    trunc_degree: int
    dt: object = 0.01
    t_end: object = 1.0
    integrator: str = "rk4"
    mode: str = "float"
    viscosity: object = 0
    moments: int = 4
    sample_every: int = 1
    record_pressure: bool = True
    div_tol: float = 1e-8

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.trunc_degree < 1:
            raise ValueError("trunc_degree must be at least 1")
        if self.integrator not in INTEGRATORS:
            raise ValueError(f"unknown integrator {self.integrator!r}")
        if self.mode not in ("exact", "float"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.exact:
            self.dt = _rational(self.dt, "dt")
            self.t_end = _rational(self.t_end, "t_end")
            self.viscosity = _rational(self.viscosity, "viscosity")
        else:
            self.dt = _real(self.dt)
            self.t_end = _real(self.t_end)
            self.viscosity = _real(self.viscosity)
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.t_end < 0:
            raise ValueError("t_end must be nonnegative")
        if self.viscosity < 0:
            raise ValueError("viscosity must be nonnegative")
        if self.moments < 0 or self.sample_every < 1:
            raise ValueError("moments must be >= 0 and sample_every >= 1")

    @property
    def exact(self) -> bool:
        return self.mode == "exact"

    @property
    def n_steps(self) -> int:
        ratio = self.t_end / self.dt
        if self.exact:
            if ratio.denominator != 1:
                raise ValueError("t_end must be an integer multiple of dt")
            return int(ratio)
        steps = round(ratio)
        if abs(steps - ratio) > 1e-9 * max(1.0, ratio):
            raise ValueError("t_end must be an integer multiple of dt")
        return steps

    def as_dict(self) -> dict:
        out = {}
        for key, value in self.__dict__.items():
            out[key] = str(value) if isinstance(value, Fraction) else value
        return out


@dataclass
class SimState:
    t: object
    v: VectorField
    p: Optional[NcPoly] = None
    energy: object = None
    moments: List[object] = field(default_factory=list)
    div_residual: float = 0.0


# ---------------------------------------------------------------------------
# Lemma 1 bilinear form


def _flip_insert_sum(c: VectorField, a: VectorField, k: int) -> NcPoly:
    """``sum_j m_{c_j}(flip(d_k a_j))``: at each ``s_k`` in a word ``u s_k v`` of ``a_j``, emit ``v c_j u``."""
    terms: dict = {}
    for aj, cj in zip(a.components, c.components):
        citems = list(cj.terms.items())
        for w, alpha in aj.terms.items():
            for p, letter in enumerate(w):
                if letter != k:
                    continue
                pre, post = w[:p], w[p + 1:]
                for u, gamma in citems:
                    _add_into(terms, post + u + pre, alpha * gamma)
    return NcPoly._make(a.n, terms, a.exact)


def _require_divergence_free(a: VectorField, what: str = "field") -> None:
    ok, residual = is_divergence_free(a)
    if not ok:
        raise NotDivergenceFreeError(f"{what} is not divergence-free (residual {residual:.3g})")


def b_form_unprojected(c: VectorField, a: VectorField) -> VectorField:
    """``(D_a c_k + sum_j m_{c_j}(flip d_k a_j))_k`` before projection."""
    return VectorField(
        [directional(a, c.components[k - 1]) + _flip_insert_sum(c, a, k) for k in range(1, a.n + 1)]
    )


def b_form(c: VectorField, a: VectorField, D: Optional[int] = None) -> VectorField:
    """``B(c, a)``; projected untruncated when ``D`` is None, else Galerkin-truncated at ``D``."""
    _require_divergence_free(a, "a")
    raw = b_form_unprojected(c, a)
    return leray_project(raw) if D is None else galerkin_project(raw, D)


# ---------------------------------------------------------------------------
# right-hand sides


def convective(v: VectorField) -> VectorField:
    """``(D_v v_k)_k``."""
    return VectorField([directional(v, vk) for vk in v.components])


def number_op_field(v: VectorField) -> VectorField:
    return fock_to_field(apply_number_op(field_to_fock(v)))


def _check_admissible(v: VectorField, cfg: SimConfig) -> None:
    if v.n != cfg.n:
        raise ValueError(f"field has {v.n} generators, config says {cfg.n}")
    if v.exact != cfg.exact:
        raise ValueError(f"field mode does not match config mode {cfg.mode!r}")
    if v.degree > cfg.trunc_degree:
        raise ValueError(f"field degree {v.degree} exceeds trunc_degree {cfg.trunc_degree}")
    if not _is_self_adjoint(v):
        raise ValueError("field is not self-adjoint")
    _require_divergence_free(v, "v")


def _is_self_adjoint(v: VectorField, tol: float = FLOAT_TOL) -> bool:
    if v.exact:
        return v.is_self_adjoint()
    return herm_norm(v - v.adjoint()) <= tol * max(herm_norm(v), 1e-300)


def _rhs(v: VectorField, cfg: SimConfig) -> VectorField:
    out = -galerkin_project(convective(v), cfg.trunc_degree)
    if cfg.viscosity:
        out = out - number_op_field(v).scale(cfg.viscosity)
    return out


def euler_rhs(v: VectorField, cfg: SimConfig) -> VectorField:
    """``-Pi_{<=D}(D_v v) - nu N v``."""
    _check_admissible(v, cfg)
    return _rhs(v, cfg)


def pressure_rhs(v: VectorField, cfg: SimConfig):
    """Return ``(rhs, p)`` for the pressure form ``dv/dt + D_v v + cyclic_grad(p) = 0``.

    With ``X`` the truncation of ``D_v v`` to Fock degrees ``<= D``,
    ``rhs = -Pi X = -X - cyclic_grad(p)``, so ``cyclic_grad(p) = -(X - Pi X)``.
    ``p`` is normalized by :func:`recover_pressure` (zero trace).
    """
    _check_admissible(v, cfg)
    return _rhs(v, cfg), _pressure(v, cfg)


def _truncate_coords(x, D):
    return GradedFieldCoords(
        [GradedVector._make(x.n, {u: c for u, c in comp.coords.items() if len(u) <= D}, x.exact) for comp in x.components]
    )


# ---------------------------------------------------------------------------
# vorticity


def vorticity(v: VectorField) -> NcPoly:
    """Cyclic vorticity ``i * sum_j [s_j, v_j]``."""
    return theta(v).scale(I if v.exact else 1j)


def vorticity_moments(v: VectorField, M: int) -> list:
    """``[tau(Omega^m) for m = 1..M]``."""
    omega = vorticity(v)
    return [trace_product(*([omega] * m)) for m in range(1, M + 1)]


def check_vorticity_transport(v: VectorField, m: int, expand: bool = False):
    """``d/dt tau(Omega^m) = -tau(D_v(Omega^m))`` for the untruncated flow.

    By default ``D_v(Omega^m)`` is expanded with the Leibniz rule into
    ``sum_r Omega^r (D_v Omega) Omega^(m-1-r)`` and each product is traced
    without being multiplied out.  ``expand=True`` forms ``D_v(Omega^m)``
    as a polynomial first.
    """
    _require_divergence_free(v, "v")
    if m < 1:
        raise ValueError("moment order must be positive")
    omega = vorticity(v)
    if expand:
        return -trace(directional(v, omega ** m))
    d_omega = directional(v, omega)
    total = 0 if v.exact else 0j
    for r in range(m):
        total = total + trace_product(*([omega] * r + [d_omega] + [omega] * (m - 1 - r)))
    return -total


# ---------------------------------------------------------------------------
# float-mode compiled system


class GalerkinSystem:
    """Array form of the truncated dynamics for fixed ``(n, D)``.

    The state is the vector of Fock coordinates ``x[(j, u)]``, ``|u| <= D``,
    component-major.  The right-hand side is

        rhs(x) = -L quad(M x) - nu * deg * x

    where ``M`` maps Fock coordinates to monomial coefficients (Wick
    expansion), ``quad`` evaluates ``D_v v`` on monomial coefficients up to
    degree ``2D - 1``, and ``L`` is the truncated Leray projection composed
    with the monomial-to-Fock map.
    """

    def __init__(self, n: int, D: int):
        self.n, self.D = n, D
        self.words = [w for k in range(D + 1) for w in product(range(1, n + 1), repeat=k)]
        W = len(self.words)
        self.W = W
        windex = {w: i for i, w in enumerate(self.words)}
        self.windex = windex
        self.size = n * W
        self.degrees = np.tile(np.array([len(w) for w in self.words], dtype=float), n)

        # Fock -> monomial, per component
        M = np.zeros((W, W))
        for col, w in enumerate(self.words):
            for u, c in wick(w).items():
                M[windex[u], col] = c
        self.wick_matrix = M

        # D_v v on monomial coefficients
        out_words = [w for k in range(2 * D) for w in product(range(1, n + 1), repeat=k)]
        oindex = {w: i for i, w in enumerate(out_words)}
        Wout = len(out_words)
        self.Wout = Wout
        o_idx, i1, i2 = [], [], []
        for k in range(1, n + 1):
            for u in self.words:
                iu = (k - 1) * W + windex[u]
                for p, j in enumerate(u):
                    pre, post = u[:p], u[p + 1:]
                    base = (j - 1) * W
                    for w in self.words:
                        o_idx.append((k - 1) * Wout + oindex[pre + w + post])
                        i1.append(iu)
                        i2.append(base + windex[w])
        self.q_out = np.array(o_idx, dtype=np.int64)
        self.q_a = np.array(i1, dtype=np.int64)
        self.q_b = np.array(i2, dtype=np.int64)

        # monomial (<= 2D-1) -> Fock (<= D), then Leray per class
        F = np.zeros((W, Wout))
        for col, w in enumerate(out_words):
            for u, c in fock_image(w).items():
                if len(u) <= D:
                    F[windex[u], col] += c
        P = self._projection_matrix()
        Fblock = np.zeros((self.size, n * Wout))
        for j in range(n):
            Fblock[j * W:(j + 1) * W, j * Wout:(j + 1) * Wout] = F
        self.projection = P
        self.L = P @ Fblock
        self.rev = np.array(
            [(j * W) + windex[w[::-1]] for j in range(n) for w in self.words], dtype=np.int64
        )

    def _projection_matrix(self) -> np.ndarray:
        P = np.eye(self.size)
        seen = set()
        for k in range(self.D + 1):
            for word in product(range(1, self.n + 1), repeat=k + 1):
                key = canonical_rotation(word)
                if key in seen:
                    continue
                seen.add(key)
                members = rotation_class(key)
                idx = [(w[-1] - 1) * self.W + self.windex[w[:-1]] for w in members]
                P[np.ix_(idx, idx)] -= 1.0 / len(members)
        return P

    # -- conversions ------------------------------------------------------

    def from_field(self, v: VectorField) -> np.ndarray:
        x = np.zeros(self.size, dtype=complex)
        for j, comp in enumerate(field_to_fock(v).components):
            for u, c in comp.coords.items():
                if len(u) > self.D:
                    raise ValueError(f"field degree exceeds {self.D}")
                x[j * self.W + self.windex[u]] = complex(c)
        return x

    def to_field(self, x: np.ndarray) -> VectorField:
        mono = self.monomials(x).reshape(self.n, self.W)
        comps = []
        for j in range(self.n):
            terms = {self.words[i]: complex(c) for i, c in enumerate(mono[j]) if c != 0}
            comps.append(NcPoly._make(self.n, terms, False))
        return VectorField(comps)

    def monomials(self, x: np.ndarray) -> np.ndarray:
        return (x.reshape(self.n, self.W) @ self.wick_matrix.T).ravel()

    # -- dynamics ---------------------------------------------------------

    def convective(self, x: np.ndarray) -> np.ndarray:
        """Monomial coefficients of ``D_v v`` (degrees ``<= 2D - 1``)."""
        y = self.monomials(x)
        vals = y[self.q_a] * y[self.q_b]
        length = self.n * self.Wout
        return np.bincount(self.q_out, weights=vals.real, minlength=length) + 1j * np.bincount(
            self.q_out, weights=vals.imag, minlength=length
        )

    def rhs(self, x: np.ndarray, viscosity: float = 0.0) -> np.ndarray:
        out = -(self.L @ self.convective(x))
        if viscosity:
            out -= viscosity * self.degrees * x
        return out

    def project(self, x: np.ndarray) -> np.ndarray:
        return self.projection @ x

    def energy(self, x: np.ndarray) -> complex:
        """``<v, v>`` with the symmetric form: ``sum x[(j,u)] x[(j, rev u)]``."""
        return complex(np.dot(x, x[self.rev]))

    def residual(self, x: np.ndarray) -> float:
        return float(np.linalg.norm(x - self.project(x)))


@lru_cache(maxsize=8)
def galerkin_system(n: int, D: int) -> GalerkinSystem:
    # D_v v reaches degree 2D - 1
    _check_cap(n, 2 * D - 1, None)
    return GalerkinSystem(n, D)


# ---------------------------------------------------------------------------
# time stepping


def _advance(v, rhs, dt, integrator, add, scale):
    if integrator == "euler_explicit":
        return add(v, scale(rhs(v), dt))
    k1 = rhs(v)
    k2 = rhs(add(v, scale(k1, dt / 2)))
    k3 = rhs(add(v, scale(k2, dt / 2)))
    k4 = rhs(add(v, scale(k3, dt)))
    incr = add(add(k1, scale(k2, 2)), add(scale(k3, 2), k4))
    return add(v, scale(incr, dt / 6))


def _advance_symbolic(v: VectorField, cfg: SimConfig) -> VectorField:
    new = _advance(
        v,
        lambda u: _rhs(u, cfg),
        cfg.dt,
        cfg.integrator,
        lambda a, b: a + b,
        lambda a, c: a.scale(c),
    )
    return galerkin_project(new, cfg.trunc_degree)


def _advance_array(x: np.ndarray, system: GalerkinSystem, cfg: SimConfig) -> np.ndarray:
    new = _advance(
        x,
        lambda u: system.rhs(u, cfg.viscosity),
        cfg.dt,
        cfg.integrator,
        lambda a, b: a + b,
        lambda a, c: a * c,
    )
    return system.project(new)


def diagnose(v: VectorField, t, cfg: SimConfig, p: Optional[NcPoly] = None) -> SimState:
    energy = inner_sym(v, v)
    moments = vorticity_moments(v, cfg.moments) if cfg.moments else []
    if not v.exact:
        # real for self-adjoint fields; the imaginary parts are roundoff
        energy = complex(energy).real
        moments = [complex(m).real for m in moments]
    if p is None and cfg.record_pressure:
        p = _pressure(v, cfg)
    residual = 0.0 if v.exact and is_divergence_free(v)[0] else _relative_residual(v)
    return SimState(t=t, v=v, p=p, energy=energy, moments=moments, div_residual=residual)


def _pressure(v: VectorField, cfg: SimConfig) -> NcPoly:
    x = field_to_fock(convective(v))
    kept = _truncate_coords(x, cfg.trunc_degree)
    grad = fock_to_field(project_coords(kept)) - fock_to_field(kept)
    if v.exact:
        return recover_pressure(grad)
    size = herm_norm(kept)
    if not math.isfinite(size):
        raise InstabilityError("convective term overflowed while computing the pressure")
    # roundoff in grad is relative to |D_v v|, which can dwarf |grad|
    ratio = size / max(herm_norm(grad), 1e-300)
    return recover_pressure(grad, tol=FLOAT_TOL * max(1.0, ratio))


def _relative_residual(v: VectorField) -> float:
    x = field_to_fock(v)
    norm = herm_norm(x)
    if norm == 0:
        return 0.0
    return herm_norm(x - project_coords(x)) / norm


def step(state: SimState, cfg: SimConfig) -> SimState:
    """Advance one step of size ``cfg.dt`` and re-project onto the truncated divergence-free space."""
    _check_admissible(state.v, cfg)
    if cfg.exact:
        v1 = _advance_symbolic(state.v, cfg)
    else:
        system = galerkin_system(cfg.n, cfg.trunc_degree)
        x1 = _advance_array(system.from_field(state.v), system, cfg)
        _check_stable(x1, system, cfg)
        v1 = system.to_field(x1)
    return diagnose(v1, state.t + cfg.dt, cfg)


def _check_stable(x: np.ndarray, system: GalerkinSystem, cfg: SimConfig) -> None:
    if not np.all(np.isfinite(x)):
        raise InstabilityError("non-finite coefficients after step")
    norm = np.linalg.norm(x)
    if norm and system.residual(x) > cfg.div_tol * norm:
        raise InstabilityError("divergence residual above tolerance after step")


def simulate(v0: VectorField, cfg: SimConfig) -> List[SimState]:
    """Run the truncated dynamics from ``v0`` and return the sampled states."""
    if v0.n != cfg.n:
        raise ValueError(f"initial field has {v0.n} generators, config says {cfg.n}")
    if v0.exact != cfg.exact:
        v0 = v0.to_float() if not cfg.exact else None
        if v0 is None:
            raise ValueError("a float-mode field cannot seed an exact-mode run")
    if v0.degree > cfg.trunc_degree:
        raise ValueError(f"initial field degree {v0.degree} exceeds trunc_degree {cfg.trunc_degree}")
    if not _is_self_adjoint(v0):
        raise ValueError("initial field is not self-adjoint")
    v = galerkin_project(v0, cfg.trunc_degree)
    changed = (v != v0) if cfg.exact else herm_norm(v - v0) > FLOAT_TOL * max(herm_norm(v0), 1e-300)
    if changed:
        warnings.warn("initial field was not divergence-free; projected it", stacklevel=2)

    steps = cfg.n_steps
    t0 = Fraction(0) if cfg.exact else 0.0
    samples = [diagnose(v, t0, cfg)]
    if cfg.exact:
        for i in range(1, steps + 1):
            v = _advance_symbolic(v, cfg)
            if i % cfg.sample_every == 0 or i == steps:
                samples.append(diagnose(v, cfg.dt * i, cfg))
        return samples

    system = galerkin_system(cfg.n, cfg.trunc_degree)
    x = system.from_field(v)
    for i in range(1, steps + 1):
        x = _advance_array(x, system, cfg)
        _check_stable(x, system, cfg)
        if i % cfg.sample_every == 0 or i == steps:
            samples.append(diagnose(system.to_field(x), cfg.dt * i, cfg))
    return samples
