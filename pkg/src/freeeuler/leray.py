"""Free Leray projection and the exact-sequence maps.

In Fock coordinates a vector field splits by tensor degree ``k`` into
``n``-tuples of degree-``k`` tensors.  Write the coordinate ``(j, u)``
(component ``j``, word ``u`` of length ``k``) as the word ``u + (j,)`` of
length ``k + 1``.  The divergence-free subspace of degree ``k`` is spanned by
the vectors ``((l_j* - r_j*) e_w)_j``; each of them is ``+1`` at the
coordinate of ``w`` rotated by one step and ``-1`` at the coordinate of
``w``.  These are the edge vectors of a graph whose connected components
are the rotation classes (necklaces) of words of length ``k + 1``.  Hence

* a block is divergence-free iff its coordinates sum to zero over every
  rotation class, and
* the orthogonal projection subtracts the class mean from every coordinate.

The projection is a real rational matrix, so it is orthogonal for the
Hermitian and the symmetric form alike and commutes with word reversal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Dict, List, Optional, Tuple

from .algebra import NcPoly, VectorField, Word, _add_into, cyclic_diff, cyclic_grad
from .errors import NotGradientError, ResourceLimitError
from .exactla import projector, rank
from .semicircular import (
    GradedFieldCoords,
    GradedVector,
    field_to_fock,
    fock_to_field,
    herm_norm,
    wick,
)

DEFAULT_CAP = 2 ** 20
FLOAT_TOL = 1e-10

Coord = Tuple[int, Word]


@lru_cache(maxsize=None)
def canonical_rotation(word: Word) -> Word:
    """Lexicographically least rotation."""
    if not word:
        return word
    return min(word[k:] + word[:k] for k in range(len(word)))


@lru_cache(maxsize=None)
def rotation_class(word: Word) -> Tuple[Word, ...]:
    """All distinct rotations of ``word``, sorted."""
    return tuple(sorted({word[k:] + word[:k] for k in range(len(word))}))


def coord_to_word(j: int, u: Word) -> Word:
    return u + (j,)


def word_to_coord(w: Word) -> Coord:
    return w[-1], w[:-1]


def _check_cap(n: int, k: int, cap: Optional[int]) -> None:
    cap = DEFAULT_CAP if cap is None else cap
    if n ** (k + 1) > cap:
        raise ResourceLimitError(f"n^(k+1) = {n}^{k + 1} exceeds the cap {cap}")


def _mean(s, size: int, exact: bool):
    return s * Fraction(1, size) if exact else s / size


def _class_sums(block: Tuple[dict, ...]) -> Dict[Word, object]:
    sums: dict = {}
    for j, comp in enumerate(block, start=1):
        for u, c in comp.items():
            _add_into(sums, canonical_rotation(u + (j,)), c)
    return sums


def project_block(block: Tuple[dict, ...], exact: bool) -> Tuple[dict, ...]:
    """Orthogonal projection of one degree block onto the divergence-free part."""
    out = [dict(comp) for comp in block]
    for key, s in _class_sums(block).items():
        members = rotation_class(key)
        mean = _mean(s, len(members), exact)
        for w in members:
            _add_into(out[w[-1] - 1], w[:-1], -mean)
    return tuple(out)


def project_coords(
    x: GradedFieldCoords,
    max_degree: Optional[int] = None,
    truncate: bool = False,
    cap: Optional[int] = None,
) -> GradedFieldCoords:
    """Project Fock coordinates degree by degree.

    Blocks above ``max_degree`` are dropped when ``truncate`` is set (this is
    the Galerkin projection onto degrees ``<= max_degree``); otherwise they
    raise ``ValueError``.
    """
    comps: List[dict] = [dict() for _ in range(x.n)]
    for k, block in x.blocks().items():
        if max_degree is not None and k > max_degree:
            if truncate:
                continue
            raise ValueError(f"degree {k} exceeds the cap {max_degree}")
        _check_cap(x.n, k, cap)
        for j, comp in enumerate(project_block(block, x.exact)):
            comps[j].update(comp)
    return GradedFieldCoords([GradedVector._make(x.n, c, x.exact) for c in comps])


def leray_project(a: VectorField, max_degree: Optional[int] = None, cap: Optional[int] = None) -> VectorField:
    """The free Leray projection of a polynomial field."""
    if max_degree is not None and a.degree > max_degree:
        raise ValueError(f"field degree {a.degree} exceeds the cap {max_degree}")
    return fock_to_field(project_coords(field_to_fock(a), cap=cap))


def galerkin_project(a: VectorField, max_degree: int) -> VectorField:
    """Project every degree block ``<= max_degree`` and discard the rest."""
    return fock_to_field(project_coords(field_to_fock(a), max_degree, truncate=True))


def gradient_part(a: VectorField) -> VectorField:
    """``a - Pi a``; lies in the range of the cyclic gradient."""
    return a - leray_project(a)


def divergence_residual(a) -> float:
    """Hermitian norm of the non-divergence-free part of ``a``."""
    x = a if isinstance(a, GradedFieldCoords) else field_to_fock(a)
    return herm_norm(x - project_coords(x))


def is_divergence_free(a, tol: float = FLOAT_TOL) -> Tuple[bool, float]:
    """Membership test; returns ``(flag, residual_norm)``.

    Exact mode checks that every rotation-class sum vanishes exactly.  Float
    mode compares the residual with ``tol`` relative to the norm of ``a``.
    """
    x = a if isinstance(a, GradedFieldCoords) else field_to_fock(a)
    if x.exact:
        ok = True
        for block in x.blocks().values():
            if any(_class_sums(block).values()):
                ok = False
                break
        return ok, (0.0 if ok else divergence_residual(x))
    residual = divergence_residual(x)
    return residual <= tol * max(herm_norm(x), 1e-300), residual


# ---------------------------------------------------------------------------
# explicit bases


@dataclass(frozen=True)
class LerayBasis:
    """Spanning data for the degree-``k`` divergence-free subspace.

    ``generators[i]`` is the sparse image ``{(j, u): coeff}`` of the ``i``-th
    basis word of length ``k + 1`` (length-then-lex order).  ``classes`` are
    the rotation classes that carry the projection.
    """

    n: int
    k: int
    generators: Tuple[Dict[Coord, int], ...] = field(repr=False)
    classes: Tuple[Tuple[Word, ...], ...] = field(repr=False)

    @property
    def dimension(self) -> int:
        """Dimension of the ambient space ``((C^n)^{(x)k})^n``."""
        return self.n ** (self.k + 1)

    @property
    def rank(self) -> int:
        return self.dimension - len(self.classes)

    @property
    def gradient_rank(self) -> int:
        return len(self.classes)

    def coordinates(self) -> List[Coord]:
        """Coordinate order: component-major, then lexicographic word."""
        words = list(product(range(1, self.n + 1), repeat=self.k))
        return [(j, u) for j in range(1, self.n + 1) for u in words]

    def generator_matrix(self) -> List[List[int]]:
        index = {c: i for i, c in enumerate(self.coordinates())}
        rows = []
        for g in self.generators:
            row = [0] * len(index)
            for c, v in g.items():
                row[index[c]] = v
            rows.append(row)
        return rows

    def generator_coords(self, i: int, exact: bool = True) -> GradedFieldCoords:
        comps = [dict() for _ in range(self.n)]
        for (j, u), v in self.generators[i].items():
            comps[j - 1][u] = v if exact else complex(v)
        return GradedFieldCoords([GradedVector(self.n, c, exact) for c in comps])

    def projection_matrix(self) -> List[List[Fraction]]:
        """The projection in coordinate order, from the rotation classes."""
        coords = self.coordinates()
        index = {c: i for i, c in enumerate(coords)}
        N = len(coords)
        P = [[Fraction(0)] * N for _ in range(N)]
        for cls in self.classes:
            idx = [index[word_to_coord(w)] for w in cls]
            inv = Fraction(1, len(cls))
            for a in idx:
                for b in idx:
                    P[a][b] -= inv
        for i in range(N):
            P[i][i] += 1
        return P

    def reference_projection_matrix(self) -> List[List[Fraction]]:
        """The same projection from the normal equations on the generators.

        Independent of the rotation-class argument; used for cross-checks.
        """
        return projector(self.generator_matrix())

    def reference_rank(self) -> int:
        return rank(self.generator_matrix())


@lru_cache(maxsize=None)
def build_leray_basis(n: int, k: int, cap: Optional[int] = None) -> LerayBasis:
    if n < 1 or k < 0:
        raise ValueError("need n >= 1 and k >= 0")
    _check_cap(n, k, cap)
    gens = []
    for w in product(range(1, n + 1), repeat=k + 1):
        g: dict = {}
        _add_into(g, (w[0], w[1:]), 1)  # l*_{w_1} e_w
        _add_into(g, (w[-1], w[:-1]), -1)  # r*_{w_{k+1}} e_w
        gens.append(g)
    classes = sorted({rotation_class(w) for w in product(range(1, n + 1), repeat=k + 1)})
    return LerayBasis(n, k, tuple(gens), tuple(classes))


# ---------------------------------------------------------------------------
# exact-sequence maps


def theta(a: VectorField) -> NcPoly:
    """``sum_j (s_j a_j - a_j s_j)``."""
    terms: dict = {}
    for j, comp in enumerate(a.components, start=1):
        for w, c in comp.terms.items():
            _add_into(terms, (j,) + w, c)
            _add_into(terms, w + (j,), -c)
    return NcPoly._make(a.n, terms, a.exact)


def c_map(P: NcPoly) -> NcPoly:
    """Sum of all cyclic rotations of each word (one per letter position)."""
    terms: dict = {}
    for w, c in P.terms.items():
        for k in range(len(w)):
            _add_into(terms, w[k:] + w[:k], c)
    return NcPoly._make(P.n, terms, P.exact)


def c_map_via_grad(P: NcPoly) -> NcPoly:
    """``sum_j s_j delta_j P``; agrees with :func:`c_map`."""
    terms: dict = {}
    for j in range(1, P.n + 1):
        for w, c in cyclic_diff(j, P).terms.items():
            _add_into(terms, (j,) + w, c)
    return NcPoly._make(P.n, terms, P.exact)


def recover_pressure(g: VectorField, tol: float = FLOAT_TOL) -> NcPoly:
    """Find ``p`` with ``cyclic_grad(p) == g``.

    Works from the top tensor degree down.  At degree ``k`` the block of
    ``g`` must be constant on each rotation class ``C`` of words of length
    ``k + 1``; the value is matched by the equal-weight combination of the
    Wick polynomials ``W(w)``, ``w`` in ``C`` (the least-norm choice among
    degree ``k + 1`` Fock vectors), and its full cyclic gradient is
    subtracted before moving down.  The result has no vacuum component, so
    ``tau(p) == 0``.

    Raises :class:`NotGradientError` when ``g`` has a divergence-free part.
    """
    n, exact = g.n, g.exact
    residual = field_to_fock(g)
    p_terms: dict = {}
    scale = max(herm_norm(residual), 1.0)
    while not residual.is_zero():
        top = residual.degree
        block = tuple(comp.block(top) for comp in residual.components)
        update: dict = {}
        for key in {canonical_rotation(u + (j,)) for j, comp in enumerate(block, 1) for u in comp}:
            members = rotation_class(key)
            values = [block[w[-1] - 1].get(w[:-1], 0) for w in members]
            value = _mean(sum(values, 0 if exact else 0j), len(members), exact)
            if exact:
                consistent = all(v == value for v in values)
            else:
                consistent = max(abs(v - value) for v in values) <= tol * scale
            if not consistent:
                raise NotGradientError(
                    f"degree-{top} block is not a cyclic gradient (class {key})"
                )
            if not value:
                continue
            # top block of delta(W(w)) is ((top+1)/|C|) on every coordinate of C
            weight = _mean(value, top + 1, exact)
            for w in members:
                for u, k in wick(w).items():
                    _add_into(update, u, weight * k)
        q = NcPoly._make(n, update, exact)
        for u, c in update.items():
            _add_into(p_terms, u, c)
        residual = residual - field_to_fock(cyclic_grad(q))
        if exact:
            assert residual.degree < top
        else:
            # roundoff left in the matched block
            residual = _drop_block(residual, top)
    return NcPoly._make(n, p_terms, exact)


def _drop_block(x: GradedFieldCoords, k: int) -> GradedFieldCoords:
    return GradedFieldCoords(
        [GradedVector._make(x.n, {u: c for u, c in comp.coords.items() if len(u) != k}, x.exact) for comp in x.components]
    )
