"""Semicircular trace and the full Fock space picture of C<n>.

``L^2`` of a semicircular system is identified with the full Fock space over
``C^n``: ``s_j`` acts as ``l_j + l_j*`` (left creation plus left
annihilation) and a polynomial ``P`` corresponds to the vector ``P . 1``.
The Fock basis tensor ``e_w`` corresponds to the Wick polynomial ``W(w)``,
a product of Chebyshev polynomials in runs of equal letters.

Fock vectors are sparse maps ``word -> scalar``; the tensor degree of a
coordinate is the length of its word.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Optional, Tuple

import numpy as np

from .algebra import NcPoly, VectorField, Word, _add_into, _check_pair, word_key
from .errors import ModeMismatchError
from .scalars import coerce

# ---------------------------------------------------------------------------
# trace via non-crossing pairings


@lru_cache(maxsize=None)
def pairing_count(word: Word) -> int:
    """Number of non-crossing pair partitions of ``word`` pairing equal letters.

    This is the semicircular moment ``tau(s_{i_1} ... s_{i_m})``.
    """
    m = len(word)
    if m & 1:
        return 0
    if m == 0:
        return 1
    first = word[0]
    total = 0
    # the partner of position 0 must sit at an odd offset so both sides have even length
    for p in range(1, m, 2):
        if word[p] == first:
            inner = pairing_count(word[1:p])
            if inner:
                total += inner * pairing_count(word[p + 1:])
    return total


def trace(P: NcPoly):
    """The semicircular trace ``tau(P)``."""
    total = 0 if P.exact else 0j
    for w, c in P.terms.items():
        if len(w) & 1:
            continue
        k = pairing_count(w)
        if k:
            total = total + c * k
    return total


# ---------------------------------------------------------------------------
# graded Fock vectors


class GradedVector:
    """A finitely supported vector in the full Fock space ``T(C^n)``.

    ``coords`` maps words to scalars; :meth:`blocks` groups them by tensor
    degree.  Under the identification with ``L^2`` it stands for
    ``sum_w coords[w] * W(w)``.
    """

    __slots__ = ("n", "coords", "exact")

    def __init__(self, n: int, coords=(), exact: bool = True):
        self.n = n
        self.exact = exact
        items = coords.items() if isinstance(coords, dict) else coords
        canon: dict = {}
        for w, c in items:
            w = tuple(w)
            if any(not 1 <= i <= n for i in w):
                raise IndexError(f"word {w} has a letter outside 1..{n}")
            _add_into(canon, w, coerce(c, exact))
        self.coords = canon

    @classmethod
    def _make(cls, n, coords, exact):
        obj = object.__new__(cls)
        obj.n, obj.coords, obj.exact = n, coords, exact
        return obj

    @classmethod
    def vacuum(cls, n: int, exact: bool = True) -> "GradedVector":
        return cls(n, {(): 1}, exact)

    def blocks(self) -> Dict[int, Dict[Word, object]]:
        out: Dict[int, Dict[Word, object]] = {}
        for w, c in self.coords.items():
            out.setdefault(len(w), {})[w] = c
        return dict(sorted(out.items()))

    def block(self, k: int) -> Dict[Word, object]:
        return {w: c for w, c in self.coords.items() if len(w) == k}

    @property
    def degree(self):
        return max((len(w) for w in self.coords), default=float("-inf"))

    def is_zero(self) -> bool:
        return not self.coords

    def __getitem__(self, w) -> object:
        return self.coords.get(tuple(w), 0 if self.exact else 0j)

    def __add__(self, other: "GradedVector") -> "GradedVector":
        _check_pair(self, other)
        coords = dict(self.coords)
        for w, c in other.coords.items():
            _add_into(coords, w, c)
        return GradedVector._make(self.n, coords, self.exact)

    def __neg__(self):
        return GradedVector._make(self.n, {w: -c for w, c in self.coords.items()}, self.exact)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "GradedVector":
        c = coerce(c, self.exact)
        if not c:
            return GradedVector._make(self.n, {}, self.exact)
        return GradedVector._make(self.n, {w: c * v for w, v in self.coords.items()}, self.exact)

    def map_blocks(self, factor) -> "GradedVector":
        """Scale block ``k`` by ``factor(k)``."""
        coords: dict = {}
        for w, c in self.coords.items():
            f = factor(len(w))
            v = c * f
            if v:
                coords[w] = v
        return GradedVector._make(self.n, coords, self.exact)

    def conj_reverse(self) -> "GradedVector":
        """The antiunitary ``J``: conjugate coefficients and reverse words.

        It corresponds to the adjoint on polynomials.
        """
        return GradedVector._make(
            self.n, {w[::-1]: c.conjugate() for w, c in self.coords.items()}, self.exact
        )

    def __eq__(self, other):
        if not isinstance(other, GradedVector):
            return NotImplemented
        return self.n == other.n and self.exact == other.exact and self.coords == other.coords

    __hash__ = None

    def __repr__(self):
        body = ", ".join(f"{w}: {c}" for w, c in sorted(self.coords.items(), key=lambda kv: word_key(kv[0])))
        return f"GradedVector(n={self.n}, {{{body}}})"


class GradedFieldCoords:
    """Fock coordinates of a vector field: one :class:`GradedVector` per component."""

    __slots__ = ("n", "components", "exact")

    def __init__(self, components: Iterable[GradedVector]):
        comps = tuple(components)
        self.n = comps[0].n
        self.exact = comps[0].exact
        for c in comps:
            _check_pair(comps[0], c)
        if len(comps) != self.n:
            raise ValueError(f"{len(comps)} components for {self.n} generators")
        self.components = comps

    @classmethod
    def zero(cls, n: int, exact: bool = True) -> "GradedFieldCoords":
        return cls([GradedVector._make(n, {}, exact) for _ in range(n)])

    def blocks(self) -> Dict[int, Tuple[Dict[Word, object], ...]]:
        """Degree ``k`` -> tuple of per-component coordinate maps on words of length ``k``."""
        degrees = sorted({len(w) for c in self.components for w in c.coords})
        return {k: tuple(c.block(k) for c in self.components) for k in degrees}

    @property
    def degree(self):
        return max(c.degree for c in self.components)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __add__(self, other):
        return GradedFieldCoords([a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other):
        return GradedFieldCoords([a - b for a, b in zip(self.components, other.components)])

    def __neg__(self):
        return GradedFieldCoords([-a for a in self.components])

    def scale(self, c):
        return GradedFieldCoords([a.scale(c) for a in self.components])

    def map_blocks(self, factor):
        return GradedFieldCoords([a.map_blocks(factor) for a in self.components])

    def conj_reverse(self):
        return GradedFieldCoords([a.conj_reverse() for a in self.components])

    def __eq__(self, other):
        if not isinstance(other, GradedFieldCoords):
            return NotImplemented
        return self.components == other.components

    __hash__ = None

    def __repr__(self):
        return f"GradedFieldCoords({list(self.components)!r})"


# ---------------------------------------------------------------------------
# conversions


def _apply_letter(j: int, vec: dict, out: dict, c=1) -> None:
    """``out += c * s_j vec`` with ``s_j = l_j + l_j*``."""
    for w, v in vec.items():
        _add_into(out, (j,) + w, c * v)
        if w and w[0] == j:
            _add_into(out, w[1:], c * v)


@lru_cache(maxsize=None)
def fock_image(word: Word) -> Dict[Word, int]:
    """Fock coordinates of the monomial ``word`` (applied to the vacuum)."""
    if not word:
        return {(): 1}
    out: dict = {}
    _apply_letter(word[0], fock_image(word[1:]), out)
    return out


@lru_cache(maxsize=None)
def wick(word: Word) -> Dict[Word, int]:
    """Monomial expansion of the Wick polynomial ``W(word)``.

    ``W(()) = 1`` and ``W(j.w) = s_j W(w) - [w starts with j] W(w[1:])``.
    """
    if not word:
        return {(): 1}
    j, rest = word[0], word[1:]
    out: dict = {}
    for u, c in wick(rest).items():
        _add_into(out, (j,) + u, c)
    if rest and rest[0] == j:
        for u, c in wick(rest[1:]).items():
            _add_into(out, u, -c)
    return out


def wick_poly(word, n: int, exact: bool = True) -> NcPoly:
    return NcPoly(n, wick(tuple(word)), exact)


def poly_to_fock(P: NcPoly) -> GradedVector:
    coords: dict = {}
    for w, c in P.terms.items():
        for u, k in fock_image(w).items():
            _add_into(coords, u, c * k)
    return GradedVector._make(P.n, coords, P.exact)


def fock_to_poly(v: GradedVector) -> NcPoly:
    terms: dict = {}
    for w, c in v.coords.items():
        for u, k in wick(w).items():
            _add_into(terms, u, c * k)
    return NcPoly._make(v.n, terms, v.exact)


def field_to_fock(a: VectorField) -> GradedFieldCoords:
    return GradedFieldCoords([poly_to_fock(c) for c in a.components])


def fock_to_field(x: GradedFieldCoords) -> VectorField:
    return VectorField([fock_to_poly(c) for c in x.components])


# ---------------------------------------------------------------------------
# left action of polynomials on Fock vectors


class _Trie:
    """Words of a polynomial keyed from their last letter, for shared right-to-left action."""

    __slots__ = ("const", "children", "depth")

    def __init__(self):
        self.const = None
        self.children: dict = {}
        self.depth = 0

    @classmethod
    def build(cls, P: NcPoly) -> "_Trie":
        root = cls()
        for w, c in P.terms.items():
            node = root
            for letter in reversed(w):
                node = node.children.setdefault(letter, cls())
            node.const = c
        root._fix_depth()
        return root

    def _fix_depth(self) -> int:
        self.depth = max((1 + ch._fix_depth() for ch in self.children.values()), default=0)
        return self.depth


def _act_sparse(node: _Trie, vec: dict, keep: Optional[int], out: dict) -> None:
    if node.const is not None:
        for w, v in vec.items():
            if keep is None or len(w) <= keep:
                _add_into(out, w, node.const * v)
    for j, child in node.children.items():
        nxt: dict = {}
        _apply_letter(j, vec, nxt)
        if keep is not None:
            limit = keep + child.depth
            nxt = {w: v for w, v in nxt.items() if len(w) <= limit}
        if nxt:
            _act_sparse(child, nxt, keep, out)


def apply_poly(P: NcPoly, v: GradedVector, keep: Optional[int] = None) -> GradedVector:
    """The vector ``P . v``.

    With ``keep`` set, only coordinates of degree ``<= keep`` are returned,
    and intermediate coordinates that cannot come back down to that range are
    pruned along the way.
    """
    _check_pair(P, v)
    out: dict = {}
    if P.terms and v.coords:
        _act_sparse(_Trie.build(P), v.coords, keep, out)
    return GradedVector._make(P.n, out, P.exact)


def _dense_letter(j: int, n: int, blocks: list, limit: int) -> list:
    """``s_j`` on a dense graded vector (block k indexed by the base-n value of the word)."""
    out = [None] * (limit + 1)
    for k, x in enumerate(blocks):
        if x is None:
            continue
        if k + 1 <= limit:
            y = np.zeros(n ** (k + 1), dtype=complex)
            size = n ** k
            y[(j - 1) * size:j * size] = x
            out[k + 1] = y if out[k + 1] is None else out[k + 1] + y
        if k >= 1 and k - 1 <= limit:
            size = n ** (k - 1)
            part = x[(j - 1) * size:j * size]
            out[k - 1] = part.copy() if out[k - 1] is None else out[k - 1] + part
    while out and out[-1] is None:
        out.pop()
    return out


def _dense_add(acc: list, blocks: list, c, keep: int) -> list:
    for k, x in enumerate(blocks[:keep + 1]):
        if x is None:
            continue
        while len(acc) <= k:
            acc.append(None)
        acc[k] = c * x if acc[k] is None else acc[k] + c * x
    return acc


def _act_dense(node: _Trie, n: int, blocks: list, keep: int, acc: list) -> None:
    if node.const is not None:
        _dense_add(acc, blocks, node.const, keep)
    for j, child in node.children.items():
        nxt = _dense_letter(j, n, blocks, keep + child.depth)
        if nxt:
            _act_dense(child, n, nxt, keep, acc)


def _trace_product_dense(polys) -> complex:
    n = polys[0].n
    blocks = [np.ones(1, dtype=complex)]
    degs = [max(p.degree, 0) for p in polys]
    for i in range(len(polys) - 1, -1, -1):
        keep = sum(degs[:i])
        acc: list = []
        if polys[i].terms:
            _act_dense(_Trie.build(polys[i]), n, blocks, keep, acc)
        blocks = acc
        if not blocks or all(b is None for b in blocks):
            return 0j
    return complex(blocks[0][0]) if blocks[0] is not None else 0j


def trace_product(*polys: NcPoly):
    """``tau(P_1 P_2 ... P_r)`` without expanding the product.

    The factors act on the vacuum from right to left; coordinates that can no
    longer return to the vacuum are pruned.  Float-mode inputs use dense
    per-degree arrays.
    """
    if not polys:
        raise ValueError("need at least one factor")
    for p in polys[1:]:
        _check_pair(polys[0], p)
    if any(p.is_zero() for p in polys):
        return 0 if polys[0].exact else 0j
    if not polys[0].exact:
        return _trace_product_dense(polys)
    vec = {(): 1}
    degs = [p.degree for p in polys]
    for i in range(len(polys) - 1, -1, -1):
        keep = sum(degs[:i])
        out: dict = {}
        _act_sparse(_Trie.build(polys[i]), vec, keep, out)
        vec = out
        if not vec:
            return 0
    return vec.get((), 0)


def tau_pair(P: NcPoly, Q: NcPoly):
    """``tau(PQ)`` computed from Fock coordinates: ``sum_w (P.1)_{rev w} (Q.1)_w``."""
    _check_pair(P, Q)
    return _pair_sym(poly_to_fock(P).coords, poly_to_fock(Q).coords, P.exact)


def _pair_sym(x: dict, y: dict, exact: bool):
    total = 0 if exact else 0j
    for w, b in y.items():
        a = x.get(w[::-1])
        if a is not None:
            total = total + a * b
    return total


def _pair_herm(x: dict, y: dict, exact: bool):
    total = 0 if exact else 0j
    for w, b in y.items():
        a = x.get(w)
        if a is not None:
            total = total + a * b.conjugate()
    return total


def _as_coords(a) -> GradedFieldCoords:
    if isinstance(a, GradedFieldCoords):
        return a
    if isinstance(a, VectorField):
        return field_to_fock(a)
    raise TypeError(f"expected VectorField or GradedFieldCoords, got {type(a).__name__}")


def inner_sym(a, b):
    """Symmetric bilinear form ``sum_j tau(a_j b_j)`` (no conjugation)."""
    x, y = _as_coords(a), _as_coords(b)
    _check_pair(x, y)
    total = 0 if x.exact else 0j
    for xa, yb in zip(x.components, y.components):
        total = total + _pair_sym(xa.coords, yb.coords, x.exact)
    return total


def inner_herm(a, b):
    """Hermitian form ``sum_j tau(a_j b_j*)``; the Fock inner product."""
    x, y = _as_coords(a), _as_coords(b)
    _check_pair(x, y)
    total = 0 if x.exact else 0j
    for xa, yb in zip(x.components, y.components):
        total = total + _pair_herm(xa.coords, yb.coords, x.exact)
    return total


def herm_norm(a) -> float:
    x = _as_coords(a)
    sq = sum(c.real * c.real + c.imag * c.imag for comp in x.components for c in comp.coords.values())
    return math.sqrt(float(sq))


# ---------------------------------------------------------------------------
# Ornstein-Uhlenbeck semigroup and number operator


def apply_ou(t, v, *, ratio=None):
    """Free Ornstein-Uhlenbeck semigroup: block ``k`` scaled by ``exp(-k t)``.

    Exact-mode vectors take a rational contraction ``ratio`` in ``(0, 1]``
    instead of ``t`` and scale block ``k`` by ``ratio**k``.  Works on
    :class:`GradedVector` and :class:`GradedFieldCoords`.
    """
    if ratio is not None:
        if t is not None:
            raise ValueError("give either t or ratio, not both")
        r = Fraction(ratio) if not isinstance(ratio, (float, complex)) else ratio
        if not 0 < r <= 1:
            raise ValueError("contraction ratio must lie in (0, 1]")
        if not v.exact:
            r = float(r)
        return v.map_blocks(lambda k: r ** k)
    if t < 0:
        raise ValueError("OU time must be nonnegative")
    if v.exact:
        if t == 0:
            return v
        raise ModeMismatchError("exact-mode OU action needs a rational ratio, not a time")
    return v.map_blocks(lambda k: math.exp(-k * t))


def apply_number_op(v):
    """Number operator: block ``k`` scaled by ``k``."""
    return v.map_blocks(lambda k: k)
