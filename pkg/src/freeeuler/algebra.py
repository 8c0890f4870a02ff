"""The free *-algebra C<s_1, ..., s_n> on self-adjoint generators.

Words are plain tuples of generator indices in ``1..n``; the empty tuple is
the unit.  Polynomials are sparse ``dict`` maps from words to scalars with no
zero coefficients stored.  All values are treated as immutable.

Besides the ring structure this module provides the free difference
quotients, cyclic derivatives, the derivations ``D_b`` and the Lie bracket of
polynomial vector fields.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Iterator, Tuple

from .errors import GeneratorMismatchError, ModeMismatchError
from .scalars import GaussianRational, coerce

Word = Tuple[int, ...]

NEG_INF = float("-inf")


def word_key(word: Word):
    """Canonical (length, lexicographic) order."""
    return (len(word), word)


def _add_into(terms: dict, key, c) -> None:
    prev = terms.get(key)
    if prev is None:
        if c:
            terms[key] = c
        return
    s = prev + c
    if s:
        terms[key] = s
    else:
        del terms[key]


def _check_pair(a, b) -> None:
    if a.n != b.n:
        raise GeneratorMismatchError(f"generator count mismatch: {a.n} != {b.n}")
    if a.exact != b.exact:
        raise ModeMismatchError("cannot mix exact and float mode values")


def _is_scalar(x) -> bool:
    return isinstance(x, (int, float, complex, GaussianRational)) or (
        hasattr(x, "numerator") and hasattr(x, "denominator")
    )


class NcPoly:
    """A non-commutative polynomial over ``n`` generators."""

    __slots__ = ("n", "terms", "exact")

    def __init__(self, n: int, terms=(), exact: bool = True):
        if n < 1:
            raise ValueError("generator count must be at least 1")
        self.n = n
        self.exact = exact
        items = terms.items() if isinstance(terms, dict) else terms
        canon: Dict[Word, object] = {}
        for word, c in items:
            word = tuple(int(i) for i in word)
            for letter in word:
                if not 1 <= letter <= n:
                    raise IndexError(f"generator index {letter} outside 1..{n}")
            _add_into(canon, word, coerce(c, exact))
        self.terms = canon

    @classmethod
    def _make(cls, n: int, terms: dict, exact: bool) -> "NcPoly":
        # terms must already be canonical (no zeros, valid words)
        obj = object.__new__(cls)
        obj.n = n
        obj.terms = terms
        obj.exact = exact
        return obj

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, n: int, exact: bool = True) -> "NcPoly":
        return cls._make(n, {}, exact)

    @classmethod
    def one(cls, n: int, exact: bool = True) -> "NcPoly":
        return cls.constant(1, n, exact)

    @classmethod
    def constant(cls, c, n: int, exact: bool = True) -> "NcPoly":
        return cls(n, [((), c)], exact)

    @classmethod
    def gen(cls, j: int, n: int, exact: bool = True) -> "NcPoly":
        return cls(n, [((j,), 1)], exact)

    @classmethod
    def monomial(cls, word, n: int, coeff=1, exact: bool = True) -> "NcPoly":
        return cls(n, [(tuple(word), coeff)], exact)

    # -- inspection -------------------------------------------------------

    @property
    def degree(self):
        if not self.terms:
            return NEG_INF
        return max(len(w) for w in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def coefficient(self, word) -> object:
        return self.terms.get(tuple(word), 0 if self.exact else 0j)

    def items(self) -> Iterator[Tuple[Word, object]]:
        """Terms in canonical (length, lex) order."""
        for w in sorted(self.terms, key=word_key):
            yield w, self.terms[w]

    def homogeneous_part(self, k: int) -> "NcPoly":
        return NcPoly._make(self.n, {w: c for w, c in self.terms.items() if len(w) == k}, self.exact)

    def truncate(self, max_degree: int) -> "NcPoly":
        return NcPoly._make(
            self.n, {w: c for w, c in self.terms.items() if len(w) <= max_degree}, self.exact
        )

    # -- arithmetic -------------------------------------------------------

    def _lift(self, other) -> "NcPoly":
        if isinstance(other, NcPoly):
            _check_pair(self, other)
            return other
        if _is_scalar(other):
            return NcPoly.constant(other, self.n, self.exact)
        raise TypeError(f"cannot combine NcPoly with {type(other).__name__}")

    def __add__(self, other):
        other = self._lift(other)
        terms = dict(self.terms)
        for w, c in other.terms.items():
            _add_into(terms, w, c)
        return NcPoly._make(self.n, terms, self.exact)

    __radd__ = __add__

    def __neg__(self):
        return NcPoly._make(self.n, {w: -c for w, c in self.terms.items()}, self.exact)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c) -> "NcPoly":
        c = coerce(c, self.exact)
        if not c:
            return NcPoly.zero(self.n, self.exact)
        return NcPoly._make(self.n, {w: c * v for w, v in self.terms.items()}, self.exact)

    def __mul__(self, other):
        if isinstance(other, NcPoly):
            return mul(self, other)
        if _is_scalar(other):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if _is_scalar(other):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = NcPoly.one(self.n, self.exact)
        base = self
        while k:
            if k & 1:
                result = mul(result, base)
            k >>= 1
            if k:
                base = mul(base, base)
        return result

    def __eq__(self, other):
        if isinstance(other, NcPoly):
            return self.n == other.n and self.exact == other.exact and self.terms == other.terms
        if _is_scalar(other):
            return self == self._lift(other)
        return NotImplemented

    __hash__ = None

    def adjoint(self) -> "NcPoly":
        return adjoint(self)

    def to_float(self) -> "NcPoly":
        if not self.exact:
            return self
        return NcPoly._make(self.n, {w: complex(c) for w, c in self.terms.items()}, False)

    def __repr__(self):
        from .parsing import format_poly

        return f"NcPoly(n={self.n}, {format_poly(self)!r})"

    def __str__(self):
        from .parsing import format_poly

        return format_poly(self)


def gens(n: int, exact: bool = True):
    """The generators ``s_1, ..., s_n``."""
    return tuple(NcPoly.gen(j, n, exact) for j in range(1, n + 1))


def mul(P: NcPoly, Q: NcPoly) -> NcPoly:
    _check_pair(P, Q)
    terms: dict = {}
    qitems = list(Q.terms.items())
    for u, a in P.terms.items():
        for v, b in qitems:
            _add_into(terms, u + v, a * b)
    return NcPoly._make(P.n, terms, P.exact)


def adjoint(P: NcPoly) -> NcPoly:
    """Word reversal with coefficient conjugation (the generators are self-adjoint)."""
    return NcPoly._make(P.n, {w[::-1]: c.conjugate() for w, c in P.terms.items()}, P.exact)


class BiTensor:
    """An element of C<n> (x) C<n>, stored as ``{(left_word, right_word): coeff}``."""

    __slots__ = ("n", "terms", "exact")

    def __init__(self, n: int, terms=(), exact: bool = True):
        self.n = n
        self.exact = exact
        items = terms.items() if isinstance(terms, dict) else terms
        canon: dict = {}
        for (u, v), c in items:
            _add_into(canon, (tuple(u), tuple(v)), coerce(c, exact))
        self.terms = canon

    @classmethod
    def _make(cls, n, terms, exact):
        obj = object.__new__(cls)
        obj.n, obj.terms, obj.exact = n, terms, exact
        return obj

    @classmethod
    def simple(cls, P: NcPoly, Q: NcPoly) -> "BiTensor":
        """The elementary tensor ``P (x) Q``."""
        _check_pair(P, Q)
        terms: dict = {}
        for u, a in P.terms.items():
            for v, b in Q.terms.items():
                _add_into(terms, (u, v), a * b)
        return cls._make(P.n, terms, P.exact)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "BiTensor") -> "BiTensor":
        _check_pair(self, other)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            _add_into(terms, k, c)
        return BiTensor._make(self.n, terms, self.exact)

    def __neg__(self):
        return BiTensor._make(self.n, {k: -c for k, c in self.terms.items()}, self.exact)

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, BiTensor):
            return NotImplemented
        return self.n == other.n and self.exact == other.exact and self.terms == other.terms

    __hash__ = None

    def flip(self) -> "BiTensor":
        """The flip ``a (x) b -> b (x) a``."""
        return BiTensor._make(self.n, {(v, u): c for (u, v), c in self.terms.items()}, self.exact)

    def adjoint(self) -> "BiTensor":
        """``(a (x) b)* = a* (x) b*``."""
        return BiTensor._make(
            self.n, {(u[::-1], v[::-1]): c.conjugate() for (u, v), c in self.terms.items()}, self.exact
        )

    def left_mul(self, P: NcPoly) -> "BiTensor":
        """``(P (x) 1) * T``."""
        _check_pair(self, P)
        terms: dict = {}
        for w, a in P.terms.items():
            for (u, v), c in self.terms.items():
                _add_into(terms, (w + u, v), a * c)
        return BiTensor._make(self.n, terms, self.exact)

    def right_mul(self, Q: NcPoly) -> "BiTensor":
        """``T * (1 (x) Q)``."""
        _check_pair(self, Q)
        terms: dict = {}
        for w, a in Q.terms.items():
            for (u, v), c in self.terms.items():
                _add_into(terms, (u, v + w), a * c)
        return BiTensor._make(self.n, terms, self.exact)

    def multiply(self) -> NcPoly:
        """The multiplication map ``mu(a (x) b) = ab``."""
        return insert(NcPoly.one(self.n, self.exact), self)

    def __repr__(self):
        from .parsing import format_poly

        parts = []
        for (u, v), c in sorted(self.terms.items(), key=lambda kv: (word_key(kv[0][0]), word_key(kv[0][1]))):
            left = format_poly(NcPoly._make(self.n, {u: c}, self.exact))
            right = format_poly(NcPoly._make(self.n, {v: 1 if self.exact else 1 + 0j}, self.exact))
            parts.append(f"{left} (x) {right}")
        return "BiTensor(" + (" + ".join(parts) or "0") + ")"


def _check_index(j: int, n: int) -> None:
    if not 1 <= j <= n:
        raise IndexError(f"generator index {j} outside 1..{n}")


def free_diff(j: int, P: NcPoly) -> BiTensor:
    """Free difference quotient: split each word at every occurrence of ``s_j``."""
    _check_index(j, P.n)
    terms: dict = {}
    for w, c in P.terms.items():
        for k, letter in enumerate(w):
            if letter == j:
                _add_into(terms, (w[:k], w[k + 1:]), c)
    return BiTensor._make(P.n, terms, P.exact)


def cyclic_diff(j: int, P: NcPoly) -> NcPoly:
    """Cyclic derivative: at each occurrence of ``s_j``, the rotation that starts right after it."""
    _check_index(j, P.n)
    terms: dict = {}
    for w, c in P.terms.items():
        for k, letter in enumerate(w):
            if letter == j:
                _add_into(terms, w[k + 1:] + w[:k], c)
    return NcPoly._make(P.n, terms, P.exact)


def cyclic_grad(P: NcPoly) -> "VectorField":
    return VectorField([cyclic_diff(j, P) for j in range(1, P.n + 1)])


def insert(b: NcPoly, T: BiTensor) -> NcPoly:
    """``m_b(P (x) Q) = P b Q``, extended linearly."""
    _check_pair(b, T)
    terms: dict = {}
    bitems = list(b.terms.items())
    for (u, v), c in T.terms.items():
        for w, a in bitems:
            _add_into(terms, u + w + v, c * a)
    return NcPoly._make(b.n, terms, b.exact)


def directional(b: "VectorField", P: NcPoly) -> NcPoly:
    """The derivation ``D_b = sum_j m_{b_j} o d_j``: substitute ``b_j`` for each ``s_j`` in turn."""
    _check_pair(b, P)
    terms: dict = {}
    subs = [list(bj.terms.items()) for bj in b.components]
    for w, c in P.terms.items():
        for k, letter in enumerate(w):
            pre, post = w[:k], w[k + 1:]
            for u, a in subs[letter - 1]:
                _add_into(terms, pre + u + post, c * a)
    return NcPoly._make(P.n, terms, P.exact)


def poisson_bracket(P: "VectorField", Q: "VectorField") -> "VectorField":
    """``{P, Q} = (D_P Q_j - D_Q P_j)_j``."""
    _check_pair(P, Q)
    return VectorField(
        [directional(P, qj) - directional(Q, pj) for pj, qj in zip(P.components, Q.components)]
    )


def bracket(P: "VectorField", Q: "VectorField") -> "VectorField":
    """The Lie bracket ``[P, Q] = -{P, Q}``."""
    return -poisson_bracket(P, Q)


class VectorField:
    """An ``n``-tuple of polynomials; ``components[j-1]`` is the ``s_j`` direction."""

    __slots__ = ("n", "components", "exact")

    def __init__(self, components: Iterable[NcPoly]):
        comps = tuple(components)
        if not comps:
            raise ValueError("a vector field needs at least one component")
        n, exact = comps[0].n, comps[0].exact
        if len(comps) != n:
            raise GeneratorMismatchError(f"{len(comps)} components for {n} generators")
        for c in comps:
            _check_pair(comps[0], c)
        self.n = n
        self.exact = exact
        self.components = comps

    @classmethod
    def zero(cls, n: int, exact: bool = True) -> "VectorField":
        return cls([NcPoly.zero(n, exact)] * n)

    @classmethod
    def from_terms(cls, n: int, comps, exact: bool = True) -> "VectorField":
        """Build from per-component term maps (or iterables of ``(word, coeff)``)."""
        return cls([NcPoly(n, c, exact) for c in comps])

    def __getitem__(self, idx: int) -> NcPoly:
        return self.components[idx]

    def __iter__(self):
        return iter(self.components)

    def __len__(self):
        return self.n

    @property
    def degree(self):
        return max(c.degree for c in self.components)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __add__(self, other: "VectorField") -> "VectorField":
        _check_pair(self, other)
        return VectorField([a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other: "VectorField") -> "VectorField":
        _check_pair(self, other)
        return VectorField([a - b for a, b in zip(self.components, other.components)])

    def __neg__(self):
        return VectorField([-a for a in self.components])

    def scale(self, c) -> "VectorField":
        return VectorField([a.scale(c) for a in self.components])

    def __mul__(self, c):
        if _is_scalar(c):
            return self.scale(c)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.n == other.n and self.exact == other.exact and self.components == other.components

    __hash__ = None

    def adjoint(self) -> "VectorField":
        return VectorField([adjoint(a) for a in self.components])

    def is_self_adjoint(self) -> bool:
        return all(adjoint(a) == a for a in self.components)

    def self_adjoint_part(self) -> "VectorField":
        return (self + self.adjoint()).scale(Fraction(1, 2))

    def truncate(self, max_degree: int) -> "VectorField":
        return VectorField([a.truncate(max_degree) for a in self.components])

    def to_float(self) -> "VectorField":
        return VectorField([a.to_float() for a in self.components])

    def __repr__(self):
        return f"VectorField({self})"

    def __str__(self):
        from .parsing import format_field

        return format_field(self)
