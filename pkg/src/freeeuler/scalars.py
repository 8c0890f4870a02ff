"""Scalars for the two arithmetic modes.

Exact mode works over the Gaussian rationals Q(i).  Real values are kept as
plain ``int`` / ``Fraction`` objects and only values with a nonzero imaginary
part become :class:`GaussianRational`, so purely real computations run at
``Fraction`` speed.  Float mode uses Python ``complex``.

The two modes never mix: combining a :class:`GaussianRational` with a float
or complex raises ``TypeError``.
"""

from __future__ import annotations

import numbers
from fractions import Fraction


class GaussianRational:
    """An element ``real + imag*i`` of Q(i) with ``imag != 0``.

    Use :func:`gauss` to build values; it collapses to a rational when the
    imaginary part vanishes.
    """

    __slots__ = ("real", "imag")

    def __init__(self, real, imag):
        self.real = real
        self.imag = imag

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, GaussianRational):
            return gauss(self.real + other.real, self.imag + other.imag)
        if _is_rational(other):
            return GaussianRational(self.real + other, self.imag)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, GaussianRational):
            return gauss(self.real - other.real, self.imag - other.imag)
        if _is_rational(other):
            return GaussianRational(self.real - other, self.imag)
        return NotImplemented

    def __rsub__(self, other):
        if _is_rational(other):
            return GaussianRational(other - self.real, -self.imag)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            a, b, c, d = self.real, self.imag, other.real, other.imag
            return gauss(a * c - b * d, a * d + b * c)
        if _is_rational(other):
            return gauss(self.real * other, self.imag * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, GaussianRational):
            return self * other.reciprocal()
        if _is_rational(other):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return GaussianRational(Fraction(self.real) / other, Fraction(self.imag) / other)
        return NotImplemented

    def __rtruediv__(self, other):
        if _is_rational(other):
            return self.reciprocal() * other
        return NotImplemented

    def __neg__(self):
        return GaussianRational(-self.real, -self.imag)

    def __pos__(self):
        return self

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.reciprocal() ** (-k)
        result, base = 1, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def reciprocal(self):
        norm = Fraction(self.real * self.real + self.imag * self.imag)
        return gauss(self.real / norm, -self.imag / norm)

    def conjugate(self):
        return GaussianRational(self.real, -self.imag)

    # -- comparison -------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.real == other.real and self.imag == other.imag
        if _is_rational(other):
            return self.imag == 0 and self.real == other
        return NotImplemented

    def __hash__(self):
        if self.imag == 0:
            return hash(self.real)
        return hash((self.real, self.imag))

    def __bool__(self):
        return bool(self.real) or bool(self.imag)

    def __complex__(self):
        return complex(float(self.real), float(self.imag))

    def __repr__(self):
        return f"GaussianRational({self.real!s}, {self.imag!s})"

    def __str__(self):
        return format_exact(self)


def _is_rational(x) -> bool:
    return isinstance(x, (int, Fraction)) or (
        isinstance(x, numbers.Rational) and not isinstance(x, bool)
    )


def gauss(real, imag=0):
    """Return ``real + imag*i`` in canonical form (rational if ``imag == 0``)."""
    if imag == 0:
        return real
    return GaussianRational(real, imag)


I = GaussianRational(0, 1)


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, GaussianRational)) or _is_rational(x)


def to_exact(x):
    """Coerce ``x`` into an exact scalar; floats are rejected."""
    if isinstance(x, bool):
        return int(x)
    if isinstance(x, (int, Fraction)):
        return x
    if isinstance(x, GaussianRational):
        return gauss(x.real, x.imag)
    if isinstance(x, numbers.Rational):
        return Fraction(x)
    raise TypeError(f"cannot use {type(x).__name__} value {x!r} in exact mode")


def to_float(x) -> complex:
    """Coerce ``x`` into a float-mode scalar.

    Rational literals are accepted; Gaussian rationals are not, because they
    only arise from exact-mode computation.
    """
    if isinstance(x, GaussianRational):
        raise TypeError("exact Gaussian rational cannot enter a float-mode expression")
    return complex(x)


def exact_to_complex(x) -> complex:
    """Explicit exact -> float conversion."""
    if isinstance(x, GaussianRational):
        return complex(x)
    return complex(float(x))


def coerce(x, exact: bool):
    return to_exact(x) if exact else to_float(x)


def divide(a, b):
    """Exact-safe division: never produces a Python float from two ints."""
    if isinstance(a, int) and isinstance(b, int):
        return Fraction(a, b)
    return a / b


def abs2(x):
    """Squared modulus, exact when ``x`` is exact."""
    return x.real * x.real + x.imag * x.imag


# -- text form -------------------------------------------------------------


def format_exact(x) -> str:
    """``p/q`` for rationals, ``p/q+r/t*i`` otherwise."""
    x = to_exact(x)
    if not isinstance(x, GaussianRational):
        return str(Fraction(x))
    im = Fraction(x.imag)
    sign = "-" if im < 0 else "+"
    return f"{Fraction(x.real)!s}{sign}{abs(im)!s}*i"


def format_float(x) -> str:
    """17 significant digits; ``a+b*i`` when the imaginary part is nonzero."""
    x = complex(x)
    re = format(x.real, ".17g")
    if x.imag == 0:
        return re
    sign = "-" if x.imag < 0 else "+"
    return f"{re}{sign}{format(abs(x.imag), '.17g')}*i"


def format_scalar(x) -> str:
    if isinstance(x, complex) or isinstance(x, float):
        return format_float(x)
    return format_exact(x)
