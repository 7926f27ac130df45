"""Idempotent semifields and their scalars.

Four carriers are provided: ``MAX_PLUS``, ``MIN_PLUS``, ``MAX_TIMES`` and
``MIN_TIMES``. Additive carriers (max-plus, min-plus) hold exact
:class:`fractions.Fraction` values; multiplicative carriers hold positive
floats and compare with a relative tolerance (``TROPOPT_RTOL``, default 1e-9).

The zero element is represented by ``None`` at the raw level and by
``Scalar(sf, None)`` at the API level; it is never a numeric sentinel.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Optional, Union

from .errors import BottomInversionError, ParseError, SemifieldMismatch

Raw = Optional[Union[Fraction, float]]

DEFAULT_RTOL = 1e-9


def default_rtol() -> float:
    value = os.environ.get("TROPOPT_RTOL")
    return float(value) if value else DEFAULT_RTOL


def as_exponent(e) -> Fraction:
    """Coerce ``e`` to an exact rational exponent; floats are refused."""
    if isinstance(e, bool):
        raise TypeError("boolean is not an exponent")
    if isinstance(e, (int, Fraction)):
        return Fraction(e)
    if isinstance(e, Rational):
        return Fraction(e.numerator, e.denominator)
    if isinstance(e, tuple) and len(e) == 2:
        return Fraction(e[0], e[1])
    if isinstance(e, str):
        return Fraction(e)
    raise TypeError(f"exponent must be an exact rational, got {type(e).__name__}")


class Semifield:
    """A linearly ordered, radicable idempotent semifield over the reals.

    ``additive`` selects arithmetic ``+`` as the semifield product (else
    ``*``); ``maximize`` selects ``max`` as the semifield sum (else ``min``).
    Methods prefixed by nothing act on raw values (``None`` is the zero).
    """

    def __init__(self, name: str, additive: bool, maximize: bool):
        self.name = name
        self.additive = additive
        self.maximize = maximize
        self.one = Fraction(0) if additive else 1.0

    def __repr__(self):
        return f"Semifield({self.name!r})"

    def __reduce__(self):
        return (get_semifield, (self.name,))

    @property
    def zero(self):
        return None

    @property
    def exact(self) -> bool:
        return self.additive

    @property
    def rtol(self) -> float:
        return 0.0 if self.additive else default_rtol()

    # --- coercion -------------------------------------------------------

    def coerce(self, value) -> Raw:
        if value is None:
            return None
        if isinstance(value, Scalar):
            if value.semifield is not self:
                raise SemifieldMismatch(f"{value.semifield.name} scalar used in {self.name}")
            return value.value
        if isinstance(value, bool):
            raise ParseError("booleans are not semifield values")
        if isinstance(value, str):
            text = value.strip()
            if text == "zero":
                return None
            if text in ("-inf", "+inf", "inf"):
                value = float(text)
            else:
                try:
                    value = Fraction(text)
                except ValueError:
                    raise ParseError(f"cannot read {value!r} as a number") from None
        if isinstance(value, float) and math.isinf(value):
            if self._is_numeric_zero(value):
                return None
            raise ParseError(f"{value} is not an element of {self.name}")
        if self.additive:
            if isinstance(value, float):
                if math.isnan(value):
                    raise ParseError("NaN is not a semifield value")
                return Fraction(repr(value))
            if isinstance(value, Rational):
                return Fraction(value.numerator, value.denominator)
            raise ParseError(f"cannot read {value!r} as a number")
        try:
            v = float(value)
        except (TypeError, ValueError):
            raise ParseError(f"cannot read {value!r} as a number") from None
        if v == 0.0 and self.maximize:
            return None
        if not (v > 0.0) or math.isinf(v):
            raise ParseError(f"{self.name} values must be positive and finite, got {value!r}")
        return v

    def _is_numeric_zero(self, v: float) -> bool:
        if self.additive:
            return v == (-math.inf if self.maximize else math.inf)
        return (not self.maximize) and v == math.inf

    def scalar(self, value) -> "Scalar":
        return Scalar(self, self.coerce(value))

    # --- arithmetic on raw values ----------------------------------------

    def add(self, a: Raw, b: Raw) -> Raw:
        if a is None:
            return b
        if b is None:
            return a
        if self.maximize:
            return a if a >= b else b
        return a if a <= b else b

    def mul(self, a: Raw, b: Raw) -> Raw:
        if a is None or b is None:
            return None
        return a + b if self.additive else a * b

    def inv(self, a: Raw) -> Raw:
        if a is None:
            raise BottomInversionError(f"the zero of {self.name} has no inverse")
        return -a if self.additive else 1.0 / a

    def pow(self, a: Raw, e) -> Raw:
        e = as_exponent(e)
        if a is None:
            if e > 0:
                return None
            raise BottomInversionError(f"zero of {self.name} raised to non-positive power {e}")
        if self.additive:
            return a * e
        if e.denominator == 1:
            return a ** int(e)
        return a ** float(e)

    # --- order ----------------------------------------------------------

    def le(self, a: Raw, b: Raw) -> bool:
        """Exact semifield order ``a <= b`` (i.e. ``a (+) b == b``)."""
        if a is None:
            return True
        if b is None:
            return False
        return a <= b if self.maximize else a >= b

    def cmp(self, a: Raw, b: Raw) -> int:
        if a == b:
            return 0
        return -1 if self.le(a, b) else 1

    def eq(self, a: Raw, b: Raw) -> bool:
        if a is None or b is None:
            return a is b
        if self.additive:
            return a == b
        return math.isclose(a, b, rel_tol=self.rtol, abs_tol=0.0)

    def approx_le(self, a: Raw, b: Raw) -> bool:
        return self.le(a, b) or self.eq(a, b)

    # --- log chart ------------------------------------------------------

    def magnitude(self, a: Raw):
        """Order-isomorphic image of ``a`` in the reals; ``(x)`` maps to ``+``."""
        if a is None:
            return -math.inf
        if self.additive:
            return a if self.maximize else -a
        return math.log(a) if self.maximize else -math.log(a)

    def lift(self, t) -> Raw:
        """Inverse of :meth:`magnitude`: the element ``t`` above the identity."""
        if self.additive:
            t = Fraction(t) if not isinstance(t, float) else Fraction(repr(t))
            return t if self.maximize else -t
        t = float(t)
        return math.exp(t) if self.maximize else math.exp(-t)

    def from_log(self, v) -> Raw:
        """Map a plain coordinate to a carrier value (identity on additive carriers)."""
        if self.additive:
            return Fraction(v) if not isinstance(v, float) else Fraction(repr(v))
        return math.exp(float(v))

    # --- rendering ------------------------------------------------------

    def render(self, a: Raw):
        """JSON form: ints, ``"p/q"`` strings, floats, or ``"zero"``."""
        if a is None:
            return "zero"
        if self.additive:
            return int(a) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
        return a

    def human(self, a: Raw) -> str:
        if a is None:
            if self.additive or not self.maximize:
                return "-inf" if self.maximize else "+inf"
            return "0"
        if self.additive:
            return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
        return f"{a:.12g}"


MAX_PLUS = Semifield("max-plus", additive=True, maximize=True)
MIN_PLUS = Semifield("min-plus", additive=True, maximize=False)
MAX_TIMES = Semifield("max-times", additive=False, maximize=True)
MIN_TIMES = Semifield("min-times", additive=False, maximize=False)

SEMIFIELDS = {sf.name: sf for sf in (MAX_PLUS, MIN_PLUS, MAX_TIMES, MIN_TIMES)}


def get_semifield(name) -> Semifield:
    if isinstance(name, Semifield):
        return name
    try:
        return SEMIFIELDS[name]
    except KeyError:
        raise ParseError(f"unknown semifield {name!r}; expected one of {sorted(SEMIFIELDS)}") from None


@dataclass(frozen=True)
class Scalar:
    """One element of a semifield; ``value is None`` is the zero element."""

    semifield: Semifield
    value: Raw

    @classmethod
    def of(cls, sf, value) -> "Scalar":
        sf = get_semifield(sf)
        return cls(sf, sf.coerce(value))

    @classmethod
    def zero(cls, sf) -> "Scalar":
        return cls(get_semifield(sf), None)

    @classmethod
    def one(cls, sf) -> "Scalar":
        sf = get_semifield(sf)
        return cls(sf, sf.one)

    @property
    def is_zero(self) -> bool:
        return self.value is None

    def _other(self, other) -> Raw:
        if isinstance(other, Scalar):
            if other.semifield is not self.semifield:
                raise SemifieldMismatch(
                    f"cannot combine {self.semifield.name} with {other.semifield.name}"
                )
            return other.value
        return self.semifield.coerce(other)

    def __add__(self, other):
        return Scalar(self.semifield, self.semifield.add(self.value, self._other(other)))

    __radd__ = __add__

    def __mul__(self, other):
        from .linalg import Matrix

        if isinstance(other, Matrix):
            return NotImplemented
        return Scalar(self.semifield, self.semifield.mul(self.value, self._other(other)))

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, e):
        return Scalar(self.semifield, self.semifield.pow(self.value, e))

    def inverse(self) -> "Scalar":
        return Scalar(self.semifield, self.semifield.inv(self.value))

    def __truediv__(self, other):
        return self * Scalar(self.semifield, self.semifield.inv(self._other(other)))

    def __le__(self, other):
        return self.semifield.le(self.value, self._other(other))

    def __lt__(self, other):
        o = self._other(other)
        return self.semifield.le(self.value, o) and self.value != o

    def __ge__(self, other):
        return self.semifield.le(self._other(other), self.value)

    def __gt__(self, other):
        o = self._other(other)
        return self.semifield.le(o, self.value) and self.value != o

    def isclose(self, other) -> bool:
        return self.semifield.eq(self.value, self._other(other))

    def render(self):
        return self.semifield.render(self.value)

    def __str__(self):
        return self.semifield.human(self.value)

    def __repr__(self):
        return f"Scalar({self.semifield.name}, {self.semifield.human(self.value)})"


def _same(a: Scalar, b: Scalar) -> Semifield:
    if a.semifield is not b.semifield:
        raise SemifieldMismatch(f"cannot combine {a.semifield.name} with {b.semifield.name}")
    return a.semifield


def oplus(a: Scalar, b: Scalar) -> Scalar:
    sf = _same(a, b)
    return Scalar(sf, sf.add(a.value, b.value))


def otimes(a: Scalar, b: Scalar) -> Scalar:
    sf = _same(a, b)
    return Scalar(sf, sf.mul(a.value, b.value))


def inverse(a: Scalar) -> Scalar:
    return a.inverse()


def power(a: Scalar, exponent) -> Scalar:
    return a ** exponent


def compare(a: Scalar, b: Scalar) -> int:
    """Return -1, 0 or 1 according to the semifield order; zero is least."""
    sf = _same(a, b)
    return sf.cmp(a.value, b.value)
