"""Scalar backends, tolerance policy and seeded rational generators.

Two backends are supported.  Exact values are ``int`` or
:class:`fractions.Fraction` (always normalised by the standard library);
approximate values are ``float`` or, in high-precision mode, ``mpmath.mpf``.
Arithmetic is plain Python arithmetic; the helpers here only guard the
boundaries where values of different backends could meet.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Union

import mpmath

EXACT = "exact-rational"
APPROX = "approximate-real"

#: Default relative tolerance for approximate comparisons.
DEFAULT_TOL = 1e-9

Scalar = Union[int, Fraction, float, "mpmath.mpf"]


class BackendError(TypeError):
    """Raised when exact and approximate values meet in one expression."""


class DomainError(ValueError):
    """A value lies outside the domain of an operation (e.g. non-positive weight)."""


class HorizonError(IndexError):
    """A sequence was asked for a term beyond its computable horizon."""


def backend_of(x) -> str:
    if isinstance(x, bool):
        raise BackendError("booleans are not scalars")
    if isinstance(x, Rational):
        return EXACT
    if isinstance(x, (float, mpmath.mpf)):
        return APPROX
    raise BackendError(f"unsupported scalar type {type(x).__name__}")


def common_backend(values: Iterable) -> str:
    """Backend shared by every value; raises :class:`BackendError` on a mix."""
    found = None
    for v in values:
        b = backend_of(v)
        if found is None:
            found = b
        elif b != found:
            raise BackendError(f"mixed backends: {found} and {b}")
    if found is None:
        raise ValueError("no values")
    return found


def as_exact(x) -> Fraction:
    if backend_of(x) != EXACT:
        raise BackendError(f"expected an exact rational, got {x!r}")
    return Fraction(x)


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or an integer. Decimal input is rejected."""
    s = text.strip()
    if not s:
        raise ValueError("empty rational")
    if any(c in s for c in ".eE"):
        raise ValueError(f"decimal input {text!r} not accepted; use p/q")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational: {text!r}") from exc


def format_scalar(x) -> str:
    """Deterministic text form: ``p/q`` in lowest terms, floats at 17 significant digits."""
    if backend_of(x) == EXACT:
        q = Fraction(x)
        return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
    if isinstance(x, mpmath.mpf):
        x = float(x)
    return format(x, ".17g")


def log(x, digits: int | None = None):
    """Natural log of a positive scalar.

    Exact inputs go through integer logs so tiny or huge rationals do not
    underflow.  With ``digits`` set, an ``mpmath.mpf`` at that precision is
    returned instead of a float.
    """
    if x <= 0:
        raise DomainError(f"log of non-positive value {x!r}")
    if digits is not None:
        with mpmath.workdps(digits):
            if backend_of(x) == EXACT:
                q = Fraction(x)
                return +(mpmath.log(q.numerator) - mpmath.log(q.denominator))
            return +mpmath.log(mpmath.mpf(x))
    if backend_of(x) == EXACT:
        q = Fraction(x)
        if q.denominator == 1:
            return math.log(q.numerator)
        return math.log(q.numerator) - math.log(q.denominator)
    if isinstance(x, mpmath.mpf):
        return mpmath.log(x)
    return math.log(x)


def log_ratio_near_one(r, digits: int | None = None):
    """ln(r) for r near 1, keeping relative accuracy when r is exact."""
    if r <= 0:
        raise DomainError(f"log of non-positive value {r!r}")
    if backend_of(r) == EXACT and digits is None:
        return math.log1p(float(Fraction(r) - 1))
    return log(r, digits)


@dataclass(frozen=True)
class Tolerance:
    """Relative tolerance band used by every approximate comparison.

    A value ``v`` tested against zero with magnitude ``scale`` is positive if
    ``v >= rel * scale``, negative if ``v <= -rel * scale`` and ``boundary``
    otherwise.  Exact values are compared exactly.
    """

    rel: float = DEFAULT_TOL

    @classmethod
    def from_digits(cls, digits: int) -> "Tolerance":
        return cls(10.0 ** (-digits))

    def sign(self, value, scale=None) -> int:
        if backend_of(value) == EXACT:
            return (value > 0) - (value < 0)
        if scale is None:
            scale = abs(value)
        band = self.rel * float(scale)
        v = float(value)
        if v >= band and v != 0:
            return 1
        if v <= -band and v != 0:
            return -1
        return 0


DEFAULT_TOLERANCE = Tolerance()


def random_rational(rng: random.Random, signed: bool = False) -> Fraction:
    """Numerator and denominator uniform on 1..1000, optionally with a random sign."""
    q = Fraction(rng.randint(1, 1000), rng.randint(1, 1000))
    if signed and rng.random() < 0.5:
        q = -q
    return q


def random_rationals(seed: int, count: int, signed: bool = False) -> list[Fraction]:
    rng = random.Random(seed)
    return [random_rational(rng, signed) for _ in range(count)]


def seeded_rng(seed: int) -> random.Random:
    return random.Random(seed)


def iter_seeds(base: int, count: int) -> Iterator[int]:
    # independent streams per sample keep individual cases reproducible
    for i in range(count):
        yield base * 100_003 + i
