"""Catalogued weighted-shift families, their realisation, and closed-form cutoffs.

A realised :class:`Shift` keeps an exact *base* weights-squared sequence and a
rational exponent ``p``; the shift's actual weights-squared are the base
values raised to ``p``.  Every transform in :mod:`shiftcpd.transforms` maps
(base, p) to (base', p') without leaving the rationals, so Schur powers and
Aluthge transforms keep an exact core even when their own moments are
irrational.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import comb, factorial

from .scalars import (
    APPROX,
    EXACT,
    DomainError,
    backend_of,
    format_scalar,
    log,
    log_ratio_near_one,
    parse_rational,
)
from .sequences import (
    MomentSequence,
    RealSequence,
    WeightSequence,
    forward_difference,
    moments_from_weights,
)

FAMILIES = ("agler", "agler-perturbed", "homographic", "dirichlet", "euler", "explicit")


@dataclass(frozen=True)
class ShiftSpec:
    """Declarative description of one shift.

    ``explicit`` lists weights-squared; the last listed value repeats forever
    (a flat tail), so ``explicit:[1]`` is the unweighted shift.
    """

    family: str
    params: tuple = ()

    def __post_init__(self):
        f, p = self.family, self.params
        if f not in FAMILIES:
            raise ValueError(f"unknown family {f!r}")
        if f == "agler":
            (j,) = p
            if not isinstance(j, int) or j < 1:
                raise ValueError("agler needs an integer j >= 1")
        elif f == "agler-perturbed":
            j, x = p
            if not isinstance(j, int) or j < 2:
                raise ValueError("agler-perturbed needs an integer j >= 2")
            if not isinstance(x, Fraction) or x <= 0:
                raise ValueError("agler-perturbed needs a rational x > 0")
        elif f == "homographic":
            if len(p) != 4 or any(not isinstance(v, Fraction) or v <= 0 for v in p):
                raise ValueError("homographic needs four positive rationals a,b,c,d")
            a, b, c, d = p
            if not a * d > b * c:
                raise ValueError("homographic needs ad > bc")
        elif f == "explicit":
            if not p or any(not isinstance(v, Fraction) or v <= 0 for v in p):
                raise ValueError("explicit needs a non-empty list of positive rationals")
        elif p:
            raise ValueError(f"{f} takes no parameters")

    @classmethod
    def agler(cls, j: int) -> "ShiftSpec":
        return cls("agler", (j,))

    @classmethod
    def perturbed(cls, j: int, x) -> "ShiftSpec":
        return cls("agler-perturbed", (j, Fraction(x)))

    @classmethod
    def homographic(cls, a, b, c, d) -> "ShiftSpec":
        return cls("homographic", tuple(Fraction(v) for v in (a, b, c, d)))

    @classmethod
    def dirichlet(cls) -> "ShiftSpec":
        return cls("dirichlet")

    @classmethod
    def euler(cls) -> "ShiftSpec":
        return cls("euler")

    @classmethod
    def explicit(cls, weights_squared) -> "ShiftSpec":
        return cls("explicit", tuple(Fraction(v) for v in weights_squared))

    @property
    def text(self) -> str:
        f, p = self.family, self.params
        if f == "agler":
            return f"agler:{p[0]}"
        if f == "agler-perturbed":
            return f"agler-perturbed:{p[0]}:x={format_scalar(p[1])}"
        if f == "homographic":
            return "homographic:" + ",".join(format_scalar(v) for v in p)
        if f == "explicit":
            return "explicit:[" + ",".join(format_scalar(v) for v in p) + "]"
        return f

    def __str__(self) -> str:
        return self.text

    def shift(self) -> "Shift":
        return _realize_cached(self)


class SpecParseError(ValueError):
    def __init__(self, text: str, position: int, message: str):
        super().__init__(f"{message} at position {position} in {text!r}")
        self.text = text
        self.position = position


def _int_param(text: str, token: str, pos: int) -> int:
    if not re.fullmatch(r"\d+", token):
        raise SpecParseError(text, pos, f"expected an integer, got {token!r}")
    return int(token)


def _rat_param(text: str, token: str, pos: int) -> Fraction:
    try:
        return parse_rational(token)
    except ValueError as exc:
        raise SpecParseError(text, pos, str(exc)) from None


def _positive_list(text: str, tokens: list[str], pos: int) -> list[Fraction]:
    vals = []
    for t in tokens:
        v = _rat_param(text, t, pos)
        if v <= 0:
            raise SpecParseError(text, pos, f"parameter {t!r} must be positive")
        vals.append(v)
        pos += len(t) + 1
    return vals


def parse_shift(text: str) -> ShiftSpec:
    """Parse the canonical textual form, e.g. ``agler-perturbed:2:x=3/2``."""
    s = text.strip()
    family, _, rest = s.partition(":")
    pos = len(family) + 1
    try:
        if family == "agler":
            return ShiftSpec.agler(_int_param(s, rest, pos))
        if family == "agler-perturbed":
            jtok, _, xtok = rest.partition(":")
            j = _int_param(s, jtok, pos)
            xpos = pos + len(jtok) + 1
            if not xtok.startswith("x="):
                raise SpecParseError(s, xpos, "expected x=<rational>")
            return ShiftSpec.perturbed(j, _rat_param(s, xtok[2:], xpos + 2))
        if family == "homographic":
            toks = rest.split(",")
            if len(toks) != 4:
                raise SpecParseError(s, pos, "homographic needs four parameters a,b,c,d")
            vals = _positive_list(s, toks, pos)
            return ShiftSpec.homographic(*vals)
        if family == "explicit":
            if not (rest.startswith("[") and rest.endswith("]")):
                raise SpecParseError(s, pos, "explicit needs a bracketed list")
            toks = rest[1:-1].split(",")
            return ShiftSpec.explicit(_positive_list(s, toks, pos + 1))
        if family in ("dirichlet", "euler"):
            if rest:
                raise SpecParseError(s, pos, f"{family} takes no parameters")
            return ShiftSpec(family)
    except SpecParseError:
        raise
    except ValueError as exc:
        raise SpecParseError(s, pos, str(exc)) from None
    raise SpecParseError(s, 0, f"unknown family {family!r}")


class Shift:
    """A realised shift: exact base weights-squared raised to a rational power."""

    def __init__(
        self,
        name: str,
        base_weights_squared: RealSequence,
        exponent: Fraction = Fraction(1),
        base_moments: RealSequence | None = None,
        base_sup=None,
        perturbation: tuple[int, Fraction] | None = None,
    ):
        if exponent <= 0:
            raise DomainError("exponent must be positive")
        self.name = name
        self.base_weights_squared = base_weights_squared
        self.exponent = Fraction(exponent)
        self._base_moments = base_moments
        self.base_sup = base_sup
        self.perturbation = perturbation

    def __repr__(self) -> str:
        return f"Shift({self.name!r})"

    @property
    def integral(self) -> bool:
        return self.exponent.denominator == 1

    @cached_property
    def base_moments(self) -> RealSequence:
        if self._base_moments is not None:
            return self._base_moments
        return moments_from_weights(WeightSequence(self.base_weights_squared), name=f"γ[{self.name}]")

    @property
    def backend(self) -> str:
        if self.integral and self.base_weights_squared.backend == EXACT:
            return EXACT
        return APPROX

    def _power(self, v):
        p = self.exponent
        if p == 1:
            return v
        if self.integral:
            return v ** int(p)
        return math.exp(float(p) * log(v))

    @cached_property
    def weights(self) -> WeightSequence:
        base = self.base_weights_squared
        seq = base if self.exponent == 1 else RealSequence(
            lambda n: self._power(base.term(n)), horizon=base.horizon, name=f"α²[{self.name}]"
        )
        sup = None if self.base_sup is None else self._power(self.base_sup)
        return WeightSequence(seq, sup_bound=sup)

    @cached_property
    def moments(self) -> MomentSequence:
        base = self.base_moments
        if self.exponent == 1 and isinstance(base, MomentSequence):
            return base
        return MomentSequence(lambda n: self._power(base.term(n)), horizon=base.horizon, name=f"γ[{self.name}]")

    @property
    def sup_weight_squared(self):
        """Exact supremum of the weights-squared when the family knows it."""
        return None if self.base_sup is None else self._power(self.base_sup)

    def log_moments(self, digits: int | None = None) -> RealSequence:
        base = self.base_moments
        p = self.exponent
        return RealSequence(lambda n: _scaled(p, log(base.term(n), digits)), horizon=base.horizon, name=f"ln γ[{self.name}]")

    def log_weights_squared(self, digits: int | None = None) -> RealSequence:
        base = self.base_weights_squared
        p = self.exponent
        return RealSequence(lambda n: _scaled(p, log(base.term(n), digits)), horizon=base.horizon, name=f"ln α²[{self.name}]")

    def delta(self, digits: int | None = None) -> RealSequence:
        """``δ_n = p · ln(β_{n+1}/β_n)`` with β the base weights-squared."""
        base = self.base_weights_squared
        p = self.exponent

        def rule(n: int):
            a, b = base.term(n), base.term(n + 1)
            if backend_of(a) == EXACT:
                r = log_ratio_near_one(Fraction(b) / Fraction(a), digits)
            else:
                r = log(b, digits) - log(a, digits)
            return _scaled(p, r)

        h = None if base.horizon is None else base.horizon - 1
        return RealSequence(rule, horizon=h, name=f"δ[{self.name}]")

    def is_contraction(self, sample: int = 64):
        """``(verdict, exact)``: sup of weights-squared ≤ 1, exactly when the family knows its sup."""
        sup = self.sup_weight_squared
        if sup is not None:
            return sup <= 1, True
        n = sample if self.weights.horizon is None else min(sample, self.weights.horizon)
        return all(self.weights.squared.term(i) <= 1 for i in range(n + 1)), False


def _scaled(p: Fraction, v):
    return v if p == 1 else float(p) * v


def _agler_moment(j: int, n: int) -> Fraction:
    return Fraction(factorial(j - 1) * factorial(n), factorial(n + j - 1))


def agler_moments(j: int) -> MomentSequence:
    """``γ_n^{(j)} = (j-1)! n! / (n+j-1)!`` in closed form."""
    if j < 1:
        raise ValueError("j >= 1")
    return MomentSequence(lambda n: _agler_moment(j, n), name=f"γ^({j})")


def agler_weights_squared(j: int) -> RealSequence:
    return RealSequence(lambda n: Fraction(n + 1, n + j), name=f"α²^({j})")


def _euler_weight(n: int) -> float:
    return math.fsum(1.0 / i for i in range(1, n + 2)) - math.log(n + 2)


def realize_shift(spec: ShiftSpec) -> Shift:
    f, p = spec.family, spec.params
    if f == "agler":
        j = p[0]
        return Shift(spec.text, agler_weights_squared(j), base_moments=agler_moments(j), base_sup=Fraction(1))
    if f == "agler-perturbed":
        j, x = p
        w = RealSequence(lambda n: x / j if n == 0 else Fraction(n + 1, n + j), name=f"α²[{spec.text}]")
        g = MomentSequence(lambda n: Fraction(1) if n == 0 else x * _agler_moment(j, n), name=f"γ[{spec.text}]")
        return Shift(spec.text, w, base_moments=g, base_sup=max(x / j, Fraction(1)), perturbation=(j, x))
    if f == "homographic":
        a, b, c, d = p
        w = RealSequence(lambda n: (a * n + b) / (c * n + d), name=f"α²[{spec.text}]")
        # ad > bc makes the weights-squared increase to a/c
        return Shift(spec.text, w, base_sup=a / c)
    if f == "dirichlet":
        w = RealSequence(lambda n: Fraction(n + 2, n + 1), name="α²[dirichlet]")
        g = MomentSequence(lambda n: Fraction(n + 1), name="γ[dirichlet]")
        return Shift(spec.text, w, base_moments=g, base_sup=Fraction(2))
    if f == "euler":
        w = RealSequence(lambda n: _euler_weight(n) ** 2, name="α²[euler]")
        return Shift(spec.text, w)
    if f == "explicit":
        vals = p
        w = RealSequence(lambda n: vals[min(n, len(vals) - 1)], name=f"α²[{spec.text}]")
        return Shift(spec.text, w, base_sup=max(vals))
    raise ValueError(f)


@lru_cache(maxsize=256)
def _realize_cached(spec: ShiftSpec) -> Shift:
    return realize_shift(spec)


def realize(spec) -> tuple[WeightSequence, MomentSequence]:
    """Weights (stored as weights-squared) and moments of a spec."""
    s = spec.shift()
    return s.weights, s.moments


# --- closed-form cutoffs -------------------------------------------------


@dataclass(frozen=True)
class Cutoff:
    """``value``: the property named by ``meaning`` holds iff ``x <= value``."""

    value: Fraction
    meaning: str
    provenance: str = "closed-form"
    extra: dict = field(default_factory=dict, compare=False)

    def __str__(self) -> str:
        return format_scalar(self.value)


def _check_jkm(j: int, k: int, m: int) -> None:
    if j < 2 or k < 1 or not 0 <= m <= k:
        raise ValueError(f"need j >= 2, k >= 1, 0 <= m <= k (got j={j}, k={k}, m={m})")


def contractivity_index(j: int, k: int, m: int) -> int:
    """The n with (k,2m)-PD of A_j(x) equivalent to n-contractivity."""
    _check_jkm(j, k, m)
    return (j + k + m) * (k - m) + 2 * m


def cutoff_p(j: int, k: int, m: int) -> Cutoff:
    """Sharp (k,2m)-PD cutoff for the zeroth-weight perturbation A_j(x)."""
    _check_jkm(j, k, m)
    first = Fraction((k + 1 - m) * (j + k + m - 1), k * k + j * k + 2 * m - j * m - m * m)
    n = contractivity_index(j, k, m)
    second = Fraction(n + j - 1, n)
    if first != second:
        raise ArithmeticError(f"cutoff forms disagree at {(j, k, m)}: {first} vs {second}")
    return Cutoff(first, f"({k},{2 * m})-PD", extra={"contractivity_index": n})


def cutoff_c(j: int, n: int) -> Cutoff:
    """n-contractivity cutoff ``(n+j-1)/n``."""
    if j < 2 or n < 1:
        raise ValueError("need j >= 2 and n >= 1")
    return Cutoff(Fraction(n + j - 1, n), f"{n}-contractive")


def cutoff_h(j: int, k: int) -> Cutoff:
    """k-hyponormality cutoff ``(k(k+j)+j-1)/(k(k+j))``."""
    if j < 2 or k < 1:
        raise ValueError("need j >= 2 and k >= 1")
    return Cutoff(Fraction(k * (k + j) + j - 1, k * (k + j)), f"{k}-hyponormal")


def cutoff_alternating(j: int, m: int) -> Cutoff:
    """The weights-squared of A_j(x) are m-alternating iff x is at most this."""
    if j < 2 or m < 1:
        raise ValueError("need j >= 2 and m >= 1")
    prod = math.prod(j + i for i in range(1, m + 1))
    value = 1 + Fraction((j - 1) * factorial(m), prod)
    return Cutoff(value, f"weights-squared {m}-alternating", extra={"contractivity_index": alternating_contractivity_index(j, m)})


def alternating_contractivity_index(j: int, m: int) -> int:
    """n with c(j,n) equal to the m-alternating cutoff: ``C(j+m, m)``."""
    return comb(j + m, m)


def agler_berger_moment(j: int, n: int) -> Fraction:
    """``∫_0^1 t^n (j-1)(1-t)^{j-2} dt = (j-1) B(n+1, j-1)``."""
    if j < 2 or n < 0:
        raise ValueError("need j >= 2 and n >= 0")
    return (j - 1) * Fraction(factorial(n) * factorial(j - 2), factorial(n + j - 1))


def nabla_moment_pair(j: int, order: int, n: int) -> tuple[Fraction, Fraction]:
    """(direct ``∇^order γ^{(j)}`` at n, ``(j-1)/(j+order-1) γ^{(j+order)}_n``)."""
    if j < 2 or order < 0 or n < 0:
        raise ValueError("need j >= 2, order >= 0, n >= 0")
    direct = forward_difference(agler_moments(j), order, n)
    closed = Fraction(j - 1, j + order - 1) * _agler_moment(j + order, n)
    return direct, closed


def nabla_weight_pair(j: int, m: int, n: int) -> tuple[Fraction, Fraction]:
    """(direct ``∇^m`` of weights-squared ``(n+1)/(n+j)`` at n, closed form).

    For ``m >= 1`` the closed form is ``(1-j) m! / Π_{i=n}^{n+m} (j+i)``; at
    ``m = 0`` the constant 1 that the difference operator kills is added back.
    """
    if j < 2 or m < 0 or n < 0:
        raise ValueError("need j >= 2, m >= 0, n >= 0")
    direct = forward_difference(agler_weights_squared(j), m, n)
    closed = Fraction((1 - j) * factorial(m), math.prod(j + i for i in range(n, n + m + 1)))
    if m == 0:
        closed += 1
    return direct, closed


def nabla_recurrences(j: int, m: int, n: int) -> dict[str, tuple[Fraction, Fraction]]:
    """Direct/closed pairs for ∇γ^{(j)}, ∇^{2m}γ^{(j)} and ∇^m of the weights-squared."""
    return {
        "first": nabla_moment_pair(j, 1, n),
        "even": nabla_moment_pair(j, 2 * m, n),
        "weights": nabla_weight_pair(j, m, n),
    }
