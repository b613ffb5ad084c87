"""Shift-to-shift constructions: Aluthge transform, Schur powers, tail
restriction and weight reciprocals, composed as textual pipelines."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

from .families import Shift, ShiftSpec, SpecParseError, parse_shift
from .scalars import DEFAULT_TOLERANCE, EXACT, Tolerance, backend_of, format_scalar, parse_rational
from .sequences import RealSequence, is_hyper
from .verdicts import Verdict

Step = tuple  # ("aluthge",) | ("schur-power", p) | ("restrict", r) | ("reciprocal",)


@dataclass(frozen=True)
class TransformedSpec:
    base: ShiftSpec
    pipeline: tuple[Step, ...] = ()

    @property
    def text(self) -> str:
        parts = [self.base.text]
        for step in self.pipeline:
            parts.append(step[0] if len(step) == 1 else f"{step[0]}:{format_scalar(step[1])}")
        return "|".join(parts)

    def __str__(self) -> str:
        return self.text

    def then(self, *step) -> "TransformedSpec":
        return TransformedSpec(self.base, self.pipeline + (tuple(step),))

    def shift(self) -> Shift:
        return _realize_pipeline(self)


AnySpec = Union[ShiftSpec, TransformedSpec]


def _lift(spec: AnySpec) -> TransformedSpec:
    return spec if isinstance(spec, TransformedSpec) else TransformedSpec(spec)


def aluthge(spec: AnySpec) -> TransformedSpec:
    """Weights ``α_n -> sqrt(α_n α_{n+1})``."""
    return _lift(spec).then("aluthge")


def schur_power_shift(spec: AnySpec, p) -> TransformedSpec:
    p = Fraction(p)
    if p <= 0:
        raise ValueError("Schur power needs p > 0")
    return _lift(spec).then("schur-power", p)


def restrict(spec: AnySpec, r: int) -> TransformedSpec:
    """Drop the first ``r`` weights; moments are renormalised to ``γ_0 = 1``."""
    if not isinstance(r, int) or r < 1:
        raise ValueError("restriction needs an integer r >= 1")
    return _lift(spec).then("restrict", r)


def reciprocal(spec: AnySpec) -> TransformedSpec:
    return _lift(spec).then("reciprocal")


def parse_pipeline(text: str) -> AnySpec:
    """Parse ``agler:2|aluthge|schur-power:2|restrict:1``."""
    head, *steps = text.split("|")
    spec: AnySpec = parse_shift(head)
    pos = len(head) + 1
    for raw in steps:
        name, _, arg = raw.strip().partition(":")
        if name == "aluthge" and not arg:
            spec = aluthge(spec)
        elif name == "reciprocal" and not arg:
            spec = reciprocal(spec)
        elif name == "schur-power":
            try:
                spec = schur_power_shift(spec, parse_rational(arg))
            except ValueError as exc:
                raise SpecParseError(text, pos, str(exc)) from None
        elif name == "restrict":
            if not arg.isdigit() or int(arg) < 1:
                raise SpecParseError(text, pos, "restrict needs an integer r >= 1")
            spec = restrict(spec, int(arg))
        else:
            raise SpecParseError(text, pos, f"unknown transform {raw!r}")
        pos += len(raw) + 1
    return spec


def _inverse(v):
    return 1 / Fraction(v) if backend_of(v) == EXACT else 1 / v


def _bounded_sup(sup):
    # only a bound that proves contractivity survives a transform
    return sup if sup is not None and sup <= 1 else None


def _apply(shift: Shift, step: Step, name: str) -> Shift:
    base = shift.base_weights_squared
    kind = step[0]
    if kind == "aluthge":
        w = RealSequence(lambda n: base.term(n) * base.term(n + 1), horizon=None if base.horizon is None else base.horizon - 1, name=f"α²[{name}]")
        sup = _bounded_sup(shift.base_sup)
        return Shift(name, w, shift.exponent / 2, base_sup=None if sup is None else sup * sup)
    if kind == "schur-power":
        return Shift(name, base, shift.exponent * step[1], base_moments=shift.base_moments, base_sup=shift.base_sup)
    if kind == "restrict":
        r = step[1]
        return Shift(name, base.shifted(r), shift.exponent, base_sup=_bounded_sup(shift.base_sup))
    if kind == "reciprocal":
        w = RealSequence(lambda n: _inverse(base.term(n)), horizon=base.horizon, name=f"α²[{name}]")
        return Shift(name, w, shift.exponent)
    raise ValueError(f"unknown step {step!r}")


@lru_cache(maxsize=256)
def _realize_pipeline(spec: TransformedSpec) -> Shift:
    shift = spec.base.shift()
    prefix = TransformedSpec(spec.base)
    for step in spec.pipeline:
        prefix = prefix.then(*step)
        shift = _apply(shift, step, prefix.text)
    return shift


def is_completely_hyperexpansive(spec, orders: int, depth: int, tol: Tolerance = DEFAULT_TOLERANCE) -> Verdict:
    """``(∇^n γ)_k <= 0`` for ``1 <= n <= orders``, ``0 <= k <= depth``."""
    from .classify import as_shift

    shift = as_shift(spec)
    return is_hyper(shift.moments, orders, depth, "alternating", tol)


def weights_settle(spec, depth: int = 40, tail: int = 8) -> bool:
    """Finite proxy for "the weights approach a limit".

    True when the last ``tail`` consecutive weight-squared increments up to
    ``depth`` shrink in magnitude (or vanish).  It flags, it does not prove.
    """
    from .classify import as_shift

    w = as_shift(spec).weights.squared
    lo = max(0, depth - tail)
    steps = [abs(float(w.term(n + 1)) - float(w.term(n))) for n in range(lo, depth)]
    return all(b <= a for a, b in zip(steps, steps[1:]))
