"""Lazily evaluated sequences and the forward-difference calculus on them.

The forward difference follows the shift-theory sign convention
``(∇a)_k = a_k - a_{k+1}``, so ``(∇^n a)_k = Σ (-1)^i C(n,i) a_{k+i}`` and
n-contractivity of a shift is n-monotonicity of its moments.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from math import comb
from typing import Callable, Sequence

from .scalars import (
    APPROX,
    DEFAULT_TOLERANCE,
    EXACT,
    BackendError,
    DomainError,
    HorizonError,
    Tolerance,
    backend_of,
    common_backend,
    log,
    log_ratio_near_one,
)
from .verdicts import Status, Verdict


class RealSequence:
    """A memoised sequence ``n -> a_n`` with an optional finite horizon.

    ``rule`` computes a single term.  When ``sequential`` is true the rule is a
    recurrence that reads earlier terms through the sequence itself, and
    ``term`` fills the memo bottom-up so deep indices never recurse deeply.
    """

    def __init__(
        self,
        rule: Callable[[int], object],
        horizon: int | None = None,
        name: str = "a",
        sequential: bool = False,
    ):
        self._rule = rule
        self._memo: dict[int, object] = {}
        self._lock = threading.Lock()
        self._backend: str | None = None
        self.horizon = horizon
        self.name = name
        self.sequential = sequential

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name!r}, horizon={self.horizon})"

    @classmethod
    def from_terms(cls, terms: Sequence, name: str = "a") -> "RealSequence":
        values = list(terms)
        if not values:
            raise ValueError("empty sequence")
        common_backend(values)
        return cls(values.__getitem__, horizon=len(values) - 1, name=name)

    @property
    def backend(self) -> str:
        if self._backend is None:
            self.term(0)
        return self._backend

    def _check(self, n: int, value) -> None:
        pass

    def term(self, n: int):
        if n < 0:
            raise IndexError(f"negative index {n}")
        if self.horizon is not None and n > self.horizon:
            raise HorizonError(f"{self.name}: index {n} beyond horizon {self.horizon}")
        try:
            return self._memo[n]
        except KeyError:
            pass
        if self.sequential:
            start = n
            while start > 0 and (start - 1) not in self._memo:
                start -= 1
            for i in range(start, n + 1):
                self._store(i, self._rule(i))
        else:
            self._store(n, self._rule(n))
        return self._memo[n]

    def _store(self, n: int, value) -> None:
        b = backend_of(value)
        with self._lock:
            if self._backend is None:
                self._backend = b
            elif b != self._backend:
                raise BackendError(f"{self.name}: term {n} is {b}, sequence is {self._backend}")
            self._check(n, value)
            self._memo.setdefault(n, value)

    __getitem__ = term

    def terms(self, stop: int) -> list:
        """Terms ``a_0 .. a_{stop-1}``."""
        return [self.term(i) for i in range(stop)]

    def shifted(self, r: int) -> "RealSequence":
        h = None if self.horizon is None else self.horizon - r
        return RealSequence(lambda n: self.term(n + r), horizon=h, name=f"{self.name}[+{r}]")


class WeightSequence:
    """Positive weights, stored as weights-squared.

    Exact-backend weights of the catalogued families are usually irrational
    while their squares are rational, so only the squares are kept; the
    weights themselves are available as floats.
    """

    def __init__(self, squared: RealSequence, sup_bound=None):
        self.squared = squared
        self.sup_bound = sup_bound

    def __repr__(self) -> str:
        return f"WeightSequence({self.squared.name!r})"

    @property
    def backend(self) -> str:
        return self.squared.backend

    @property
    def horizon(self) -> int | None:
        return self.squared.horizon

    def weight_squared(self, n: int):
        w = self.squared.term(n)
        if w <= 0:
            raise DomainError(f"weight {n} is not positive ({w})")
        if self.sup_bound is not None and w > self.sup_bound:
            raise DomainError(f"weight-squared {n} = {w} exceeds bound {self.sup_bound}")
        return w

    def weight(self, n: int) -> float:
        return math.sqrt(self.weight_squared(n))


class MomentSequence(RealSequence):
    """Moments ``γ_0 = 1, γ_{n+1} = γ_n α_n²``; every evaluated term is checked."""

    def _check(self, n: int, value) -> None:
        if n == 0 and value != 1:
            raise DomainError(f"moment sequence must start at 1, got {value}")
        if value <= 0:
            raise DomainError(f"moment {n} is not positive ({value})")


def moments_from_weights(alpha: WeightSequence, name: str = "γ") -> MomentSequence:
    def rule(n: int):
        if n == 0:
            one = alpha.weight_squared(0)  # pins the backend
            return 1 if backend_of(one) == EXACT else one / one
        return seq.term(n - 1) * alpha.weight_squared(n - 1)

    h = alpha.horizon
    seq = MomentSequence(rule, horizon=None if h is None else h + 1, name=name, sequential=True)
    return seq


def weights_from_moments(gamma: RealSequence, name: str = "α²") -> WeightSequence:
    g0 = gamma.term(0)
    if g0 != 1:
        raise DomainError(f"γ_0 must be 1, got {g0}")

    def rule(n: int):
        a, b = gamma.term(n), gamma.term(n + 1)
        if a <= 0 or b <= 0:
            raise DomainError(f"non-positive moment near index {n}")
        return Fraction(b) / Fraction(a) if backend_of(a) == EXACT else b / a

    h = gamma.horizon
    return WeightSequence(RealSequence(rule, horizon=None if h is None else h - 1, name=name))


def _difference(a: RealSequence, n: int, k: int):
    total = 0
    scale = 0
    for i in range(n + 1):
        c = comb(n, i)
        t = a.term(k + i)
        total = total + (c * t if i % 2 == 0 else -c * t)
        scale = scale + c * abs(t)
    return total, scale


def forward_difference(a: RealSequence, n: int, k: int):
    """``(∇^n a)_k = Σ_{i=0}^{n} (-1)^i C(n,i) a_{k+i}``."""
    if n < 0 or k < 0:
        raise ValueError("order and index must be non-negative")
    if n == 0:
        return a.term(k)
    return _difference(a, n, k)[0]


def difference_sequence(a: RealSequence, n: int) -> RealSequence:
    """The sequence ``∇^n a`` as a new lazily evaluated sequence."""
    if n == 0:
        return a
    h = None if a.horizon is None else a.horizon - n
    return RealSequence(lambda k: forward_difference(a, n, k), horizon=h, name=f"∇^{n}{a.name}")


def _signed_scan(a: RealSequence, n: int, depth: int, sign: int, tol: Tolerance) -> Verdict:
    if n < 0 or depth < 0:
        raise ValueError("order and depth must be non-negative")
    boundary = None
    for k in range(depth + 1):
        value, scale = _difference(a, n, k)
        s = sign * tol.sign(value, scale)
        if s < 0:
            return Verdict(Status.FAILS, depth, {"order": n, "index": k, "value": value})
        if s == 0 and boundary is None:
            boundary = {"order": n, "index": k, "value": value}
    if boundary is not None:
        return Verdict(Status.BOUNDARY, depth, boundary)
    return Verdict(Status.HOLDS, depth)


def is_n_monotone(a: RealSequence, n: int, depth: int, tol: Tolerance = DEFAULT_TOLERANCE) -> Verdict:
    """``(∇^n a)_k >= 0`` for ``0 <= k <= depth``; the least failing k is the witness."""
    return _signed_scan(a, n, depth, 1, tol)


def is_n_alternating(a: RealSequence, n: int, depth: int, tol: Tolerance = DEFAULT_TOLERANCE) -> Verdict:
    return _signed_scan(a, n, depth, -1, tol)


def is_hyper(
    a: RealSequence,
    n: int,
    depth: int,
    flavor: str = "monotone",
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> Verdict:
    """Conjunction of the order-1..n checks, reporting the first failing order."""
    if n < 1:
        raise ValueError("hyper checks need n >= 1")
    test = {"monotone": is_n_monotone, "alternating": is_n_alternating}[flavor]
    return Verdict.combine((test(a, order, depth, tol) for order in range(1, n + 1)), depth)


def log_sequence(a: RealSequence, digits: int | None = None) -> RealSequence:
    """Term-wise natural log; always lands in the approximate backend."""

    def rule(n: int):
        v = a.term(n)
        if v <= 0:
            raise DomainError(f"{a.name}_{n} = {v} is not positive")
        return log(v, digits)

    return RealSequence(rule, horizon=a.horizon, name=f"ln {a.name}")


def delta_sequence(gamma: RealSequence, digits: int | None = None) -> RealSequence:
    """``δ_n = ln(γ_n γ_{n+2} / γ_{n+1}²)``.

    Exact moments form the ratio exactly and take ``log1p`` of its distance
    from one, which keeps full relative precision for small δ.
    """

    def rule(n: int):
        g0, g1, g2 = gamma.term(n), gamma.term(n + 1), gamma.term(n + 2)
        if min(g0, g1, g2) <= 0:
            raise DomainError(f"non-positive moment near index {n}")
        if backend_of(g0) == EXACT:
            return log_ratio_near_one(Fraction(g0) * g2 / (Fraction(g1) ** 2), digits)
        return log(g0, digits) + log(g2, digits) - 2 * log(g1, digits)

    h = None if gamma.horizon is None else gamma.horizon - 2
    return RealSequence(rule, horizon=h, name="δ")


def product_sequence(a: RealSequence, b: RealSequence) -> RealSequence:
    hs = [h for h in (a.horizon, b.horizon) if h is not None]
    return RealSequence(lambda n: a.term(n) * b.term(n), horizon=min(hs) if hs else None, name=f"{a.name}·{b.name}")


def leibniz_difference(a: RealSequence, b: RealSequence, n: int, k: int):
    """Both sides of the Leibniz rule for forward differences.

    left  = ∇^n(a·b) at k
    right = Σ_j C(n,j) (∇^{n-j} a)_{k+j} (∇^j b)_k
    """
    left = forward_difference(product_sequence(a, b), n, k)
    right = 0
    for j in range(n + 1):
        right = right + comb(n, j) * forward_difference(a, n - j, k + j) * forward_difference(b, j, k)
    return left, right


def constant(value, name: str = "c") -> RealSequence:
    return RealSequence(lambda n: value, name=name)


__all__ = [
    "APPROX",
    "EXACT",
    "MomentSequence",
    "RealSequence",
    "WeightSequence",
    "constant",
    "delta_sequence",
    "difference_sequence",
    "forward_difference",
    "is_hyper",
    "is_n_alternating",
    "is_n_monotone",
    "leibniz_difference",
    "log_sequence",
    "moments_from_weights",
    "product_sequence",
    "weights_from_moments",
]
