"""Independent brute-force verifiers for the closed-form cutoffs and identities."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable, Sequence

from .families import agler_moments, cutoff_c
from .hankel import SymMatrix, cpd_quadratic_form, hankel_window, quadratic_form
from .linalg import bareiss_determinant
from .sequences import RealSequence, difference_sequence, forward_difference
from .verdicts import Verdict


class BracketError(ValueError):
    """Endpoint verdicts do not bracket a cutoff, or the predicate is not monotone."""


@dataclass(frozen=True)
class Bracket:
    lo: Fraction
    hi: Fraction

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __contains__(self, x) -> bool:
        return self.lo <= x < self.hi


def bisect_cutoff(
    predicate: Callable[[Fraction], Verdict],
    lo,
    hi,
    steps: int = 40,
    samples: int = 4,
) -> Bracket:
    """Bracket the largest ``x`` with ``predicate(x)`` non-failing.

    Midpoints are plain averages of exact rationals.  Before bisecting,
    ``samples`` evenly spaced interior points are evaluated and required to
    switch from holding to failing at most once.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    if steps < 1:
        raise ValueError("steps >= 1")
    if not lo < hi:
        raise ValueError("need lo < hi")
    v_lo, v_hi = predicate(lo), predicate(hi)
    if not v_lo or v_hi:
        raise BracketError(f"predicate must hold at lo and fail at hi (lo: {v_lo.status.value}, hi: {v_hi.status.value})")
    pattern = [bool(predicate(lo + (hi - lo) * Fraction(i, samples + 1))) for i in range(1, samples + 1)]
    if any(b and not a for a, b in zip(pattern, pattern[1:])):
        raise BracketError(f"predicate is not monotone on sampled points: {pattern}")
    for _ in range(steps):
        mid = (lo + hi) / 2
        if predicate(mid):
            lo = mid
        else:
            hi = mid
    return Bracket(lo, hi)


def _perturbed_window(j: int, k: int, m: int) -> SymMatrix:
    return hankel_window(difference_sequence(agler_moments(j), 2 * m), 0, k - m).matrix


@dataclass(frozen=True)
class DeterminantRatio:
    value: Fraction
    det_n: Fraction
    det_n_hat: Fraction
    ratio: Fraction
    predicted_ratio: Fraction


def determinant_ratio_details(j: int, k: int, m: int) -> DeterminantRatio:
    if j < 2 or k < 1 or not 0 <= m <= k:
        raise ValueError(f"need j >= 2, k >= 1, 0 <= m <= k (got {(j, k, m)})")
    n = _perturbed_window(j, k, m)
    det_n = bareiss_determinant(n.rows())
    # deleting the only row of a 1x1 matrix leaves the empty determinant, 1
    det_hat = bareiss_determinant(n.principal(0).rows()) if n.order > 1 else Fraction(1)
    if det_hat == 0:
        raise ZeroDivisionError(f"det N̂({k},{m}) vanishes for j={j}")
    ratio = det_n / det_hat
    if ratio == 1:
        raise ZeroDivisionError(f"det N/det N̂ = 1 for {(j, k, m)}; no finite cutoff")
    predicted = Fraction(j - 1, j + 2 * m - 1) * Fraction(j + 2 * m - 1, (k - m + j + 2 * m - 1) * (k - m + 1))
    return DeterminantRatio(1 / (1 - ratio), det_n, det_hat, ratio, predicted)


def determinant_ratio_cutoff(j: int, k: int, m: int) -> Fraction:
    """``1 / (1 - det N / det N̂)`` with ``N = M_{∇^{2m}γ^{(j)}}(0, k-m)``.

    ``N̂`` is ``N`` without its first row and column.  For ``m = k`` the
    window is 1×1 and the value reduces to ``c(j, 2k)``.
    """
    d = determinant_ratio_details(j, k, m)
    if d.ratio != d.predicted_ratio:
        raise ArithmeticError(f"determinant ratio {d.ratio} differs from {d.predicted_ratio} at {(j, k, m)}")
    if m == k and d.value != cutoff_c(j, 2 * k).value:
        raise ArithmeticError("degenerate 1x1 case disagrees with c(j, 2k)")
    return d.value


def alternating_binomial_vector(k: int) -> list[int]:
    return [(-1) ** i * comb(k, i) for i in range(k + 1)]


def q_identity_check(gamma: RealSequence, ell: int, k: int):
    """``(vᵀ M_γ(ℓ,k) v, Σ_{i=0}^{2k} (-1)^i C(2k,i) γ_{ℓ+i})`` with v alternating binomials."""
    if k < 1 or ell < 0:
        raise ValueError("need k >= 1 and ell >= 0")
    left = cpd_quadratic_form(hankel_window(gamma, ell, k), alternating_binomial_vector(k))
    right = sum((-1) ** i * comb(2 * k, i) * gamma.term(ell + i) for i in range(2 * k + 1))
    return left, right


class BinomialVector(tuple):
    """Zero-padded alternating binomial coefficients ``(-1)^i C(m,i)``."""

    @property
    def admissible(self) -> bool:
        """Coordinates sum to zero, so the vector may probe CPD."""
        return sum(self) == 0


def negative_binomial_vector(k_total: int, m: int, offset: int) -> BinomialVector:
    if m < 0 or offset < 0:
        raise ValueError("m and offset must be non-negative")
    if offset + m + 1 > k_total:
        raise ValueError(f"{m + 1} binomial entries at offset {offset} do not fit length {k_total}")
    v = [0] * k_total
    for i in range(m + 1):
        v[offset + i] = (-1) ** i * comb(m, i)
    return BinomialVector(v)


def binomial_probe(gamma: RealSequence, m: int, size: int, ell: int, v: Sequence[int]):
    """``vᵀ M_{∇^{2m}γ}(ℓ, size) v`` next to the difference it should equal.

    For ``v`` a padded block of order ``r`` at offset ``s`` the form equals
    ``(∇^{2m+2r} γ)_{ℓ+2s}``.
    """
    w = hankel_window(difference_sequence(gamma, 2 * m), ell, size)
    nz = [i for i, c in enumerate(v) if c != 0]
    s, r = nz[0], nz[-1] - nz[0]
    return quadratic_form(w, list(v)), forward_difference(gamma, 2 * m + 2 * r, ell + 2 * s)
