"""Hankel windows, Schur (entry-wise) operations and positivity tests."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence

import mpmath

from . import linalg
from .scalars import (
    APPROX,
    DEFAULT_TOLERANCE,
    EXACT,
    BackendError,
    DomainError,
    Tolerance,
    backend_of,
    common_backend,
    log,
)
from .sequences import RealSequence, difference_sequence


class SymMatrix:
    """Immutable real symmetric matrix; only the upper triangle is stored."""

    __slots__ = ("order", "_upper", "backend")

    def __init__(self, upper: Sequence[Sequence]):
        rows = tuple(tuple(r) for r in upper)
        n = len(rows)
        if n < 1:
            raise ValueError("matrix order must be at least 1")
        for r, row in enumerate(rows):
            if len(row) != n - r:
                raise ValueError("upper-triangular storage has the wrong shape")
        self.order = n
        self._upper = rows
        self.backend = common_backend(x for row in rows for x in row)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "SymMatrix":
        n = len(rows)
        for r in range(n):
            if len(rows[r]) != n:
                raise ValueError("matrix is not square")
            for c in range(r + 1, n):
                if rows[r][c] != rows[c][r]:
                    raise ValueError(f"matrix is not symmetric at ({r},{c})")
        return cls([rows[r][r:] for r in range(n)])

    @classmethod
    def from_function(cls, n: int, f: Callable[[int, int], object]) -> "SymMatrix":
        return cls([[f(r, c) for c in range(r, n)] for r in range(n)])

    def __getitem__(self, rc: tuple[int, int]):
        r, c = rc
        if r > c:
            r, c = c, r
        return self._upper[r][c - r]

    def rows(self) -> list[list]:
        n = self.order
        return [[self[r, c] for c in range(n)] for r in range(n)]

    def map(self, f: Callable) -> "SymMatrix":
        return SymMatrix([[f(x) for x in row] for row in self._upper])

    def entries(self):
        for row in self._upper:
            yield from row

    def __eq__(self, other) -> bool:
        return isinstance(other, SymMatrix) and self._upper == other._upper

    def __hash__(self) -> int:
        return hash(self._upper)

    def __repr__(self) -> str:
        return f"SymMatrix({self.rows()!r})"

    def principal(self, drop: int) -> "SymMatrix":
        """Delete row and column ``drop``."""
        keep = [i for i in range(self.order) if i != drop]
        return SymMatrix.from_function(len(keep), lambda r, c: self[keep[r], keep[c]])


@dataclass(frozen=True)
class HankelWindow:
    """``M_a(i,k)``: the (k+1)×(k+1) Hankel matrix with entries ``a_{i+r+c}``."""

    source: RealSequence
    start: int
    k: int
    matrix: SymMatrix

    @property
    def order(self) -> int:
        return self.k + 1


def hankel_window(a: RealSequence, i: int, k: int) -> HankelWindow:
    if i < 0 or k < 0:
        raise ValueError("start index and size parameter must be non-negative")
    terms = [a.term(i + t) for t in range(2 * k + 1)]
    m = SymMatrix.from_function(k + 1, lambda r, c: terms[r + c])
    return HankelWindow(a, i, k, m)


def _as_matrix(m) -> SymMatrix:
    return m.matrix if isinstance(m, HankelWindow) else m


def schur_power(m, p) -> SymMatrix:
    """Entry-wise ``p``-th power; integer ``p`` keeps the exact backend."""
    m = _as_matrix(m)
    if p <= 0:
        raise DomainError("Schur power needs p > 0")
    if isinstance(p, int) or (isinstance(p, Fraction) and p.denominator == 1):
        return m.map(lambda x: x ** int(p))
    if any(x <= 0 for x in m.entries()):
        raise DomainError("non-integer Schur power of a matrix with a non-positive entry")
    pf = float(p)
    return m.map(lambda x: float(x) ** pf if backend_of(x) == EXACT else x**pf)


def schur_log(m, digits: int | None = None) -> SymMatrix:
    m = _as_matrix(m)
    if any(x <= 0 for x in m.entries()):
        raise DomainError("Schur logarithm needs positive entries")
    return m.map(lambda x: log(x, digits))


def exp_schur(m, p=1) -> SymMatrix:
    """Entry-wise ``exp(p * a_ij)``."""
    m = _as_matrix(m)

    def f(x):
        if isinstance(x, mpmath.mpf):
            return mpmath.exp(p * x)
        return math.exp(float(p) * float(x))

    return m.map(f)


class PsdStatus(str, enum.Enum):
    PSD = "positive-semidefinite"
    NOT_PSD = "not-psd"
    BOUNDARY = "boundary"


@dataclass(frozen=True)
class PsdVerdict:
    """Result of a semidefiniteness test.

    Exact verdicts carry the eigenvalue elementary symmetric functions
    ``e_0..e_n`` (signed characteristic polynomial coefficients); a
    ``not-psd`` verdict names the first negative one.  Approximate verdicts
    carry the smallest eigenvalue and the scale the tolerance was applied to.
    """

    status: PsdStatus
    backend: str
    coefficients: tuple | None = None
    min_eigenvalue: Any = None
    scale: Any = None
    failing_index: int | None = None
    context: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.status is not PsdStatus.NOT_PSD

    @property
    def offending_value(self):
        if self.status is PsdStatus.NOT_PSD and self.failing_index is not None:
            return self.coefficients[self.failing_index]
        if self.backend == APPROX:
            return self.min_eigenvalue
        if self.coefficients is not None:
            return self.coefficients[-1]
        return None


def is_psd(m, tol: Tolerance = DEFAULT_TOLERANCE) -> PsdVerdict:
    """Positive-semidefiniteness, exactly or within the tolerance band.

    Exact: all ``e_r >= 0``; ``boundary`` when PSD but singular.
    Approximate: smallest Jacobi eigenvalue against ``tol.rel * scale`` where
    ``scale`` is the largest entry magnitude.
    """
    m = _as_matrix(m)
    if m.backend == EXACT:
        e = linalg.elementary_symmetric(m.rows())
        for r, v in enumerate(e):
            if v < 0:
                return PsdVerdict(PsdStatus.NOT_PSD, EXACT, tuple(e), failing_index=r)
        status = PsdStatus.BOUNDARY if e[-1] == 0 else PsdStatus.PSD
        return PsdVerdict(status, EXACT, tuple(e))
    eig = linalg.jacobi_eigenvalues(m.rows())
    lam = eig[0]
    scale = max(abs(x) for x in m.entries())
    s = tol.sign(lam, scale)
    status = {1: PsdStatus.PSD, -1: PsdStatus.NOT_PSD, 0: PsdStatus.BOUNDARY}[s]
    return PsdVerdict(status, APPROX, min_eigenvalue=lam, scale=scale, context={"eigenvalues": tuple(eig)})


def second_difference_reduction(m) -> SymMatrix:
    """``B_rc = a_rc - a_{r,c+1} - a_{r+1,c} + a_{r+1,c+1}`` of order n-1."""
    m = _as_matrix(m)
    n = m.order
    if n < 2:
        raise ValueError("reduction needs order >= 2")
    return SymMatrix.from_function(
        n - 1, lambda r, c: m[r, c] - m[r, c + 1] - m[r + 1, c] + m[r + 1, c + 1]
    )


def is_cpd(m, tol: Tolerance = DEFAULT_TOLERANCE) -> PsdVerdict:
    """Conditional positive definiteness via PSD of the second-difference reduction."""
    m = _as_matrix(m)
    if m.order == 1:
        return PsdVerdict(PsdStatus.PSD, m.backend, coefficients=(1,), min_eigenvalue=None, context={"vacuous": True})
    return is_psd(second_difference_reduction(m), tol)


def cpd_window_reduction(w: HankelWindow) -> HankelWindow:
    """For a Hankel window the reduction is the window of ``∇²a`` one size down."""
    if w.k < 1:
        raise ValueError("reduction needs k >= 1")
    return hankel_window(difference_sequence(w.source, 2), w.start, w.k - 1)


def quadratic_form(m, v: Sequence):
    m = _as_matrix(m)
    if len(v) != m.order:
        raise ValueError(f"vector length {len(v)} does not match order {m.order}")
    if m.backend == APPROX:
        # integer test vectors (binomial coefficients) are lifted, not mixed
        v = [float(x) if backend_of(x) == EXACT else x for x in v]
    else:
        common_backend(v)
    total = 0
    for r in range(m.order):
        if v[r] == 0:
            continue
        for c in range(m.order):
            total = total + v[r] * m[r, c] * v[c]
    return total


def cpd_quadratic_form(m, v: Sequence, tol: Tolerance = DEFAULT_TOLERANCE):
    """``vᵀ M v`` for a vector whose coordinates sum to zero."""
    s = sum(v)
    if backend_of(s) == EXACT:
        if s != 0:
            raise ValueError(f"coordinates must sum to zero (sum is {s})")
    elif abs(s) > tol.rel * max(1.0, max(abs(x) for x in v)):
        raise ValueError(f"coordinates must sum to zero (sum is {s})")
    return quadratic_form(m, v)


def omega_certificate(m, omega: Sequence, tol: Tolerance = DEFAULT_TOLERANCE) -> PsdVerdict:
    """Check a caller-supplied ``ω``: ``(a_ij - ω_i - ω_j)`` PSD certifies CPD."""
    m = _as_matrix(m)
    if len(omega) != m.order:
        raise ValueError("ω must have one entry per row")
    c = SymMatrix.from_function(m.order, lambda r, s: m[r, s] - omega[r] - omega[s])
    return is_psd(c, tol)


def negative_eigenvalue_count(m, tol: Tolerance = DEFAULT_TOLERANCE) -> int:
    """Eigenvalues below ``-tol.rel * scale`` (approximate only)."""
    m = _as_matrix(m)
    rows = [[float(x) if backend_of(x) == EXACT else x for x in row] for row in m.rows()]
    eig = linalg.jacobi_eigenvalues(rows)
    scale = max(abs(x) for row in rows for x in row)
    return sum(1 for lam in eig if tol.sign(lam, scale) < 0)
