"""Dense kernels for small symmetric matrices.

Exact work is done over Python integers after clearing denominators, so no
rational blow-up happens in the middle of a recurrence.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import mpmath


def _lcm_denominators(rows: Sequence[Sequence[Fraction]]) -> int:
    d = 1
    for row in rows:
        for x in row:
            d = math.lcm(d, Fraction(x).denominator)
    return d


def integerize(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[int]], int]:
    """Return ``(A, D)`` with integer ``A = D * rows``."""
    d = _lcm_denominators(rows)
    return [[int(Fraction(x) * d) for x in row] for row in rows], d


def charpoly_integer(a: Sequence[Sequence[int]]) -> list[int]:
    """Faddeev-LeVerrier over the integers.

    Returns ``[c_0=1, c_1, ..., c_n]`` with ``det(λI - A) = Σ c_r λ^{n-r}``.
    Every intermediate matrix and coefficient of an integer matrix is an
    integer, so the division by ``k`` is exact.
    """
    n = len(a)
    coeffs = [1]
    m = [[0] * n for _ in range(n)]
    for k in range(1, n + 1):
        c_prev = coeffs[-1]
        # M_k = A M_{k-1} + c_{k-1} I
        prod = [[sum(a[i][t] * m[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        for i in range(n):
            prod[i][i] += c_prev
        m = prod
        trace = sum(sum(a[i][t] * m[t][i] for t in range(n)) for i in range(n))
        q, r = divmod(-trace, k)
        if r:
            raise ArithmeticError("Faddeev-LeVerrier lost integrality")
        coeffs.append(q)
    return coeffs


def elementary_symmetric(rows: Sequence[Sequence[Fraction]]) -> list[Fraction]:
    """``[e_0=1, e_1, ..., e_n]`` of the eigenvalues, exactly.

    ``det(λI - M) = λ^n - e_1 λ^{n-1} + e_2 λ^{n-2} - ...``.  For a real
    symmetric matrix every eigenvalue is real, so the matrix is positive
    semidefinite iff all ``e_r >= 0``.
    """
    a, d = integerize(rows)
    c = charpoly_integer(a)
    return [Fraction((-1) ** r * c[r], d**r) for r in range(len(c))]


def bareiss_determinant(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    """Fraction-free elimination on the denominator-cleared matrix."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    scale = Fraction(1)
    a: list[list[int]] = []
    for row in rows:
        d = 1
        for x in row:
            d = math.lcm(d, Fraction(x).denominator)
        a.append([int(Fraction(x) * d) for x in row])
        scale /= d
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * pivot - a[i][k] * a[k][j]
                a[i][j] = num // prev
            a[i][k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1] * scale


def _sqrt(x):
    return mpmath.sqrt(x) if isinstance(x, mpmath.mpf) else math.sqrt(x)


def jacobi_eigenvalues(rows: Sequence[Sequence], max_sweeps: int = 100) -> list:
    """Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.

    Sweeps visit ``(p, q)`` pairs in row-major order, so results are
    reproducible bit for bit.  Works on floats, or on ``mpmath.mpf`` when any
    entry is one.  Eigenvalues are returned in ascending order.
    """
    n = len(rows)
    use_mp = any(isinstance(x, mpmath.mpf) for row in rows for x in row)
    conv = mpmath.mpf if use_mp else float
    a = [[conv(x) for x in row] for row in rows]
    if n == 1:
        return [a[0][0]]

    def off() -> object:
        return sum(a[i][j] * a[i][j] for i in range(n) for j in range(n) if i != j)

    last = off()
    for _ in range(max_sweeps):
        if last == 0:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p][q]
                if apq == 0:
                    continue
                theta = (a[q][q] - a[p][p]) / (2 * apq)
                if abs(theta) > 1e150:
                    t = 1 / (2 * theta)
                else:
                    t = 1 / (abs(theta) + _sqrt(theta * theta + 1))
                    if theta < 0:
                        t = -t
                c = 1 / _sqrt(t * t + 1)
                s = t * c
                app, aqq = a[p][p], a[q][q]
                for k in range(n):
                    akp, akq = a[k][p], a[k][q]
                    a[k][p] = c * akp - s * akq
                    a[k][q] = s * akp + c * akq
                for k in range(n):
                    a[p][k] = a[k][p]
                    a[q][k] = a[k][q]
                a[p][p] = app - t * apq
                a[q][q] = aqq + t * apq
                a[p][q] = a[q][p] = 0 * apq
        current = off()
        if not current < last:
            break
        last = current
    return sorted(a[i][i] for i in range(n))
