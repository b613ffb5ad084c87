from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from shiftcpd.linalg import bareiss_determinant, charpoly_integer, elementary_symmetric, integerize, jacobi_eigenvalues


def hilbert(n):
    return [[Fraction(1, r + c + 1) for c in range(n)] for r in range(n)]


def sym_matrices(max_order=6, bound=20):
    def build(n):
        entries = st.lists(st.fractions(min_value=-bound, max_value=bound, max_denominator=12), min_size=n * n, max_size=n * n)
        return entries.map(lambda xs: [[xs[min(r, c) * n + max(r, c)] for c in range(n)] for r in range(n)])

    return st.integers(1, max_order).flatmap(build)


def test_integerize():
    a, d = integerize([[Fraction(1, 2), Fraction(1, 3)], [Fraction(1, 3), Fraction(1, 4)]])
    assert d == 12
    assert a == [[6, 4], [4, 3]]


def test_charpoly_small():
    # det(λI - A) = λ² - 4λ + 3 for [[2,1],[1,2]]
    assert charpoly_integer([[2, 1], [1, 2]]) == [1, -4, 3]
    assert elementary_symmetric([[Fraction(2), Fraction(1)], [Fraction(1), Fraction(2)]]) == [1, 4, 3]
    assert elementary_symmetric([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(1)]]) == [1, 2, -3]


def test_hilbert_frozen_values():
    # frozen from the classical closed form det H_n = c_n^4 / c_{2n}
    assert bareiss_determinant(hilbert(3)) == Fraction(1, 2160)
    assert bareiss_determinant(hilbert(4)) == Fraction(1, 6048000)
    assert elementary_symmetric(hilbert(3))[-1] == Fraction(1, 2160)
    assert elementary_symmetric(hilbert(3))[1] == Fraction(23, 15)


def test_bareiss_needs_pivoting():
    rows = [[Fraction(0), Fraction(1)], [Fraction(1), Fraction(0)]]
    assert bareiss_determinant(rows) == -1
    assert bareiss_determinant([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]]) == 0


def test_jacobi_known_spectrum():
    eig = jacobi_eigenvalues([[2.0, 1.0], [1.0, 2.0]])
    assert eig == pytest.approx([1.0, 3.0], abs=1e-14)
    eig = jacobi_eigenvalues([[1.0, 2.0], [2.0, 1.0]])
    assert eig == pytest.approx([-1.0, 3.0], abs=1e-14)


def test_jacobi_deterministic():
    rows = [[float(x) for x in r] for r in hilbert(6)]
    assert jacobi_eigenvalues(rows) == jacobi_eigenvalues(rows)


@given(sym_matrices())
def test_charpoly_matches_numpy(rows):
    e = elementary_symmetric(rows)
    coeffs = np.poly(np.array(rows, dtype=float))  # [1, -e1, e2, -e3, ...]
    want = [(-1) ** r * c for r, c in enumerate(coeffs)]
    scale = max(1.0, max(abs(float(x)) for row in rows for x in row)) ** len(rows)
    assert [float(x) for x in e] == pytest.approx(want, abs=1e-8 * scale)


@given(sym_matrices())
def test_determinant_is_last_coefficient(rows):
    assert bareiss_determinant(rows) == elementary_symmetric(rows)[-1]


@given(sym_matrices(max_order=8, bound=100))
def test_jacobi_matches_numpy(rows):
    a = np.array(rows, dtype=float)
    eig = jacobi_eigenvalues(a.tolist())
    scale = max(1.0, np.abs(a).max())
    assert eig == pytest.approx(np.linalg.eigvalsh(a).tolist(), abs=1e-10 * scale)
