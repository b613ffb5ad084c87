from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from shiftcpd.classify import is_km_pd, is_n_contractive
from shiftcpd.families import ShiftSpec, agler_moments, cutoff_c, cutoff_p
from shiftcpd.oracles import (
    Bracket,
    BracketError,
    binomial_probe,
    bisect_cutoff,
    determinant_ratio_cutoff,
    determinant_ratio_details,
    negative_binomial_vector,
    q_identity_check,
)
from shiftcpd.hankel import hankel_window, quadratic_form
from shiftcpd.sequences import RealSequence, difference_sequence
from shiftcpd.verdicts import Status, Verdict

bergman = agler_moments(2)


def test_bisection_brackets_table_entry():
    b = bisect_cutoff(lambda x: is_km_pd(ShiftSpec.perturbed(2, x), 1, 0), 1, 2, steps=40)
    assert F(4, 3) in b
    assert b.width == F(1, 2**40)


def test_bisection_contractivity():
    b = bisect_cutoff(lambda x: is_n_contractive(ShiftSpec.perturbed(3, x), 2), 1, 3, steps=30)
    assert cutoff_c(3, 2).value == 2 in b


def test_bisection_preconditions():
    always = lambda x: Verdict(Status.HOLDS)
    with pytest.raises(BracketError, match="hi: holds"):
        bisect_cutoff(always, 0, 1)
    with pytest.raises(ValueError):
        bisect_cutoff(always, 1, 1)
    with pytest.raises(ValueError):
        bisect_cutoff(always, 0, 1, steps=0)
    wiggle = lambda x: Verdict(Status.HOLDS if x < F(1, 4) or F(1, 2) < x < F(7, 10) else Status.FAILS)
    with pytest.raises(BracketError, match="monotone"):
        bisect_cutoff(wiggle, 0, 1, samples=9)


def test_bracket():
    b = Bracket(F(1), F(2))
    assert b.width == 1 and F(1) in b and F(2) not in b


def test_determinant_ratio_examples():
    assert determinant_ratio_cutoff(2, 1, 0) == F(4, 3)
    assert determinant_ratio_cutoff(2, 4, 2) == F(21, 20)
    assert determinant_ratio_cutoff(3, 2, 1) == F(5, 4)
    assert determinant_ratio_cutoff(2, 5, 5) == F(11, 10)  # 1x1 degenerate case


def test_determinant_ratio_frozen_dets():
    # N(1,0) for j = 2 is the 2x2 Hilbert matrix: det 1/12, det N̂ = 1/3
    d = determinant_ratio_details(2, 1, 0)
    assert (d.det_n, d.det_n_hat, d.ratio) == (F(1, 12), F(1, 3), F(1, 4))
    with pytest.raises(ValueError):
        determinant_ratio_cutoff(1, 1, 0)


@given(st.integers(2, 5), st.integers(1, 6), st.data())
def test_determinant_ratio_is_closed_form(j, k, data):
    m = data.draw(st.integers(0, k))
    assert determinant_ratio_cutoff(j, k, m) == cutoff_p(j, k, m).value


@pytest.mark.parametrize("j, k, m", [(2, 3, 1), (4, 5, 2), (5, 6, 6), (3, 6, 0)])
def test_bisection_width_below_1e_10(j, k, m):
    b = bisect_cutoff(lambda x: is_km_pd(ShiftSpec.perturbed(j, x), k, m), 1, j + 1, steps=40)
    assert b.width < F(1, 10**10)
    assert cutoff_p(j, k, m).value in b


def test_q_identity_examples():
    g = RealSequence.from_terms([F(3), F(5, 7), F(-2, 9)])
    left, right = q_identity_check(g, 0, 1)
    assert left == right == g[0] - 2 * g[1] + g[2]
    left, right = q_identity_check(bergman, 2, 3)
    assert left == right == F(1, 252)  # frozen: Σ (-1)^i C(6,i)/(i+3) = 6! 2!/9!


@given(st.lists(st.fractions(min_value=-100, max_value=100, max_denominator=100), min_size=21, max_size=21), st.integers(1, 6), st.integers(0, 8))
def test_q_identity(terms, k, ell):
    left, right = q_identity_check(RealSequence.from_terms(terms), ell, k)
    assert left == right


def test_negative_binomial_vectors():
    assert negative_binomial_vector(5, 1, 2) == (0, 0, 1, -1, 0)
    assert negative_binomial_vector(7, 3, 1) == (0, 1, -3, 3, -1, 0, 0)
    v = negative_binomial_vector(4, 0, 2)
    assert v == (0, 0, 1, 0) and not v.admissible
    assert negative_binomial_vector(7, 3, 1).admissible
    with pytest.raises(ValueError):
        negative_binomial_vector(4, 3, 1)


def test_worked_example_k4_m2():
    # (1,-1,0) against M_{∇²γ}(ℓ,2) is γ_ℓ - 4γ_{ℓ+1} + 6γ_{ℓ+2} - 4γ_{ℓ+3} + γ_{ℓ+4}
    g = bergman
    for ell in range(6):
        w = hankel_window(difference_sequence(g, 2), ell, 2)
        want = g[ell] - 4 * g[ell + 1] + 6 * g[ell + 2] - 4 * g[ell + 3] + g[ell + 4]
        assert quadratic_form(w, [1, -1, 0]) == want


@given(st.integers(0, 3), st.integers(1, 4), st.integers(0, 5), st.data())
def test_binomial_probe(m, r, ell, data):
    size = data.draw(st.integers(r, 5))
    s = data.draw(st.integers(0, size - r))
    v = negative_binomial_vector(size + 1, r, s)
    form, diff = binomial_probe(agler_moments(3), m, size, ell, v)
    assert form == diff
