import math
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from shiftcpd.classify import (
    NONCONTRACTIVE_CAVEAT,
    grid,
    is_k_hyponormal,
    is_km_cpd,
    is_km_pd,
    is_n_contractive,
    mid_battery,
    mid_delta_test,
    mid_logcpd_test,
)
from shiftcpd.families import ShiftSpec, cutoff_c, cutoff_p
from shiftcpd.verdicts import Status

H, B, X = Status.HOLDS, Status.BOUNDARY, Status.FAILS
flat = ShiftSpec.explicit([1])


def pert(x, j=2):
    return ShiftSpec.perturbed(j, F(x))


def test_hyponormality():
    for k in range(1, 6):
        assert is_k_hyponormal("agler:2", k, 10).status is H
    assert is_k_hyponormal(pert("9/8"), 2).status is B
    v = is_k_hyponormal(pert(F(9, 8) + F(1, 10**6)), 2)
    assert v.status is X and v.witness["i"] == 0
    assert is_k_hyponormal(pert("4/3"), 1).status is B


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8])
def test_contractivity_cutoff(n):
    c = cutoff_c(2, n).value
    assert is_n_contractive(pert(c), n).status is B
    assert is_n_contractive(pert(c - F(1, 1000)), n).status is H
    assert is_n_contractive(pert(c + F(1, 1000)), n).status is X


def test_dirichlet_contractivity():
    v = is_n_contractive("dirichlet", 1, 12)
    assert v.status is X and v.witness["index"] == 0 and v.witness["value"] == -1
    assert is_n_contractive("dirichlet", 2, 12).status is B


def test_pd_examples():
    assert is_km_pd(pert("5/4"), 2, 2).status is B
    assert is_km_pd(pert("21/20"), 4, 2).status is B
    v = is_km_pd(pert(F(21, 20) + F(1, 10**9)), 4, 2)
    assert v.status is X
    assert set(v.witness) == {"k", "m", "i", "value", "coefficient"}
    for spec in ("agler:3", "homographic:1,1,1,2", "dirichlet", pert("9/8")):
        for k in range(1, 5):
            assert is_km_pd(spec, k, 0).status is is_k_hyponormal(spec, k).status


def test_cpd_examples():
    assert is_km_cpd(pert("8/7"), 2, 0).status is B
    # a 1x1 window is CPD for every entry, so m = k never fails
    assert is_km_cpd(pert("3/2"), 1, 1)
    assert is_km_cpd(pert(3), 1, 1)
    assert is_km_cpd("agler:2", 3, 1).status is H


def test_failing_witness_reproduces():
    from shiftcpd.hankel import hankel_window, is_psd
    from shiftcpd.sequences import difference_sequence

    spec = pert("6/5")
    v = is_km_pd(spec, 3, 1)
    assert v.status is X
    w = v.witness
    seq = difference_sequence(spec.shift().moments, 2 * w["m"])
    again = is_psd(hankel_window(seq, w["i"], w["k"] - w["m"]))
    assert again.offending_value == w["value"]


def test_shortcut_can_be_verified():
    for x in ("9/8", "6/5", "21/20", "2"):
        fast = is_km_pd(pert(x), 3, 1)
        slow = is_km_pd(pert(x), 3, 1, verify_shortcut=True)
        assert fast.status is slow.status
        assert not slow.notes
        # only a non-failing verdict depends on the untested windows
        assert bool(fast.notes) == bool(fast)


@given(st.integers(2, 4), st.integers(1, 4), st.data(), st.fractions(min_value=1, max_value=2, max_denominator=200))
def test_pd_holds_iff_below_cutoff(j, k, data, x):
    m = data.draw(st.integers(0, k))
    v = is_km_pd(pert(x, j), k, m)
    cut = cutoff_p(j, k, m).value
    assert bool(v) == (x <= cut)
    assert (v.status is B) == (x == cut)


@given(st.integers(2, 4), st.integers(1, 4), st.data(), st.fractions(min_value=1, max_value=2, max_denominator=200))
def test_cpd_equals_next_pd(j, k, data, x):
    m = data.draw(st.integers(0, k - 1)) if k > 1 else 0
    assert is_km_cpd(pert(x, j), k, m).status is is_km_pd(pert(x, j), k, m + 1).status


def test_logcpd():
    assert mid_logcpd_test("agler:2", kmax=8)
    v = mid_logcpd_test(pert("8/5"))
    assert v.status is X and (v.witness["i"], v.witness["k"]) == (0, 1)
    assert v.witness["value"] == pytest.approx(math.log(5 / 6), rel=1e-12)
    assert mid_logcpd_test(flat)


def test_delta():
    v = mid_delta_test("agler:2", kmax=6)
    assert v and v.details["delta_0"] == pytest.approx(math.log(4 / 3), rel=1e-15)
    v = mid_delta_test(pert("8/5"))
    assert v.status is X and v.witness["index"] == 0
    assert v.witness["delta"] == pytest.approx(math.log(5 / 6), rel=1e-12)
    v = mid_delta_test(flat)
    assert v.status is B and v.details == {"degenerate": True}


def test_mid_battery():
    for spec in ("agler:2", "agler:3", "homographic:1,1,1,2"):
        r = mid_battery(spec)
        assert r and r.contractive
        assert all(r.parts().values())
    assert not mid_battery(pert("7/5"))
    d = mid_battery("dirichlet")
    assert NONCONTRACTIVE_CAVEAT in d.overall.notes


def test_grid_matches_cutoffs_cell_by_cell():
    r = grid(pert("23/20"), 4, with_mid=False)
    assert r.coherent, r.warnings
    assert r.cells[4, 0].pd.status is X
    assert r.cells[1, 1].pd.status is H
    for (k, m), cell in r.cells.items():
        assert bool(cell.pd) == (F(23, 20) <= cutoff_p(2, k, m).value)


def test_grid_families():
    r = grid("agler:2", 4)
    assert all(c.pd.status is H and c.cpd.status is H for c in r.cells.values())
    assert r.mid and r.warnings == []
    r = grid("dirichlet", 4)
    assert all(r.cells[k, k].pd.status is B for k in range(1, 5))
    assert NONCONTRACTIVE_CAVEAT in r.warnings and r.coherent
    assert "approximate backend: verdicts are tolerance-qualified" in grid("euler", 2).warnings


def test_grid_ladders_and_errors_do_not_abort():
    r = grid(ShiftSpec.perturbed(2, F(9, 8)), 3, with_mid=False)
    assert [r.contractive_ladder[n].status for n in range(1, 7)] == [H] * 6
    assert [r.hyponormal_ladder[k].status for k in (1, 2, 3)] == [H, B, X]


def test_grid_parallel_is_identical():
    a = grid("agler-perturbed:2:x=21/20", 4, with_mid=False)
    b = grid("agler-perturbed:2:x=21/20", 4, with_mid=False, jobs=2)
    assert a.cells == b.cells
    with pytest.raises(ValueError):
        grid("agler:2", 0)
