from fractions import Fraction as F

import pytest

from shiftcpd.classify import as_shift, grid, mid_battery
from shiftcpd.families import ShiftSpec, SpecParseError
from shiftcpd.transforms import (
    aluthge,
    is_completely_hyperexpansive,
    parse_pipeline,
    reciprocal,
    restrict,
    schur_power_shift,
    weights_settle,
)
from shiftcpd.verdicts import Status

flat = ShiftSpec.explicit([1])
agler2 = ShiftSpec.agler(2)


def w2(spec, n):
    return as_shift(spec).weights.weight_squared(n)


def test_pipeline_text_round_trip():
    spec = parse_pipeline("agler:2|aluthge|schur-power:2|restrict:1")
    assert spec.text == "agler:2|aluthge|schur-power:2|restrict:1"
    assert parse_pipeline("agler:2") == agler2
    with pytest.raises(SpecParseError):
        parse_pipeline("agler:2|twist")
    with pytest.raises(SpecParseError):
        parse_pipeline("agler:2|restrict:0")
    with pytest.raises(SpecParseError):
        parse_pipeline("agler:2|schur-power:0.5")


def test_aluthge():
    assert [w2(aluthge(flat), n) for n in range(3)] == [1.0, 1.0, 1.0]
    s = as_shift(aluthge(agler2))
    for n in range(6):
        assert s.weights.weight_squared(n) ** 2 == pytest.approx(float(F(n + 1, n + 3)), rel=1e-14)
    assert mid_battery(aluthge(agler2))


def test_schur_power():
    assert as_shift(schur_power_shift(agler2, 1)).moments.terms(4) == agler2.shift().moments.terms(4)
    sq = as_shift(schur_power_shift(agler2, 2))
    assert sq.moments.terms(4) == [1, F(1, 4), F(1, 9), F(1, 16)]
    assert mid_battery(sq)
    pert = ShiftSpec.perturbed(2, F(8, 5))
    assert as_shift(schur_power_shift(pert, 2)).moments.term(1) == F(16, 25)
    base, powered = grid(pert, 3, with_mid=False), grid(schur_power_shift(pert, 2), 3, with_mid=False)
    assert [c.pd.status for c in base.cells.values()] != [c.pd.status for c in powered.cells.values()]
    with pytest.raises(ValueError):
        schur_power_shift(agler2, 0)


def test_restrict():
    s = as_shift(restrict(agler2, 1))
    assert [s.weights.weight_squared(n) for n in range(3)] == [F(2, 3), F(3, 4), F(4, 5)]
    assert s.moments.terms(4) == [F(2, n + 2) for n in range(4)]
    with pytest.raises(ValueError):
        restrict(agler2, 0)
    twice = as_shift(restrict(restrict(agler2, 1), 1)).moments.terms(6)
    assert twice == as_shift(restrict(agler2, 2)).moments.terms(6)
    forgot = as_shift(restrict(ShiftSpec.perturbed(2, F(3, 2)), 1))
    assert forgot.moments.terms(6) == s.moments.terms(6)
    assert forgot.perturbation is None


def test_reciprocal():
    assert as_shift(reciprocal(flat)).moments.terms(4) == [1] * 4
    r = as_shift(reciprocal(ShiftSpec.dirichlet()))
    assert r.moments.terms(6) == agler2.shift().moments.terms(6)
    assert as_shift(reciprocal(reciprocal(agler2))).moments.terms(6) == agler2.shift().moments.terms(6)


def test_completely_hyperexpansive():
    v = is_completely_hyperexpansive(ShiftSpec.dirichlet(), 8, 20)
    assert v and v.status is Status.BOUNDARY
    v = is_completely_hyperexpansive(agler2, 4, 10)
    assert v.status is Status.FAILS and v.witness["order"] == 1 and v.witness["index"] == 0
    assert is_completely_hyperexpansive(flat, 4, 10).status is Status.BOUNDARY


def test_weights_settle():
    assert weights_settle(agler2)
    assert weights_settle(flat)
