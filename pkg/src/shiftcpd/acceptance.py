"""The acceptance suite: twelve numbered checks shared by ``shiftcpd verify``
and the test suite.

Each check returns a :class:`CriterionResult`; failures are collected, never
raised.  The closed-form cutoffs are looked up through a :class:`Formulas`
bundle so a test can swap in a tampered formula and watch the right checks
fail.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import families
from .classify import is_km_cpd, is_km_pd, is_n_contractive, mid_battery, mid_delta_test
from .families import ShiftSpec
from .hankel import PsdStatus, SymMatrix, is_psd, schur_power
from .linalg import bareiss_determinant, jacobi_eigenvalues
from .oracles import Bracket, bisect_cutoff, determinant_ratio_cutoff, q_identity_check
from .scalars import DEFAULT_TOLERANCE, EXACT, Tolerance, format_scalar, random_rational, seeded_rng
from .sequences import RealSequence
from .transforms import is_completely_hyperexpansive, reciprocal
from .verdicts import Status

BERGMAN_TABLE = {
    1: ("4/3", "3/2"),
    2: ("9/8", "8/7", "5/4"),
    3: ("16/15", "15/14", "12/11", "7/6"),
    4: ("25/24", "24/23", "21/20", "16/15", "9/8"),
    5: ("36/35", "35/34", "32/31", "27/26", "20/19", "11/10"),
}

JS = (2, 3, 4, 5)
KMAX = 5
DEPTH = 12


@dataclass(frozen=True)
class Formulas:
    p: Callable = families.cutoff_p
    c: Callable = families.cutoff_c
    h: Callable = families.cutoff_h
    alternating: Callable = families.cutoff_alternating


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str = ""
    elapsed: float = 0.0
    limit: float | None = None

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"criterion {self.number:>2} {mark}  {self.title}: {self.detail}"


@dataclass
class Context:
    seed: int = 0
    formulas: Formulas = field(default_factory=Formulas)
    tol: Tolerance = DEFAULT_TOLERANCE


def _cells(kmax: int = KMAX):
    return [(k, m) for k in range(1, kmax + 1) for m in range(k + 1)]


def c1_bergman_table(ctx: Context) -> tuple[bool, str]:
    bad = [
        (k, m, format_scalar(ctx.formulas.p(2, k, m).value), want)
        for k, row in BERGMAN_TABLE.items()
        for m, want in enumerate(row)
        if ctx.formulas.p(2, k, m).value != Fraction(want)
    ]
    if bad:
        k, m, got, want = bad[0]
        return False, f"{len(bad)} mismatches, first p(2,{k},{m}) = {got}, table {want}"
    return True, "20 entries equal"


def _pd_predicate(j: int, k: int, m: int):
    return lambda x: is_km_pd(ShiftSpec.perturbed(j, x), k, m, DEPTH)


def c2_three_way(ctx: Context) -> tuple[bool, str]:
    problems = []
    for j in JS:
        for k, m in _cells():
            closed = ctx.formulas.p(j, k, m).value
            try:
                ratio = determinant_ratio_cutoff(j, k, m)
            except (ArithmeticError, ZeroDivisionError) as exc:
                problems.append(f"det-ratio ({j},{k},{m}): {exc}")
                continue
            if closed != ratio:
                problems.append(f"({j},{k},{m}): closed {closed} != det-ratio {ratio}")
                continue
            bracket = bisect_cutoff(_pd_predicate(j, k, m), 1, j + 1, steps=40)
            if closed not in bracket:
                problems.append(f"({j},{k},{m}): {closed} outside [{bracket.lo}, {bracket.hi})")
    if problems:
        return False, f"{len(problems)} disagreements, first {problems[0]}"
    return True, f"{len(JS) * len(_cells())} triples agree"


def c3_identities(ctx: Context) -> tuple[bool, str]:
    f = ctx.formulas
    problems = []
    for j in JS:
        for k in range(1, KMAX + 1):
            if f.p(j, k, 0).value != f.h(j, k).value:
                problems.append(f"p({j},{k},0) != h({j},{k})")
            if f.p(j, k, k).value != f.c(j, 2 * k).value:
                problems.append(f"p({j},{k},{k}) != c({j},{2 * k})")
    for k, m in _cells():
        v = f.p(2, k, m).value
        if v.numerator - v.denominator != 1:
            problems.append(f"p(2,{k},{m}) = {v} is not (n+1)/n")
    if problems:
        return False, f"{len(problems)} failures, first {problems[0]}"
    return True, "h, c and (n+1)/n forms consistent"


def c4_q_identity(ctx: Context) -> tuple[bool, str]:
    rng = seeded_rng(ctx.seed)
    checks = 0
    for s in range(200):
        terms = [random_rational(rng, signed=True) for _ in range(8 + 2 * 6 + 1)]
        seq = RealSequence.from_terms(terms, name=f"q{s}")
        for k in range(1, 7):
            for ell in range(9):
                left, right = q_identity_check(seq, ell, k)
                checks += 1
                if left != right:
                    return False, f"sequence {s}, k={k}, l={ell}: {left} != {right}"
    return True, f"{checks} exact equalities"


def c5_recurrences(ctx: Context) -> tuple[bool, str]:
    checks = 0
    for j in range(2, 7):
        for n in range(31):
            pairs = [families.nabla_moment_pair(j, 1, n)] + [families.nabla_moment_pair(j, 2 * m, n) for m in range(1, 5)]
            for a, b in pairs:
                checks += 1
                if a != b:
                    return False, f"moment recurrence j={j}, n={n}: {a} != {b}"
    for j in range(2, 6):
        for m in range(1, 7):
            for n in range(11):
                a, b = families.nabla_weight_pair(j, m, n)
                checks += 1
                if a != b:
                    return False, f"weights j={j}, m={m}, n={n}: {a} != {b}"
    return True, f"{checks} exact equalities"


def c6_berger(ctx: Context) -> tuple[bool, str]:
    for j in range(2, 7):
        moments = families.agler_moments(j)
        for n in range(21):
            want = Fraction(math.factorial(j - 1) * math.factorial(n), math.factorial(n + j - 1))
            got = families.agler_berger_moment(j, n)
            if got != want or moments.term(n) != want:
                return False, f"j={j}, n={n}: integral {got}, moment {moments.term(n)}, closed {want}"
    return True, "105 moments equal"


def c7_alternating(ctx: Context) -> tuple[bool, str]:
    for m in range(1, 9):
        a = ctx.formulas.alternating(2, m).value
        c = ctx.formulas.c(2, (m + 1) * (m + 2) // 2).value
        if a != c:
            return False, f"m={m}: alternating cutoff {a} != c(2,{(m + 1) * (m + 2) // 2}) = {c}"
    return True, "m = 1..8 equal"


def c8_bridge(ctx: Context) -> tuple[bool, str]:
    # at m = k the CPD window is 1x1 and holds vacuously, so the bridge is
    # only asserted for m < k
    cuts = {ctx.formulas.p(2, k, m).value for k, m in _cells(4)}
    xs = sorted({x + d for x in cuts for d in (Fraction(-1, 1000), 0, Fraction(1, 1000))})
    checked = 0
    for x in xs:
        spec = ShiftSpec.perturbed(2, x)
        con = {n: is_n_contractive(spec, n, DEPTH) for n in range(2, 9, 2)}
        for k in range(1, 5):
            for m in range(k):
                if not is_km_cpd(spec, k, m, DEPTH):
                    continue
                checked += 1
                for n in range(max(2, 2 * m), 2 * k + 1, 2):
                    if not con[n]:
                        return False, f"x={x}: ({k},{2 * m})-CPD holds but {n}-contractivity fails"
    return True, f"{len(xs)} x values, {checked} CPD-holding cells, no counterexample"


def c9_mid(ctx: Context) -> tuple[bool, str]:
    tol = ctx.tol
    for text in ("agler:2", "agler:3", "homographic:1,1,1,2"):
        r = mid_battery(text, kmax=8, depth=12, orders=8, tol=tol)
        if not r:
            return False, f"{text} fails the MID battery: {r.overall.witness}"
    bad = ShiftSpec.perturbed(2, Fraction(8, 5))
    r = mid_battery(bad, kmax=8, depth=12, orders=8, tol=tol)
    d = mid_delta_test(bad, 8, tol)
    want = math.log(5 / 6)
    if r or d.status is not Status.FAILS or d.witness.get("index") != 0:
        return False, "agler-perturbed(2, 8/5) was not rejected at δ_0"
    if abs(float(d.witness["delta"]) - want) > tol.rel * abs(want):
        return False, f"δ_0 = {d.witness['delta']}, expected ln(5/6) = {want}"
    dirichlet = ShiftSpec.dirichlet()
    if is_n_contractive(dirichlet, 1, 12):
        return False, "dirichlet passed 1-contractivity"
    if not is_completely_hyperexpansive(dirichlet, 8, 20, tol):
        return False, "dirichlet failed complete hyperexpansivity"
    if not mid_battery(reciprocal(dirichlet), kmax=8, depth=12, orders=8, tol=tol):
        return False, "reciprocal(dirichlet) fails the MID battery"
    return True, f"positives pass, perturbed fails with δ_0 = {format_scalar(float(d.witness['delta']))}"


IDENTITY_SPECS = (
    "agler:2",
    "agler:3",
    "agler:5",
    "agler-perturbed:2:x=9/8",
    "agler-perturbed:2:x=21/20",
    "agler-perturbed:3:x=5/4",
    "agler-perturbed:2:x=3/2",
    "homographic:1,1,1,2",
    "dirichlet",
    "dirichlet|reciprocal",
    "explicit:[1/2,2/3,3/4]",
    "explicit:[1,1,1]",
    "euler",
    "agler:2|aluthge",
    "agler:2|schur-power:1/2",
)


def c10_cpd_pd_shift(ctx: Context) -> tuple[bool, str]:
    from .classify import as_shift

    cells = 0
    for text in IDENTITY_SPECS:
        exact = as_shift(text).backend == EXACT
        for k in range(1, 5):
            for m in range(k):
                a = is_km_cpd(text, k, m, DEPTH, ctx.tol)
                b = is_km_pd(text, k, m + 1, DEPTH, ctx.tol)
                cells += 1
                same = a.status is b.status if exact else bool(a) == bool(b)
                if not same:
                    return False, f"{text} ({k},{2 * m}): CPD {a.status.value}, PD(m+1) {b.status.value}"
    return True, f"{len(IDENTITY_SPECS)} shifts, {cells} cells agree"


def _random_symmetric(rng, n: int) -> SymMatrix:
    kind = rng.randrange(3)
    if kind == 0:
        return SymMatrix.from_function(n, lambda i, j: random_rational(rng, signed=True))
    # Gram matrices, sometimes rank deficient, exercise the PSD side
    rank = rng.randint(1, n) if kind == 1 else n
    b = [[random_rational(rng, signed=True) for _ in range(n)] for _ in range(rank)]
    return SymMatrix.from_function(n, lambda i, j: sum(b[r][i] * b[r][j] for r in range(rank)))


def c11_cross_validation(ctx: Context) -> tuple[bool, str]:
    rng = seeded_rng(ctx.seed + 11)
    compared = boundary = positive = 0
    for t in range(500):
        m = _random_symmetric(rng, rng.randint(1, 8))
        exact = is_psd(m, ctx.tol)
        approx = is_psd(m.map(float), ctx.tol)
        if "boundary" in (exact.status.value, approx.status.value):
            boundary += 1
            continue
        compared += 1
        positive += exact.status is PsdStatus.PSD
        if exact.status is not approx.status:
            return False, f"matrix {t}: exact {exact.status.value}, float {approx.status.value}"
    return True, f"{compared} verdicts agree ({positive} PSD), {boundary} boundary excluded"


def r_matrix(a) -> SymMatrix:
    return SymMatrix.from_rows([[1, 1, a], [1, 2, 1], [a, 1, 1]])


def _sqrt_det(a: Fraction) -> float:
    rows = schur_power(r_matrix(a), Fraction(1, 2)).rows()
    return (
        rows[0][0] * (rows[1][1] * rows[2][2] - rows[1][2] ** 2)
        - rows[0][1] * (rows[0][1] * rows[2][2] - rows[1][2] * rows[0][2])
        + rows[0][2] * (rows[0][1] * rows[1][2] - rows[1][1] * rows[0][2])
    )


def select_r_parameter(steps: int = 30) -> tuple[Fraction, Bracket]:
    """Bracket the largest ``a`` where the Schur square root of R(a) is singular, then halve it."""
    bracket = bisect_cutoff(lambda a: _sign_verdict(-_sqrt_det(a)), Fraction(1, 1000), Fraction(1, 2), steps)
    a = (bracket.lo / 2).limit_denominator(1000)
    return a, bracket


def _sign_verdict(x: float):
    from .verdicts import Verdict

    return Verdict(Status.HOLDS if x > 0 else Status.BOUNDARY if x == 0 else Status.FAILS)


def c12_infinite_divisibility(ctx: Context) -> tuple[bool, str]:
    a, bracket = select_r_parameter()
    margin = 10 * ctx.tol.rel
    r = r_matrix(a)
    exact = is_psd(r, ctx.tol)
    lam = jacobi_eigenvalues([[float(x) for x in row] for row in r.rows()])[0]
    det = _sqrt_det(a)
    if exact.status is not PsdStatus.PSD or lam <= margin or bareiss_determinant(r.rows()) != 2 * a - 2 * a * a:
        return False, f"R({a}) not strictly PSD (min eigenvalue {lam})"
    if not det < -margin or is_psd(schur_power(r, Fraction(1, 2)), ctx.tol):
        return False, f"Schur square root of R({a}) has determinant {det}"
    return True, f"a = {a}: min eigenvalue {lam:.6g}, det of Schur square root {det:.6g}"


CRITERIA: tuple[tuple[int, str, Callable[[Context], tuple[bool, str]], float | None], ...] = (
    (1, "Bergman cutoff table", c1_bergman_table, 1.0),
    (2, "three-way cutoff agreement", c2_three_way, 60.0),
    (3, "consistency identities", c3_identities, None),
    (4, "Q-identity", c4_q_identity, 30.0),
    (5, "nabla recurrences", c5_recurrences, None),
    (6, "Berger moments", c6_berger, None),
    (7, "alternating/contractive correspondence", c7_alternating, None),
    (8, "bridge property", c8_bridge, None),
    (9, "MID battery", c9_mid, None),
    (10, "CPD/PD shift identity", c10_cpd_pd_shift, None),
    (11, "exact-vs-float cross-validation", c11_cross_validation, None),
    (12, "infinite-divisibility counterexample", c12_infinite_divisibility, None),
)


def run_criterion(number: int, ctx: Context | None = None) -> CriterionResult:
    ctx = ctx or Context()
    _, title, fn, limit = CRITERIA[number - 1]
    start = time.perf_counter()
    try:
        passed, detail = fn(ctx)
    except Exception as exc:  # a crash is a failure of that criterion only
        passed, detail = False, f"{type(exc).__name__}: {exc}"
    elapsed = time.perf_counter() - start
    if limit is not None and elapsed > limit:
        passed, detail = False, f"{detail} (took {elapsed:.1f}s, limit {limit:.0f}s)"
    return CriterionResult(number, title, passed, detail, elapsed, limit)


def run_all(ctx: Context | None = None, only: list[int] | None = None) -> list[CriterionResult]:
    ctx = ctx or Context()
    numbers = only or [n for n, *_ in CRITERIA]
    return [run_criterion(n, ctx) for n in numbers]
