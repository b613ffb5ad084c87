"""The positivity hierarchy of a weighted shift.

k-hyponormality, n-contractivity, the (k,2m)-PD/CPD bridge family and the
moment-infinite-divisibility (MID) battery.  Every "holds" is qualified by
the depth it was checked to; every "fails" carries a re-checkable witness.
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass, field
from typing import Union

from .families import Shift, ShiftSpec, cutoff_p
from .hankel import PsdStatus, hankel_window, is_cpd, is_psd
from .scalars import DEFAULT_TOLERANCE, EXACT, DomainError, HorizonError, Tolerance
from .sequences import RealSequence, difference_sequence, is_hyper, is_n_monotone
from .transforms import TransformedSpec, parse_pipeline
from .verdicts import Status, Verdict, error_verdict

DEFAULT_DEPTH = 12
DEFAULT_KMAX = 8
DEFAULT_ORDERS = 8

NONCONTRACTIVE_CAVEAT = "shift is not a contraction; the MID equivalences assume one"

Specish = Union[Shift, ShiftSpec, TransformedSpec, str]


def as_shift(spec: Specish) -> Shift:
    if isinstance(spec, Shift):
        return spec
    if isinstance(spec, str):
        spec = parse_pipeline(spec)
    return spec.shift()


def _window_scan(
    spec: Specish,
    order: int,
    size: int,
    depth: int,
    cpd: bool,
    tol: Tolerance,
    verify_shortcut: bool,
    label: dict,
) -> Verdict:
    shift = as_shift(spec)
    seq = difference_sequence(shift.moments, order)
    test = is_cpd if cpd else is_psd
    # zeroth-weight perturbations: windows with i >= 1 are positive multiples
    # of windows of a subnormal Agler shift, so only i = 0 can fail
    shortcut = shift.perturbation is not None
    indices = range(depth + 1) if (verify_shortcut or not shortcut) else range(1)
    boundary = None
    for i in indices:
        v = test(hankel_window(seq, i, size), tol)
        if v.status is PsdStatus.NOT_PSD:
            if shortcut and i >= 1:
                raise RuntimeError(f"zeroth-weight shortcut violated at i={i} for {shift.name}")
            witness = dict(label, i=i, value=v.offending_value)
            if v.failing_index is not None:
                witness["coefficient"] = v.failing_index
            return Verdict(Status.FAILS, depth, witness)
        if v.status is PsdStatus.BOUNDARY and boundary is None:
            boundary = dict(label, i=i, value=v.offending_value)
    notes = ("zeroth-weight shortcut: only i=0 tested",) if shortcut and not verify_shortcut else ()
    if boundary is not None:
        return Verdict(Status.BOUNDARY, depth, boundary, notes)
    return Verdict(Status.HOLDS, depth, None, notes)


def is_k_hyponormal(spec: Specish, k: int, depth: int = DEFAULT_DEPTH, tol: Tolerance = DEFAULT_TOLERANCE, verify_shortcut: bool = False) -> Verdict:
    """``M_γ(i,k)`` PSD for ``0 <= i <= depth``."""
    if k < 1:
        raise ValueError("k >= 1")
    return _window_scan(spec, 0, k, depth, False, tol, verify_shortcut, {"k": k, "m": 0})


def is_n_contractive(spec: Specish, n: int, depth: int = DEFAULT_DEPTH, tol: Tolerance = DEFAULT_TOLERANCE) -> Verdict:
    if n < 1:
        raise ValueError("n >= 1")
    v = is_n_monotone(as_shift(spec).moments, n, depth, tol)
    return v


def _check_km(k: int, m: int) -> None:
    if k < 1 or not 0 <= m <= k:
        raise ValueError(f"need k >= 1 and 0 <= m <= k (got k={k}, m={m})")


def is_km_pd(spec: Specish, k: int, m: int, depth: int = DEFAULT_DEPTH, tol: Tolerance = DEFAULT_TOLERANCE, verify_shortcut: bool = False) -> Verdict:
    """``M_{∇^{2m}γ}(i, k-m)`` PSD for ``0 <= i <= depth``."""
    _check_km(k, m)
    return _window_scan(spec, 2 * m, k - m, depth, False, tol, verify_shortcut, {"k": k, "m": m})


def is_km_cpd(spec: Specish, k: int, m: int, depth: int = DEFAULT_DEPTH, tol: Tolerance = DEFAULT_TOLERANCE, verify_shortcut: bool = False) -> Verdict:
    """``M_{∇^{2m}γ}(i, k-m)`` CPD for ``0 <= i <= depth``; vacuous when ``m = k``."""
    _check_km(k, m)
    return _window_scan(spec, 2 * m, k - m, depth, True, tol, verify_shortcut, {"k": k, "m": m})


def _contractive_notes(shift: Shift) -> tuple[str, ...]:
    ok, _ = shift.is_contraction()
    return () if ok else (NONCONTRACTIVE_CAVEAT,)


def mid_logcpd_test(spec: Specish, kmax: int = DEFAULT_KMAX, depth: int = DEFAULT_DEPTH, tol: Tolerance = DEFAULT_TOLERANCE, digits: int | None = None) -> Verdict:
    """``log M_γ(i,k)`` CPD for ``0 <= i <= depth``, ``1 <= k <= kmax``."""
    shift = as_shift(spec)
    logs = shift.log_moments(digits)
    notes = _contractive_notes(shift)
    boundary = None
    for k in range(1, kmax + 1):
        for i in range(depth + 1):
            v = is_cpd(hankel_window(logs, i, k), tol)
            if v.status is PsdStatus.NOT_PSD:
                return Verdict(Status.FAILS, depth, {"i": i, "k": k, "value": v.min_eigenvalue}, notes)
            if v.status is PsdStatus.BOUNDARY and boundary is None:
                boundary = {"i": i, "k": k, "value": v.min_eigenvalue}
    status = Status.BOUNDARY if boundary else Status.HOLDS
    return Verdict(status, depth, boundary, notes, details={"kmax": kmax})


def _stieltjes_scan(seq: RealSequence, kmax: int, tol: Tolerance) -> Verdict:
    parts = []
    for k in range(1, kmax + 1):
        for start in (0, 1):
            v = is_psd(hankel_window(seq, start, k), tol)
            label = {"start": start, "k": k, "value": v.min_eigenvalue}
            if v.status is PsdStatus.NOT_PSD:
                return Verdict(Status.FAILS, None, label)
            parts.append(Verdict(Status.BOUNDARY, None, label) if v.status is PsdStatus.BOUNDARY else Verdict(Status.HOLDS))
    return Verdict.combine(parts)


def mid_delta_test(spec: Specish, kmax: int = DEFAULT_KMAX, tol: Tolerance = DEFAULT_TOLERANCE, digits: int | None = None) -> Verdict:
    """Stieltjes test of ``δ_n = ln(γ_n γ_{n+2}/γ_{n+1}²)``: ``M_δ(0,k)``, ``M_δ(1,k)`` PSD.

    The normalised sequence ``δ/δ_0`` is tested as well and reported under
    ``details["normalized"]``.
    """
    shift = as_shift(spec)
    delta = shift.delta(digits)
    notes = _contractive_notes(shift)
    top = 2 * kmax + 1
    values = [delta.term(n) for n in range(top + 1)]
    scale = max(abs(float(v)) for v in values)
    signs = [tol.sign(v, scale) if scale else 0 for v in values]
    for n, s in enumerate(signs):
        if s < 0:
            return Verdict(Status.FAILS, top, {"index": n, "delta": values[n]}, notes)
    if signs[0] == 0:
        nonzero = [n for n, s in enumerate(signs) if s != 0]
        if nonzero:
            n = nonzero[0]
            return Verdict(Status.FAILS, top, {"index": n, "delta": values[n], "reason": "δ_0 = 0 forces δ ≡ 0"}, notes)
        return Verdict(Status.BOUNDARY, top, {"index": 0, "delta": values[0], "reason": "flat ratio, δ ≡ 0"}, notes, details={"degenerate": True})
    main = _stieltjes_scan(delta, kmax, tol)
    d0 = values[0]
    normalized = RealSequence(lambda n: delta.term(n) / d0, name="δ/δ_0")
    norm = _stieltjes_scan(normalized, kmax, tol)
    return Verdict(main.status, top, main.witness, notes, details={"normalized": norm.status.value, "delta_0": d0})


@dataclass(frozen=True)
class MidReport:
    logcpd: Verdict
    delta: Verdict
    log_monotone: Verdict
    log_alternating: Verdict
    overall: Verdict
    contractive: bool
    config: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return bool(self.overall)

    def parts(self) -> dict[str, Verdict]:
        return {
            "logcpd": self.logcpd,
            "delta": self.delta,
            "log_monotone": self.log_monotone,
            "log_alternating": self.log_alternating,
        }


def mid_battery(
    spec: Specish,
    kmax: int = DEFAULT_KMAX,
    depth: int = DEFAULT_DEPTH,
    orders: int = DEFAULT_ORDERS,
    tol: Tolerance = DEFAULT_TOLERANCE,
    digits: int | None = None,
) -> MidReport:
    """All finite MID tests; any failure fails the battery."""
    shift = as_shift(spec)
    logcpd = mid_logcpd_test(shift, kmax, depth, tol, digits)
    delta = mid_delta_test(shift, kmax, tol, digits)
    log_mono = is_hyper(shift.log_moments(digits), orders, depth, "monotone", tol)
    log_alt = is_hyper(shift.log_weights_squared(digits), orders, depth, "alternating", tol)
    contractive, _ = shift.is_contraction()
    overall = Verdict.combine([logcpd, delta, log_mono, log_alt], depth)
    if not contractive:
        overall = Verdict(overall.status, overall.depth, overall.witness, overall.notes + (NONCONTRACTIVE_CAVEAT,))
    return MidReport(logcpd, delta, log_mono, log_alt, overall, contractive, {"kmax": kmax, "depth": depth, "orders": orders})


@dataclass(frozen=True)
class Cell:
    k: int
    m: int
    pd: Verdict
    cpd: Verdict
    cutoff: object = None


@dataclass
class GridReport:
    spec: str
    K: int
    depth: int
    cells: dict[tuple[int, int], Cell]
    contractive_ladder: dict[int, Verdict]
    hyponormal_ladder: dict[int, Verdict]
    contractive: bool
    mid: MidReport | None = None
    warnings: list[str] = field(default_factory=list)

    @property
    def coherent(self) -> bool:
        return not any(w.startswith("coherence") for w in self.warnings)


def _guarded(depth: int, fn, *args) -> Verdict:
    # a cell that cannot be evaluated is reported, the others still run
    try:
        return fn(*args)
    except (DomainError, HorizonError, ArithmeticError) as exc:
        return error_verdict(exc, depth)


def _cell_task(spec, k: int, m: int, depth: int, tol: Tolerance, verify_shortcut: bool) -> tuple[int, int, Verdict, Verdict]:
    pd = _guarded(depth, is_km_pd, spec, k, m, depth, tol, verify_shortcut)
    cpd = _guarded(depth, is_km_cpd, spec, k, m, depth, tol, verify_shortcut)
    return k, m, pd, cpd


def _disagree(a: Verdict, b: Verdict, exact: bool) -> bool:
    if Status.ERROR in (a.status, b.status):
        return False
    if exact:
        return a.status is not b.status
    # inside the tolerance band either side may read as boundary
    return {a.status, b.status} == {Status.HOLDS, Status.FAILS}


def _coherence(report: GridReport, shift: Shift) -> list[str]:
    out = []
    exact = shift.backend == EXACT
    K = report.K
    hyp, con = report.hyponormal_ladder, report.contractive_ladder
    for k in range(1, K + 1):
        if _disagree(report.cells[k, 0].pd, hyp[k], exact):
            out.append(f"coherence: ({k},0)-PD differs from {k}-hyponormality")
        if _disagree(report.cells[k, k].pd, con[2 * k], exact):
            out.append(f"coherence: ({k},{2 * k})-PD differs from {2 * k}-contractivity")
        for m in range(k):
            cell = report.cells[k, m]
            if _disagree(cell.cpd, report.cells[k, m + 1].pd, exact):
                out.append(f"coherence: ({k},{2 * m})-CPD differs from ({k},{2 * m + 2})-PD")
            if cell.cpd.status is not Status.ERROR and cell.cpd:
                bad = [n for n in range(max(2, 2 * m), 2 * k + 1, 2) if con[n].status is Status.FAILS and (exact or cell.cpd.status is Status.HOLDS)]
                if bad:
                    out.append(f"coherence: ({k},{2 * m})-CPD holds but {bad[0]}-contractivity fails")
    if shift.perturbation is not None and shift.exponent == 1:
        j, x = shift.perturbation
        for (k, m), cell in report.cells.items():
            if cell.pd.status is not Status.ERROR and bool(cell.pd) != (x <= cell.cutoff.value):
                out.append(f"coherence: ({k},{2 * m})-PD verdict contradicts cutoff {cell.cutoff}")
    return out


def grid(
    spec: Specish,
    K: int,
    depth: int = DEFAULT_DEPTH,
    orders: int = DEFAULT_ORDERS,
    tol: Tolerance = DEFAULT_TOLERANCE,
    with_mid: bool = True,
    jobs: int = 1,
    verify_shortcut: bool = False,
    digits: int | None = None,
) -> GridReport:
    """Every (k, m) cell for ``0 <= m <= k <= K`` plus both ladders and the MID battery."""
    if K < 1:
        raise ValueError("K >= 1")
    shift = as_shift(spec)
    tasks = [(k, m) for k in range(1, K + 1) for m in range(k + 1)]
    picklable = isinstance(spec, (ShiftSpec, TransformedSpec, str))
    results = []
    if jobs > 1 and picklable:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            futs = [pool.submit(_cell_task, spec, k, m, depth, tol, verify_shortcut) for k, m in tasks]
            results = [f.result() for f in futs]
    else:
        results = [_cell_task(shift, k, m, depth, tol, verify_shortcut) for k, m in tasks]
    cells = {}
    for k, m, pd, cpd in results:
        cut = cutoff_p(shift.perturbation[0], k, m) if shift.perturbation is not None and shift.exponent == 1 else None
        cells[k, m] = Cell(k, m, pd, cpd, cut)
    contractive_ladder = {n: _guarded(depth, is_n_contractive, shift, n, depth, tol) for n in range(1, 2 * K + 1)}
    hyponormal_ladder = {k: _guarded(depth, is_k_hyponormal, shift, k, depth, tol, verify_shortcut) for k in range(1, K + 1)}
    is_contraction, exact = shift.is_contraction()
    report = GridReport(
        spec=shift.name,
        K=K,
        depth=depth,
        cells=cells,
        contractive_ladder=contractive_ladder,
        hyponormal_ladder=hyponormal_ladder,
        contractive=is_contraction,
    )
    if not is_contraction:
        report.warnings.append(NONCONTRACTIVE_CAVEAT)
    elif not exact:
        report.warnings.append("contractivity checked on sampled weights only")
    if shift.backend != EXACT:
        report.warnings.append("approximate backend: verdicts are tolerance-qualified")
    if with_mid:
        report.mid = mid_battery(shift, K, depth, orders, tol, digits)
    report.warnings.extend(_coherence(report, shift))
    return report
