"""Positivity hierarchy of unilateral weighted shifts: hyponormality,
n-contractivity, (k,2m)-PD/CPD windows and moment infinite divisibility."""

from .classify import (
    GridReport,
    MidReport,
    as_shift,
    grid,
    is_k_hyponormal,
    is_km_cpd,
    is_km_pd,
    is_n_contractive,
    mid_battery,
    mid_delta_test,
    mid_logcpd_test,
)
from .families import (
    Cutoff,
    Shift,
    ShiftSpec,
    SpecParseError,
    agler_berger_moment,
    agler_moments,
    alternating_contractivity_index,
    contractivity_index,
    cutoff_alternating,
    cutoff_c,
    cutoff_h,
    cutoff_p,
    parse_shift,
)
from .hankel import SymMatrix, hankel_window, is_cpd, is_psd, schur_log, schur_power
from .oracles import (
    Bracket,
    bisect_cutoff,
    determinant_ratio_cutoff,
    negative_binomial_vector,
    q_identity_check,
)
from .scalars import APPROX, EXACT, Tolerance, format_scalar, parse_rational
from .sequences import (
    MomentSequence,
    RealSequence,
    WeightSequence,
    delta_sequence,
    forward_difference,
    is_n_alternating,
    is_n_monotone,
    log_sequence,
)
from .transforms import (
    TransformedSpec,
    aluthge,
    is_completely_hyperexpansive,
    parse_pipeline,
    reciprocal,
    restrict,
    schur_power_shift,
)
from .verdicts import Status, Verdict

__version__ = "0.1.0"
