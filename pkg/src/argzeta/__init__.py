"""Numerical tools for the zero-counting function N(t), the argument S(t) and
Selberg-type majorants on the critical line of the Riemann zeta function."""

from .errors import (
    ArgzetaError,
    CapacityError,
    ConsistencyError,
    CoverageError,
    DomainError,
    FormulaViolationError,
    PropertyViolationError,
    UnresolvedIntervalError,
    ZeroTableParseError,
)
from .special_fn import digamma_re_quarter, hardy_z, rs_theta
from .zeros import (
    SSample,
    ZeroTable,
    count_N,
    find_zeros,
    import_zeros,
    load_table,
    s1_integral,
    s_of_t,
    save_table,
)
from .selberg import SelbergParams, beurling_b, extremal_eval, extremal_eval_complex, mass, transform_hat
from .explicit_formula import (
    ExplicitFormulaReport,
    MangoldtTable,
    arch_term,
    boundary_terms,
    prime_side,
    verify_formula,
    von_mangoldt_sieve,
    window_count_sandwich,
    zero_side,
)
from .bounds import (
    GapStat,
    WindowStat,
    delta_schedule,
    gap_scan,
    multiplicity_bound,
    s_extrema_scan,
    theorem1_scan,
    theorem2_deduce,
)

__version__ = "0.1.0"
