"""Both sides of the Guinand-Weil explicit formula for h(w) = F(w - t).

For the shifted extremal function the identity reads

    sum_gamma F(gamma - t) = F(i/2 - t) + F(-i/2 - t) - F-hat(0) log(pi) / (2 pi)
                             + (1/2 pi) int F(u - t) Re psi(1/4 + iu/2) du
                             - (1/pi) sum_n Lambda(n)/sqrt(n) cos(t log n) F-hat(log n / 2 pi)

where gamma runs over all ordinates (positive ones and their mirrors -gamma).
Every numerically approximated piece carries an error bound, and the bounds
are added into the budget of :class:`ExplicitFormulaReport`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import integrate

from ._csvio import write_rows
from .errors import CapacityError, CoverageError, DomainError, FormulaViolationError
from .quadrature import gk15
from .selberg import (
    C_IV,
    SelbergParams,
    _fourier_tail,
    _tail_amplitudes,
    extremal_eval,
    extremal_eval_complex,
    tail_split,
    transform_hat_closed,
    transform_hat_quadrature,
)
from .special_fn import digamma_re_quarter, digamma_re_quarter_scalar
from .zeros import ZeroTable, count_N

__all__ = [
    "MangoldtTable",
    "von_mangoldt_sieve",
    "zero_side",
    "boundary_terms",
    "arch_term",
    "prime_side",
    "prime_cutoff",
    "verify_formula",
    "ExplicitFormulaReport",
    "window_count_sandwich",
    "Sandwich",
    "write_reports_csv",
    "REPORT_COLUMNS",
    "min_coverage",
]

TWO_PI = 2.0 * math.pi
LOG_PI = math.log(math.pi)

# assumed absolute accuracy of stored ordinates (root tolerance plus Z error)
ORDINATE_ERROR = 1e-8
# |N(u) - theta(u)/pi - 1| allowance used beyond the end of a table
_S_ALLOWANCE = 3.5
# sieve memory cap in bytes
SIEVE_BUDGET = 2_000_000_000
MAX_SIEVE = 10**8


# ------------------------------------------------------------------ sieve


@dataclass(frozen=True)
class MangoldtTable:
    """Lambda(n) for 2 <= n <= limit; ``values[k]`` is Lambda(k + 2)."""

    limit: int
    values: np.ndarray

    def __call__(self, n):
        n = int(n)
        if n < 1 or n > self.limit:
            raise CapacityError(f"n = {n} outside table range [1, {self.limit}]")
        return 0.0 if n == 1 else float(self.values[n - 2])

    def psi(self, x):
        """Chebyshev psi(x) = sum_{n <= x} Lambda(n)."""
        k = int(math.floor(x))
        if k > self.limit:
            raise CapacityError(f"psi({x}) needs limit >= {k}")
        return math.fsum(self.values[: max(0, k - 1)].tolist())


def von_mangoldt_sieve(limit, budget=SIEVE_BUDGET):
    """Sieve of Eratosthenes filling Lambda(n) = log p on prime powers p^k."""
    limit = int(limit)
    if limit < 2 or limit > MAX_SIEVE:
        raise DomainError(f"sieve limit must lie in [2, {MAX_SIEVE}], got {limit}")
    need = 9 * (limit + 1)  # float64 output plus a byte per flag
    if need > budget:
        raise CapacityError(f"sieve to {limit} needs ~{need} bytes, budget is {budget}")
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    lam = np.zeros(limit + 1)
    for p in np.flatnonzero(is_prime).tolist():
        lp = math.log(p)
        q = p
        while q <= limit:
            lam[q] = lp
            q *= p
    values = lam[2:]
    values.flags.writeable = False
    return MangoldtTable(limit, values)


# ------------------------------------------------------------------ zero side


def min_coverage(t, p):
    """Smallest admissible table end: t + L + 50/delta."""
    return t + p.L + 50.0 / p.delta


def _zero_tail_bound(t, p, t_max):
    # sum over gamma > t_max of |F(gamma - t)| + |F(-gamma - t)|, using
    # |F(u)| <= C_IV/(delta(|u|-L))^2 and N(u) - N(T) <= (u - T) log(u/2pi)/2pi
    # + 2 * _S_ALLOWANCE; the mirror distance is never below the direct one
    W = t_max - t - p.L
    T = t_max
    smooth = (math.log(T / TWO_PI) + 1.5) / (TWO_PI * W)
    jumps = _S_ALLOWANCE * 2.0 / (W * W)
    return 2.0 * C_IV / p.delta**2 * (smooth + jumps)


def _check_cover(table, t, p):
    if not table.covers_from_zero:
        raise CoverageError("explicit formula needs a table covering (0, t_max]")
    need = min_coverage(t, p)
    if table.t_max < need:
        W = 50.0 / p.delta
        raise CoverageError(
            f"table ends at {table.t_max}, need t_max >= t + L + W = {need} (W = {W})"
        )


def zero_side(table: ZeroTable, t, p: SelbergParams):
    """(sum over all ordinates of F(gamma - t), tail bound).

    Both the stored ordinates and their mirrors -gamma are summed; the
    tail bound covers the zeros above the end of the table.
    """
    _check_cover(table, t, p)
    g = table.ordinates
    vals = np.concatenate([extremal_eval(p, g - t), extremal_eval(p, -g - t)])
    return math.fsum(vals.tolist()), _zero_tail_bound(t, p, table.t_max)


def _ordinate_budget(table, t, p):
    # first-order effect of moving every ordinate by ORDINATE_ERROR
    g = table.ordinates
    h = 1e-4
    dplus = extremal_eval(p, g - t + h) - extremal_eval(p, g - t - h)
    dminus = extremal_eval(p, -g - t + h) - extremal_eval(p, -g - t - h)
    slope = (np.sum(np.abs(dplus)) + np.sum(np.abs(dminus))) / (2.0 * h)
    return ORDINATE_ERROR * float(slope)


# ------------------------------------------------------------------ right side


def boundary_terms(t, p: SelbergParams, return_error=False):
    """F(i/2 - t) + F(-i/2 - t); the terms are conjugate so the sum is real."""
    if t < 10:
        raise DomainError("boundary_terms requires t >= 10")
    w = np.array([0.5j - t, -0.5j - t])
    v = extremal_eval_complex(p, w)
    total = v[0] + v[1]
    value = float(total.real)
    if return_error:
        err = 1e-14 * (abs(v[0]) + abs(v[1])) + abs(total.imag)
        return value, err
    return value


def _arch_tail(amps, p, weight, lo):
    a0, aa, ab = amps
    om = TWO_PI * p.delta
    ph = TWO_PI * p.delta * p.L
    val, err = integrate.quad(lambda s: a0(s) * weight(s), lo, np.inf,
                              epsabs=1e-13, epsrel=1e-12, limit=400)
    total, error = val, err
    for amp, phase in ((aa, ph), (ab, -ph)):
        v, e = _fourier_tail(lambda s, amp=amp: amp(s) * weight(s), om, phase, lo)
        total += v
        error += e
    return total, error


def arch_term(t, p: SelbergParams, return_error=False, tol=1e-10):
    """(1/2 pi) int F(u - t) Re psi(1/4 + iu/2) du over the whole line.

    With v = u - t the range [-(t + 50), L + 20/delta] is integrated by
    adaptive Gauss-Kronrod; both infinite tails use the decomposition of F
    into slowly varying amplitudes times cosines.
    """
    if t < 10:
        raise DomainError("arch_term requires t >= 10")
    V = tail_split(p)
    lo = t + 50.0

    def near(v):
        return extremal_eval(p, v) * digamma_re_quarter(t + v)

    res = gk15(near, -lo, V, tol=tol, breakpoints=(-p.L, p.L, -t),
               max_width=0.25 / p.delta)
    total, error = res.value, res.error
    amps = _tail_amplitudes(p)
    v, e = _arch_tail(amps, p, lambda s: digamma_re_quarter_scalar(t + s), V)
    total += v
    error += e
    v, e = _arch_tail(amps, p, lambda s: digamma_re_quarter_scalar(s - t), lo)
    total += v
    error += e
    value = total / TWO_PI
    if return_error:
        return value, error / TWO_PI
    return value


def prime_cutoff(p: SelbergParams):
    """Largest n with log(n)/2pi < delta, i.e. n < exp(2 pi delta)."""
    x = math.exp(TWO_PI * p.delta)
    n = math.ceil(x) - 1
    return max(n, 1)


def prime_side(t, p: SelbergParams, m: MangoldtTable, method="closed", return_error=False):
    """(1/pi) sum_{2 <= n < e^{2 pi delta}} Lambda(n)/sqrt(n) cos(t log n) F-hat(log n/2pi)."""
    n_max = prime_cutoff(p)
    if m.limit < n_max:
        raise CapacityError(f"Mangoldt table limit {m.limit} < required {n_max}")
    n = np.arange(2, n_max + 1)
    lam = m.values[: n.size]
    keep = lam > 0
    n, lam = n[keep], lam[keep]
    logn = np.log(n)
    x = logn / TWO_PI
    if method == "closed":
        fh = transform_hat_closed(p, x)
        fh_err = np.full(x.shape, 1e-15 * (p.L + 1.0 / p.delta))
    elif method == "quadrature":
        pairs = [transform_hat_quadrature(p, float(v)) for v in x]
        fh = np.array([v for v, _ in pairs])
        fh_err = np.array([e for _, e in pairs])
    else:
        raise ValueError(f"unknown method {method!r}")
    w = lam / np.sqrt(n)
    terms = w * np.cos(t * logn) * fh
    value = math.fsum(terms.tolist()) / math.pi
    if return_error:
        # cos(t log n) loses about t*eps in the argument
        arg_err = 4.0 * np.finfo(float).eps * (t * logn + 1.0)
        err = float(np.sum(w * (fh_err + np.abs(fh) * arg_err))) / math.pi
        return value, err
    return value


# ------------------------------------------------------------------ report


@dataclass(frozen=True)
class ExplicitFormulaReport:
    t: float
    params: SelbergParams
    zero_side: float
    zero_tail_bound: float
    boundary: float
    arch: float
    pi_term: float
    prime_side: float
    residual: float
    budget: float
    n_prime_terms: int

    @property
    def ok(self):
        return abs(self.residual) <= self.budget

    def row(self):
        p = self.params
        vals = [self.t, p.L, p.delta, p.sign]
        vals += [getattr(self, c) for c in REPORT_COLUMNS[4:]]
        return vals


# CSV column order of ExplicitFormulaReport rows
REPORT_COLUMNS = (
    "t", "L", "delta", "sign",
    "zero_side", "zero_tail_bound", "boundary", "arch", "pi_term",
    "prime_side", "residual", "budget", "n_prime_terms",
)


def write_reports_csv(reports, path_or_file):
    """Write reports with the fixed REPORT_COLUMNS header."""
    write_rows(path_or_file, REPORT_COLUMNS, (r.row() for r in reports))


def verify_formula(table: ZeroTable, t, p: SelbergParams, m: MangoldtTable, check=True):
    """Evaluate every term and assert |residual| <= budget.

    Raises FormulaViolationError (carrying the report) when the sides
    disagree beyond the accumulated error bounds, unless ``check`` is False.
    """
    p.check_regime(t)
    zs, tail = zero_side(table, t, p)
    pos = _ordinate_budget(table, t, p)
    bnd, bnd_err = boundary_terms(t, p, return_error=True)
    arch, arch_err = arch_term(t, p, return_error=True)
    ps, ps_err = prime_side(t, p, m, return_error=True)
    pi_term = -transform_hat_closed(p, 0.0) * LOG_PI / TWO_PI
    right = bnd + pi_term + arch - ps
    residual = zs - right
    roundoff = 1e-15 * (2 * len(table) + 10) * max(1.0, abs(zs))
    budget = tail + pos + bnd_err + arch_err + ps_err + roundoff
    n_terms = int(np.count_nonzero(m.values[: prime_cutoff(p) - 1]))
    rep = ExplicitFormulaReport(t, p, zs, tail, bnd, arch, pi_term, ps, residual, budget, n_terms)
    if check and not rep.ok:
        raise FormulaViolationError(
            f"explicit formula violated at t={t}, {p}: residual {residual:.3e} > budget {budget:.3e}",
            rep,
        )
    return rep


# ------------------------------------------------------------------ sandwich


class Sandwich(NamedTuple):
    lower: float
    exact: float
    upper: float
    tail: float


def window_count_sandwich(table: ZeroTable, t, p_plus: SelbergParams, p_minus: SelbergParams):
    """(sum F-(gamma - t), N(t+L) - N(t-L), sum F+(gamma - t), tail bound).

    Sums run over the positive stored ordinates. Each term obeys
    F-(g) <= chi(g) <= F+(g), so lower <= exact <= upper holds termwise; the
    tail bound measures what the zeros above the table would add.
    """
    if (p_plus.L, p_plus.delta) != (p_minus.L, p_minus.delta):
        raise DomainError("sandwich needs F+ and F- with shared (L, delta)")
    if p_plus.sign != "plus" or p_minus.sign != "minus":
        raise DomainError("pass the plus parameters first, then the minus ones")
    _check_cover(table, t, p_plus)
    g = table.ordinates - t
    lower = math.fsum(extremal_eval(p_minus, g).tolist())
    upper = math.fsum(extremal_eval(p_plus, g).tolist())
    L = p_plus.L
    exact = count_N(t + L, table) - count_N(max(t - L, 0.0), table)
    tail = _zero_tail_bound(t, p_plus, table.t_max)
    return Sandwich(lower, float(exact), upper, tail)
