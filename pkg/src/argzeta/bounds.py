"""Experiment drivers for windowed zero counts, S(t) extrema, gaps and multiplicities.

None of the asymptotic bounds is asserted here. Each scan reports the ratio
of the measured quantity to the leading constant (1/2) log t / log log t
(or pi / log log t for gaps), and only exact, finite-height identities are
checked.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._csvio import format_summary, write_rows
from .errors import DomainError, PropertyViolationError
from .special_fn import rs_theta
from .zeros import ZeroTable, count_N, s_of_t

__all__ = [
    "delta_schedule",
    "leading_bound",
    "WindowStat",
    "theorem1_scan",
    "Theorem2Record",
    "theorem2_deduce",
    "GapStat",
    "GapScan",
    "gap_scan",
    "multiplicity_window",
    "multiplicity_bound",
    "multiplicity_scan",
    "SExtrema",
    "s_extrema_scan",
    "write_rows",
    "format_summary",
]

TWO_PI = 2.0 * math.pi


def delta_schedule(t):
    """Band limit delta with pi delta = loglog t - 2 logloglog t, clamped to >= 1."""
    if not t >= 100:
        raise DomainError(f"delta_schedule needs t >= 100, got {t}")
    ll = math.log(math.log(t))
    return max(1.0, (ll - 2.0 * math.log(ll)) / math.pi)


def leading_bound(t):
    """(1/2) log t / log log t, the leading term of the bounds being probed."""
    t = np.asarray(t, dtype=float)
    return 0.5 * np.log(t) / np.log(np.log(t))


# ------------------------------------------------------------------ windows


@dataclass(frozen=True)
class WindowStat:
    t: float
    h: float
    count: float
    main: float
    deviation: float
    ratio: float
    s_diff: float
    allowance: float

    CSV_HEADER = ("t", "h", "count", "main", "deviation", "ratio", "s_diff", "allowance")

    def row(self):
        return (self.t, self.h, self.count, self.main, self.deviation,
                self.ratio, self.s_diff, self.allowance)

    @property
    def reconstruction_ok(self):
        return abs(self.deviation - self.s_diff) <= self.allowance


def theorem1_scan(table: ZeroTable, t_grid, h_grid):
    """WindowStat for every (t, h) with 0 < h <= sqrt(t), sorted by (t, h).

    ``s_diff`` is S(t+h) - S(t) and ``allowance`` is (1 + h^2)/t, the slack
    within which it must reproduce ``deviation``.
    """
    ts = np.asarray(sorted(float(x) for x in np.ravel(t_grid)))
    hs = np.asarray(sorted(float(x) for x in np.ravel(h_grid)))
    if ts.size == 0 or hs.size == 0:
        raise DomainError("theorem1_scan needs non-empty t and h grids")
    if np.any(ts < 10):
        raise DomainError("theorem1_scan needs t >= 10")
    if np.any(hs <= 0):
        raise DomainError("window lengths must be positive")
    T, H = np.meshgrid(ts, hs, indexing="ij")
    T, H = T.ravel(), H.ravel()
    bad = H > np.sqrt(T)
    if np.any(bad):
        i = int(np.argmax(bad))
        raise DomainError(f"h = {H[i]} exceeds sqrt(t) = {math.sqrt(T[i])} at t = {T[i]}")
    count = count_N(T + H, table) - count_N(T, table)
    main = H / TWO_PI * np.log(T / TWO_PI)
    dev = count - main
    ratio = np.abs(dev) / leading_bound(T)
    sdiff = s_of_t(T + H, table) - s_of_t(T, table)
    allow = (1.0 + H * H) / T
    return [
        WindowStat(*vals)
        for vals in zip(T.tolist(), H.tolist(), count.tolist(), main.tolist(), dev.tolist(),
                        ratio.tolist(), sdiff.tolist(), allow.tolist())
    ]


# ------------------------------------------------------------------ S(t) search


@dataclass(frozen=True)
class Theorem2Record:
    t: float
    s_t: float
    h_found: float        # first h with S(t+h) <= 1
    s_at_h: float
    h_found_lower: float  # first h with S(t+h) >= -1
    s_at_h_lower: float
    s_bound_check: bool

    CSV_HEADER = ("t", "s_t", "h_found", "s_at_h", "h_found_lower", "s_at_h_lower",
                  "s_bound_check")

    def row(self):
        return (self.t, self.s_t, self.h_found, self.s_at_h, self.h_found_lower,
                self.s_at_h_lower, self.s_bound_check)


def _reconstruct(table, t, h):
    # S(t) = S(t+h) - [N(t+h) - N(t) - (theta(t+h) - theta(t))/pi]
    dev = (count_N(t + h, table) - count_N(t, table)
           - (rs_theta(t + h) - rs_theta(t)) / math.pi)
    return s_of_t(t + h, table) - dev


def theorem2_deduce(table: ZeroTable, t, step_fraction=0.125):
    """Search u in [t, t + log^2 t] for S(u) <= 1 and for S(u) >= -1.

    The grid step is ``step_fraction`` times the mean gap 2 pi / log t. The
    record also confirms that S(t) is reproduced from S(t+h) and the window
    count at the found h (for both signs).
    """
    if t < 10:
        raise DomainError("theorem2_deduce needs t >= 10")
    span = math.log(t) ** 2
    table.check_range(t, t + span)
    step = step_fraction * TWO_PI / math.log(t)
    n = int(math.floor(span / step))
    u = t + step * np.arange(n + 1)
    s = s_of_t(u, table)
    hits_up = np.flatnonzero(s <= 1.0)
    hits_lo = np.flatnonzero(s >= -1.0)
    if hits_up.size == 0 or hits_lo.size == 0:
        which = "S <= 1" if hits_up.size == 0 else "S >= -1"
        raise PropertyViolationError(f"no u in [{t}, {t + span}] with {which}")
    i, j = int(hits_up[0]), int(hits_lo[0])
    h_up, h_lo = float(u[i] - t), float(u[j] - t)
    s_t = float(s[0])
    ok = True
    for h in (h_up, h_lo):
        ok &= abs(_reconstruct(table, t, h) - s_t) <= 1e-9
    return Theorem2Record(float(t), s_t, h_up, float(s[i]), h_lo, float(s[j]), bool(ok))


# ------------------------------------------------------------------ gaps


@dataclass(frozen=True)
class GapStat:
    gamma: float
    gamma_next: float
    gap: float
    bound: float
    ratio: float

    CSV_HEADER = ("gamma", "gamma_next", "gap", "bound", "ratio")

    def row(self):
        return (self.gamma, self.gamma_next, self.gap, self.bound, self.ratio)


class GapScan:
    """Consecutive-gap statistics held as arrays; indexing yields GapStat."""

    def __init__(self, ordinates):
        g = np.asarray(ordinates, dtype=float)
        self.gamma = g[:-1]
        self.gamma_next = g[1:]
        self.gap = self.gamma_next - self.gamma
        self.bound = math.pi / np.log(np.log(self.gamma))
        self.ratio = self.gap / self.bound

    def __len__(self):
        return int(self.gap.size)

    def __getitem__(self, i):
        return GapStat(float(self.gamma[i]), float(self.gamma_next[i]), float(self.gap[i]),
                       float(self.bound[i]), float(self.ratio[i]))

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    def rows(self):
        return zip(self.gamma.tolist(), self.gamma_next.tolist(), self.gap.tolist(),
                   self.bound.tolist(), self.ratio.tolist())

    def summary(self):
        if not len(self):
            return {"gaps": 0}
        k = int(np.argmax(self.ratio))
        m = int(np.argmin(self.gap))
        return {
            "gaps": len(self),
            "max_ratio": float(self.ratio[k]),
            "max_ratio_at": float(self.gamma[k]),
            "max_gap": float(self.gap.max()),
            "min_gap": float(self.gap[m]),
            "min_gap_at": float(self.gamma[m]),
        }


def gap_scan(table: ZeroTable, t_lo=None, t_hi=None):
    """Gaps between consecutive stored ordinates in [t_lo, t_hi]."""
    g = table.ordinates
    lo = -np.inf if t_lo is None else t_lo
    hi = np.inf if t_hi is None else t_hi
    return GapScan(g[(g >= lo) & (g <= hi)])


# ------------------------------------------------------------------ multiplicity


def multiplicity_window(gamma):
    """Window length h = 1/(log gamma)^2 used around an ordinate.

    Any h = o(1/loglog gamma) suffices for the deduction; this rate keeps
    h/2 below the closest neighbouring ordinate for every zero under 1e6.
    """
    gamma = np.asarray(gamma, dtype=float)
    return 1.0 / np.log(gamma) ** 2


def multiplicity_bound(table: ZeroTable, gamma, h=None):
    """Upper bound N(gamma + h/2) - N(gamma - h/2) for the multiplicity of gamma."""
    gamma = float(gamma)
    idx = np.searchsorted(table.ordinates, gamma)
    if idx >= len(table) or table.ordinates[idx] != gamma:
        raise DomainError(f"{gamma!r} is not a stored ordinate")
    if h is None:
        h = float(multiplicity_window(gamma))
    n = count_N(gamma + 0.5 * h, table) - count_N(gamma - 0.5 * h, table)
    return int(math.ceil(n))


def multiplicity_scan(table: ZeroTable, h=None):
    """(gamma, h, bound, ratio) arrays for every stored ordinate.

    ``ratio`` compares the bound with (1/2) log gamma / log log gamma.
    """
    g = table.ordinates
    hw = multiplicity_window(g) if h is None else np.full(g.shape, float(h))
    lo_t = np.maximum(g - 0.5 * hw, table.lower_limit())
    hi_t = np.minimum(g + 0.5 * hw, table.t_max)
    n = count_N(hi_t, table) - count_N(lo_t, table)
    bound = np.ceil(n).astype(np.int64)
    return g, hw, bound, bound / leading_bound(g)


# ------------------------------------------------------------------ S extrema


@dataclass(frozen=True)
class SExtrema:
    sup_s: float
    inf_s: float
    argmax: float
    argmin: float
    max_ratio_to_theorem2: float

    def summary(self):
        return {
            "sup_s": self.sup_s,
            "argmax": self.argmax,
            "inf_s": self.inf_s,
            "argmin": self.argmin,
            "max_ratio_to_theorem2": self.max_ratio_to_theorem2,
        }


def _theta_over_pi(x):
    return rs_theta(x) / math.pi if x.size else np.zeros(0)


def s_extrema_scan(table: ZeroTable, t_lo, t_hi):
    """Exact sup and inf of S on [t_lo, t_hi].

    S decreases between ordinates and jumps up at each one, so the candidates
    are the right limits S(gamma+), the left limits S(gamma-) and the two
    endpoints. One-sided values come from integer counts, not from limits.
    """
    if not 10 <= t_lo < t_hi:
        raise DomainError("s_extrema_scan needs 10 <= t_lo < t_hi")
    table.check_range(t_lo, t_hi)
    g = table.ordinates
    # right limits exist inside [t_lo, t_hi) and left limits inside (t_lo, t_hi]
    g_r = g[(g >= t_lo) & (g < t_hi)]
    g_l = g[(g > t_lo) & (g <= t_hi)]
    upto = table.count_offset + np.searchsorted(g, g_r, side="right")
    below = table.count_offset + np.searchsorted(g, g_l, side="left")
    right = upto - 1.0 - _theta_over_pi(g_r)
    left = below - 1.0 - _theta_over_pi(g_l)
    ends = np.array([t_lo, t_hi], dtype=float)
    s_ends = s_of_t(ends, table)
    pts = np.concatenate([g_r, g_l, ends])
    vals = np.concatenate([right, left, s_ends])
    k_max = int(np.argmax(vals))
    k_min = int(np.argmin(vals))
    ratio = float(np.max(np.abs(vals) / leading_bound(pts)))
    return SExtrema(float(vals[k_max]), float(vals[k_min]), float(pts[k_max]),
                    float(pts[k_min]), ratio)
