"""Zero tables: isolation, import, persistence, and the counting functions.

N(t) counts ordinates in (0, t], with half weight for an ordinate equal to t.
S(t) = N(t) - 1 - theta(t)/pi and S1(t) is its integral from 0.
"""
from __future__ import annotations

import csv
import math
import struct
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import integrate

from .errors import CoverageError, DomainError, UnresolvedIntervalError, ZeroTableParseError
from .special_fn import hardy_z, rs_theta, theta_any, theta_integral

__all__ = [
    "ZeroTable",
    "SSample",
    "find_zeros",
    "import_zeros",
    "save_table",
    "load_table",
    "write_csv_mirror",
    "count_N",
    "s_of_t",
    "s1_integral",
    "s_sample",
    "window_s_integrals",
    "merge_tables",
]

TWO_PI = 2.0 * math.pi
MAGIC = b"ZTAB1"
_HEADER = struct.Struct("<5sBBxddQq")
_SOURCES = ("computed", "imported")

S_CORRIDOR = 2.5
CLOSE_PAIR = 1e-7
ROOT_XTOL = 1e-10
MAX_HEIGHT = 1e6
MAX_ROUNDS = 64


@dataclass(frozen=True)
class ZeroTable:
    """Sorted zero ordinates covering the height range (t_min, t_max].

    ``count_offset`` is the number of zeros at or below ``t_min`` that are not
    stored; it is 0 for a table that starts from the first zero.
    ``close_pairs`` lists ordinates closer than 1e-7 to their successor
    (flagged, never merged).
    """

    ordinates: np.ndarray
    t_min: float
    t_max: float
    source: str = "computed"
    verified: bool = False
    count_offset: int = 0
    close_pairs: tuple = field(default=(), compare=False)

    def __post_init__(self):
        arr = np.array(self.ordinates, dtype=np.float64)
        arr.setflags(write=False)
        object.__setattr__(self, "ordinates", arr)
        if self.source not in _SOURCES:
            raise ValueError(f"unknown source {self.source!r}")
        if arr.size:
            if np.any(np.diff(arr) <= 0):
                raise ValueError("ordinates must be strictly increasing")
            if arr[0] <= self.t_min or arr[-1] > self.t_max:
                raise ValueError("ordinates must lie in (t_min, t_max]")
        gaps = np.diff(arr)
        close = tuple(float(g) for g in arr[:-1][gaps < CLOSE_PAIR])
        object.__setattr__(self, "close_pairs", close)

    def __len__(self):
        return int(self.ordinates.size)

    @property
    def covers_from_zero(self):
        return self.count_offset == 0

    def lower_limit(self):
        """Smallest height from which N(t) is known."""
        return 0.0 if self.count_offset == 0 else self.t_min

    def check_range(self, lo, hi=None):
        hi = lo if hi is None else hi
        if lo < self.lower_limit() or hi > self.t_max:
            raise CoverageError(
                f"range [{lo}, {hi}] outside table coverage "
                f"[{self.lower_limit()}, {self.t_max}]"
            )

    def __eq__(self, other):
        if not isinstance(other, ZeroTable):
            return NotImplemented
        return (
            self.t_min == other.t_min
            and self.t_max == other.t_max
            and self.source == other.source
            and self.verified == other.verified
            and self.count_offset == other.count_offset
            and np.array_equal(self.ordinates, other.ordinates)
        )

    __hash__ = None


@dataclass(frozen=True)
class SSample:
    t: float
    n_of_t: float
    theta: float
    s: float
    s1: float

    CSV_HEADER = ("t", "n_of_t", "theta", "s", "s1")

    def row(self):
        return (self.t, self.n_of_t, self.theta, self.s, self.s1)


# ---------------------------------------------------------------- counting


def count_N(t, table):
    """Number of zeros with ordinate in (0, t]; an ordinate equal to t counts 1/2.

    Accepts scalars or arrays.
    """
    scalar = np.ndim(t) == 0
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if t.size:
        table.check_range(float(t.min()), float(t.max()))
    below = np.searchsorted(table.ordinates, t, side="left")
    upto = np.searchsorted(table.ordinates, t, side="right")
    n = table.count_offset + below + 0.5 * (upto - below)
    return n.item() if scalar else n


def s_of_t(t, table):
    """S(t) = N(t) - 1 - theta(t)/pi (requires t >= 2)."""
    return count_N(t, table) - 1.0 - rs_theta(t) / math.pi


def _theta_integral_from_zero(t):
    # integral of theta over [0, t]
    base_hi = min(t, 10.0)
    val, _ = integrate.quad(theta_any, 0.0, base_hi, epsabs=1e-13, epsrel=1e-13, limit=200)
    if t > 10.0:
        val += theta_integral(t) - theta_integral(10.0)
    return val


def s1_integral(t, table):
    """S1(t) = integral of S(u) over [0, t].

    Between consecutive ordinates S(u) = k - 1 - theta(u)/pi, so the integral
    splits into sum_{gamma <= t} (t - gamma) - t - Theta(t)/pi with Theta an
    exact antiderivative of theta (quadrature on [0, 10], series beyond).
    """
    t = float(t)
    if not table.covers_from_zero:
        raise CoverageError("s1_integral needs a table starting from the first zero")
    table.check_range(t)
    g = table.ordinates[: np.searchsorted(table.ordinates, t, side="right")]
    n_part = math.fsum((t - g).tolist())
    return math.fsum([n_part, -t, -_theta_integral_from_zero(t) / math.pi])


def s_sample(t, table):
    theta = rs_theta(t)
    n = count_N(t, table)
    return SSample(float(t), float(n), float(theta), float(n - 1.0 - theta / math.pi),
                   s1_integral(t, table))


def _n_integral(table, a, b):
    """integral of N(u) over [a, b] for arrays a <= b."""
    g = table.ordinates
    csum = np.concatenate(([0.0], np.cumsum(g)))
    ia = np.searchsorted(g, a, side="right")
    ib = np.searchsorted(g, b, side="right")
    k = ib - ia
    inner = k * b - (csum[ib] - csum[ia])
    return (table.count_offset + ia) * (b - a) + inner


def window_s_integrals(table, a, b):
    """integral of S over [a_i, b_i] for windows inside the table (a_i >= 10)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size and float(a.min()) < 10.0:
        raise DomainError("windows must start at t >= 10")
    theta_part = (theta_integral(b) - theta_integral(a)) / math.pi
    return _n_integral(table, a, b) - (b - a) - theta_part


# ---------------------------------------------------------------- isolation


def _grid_step(t_hi):
    return min(0.5, 0.25 * TWO_PI / math.log(max(t_hi, 20.0) / TWO_PI))


def _illinois(a, b, fa, fb, xtol=ROOT_XTOL, max_iter=200):
    """Vectorised Illinois regula falsi on sign-change brackets."""
    a = a.copy()
    b = b.copy()
    fa = fa.copy()
    fb = fb.copy()
    side = np.zeros(a.shape, dtype=np.int8)
    # near 1e6 adjacent doubles are ~1e-10 apart, so allow a few ulps
    tol = np.maximum(xtol, 4.0 * np.spacing(np.abs(b)))
    for it in range(max_iter):
        active = np.nonzero((b - a) > tol)[0]
        if active.size == 0:
            break
        aa, bb, ffa, ffb = a[active], b[active], fa[active], fb[active]
        with np.errstate(divide="ignore", invalid="ignore"):
            c = (aa * ffb - bb * ffa) / (ffb - ffa)
        mid = 0.5 * (aa + bb)
        bad = ~((c > aa) & (c < bb))
        # bisection every 8th pass bounds the worst case
        if it % 8 == 7:
            bad[:] = True
        c = np.where(bad, mid, c)
        fc = hardy_z(c)
        zero = fc == 0.0
        right = (np.sign(fc) == np.sign(ffb)) & ~zero
        left = ~right & ~zero
        s = side[active]
        # replace b
        bb = np.where(right, c, bb)
        ffb = np.where(right, fc, ffb)
        ffa = np.where(right & (s == -1), 0.5 * ffa, ffa)
        # replace a
        aa = np.where(left, c, aa)
        ffa = np.where(left, fc, ffa)
        ffb = np.where(left & (s == 1), 0.5 * ffb, ffb)
        aa = np.where(zero, c, aa)
        bb = np.where(zero, c, bb)
        s = np.where(right, -1, np.where(left, 1, s))
        a[active], b[active], fa[active], fb[active], side[active] = aa, bb, ffa, ffb, s
    stalled = (b - a) > tol
    if stalled.any():
        raise UnresolvedIntervalError(float(a[stalled][0]), float(b[stalled][0]),
                                      "root refinement stalled")
    return 0.5 * (a + b)


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_min(lo, hi, sign, iters=40):
    """Vectorised golden-section minimisation of sign*Z on [lo, hi].

    Stops early for entries where a negative value has been seen.
    """
    lo = lo.copy()
    hi = hi.copy()
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1 = sign * hardy_z(x1)
    f2 = sign * hardy_z(x2)
    for _ in range(iters):
        live = np.nonzero((f1 >= 0) & (f2 >= 0))[0]
        if live.size == 0:
            break
        l, h, a1, a2, g1, g2 = lo[live], hi[live], x1[live], x2[live], f1[live], f2[live]
        left = g1 < g2
        h = np.where(left, a2, h)
        l = np.where(left, l, a1)
        new = np.where(left, h - _GOLDEN * (h - l), l + _GOLDEN * (h - l))
        fn = sign[live] * hardy_z(new)
        a2n = np.where(left, a1, new)
        g2n = np.where(left, g1, fn)
        a1n = np.where(left, new, a2)
        g1n = np.where(left, fn, g2)
        lo[live], hi[live] = l, h
        x1[live], x2[live], f1[live], f2[live] = a1n, a2n, g1n, g2n
    xm = np.where(f1 < f2, x1, x2)
    return xm, np.minimum(f1, f2)


def _brackets_from_grid(x, z):
    """Sign-change brackets plus candidate hidden pairs from a sampled Z."""
    s = np.sign(z)
    s[s == 0] = 1.0
    change = np.nonzero(s[:-1] != s[1:])[0]
    lo = [x[change]]
    hi = [x[change + 1]]
    flo = [z[change]]
    fhi = [z[change + 1]]
    az = np.abs(z)
    same = (s[:-2] == s[1:-1]) & (s[1:-1] == s[2:])
    dip = same & (az[1:-1] < az[:-2]) & (az[1:-1] <= az[2:])
    cand = np.nonzero(dip)[0] + 1
    if cand.size:
        sign = s[cand]
        xm, fm = _golden_min(x[cand - 1], x[cand + 1], sign)
        hit = fm < 0
        if hit.any():
            c = cand[hit]
            m = xm[hit]
            zm = hardy_z(m)
            lo += [x[c - 1], m]
            hi += [m, x[c + 1]]
            flo += [z[c - 1], zm]
            fhi += [zm, z[c + 1]]
    lo = np.concatenate(lo)
    hi = np.concatenate(hi)
    flo = np.concatenate(flo)
    fhi = np.concatenate(fhi)
    order = np.argsort(lo, kind="stable")
    return lo[order], hi[order], flo[order], fhi[order]


def _isolate_segment(args):
    t0, step, i_lo, i_hi, t_cap = args
    x = t0 + step * np.arange(i_lo, i_hi + 1, dtype=float)
    x = np.minimum(x, t_cap)
    x = np.unique(x)
    z = hardy_z(x)
    lo, hi, flo, fhi = _brackets_from_grid(x, z)
    if lo.size == 0:
        return np.empty(0)
    return _illinois(lo, hi, flo, fhi)


def _isolate(t_lo, t_hi, step, workers=1, segment=4000.0):
    n_steps = int(math.ceil((t_hi - t_lo) / step))
    per = max(8, int(segment / step))
    jobs = [
        (t_lo, step, i, min(i + per, n_steps), t_hi)
        for i in range(0, n_steps, per)
    ]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_isolate_segment, jobs))
    else:
        parts = [_isolate_segment(j) for j in jobs]
    roots = np.concatenate(parts) if parts else np.empty(0)
    roots = np.unique(roots)
    return roots[(roots > t_lo) & (roots <= t_hi)]


def _window_edges(t_lo, t_hi):
    edges = [t_lo]
    while True:
        w = math.log(edges[-1]) ** 2
        if edges[-1] + w > t_hi:
            break
        edges.append(edges[-1] + w)
    return np.array(edges)


def _estimate_offset(roots, t_lo, t_hi):
    """N(t_lo) chosen so that S averages closest to zero on the first window."""
    if t_lo < 14.0:
        return 0
    w = min(math.log(t_lo) ** 2, t_hi - t_lo)
    probe = ZeroTable(roots, t_lo, t_hi, count_offset=0)
    raw = float(window_s_integrals(probe, [t_lo], [t_lo + w])[0])
    # each unit of offset shifts the window integral by w
    return int(round(-raw / w))


def _failing_windows(table, t_lo, t_hi):
    edges = _window_edges(t_lo, t_hi)
    if edges.size < 2:
        return []
    a, b = edges[:-1], edges[1:]
    vals = window_s_integrals(table, a, b)
    bad = np.abs(vals) > 3.0 * np.log(a)
    samples = np.linspace(t_lo, t_hi, max(2, int((t_hi - t_lo) * 2)))
    s = s_of_t(np.maximum(samples, 10.0), table)
    out = [(float(a[i]), float(b[i])) for i in np.nonzero(bad)[0]]
    for i in np.nonzero(np.abs(s) >= S_CORRIDOR)[0]:
        out.append((float(samples[i]) - 10.0, float(samples[i]) + 10.0))
    return sorted(out)


def find_zeros(t_lo, t_hi, reference=None, workers=1, max_refine=4):
    """Locate every zero ordinate in (t_lo, t_hi].

    Z is sampled on a grid of spacing (1/4) 2pi/log(t_hi/2pi); sign changes
    and same-sign dips of |Z| are refined to 1e-10. The count is then verified
    either against ``reference`` (a ZeroTable overlapping the range) or by the
    windowed S-integral corridor |int_t^{t+log^2 t} S| <= 3 log t. The lowest
    failing cluster is rescanned on a grid 4x finer per attempt; a location
    still failing after ``max_refine`` attempts raises UnresolvedIntervalError.
    """
    t_lo = float(t_lo)
    t_hi = float(t_hi)
    if not (10.0 <= t_lo < t_hi <= MAX_HEIGHT):
        raise DomainError("find_zeros requires 10 <= t_lo < t_hi <= 1e6")
    step = _grid_step(t_hi)
    # isolate a little past t_hi so that a miss near the top still moves
    # a whole verification window
    ext_hi = t_hi + math.log(t_hi) ** 2
    roots = _isolate(t_lo, ext_hi, step, workers=workers)

    if reference is not None:
        offset = _offset_from_reference(reference, t_lo)
    else:
        offset = _estimate_offset(roots, t_lo, ext_hi)

    verified = False
    attempts = {}
    for _ in range(MAX_ROUNDS):
        work = ZeroTable(roots, t_lo, ext_hi, count_offset=offset)
        if reference is not None:
            problems = _compare_reference(work, reference, t_lo, t_hi)
        else:
            problems = _failing_windows(work, t_lo, ext_hi)
        if not problems:
            verified = True
            break
        # a lost or spurious zero shifts S for every window above it, so only
        # the lowest failing cluster is rescanned in each round
        lo, hi = _lowest_cluster(problems)
        key = round(lo, 3)
        attempts[key] = attempts.get(key, 0) + 1
        if attempts[key] > max_refine:
            break
        roots = _rescan(roots, lo, hi, step / 4.0 ** attempts[key], t_lo, ext_hi)
        if reference is None:
            offset = _estimate_offset(roots, t_lo, ext_hi)
    if not verified:
        lo, hi = problems[0]
        raise UnresolvedIntervalError(lo, hi, "zero count does not verify")

    keep = roots[roots <= t_hi]
    return ZeroTable(keep, t_lo, t_hi, source="computed", verified=True, count_offset=offset)


def _lowest_cluster(problems):
    """Union of the problem spans overlapping the lowest one, capped at three windows."""
    problems = sorted(problems)
    lo, hi = problems[0]
    for a, b in problems[1:]:
        if a > hi:
            break
        hi = max(hi, b)
    w = math.log(max(lo, 10.0)) ** 2
    return lo - w, min(hi, lo + 2.0 * w)


def _rescan(roots, lo, hi, fine, t_lo, t_hi):
    lo = max(t_lo, lo)
    hi = min(t_hi, hi)
    inside = (roots > lo) & (roots <= hi)
    roots = np.concatenate([roots[~inside], _isolate(lo, hi, fine)])
    return np.unique(roots)


def _offset_from_reference(reference, t_lo):
    if t_lo < reference.lower_limit() or t_lo > reference.t_max:
        raise CoverageError("reference table does not cover t_lo")
    return int(count_N(t_lo, reference))


def _compare_reference(work, reference, t_lo, t_hi):
    lo = max(t_lo, reference.lower_limit())
    hi = min(t_hi, reference.t_max)
    if hi <= lo:
        return []
    mine = work.ordinates[(work.ordinates > lo) & (work.ordinates <= hi)]
    ref = reference.ordinates[(reference.ordinates > lo) & (reference.ordinates <= hi)]
    if mine.size == ref.size and np.all(np.abs(mine - ref) <= 1e-6):
        return []
    if mine.size == ref.size:
        i = int(np.argmax(np.abs(mine - ref)))
        return [(float(ref[i]) - 1.0, float(ref[i]) + 1.0)]
    # locate the first disagreement
    n = min(mine.size, ref.size)
    diff = np.nonzero(np.abs(mine[:n] - ref[:n]) > 1e-6)[0]
    at = float(ref[diff[0]] if diff.size else (ref[n - 1] if n else lo))
    return [(at - 2.0, at + 2.0)]


def merge_tables(a, b):
    """Union of two adjacent or overlapping tables (the lower one first)."""
    if b.t_min > a.t_max:
        raise CoverageError("tables are not adjacent")
    upper = b.ordinates[b.ordinates > a.t_max]
    return ZeroTable(
        np.concatenate([a.ordinates, upper]),
        a.t_min,
        max(a.t_max, b.t_max),
        source=a.source if a.source == b.source else "imported",
        verified=a.verified and b.verified,
        count_offset=a.count_offset,
    )


# ---------------------------------------------------------------- file formats


def import_zeros(path, skip=0, first_index=1):
    """Read a plain-text table with one decimal ordinate per line.

    ``skip`` header lines are ignored; ``first_index`` is the 1-based index of
    the first ordinate in the file (1 for a table starting at the first zero).
    """
    values = []
    with open(path, "r", encoding="ascii") as fh:
        for lineno, line in enumerate(fh, start=1):
            if lineno <= skip:
                continue
            token = line.strip()
            if not token:
                continue
            try:
                v = float(token)
            except ValueError:
                raise ZeroTableParseError(f"non-numeric token {token!r}", lineno) from None
            if not math.isfinite(v) or v <= 0:
                raise ZeroTableParseError(f"invalid ordinate {token!r}", lineno)
            if values and v <= values[-1]:
                raise ZeroTableParseError("ordinates not strictly increasing", lineno)
            values.append(v)
    if not values:
        raise ZeroTableParseError("empty table")
    offset = first_index - 1
    t_min = 0.0 if offset == 0 else math.nextafter(values[0], 0.0)
    return ZeroTable(np.array(values), t_min, values[-1], source="imported",
                     verified=False, count_offset=offset)


def save_table(table, path):
    """Write the ZTAB1 binary cache.

    Layout (little-endian): 5-byte magic ``ZTAB1``, uint8 source
    (0 computed, 1 imported), uint8 verified flag, one pad byte, float64
    t_min, float64 t_max, uint64 count, int64 count_offset, then ``count``
    float64 ordinates.
    """
    header = _HEADER.pack(
        MAGIC,
        _SOURCES.index(table.source),
        int(bool(table.verified)),
        float(table.t_min),
        float(table.t_max),
        len(table),
        int(table.count_offset),
    )
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(np.asarray(table.ordinates, dtype="<f8").tobytes())


def load_table(path):
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size or data[:5] != MAGIC:
        raise ZeroTableParseError(f"{path}: not a ZTAB1 file")
    magic, source, verified, t_min, t_max, count, offset = _HEADER.unpack_from(data)
    body = data[_HEADER.size:]
    if len(body) != 8 * count:
        raise ZeroTableParseError(f"{path}: truncated ZTAB1 body")
    if source >= len(_SOURCES):
        raise ZeroTableParseError(f"{path}: bad source code {source}")
    ords = np.frombuffer(body, dtype="<f8").astype(np.float64)
    return ZeroTable(ords, t_min, t_max, source=_SOURCES[source], verified=bool(verified),
                     count_offset=offset)


def write_csv_mirror(table, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["index", "ordinate"])
        for i, g in enumerate(table.ordinates, start=table.count_offset + 1):
            w.writerow([i, f"{g:.17g}"])
