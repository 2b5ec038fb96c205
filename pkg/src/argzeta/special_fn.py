"""Scalar special functions on the critical line.

Riemann-Siegel theta, the Hardy Z-function, and the digamma/trigamma values
needed by the explicit formula and the Beurling function. Everything here
works elementwise on numpy arrays and returns a Python float for scalar input.
"""
from __future__ import annotations

import cmath
import math

import numpy as np

from ._rs_coeffs import RS_COEFFS

__all__ = [
    "rs_theta",
    "theta_any",
    "hardy_z",
    "zeta_critical",
    "digamma",
    "trigamma",
    "digamma_re_quarter",
    "RS_CROSSOVER",
]

TWO_PI = 2.0 * math.pi
LOG_PI = math.log(math.pi)

# Below this height Z is evaluated by Euler-Maclaurin summation.
RS_CROSSOVER = 400.0

# theta(t) ~ t/2 log(t/2pi) - t/2 - pi/8 + sum c_k / t^(2k-1)
_THETA_SERIES = (
    1.0 / 48.0,
    7.0 / 5760.0,
    31.0 / 80640.0,
    127.0 / 430080.0,
    511.0 / 1216512.0,
)
# antiderivative of the correction terms above (see theta_integral)

# B_{2k} / (2k (2k-1)) for the Stirling series of log Gamma
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)
# B_{2k} / (2k) for the digamma asymptotic series
_DIGAMMA = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
    -3617.0 / 8160.0,
)
# B_{2k} for the trigamma asymptotic series
_TRIGAMMA = (
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
)
# B_{2k}/(2k)! for Euler-Maclaurin
_EM_BERNOULLI = tuple(
    float(b)
    for b in (
        1 / 12,
        -1 / 720,
        1 / 30240,
        -1 / 1209600,
        1 / 47900160,
        -691 / 1307674368000,
        1 / 74724249600,
        -3617 / 10670622842880000,
        43867 / 5109094217170944000,
        -174611 / 802857662698291200000,
        77683 / 14101100039391805440000,
        -236364091 / 1693824136731743669452800000,
    )
)

_ASYMPTOTIC_RADIUS = 10.0


def _out(x, scalar):
    if scalar:
        return x.item()
    return x


def _theta_series(t):
    inv = 1.0 / t
    inv2 = inv * inv
    corr = np.zeros_like(t)
    for c in reversed(_THETA_SERIES):
        corr = corr * inv2 + c
    corr *= inv
    return 0.5 * t * np.log(t / TWO_PI) - 0.5 * t - math.pi / 8.0 + corr


def _shift_to_asymptotic(z):
    """Number of unit shifts moving every z to |z| >= 10."""
    need = np.maximum(0.0, np.ceil(_ASYMPTOTIC_RADIUS - np.abs(z)))
    return need.astype(np.int64)


def _im_loggamma(z):
    # continuous branch of Im log Gamma(z) for Re z > 0
    shifts = _shift_to_asymptotic(z)
    acc = np.zeros(z.shape)
    w = z.copy()
    for _ in range(int(shifts.max(initial=0))):
        mask = shifts > 0
        acc = acc + np.where(mask, np.angle(w), 0.0)
        w = np.where(mask, w + 1.0, w)
        shifts = shifts - 1
    inv = 1.0 / w
    inv2 = inv * inv
    series = np.zeros_like(w)
    for c in reversed(_STIRLING):
        series = series * inv2 + c
    series *= inv
    lg = (w - 0.5) * np.log(w) - w + 0.5 * math.log(TWO_PI) + series
    return lg.imag - acc


def theta_any(t):
    """Riemann-Siegel theta for any real t >= 0 via shifted Stirling.

    Slower than :func:`rs_theta`; used for heights below the asymptotic range.
    """
    scalar = np.ndim(t) == 0
    t = np.atleast_1d(np.asarray(t, dtype=float))
    z = 0.25 + 0.5j * np.abs(t)
    theta = _im_loggamma(z) - 0.5 * np.abs(t) * LOG_PI
    return _out(np.sign(t) * theta, scalar)


def rs_theta(t):
    """Riemann-Siegel theta function theta(t).

    theta(t) = Im log Gamma(1/4 + it/2) - (t/2) log pi, so that
    N(t) = theta(t)/pi + 1 + S(t).

    For t >= 10 the asymptotic expansion with five correction terms is used
    (truncation error below 1e-13). On [2, 10) the value comes from Stirling's
    series after upward recurrence.

    Raises
    ------
    ValueError
        If any t < 2.
    """
    scalar = np.ndim(t) == 0
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(~(t >= 2.0)):
        raise ValueError("rs_theta requires t >= 2")
    out = np.empty_like(t)
    big = t >= 10.0
    out[big] = _theta_series(t[big])
    if not big.all():
        out[~big] = theta_any(t[~big])
    return _out(out, scalar)


def theta_integral(t):
    """Antiderivative of the asymptotic theta expansion, for t >= 10.

    Differences of this function integrate rs_theta exactly (up to the
    truncation of the expansion).
    """
    scalar = np.ndim(t) == 0
    t = np.atleast_1d(np.asarray(t, dtype=float))
    main = 0.25 * t * t * np.log(t / TWO_PI) - 0.375 * t * t - math.pi * t / 8.0
    corr = _THETA_SERIES[0] * np.log(t)
    inv2 = 1.0 / (t * t)
    power = inv2
    for k, c in enumerate(_THETA_SERIES[1:], start=1):
        corr = corr - c / (2 * k) * power
        power = power * inv2
    return _out(main + corr, scalar)


def digamma(z):
    """Complex digamma psi(z) for Re z > 0 (upward recurrence + asymptotics)."""
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    shifts = _shift_to_asymptotic(z)
    acc = np.zeros(z.shape, dtype=complex)
    w = z.copy()
    for _ in range(int(shifts.max(initial=0))):
        mask = shifts > 0
        acc = acc + np.where(mask, 1.0 / w, 0.0)
        w = np.where(mask, w + 1.0, w)
        shifts = shifts - 1
    inv2 = 1.0 / (w * w)
    series = np.zeros_like(w)
    for c in reversed(_DIGAMMA):
        series = series * inv2 + c
    series *= inv2
    return _out(np.log(w) - 0.5 / w - series - acc, scalar)


def trigamma(z):
    """Complex trigamma psi'(z) for Re z > 0 (upward recurrence + asymptotics)."""
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    shifts = _shift_to_asymptotic(z)
    acc = np.zeros(z.shape, dtype=complex)
    w = z.copy()
    for _ in range(int(shifts.max(initial=0))):
        mask = shifts > 0
        acc = acc + np.where(mask, 1.0 / (w * w), 0.0)
        w = np.where(mask, w + 1.0, w)
        shifts = shifts - 1
    return _out(acc + _trigamma_asymptotic(w), scalar)


def _trigamma_asymptotic(w):
    inv = 1.0 / w
    inv2 = inv * inv
    series = np.zeros_like(w)
    for c in reversed(_TRIGAMMA):
        series = series * inv2 + c
    return inv + 0.5 * inv2 + series * inv2 * inv


def digamma_re_quarter(u):
    """Re psi(1/4 + iu/2), the archimedean weight of the explicit formula.

    Even in u; absolute error below 1e-13 for all real u.
    """
    scalar = np.ndim(u) == 0
    u = np.atleast_1d(np.asarray(u, dtype=float))
    val = digamma(0.25 + 0.5j * np.abs(u))
    return _out(np.real(val), scalar)


def zeta_critical(t, terms=None):
    """zeta(1/2 + it) by Euler-Maclaurin summation.

    Practical for moderate t only (cost grows linearly in t).
    """
    scalar = np.ndim(t) == 0
    t = np.atleast_1d(np.asarray(t, dtype=float))
    s = 0.5 + 1j * t
    n_terms = terms or int(np.max(np.abs(t), initial=0.0) / 2.0) + 20
    total = np.zeros(t.shape, dtype=complex)
    comp = np.zeros(t.shape, dtype=complex)
    for n in range(1, n_terms):
        y = np.exp(-s * math.log(n)) - comp
        tmp = total + y
        comp = (tmp - total) - y
        total = tmp
    big_n = float(n_terms)
    n_pow = np.exp(-s * math.log(big_n))
    total = total + big_n * n_pow / (s - 1.0) + 0.5 * n_pow
    # tail: sum_k B_2k/(2k)! s(s+1)...(s+2k-2) N^{-s-2k+1}
    rising = s.copy()
    power = n_pow / big_n
    for k, b in enumerate(_EM_BERNOULLI, start=1):
        total = total + b * rising * power
        rising = rising * (s + 2 * k - 1) * (s + 2 * k)
        power = power / (big_n * big_n)
    return _out(total, scalar)


def _rs_remainder(t, n_main):
    a = np.sqrt(t / TWO_PI)
    x = a - n_main - 0.5
    x4 = (TWO_PI / t) ** 0.25
    step = np.sqrt(TWO_PI / t)
    total = np.zeros_like(t)
    scale = np.ones_like(t)
    for coeffs in RS_COEFFS:
        ck = np.zeros_like(t)
        for c in reversed(coeffs):
            ck = ck * x + c
        total = total + ck * scale
        scale = scale * step
    sign = np.where(n_main % 2 == 1, 1.0, -1.0)
    return sign * x4 * total


_BLOCK = 1 << 21


def _rs_main(t, n_main):
    out = np.empty_like(t)
    theta = _theta_series(t)
    for n in np.unique(n_main):
        idx = np.nonzero(n_main == n)[0]
        ns = np.arange(1, n + 1, dtype=float)
        logn = np.log(ns)
        weight = 2.0 / np.sqrt(ns)
        step = max(1, _BLOCK // int(n))
        for lo in range(0, idx.size, step):
            sel = idx[lo : lo + step]
            phase = theta[sel, None] - t[sel, None] * logn[None, :]
            out[sel] = np.cos(phase) @ weight
    return out


def hardy_z(t):
    """Hardy Z-function Z(t) = exp(i theta(t)) zeta(1/2 + it), real for real t.

    Euler-Maclaurin below ``RS_CROSSOVER``; above it the Riemann-Siegel main
    sum plus the corrections C0..C4. Z is even, so negative t is accepted.
    """
    scalar = np.ndim(t) == 0
    t = np.abs(np.atleast_1d(np.asarray(t, dtype=float)))
    out = np.empty_like(t)
    low = t < RS_CROSSOVER
    if low.any():
        tl = t[low]
        zeta = zeta_critical(tl)
        out[low] = np.real(np.exp(1j * theta_any(tl)) * zeta)
    if (~low).any():
        th = t[~low]
        n_main = np.floor(np.sqrt(th / TWO_PI)).astype(np.int64)
        out[~low] = _rs_main(th, n_main) + _rs_remainder(th, n_main)
    return _out(out, scalar)


def digamma_re_quarter_scalar(u):
    """Scalar fast path of :func:`digamma_re_quarter` for quadrature callbacks."""
    z = complex(0.25, 0.5 * abs(u))
    acc = 0.0
    while abs(z) < _ASYMPTOTIC_RADIUS:
        acc += (1.0 / z).real
        z += 1.0
    inv2 = 1.0 / (z * z)
    series = 0.0
    for c in reversed(_DIGAMMA):
        series = series * inv2 + c
    series *= inv2
    return (cmath.log(z) - 0.5 / z - series).real - acc
