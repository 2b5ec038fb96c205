"""Beurling-Selberg majorant and minorant of the indicator of [-L, L].

With Beurling's entire majorant B of sgn(x),

    F+(u) =  (B(delta (u + L)) + B(delta (L - u))) / 2
    F-(u) = -(B(-delta (u + L)) + B(-delta (L - u))) / 2

are even entire functions of exponential type 2 pi delta with
F- <= chi_[-L, L] <= F+ on the real line, masses 2L +- 1/delta, and Fourier
transforms supported in [-delta, delta].
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy import integrate

from .errors import ConsistencyError, DomainError
from .quadrature import gk15
from .special_fn import trigamma

__all__ = [
    "SelbergParams",
    "beurling_b",
    "extremal_eval",
    "extremal_eval_complex",
    "mass",
    "mass_quadrature",
    "transform_hat",
    "transform_hat_closed",
    "transform_hat_quadrature",
    "tail_decomposition",
    "tail_split",
    "C_III",
    "C_IV",
]

PI2 = math.pi * math.pi

# Envelope constants. tools/measure_constants.py over L in {0.5, 1, 5, 20},
# delta in {1, 1.5, 2, 4} gives sup 1.216 and 0.0994; for |u| -> inf the
# second quantity tends to at most 1/pi^2 = 0.1013.
#   |F(w)| <= C_III exp(2 pi delta |Im w|)          (|Im w| <= 1)
#   |F(u)| delta^2 (|u| - L)^2 <= C_IV               (|u| > L + 1/delta)
C_III = 1.25
C_IV = 0.12


@dataclass(frozen=True)
class SelbergParams:
    """Half-length ``L``, band limit ``delta`` and ``sign`` ('plus' or 'minus')."""

    L: float
    delta: float
    sign: str = "plus"

    def __post_init__(self):
        if not (self.L > 0 and math.isfinite(self.L)):
            raise DomainError(f"L must be positive, got {self.L!r}")
        if not (self.delta > 0 and math.isfinite(self.delta)):
            raise DomainError(f"delta must be positive, got {self.delta!r}")
        if self.sign not in ("plus", "minus"):
            raise DomainError(f"sign must be 'plus' or 'minus', got {self.sign!r}")

    @property
    def sigma(self):
        return 1.0 if self.sign == "plus" else -1.0

    @property
    def closed_mass(self):
        return 2.0 * self.L + self.sigma / self.delta

    def with_sign(self, sign):
        return replace(self, sign=sign)

    def check_regime(self, t):
        """Enforce delta >= 1 and L <= 2 sqrt(t) for explicit-formula work."""
        if self.delta < 1.0:
            raise DomainError(f"delta = {self.delta} < 1")
        if self.L > 2.0 * math.sqrt(t):
            raise DomainError(f"L = {self.L} exceeds 2 sqrt(t) = {2.0 * math.sqrt(t)}")


# ------------------------------------------------------------------ Beurling


_G_SERIES = (1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0,
             -691.0 / 2730.0, 7.0 / 6.0, -3617.0 / 510.0)


def _g(w):
    """2/w - 2 psi'(1 + w) for Re w >= 0, without cancellation at large |w|."""
    out = np.empty_like(w)
    big = np.abs(w) >= 10.0
    if big.any():
        wb = w[big]
        inv = 1.0 / wb
        inv2 = inv * inv
        series = np.zeros_like(wb)
        for c in reversed(_G_SERIES):
            series = series * inv2 + c
        out[big] = inv2 - 2.0 * series * inv2 * inv
    small = ~big
    if small.any():
        ws = w[small]
        with np.errstate(divide="ignore", invalid="ignore"):
            out[small] = 2.0 / ws - 2.0 * trigamma(1.0 + ws)
    return out


def _sin_sq(w):
    s = np.sin(math.pi * w)
    return s * s / PI2


def beurling_b(z):
    """Beurling's function B(z).

    B(z) = (sin(pi z)/pi)^2 (sum_{n>=0} (z-n)^-2 - sum_{n>=1} (z+n)^-2 + 2/z),
    evaluated through sum_{n>=1} (z+n)^-2 = psi'(1+z) and the reflection
    B(-w) = -B(w) + 2 (sin(pi w)/(pi w))^2. Interpolates sgn at the integers
    with B(0) = 1. Real input gives real output.
    """
    scalar = np.ndim(z) == 0
    is_real = not np.iscomplexobj(z)
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    neg = z.real < 0
    w = np.where(neg, -z, z)
    origin = w == 0
    w_safe = np.where(origin, 1.0, w)
    s = _sin_sq(w_safe)
    sg = s * _g(w_safe)
    pos_val = 1.0 + sg
    neg_val = -1.0 - sg + 2.0 * s / (w_safe * w_safe)
    out = np.where(neg, neg_val, pos_val)
    out = np.where(origin, 1.0 + 0j, out)
    if is_real:
        out = out.real
    return out.item() if scalar else out


# ------------------------------------------------------------------ F+ / F-


def _extremal(p, w):
    d = p.delta
    if p.sign == "plus":
        return 0.5 * (beurling_b(d * (w + p.L)) + beurling_b(d * (p.L - w)))
    return -0.5 * (beurling_b(-d * (w + p.L)) + beurling_b(-d * (p.L - w)))


def extremal_eval(p, u):
    """F+(u) or F-(u) for real u (scalar or array)."""
    scalar = np.ndim(u) == 0
    u = np.atleast_1d(np.asarray(u, dtype=float))
    val = _extremal(p, u)
    return val.item() if scalar else val


def extremal_eval_complex(p, w, check=True):
    """F(w) at complex w via the same formula.

    With ``check`` the growth bound |F(w)| <= C_III exp(2 pi delta |Im w|)
    is asserted (intended for |Im w| <= 1).
    """
    scalar = np.ndim(w) == 0
    w = np.atleast_1d(np.asarray(w, dtype=complex))
    val = _extremal(p, w)
    if check:
        env = C_III * np.exp(2.0 * math.pi * p.delta * np.abs(w.imag))
        if np.any(np.abs(val) > env):
            i = int(np.argmax(np.abs(val) / env))
            raise ConsistencyError(f"growth bound violated at w={w[i]}: |F|={abs(val[i])}")
    return val.item() if scalar else val


def tail_decomposition(p, u):
    """Amplitudes (A0, Aa, Ab) with F(u) = A0 + Aa cos(2 pi a) + Ab cos(2 pi b).

    Here a = delta (u + L), b = delta (u - L), valid for u > L. The amplitudes
    are smooth and O(1/u^2), which makes Fourier-type tail integrals tractable.
    """
    u = np.asarray(u, dtype=float)
    a = p.delta * (u + p.L)
    b = p.delta * (u - p.L)
    ga = _g(np.atleast_1d(a).astype(complex)).real.reshape(a.shape)
    gb = _g(np.atleast_1d(b).astype(complex)).real.reshape(b.shape)
    k = 1.0 / (4.0 * PI2)
    if p.sign == "plus":
        return (k * (ga - gb + 2.0 / (b * b)), -k * ga, k * (gb - 2.0 / (b * b)))
    return (k * (ga - 2.0 / (a * a) - gb), k * (2.0 / (a * a) - ga), k * gb)


# ------------------------------------------------------------------ transforms


def _fourier_tail(amp, omega, phase, lo):
    """int_lo^inf amp(u) cos(omega u + phase) du and its error estimate."""
    if omega < 0:
        omega, phase = -omega, -phase
    if omega < 1e-12:
        val, err = integrate.quad(amp, lo, np.inf, epsabs=1e-13, epsrel=1e-12, limit=400)
        return math.cos(phase) * val, abs(math.cos(phase)) * err
    total = 0.0
    error = 0.0
    cp, sp = math.cos(phase), math.sin(phase)
    if abs(cp) > 1e-15:
        v, e = integrate.quad(amp, lo, np.inf, weight="cos", wvar=omega, epsabs=1e-13, limlst=200)
        total += cp * v
        error += abs(cp) * e
    if abs(sp) > 1e-15:
        v, e = integrate.quad(amp, lo, np.inf, weight="sin", wvar=omega, epsabs=1e-13, limlst=200)
        total -= sp * v
        error += abs(sp) * e
    return total, error


def _g_scalar(y):
    # _g for real y >= 10, pure Python for use as a quadrature callback
    inv = 1.0 / y
    inv2 = inv * inv
    series = 0.0
    for c in reversed(_G_SERIES):
        series = series * inv2 + c
    return inv2 - 2.0 * series * inv2 * inv


def _tail_amplitudes(p):
    """Scalar callables A0, Aa, Ab of :func:`tail_decomposition` (u >= L + 10/delta)."""
    k = 1.0 / (4.0 * PI2)
    d, L = p.delta, p.L
    plus = p.sign == "plus"

    def a0(u):
        a, b = d * (u + L), d * (u - L)
        if plus:
            return k * (_g_scalar(a) - _g_scalar(b) + 2.0 / (b * b))
        return k * (_g_scalar(a) - 2.0 / (a * a) - _g_scalar(b))

    def aa(u):
        a = d * (u + L)
        return -k * _g_scalar(a) if plus else k * (2.0 / (a * a) - _g_scalar(a))

    def ab(u):
        b = d * (u - L)
        return k * (_g_scalar(b) - 2.0 / (b * b)) if plus else k * _g_scalar(b)

    return a0, aa, ab


def tail_split(p):
    """Abscissa beyond which F is handled through its tail decomposition."""
    return p.L + 20.0 / p.delta


def transform_hat_quadrature(p, x, tol=1e-11):
    """F-hat(x) = int F(u) exp(-2 pi i x u) du by adaptive quadrature.

    Returns (value, error_estimate). The range |u| <= L + 20/delta is
    integrated by adaptive Gauss-Kronrod; beyond it F is split by
    :func:`tail_decomposition` and each oscillatory piece is integrated to
    infinity with QUADPACK's QAWF.
    """
    x = abs(float(x))
    V = tail_split(p)
    w = 2.0 * math.pi * x

    def near(u):
        return extremal_eval(p, u) * np.cos(w * u)

    width = 0.25 / (p.delta + x)
    res = gk15(near, 0.0, V, tol=tol, breakpoints=(p.L,), max_width=width)
    total, error = res.value, res.error
    a0, aa, ab = _tail_amplitudes(p)
    v, e = _fourier_tail(a0, w, 0.0, V)
    total += v
    error += e
    for amp, phase in ((aa, 2.0 * math.pi * p.delta * p.L), (ab, -2.0 * math.pi * p.delta * p.L)):
        for om in (2.0 * math.pi * p.delta + w, 2.0 * math.pi * p.delta - w):
            v, e = _fourier_tail(amp, om, phase, V)
            total += 0.5 * v
            error += 0.5 * e
    return 2.0 * total, 2.0 * error


def _j_hat(s):
    """Transform of Vaaler's J: pi s (1-|s|) cot(pi s) + |s| on |s| < 1."""
    s = np.abs(s)
    out = np.zeros_like(s)
    inside = s < 1.0
    si = s[inside]
    with np.errstate(divide="ignore", invalid="ignore"):
        pc = np.where(si > 0, math.pi * si / np.tan(math.pi * si), 1.0)
    out[inside] = pc * (1.0 - si) + si
    return out


def transform_hat_closed(p, x):
    """Closed form of F-hat(x).

    F-hat(x) = J(x/delta) sin(2 pi L x)/(pi x) +- (1/delta)(1 - |x|/delta)_+ cos(2 pi L x),
    with J(s) = pi s (1-|s|) cot(pi s) + |s| for |s| < 1 and 0 otherwise.
    """
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    s = x / p.delta
    tri = np.clip(1.0 - np.abs(s), 0.0, None)
    val = (_j_hat(s) * 2.0 * p.L * np.sinc(2.0 * p.L * x)
           + p.sigma * tri * np.cos(2.0 * math.pi * p.L * x) / p.delta)
    return val.item() if scalar else val


def transform_hat(p, x, method="quadrature"):
    """Fourier transform F-hat(x) (real and even in x).

    ``method`` is 'quadrature' (adaptive quadrature, the default) or 'closed'.
    F-hat(0) is the mass.
    """
    if method == "closed":
        return transform_hat_closed(p, x)
    if method != "quadrature":
        raise ValueError(f"unknown method {method!r}")
    if np.ndim(x) == 0:
        if x == 0:
            return mass(p)
        return transform_hat_quadrature(p, x)[0]
    xs = np.asarray(x, dtype=float)
    return np.array([transform_hat(p, float(v)) for v in xs.ravel()]).reshape(xs.shape)


def mass_quadrature(p):
    """(integral of F over the real line, error estimate) by quadrature."""
    return transform_hat_quadrature(p, 0.0)


def mass(p, verify=False):
    """Integral of F: exactly 2L + 1/delta (plus) or 2L - 1/delta (minus).

    With ``verify`` the closed form is cross-checked against quadrature and a
    disagreement above 1e-4 raises ConsistencyError.
    """
    closed = p.closed_mass
    if verify:
        quad, _ = mass_quadrature(p)
        if abs(quad - closed) > 1e-4:
            raise ConsistencyError(f"mass quadrature {quad} vs closed form {closed}")
    return closed
