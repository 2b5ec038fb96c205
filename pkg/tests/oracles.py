"""Independent reference computations used only by the tests."""
import math

import numpy as np

from argzeta.selberg import transform_hat_closed
from argzeta.zeros import s_of_t

EULER_GAMMA = 0.57721566490153286061


def arch_fourier(t, p, panels_per_period=6, nodes=24):
    """Archimedean term from the Fourier side.

    Uses Re psi(1/4 + ir/2) = -gamma + int_0^inf (e^-x - e^(-x/4) cos(rx/2)) / (1 - e^-x) dx,
    so the u-integral turns into a finite x-integral over the support of F-hat,
    done here by composite Gauss-Legendre.
    """
    m = transform_hat_closed(p, 0.0)
    top = 4 * math.pi * p.delta
    period = 4 * math.pi / max(t, 1.0)
    n = max(64, int(math.ceil(top / period * panels_per_period)))
    edges = np.linspace(0.0, top, n + 1)
    x0, w0 = np.polynomial.legendre.leggauss(nodes)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    x = (mid[:, None] + half[:, None] * x0[None, :]).ravel()
    w = (half[:, None] * w0[None, :]).ravel()
    fh = transform_hat_closed(p, x / (4 * math.pi))
    f = (np.exp(-x) * m - np.exp(-x / 4) * np.cos(x * t / 2) * fh) / (-np.expm1(-x))
    integral = math.fsum((w * f).tolist())
    tail = -m * math.log1p(-math.exp(-top))
    return (-EULER_GAMMA * m + integral + tail) / (2 * math.pi)


def s1_trapezoid(t, table, points=1_000_000):
    """Trapezoid rule for int_10^t S on a uniform grid, cut at every ordinate.

    S jumps at ordinates, so each cell between consecutive cut points is
    integrated with the one-sided values at its ends.
    """
    g = table.ordinates[(table.ordinates > 10.0) & (table.ordinates < t)]
    grid = np.union1d(np.linspace(10.0, t, points), g)
    left = grid[:-1]
    right = grid[1:]
    # one-sided values: just right of the left end, just left of the right end
    n_left = table.count_offset + np.searchsorted(table.ordinates, left, side="right")
    n_right = table.count_offset + np.searchsorted(table.ordinates, right, side="left")
    from argzeta.special_fn import rs_theta

    s_left = n_left - 1 - rs_theta(left) / math.pi
    s_right = n_right - 1 - rs_theta(right) / math.pi
    return math.fsum((0.5 * (s_left + s_right) * (right - left)).tolist())


def mangoldt_bruteforce(n):
    for p in range(2, n + 1):
        if n % p == 0:
            k = n
            while k % p == 0:
                k //= p
            return math.log(p) if k == 1 else 0.0
    return 0.0


def s_values(table, t):
    return s_of_t(t, table)
