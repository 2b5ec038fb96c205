"""Scan the (L, delta) grid for the envelope constants C_III and C_IV."""
import math

import numpy as np

from argzeta.selberg import SelbergParams, extremal_eval, extremal_eval_complex

GRID_L = (0.5, 1.0, 5.0, 20.0)
GRID_D = (1.0, 1.5, 2.0, 4.0)


def c_iv(p, n=200_001):
    r = np.linspace(1.0 / p.delta, 50.0, n)
    u = p.L + r
    val = np.abs(extremal_eval(p, np.concatenate([u, -u])))
    return float(np.max(val * p.delta**2 * np.concatenate([r, r]) ** 2))


def c_iii(p, n_re=4001, n_im=41):
    re = np.linspace(-3 * p.L - 50.0 / p.delta, 3 * p.L + 50.0 / p.delta, n_re)
    im = np.linspace(-1.0, 1.0, n_im)
    w = re[:, None] + 1j * im[None, :]
    val = np.abs(extremal_eval_complex(p, w.ravel(), check=False))
    env = np.exp(2 * math.pi * p.delta * np.abs(w.imag.ravel()))
    return float(np.max(val / env))


if __name__ == "__main__":
    worst_iii = worst_iv = 0.0
    for L in GRID_L:
        for d in GRID_D:
            for sign in ("plus", "minus"):
                p = SelbergParams(L, d, sign)
                a, b = c_iii(p), c_iv(p)
                worst_iii, worst_iv = max(worst_iii, a), max(worst_iv, b)
                print(f"L={L:5} delta={d:4} {sign:5}  C_iii={a:.6f}  C_iv={b:.6f}")
    print("max C_iii", worst_iii, "max C_iv", worst_iv)
