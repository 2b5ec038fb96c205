"""Build the reference table of the first 10^4 zero ordinates with mpmath.

Each ordinate is bracketed to +-1e-5 around a seed value and refined with
mpmath's own Z-function; the count is checked with mpmath.nzeros (Turing's
method) and by sign alternation of mpmath's Z at midpoints. The seeds come
from any rough table; the output depends only on mpmath.

usage: python tools/make_reference_zeros.py SEEDS.txt OUT.txt [COUNT]
"""
import sys

import mpmath as mp

mp.mp.dps = 25


def main():
    seeds = [float(x) for x in open(sys.argv[1]) if x.strip()]
    count = int(sys.argv[3]) if len(sys.argv) > 3 else 10000
    seeds = seeds[:count]
    out = []
    for i, g in enumerate(seeds):
        lo, hi = mp.mpf(g) - mp.mpf("1e-5"), mp.mpf(g) + mp.mpf("1e-5")
        zl, zh = mp.siegelz(lo), mp.siegelz(hi)
        if zl * zh > 0:
            raise SystemExit(f"no sign change near seed {i + 1}: {g}")
        r = mp.findroot(mp.siegelz, (lo, hi), solver="anderson", tol=mp.mpf("1e-24"))
        out.append(r)
        if (i + 1) % 500 == 0:
            print(i + 1, mp.nstr(r, 15), flush=True)
    # sign alternation at midpoints
    prev = None
    for a, b in zip(out, out[1:]):
        s = mp.sign(mp.siegelz((a + b) / 2))
        if prev is not None and s == prev:
            raise SystemExit(f"no alternation between {a} and {b}")
        prev = s
    # Turing-method count checks
    for k in range(100, len(out) + 1, 100):
        mid = (out[k - 1] + out[k]) / 2 if k < len(out) else out[k - 1] + mp.mpf("0.001")
        n = mp.nzeros(mid)
        if n != k:
            raise SystemExit(f"nzeros({mid}) = {n}, expected {k}")
    with open(sys.argv[2], "w") as fh:
        fh.write("# first %d nontrivial zeta zero ordinates (mpmath %s)\n" % (len(out), mp.__version__))
        for r in out:
            fh.write(mp.nstr(r, 16, min_fixed=-1, max_fixed=10**6) + "\n")


if __name__ == "__main__":
    main()
