"""Generate Taylor coefficients (in x = p - 1/2) of the Riemann-Siegel
correction functions C0..C4 and write them to src/argzeta/_rs_coeffs.py."""
import mpmath as mp

mp.mp.dps = 120
K = 90  # Taylor terms of Psi


def mul(a, b):
    out = [mp.mpf(0)] * K
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j in range(K - i):
            out[i + j] += ai * b[j]
    return out


def div(a, b):
    out = [mp.mpf(0)] * K
    for n in range(K):
        s = a[n] - sum(out[k] * b[n - k] for k in range(n))
        out[n] = s / b[0]
    return out


pi = mp.pi
# cos(2 pi x^2) and sin(2 pi x^2) as even series in x
c2 = [mp.mpf(0)] * K
s2 = [mp.mpf(0)] * K
for m in range(0, K):
    if 2 * m >= K:
        break
    term = (2 * pi) ** m / mp.factorial(m)
    if m % 4 == 0:
        c2[2 * m] = term
    elif m % 4 == 1:
        s2[2 * m] = term
    elif m % 4 == 2:
        c2[2 * m] = -term
    else:
        s2[2 * m] = -term
# cos(2 pi x)
c1 = [mp.mpf(0)] * K
for m in range(0, K, 2):
    c1[m] = (-1) ** (m // 2) * (2 * pi) ** m / mp.factorial(m)

# Psi(1/2+x) = -[cos(5pi/8) cos(2pi x^2) + sin(5pi/8) sin(2pi x^2)] / cos(2 pi x)
num = [-(mp.cos(5 * pi / 8) * c2[i] + mp.sin(5 * pi / 8) * s2[i]) for i in range(K)]
psi = div(num, c1)


def deriv(a, k):
    out = list(a)
    for _ in range(k):
        out = [out[i + 1] * (i + 1) for i in range(len(out) - 1)] + [mp.mpf(0)]
    return out


def comb(*pairs):
    out = [mp.mpf(0)] * K
    for coef, k in pairs:
        d = deriv(psi, k)
        for i in range(K):
            out[i] += coef * d[i]
    return out


C = [
    comb((1, 0)),
    comb((-1 / (96 * pi**2), 3)),
    comb((1 / (64 * pi**2), 2), (1 / (18432 * pi**4), 6)),
    comb((-1 / (64 * pi**2), 1), (-1 / (3840 * pi**4), 5), (-1 / (5308416 * pi**6), 9)),
    comb(
        (1 / (128 * pi**2), 0),
        (mp.mpf(19) / (24576 * pi**4), 4),
        (mp.mpf(11) / (5898240 * pi**6), 8),
        (1 / (2038431744 * pi**8), 12),
    ),
]

# validate C0 against the closed form near the edges of p in [0, 1)
for x in (mp.mpf("0.49"), mp.mpf("-0.5"), mp.mpf("0.13")):
    p = x + mp.mpf(1) / 2
    direct = mp.cos(2 * pi * (p * p - p - mp.mpf(1) / 16)) / mp.cos(2 * pi * p)
    series = sum(c * x**i for i, c in enumerate(C[0]))
    assert abs(direct - series) < mp.mpf(10) ** -30, (x, direct - series)

lines = ['"""Taylor coefficients of the Riemann-Siegel corrections C0..C4 in (p - 1/2).',
         "",
         "Generated by tools/gen_rs_coeffs.py; do not edit by hand.",
         '"""', "", "RS_COEFFS = ("]
for ck in C:
    # keep terms that can matter for |x| <= 1/2 at double precision
    keep = [c for c in ck]
    last = max(i for i, c in enumerate(keep) if abs(c) * mp.mpf(0.5) ** i > mp.mpf(10) ** -20)
    lines.append("    (")
    for c in keep[: last + 1]:
        lines.append(f"        {mp.nstr(c, 17, min_fixed=-1, max_fixed=-1) if c != 0 else '0.0'},")
    lines.append("    ),")
lines.append(")")
open("src/argzeta/_rs_coeffs.py", "w").write("\n".join(lines) + "\n")
print([len(c) for c in C])
