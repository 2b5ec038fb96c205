"""Acceptance checks, one test per criterion, each printing a PASS/FAIL line."""
import math
import time

import numpy as np
import pytest
from scipy.stats import qmc

from argzeta import cli
from argzeta.bounds import (
    delta_schedule,
    gap_scan,
    multiplicity_scan,
    s_extrema_scan,
    theorem1_scan,
    theorem2_deduce,
)
from argzeta.errors import FormulaViolationError
from argzeta.explicit_formula import verify_formula, window_count_sandwich
from argzeta.selberg import (
    SelbergParams,
    extremal_eval,
    mass_quadrature,
    transform_hat_closed,
    transform_hat_quadrature,
)
from argzeta.zeros import ZeroTable, count_N, find_zeros, s1_integral, save_table

from oracles import s1_trapezoid

EF_T = (50.0, 100.0, 500.0, 1000.0, 5000.0)
EF_L = (1.0, 2.0, 5.0)
EF_DELTA = (1.0, 1.25, 1.5)
PROP_L = (0.5, 1.0, 5.0, 20.0)
PROP_DELTA = (1.0, 1.5, 2.0, 4.0)
# -int_0^10 (1 + theta(u)/pi) du, mpmath quad of siegeltheta at 30 digits
S1_AT_10 = -0.5882778351770211538693535


@pytest.fixture
def announce(capsys):
    def _say(number, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}")
    return _say


@pytest.fixture(scope="module")
def ef_grid(zeros_7000, mangoldt):
    t0 = time.perf_counter()
    reports = []
    for t in EF_T:
        for L in EF_L:
            for d in EF_DELTA:
                for sign in ("plus", "minus"):
                    p = SelbergParams(L, d, sign)
                    reports.append(verify_formula(zeros_7000, t, p, mangoldt, check=False))
    return reports, time.perf_counter() - t0


def test_criterion_1_explicit_formula_identity(ef_grid, announce):
    reports, elapsed = ef_grid
    bad = [r for r in reports if not abs(r.residual) <= r.budget]
    big = [r for r in reports if r.budget > 1e-2]
    worst = max(abs(r.residual) / r.budget for r in reports)
    ok = not bad and not big and len(reports) == 90 and elapsed <= 600
    announce(1, ok, f"{len(reports)} rows, max |residual|/budget = {worst:.3f}, "
                    f"max budget = {max(r.budget for r in reports):.2e}, {elapsed:.1f} s")
    assert ok


def test_criterion_2_extremal_properties(announce):
    t0 = time.perf_counter()
    u01 = qmc.Sobol(1, seed=2).random(2**17)[:100_000, 0]
    min_slack = np.inf
    mass_err = 0.0
    c_iv = 0.0
    band = 0.0
    vi = 0.0
    for L in PROP_L:
        u = (6.0 * u01 - 3.0) * L
        chi = (np.abs(u) <= L).astype(float)
        for d in PROP_DELTA:
            for sign in ("plus", "minus"):
                p = SelbergParams(L, d, sign)
                f = extremal_eval(p, u)
                slack = f - chi if sign == "plus" else chi - f
                min_slack = min(min_slack, float(slack.min()))
                mass_err = max(mass_err, abs(mass_quadrature(p)[0] - p.closed_mass))
                uu = np.linspace(L + 1 / d, L + 50, 20_000)[1:]
                c_iv = max(c_iv, float(np.max(np.abs(extremal_eval(p, uu)) * (d * (uu - L)) ** 2)))
                for x in np.linspace(d + 0.05, 4 * d, 6):
                    band = max(band, abs(transform_hat_quadrature(p, x)[0]))
                xs = np.linspace(1e-6, d / 2, 2001)
                dev = np.abs(transform_hat_closed(p, xs) - np.sin(2 * np.pi * L * xs) / (np.pi * xs))
                vi = max(vi, float(dev.max()) * d)
                for x in (0.1 * d, 0.45 * d):
                    q = transform_hat_quadrature(p, x)[0]
                    vi = max(vi, abs(q - math.sin(2 * math.pi * L * x) / (math.pi * x)) * d)
    elapsed = time.perf_counter() - t0
    ok = (min_slack >= -1e-10 and mass_err <= 1e-6 and c_iv <= 10 and band <= 1e-6
          and vi <= 2.0 and elapsed <= 120)
    announce(2, ok, f"slack {min_slack:.1e}, mass err {mass_err:.1e}, C_iv {c_iv:.4f}, "
                    f"band {band:.1e}, delta*|vi| {vi:.3f}, {elapsed:.1f} s")
    assert ok


def test_criterion_3_zero_pipeline(reference_table, zeros_7000, mangoldt, announce):
    ref = reference_table
    assert len(ref) >= 10_000
    # just past the 10^4-th ordinate; the mean gap there is ~0.85
    top = ref.ordinates[9999] + 1e-6
    computed = find_zeros(10.0, float(top))
    n = min(computed.ordinates.size, 10_000)
    dgamma = float(np.max(np.abs(computed.ordinates[:n] - ref.ordinates[:n])))
    match = computed.ordinates.size == 10_000 and dgamma <= 1e-6
    counts = count_N(100.0, computed) == 29 and count_N(1000.0, computed) == 649

    g = zeros_7000.ordinates
    deleted = 0
    caught = 0
    min_res = np.inf
    for t, L in ((100.0, 2.0), (1000.0, 5.0), (5000.0, 5.0)):
        p = SelbergParams(L, 1.0)
        for i in np.flatnonzero(np.abs(g - t) < L):
            bad = ZeroTable(np.delete(g, i), 0.0, zeros_7000.t_max)
            deleted += 1
            try:
                verify_formula(bad, t, p, mangoldt)
            except FormulaViolationError as exc:
                caught += 1
                min_res = min(min_res, abs(exc.report.residual))
    ok = match and counts and deleted > 0 and caught == deleted and min_res >= 0.5
    announce(3, ok, f"{computed.ordinates.size} zeros, max |dgamma| = {dgamma:.1e}, "
                    f"N(100)={count_N(100.0, computed)}, N(1000)={count_N(1000.0, computed)}, "
                    f"deletions caught {caught}/{deleted}, min residual {min_res:.3f}")
    assert ok


def test_criterion_4_residual_scale(ef_grid, announce):
    reports, _ = ef_grid
    ratios = []
    for r in reports:
        p = r.params
        main = p.closed_mass / (2 * math.pi) * math.log(r.t / (2 * math.pi))
        ratios.append(abs(r.zero_side - main) / math.exp(math.pi * p.delta))
    ok = max(ratios) <= 10
    announce(4, ok, f"max ratio {max(ratios):.4f} over {len(ratios)} rows")
    assert ok


def test_criterion_5_sandwich(zeros_7000, announce):
    rng = np.random.default_rng(2024)
    failures = 0
    for _ in range(100):
        t = float(rng.uniform(100.0, 5000.0))
        L = float(rng.uniform(0.05, min(20.0, 2 * math.sqrt(t))))
        d = delta_schedule(t)
        s = window_count_sandwich(zeros_7000, t, SelbergParams(L, d), SelbergParams(L, d, "minus"))
        if not (s.lower - s.tail <= s.exact <= s.upper + s.tail):
            failures += 1
    announce(5, failures == 0, f"{100 - failures}/100 random windows sandwiched")
    assert failures == 0


def test_criterion_6_desk_reports(zeros_1e6, tmp_path, announce, capsys):
    tab = zeros_1e6
    ts = np.geomspace(10.0, 1e6 - 10.0, 4000)
    stats = theorem1_scan(tab, ts, [0.5, 1.0, 3.0])
    recon = all(s.reconstruction_ok for s in stats)
    gs = gap_scan(tab)
    ex = s_extrema_scan(tab, 10.0, float(tab.t_max))
    gam, _, bound, _ = multiplicity_scan(tab)
    mult_ok = bool(np.all(bound == 1)) and gam.size == len(tab)

    cache = tmp_path / "zeros.ztab"
    save_table(tab, cache)
    digests = []
    for k in range(2):
        out = tmp_path / f"run{k}"
        files = []
        for argv in (
            ["scan", "theorem1", "--from", 10, "--to", 9.9e5, "--points", 400, "--h", "0.5,1,3"],
            ["scan", "gaps", "--from", 10, "--to", 1e6],
            ["scan", "s-extrema", "--from", 10, "--to", 1e6],
            ["scan", "multiplicity", "--from", 10, "--to", 1e6 - 2],
        ):
            code = cli.main(["--zeros", str(cache), "--output-dir", str(out)] + [str(a) for a in argv])
            assert code == 0
        files = sorted(p.name for p in out.iterdir())
        digests.append({name: (out / name).read_bytes() for name in files})
    capsys.readouterr()
    deterministic = digests[0] == digests[1] and len(digests[0]) == 12
    ok = recon and mult_ok and deterministic and len(gs) == len(tab) - 1
    announce(6, ok, f"{len(tab)} zeros; windows {len(stats)} reconstruction {recon}; "
                    f"max gap ratio {gs.summary()['max_ratio']:.3f}; "
                    f"max |S| ratio {ex.max_ratio_to_theorem2:.3f}; "
                    f"multiplicity all 1: {mult_ok}; deterministic reports: {deterministic}")
    assert ok


def test_criterion_7_littlewood_average(zeros_1e6, announce):
    errs = []
    for t in (100.0, 1000.0, 10000.0):
        oracle = S1_AT_10 + s1_trapezoid(t, zeros_1e6)
        errs.append(abs(s1_integral(t, zeros_1e6) - oracle))
    rng = np.random.default_rng(77)
    found = 0
    for t in rng.uniform(100.0, 1e5, 100):
        rec = theorem2_deduce(zeros_1e6, float(t))
        span = math.log(t) ** 2
        if (rec.h_found <= span and rec.s_at_h <= 1 and rec.h_found_lower <= span
                and rec.s_at_h_lower >= -1 and rec.s_bound_check):
            found += 1
    ok = max(errs) <= 1e-4 and found == 100
    announce(7, ok, f"S1 max error {max(errs):.2e}; theorem2 h found for {found}/100 t")
    assert ok
