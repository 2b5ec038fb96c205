import io
import math

import numpy as np
import pytest

from argzeta.errors import CapacityError, CoverageError, DomainError, FormulaViolationError
from argzeta.explicit_formula import (
    REPORT_COLUMNS,
    arch_term,
    boundary_terms,
    min_coverage,
    prime_cutoff,
    prime_side,
    verify_formula,
    von_mangoldt_sieve,
    window_count_sandwich,
    write_reports_csv,
    zero_side,
)
from argzeta.selberg import C_III, C_IV, SelbergParams, transform_hat_closed
from argzeta.zeros import ZeroTable, count_N

from oracles import arch_fourier, mangoldt_bruteforce


# ------------------------------------------------------------------ sieve


def test_sieve_small_values(mangoldt):
    assert mangoldt(8) == pytest.approx(math.log(2))
    assert mangoldt(6) == 0.0
    assert mangoldt(1) == 0.0
    assert mangoldt(97) == pytest.approx(math.log(97))


def test_sieve_psi_100(mangoldt):
    brute = math.fsum(mangoldt_bruteforce(n) for n in range(2, 101))
    assert mangoldt.psi(100) == pytest.approx(brute, abs=1e-12)
    assert mangoldt.psi(100) == pytest.approx(94.045, abs=5e-4)


def test_sieve_random_spot_checks(mangoldt):
    rng = np.random.default_rng(1)
    for n in rng.integers(2, mangoldt.limit + 1, 1000).tolist():
        assert mangoldt(n) == mangoldt_bruteforce(n)


def test_sieve_limits():
    with pytest.raises(DomainError):
        von_mangoldt_sieve(1)
    with pytest.raises(CapacityError):
        von_mangoldt_sieve(10**6, budget=1000)
    m = von_mangoldt_sieve(50)
    with pytest.raises(CapacityError):
        m(51)


# ------------------------------------------------------------------ zero side


def test_zero_side_majorizes_window(zeros_7000):
    p = SelbergParams(5, 1)
    for t in (100.0, 1000.0, 3000.0):
        v, tail = zero_side(zeros_7000, t, p)
        exact = count_N(t + 5, zeros_7000) - count_N(t - 5, zeros_7000)
        assert v >= exact - tail


def test_zero_side_minus_can_be_negative(zeros_7000):
    # window between two zeros, wide band limit
    g = zeros_7000.ordinates
    i = int(np.argmax(np.diff(g[:3000])))
    t = 0.5 * (g[i] + g[i + 1])
    L = 0.2 * (g[i + 1] - g[i])
    v, _ = zero_side(zeros_7000, t, SelbergParams(L, 4.0, "minus"))
    assert v < 0


def test_zero_side_tail_bound_vs_truncation(zeros_7000):
    # truncating the table must move the sum by no more than the bound reported for the truncation
    p = SelbergParams(5, 1)
    full, _ = zero_side(zeros_7000, 100.0, p)
    g = zeros_7000.ordinates
    short = ZeroTable(g[g <= 2000.0], 0.0, 2000.0)
    part, tail = zero_side(short, 100.0, p)
    assert abs(full - part) <= tail


def test_zero_side_coverage_error(zeros_7000):
    with pytest.raises(CoverageError, match="W ="):
        zero_side(zeros_7000, 6990.0, SelbergParams(5, 1))
    partial = ZeroTable(np.array([101.0, 102.0]), 100.0, 200.0, count_offset=29)
    with pytest.raises(CoverageError):
        zero_side(partial, 120.0, SelbergParams(1, 1))


def test_min_coverage():
    assert min_coverage(100.0, SelbergParams(5, 2)) == 130.0


# ------------------------------------------------------------------ right side


def test_boundary_envelope():
    p = SelbergParams(5, 1)
    v, err = boundary_terms(1000.0, p, return_error=True)
    env = 2 * C_III * math.exp(math.pi) * min(1.0, C_IV / (1000 - 5 - 1) ** 2)
    assert abs(v) <= env
    assert err < 1e-12
    assert abs(boundary_terms(1e5, p)) <= 1e-6
    with pytest.raises(DomainError):
        boundary_terms(5.0, p)


@pytest.mark.parametrize("t", [50.0, 500.0, 5000.0])
@pytest.mark.parametrize("args", [(1, 1, "plus"), (2, 1.25, "minus"), (5, 1.5, "plus")])
def test_arch_matches_fourier_side(t, args):
    p = SelbergParams(*args)
    v, err = arch_term(t, p, return_error=True)
    assert err < 1e-10
    assert abs(v - arch_fourier(t, p)) < 1e-11


def test_arch_leading_behaviour():
    p = SelbergParams(5, 1)
    m = transform_hat_closed(p, 0.0)
    for t in (100.0, 1000.0, 10000.0):
        assert abs(arch_term(t, p) - m / (2 * math.pi) * math.log(t / 2)) <= 2.0
    growth = arch_term(2000.0, p) - arch_term(1000.0, p)
    assert growth == pytest.approx(m / (2 * math.pi) * math.log(2), abs=1e-3)
    diff = arch_term(1000.0, p) - arch_term(1000.0, p.with_sign("minus"))
    assert abs(diff) <= math.log(500.0) / (2 * math.pi) * 2 + 1.0


def test_prime_cutoff_and_capacity():
    assert prime_cutoff(SelbergParams(1, 1)) == 535
    with pytest.raises(CapacityError, match="535"):
        prime_side(100.0, SelbergParams(1, 1), von_mangoldt_sieve(100))


def test_prime_side_bounds(mangoldt):
    weights = []
    for args in ((1, 1), (2, 1.25), (5, 1.5)):
        p = SelbergParams(*args)
        n = np.arange(2, prime_cutoff(p) + 1)
        lam = mangoldt.values[: n.size]
        s = float(np.sum(lam / np.sqrt(n)))
        for t in (50.0, 1000.0):
            v = prime_side(t, p, mangoldt)
            assert abs(v) <= (2 * p.L + 1 / p.delta + 1) * s / math.pi
            weights.append(abs(v) / math.exp(math.pi * p.delta))
    assert max(weights) < 5.0


def test_prime_side_at_zero_positive(mangoldt):
    p = SelbergParams(2, 1)
    assert prime_side(0.0, p, mangoldt) > 0


def test_prime_side_closed_vs_quadrature(mangoldt):
    for args in ((1, 1, "plus"), (2, 1.25, "minus")):
        p = SelbergParams(*args)
        a = prime_side(500.0, p, mangoldt, method="closed")
        b = prime_side(500.0, p, mangoldt, method="quadrature")
        assert abs(a - b) <= 1e-6


# ------------------------------------------------------------------ identity


@pytest.mark.parametrize(
    "t,args",
    [(100.0, (2, 1, "plus")), (500.0, (5, 1.25, "minus")), (50.0, (1, 1.5, "plus"))],
)
def test_verify_formula_examples(zeros_7000, mangoldt, t, args):
    rep = verify_formula(zeros_7000, t, SelbergParams(*args), mangoldt)
    assert abs(rep.residual) <= rep.budget <= 1e-3
    assert rep.pi_term == pytest.approx(-rep.params.closed_mass * math.log(math.pi) / (2 * math.pi))
    assert rep.n_prime_terms == int(np.count_nonzero(mangoldt.values[: prime_cutoff(rep.params) - 1]))


def test_deleted_zero_is_detected(zeros_7000, mangoldt):
    t = 100.0
    g = zeros_7000.ordinates
    i = int(np.argmin(np.abs(g - t)))
    bad = ZeroTable(np.delete(g, i), 0.0, zeros_7000.t_max)
    with pytest.raises(FormulaViolationError) as info:
        verify_formula(bad, t, SelbergParams(2, 1), mangoldt)
    assert abs(info.value.report.residual) >= 0.5


def test_bigger_table_shrinks_residual(zeros_7000, mangoldt):
    g = zeros_7000.ordinates
    p = SelbergParams(2, 1)
    small = ZeroTable(g[g <= 2000.0], 0.0, 2000.0)
    r_small = verify_formula(small, 500.0, p, mangoldt)
    r_big = verify_formula(zeros_7000, 500.0, p, mangoldt)
    assert abs(r_big.residual) <= abs(r_small.residual) + 1e-12


def test_regime_enforced(zeros_7000, mangoldt):
    with pytest.raises(DomainError):
        verify_formula(zeros_7000, 100.0, SelbergParams(2, 0.5), mangoldt)


def test_report_csv(zeros_7000, mangoldt):
    rep = verify_formula(zeros_7000, 100.0, SelbergParams(2, 1), mangoldt)
    buf = io.StringIO()
    write_reports_csv([rep, rep], buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == ",".join(REPORT_COLUMNS)
    assert len(lines) == 3 and lines[1] == lines[2]
    fields = lines[1].split(",")
    assert fields[3] == "plus"
    assert float(fields[REPORT_COLUMNS.index("residual")]) == rep.residual


# ------------------------------------------------------------------ sandwich


def test_sandwich_examples(zeros_7000):
    from argzeta.bounds import delta_schedule

    d = delta_schedule(1000.0)
    s = window_count_sandwich(zeros_7000, 1000.0, SelbergParams(5, d), SelbergParams(5, d, "minus"))
    assert s.lower - s.tail <= s.exact <= s.upper + s.tail
    assert s.upper - s.lower <= math.log(1000 / (2 * math.pi)) / (math.pi * d) + 0.5
    tiny = window_count_sandwich(zeros_7000, 500.0, SelbergParams(1e-3, 1), SelbergParams(1e-3, 1, "minus"))
    assert tiny.exact in (0.0, 0.5, 1.0)
    assert tiny.lower <= tiny.exact <= tiny.upper


def test_sandwich_argument_checks(zeros_7000):
    with pytest.raises(DomainError):
        window_count_sandwich(zeros_7000, 100.0, SelbergParams(1, 1), SelbergParams(2, 1, "minus"))
    with pytest.raises(DomainError):
        window_count_sandwich(zeros_7000, 100.0, SelbergParams(1, 1, "minus"), SelbergParams(1, 1))
