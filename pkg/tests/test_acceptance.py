"""Acceptance criteria 1-8.  Each test carries a ``criterion`` marker; the
terminal summary prints one PASS/FAIL line per criterion."""

from __future__ import annotations

import random
from fractions import Fraction

import gmpy2
import pytest
from gmpy2 import mpfr

from cycle_spectra.asymptotics import asymptotic_report
from cycle_spectra.eigenvectors import components, direct_norm, eigenvector, norm_exact
from cycle_spectra.inner import full_spectrum, localize, regime, solve_inner_newton, trace_value
from cycle_spectra.model import SpectralProblem, c4, constants
from cycle_spectra.numeric import PrecisionContext, format_decimal, real, two_pow
from cycle_spectra.oracle import count_below
from cycle_spectra.outlier import solve_outlier_newton
from cycle_spectra.verify import run_sweep

FULL = PrecisionContext(3322)

# (n, max |R| over even j >= 4, n^3 * max |R|)
TABLE1 = {
    "-1/3": [(128, "2.84e-5", "5.96e1"), (256, "4.15e-6", "6.96e1"),
             (512, "5.54e-7", "7.44e1"), (1024, "7.14e-8", "7.67e1")],
    "-5/4": [(128, "1.54e-5", "3.22e1"), (256, "2.02e-6", "3.39e1"),
             (512, "2.59e-7", "3.48e1"), (1024, "3.27e-8", "3.51e1")],
}
TABLE1_LARGE = {
    "-1/3": [(2048, "9.06e-9", "7.78e1"), (4096, "1.14e-9", "7.84e1"), (8192, "1.43e-10", "7.87e1")],
    "-5/4": [(2048, "4.11e-9", "3.53e1"), (4096, "5.16e-10", "3.54e1"), (8192, "6.45e-11", "3.55e1")],
}
# (n, |R_1|, n^-2 e^{3 n omega} |R_1|)
TABLE2 = {
    "-1/3": [(8, "4.48e-4", "1.48e0"), (16, "8.87e-9", "1.54e0"),
             (32, "8.94e-19", "1.73e0"), (64, "1.91e-39", "1.84e0")],
    "-5/4": [(8, "6.91e-10", "1.23e2"), (16, "2.77e-22", "1.41e2"),
             (32, "9.06e-48", "1.50e2"), (64, "2.20e-99", "1.55e2")],
}
TABLE2_EXTRA = {
    "-1/3": [(128, "2.00e-81", "1.89e0"), (256, "5.23e-166", "1.92e0"), (512, "8.79e-336", "1.93e0")],
    "-5/4": [(128, "3.09e-203", "1.58e2"), (256, "1.49e-411", "1.59e2"), (512, "8.57e-829", "1.60e2")],
}


def _rows(table):
    return [(alpha, *row) for alpha, rows in table.items() for row in rows]


def _check_table1(alpha, n, error, scaled):
    report = asymptotic_report(SpectralProblem.of(alpha, n), FULL, outlier=False)
    assert (format_decimal(report.max_abs_R, 3), format_decimal(report.scaled_inner, 3)) == (error, scaled)


def _check_table2(alpha, n, error, scaled):
    report = asymptotic_report(SpectralProblem.of(alpha, n), FULL, inner=False)
    assert (format_decimal(abs(report.R1), 3), format_decimal(report.scaled_outlier, 3)) == (error, scaled)


# ---------------------------------------------------------------------------
# 1. Inner asymptotic error table
# ---------------------------------------------------------------------------

@pytest.mark.criterion(1, "inner asymptotic error table")
@pytest.mark.parametrize("alpha,n,error,scaled", _rows(TABLE1))
def test_c1_inner_error_table(alpha, n, error, scaled):
    _check_table1(alpha, n, error, scaled)


@pytest.mark.nightly
@pytest.mark.criterion(1, "inner asymptotic error table")
@pytest.mark.parametrize("alpha,n,error,scaled", _rows(TABLE1_LARGE))
def test_c1_inner_error_table_large_n(alpha, n, error, scaled):
    _check_table1(alpha, n, error, scaled)


# ---------------------------------------------------------------------------
# 2. Outlier asymptotic error table
# ---------------------------------------------------------------------------

@pytest.mark.criterion(2, "outlier asymptotic error table")
@pytest.mark.parametrize("alpha,n,error,scaled", _rows(TABLE2) + _rows(TABLE2_EXTRA))
def test_c2_outlier_error_table(alpha, n, error, scaled):
    _check_table2(alpha, n, error, scaled)


# ---------------------------------------------------------------------------
# 3 and 5. Sweep over alpha with denominators <= 3
# ---------------------------------------------------------------------------

@pytest.fixture(scope="module")
def desk_sweep():
    return run_sweep(n_max=64, ctx=FULL, oracle_bits=128, oracle_n_max=64)


@pytest.mark.slow
@pytest.mark.criterion(3, "residual and cross-method sweep at 3322 bits, n <= 64")
def test_c3_sweep_residuals(desk_sweep):
    assert len(desk_sweep.cases) == sum(65 - constants(SpectralProblem(a, 3), FULL).N_alpha
                                        for a in {c.alpha for c in desk_sweep.cases})
    with FULL.scope():
        assert desk_sweep.maximum("max_residual") < mpfr("1e-996")
        assert desk_sweep.maximum("newton_vs_bisection") < mpfr("1e-998")
        assert desk_sweep.maximum("fixed_point_vs_newton") < mpfr("1e-998")


@pytest.mark.nightly
@pytest.mark.criterion(3, "residual and cross-method sweep at 3322 bits, n <= 64")
def test_c3_sweep_residuals_full_grid():
    report = run_sweep(n_max=256, ctx=FULL, oracle_bits=0)
    with FULL.scope():
        assert report.maximum("max_residual") < mpfr("1e-996")
        assert report.maximum("newton_vs_bisection") < mpfr("1e-998")
        assert report.maximum("fixed_point_vs_newton") < mpfr("1e-998")


@pytest.mark.slow
@pytest.mark.criterion(5, "inertia oracle agrees with the specialized spectrum")
def test_c5_oracle_equivalence(desk_sweep):
    assert all(c.oracle_diff is not None for c in desk_sweep.cases)
    assert desk_sweep.maximum("oracle_diff") <= two_pow(-64)


# ---------------------------------------------------------------------------
# 4. Localization
# ---------------------------------------------------------------------------

def _random_cases(count: int, seed: int):
    """Random (alpha, n); about a third are drawn with |alpha| < 1/(n-1), i.e. n < kappa."""
    rng = random.Random(seed)
    cases = []
    while len(cases) < count:
        n = rng.randint(3, 48)
        if rng.random() < 1 / 3:
            q = rng.randint(n, 4 * n)
            alpha = Fraction(-rng.randint(1, max(1, q // (n - 1) - 1)), q)
            if alpha <= Fraction(-1, n - 1):
                continue
        else:
            q = rng.randint(1, 40)
            alpha = Fraction(-rng.randint(1, 3 * q - 1), q)
        cases.append((alpha, n))
    return cases


# n equal to kappa, where zero is a double eigenvalue
BOUNDARY_CASES = [(Fraction(-1, n - 1), n) for n in (3, 4, 7, 12, 33)]


LOCAL = PrecisionContext(256)


@pytest.mark.criterion(4, "localization brackets and negative-eigenvalue count")
@pytest.mark.parametrize("alpha,n", _random_cases(200, seed=20240604) + BOUNDARY_CASES)
def test_c4_localization(alpha, n):
    problem = SpectralProblem(alpha, n)
    check_bits = LOCAL.bits - 16
    records = full_spectrum(problem, LOCAL)
    for bracket, record in zip(localize(problem, ctx=LOCAL), records):
        lam = mpfr(record.lam, check_bits)
        lo, hi = mpfr(bracket.lo, check_bits), mpfr(bracket.hi, check_bits)
        if bracket.exact:
            assert lam == lo
        else:
            assert lo < lam < hi
    shift = -two_pow(-LOCAL.bits // 2)
    negatives = count_below(problem, shift, LOCAL).negatives
    assert negatives == (1 if n > problem.kappa else 0)


# ---------------------------------------------------------------------------
# 6. Convergence rates
# ---------------------------------------------------------------------------

NEWTON_CASES = [("-1/3", 8), ("-1/3", 16), ("-1/2", 9), ("-1", 20), ("-5/4", 6), ("-3", 12),
                ("-1/5", 7), ("-1/5", 14), ("-2/7", 30), ("-1/10", 24)]


@pytest.mark.criterion(6, "Newton rates, outlier monotonicity and envelope")
@pytest.mark.parametrize("alpha,n", NEWTON_CASES)
def test_c6_newton_rates(alpha, n):
    problem = SpectralProblem.of(alpha, n)
    consts = constants(problem, FULL)
    kappa = consts.kappa
    assert n >= consts.N_alpha
    quadratic = n >= 2 * consts.N_alpha
    for j in range(4, n + 1, 2):
        record = solve_inner_newton(problem, j, FULL, trace=True, ramp=False)
        with FULL.scope():
            root = mpfr(record.root)
            width = gmpy2.const_pi() / n
            linear_ratio = real((kappa * kappa - 1) / (kappa * n - 1))
            quad_ratio = gmpy2.const_pi() * real(kappa * kappa) / (2 * n * n)
            for m, y in enumerate(record.history[:5], start=1):
                error = mpfr(y) - root
                assert error >= -FULL.tol
                assert error <= width * linear_ratio**m
                if quadratic:
                    assert error <= width * quad_ratio ** (2**m - 1) + FULL.tol


@pytest.mark.criterion(6, "Newton rates, outlier monotonicity and envelope")
@pytest.mark.parametrize("alpha", ["-1/3", "-1/2", "-1", "-5/4", "-3", "-2/9"])
def test_c6_outlier_monotone_and_envelope(alpha):
    base = SpectralProblem.of(alpha, 3)
    ctx = PrecisionContext(512)
    consts = constants(base, ctx)
    bound_constant = c4(base, ctx)
    previous = None
    for n in range(consts.N_alpha, 129):
        s = solve_outlier_newton(base.with_n(n), ctx).s
        with ctx.scope():
            gap = consts.omega - s
            assert 0 <= gap <= bound_constant * real(consts.decay(n))
            if previous is not None:
                assert s > previous
        previous = s


# ---------------------------------------------------------------------------
# 7. Norm formulas
# ---------------------------------------------------------------------------

def _norm_cases(count: int, seed: int):
    rng = random.Random(seed)
    cases = []
    while len(cases) < count:
        q = rng.randint(1, 6)
        re_part = Fraction(-rng.randint(1, 3 * q), q)
        im_part = Fraction(rng.randint(-4, 4), rng.randint(1, 3)) if rng.random() < 0.4 else Fraction(0)
        n = rng.randint(3, 40)
        problem = SpectralProblem(re_part, n, im_part)
        j = rng.randint(1, n)
        if regime(problem) == 0 and j == 2 and not problem.is_real:
            continue
        cases.append((re_part, im_part, n, j))
    return cases


NORMS = PrecisionContext(512)


@pytest.mark.criterion(7, "exact norm formulas equal direct component norms")
@pytest.mark.parametrize("re_part,im_part,n,j", _norm_cases(50, seed=7))
def test_c7_norm_formulas(re_part, im_part, n, j):
    problem = SpectralProblem(re_part, n, im_part)
    from cycle_spectra.eigenvectors import eigenvalue_record

    record = eigenvalue_record(problem, j, NORMS)
    formula = norm_exact(problem, j, NORMS, record)
    vector = components(problem, record, NORMS)
    with NORMS.scope():
        direct = direct_norm(vector)
        assert abs(formula - direct) <= two_pow(-NORMS.bits // 2) * direct


def test_c7_cases_cover_complex_alpha_and_all_formula_families():
    cases = _norm_cases(50, seed=7)
    assert any(im != 0 for _, im, _, _ in cases)
    assert any(j == 1 for *_, j in cases)
    assert any(j % 2 == 1 and j > 1 for *_, j in cases)
    assert any(j % 2 == 0 and j > 2 for *_, j in cases)


# ---------------------------------------------------------------------------
# 8. Trace and orthogonality
# ---------------------------------------------------------------------------

INVARIANT_CASES = [("-1/3", n) for n in (3, 5, 8, 13)] + [("-1/2", n) for n in (3, 4, 7, 16)] + \
    [("-5/4", n) for n in (3, 6, 11)] + [("-3", 9), ("-1/4", 5), ("-1/9", 10), ("-2/3", 24)]


@pytest.mark.criterion(8, "trace identity and eigenvector orthogonality")
@pytest.mark.parametrize("alpha,n", INVARIANT_CASES)
def test_c8_trace_and_orthogonality(alpha, n):
    problem = SpectralProblem.of(alpha, n)
    records = full_spectrum(problem, FULL)
    vectors = [eigenvector(problem, r, FULL).components for r in records]
    with FULL.scope():
        total = sum((mpfr(r.lam) for r in records), mpfr(0))
        assert abs(total - real(trace_value(problem))) <= 100 * FULL.eps
        norms = [direct_norm(v) for v in vectors]
        limit = two_pow(-FULL.bits // 2)
        for i in range(n):
            for k in range(i + 1, n):
                inner = sum(a * b for a, b in zip(vectors[i], vectors[k]))
                assert abs(inner) <= limit * norms[i] * norms[k]
