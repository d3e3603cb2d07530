from fractions import Fraction as F

import gmpy2
import pytest
from hypothesis import given, strategies as st

from cycle_spectra.errors import DomainError
from cycle_spectra.model import SpectralProblem
from cycle_spectra.numeric import PrecisionContext
from cycle_spectra.outlier import (
    outlier_gap, secular_residual, solve_outlier, solve_outlier_bisection,
    solve_outlier_fixed_point, solve_outlier_newton,
)

CTX = PrecisionContext(256)

alphas = st.fractions(min_value=F(-4), max_value=F(-1, 6), max_denominator=12)


def _above_kappa(a, extra):
    kappa = (a - 1) / a
    return SpectralProblem(a, max(3, int(kappa) + 1 + extra))


@given(alphas, st.integers(min_value=0, max_value=40))
def test_methods_agree_and_satisfy_secular_equation(a, extra):
    problem = _above_kappa(a, extra)
    newton = solve_outlier_newton(problem, CTX)
    fixed = solve_outlier_fixed_point(problem, CTX)
    bisect = solve_outlier_bisection(problem, CTX)
    with CTX.scope():
        assert abs(newton.s - fixed.s) < 1e-70
        assert abs(newton.s - bisect.s) < 1e-70
        assert abs(secular_residual(problem, newton.s, CTX)) < 1e-70
        assert newton.ell < newton.s < newton.omega
        assert newton.lambda1 < 0


def test_half_at_eight():
    sol = solve_outlier(SpectralProblem(F(-1, 2), 8), CTX)
    assert abs(float(sol.lambda1) + 0.4908) < 1e-3


def test_lambda_tends_to_omega_value():
    # the outlier approaches 4a^2/(2a-1) = -1/2 for alpha = -1/2
    values = [float(solve_outlier(SpectralProblem(F(-1, 2), n), CTX).lambda1) for n in (8, 16, 32)]
    gaps = [abs(v + 0.5) for v in values]
    assert gaps[0] > gaps[1] > gaps[2]


def test_no_outlier_at_or_below_kappa():
    with pytest.raises(DomainError):
        solve_outlier(SpectralProblem(F(-1, 2), 3), CTX)
    with pytest.raises(DomainError):
        solve_outlier_bisection(SpectralProblem(F(-1, 10), 5), CTX)
    with pytest.raises(DomainError):
        solve_outlier(SpectralProblem(F(-1, 2), 8), CTX, "secant")


def test_gap():
    assert outlier_gap(SpectralProblem(F(-1, 2), 3), CTX) == 0
    with pytest.raises(DomainError):
        outlier_gap(SpectralProblem(F(-1, 10), 5), CTX)
    gap = outlier_gap(SpectralProblem(F(-1, 2), 8), CTX)
    with CTX.scope():
        assert abs(gap + solve_outlier(SpectralProblem(F(-1, 2), 8), CTX).lambda1) == 0


def test_newton_iterates_decrease_from_omega():
    sol = solve_outlier_newton(SpectralProblem(F(-1, 3), 12), CTX, trace=True, ramp=False)
    history = list(sol.history)
    assert history[0] < sol.omega
    assert all(b <= a for a, b in zip(history, history[1:]))
    with CTX.scope():
        assert abs(history[-1] - sol.s) < gmpy2.mpfr(2) ** -200
