from fractions import Fraction as F

import gmpy2
import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from _reference import close, eigenvalues
from cycle_spectra.charpoly import charpoly_value
from cycle_spectra.errors import SingularShift, SizeError
from cycle_spectra.model import SpectralProblem
from cycle_spectra.numeric import PrecisionContext
from cycle_spectra.oracle import count_below, det_recurrence, oracle_spectrum, spectrum_bounds

CTX = PrecisionContext(256)
SMALL = PrecisionContext(128)

alphas = st.fractions(min_value=F(-3), max_value=F(-1, 10), max_denominator=10)
orders = st.integers(min_value=3, max_value=20)


def test_laplacian_is_singular():
    assert abs(det_recurrence(SpectralProblem(F(-1, 2), 8), 0, CTX)) < 1e-70


@given(alphas, orders, st.floats(min_value=-2.0, max_value=6.0))
def test_determinant_matches_closed_form(a, n, lam):
    problem = SpectralProblem(a, n)
    with CTX.scope():
        expected = charpoly_value(problem, lam, CTX)
        got = det_recurrence(problem, lam, CTX)
        assert abs(got - expected) <= 1e-60 * max(1, abs(expected))


@given(alphas, st.fractions(min_value=F(-2), max_value=F(2), max_denominator=5), orders,
       st.floats(min_value=-2.0, max_value=6.0))
def test_imaginary_part_leaves_determinant_unchanged(a, b, n, lam):
    real_det = det_recurrence(SpectralProblem(a, n), lam, CTX)
    complex_det = det_recurrence(SpectralProblem(a, n, b), lam, CTX)
    with CTX.scope():
        assert abs(real_det - complex_det) <= 1e-60 * max(1, abs(real_det))


@given(alphas, orders)
def test_counts_are_monotone_between_bounds(a, n):
    problem = SpectralProblem(a, n)
    lo, hi = spectrum_bounds(problem, CTX)
    assert count_below(problem, lo, CTX).negatives == 0
    assert count_below(problem, hi, CTX).negatives == n
    counts = []
    with CTX.scope():
        for k in range(41):
            shift = lo + (hi - lo) * (k + gmpy2.mpfr("0.37")) / 41
            counts.append(count_below(problem, shift, CTX).negatives)
    assert counts == sorted(counts)


def test_one_negative_eigenvalue_above_kappa():
    with CTX.scope():
        shift = -gmpy2.mpfr(2) ** -100
    assert count_below(SpectralProblem(F(-1, 2), 8), shift, CTX).negatives == 1
    assert count_below(SpectralProblem(F(-1, 10), 5), shift, CTX).negatives == 0


def test_singular_shift_detected():
    problem = SpectralProblem(F(-1, 2), 6)
    with pytest.raises(SingularShift):
        count_below(problem, 1 + F(-1, 2), CTX)


@settings(max_examples=15)
@given(alphas, orders)
def test_oracle_matches_dense_solver(a, n):
    found = oracle_spectrum(SpectralProblem(a, n), SMALL)
    assert len(found) == n
    for got, expected in zip(found, eigenvalues(a, n)):
        assert close(got, expected, rel=mpmath.mpf(2) ** -60)


def test_oracle_size_limit():
    with pytest.raises(SizeError):
        oracle_spectrum(SpectralProblem(F(-1, 2), 257), SMALL)
