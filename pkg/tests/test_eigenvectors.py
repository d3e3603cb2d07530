from fractions import Fraction as F

import gmpy2
import pytest
from hypothesis import given, settings, strategies as st

from cycle_spectra.eigenvectors import (
    amplitude_phase, components, direct_norm, eigenvalue_record, eigenvector, norm_asympt,
    norm_exact, profile, residual,
)
from cycle_spectra.errors import DomainError
from cycle_spectra.model import SpectralProblem
from cycle_spectra.numeric import PrecisionContext

CTX = PrecisionContext(256)
TINY = gmpy2.mpfr(2) ** -200


def _vector(problem, j, **kw):
    return eigenvector(problem, eigenvalue_record(problem, j, CTX), CTX, **kw)


def test_odd_index_norm_value():
    vec = _vector(SpectralProblem(F(-1, 2), 8), 3)
    assert vec.kind == "trigonometric"
    assert abs(float(vec.norm_exact) - 2.29611) < 1e-5
    assert vec.residual < TINY


def test_kernel_vectors():
    ones = _vector(SpectralProblem(F(-1, 2), 8), 2)
    assert ones.kind == "ones" and set(ones.components) == {1}
    assert ones.residual == 0
    linear = _vector(SpectralProblem(F(-1, 2), 3), 2)
    assert linear.kind == "linear"
    assert [int(v) for v in linear.components] == [-2, 0, 2]
    assert linear.residual == 0
    with pytest.raises(DomainError):
        _vector(SpectralProblem(F(-1, 2), 3, F(1)), 2)


@settings(max_examples=30)
@given(
    st.fractions(min_value=F(-3), max_value=F(-1, 10), max_denominator=10),
    st.integers(min_value=3, max_value=30),
    st.data(),
)
def test_closed_norm_matches_direct_norm(a, n, data):
    problem = SpectralProblem(a, n)
    j = data.draw(st.integers(min_value=1, max_value=n))
    vec = _vector(problem, j)
    with CTX.scope():
        direct = direct_norm(vec.components)
        assert abs(direct - vec.norm_exact) <= 2 ** -150 * direct
    assert vec.residual < TINY * max(1, vec.norm_exact)


def test_complex_alpha_vector():
    problem = SpectralProblem(F(-1, 2), 8, F(1))
    vec = _vector(problem, 4)
    assert isinstance(vec.components[0], type(gmpy2.mpc(0)))
    assert vec.residual < TINY
    with CTX.scope():
        assert abs(direct_norm(vec.components) - vec.norm_exact) < TINY


def test_normalize():
    vec = _vector(SpectralProblem(F(-1, 3), 10), 6, normalize=True)
    with CTX.scope():
        assert abs(direct_norm(vec.components) - 1) < TINY


def test_outlier_vector_peaks_at_the_ends():
    vec = _vector(SpectralProblem(F(-1, 2), 24), 1)
    assert vec.kind == "hyperbolic"
    magnitudes = [abs(v) for v in vec.components]
    assert max(magnitudes[0], magnitudes[-1]) == max(magnitudes)
    assert min(magnitudes) < max(magnitudes) / 1000
    with CTX.scope():
        assert abs(vec.norm_asympt / vec.norm_exact - 1) < 0.05


def test_profile_interpolates_components():
    problem = SpectralProblem(F(-1, 2), 8)
    record = eigenvalue_record(problem, 6, CTX)
    samples = profile(problem, record, 8 * 4 + 1, CTX)
    comps = components(problem, record, CTX)
    with CTX.scope():
        for k in range(1, 9):
            x, w = samples[4 * k]
            assert x == k
            assert abs(w - comps[k - 1]) < TINY
    with pytest.raises(DomainError):
        profile(problem, record, 1, CTX)


@pytest.mark.parametrize("j", [3, 4, 5, 8, 11, 16])
def test_sign_changes_track_index(j):
    problem = SpectralProblem(F(-1, 3), 16)
    comps = components(problem, eigenvalue_record(problem, j, CTX), CTX)
    changes = sum(1 for a, b in zip(comps, comps[1:]) if a * b < 0)
    assert abs(changes - (j - 1)) <= 2


@pytest.mark.parametrize("j", [3, 4, 7, 10])
def test_amplitude_phase_reproduces_profile(j):
    problem = SpectralProblem(F(-1, 2), 12)
    record = eigenvalue_record(problem, j, CTX)
    amp, phase = amplitude_phase(problem, record, CTX)
    with CTX.scope():
        for x, w in profile(problem, record, 25, CTX):
            assert abs(amp * gmpy2.sin(record.root * x + phase) - w) < TINY
    with pytest.raises(DomainError):
        amplitude_phase(problem, eigenvalue_record(problem, 1, CTX), CTX)


def test_asymptotic_norm_domain():
    problem = SpectralProblem(F(-1, 2), 32)
    with pytest.raises(DomainError):
        norm_asympt(problem, 3, CTX)
    with pytest.raises(DomainError):
        norm_asympt(problem, 2, CTX)
    with pytest.raises(DomainError):
        norm_asympt(SpectralProblem(F(-1, 2), 3), 1, CTX)
    ratio = norm_asympt(problem, 16, CTX) / norm_exact(problem, 16, CTX)
    assert abs(float(ratio) - 1) < 0.1


def test_residual_detects_wrong_vector():
    problem = SpectralProblem(F(-1, 2), 8)
    with CTX.scope():
        wrong = [gmpy2.mpfr(k) for k in range(8)]
    assert residual(problem, wrong, 0, CTX) > 0.1


def test_index_range():
    with pytest.raises(DomainError):
        eigenvalue_record(SpectralProblem(F(-1, 2), 8), 9, CTX)
