"""Closed-form asymptotic approximations and their error reports.

Inner eigenvalues are approximated by a second-order expansion of g around
the grid points; the outlier by an expansion in e^(-n omega) = (1-2a)^(-n),
which is rational for rational a, so the outlier approximation is exact
rational arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import gmpy2
from gmpy2 import mpfr

from .errors import DomainError
from .inner import regime, solve_inner_newton
from .model import SpectralProblem, constants, eta_d1, eta_with_d1, g_d1, g_d2, g_ext, grid_point
from .numeric import PrecisionContext, format_decimal, real
from .outlier import solve_outlier_newton


def _even_index(problem: SpectralProblem, j: int, lowest: int = 2) -> None:
    if j % 2 or j < lowest or j > problem.n:
        raise DomainError(f"index j={j} must be even with {lowest} <= j <= n={problem.n}")


def lambda_asympt_inner(problem: SpectralProblem, j: int, ctx: PrecisionContext):
    """Second-order expansion of the j-th eigenvalue around g(d_j), j even."""
    problem.require_negative()
    _even_index(problem, j)
    n = problem.n
    with ctx.scope():
        d = grid_point(n, j)
        e, e1 = eta_with_d1(d, real(problem.kappa))
        g1 = g_d1(d)
        return g_ext(d) + g1 * e / n + (g1 * e * e1 + g_d2(d) * e * e / 2) / (n * n)


def z_approx_first(problem: SpectralProblem, j: int, ctx: PrecisionContext):
    """d_j + eta(d_j)/n, within pi*kappa/n^2 of the root."""
    with ctx.scope():
        d = grid_point(problem.n, j)
        e, _ = eta_with_d1(d, real(problem.kappa))
        return d + e / problem.n


def z_approx_second(problem: SpectralProblem, j: int, ctx: PrecisionContext):
    """Adds the eta * eta' / n^2 correction to ``z_approx_first``."""
    n = problem.n
    with ctx.scope():
        d = grid_point(n, j)
        e, e1 = eta_with_d1(d, real(problem.kappa))
        return d + e / n + e * e1 / (n * n)


def _require_outlier(problem: SpectralProblem) -> None:
    problem.require_negative()
    if regime(problem) <= 0:
        raise DomainError(f"no negative eigenvalue for n={problem.n} <= kappa={problem.kappa}")


def lambda_asympt_outlier_exact(problem: SpectralProblem) -> Fraction:
    """Omega + beta1 E + beta2 n E^2 - beta3 E^2 with E = (1-2a)^(-n), exactly."""
    _require_outlier(problem)
    consts = constants(problem, PrecisionContext(64))
    E = consts.decay(problem.n)
    return consts.Omega + consts.beta1 * E + consts.beta2 * problem.n * E * E - consts.beta3 * E * E


def lambda_asympt_outlier(problem: SpectralProblem, ctx: PrecisionContext):
    value = lambda_asympt_outlier_exact(problem)
    with ctx.scope():
        return real(value)


def s_asympt(problem: SpectralProblem, ctx: PrecisionContext):
    """omega - gamma1 E - gamma1^2 n E^2 + gamma2 E^2 with E = (1-2a)^(-n)."""
    _require_outlier(problem)
    consts = constants(problem, ctx)
    E = consts.decay(problem.n)
    correction = -consts.gamma1 * E - consts.gamma1**2 * problem.n * E * E + consts.gamma2 * E * E
    with ctx.scope():
        return consts.omega + real(correction)


def phi1_expansion(t, problem: SpectralProblem, ctx: PrecisionContext):
    """omega - gamma1 e^(-t) + gamma2 e^(-2t), the large-t expansion of phi with n = 1."""
    consts = constants(problem, ctx)
    with ctx.scope():
        q = gmpy2.exp(-real(t))
        return consts.omega - real(consts.gamma1) * q + real(consts.gamma2) * q * q


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AsymptoticEntry:
    j: int
    lambda_exact: object
    lambda_asympt: object
    R: object  # lambda_asympt - lambda_exact


@dataclass(frozen=True)
class AsymptoticReport:
    """Errors of the asymptotic formulas for one (alpha, n).

    ``max_abs_R`` is the maximum over even j >= 4; ``max_abs_R_with_j2``
    also includes j = 2 (whose exact value is 0).  ``R1`` and
    ``scaled_outlier`` are None when the outlier was not requested.
    """

    alpha: Fraction
    n: int
    entries: tuple
    max_abs_R: object
    max_abs_R_with_j2: object
    scaled_inner: object
    R1: object
    scaled_outlier: object

    def display(self, value) -> str:
        return "" if value is None else format_decimal(value, 3)


def _inner_part(problem: SpectralProblem, ctx: PrecisionContext):
    n = problem.n
    entries = []
    with ctx.scope():
        best = mpfr(0)
        best2 = mpfr(0)
    for j in range(2, n + 1, 2):
        approx = lambda_asympt_inner(problem, j, ctx)
        if j == 2:
            with ctx.scope():
                exact = mpfr(0)
        else:
            exact = solve_inner_newton(problem, j, ctx).lam
        with ctx.scope():
            R = approx - exact
            entries.append(AsymptoticEntry(j, exact, approx, R))
            if j >= 4:
                best = max(best, abs(R))
            best2 = max(best2, abs(R))
    with ctx.scope():
        scaled = best * n**3
    return tuple(entries), best, best2, scaled


def _outlier_part(problem: SpectralProblem, ctx: PrecisionContext):
    consts = constants(problem, ctx)
    exact = solve_outlier_newton(problem, ctx).lambda1
    approx = lambda_asympt_outlier_exact(problem)
    n = problem.n
    with ctx.scope():
        R1 = real(approx) - exact
        scaled = abs(R1) * real(consts.growth ** (3 * n)) / (n * n)
    return R1, scaled


def asymptotic_report(
    problem: SpectralProblem,
    ctx: PrecisionContext,
    inner: bool = True,
    outlier: bool = True,
) -> AsymptoticReport:
    _require_outlier(problem)
    entries, best, best2, scaled = ((), None, None, None)
    if inner:
        entries, best, best2, scaled = _inner_part(problem, ctx)
    R1 = scaled1 = None
    if outlier:
        R1, scaled1 = _outlier_part(problem, ctx)
    return AsymptoticReport(
        alpha=problem.alpha_re, n=problem.n, entries=entries, max_abs_R=best,
        max_abs_R_with_j2=best2, scaled_inner=scaled, R1=R1, scaled_outlier=scaled1,
    )


def error_table(
    alpha,
    n_list,
    ctx: PrecisionContext,
    inner: bool = True,
    outlier: bool = True,
) -> list[AsymptoticReport]:
    """One report per n, in the given order of ``n_list``."""
    base = SpectralProblem.of(alpha, 3) if not isinstance(alpha, SpectralProblem) else alpha
    return [asymptotic_report(base.with_n(n), ctx, inner=inner, outlier=outlier) for n in n_list]


__all__ = [
    "AsymptoticEntry",
    "AsymptoticReport",
    "asymptotic_report",
    "error_table",
    "eta_d1",
    "lambda_asympt_inner",
    "lambda_asympt_outlier",
    "lambda_asympt_outlier_exact",
    "phi1_expansion",
    "s_asympt",
    "z_approx_first",
    "z_approx_second",
]
