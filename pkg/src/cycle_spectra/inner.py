"""Eigenvalues inside [0, 4]: localization, three root solvers, full spectrum.

Inner eigenvalues are g(z) where z is the root of

    h(x) = n x - (j - 1) pi - eta(x)

on the grid interval (d_{j-1}, d_j).  For odd j the root is the grid point
itself.  Even j need a solver: guarded Newton from d_j, the contraction
x -> d_j + eta(x)/n, or bisection.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

import gmpy2
from gmpy2 import mpfr

from ._bisect import InnerWalker, steps_for_width
from .errors import BracketError, BracketViolation, ConvergenceError, DomainError
from .model import (
    ModelConstants,
    SpectralProblem,
    constants,
    eta,
    eta_with_d1,
    g_ext,
    grid_point,
)
from .numeric import PrecisionContext, atan_series, exponent, real, tan_series, two_pow


class Method(str, Enum):
    EXACT_ODD = "exact-odd"
    NEWTON = "newton"
    FIXED_POINT = "fixed-point"
    BISECTION = "bisection"
    ZERO = "zero"


SOLVER_CHOICES = ("auto", "newton", "fixed-point", "bisection")


@dataclass(frozen=True)
class EigenvalueRecord:
    """One eigenvalue with the provenance of its computation.

    ``root`` is the angle z (``variable == "z"``) with lam = g(z), or the
    hyperbolic coordinate s (``variable == "s"``) with lam = g_minus(s).
    ``bracket`` is an interval in the root variable known to contain it.
    """

    j: int
    lam: object
    root: object
    method: str
    bracket: tuple
    iterations: int
    variable: str = "z"
    history: tuple = field(default=(), compare=False, repr=False)


@dataclass(frozen=True)
class Bracket:
    """Localization interval for the j-th eigenvalue.

    ``lo == hi`` marks an exactly known eigenvalue; otherwise the eigenvalue
    lies strictly inside (lo, hi).
    """

    j: int
    lo: object
    hi: object

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    def contains(self, value) -> bool:
        if self.exact:
            return value == self.lo
        return self.lo < value < self.hi


# ---------------------------------------------------------------------------
# Localization
# ---------------------------------------------------------------------------

def regime(problem: SpectralProblem) -> int:
    """Sign of n - kappa: +1 with an outlier, 0 at the double zero, -1 without."""
    kappa = problem.kappa
    if problem.n > kappa:
        return 1
    return 0 if problem.n == kappa else -1


def localize(
    problem: SpectralProblem,
    consts: ModelConstants | None = None,
    ctx: PrecisionContext | None = None,
) -> list[Bracket]:
    """Brackets for all n eigenvalues, ordered by index."""
    problem.require_negative()
    ctx = ctx or PrecisionContext()
    consts = consts or constants(problem, ctx)
    n = problem.n
    side = regime(problem)
    out: list[Bracket] = []
    with ctx.scope():
        zero = mpfr(0)
        gvals = [None] + [g_ext(grid_point(n, j)) for j in range(1, n + 1)]
        for j in range(1, n + 1):
            if j == 1:
                if side > 0:
                    out.append(Bracket(1, real(consts.Omega), zero))
                else:
                    out.append(Bracket(1, zero, zero))
            elif j == 2:
                if side < 0:
                    out.append(Bracket(2, zero, gvals[2]))
                else:
                    out.append(Bracket(2, zero, zero))
            elif j % 2:
                out.append(Bracket(j, gvals[j], gvals[j]))
            else:
                out.append(Bracket(j, gvals[j - 1], gvals[j]))
    return out


# ---------------------------------------------------------------------------
# Solver helpers
# ---------------------------------------------------------------------------

def _require_outlier_regime(problem: SpectralProblem, j: int, lowest: int = 4) -> ModelConstants | None:
    problem.require_negative()
    if j % 2 or j < lowest or j > problem.n:
        raise DomainError(f"index j={j} must be even with {lowest} <= j <= n={problem.n}")
    if regime(problem) <= 0:
        raise DomainError(
            f"n={problem.n} does not exceed kappa={problem.kappa}; only bisection is guaranteed there"
        )
    return None


def _interval(n: int, j: int):
    pi = gmpy2.const_pi()
    return pi * (j - 2) / n, pi * (j - 1) / n


def _finish(problem, j, root, method, bracket, iterations, history, ctx) -> EigenvalueRecord:
    with ctx.scope():
        lam = g_ext(root)
    return EigenvalueRecord(
        j=j, lam=lam, root=root, method=method.value, bracket=bracket,
        iterations=iterations, variable="z", history=tuple(history),
    )


def _ramp_bits(delta, current: int, work: int) -> int:
    """Precision sufficient for the next quadratic step."""
    k = -exponent(delta) if delta != 0 else work
    return min(work, max(current, 2 * k + 96))


# ---------------------------------------------------------------------------
# Newton
# ---------------------------------------------------------------------------

def solve_inner_newton(
    problem: SpectralProblem,
    j: int,
    ctx: PrecisionContext,
    trace: bool = False,
    ramp: bool = True,
) -> EigenvalueRecord:
    """Newton on h from the right end d_j of the bracket.

    Iterates decrease monotonically towards the root.  Precision starts at
    128 bits and roughly doubles with each step (``ramp=False`` keeps the
    working precision throughout, useful when inspecting iterates).
    """
    _require_outlier_regime(problem, j)
    n = problem.n
    kappa_q = problem.kappa
    work = ctx.work_bits
    tol = ctx.tol
    bits = min(128, work) if ramp else work
    x = None
    history = []
    iterations = 0
    while True:
        if iterations >= ctx.bits:
            raise ConvergenceError(f"Newton did not converge for j={j} within {ctx.bits} steps")
        with gmpy2.context(precision=bits):
            lo, hi = _interval(n, j)
            x = hi if x is None else mpfr(x)
            value, slope = eta_with_d1(x, real(kappa_q))
            h = n * x - (j - 1) * gmpy2.const_pi() - value
            delta = h / (n - slope)
            y = x - delta
            slack = two_pow(8 - bits) * 8
            if y < lo - slack or y > hi + slack:
                raise BracketViolation(f"Newton iterate left the bracket for j={j}")
        iterations += 1
        if trace:
            history.append(y)
        x = y
        if bits == work and abs(delta) <= tol * max(1, abs(y)):
            break
        bits = _ramp_bits(delta, bits, work) if ramp else work
    with ctx.scope():
        lo, hi = _interval(n, j)
    return _finish(problem, j, x, Method.NEWTON, (lo, hi), iterations, history, ctx)


# ---------------------------------------------------------------------------
# Fixed point
# ---------------------------------------------------------------------------

_INCREMENTAL_SWITCH = 40  # bits of agreement before incremental updates take over


def solve_inner_fixed_point(
    problem: SpectralProblem,
    j: int,
    ctx: PrecisionContext,
    trace: bool = False,
) -> EigenvalueRecord:
    """Iterate x -> d_j + eta(x)/n starting from d_j.

    The map contracts with factor at most kappa/n, so the iteration gains a
    fixed number of bits per step.  After the first few digits settle, tan(x/2)
    and eta(x) are advanced with addition formulas and short power series in
    the step size instead of fresh tan/arctan evaluations.
    """
    _require_outlier_regime(problem, j)
    n = problem.n
    kappa_q = problem.kappa
    work = ctx.work_bits
    tol = ctx.tol
    history = []
    iterations = 0

    def count(y):
        nonlocal iterations
        iterations += 1
        if iterations > ctx.bits:
            raise ConvergenceError(f"fixed point did not converge for j={j} within {ctx.bits} steps")
        if trace:
            history.append(y)

    # direct evaluation until the step is small enough for the series
    bits = min(work, 128)
    x = None
    while True:
        with gmpy2.context(precision=bits):
            d = grid_point(n, j)
            x = d if x is None else mpfr(x)
            y = d + eta(x, real(kappa_q)) / n
            delta = y - x
        count(y)
        x = y
        if delta == 0 or -exponent(delta) >= _INCREMENTAL_SWITCH:
            break

    # incremental updates with a precision that follows the accuracy reached
    achieved = -exponent(delta) if delta != 0 else work
    while True:
        bits = min(work, ((achieved + 160) // 256 + 1) * 256)
        with gmpy2.context(precision=bits):
            kappa = real(kappa_q)
            d = grid_point(n, j)
            x = mpfr(x)
            t = gmpy2.tan(x / 2)
            e = 2 * gmpy2.atan(kappa * t) - gmpy2.const_pi()
            stop_at = tol * max(1, abs(x)) if bits == work else two_pow(64 - bits)
            while True:
                y = d + e / n
                delta = y - x
                count(y)
                if delta == 0:
                    x = y
                    break
                tau = tan_series(delta / 2)
                dt = tau * (1 + t * t) / (1 - t * tau)
                t_new = t + dt
                e = e + 2 * atan_series(kappa * dt / (1 + kappa * kappa * t * t_new))
                x, t = y, t_new
                if abs(delta) <= stop_at:
                    break
            achieved = -exponent(delta) if delta != 0 else work
        if bits == work:
            break

    # one direct step removes drift accumulated by the incremental updates
    with ctx.scope():
        d = grid_point(n, j)
        y = d + eta(x, real(kappa_q)) / n
        count(y)
        x = y
        lo, hi = _interval(n, j)
    return _finish(problem, j, x, Method.FIXED_POINT, (lo, hi), iterations, history, ctx)


# ---------------------------------------------------------------------------
# Bisection
# ---------------------------------------------------------------------------

def solve_inner_bisection(problem: SpectralProblem, j: int, ctx: PrecisionContext) -> EigenvalueRecord:
    """Bisection on the sign of h over (d_{j-1}, d_j); valid for every n.

    This is the only solver used when n does not exceed kappa.
    """
    problem.require_negative()
    n = problem.n
    if j % 2 or j < 2 or j > n:
        raise DomainError(f"index j={j} must be even with 2 <= j <= n={n}")
    if j == 2 and regime(problem) == 0:
        raise BracketError("the second eigenvalue is a double zero when n equals kappa")
    work = ctx.work_bits
    with ctx.scope():
        half_width = gmpy2.const_pi() / (2 * n)
        steps = steps_for_width(half_width, ctx.tol / 2)
    walk = InnerWalker(n, j, problem.kappa, work).run(steps)
    with ctx.scope():
        lo, hi = 2 * walk.lo, 2 * walk.hi
        root = walk.lo + walk.hi
    return _finish(problem, j, root, Method.BISECTION, (lo, hi), walk.steps, (), ctx)


# ---------------------------------------------------------------------------
# Full spectrum
# ---------------------------------------------------------------------------

def _exact_record(j: int, root, lam, method: Method, variable: str = "z") -> EigenvalueRecord:
    return EigenvalueRecord(
        j=j, lam=lam, root=root, method=method.value, bracket=(root, root),
        iterations=0, variable=variable,
    )


def solve_inner(problem: SpectralProblem, j: int, ctx: PrecisionContext, method: str = "auto") -> EigenvalueRecord:
    """Dispatch an even index j >= 4 to the requested solver."""
    if regime(problem) <= 0:
        return solve_inner_bisection(problem, j, ctx)
    if method in ("auto", Method.NEWTON.value):
        try:
            return solve_inner_newton(problem, j, ctx)
        except BracketViolation:
            if method != "auto":
                raise
            return solve_inner_fixed_point(problem, j, ctx)
    if method == Method.FIXED_POINT.value:
        return solve_inner_fixed_point(problem, j, ctx)
    if method == Method.BISECTION.value:
        return solve_inner_bisection(problem, j, ctx)
    raise DomainError(f"unknown method {method!r}; choose from {', '.join(SOLVER_CHOICES)}")


def odd_record(problem: SpectralProblem, j: int, ctx: PrecisionContext) -> EigenvalueRecord:
    with ctx.scope():
        d = grid_point(problem.n, j)
        return _exact_record(j, d, g_ext(d), Method.EXACT_ODD)


def full_spectrum(problem: SpectralProblem, ctx: PrecisionContext, method: str = "auto") -> list[EigenvalueRecord]:
    """All n eigenvalues as records sorted by index (equivalently by value)."""
    from .outlier import outlier_record

    problem.require_negative()
    if method not in SOLVER_CHOICES:
        raise DomainError(f"unknown method {method!r}; choose from {', '.join(SOLVER_CHOICES)}")
    n = problem.n
    side = regime(problem)
    with ctx.scope():
        zero = mpfr(0)
    records: list[EigenvalueRecord] = []
    for j in range(1, n + 1):
        if j == 1:
            if side > 0:
                records.append(outlier_record(problem, ctx, method))
            else:
                records.append(_exact_record(1, zero, zero, Method.ZERO))
        elif j == 2:
            if side < 0:
                records.append(solve_inner_bisection(problem, 2, ctx))
            else:
                records.append(_exact_record(2, zero, zero, Method.ZERO))
        elif j % 2:
            records.append(odd_record(problem, j, ctx))
        else:
            records.append(solve_inner(problem, j, ctx, method))
    return records


def trace_value(problem: SpectralProblem) -> Fraction:
    """Exact sum of the eigenvalues, i.e. the trace of the matrix."""
    return Fraction(2 * problem.n - 2) + 2 * problem.alpha_re
