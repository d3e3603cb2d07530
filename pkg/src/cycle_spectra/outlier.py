"""The negative eigenvalue lambda_1 = g_minus(s) that exists when n > kappa.

s is the unique positive root of f(x) = x - phi(x), equivalently of
tanh(n x / 2) = kappa tanh(x / 2).  It lies in (ell, omega), where ell is the
point with phi'(ell) = 1 and omega = log(1 - 2 Re(alpha)).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import gmpy2
from gmpy2 import mpfr

from ._bisect import OutlierWalker, steps_for_width
from .errors import BracketError, BracketViolation, ConvergenceError, DomainError
from .inner import EigenvalueRecord, Method, regime
from .model import SpectralProblem, constants, ell, g_minus, phi, phi_d1
from .numeric import PrecisionContext, exponent, real, two_pow


@dataclass(frozen=True)
class OutlierSolution:
    s: object
    lambda1: object
    ell: object
    omega: object
    method: str
    iterations: int
    bracket: tuple
    history: tuple = field(default=(), compare=False, repr=False)

    def record(self) -> EigenvalueRecord:
        return EigenvalueRecord(
            j=1, lam=self.lambda1, root=self.s, method=self.method, bracket=self.bracket,
            iterations=self.iterations, variable="s", history=self.history,
        )


def _setup(problem: SpectralProblem, ctx: PrecisionContext):
    problem.require_negative()
    if regime(problem) <= 0:
        raise DomainError(
            f"no negative eigenvalue for n={problem.n} <= kappa={problem.kappa}"
        )
    consts = constants(problem, ctx)
    return consts, ell(problem, consts, ctx)


def _solution(problem, s, ell_value, omega, method: Method, iterations, history, bracket, ctx):
    with ctx.scope():
        lam = g_minus(s)
    return OutlierSolution(
        s=s, lambda1=lam, ell=ell_value, omega=omega, method=method.value,
        iterations=iterations, bracket=bracket, history=tuple(history),
    )


def secular_residual(problem: SpectralProblem, s, ctx: PrecisionContext):
    """tanh(n s / 2) - kappa tanh(s / 2)."""
    with ctx.scope():
        s = real(s)
        return gmpy2.tanh(problem.n * s / 2) - real(problem.kappa) * gmpy2.tanh(s / 2)


def solve_outlier_newton(
    problem: SpectralProblem,
    ctx: PrecisionContext,
    trace: bool = False,
    ramp: bool = True,
) -> OutlierSolution:
    """Newton on f = x - phi(x) from omega; iterates decrease to s."""
    consts, ell_value = _setup(problem, ctx)
    n = problem.n
    work = ctx.work_bits
    tol = ctx.tol
    bits = min(128, work) if ramp else work
    x = None
    history = []
    iterations = 0
    while True:
        if iterations >= ctx.bits:
            raise ConvergenceError("outlier Newton did not converge")
        with gmpy2.context(precision=bits):
            kappa = real(consts.kappa)
            omega = gmpy2.log(real(consts.growth))
            x = omega if x is None else mpfr(x)
            f = x - phi(x, n, kappa)
            delta = f / (1 - phi_d1(x, n, kappa))
            y = x - delta
            slack = two_pow(16 - bits)
            if y < mpfr(ell_value) - slack or y > omega + slack:
                raise BracketViolation("outlier Newton iterate left [ell, omega]")
        iterations += 1
        if trace:
            history.append(y)
        x = y
        if bits == work and abs(delta) <= tol * max(1, abs(y)):
            break
        if ramp:
            k = -exponent(delta) if delta != 0 else work
            bits = min(work, max(bits, 2 * k + 96))
        else:
            bits = work
    return _solution(problem, x, ell_value, consts.omega, Method.NEWTON, iterations, history,
                     (ell_value, consts.omega), ctx)


def _fixed_point_cap(n: int, kappa, ell_value, ctx: PrecisionContext) -> int:
    """Iteration budget from the contraction factor phi'(phi(ell)) on [phi(ell), omega]."""
    with gmpy2.context(precision=64):
        factor = phi_d1(phi(mpfr(ell_value), n, kappa), n, kappa)
        gain = -float(gmpy2.log2(factor)) if factor > 0 else float(ctx.work_bits)
    return max(ctx.bits, int(ctx.work_bits / max(gain, 1e-3)) + 64)


def solve_outlier_fixed_point(problem: SpectralProblem, ctx: PrecisionContext, trace: bool = False) -> OutlierSolution:
    """Iterate x -> phi(x) from omega; phi contracts on [phi(ell), omega]."""
    consts, ell_value = _setup(problem, ctx)
    n = problem.n
    work = ctx.work_bits
    tol = ctx.tol
    bits = min(128, work)
    cap = _fixed_point_cap(n, consts.kappa, ell_value, ctx)
    x = None
    history = []
    iterations = 0
    while True:
        if iterations >= cap:
            raise ConvergenceError(f"outlier fixed point did not converge within {cap} steps")
        with gmpy2.context(precision=bits):
            kappa = real(consts.kappa)
            x = gmpy2.log(real(consts.growth)) if x is None else mpfr(x)
            y = phi(x, n, kappa)
            delta = y - x
        iterations += 1
        if trace:
            history.append(y)
        x = y
        if bits == work and abs(delta) <= tol * max(1, abs(y)):
            break
        k = -exponent(delta) if delta != 0 else work
        bits = min(work, max(bits, k + 96))
    return _solution(problem, x, ell_value, consts.omega, Method.FIXED_POINT, iterations, history,
                     (ell_value, consts.omega), ctx)


def solve_outlier_bisection(problem: SpectralProblem, ctx: PrecisionContext) -> OutlierSolution:
    """Bisection for the sign change of f on [ell, omega]."""
    consts, ell_value = _setup(problem, ctx)
    n = problem.n
    with ctx.scope():
        kappa = real(consts.kappa)
        omega = consts.omega
        if not (ell_value - phi(ell_value, n, kappa) < 0 < omega - phi(omega, n, kappa)):
            raise BracketError("f does not change sign on [ell, omega]")
        theta_a = ell_value / 2
        width = (omega - ell_value) / 2
        steps = steps_for_width(width, ctx.tol / 2)
    walk = OutlierWalker(n, consts.kappa, theta_a, width, ctx.work_bits).run(steps)
    with ctx.scope():
        s = walk.lo + walk.hi
        bracket = (2 * walk.lo, 2 * walk.hi)
    return _solution(problem, s, ell_value, consts.omega, Method.BISECTION, walk.steps, (), bracket, ctx)


_SOLVERS = {
    "auto": solve_outlier_newton,
    "newton": solve_outlier_newton,
    "fixed-point": solve_outlier_fixed_point,
    "bisection": solve_outlier_bisection,
}


def solve_outlier(problem: SpectralProblem, ctx: PrecisionContext, method: str = "auto") -> OutlierSolution:
    try:
        solver = _SOLVERS[method]
    except KeyError:
        raise DomainError(f"unknown method {method!r}") from None
    if method == "auto":
        try:
            return solver(problem, ctx)
        except BracketViolation:
            return solve_outlier_fixed_point(problem, ctx)
    return solver(problem, ctx)


def outlier_record(problem: SpectralProblem, ctx: PrecisionContext, method: str = "auto") -> EigenvalueRecord:
    return solve_outlier(problem, ctx, method).record()


def outlier_gap(problem: SpectralProblem, ctx: PrecisionContext):
    """Distance between the two smallest eigenvalues, |lambda_1|.

    Zero when n equals kappa (double zero); undefined when n < kappa.
    """
    side = regime(problem)
    if side == 0:
        with ctx.scope():
            return mpfr(0)
    if side < 0:
        raise DomainError(f"no negative eigenvalue for n={problem.n} < kappa={problem.kappa}")
    sol = solve_outlier_newton(problem, ctx)
    with ctx.scope():
        return abs(sol.lambda1)
