"""Formula-free verification: determinants by elimination and eigenvalue
counting by Sylvester inertia on the explicit matrix.

Nothing here uses the closed forms of the characteristic polynomial or the
secular-equation machinery; only the matrix entries.
"""

from __future__ import annotations

from dataclasses import dataclass

import gmpy2
from gmpy2 import mpc, mpfr

from .errors import SingularShift, SizeError
from .model import SpectralProblem
from .numeric import PrecisionContext, real

ORACLE_MAX_N = 256
_NUDGE_RETRIES = 3


@dataclass(frozen=True)
class InertiaResult:
    shift: object
    negatives: int
    pivots: tuple


def _dense_shifted(problem: SpectralProblem, lam):
    """lam*I - L as a dense list of rows (mpc entries for complex alpha)."""
    n = problem.n
    if problem.is_real:
        alpha = real(problem.alpha_re)
        conj = alpha
    else:
        alpha = mpc(real(problem.alpha_re), real(problem.alpha_im))
        conj = alpha.conjugate()
    zero = alpha * 0
    rows = [[zero] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = lam - 2
        if i > 0:
            rows[i][i - 1] = zero + 1
        if i < n - 1:
            rows[i][i + 1] = zero + 1
    rows[0][0] = lam - 1 - conj
    rows[n - 1][n - 1] = lam - 1 - alpha
    rows[0][n - 1] = conj
    rows[n - 1][0] = alpha
    return rows


def det_recurrence(problem: SpectralProblem, lam, ctx: PrecisionContext):
    """det(lam*I - L) by Gaussian elimination with partial pivoting."""
    n = problem.n
    with ctx.scope():
        a = _dense_shifted(problem, real(lam))
        det = a[0][0] * 0 + 1
        for col in range(n):
            pivot = max(range(col, n), key=lambda r: abs(a[r][col]))
            if a[pivot][col] == 0:
                return mpfr(0)
            if pivot != col:
                a[col], a[pivot] = a[pivot], a[col]
                det = -det
            head = a[col]
            det *= head[col]
            for r in range(col + 1, n):
                factor = a[r][col] / head[col]
                if factor:
                    row = a[r]
                    for c in range(col + 1, n):
                        row[c] -= factor * head[c]
        return det.real if not problem.is_real else det


def count_below(problem: SpectralProblem, shift, ctx: PrecisionContext) -> InertiaResult:
    """Number of eigenvalues strictly below ``shift`` from the pivot signs."""
    n = problem.n
    with ctx.scope():
        shift = real(shift)
        a = real(problem.alpha_re)
        threshold = ctx.eps
        pivots = []
        d = 1 + a - shift
        fill = -a
        last = 1 + a - shift
        for k in range(1, n):
            if abs(d) <= threshold:
                raise SingularShift(f"zero pivot at row {k} for shift {shift}")
            pivots.append(d)
            last -= fill * fill / d
            if k == n - 1:
                break
            # eliminate row k from row k+1; the sub-diagonal entry is -1
            fill = (-1 if k == n - 2 else 0) + fill / d
            d = 2 - shift - 1 / d
        if abs(last) <= threshold:
            raise SingularShift(f"zero final pivot for shift {shift}")
        pivots.append(last)
        negatives = sum(1 for p in pivots if p < 0)
    return InertiaResult(shift=shift, negatives=negatives, pivots=tuple(pivots))


def _count(problem: SpectralProblem, shift, ctx: PrecisionContext) -> int:
    with ctx.scope():
        shift = real(shift)
        step = 4 * ctx.eps * max(1, abs(shift))
    for attempt in range(_NUDGE_RETRIES + 1):
        try:
            return count_below(problem, shift, ctx).negatives
        except SingularShift:
            if attempt == _NUDGE_RETRIES:
                raise
            with ctx.scope():
                shift = shift + step
    raise AssertionError("unreachable")


def spectrum_bounds(problem: SpectralProblem, ctx: PrecisionContext) -> tuple:
    """An interval strictly containing every eigenvalue."""
    a = problem.alpha_re
    corner = abs(1 + a) + 1 + abs(a)
    upper = max(5, corner + 1)
    if a < 0:
        omega_limit = 4 * a * a / (2 * a - 1)
        lower = min(omega_limit - 1, -1)
    else:
        lower = -1
    with ctx.scope():
        return real(lower), real(upper)


def oracle_spectrum(problem: SpectralProblem, ctx: PrecisionContext) -> list:
    """All n eigenvalues, ascending, each within 2^(-bits/2) of the truth."""
    n = problem.n
    if n > ORACLE_MAX_N:
        raise SizeError(f"oracle is limited to n <= {ORACLE_MAX_N}, got n={n}")
    lo, hi = spectrum_bounds(problem, ctx)
    with ctx.scope():
        width_goal = gmpy2.mul_2exp(mpfr(1), -(ctx.bits // 2))
    found: list = []
    stack = [(lo, hi, _count(problem, lo, ctx), _count(problem, hi, ctx))]
    while stack:
        a, b, ca, cb = stack.pop()
        if cb == ca:
            continue
        with ctx.scope():
            if b - a <= width_goal:
                found.extend([(a + b) / 2] * (cb - ca))
                continue
            mid = (a + b) / 2
        cm = _count(problem, mid, ctx)
        stack.append((mid, b, cm, cb))
        stack.append((a, mid, ca, cm))
    found.sort()
    return found
