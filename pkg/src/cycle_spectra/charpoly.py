"""The cycle Laplacian with one weighted edge and its characteristic polynomial.

The polynomial is available in four equivalent forms: the Chebyshev closed
form, the p*q factorization in the variable t = 2cos(x/2), and trigonometric
and hyperbolic forms in the angle variable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import gmpy2
from gmpy2 import mpc

from .errors import DomainError, SizeError
from .model import SpectralProblem
from .numeric import PrecisionContext, Real, real

ExactComplex = tuple[Fraction, Fraction]


@dataclass(frozen=True)
class LaplacianMatrix:
    """Sparse exact representation of L(alpha, n).

    ``rows[i]`` lists ``(column, (re, im))`` pairs, 0-based, with exact
    rational entries.  Each row has at most three nonzeros.
    """

    n: int
    rows: tuple[tuple[tuple[int, ExactComplex], ...], ...]

    def entry(self, i: int, j: int) -> ExactComplex:
        """Entry at 1-based position (i, j)."""
        for col, value in self.rows[i - 1]:
            if col == j - 1:
                return value
        return (Fraction(0), Fraction(0))

    def dense(self) -> list[list[ExactComplex]]:
        return [[self.entry(i, j) for j in range(1, self.n + 1)] for i in range(1, self.n + 1)]

    def is_hermitian(self) -> bool:
        for i in range(1, self.n + 1):
            for col, (re_part, im_part) in self.rows[i - 1]:
                other = self.entry(col + 1, i)
                if other != (re_part, -im_part):
                    return False
        return True

    def row_sums(self) -> list[ExactComplex]:
        sums = []
        for row in self.rows:
            sums.append(
                (sum((v[0] for _, v in row), Fraction(0)), sum((v[1] for _, v in row), Fraction(0)))
            )
        return sums

    def trace(self) -> Fraction:
        return sum((self.entry(i, i)[0] for i in range(1, self.n + 1)), Fraction(0))

    def matvec(self, vector):
        """Multiply by a vector of mpfr or mpc values at the current precision."""
        cache: dict[ExactComplex, object] = {}

        def coef(value: ExactComplex):
            if value not in cache:
                re_part, im_part = value
                cache[value] = real(re_part) if im_part == 0 else mpc(real(re_part), real(im_part))
            return cache[value]

        out = []
        for row in self.rows:
            acc = 0
            for col, value in row:
                acc = acc + coef(value) * vector[col]
            out.append(acc)
        return out


def build_matrix(problem: SpectralProblem) -> LaplacianMatrix:
    """Cycle Laplacian whose edge (1, n) carries the weight alpha."""
    n = problem.n
    if n < 3:
        raise SizeError("n must be at least 3")
    a, b = problem.alpha_re, problem.alpha_im
    minus_one = (Fraction(-1), Fraction(0))
    two = (Fraction(2), Fraction(0))
    rows = []
    for i in range(n):
        row: list[tuple[int, ExactComplex]] = []
        if i == 0:
            row.append((0, (1 + a, -b)))
            row.append((1, minus_one))
            row.append((n - 1, (-a, b)))
        elif i == n - 1:
            row.append((0, (-a, -b)))
            row.append((n - 2, minus_one))
            row.append((n - 1, (1 + a, b)))
        else:
            row.append((i - 1, minus_one))
            row.append((i, two))
            row.append((i + 1, minus_one))
        rows.append(tuple(row))
    return LaplacianMatrix(n=n, rows=tuple(rows))


# ---------------------------------------------------------------------------
# Chebyshev polynomials
# ---------------------------------------------------------------------------

def _recurrence(m: int, x, first):
    prev, cur = real(1), first
    if m == 0:
        return prev
    for _ in range(m - 1):
        prev, cur = cur, 2 * x * cur - prev
    return cur


def chebyshev_T(m: int, x) -> Real:
    """First-kind Chebyshev polynomial at the current precision.

    Uses the three-term recurrence on [-1, 1] and cosh(m*acosh|x|) outside.
    """
    if m < 0:
        raise DomainError("Chebyshev degree must be non-negative")
    x = real(x) if not isinstance(x, Real) else x
    if abs(x) <= 1:
        return _recurrence(m, x, x)
    value = gmpy2.cosh(m * gmpy2.acosh(abs(x)))
    return -value if (x < 0 and m % 2) else value


def chebyshev_U(m: int, x) -> Real:
    """Second-kind Chebyshev polynomial, same strategy as ``chebyshev_T``."""
    if m < 0:
        raise DomainError("Chebyshev degree must be non-negative")
    x = real(x) if not isinstance(x, Real) else x
    if abs(x) <= 1:
        return _recurrence(m, x, 2 * x)
    ax = abs(x)
    y = gmpy2.acosh(ax)
    value = gmpy2.sinh((m + 1) * y) / gmpy2.sqrt((ax - 1) * (ax + 1))
    return -value if (x < 0 and m % 2) else value


# ---------------------------------------------------------------------------
# Characteristic polynomial forms
# ---------------------------------------------------------------------------

def charpoly_value(problem: SpectralProblem, lam, ctx: PrecisionContext) -> Real:
    """det(lam*I - L) from the Chebyshev closed form; depends on Re(alpha) only."""
    n = problem.n
    with ctx.scope():
        lam = real(lam)
        a = real(problem.alpha_re)
        x = (lam - 2) / 2
        u1 = chebyshev_U(n - 1, x)
        u2 = chebyshev_U(n - 2, x)
        sign = 1 if (n + 1) % 2 == 0 else -1
        return (lam - 2 * a) * u1 - 2 * a * u2 + 2 * sign * a


def pq_values(problem: SpectralProblem, t, ctx: PrecisionContext) -> tuple[Real, Real]:
    """The two factors p_n(t) and q(t) with t * D(4 - t^2) = 2(-1)^n p q."""
    n = problem.n
    with ctx.scope():
        t = real(t)
        a = real(problem.alpha_re)
        half = t / 2
        un = chebyshev_U(n - 1, half)
        p = (t * t - 4) * un
        q = (1 - a) * chebyshev_T(n, half) + a * half * un
        return p, q


def charpoly_trig(problem: SpectralProblem, x, ctx: PrecisionContext) -> Real:
    """D(g(x)) written with sines and cosines of x/2 and n x/2, for 0 < x < pi."""
    n = problem.n
    with ctx.scope():
        x = real(x)
        if not (0 < x < gmpy2.const_pi()):
            raise DomainError(f"trigonometric form needs 0 < x < pi, got {x}")
        a = real(problem.alpha_re)
        s1, c1 = gmpy2.sin_cos(x / 2)
        sn, cn = gmpy2.sin_cos(n * x / 2)
        sign = 1 if (n + 1) % 2 == 0 else -1
        return sign * 4 * s1 * sn / c1 * ((1 - a) * cn + a * c1 * sn / s1)


def charpoly_hyp(problem: SpectralProblem, x, ctx: PrecisionContext) -> Real:
    """D(g_minus(x)) written with sinh and cosh, for x > 0."""
    n = problem.n
    with ctx.scope():
        x = real(x)
        if not x > 0:
            raise DomainError(f"hyperbolic form needs x > 0, got {x}")
        a = real(problem.alpha_re)
        s1, c1 = gmpy2.sinh_cosh(x / 2)
        sn, cn = gmpy2.sinh_cosh(n * x / 2)
        sign = 1 if n % 2 == 0 else -1
        return sign * 4 * s1 * sn / c1 * ((1 - a) * cn + a * c1 * sn / s1)


def pq_limits_at_zero(problem: SpectralProblem) -> tuple[str, Fraction]:
    """Exact limit of the factor that vanishes at t = 0, divided by t/2.

    For odd n this is lim 2q(t)/t; for even n it is lim 2p(t)/t.  Returns the
    factor name together with the limit.
    """
    n = problem.n
    a = problem.alpha_re
    if n % 2:
        sign = 1 if ((n - 1) // 2) % 2 == 0 else -1
        return "q", sign * (a + (1 - a) * n)
    sign = 1 if (n // 2) % 2 == 0 else -1
    return "p", Fraction(4 * sign * n)
