"""Eigenvectors, their exact and asymptotic norms, and continuous profiles.

For an angle z the components are
v_k = sin(kz) - (1 - conj(alpha)) sin((k-1)z) + conj(alpha) sin((n-k)z);
for the outlier the sines become hyperbolic sines with s in place of z.  The kernel is
spanned by the all-ones vector, joined by a linear vector when n = kappa.
"""

from __future__ import annotations

from dataclasses import dataclass

import gmpy2
from gmpy2 import mpc, mpfr

from .charpoly import build_matrix
from .errors import DomainError
from .inner import EigenvalueRecord, odd_record, regime, solve_inner, solve_inner_bisection
from .model import SpectralProblem, constants, eta, grid_point, nu, xi
from .numeric import PrecisionContext, real


@dataclass(frozen=True)
class EigenvectorRecord:
    """Components of one eigenvector (unnormalized unless requested).

    ``residual`` is ||L v - lam v|| / ||v||.
    """

    j: int
    lam: object
    components: tuple
    norm_exact: object
    norm_asympt: object
    residual: object
    kind: str


def _conj_factors(problem: SpectralProblem):
    """(1 - conj(alpha), conj(alpha)) as mpfr for real alpha, else mpc."""
    one_minus = real(1 - problem.alpha_re)
    alpha = real(problem.alpha_re)
    if problem.is_real:
        return one_minus, alpha
    im = real(problem.alpha_im)
    return mpc(one_minus, im), mpc(alpha, -im)


def _kind(problem: SpectralProblem, j: int) -> str:
    side = regime(problem)
    if j == 1:
        return "hyperbolic" if side > 0 else "ones"
    if j == 2:
        if side > 0:
            return "ones"
        if side == 0:
            return "linear"
    return "trigonometric"


def _check_index(problem: SpectralProblem, j: int) -> None:
    problem.require_negative()
    if not 1 <= j <= problem.n:
        raise DomainError(f"index j={j} outside 1..{problem.n}")


def eigenvalue_record(problem: SpectralProblem, j: int, ctx: PrecisionContext, method: str = "auto") -> EigenvalueRecord:
    """The j-th eigenvalue record, computing only what that index needs."""
    _check_index(problem, j)
    if j == 1 and regime(problem) > 0:
        from .outlier import outlier_record

        return outlier_record(problem, ctx, method)
    if j <= 2:
        return _low_record(problem, j, ctx)
    if j % 2:
        return odd_record(problem, j, ctx)
    return solve_inner(problem, j, ctx, method)


def _low_record(problem: SpectralProblem, j: int, ctx: PrecisionContext) -> EigenvalueRecord:
    if j == 2 and regime(problem) < 0:
        return solve_inner_bisection(problem, 2, ctx)
    with ctx.scope():
        zero = mpfr(0)
    return EigenvalueRecord(j=j, lam=zero, root=zero, method="zero", bracket=(zero, zero), iterations=0)


def _multiples(x, n: int, hyperbolic: bool) -> list:
    """sin(kx) (or sinh(kx)) for k = 0..n by the three-term recurrence.

    Rounding errors grow at most like n^2 ulps, well inside the guard bits.
    """
    first = gmpy2.sinh(x) if hyperbolic else gmpy2.sin(x)
    twice_cos = 2 * (gmpy2.cosh(x) if hyperbolic else gmpy2.cos(x))
    values = [mpfr(0), first]
    for _ in range(n - 1):
        values.append(twice_cos * values[-1] - values[-2])
    return values


def components(problem: SpectralProblem, record: EigenvalueRecord, ctx: PrecisionContext) -> list:
    """Unnormalized components v_1..v_n at working precision."""
    n = problem.n
    kind = _kind(problem, record.j)
    with ctx.scope():
        if kind == "ones":
            return [mpfr(1)] * n
        if kind == "linear":
            if not problem.is_real:
                raise DomainError("the second kernel vector at n = kappa is only available for real alpha")
            return [mpfr(2 * k - n - 1) for k in range(1, n + 1)]
        c, a = _conj_factors(problem)
        x = mpfr(record.root)
        values = _multiples(x, n, kind == "hyperbolic")
        return [values[k] - c * values[k - 1] + a * values[n - k] for k in range(1, n + 1)]


def direct_norm(vector) -> object:
    return gmpy2.sqrt(sum((gmpy2.norm(v) if isinstance(v, type(mpc(0))) else v * v) for v in vector))


def residual(problem: SpectralProblem, vector, lam, ctx: PrecisionContext):
    """||L v - lam v|| / ||v||."""
    matrix = build_matrix(problem)
    with ctx.scope():
        image = matrix.matvec(vector)
        diff = [image[k] - lam * vector[k] for k in range(problem.n)]
        return direct_norm(diff) / direct_norm(vector)


def _even_norm_squared(problem: SpectralProblem, z):
    e = eta(z, problem.kappa)
    return problem.n * nu(z, problem) + gmpy2.sin(e) / gmpy2.sin(z) * xi(z, problem)


def _outlier_norm_squared(problem: SpectralProblem, s, lam):
    n = problem.n
    a = real(problem.alpha_re)
    m2 = real(problem.abs2)
    sh = gmpy2.sinh((n - 1) * s / 2)
    ratio = n + gmpy2.sinh(n * s) / gmpy2.sinh(s)
    u1 = -lam / 2 * (n + gmpy2.sinh(2 * n * s) / (2 * gmpy2.sinh(s)))
    u2 = 2 * m2 * sh * sh * ratio
    u3 = 4 * a * sh * gmpy2.cosh(n * s / 2) * gmpy2.sinh(s / 2) * ratio
    return u1 + u2 + u3


def norm_exact(problem: SpectralProblem, j: int, ctx: PrecisionContext, record: EigenvalueRecord | None = None):
    """Euclidean norm of the unnormalized eigenvector from closed forms."""
    record = record or eigenvalue_record(problem, j, ctx)
    n = problem.n
    kind = _kind(problem, j)
    with ctx.scope():
        if kind == "ones":
            return gmpy2.sqrt(mpfr(n))
        if kind == "linear":
            return gmpy2.sqrt(mpfr(n * (n * n - 1)) / 3)
        if kind == "hyperbolic":
            return gmpy2.sqrt(_outlier_norm_squared(problem, mpfr(record.root), mpfr(record.lam)))
        if j % 2:
            modulus = gmpy2.sqrt(real((1 - problem.alpha_re) ** 2 + problem.alpha_im**2))
            return modulus * gmpy2.sqrt(n * mpfr(record.lam) / 2)
        return gmpy2.sqrt(_even_norm_squared(problem, mpfr(record.root)))


def norm_asympt(problem: SpectralProblem, j: int, ctx: PrecisionContext):
    """sqrt(nu(d_j) n) for even j >= 4, mu (1 - 2a)^n for the outlier."""
    _check_index(problem, j)
    n = problem.n
    if j == 1:
        if regime(problem) <= 0:
            raise DomainError(f"no outlier for n={n} <= kappa={problem.kappa}")
        consts = constants(problem, ctx)
        with ctx.scope():
            return consts.mu * real(consts.growth**n)
    if j % 2 or j < 4:
        raise DomainError(f"asymptotic norm is defined for j = 1 and even j >= 4, got j={j}")
    with ctx.scope():
        return gmpy2.sqrt(nu(grid_point(n, j), problem) * n)


def eigenvector(
    problem: SpectralProblem,
    record: EigenvalueRecord,
    ctx: PrecisionContext,
    normalize: bool = False,
) -> EigenvectorRecord:
    _check_index(problem, record.j)
    j = record.j
    vector = components(problem, record, ctx)
    norm = norm_exact(problem, j, ctx, record)
    try:
        approx = norm_asympt(problem, j, ctx)
    except DomainError:
        approx = None
    res = residual(problem, vector, record.lam, ctx)
    if normalize:
        with ctx.scope():
            vector = [v / norm for v in vector]
    return EigenvectorRecord(
        j=j, lam=record.lam, components=tuple(vector), norm_exact=norm, norm_asympt=approx,
        residual=res, kind=_kind(problem, j),
    )


def profile(problem: SpectralProblem, record: EigenvalueRecord, samples: int, ctx: PrecisionContext) -> list[tuple]:
    """The continuous interpolant w sampled uniformly on [0, n].

    w(k) equals the k-th component at integers k.  Complex values are
    returned for complex alpha.
    """
    if samples < 2:
        raise DomainError("profile needs at least two samples")
    n = problem.n
    kind = _kind(problem, record.j)
    out = []
    with ctx.scope():
        c, a = _conj_factors(problem)
        root = mpfr(record.root)
        for i in range(samples):
            x = mpfr(n) * i / (samples - 1)
            if kind == "ones":
                w = mpfr(1)
            elif kind == "linear":
                w = 2 * x - n - 1
            else:
                fn = gmpy2.sinh if kind == "hyperbolic" else gmpy2.sin
                w = fn(x * root) - c * fn((x - 1) * root) + a * fn((n - x) * root)
            out.append((x, w))
    return out


def amplitude_phase(problem: SpectralProblem, record: EigenvalueRecord, ctx: PrecisionContext):
    """(A, B) with w(x) = A sin(z x + B), for real alpha and trigonometric indices."""
    if not problem.is_real or _kind(problem, record.j) != "trigonometric":
        raise DomainError("amplitude and phase exist for real alpha and trigonometric eigenvectors")
    with ctx.scope():
        a = real(problem.alpha_re)
        c = 1 - a
        z = mpfr(record.root)
        sz, cz = gmpy2.sin_cos(z)
        snz, cnz = gmpy2.sin_cos(problem.n * z)
        along_sin = 1 - c * cz - a * cnz
        along_cos = c * sz + a * snz
        return gmpy2.hypot(along_sin, along_cos), gmpy2.atan2(along_cos, along_sin)
