"""Problem definition, scalar constants and the scalar functions of the model.

Functions that take real arguments evaluate at the precision of the active
MPFR context; pass ``ctx`` to have them open a context themselves.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

import gmpy2
from gmpy2 import mpfr

from .errors import DomainError, ParseError, SizeError
from .numeric import PrecisionContext, Real, current_bits, pi, real, scoped, two_pow

# ---------------------------------------------------------------------------
# Problem
# ---------------------------------------------------------------------------

_NUM = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?(?:/\d+)?"
_SIGNED = rf"[+-]?{_NUM}"
_COMPLEX_RE = re.compile(rf"\s*({_SIGNED})?\s*(?:([+-])\s*({_NUM})?\s*\*?\s*[ij])?\s*")


def _parse_real(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"cannot parse {text!r} as a rational or decimal number") from exc


def parse_alpha(text: str) -> tuple[Fraction, Fraction]:
    """Parse an edge weight into exact (real, imaginary) parts.

    Accepted spellings: ``-1/3``, ``-0.25``, ``-1e-2``, ``-1/2,1`` (real and
    imaginary part separated by a comma), ``-1/2+1i`` / ``-1/2-i`` / ``-0.5+2/3j``.
    Decimal strings are converted exactly, so ``-0.1`` means -1/10.
    """
    if not isinstance(text, str) or not text.strip():
        raise ParseError("empty alpha")
    if "," in text:
        parts = text.split(",")
        if len(parts) != 2:
            raise ParseError(f"expected 're,im' but got {text!r}")
        return _parse_real(parts[0]), _parse_real(parts[1])
    m = _COMPLEX_RE.fullmatch(text)
    if m is None or (m.group(1) is None and m.group(2) is None):
        raise ParseError(f"cannot parse alpha {text!r}")
    re_part = _parse_real(m.group(1)) if m.group(1) else Fraction(0)
    im_part = Fraction(0)
    if m.group(2):
        magnitude = _parse_real(m.group(3)) if m.group(3) else Fraction(1)
        im_part = magnitude if m.group(2) == "+" else -magnitude
    return re_part, im_part


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value)
    if isinstance(value, str):
        return _parse_real(value)
    if isinstance(value, Real):
        return Fraction(*value.as_integer_ratio())
    raise ParseError(f"unsupported alpha component {value!r}")


@dataclass(frozen=True)
class SpectralProblem:
    """Edge weight ``alpha_re + i*alpha_im`` (exact rationals) and matrix order ``n``."""

    alpha_re: Fraction
    n: int
    alpha_im: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha_re", _as_fraction(self.alpha_re))
        object.__setattr__(self, "alpha_im", _as_fraction(self.alpha_im))
        if isinstance(self.n, bool) or not isinstance(self.n, int):
            raise SizeError(f"n must be an integer, got {self.n!r}")
        if self.n < 3:
            raise SizeError(f"n must be at least 3, got {self.n}")

    @classmethod
    def of(cls, alpha, n: int) -> "SpectralProblem":
        """Build from a string, number, complex number or (re, im) pair."""
        if isinstance(alpha, str):
            re_part, im_part = parse_alpha(alpha)
        elif isinstance(alpha, tuple):
            re_part, im_part = alpha
        elif isinstance(alpha, complex):
            re_part, im_part = alpha.real, alpha.imag
        else:
            re_part, im_part = alpha, 0
        return cls(alpha_re=re_part, n=n, alpha_im=im_part)

    @property
    def alpha(self) -> tuple[Fraction, Fraction]:
        return self.alpha_re, self.alpha_im

    @property
    def is_real(self) -> bool:
        return self.alpha_im == 0

    @property
    def abs2(self) -> Fraction:
        """|alpha|^2, exact."""
        return self.alpha_re**2 + self.alpha_im**2

    @property
    def kappa(self) -> Fraction:
        self.require_negative()
        return (self.alpha_re - 1) / self.alpha_re

    def require_negative(self) -> None:
        if self.alpha_re >= 0:
            raise DomainError(f"the real part of alpha must be negative, got {self.alpha_re}")

    def with_n(self, n: int) -> "SpectralProblem":
        return SpectralProblem(self.alpha_re, n, self.alpha_im)

    def alpha_mpc(self):
        return gmpy2.mpc(real(self.alpha_re), real(self.alpha_im))

    def label(self) -> str:
        if self.is_real:
            return str(self.alpha_re)
        return f"{self.alpha_re},{self.alpha_im}"


# ---------------------------------------------------------------------------
# Constants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ModelConstants:
    """Constants determined by Re(alpha) (``mu`` also uses |alpha|).

    Rational-valued quantities are kept as exact fractions; the transcendental
    ones (``omega``, ``mu``) are mpfr values at the working precision.
    """

    kappa: Fraction
    Omega: Fraction
    omega: Real
    N_alpha: int
    beta1: Fraction
    beta2: Fraction
    beta3: Fraction
    gamma1: Fraction
    gamma2: Fraction
    mu: Real
    growth: Fraction  # 1 - 2 Re(alpha) = e^omega

    def decay(self, n: int) -> Fraction:
        """e^(-n*omega) as an exact rational."""
        return Fraction(1, 1) / self.growth**n


def constants(problem: SpectralProblem, ctx: PrecisionContext) -> ModelConstants:
    problem.require_negative()
    a = problem.alpha_re
    kappa = (a - 1) / a
    k2m1 = kappa * kappa - 1
    beta1 = 16 * a**2 * (a - 1) ** 2 / (1 - 2 * a) ** 2
    beta2 = 64 * a**3 * (a - 1) ** 3 / (1 - 2 * a) ** 3
    beta3 = 32 * a**2 * (1 - a) ** 2 * (2 * a**2 - 2 * a + 1) / (1 - 2 * a) ** 3
    with ctx.scope():
        omega = gmpy2.log(real(1 - 2 * a))
        mu = gmpy2.sqrt(real(problem.abs2)) / (2 * gmpy2.sqrt(real(2 * (a * a - a))))
    return ModelConstants(
        kappa=kappa,
        Omega=4 * a * a / (2 * a - 1),
        omega=omega,
        N_alpha=max(3, math.floor(kappa) + 1),
        beta1=beta1,
        beta2=beta2,
        beta3=beta3,
        gamma1=4 * kappa / k2m1,
        gamma2=4 * kappa * (kappa * kappa + 1) / k2m1**2,
        mu=mu,
        growth=1 - 2 * a,
    )


def betas_kappa_form(kappa: Fraction) -> tuple[Fraction, Fraction, Fraction]:
    """The three beta coefficients written through kappa instead of alpha."""
    k2m1 = kappa * kappa - 1
    return (
        16 * kappa**2 / k2m1**2,
        64 * kappa**3 / k2m1**3,
        32 * kappa**2 * (kappa**2 + 1) / k2m1**3,
    )


def grid_point(n: int, j: int) -> Real:
    """d_{n,j} = (j-1) pi / n at the current precision."""
    return pi() * (j - 1) / n


# ---------------------------------------------------------------------------
# Scalar functions
# ---------------------------------------------------------------------------

def _slack() -> Real:
    return two_pow(8 - current_bits())


def _check_unit_interval(x, name: str) -> None:
    if x < 0 or x > pi() * (1 + _slack()):
        raise DomainError(f"{name} requires 0 <= x <= pi, got {x}")


def g(x, ctx: PrecisionContext | None = None) -> Real:
    """4 sin^2(x/2) on [0, pi]."""
    with scoped(ctx):
        x = real(x)
        _check_unit_interval(x, "g")
        return g_ext(x)


def g_ext(x) -> Real:
    """4 sin^2(x/2) for any real x (the even, 2pi-periodic extension)."""
    s = gmpy2.sin(x / 2)
    return 4 * s * s


def g_d1(x) -> Real:
    return 2 * gmpy2.sin(x)


def g_d2(x) -> Real:
    return 2 * gmpy2.cos(x)


def g_minus(x, ctx: PrecisionContext | None = None) -> Real:
    """2 - 2 cosh(x) = -4 sinh^2(x/2) for x >= 0."""
    with scoped(ctx):
        x = real(x)
        if x < 0:
            raise DomainError(f"g_minus requires x >= 0, got {x}")
        s = gmpy2.sinh(x / 2)
        return -4 * s * s


def _kappa_real(kappa):
    return real(kappa) if isinstance(kappa, (Fraction, int)) else kappa


def eta(x, kappa, ctx: PrecisionContext | None = None) -> Real:
    """Phase correction on [0, pi]; increases from -pi to 0."""
    with scoped(ctx):
        return eta_with_d1(real(x), _kappa_real(kappa))[0]


def eta_with_d1(x, kappa) -> tuple[Real, Real]:
    """Value and first derivative of the phase correction sharing one tan."""
    _check_unit_interval(x, "eta")
    half = x / 2
    if x <= pi() / 2:
        t = gmpy2.tan(half)
        value = 2 * gmpy2.atan(kappa * t) - pi()
        t2 = t * t
        return value, kappa * (1 + t2) / (1 + kappa * kappa * t2)
    c = gmpy2.cot(half)
    value = -2 * gmpy2.atan(c / kappa)
    c2 = c * c
    return value, kappa * (c2 + 1) / (c2 + kappa * kappa)


def eta_d1(x, kappa, ctx: PrecisionContext | None = None) -> Real:
    with scoped(ctx):
        x = real(x)
        _check_unit_interval(x, "eta_d1")
        kappa = _kappa_real(kappa)
        s, c = gmpy2.sin_cos(x / 2)
        return kappa / (c * c + kappa * kappa * s * s)


def eta_d2(x, kappa, ctx: PrecisionContext | None = None) -> Real:
    with scoped(ctx):
        x = real(x)
        _check_unit_interval(x, "eta_d2")
        kappa = _kappa_real(kappa)
        s, c = gmpy2.sin_cos(x / 2)
        den = c * c + kappa * kappa * s * s
        return -kappa * (kappa * kappa - 1) * s * c / (den * den)


def _tanh_clamped(u) -> Real:
    """tanh(u), switching to 1 - 2e^(-2u) once that is exact to the precision."""
    if u > current_bits() * math.log(2):
        return 1 - 2 * gmpy2.exp(-2 * u)
    return gmpy2.tanh(u)


def phi(x, n: int, kappa, ctx: PrecisionContext | None = None) -> Real:
    """2 artanh(tanh(n x / 2) / kappa); increases from 0 towards log((kappa+1)/(kappa-1))."""
    with scoped(ctx):
        x = real(x)
        if x < 0:
            raise DomainError(f"phi requires x >= 0, got {x}")
        kappa = _kappa_real(kappa)
        return 2 * gmpy2.atanh(_tanh_clamped(n * x / 2) / kappa)


def phi_d1(x, n: int, kappa, ctx: PrecisionContext | None = None) -> Real:
    with scoped(ctx):
        x = real(x)
        kappa = _kappa_real(kappa)
        ch = gmpy2.cosh(n * x / 2)
        return n * kappa / ((kappa * kappa - 1) * ch * ch + 1)


def phi_d2(x, n: int, kappa, ctx: PrecisionContext | None = None) -> Real:
    with scoped(ctx):
        x = real(x)
        kappa = _kappa_real(kappa)
        sh, ch = gmpy2.sinh_cosh(n * x / 2)
        k2m1 = kappa * kappa - 1
        den = k2m1 * ch * ch + 1
        return -n * n * kappa * k2m1 * sh * ch / (den * den)


def ell_argument(problem: SpectralProblem) -> Fraction:
    """Exact square of the arccosh argument in the definition of ell."""
    a = problem.alpha_re
    return (problem.n * a * (a - 1) - a * a) / (1 - 2 * a)


def ell(problem: SpectralProblem, consts: ModelConstants | None, ctx: PrecisionContext) -> Real:
    """Point where the slope of phi equals one; it lies left of the outlier root."""
    problem.require_negative()
    arg2 = ell_argument(problem)
    if arg2 < 1:
        raise DomainError(
            f"ell is undefined for alpha={problem.alpha_re}, n={problem.n} (arccosh argument below 1)"
        )
    with ctx.scope():
        return 2 * gmpy2.acosh(gmpy2.sqrt(real(arg2))) / problem.n


def nu(x, problem: SpectralProblem, ctx: PrecisionContext | None = None) -> Real:
    """Mean square amplitude of the even-index eigenvector components."""
    with scoped(ctx):
        x = real(x)
        a = real(problem.alpha_re)
        m2 = real(problem.abs2)
        e = eta(x, problem.kappa)
        return (
            (1 - a) / 2 * g_ext(x)
            - a / 2 * g_ext(e)
            + (a - m2) / 2 * g_ext(x - e)
            + 2 * m2
        )


def xi(x, problem: SpectralProblem, ctx: PrecisionContext | None = None) -> Real:
    """Oscillatory companion of ``nu`` in the exact even-index norm."""
    with scoped(ctx):
        x = real(x)
        a = real(problem.alpha_re)
        m2 = real(problem.abs2)
        one_minus = real((1 - problem.alpha_re) ** 2 + problem.alpha_im**2)
        e = eta(x, problem.kappa)
        gx = g_ext(x)
        ge = g_ext(e)
        return (
            one_minus / 2 * gx * gmpy2.cos(e)
            + m2 / 2 * ge * gmpy2.cos(x)
            + (a - m2) / 2 * (gx + g_ext(x + e) - ge)
            - 2 * m2 * gmpy2.cos(x)
        )


def c4(problem: SpectralProblem, ctx: PrecisionContext) -> Real:
    """Constant of the exponential envelope for the distance between the outlier root and omega."""
    consts = constants(problem, ctx)
    kappa = consts.kappa
    ell_n = ell(problem.with_n(consts.N_alpha), consts, ctx)
    with ctx.scope():
        k = real(kappa)
        k2m1 = k * k - 1
        return 4 * k / k2m1 * gmpy2.exp(4 * k / (gmpy2.exp(1) * k2m1 * ell_n))
