"""Multiprecision kernel built on MPFR (through gmpy2).

Every computation runs inside ``PrecisionContext.scope()``, which installs a
thread-local MPFR context for the duration of a ``with`` block.  No global
precision is ever modified, so contexts can be shared between threads.
"""

from __future__ import annotations

import math
from contextlib import nullcontext
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import gmpy2
from gmpy2 import mpc, mpfr

from .errors import DomainError

DEFAULT_BITS = 3322
GUARD_BITS = 48

Real = type(mpfr(0))
Complex = type(mpc(0))
Number = Union[int, Fraction, "mpfr", float, str]


@dataclass(frozen=True)
class PrecisionContext:
    """Target precision ``bits`` plus internal guard bits.

    Results are meant to be accurate at ``bits``; arithmetic runs at
    ``work_bits = bits + guard`` so that long chains of operations do not
    erode the requested digits.
    """

    bits: int = DEFAULT_BITS
    guard: int = GUARD_BITS

    def __post_init__(self) -> None:
        if not isinstance(self.bits, int) or self.bits < 64:
            raise DomainError(f"precision must be an integer >= 64 bits, got {self.bits!r}")
        if self.guard < 0:
            raise DomainError("guard bits must be non-negative")

    @property
    def work_bits(self) -> int:
        return self.bits + self.guard

    @property
    def eps(self) -> Real:
        """Comparison tolerance 2^(4-bits), exact at any precision."""
        return gmpy2.mul_2exp(mpfr(1), 4 - self.bits)

    @property
    def tol(self) -> Real:
        """Iteration stopping threshold; tighter than ``eps`` by the guard bits."""
        return gmpy2.mul_2exp(mpfr(1), 8 - self.work_bits)

    @property
    def digits(self) -> int:
        """Decimal digits that ``bits`` binary digits carry."""
        return int(math.ceil(self.bits * math.log10(2)))

    def scope(self, bits: int | None = None):
        """Install an MPFR context at ``bits`` (default: working precision)."""
        return gmpy2.context(precision=bits or self.work_bits)

    def round(self, x):
        """Round ``x`` to the target precision."""
        if isinstance(x, Complex):
            return mpc(x, (self.bits, self.bits))
        return mpfr(x, self.bits)

    def with_bits(self, bits: int) -> "PrecisionContext":
        return PrecisionContext(bits=bits, guard=self.guard)


def scoped(ctx: PrecisionContext | None):
    """``ctx.scope()`` when a context is given, otherwise a no-op."""
    return ctx.scope() if ctx is not None else nullcontext()


def current_bits() -> int:
    return gmpy2.get_context().precision


def real(value) -> Real:
    """Convert an exact or approximate scalar to an mpfr at the current precision."""
    if isinstance(value, Fraction):
        return mpfr(gmpy2.mpq(value.numerator, value.denominator))
    return mpfr(value)


def two_pow(k: int) -> Real:
    return gmpy2.mul_2exp(mpfr(1), k)


def pi() -> Real:
    return gmpy2.const_pi()


def exponent(x) -> int:
    """Binary exponent e with |x| in [2^(e-1), 2^e); very negative for zero."""
    if x == 0:
        return -(1 << 40)
    return gmpy2.get_exp(x)


# ---------------------------------------------------------------------------
# Elementary functions with explicit domain checks
# ---------------------------------------------------------------------------

def _require(ok: bool, name: str, x) -> None:
    if not ok:
        raise DomainError(f"{name} is undefined at {x}")


def _arctanh(x):
    _require(abs(x) < 1, "arctanh", x)
    return gmpy2.atanh(x)


def _arccosh(x):
    _require(x >= 1, "arccosh", x)
    return gmpy2.acosh(x)


def _log(x):
    _require(x > 0, "log", x)
    return gmpy2.log(x)


def _sqrt(x):
    _require(x >= 0, "sqrt", x)
    return gmpy2.sqrt(x)


def _tan(x):
    _require(gmpy2.is_finite(gmpy2.tan(x)), "tan", x)
    return gmpy2.tan(x)


_ELEMENTARY = {
    "sqrt": _sqrt,
    "exp": gmpy2.exp,
    "log": _log,
    "sin": gmpy2.sin,
    "cos": gmpy2.cos,
    "tan": _tan,
    "sinh": gmpy2.sinh,
    "cosh": gmpy2.cosh,
    "tanh": gmpy2.tanh,
    "arctan": gmpy2.atan,
    "arctanh": _arctanh,
    "arccosh": _arccosh,
}

ELEMENTARY_NAMES = tuple(sorted(_ELEMENTARY))


def eval_elementary(name: str, x, ctx: PrecisionContext) -> Real:
    """Evaluate a named elementary function at ``ctx.bits``.

    The input is converted exactly when it is an integer or fraction; MPFR
    rounds each function correctly at the working precision, so the result
    rounded back to ``ctx.bits`` is well within 2 ulp.
    """
    try:
        fn = _ELEMENTARY[name]
    except KeyError:
        raise DomainError(f"unknown elementary function {name!r}") from None
    with ctx.scope():
        return ctx.round(fn(real(x)))


# ---------------------------------------------------------------------------
# Power series for tiny arguments (used by incremental iteration updates)
# ---------------------------------------------------------------------------

def sin_series(u) -> Real:
    """sin(u) by its Taylor series; intended for |u| well below 1."""
    bits = current_bits()
    u2 = u * u
    term = u
    total = u
    k = 1
    floor = exponent(u) - bits - 4
    while True:
        term = -term * u2 / ((k + 1) * (k + 2))
        k += 2
        if term == 0 or exponent(term) < floor:
            return total
        total += term


def tan_series(u) -> Real:
    """tan(u) for small |u| from the sine series, avoiding a full MPFR tan."""
    s = sin_series(u)
    return s / gmpy2.sqrt(1 - s * s)


def atan_series(w) -> Real:
    """arctan(w) by its Taylor series; intended for |w| well below 1."""
    bits = current_bits()
    w2 = w * w
    power = w
    total = w
    k = 1
    floor = exponent(w) - bits - 4
    sign = 1
    while True:
        power = power * w2
        k += 2
        sign = -sign
        term = power / k
        if power == 0 or exponent(term) < floor:
            return total
        total = total + term if sign > 0 else total - term


# ---------------------------------------------------------------------------
# Decimal output
# ---------------------------------------------------------------------------

def _one_digit(x) -> tuple[str, int]:
    """Single-digit mantissa (MPFR needs two), rounded half to even exactly."""
    value = Fraction(*x.as_integer_ratio())
    magnitude = abs(value)
    exp10 = len(str(magnitude.numerator)) - len(str(magnitude.denominator))
    while Fraction(10) ** exp10 <= magnitude:
        exp10 += 1
    while Fraction(10) ** (exp10 - 1) > magnitude:
        exp10 -= 1
    digit = round(magnitude / Fraction(10) ** (exp10 - 1))
    if digit == 10:
        digit, exp10 = 1, exp10 + 1
    return ("-" if value < 0 else "") + str(digit), exp10


def format_decimal(x, digits: int) -> str:
    """Deterministic scientific notation with ``digits`` significant digits.

    Produces strings such as ``-6.667e-1``; zero is ``0``.  Complex values are
    rendered as ``re,im``.
    """
    if isinstance(x, Complex):
        return f"{format_decimal(x.real, digits)},{format_decimal(x.imag, digits)}"
    if isinstance(x, (int, Fraction)):
        with gmpy2.context(precision=max(64, int(digits * 3.33) + 16)):
            x = real(x)
    if not isinstance(x, Real):
        x = mpfr(x)
    if gmpy2.is_nan(x):
        return "nan"
    if gmpy2.is_infinite(x):
        return "inf" if x > 0 else "-inf"
    if x == 0:
        return "0"
    digits = max(1, digits)
    if digits == 1:
        mantissa, exp10 = _one_digit(x)
    else:
        mantissa, exp10, _ = x.digits(10, digits)
    sign = ""
    if mantissa.startswith("-"):
        sign, mantissa = "-", mantissa[1:]
    head, tail = mantissa[0], mantissa[1:]
    body = f"{head}.{tail}" if tail else head
    return f"{sign}{body}e{exp10 - 1}"

