"""Bisection for the two secular equations by walking tangents.

Both secular equations compare a function of an angle theta with the same
function of a multiple n*theta:

* inner roots:   tan(n theta - m pi)  versus  kappa tan(theta)
* outlier root:  tanh(n theta)        versus  kappa tanh(theta)

Bisecting in theta from a fixed left anchor only ever moves by the step
widths W/2, W/4, ..., so the new tangents follow from the addition formula
and precomputed tables of tan(W/2^k), tan(nW/2^k).  Each step then costs two
additions, two fused multiply-adds and two divisions instead of two
transcendental evaluations.

Precision ramps up in levels; each level re-anchors with direct evaluations.
Signs too close to call at a low level are recomputed directly at working
precision, and the final bracket is certified directly as well.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import gmpy2
from gmpy2 import mpfr

from .errors import BracketError
from .numeric import real

_LEVEL_START = 128
_LEVEL_STEP = 512
_LEVEL_MARGIN = 40


@dataclass(frozen=True)
class WalkResult:
    lo: object       # theta at the left end of the final bracket
    hi: object
    steps: int
    numerator: int   # final left end is theta_a + W * numerator / 2^steps


def steps_for_width(width, tol) -> int:
    """Smallest k >= 1 with width / 2^k <= tol."""
    with gmpy2.context(precision=64):
        k = max(1, int(gmpy2.ceil(gmpy2.log2(mpfr(width) / mpfr(tol)))))
    while k > 1 and gmpy2.mul_2exp(width, -(k - 1)) <= tol:
        k -= 1
    while gmpy2.mul_2exp(width, -k) > tol:
        k += 1
    return k


def _levels(work: int, steps: int) -> tuple[list[int], list[int]]:
    levels, limits = [], []
    p = _LEVEL_START
    while p < work:
        levels.append(p)
        limits.append(min(steps, p - _LEVEL_MARGIN))
        p += _LEVEL_STEP
    levels.append(work)
    limits.append(steps)
    return levels, limits


def _half_tan(t):
    return t / (1 + gmpy2.sqrt(1 + t * t))


def _half_tanh(t):
    return t / (1 + gmpy2.sqrt((1 - t) * (1 + t)))


def _level_values(first_angle: Callable[[], object], hyperbolic: bool, levels, limits) -> dict:
    """tan (or tanh) of first_angle / 2^k, grouped by the level that consumes them.

    Each level seeds its first entry with a direct evaluation and fills the
    rest by the half-angle formula, all at the level's precision plus 16 bits.
    """
    fn = gmpy2.tanh if hyperbolic else gmpy2.tan
    half = _half_tanh if hyperbolic else _half_tan
    out = {}
    start = 0
    for p, stop in zip(levels, limits):
        values = []
        with gmpy2.context(precision=p + 16):
            angle = first_angle()
            value = None
            for k in range(start + 1, stop + 1):
                arg = gmpy2.mul_2exp(angle, -k)
                if value is None or (hyperbolic and arg > 0.25):
                    value = fn(arg)
                else:
                    value = half(value)
                values.append(value)
        out[p] = (start, values)
        start = max(start, stop)
    return out


def _scaled_levels(theta_vals, multiple_vals, kappa: Fraction, hyperbolic: bool) -> dict:
    """Per-level step tables for u = kappa*tan(theta) and T = tan(n*theta).

    The addition formula reads u' = (u + kappa*tau) / (1 -+ u*tau/kappa) and
    T' = (T + sigma) / (1 -+ T*sigma); the tables hold the additive terms and
    the signed denominator factors, rounded once to each level's precision.
    """
    sign = 1 if hyperbolic else -1
    out = {}
    for p, (start, tau) in theta_vals.items():
        _, sig = multiple_vals[p]
        with gmpy2.context(precision=p + 16):
            k = real(kappa)
            add_u = [mpfr(k * v, p) for v in tau]
            den_u = [mpfr(sign * v / k, p) for v in tau]
            add_T = [mpfr(v, p) for v in sig]
            den_T = [mpfr(sign * v, p) for v in sig]
        out[p] = (start, add_u, den_u, add_T, den_T)
    return out


@lru_cache(maxsize=4)
def _inner_raw(n: int, work: int):
    levels, limits = _levels(work, work + 8)
    return _level_values(lambda: gmpy2.const_pi() / (2 * n), False, levels, limits)


@lru_cache(maxsize=2)
def _quarter_raw(work: int):
    levels, limits = _levels(work, work + 8)
    return _level_values(lambda: gmpy2.const_pi() / 2, False, levels, limits)


@lru_cache(maxsize=2)
def _inner_tables(n: int, kappa: Fraction, work: int):
    levels, limits = _levels(work, work + 8)
    return levels, limits, _scaled_levels(_inner_raw(n, work), _quarter_raw(work), kappa, False)


class _Walker:
    """Shared driver; subclasses provide anchors, tables and orientation."""

    hyperbolic = False
    root_left_when_T_larger = True

    def __init__(self, n: int, kappa: Fraction, work: int):
        self.n = n
        self.kappa = kappa
        self.work = work

    def anchor(self, numerator: int, k: int):
        """Direct (kappa*t, T) at theta_a + W numerator / 2^k, current precision."""
        raise NotImplementedError

    def theta(self, numerator: int, k: int):
        raise NotImplementedError

    def tables(self, steps: int):
        raise NotImplementedError

    def _left(self, diff) -> bool:
        return diff > 0 if self.root_left_when_T_larger else diff < 0

    def _direct_left(self, numerator: int, k: int) -> bool:
        with gmpy2.context(precision=self.work):
            u, T = self.anchor(numerator, k)
            return self._left(T - u)

    def run(self, steps: int) -> WalkResult:
        levels, limits, tables = self.tables(steps)
        fma = gmpy2.fma
        get_exp = gmpy2.get_exp
        t_larger = self.root_left_when_T_larger
        numerator = 0
        k = 0
        for p, stop in zip(levels, limits):
            final = p == levels[-1]
            stop = steps if final else min(stop, steps)
            if k >= stop:
                continue
            with gmpy2.context(precision=p):
                u, T = self.anchor(numerator, k)
                base, add_u, den_u, add_T, den_T = tables[p]
                guard = _LEVEL_MARGIN - p
                while k < stop:
                    i = k - base
                    um = (u + add_u[i]) / fma(u, den_u[i], 1)
                    Tm = (T + add_T[i]) / fma(T, den_T[i], 1)
                    diff = Tm - um
                    numerator <<= 1
                    k += 1
                    if not final and (
                        not diff
                        or get_exp(diff) < max(get_exp(Tm), get_exp(um)) + max(get_exp(Tm), 0) + guard
                    ):
                        left = self._direct_left(numerator + 1, k)
                    else:
                        left = (diff > 0) if t_larger else (diff < 0)
                    if not left:
                        numerator += 1
                        u, T = um, Tm
        if numerator == 0 or numerator + 1 == 1 << k:
            raise BracketError("no interior sign change found on the bracket")
        self._certify(numerator, k)
        with gmpy2.context(precision=self.work):
            lo = self.theta(numerator, k)
            hi = self.theta(numerator + 1, k)
        return WalkResult(lo=lo, hi=hi, steps=k, numerator=numerator)

    def _certify(self, numerator: int, k: int) -> None:
        with gmpy2.context(precision=self.work):
            for num, expect_left in ((numerator, False), (numerator + 1, True)):
                u, T = self.anchor(num, k)
                diff = T - u
                noise = gmpy2.mul_2exp((abs(T) + abs(u)) * (1 + abs(T)), 16 - self.work)
                if self._left(diff) != expect_left and abs(diff) > noise:
                    raise BracketError("bisection bracket failed direct certification")


class InnerWalker(_Walker):
    """Root of tan(n theta - m pi) = kappa tan(theta) on ((j-2)pi/(2n), (j-1)pi/(2n))."""

    def __init__(self, n: int, j: int, kappa: Fraction, work: int):
        super().__init__(n, kappa, work)
        self.j = j

    def theta(self, numerator: int, k: int):
        u = gmpy2.mul_2exp(mpfr(numerator), -k)
        return gmpy2.const_pi() * (self.j - 2 + u) / (2 * self.n)

    def anchor(self, numerator: int, k: int):
        u = gmpy2.mul_2exp(mpfr(numerator), -k)
        t = gmpy2.tan(self.theta(numerator, k))
        T = gmpy2.tan(gmpy2.const_pi() * u / 2) if numerator != (1 << k) else gmpy2.inf()
        return real(self.kappa) * t, T

    def tables(self, steps: int):
        if steps > self.work + 8:
            raise ValueError("step count exceeds the precomputed tables")
        return _inner_tables(self.n, self.kappa, self.work)


class OutlierWalker(_Walker):
    """Root of tanh(n theta) = kappa tanh(theta) on (theta_a, theta_a + W)."""

    hyperbolic = True
    root_left_when_T_larger = False

    def __init__(self, n: int, kappa: Fraction, theta_a, width, work: int):
        super().__init__(n, kappa, work)
        self.theta_a = theta_a
        self.width = width

    def theta(self, numerator: int, k: int):
        return self.theta_a + self.width * gmpy2.mul_2exp(mpfr(numerator), -k)

    def anchor(self, numerator: int, k: int):
        th = self.theta(numerator, k)
        return real(self.kappa) * gmpy2.tanh(th), gmpy2.tanh(self.n * th)

    def tables(self, steps: int):
        levels, limits = _levels(self.work, steps)
        width = self.width
        theta = _level_values(lambda: mpfr(width), True, levels, limits)
        multiple = _level_values(lambda: self.n * mpfr(width), True, levels, limits)
        return levels, limits, _scaled_levels(theta, multiple, self.kappa, True)
