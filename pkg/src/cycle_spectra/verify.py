"""Cross-method verification sweep over a grid of rational alpha and n.

For each case the Newton spectrum is the reference.  The sweep measures
eigenvector residuals, the distance from the bisection and fixed-point
spectra, the trace identity and, for small n, the distance from the
inertia oracle run at a separate (lower) precision.
"""

from __future__ import annotations

import csv
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from gmpy2 import mpfr

from .eigenvectors import eigenvector
from .errors import ParseError
from .inner import full_spectrum, trace_value
from .model import SpectralProblem, constants
from .numeric import PrecisionContext, real, two_pow
from .oracle import oracle_spectrum

RESIDUAL_SLACK_BITS = 13
DIFF_SLACK_BITS = 6


def sweep_alphas(lowest: Fraction = Fraction(-3), max_denominator: int = 3) -> list[Fraction]:
    """All rationals in [lowest, 0) with denominator at most ``max_denominator``, descending."""
    values = set()
    for q in range(1, max_denominator + 1):
        p = 1
        while Fraction(-p, q) >= lowest:
            values.add(Fraction(-p, q))
            p += 1
    return sorted(values, reverse=True)


@dataclass(frozen=True)
class Thresholds:
    residual: object
    method_diff: object
    trace: object
    oracle: object

    @classmethod
    def for_bits(cls, ctx: PrecisionContext, oracle_bits: int, residual_slack: int = RESIDUAL_SLACK_BITS,
                 diff_slack: int = DIFF_SLACK_BITS) -> "Thresholds":
        with ctx.scope():
            return cls(
                residual=two_pow(residual_slack - ctx.bits),
                method_diff=two_pow(diff_slack - ctx.bits),
                trace=100 * ctx.eps,
                oracle=two_pow(-(oracle_bits // 2)),
            )


@dataclass(frozen=True)
class CaseResult:
    alpha: Fraction
    n: int
    max_residual: object
    newton_vs_bisection: object
    fixed_point_vs_newton: object
    trace_error: object
    oracle_diff: object = None


@dataclass
class SweepReport:
    bits: int
    thresholds: Thresholds
    cases: list = field(default_factory=list)

    def maximum(self, name: str):
        values = [getattr(c, name) for c in self.cases if getattr(c, name) is not None]
        return max(values) if values else None

    def failures(self) -> list[str]:
        limits = {
            "max_residual": self.thresholds.residual,
            "newton_vs_bisection": self.thresholds.method_diff,
            "fixed_point_vs_newton": self.thresholds.method_diff,
            "trace_error": self.thresholds.trace,
            "oracle_diff": self.thresholds.oracle,
        }
        out = []
        for case in self.cases:
            for name, limit in limits.items():
                value = getattr(case, name)
                if value is not None and not value <= limit:
                    out.append(f"alpha={case.alpha} n={case.n}: {name} above threshold")
        return out

    @property
    def passed(self) -> bool:
        return not self.failures()


def _max_diff(first, second, ctx: PrecisionContext):
    with ctx.scope():
        return max((abs(mpfr(a.lam) - mpfr(b.lam)) for a, b in zip(first, second)), default=mpfr(0))


def verify_case(
    problem: SpectralProblem,
    ctx: PrecisionContext,
    oracle_ctx: PrecisionContext | None = None,
) -> CaseResult:
    newton = full_spectrum(problem, ctx, "newton")
    bisection = full_spectrum(problem, ctx, "bisection")
    fixed = full_spectrum(problem, ctx, "fixed-point")
    worst = mpfr(0)
    for record in newton:
        res = eigenvector(problem, record, ctx).residual
        worst = max(worst, res)
    with ctx.scope():
        total = sum((mpfr(r.lam) for r in newton), mpfr(0))
        trace_error = abs(total - real(trace_value(problem)))
    oracle_diff = None
    if oracle_ctx is not None:
        reference = oracle_spectrum(problem, oracle_ctx)
        with oracle_ctx.scope():
            oracle_diff = max(abs(mpfr(r.lam) - o) for r, o in zip(newton, reference))
    return CaseResult(
        alpha=problem.alpha_re, n=problem.n, max_residual=worst,
        newton_vs_bisection=_max_diff(newton, bisection, ctx),
        fixed_point_vs_newton=_max_diff(fixed, newton, ctx),
        trace_error=trace_error, oracle_diff=oracle_diff,
    )


def _job(args):
    alpha, n, bits, oracle_bits = args
    ctx = PrecisionContext(bits)
    oracle_ctx = PrecisionContext(oracle_bits) if oracle_bits else None
    return verify_case(SpectralProblem(alpha, n), ctx, oracle_ctx)


def sweep_cases(alphas, n_max: int, n_min: int | None = None) -> list[tuple[Fraction, int]]:
    """(alpha, n) pairs with max(N_alpha, n_min) <= n <= n_max."""
    cases = []
    for alpha in alphas:
        first = constants(SpectralProblem(alpha, 3), PrecisionContext(64)).N_alpha
        if n_min is not None:
            first = max(first, n_min)
        cases.extend((alpha, n) for n in range(first, n_max + 1))
    return cases


def run_sweep(
    alphas=None,
    n_max: int = 256,
    ctx: PrecisionContext | None = None,
    oracle_bits: int = 128,
    oracle_n_max: int = 64,
    workers: int = 1,
    progress=None,
) -> SweepReport:
    """Run the sweep; ``oracle_bits = 0`` disables the oracle comparison."""
    ctx = ctx or PrecisionContext()
    alphas = sweep_alphas() if alphas is None else [Fraction(a) for a in alphas]
    jobs = [
        (alpha, n, ctx.bits, oracle_bits if (oracle_bits and n <= oracle_n_max) else 0)
        for alpha, n in sweep_cases(alphas, n_max)
    ]
    report = SweepReport(bits=ctx.bits, thresholds=Thresholds.for_bits(ctx, oracle_bits or ctx.bits))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_job, jobs))
    else:
        results = []
        for job in jobs:
            results.append(_job(job))
            if progress:
                progress(results[-1])
    report.cases = sorted(results, key=lambda c: (-c.alpha, c.n))
    return report


def load_external_spectra(path: str) -> dict:
    """Eigenvalues from another solver, as a CSV with columns alpha, n, j, lambda.

    Returns {(alpha, n): {j: decimal string}}; the strings are parsed later at
    the comparison precision.
    """
    out: dict = {}
    try:
        with open(path, newline="", encoding="utf-8") as handle:
            for line, row in enumerate(csv.DictReader(handle), start=2):
                try:
                    key = (Fraction(row["alpha"]), int(row["n"]))
                    out.setdefault(key, {})[int(row["j"])] = row["lambda"].strip()
                except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
                    raise ParseError(f"{path}:{line}: expected alpha,n,j,lambda columns") from exc
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return out


def compare_external(spectra: dict, ctx: PrecisionContext) -> list[dict]:
    """max_j |external - Newton| per (alpha, n); reported, never thresholded."""
    rows = []
    for (alpha, n), values in sorted(spectra.items(), key=lambda item: (-item[0][0], item[0][1])):
        newton = full_spectrum(SpectralProblem(alpha, n), ctx)
        with ctx.scope():
            diffs = [abs(mpfr(text) - mpfr(newton[j - 1].lam)) for j, text in values.items() if 1 <= j <= n]
        rows.append({"alpha": str(alpha), "n": n, "compared": len(diffs),
                     "max_diff": max(diffs) if diffs else None})
    return rows


def summary_rows(report: SweepReport) -> list[dict]:
    names = ("max_residual", "newton_vs_bisection", "fixed_point_vs_newton", "trace_error", "oracle_diff")
    limits = (report.thresholds.residual, report.thresholds.method_diff, report.thresholds.method_diff,
              report.thresholds.trace, report.thresholds.oracle)
    rows = []
    for name, limit in zip(names, limits):
        value = report.maximum(name)
        rows.append({
            "metric": name, "max": value, "threshold": limit,
            "passed": "yes" if value is None or value <= limit else "no",
        })
    return rows


__all__ = [
    "CaseResult", "SweepReport", "Thresholds", "compare_external", "load_external_spectra",
    "run_sweep", "summary_rows", "sweep_alphas", "sweep_cases", "verify_case",
]
