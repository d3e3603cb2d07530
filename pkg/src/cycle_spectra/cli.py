"""Command-line interface: ``cycle-spectra <subcommand> [options]``.

Exit codes: 0 success, 1 parse error, 2 domain error, 3 convergence
failure, 4 verification failure.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

import gmpy2
from gmpy2 import mpfr

from . import __version__
from .asymptotics import asymptotic_report, lambda_asympt_outlier, s_asympt
from .eigenvectors import components, eigenvalue_record, eigenvector, profile
from .errors import CycleSpectraError, DomainError, ParseError, VerificationError
from .inner import SOLVER_CHOICES, full_spectrum, regime
from .model import SpectralProblem, constants, ell, eta, g_ext, g_minus, parse_alpha, phi
from .numeric import DEFAULT_BITS, PrecisionContext
from .outlier import solve_outlier
from .serialize import render
from .verify import compare_external, load_external_spectra, run_sweep, summary_rows, sweep_alphas

PLOT_KINDS = ("g-spline", "eta", "phi", "f", "profiles")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _common(parser: argparse.ArgumentParser, alpha_default: str | None = None, digits_default=None):
    parser.add_argument("--alpha", default=alpha_default, required=alpha_default is None,
                        help="edge weight, e.g. --alpha=-1/3, --alpha=-0.5, --alpha=-1/2+1i")
    parser.add_argument("--prec-bits", type=int, default=DEFAULT_BITS, help="significand bits (default 3322)")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--out", help="output file (default: standard output)")
    parser.add_argument("--digits", type=_positive_int, default=digits_default,
                        help="significant digits written for each number (default: full precision)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cycle-spectra", description="Spectra of cycle Laplacians with one weighted edge.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("constants", help="kappa, Omega, omega, N and the expansion coefficients")
    _common(p)

    p = sub.add_parser("spectrum", help="all n eigenvalues with solver provenance")
    _common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--method", choices=SOLVER_CHOICES, default="auto")

    p = sub.add_parser("outlier", help="the negative eigenvalue and its asymptotic error")
    _common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--method", choices=SOLVER_CHOICES, default="auto")

    p = sub.add_parser("eigvec", help="components, norms and residual of one eigenvector")
    _common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--method", choices=SOLVER_CHOICES, default="auto")
    p.add_argument("--normalize", action="store_true")

    for name, start, stop, what in (("table1", 128, 1024, "inner"), ("table2", 8, 64, "outlier")):
        p = sub.add_parser(name, help=f"asymptotic error table for the {what} eigenvalues")
        _common(p, alpha_default="-1/3")
        p.add_argument("--n", type=int, default=start, help="first n (doubled up to --n-max)")
        p.add_argument("--n-max", type=int, default=stop)
        p.add_argument("--n-list", type=_int_list, help="explicit comma-separated n values")

    p = sub.add_parser("plotdata", help="sampled curves for plotting")
    _common(p, alpha_default="-1/2", digits_default=17)
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--what", choices=PLOT_KINDS, required=True)
    p.add_argument("--samples", type=int, default=201)
    p.add_argument("--j", type=_int_list, help="indices for --what=profiles (default: 1 and even j)")

    p = sub.add_parser("verify", help="cross-method sweep with pass/fail thresholds")
    p.add_argument("--alphas", help="comma-separated real alpha values (default: denominators <= 3 in [-3, 0))")
    p.add_argument("--n-max", type=int, default=256)
    p.add_argument("--prec-bits", type=int, default=DEFAULT_BITS)
    p.add_argument("--oracle-bits", type=int, default=128, help="oracle precision; 0 disables the oracle")
    p.add_argument("--oracle-n-max", type=int, default=64)
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--gen-file", help="CSV (alpha,n,j,lambda) from another solver; differences are reported only")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out")
    p.add_argument("--digits", type=_positive_int, default=6)
    return parser


# ---------------------------------------------------------------------------
# Subcommands; each returns (kind, params, rows, json_data or None)
# ---------------------------------------------------------------------------

def _problem(args, n: int = 3) -> SpectralProblem:
    re_part, im_part = parse_alpha(args.alpha)
    return SpectralProblem(re_part, n, im_part)


def _params(args, problem: SpectralProblem, **extra) -> dict:
    out = {"alpha": problem.label(), "prec_bits": args.prec_bits}
    out.update(extra)
    return out


def _exact(value: Fraction) -> str:
    return str(value)


def cmd_constants(args, ctx):
    problem = _problem(args)
    consts = constants(problem, ctx)
    rows = []
    for name in ("kappa", "Omega", "omega", "N_alpha", "beta1", "beta2", "beta3", "gamma1", "gamma2", "mu"):
        value = getattr(consts, name)
        exact = _exact(value) if isinstance(value, (Fraction, int)) else None
        rows.append({"name": name, "exact": exact, "value": value})
    data = {row["name"]: row["value"] for row in rows}
    data["exact"] = {row["name"]: row["exact"] for row in rows if row["exact"] is not None}
    return "constants", _params(args, problem), rows, data


def cmd_spectrum(args, ctx):
    problem = _problem(args, args.n)
    rows = []
    for record in full_spectrum(problem, ctx, args.method):
        rows.append({
            "j": record.j, "lambda": record.lam, "root": record.root, "variable": record.variable,
            "method": record.method, "bracket_lo": record.bracket[0], "bracket_hi": record.bracket[1],
            "iterations": record.iterations,
        })
    return "spectrum", _params(args, problem, n=args.n, method=args.method), rows, None


def cmd_outlier(args, ctx):
    problem = _problem(args, args.n)
    if regime(problem) <= 0:
        raise DomainError(f"no negative eigenvalue: n={args.n} does not exceed kappa={problem.kappa}")
    sol = solve_outlier(problem, ctx, args.method)
    report = asymptotic_report(problem, ctx, inner=False)
    consts = constants(problem, ctx)
    row = {
        "n": args.n, "s": sol.s, "lambda1": sol.lambda1,
        "s_asympt": s_asympt(problem, ctx), "lambda1_asympt": lambda_asympt_outlier(problem, ctx),
        "R1": report.R1, "abs_R1": abs(report.R1), "scaled_error": report.scaled_outlier,
        "ell": sol.ell, "omega": consts.omega, "method": sol.method, "iterations": sol.iterations,
    }
    return "outlier", _params(args, problem, n=args.n, method=args.method), [row], None


def cmd_eigvec(args, ctx):
    problem = _problem(args, args.n)
    record = eigenvalue_record(problem, args.j, ctx, args.method)
    ev = eigenvector(problem, record, ctx, normalize=args.normalize)
    rows = [{"k": k, "component": v} for k, v in enumerate(ev.components, start=1)]
    data = {
        "j": ev.j, "lambda": ev.lam, "kind": ev.kind, "normalized": args.normalize,
        "norm_exact": ev.norm_exact, "norm_asympt": ev.norm_asympt, "residual": ev.residual,
        "components": list(ev.components),
    }
    return "eigvec", _params(args, problem, n=args.n, j=args.j), rows, data


def _n_values(args) -> list[int]:
    if args.n_list:
        return args.n_list
    values, n = [], args.n
    while n <= args.n_max:
        values.append(n)
        n *= 2
    if not values:
        raise DomainError("empty n range")
    return values


def _table(args, ctx, inner: bool):
    problem = _problem(args)
    rows = []
    for n in _n_values(args):
        report = asymptotic_report(problem.with_n(n), ctx, inner=inner, outlier=not inner)
        if inner:
            error, scaled = report.max_abs_R, report.scaled_inner
            extra = {"error_with_j2": report.max_abs_R_with_j2}
        else:
            error, scaled = abs(report.R1), report.scaled_outlier
            extra = {}
        rows.append({
            "n": n, "error": report.display(error), "scaled_error": report.display(scaled),
            "error_full": error, "scaled_error_full": scaled, **extra,
        })
    kind = "table1" if inner else "table2"
    return kind, _params(args, problem), rows, None


def cmd_table1(args, ctx):
    return _table(args, ctx, inner=True)


def cmd_table2(args, ctx):
    return _table(args, ctx, inner=False)


def _grid(lo, hi, samples: int):
    if samples < 2:
        raise DomainError("--samples must be at least 2")
    return [lo + (hi - lo) * i / (samples - 1) for i in range(samples)]


def _plot_rows(args, ctx, problem: SpectralProblem) -> list[dict]:
    n = problem.n
    kappa = problem.kappa
    rows: list[dict] = []

    def add(series, x, y):
        rows.append({"series": series, "x": x, "y": y})

    with ctx.scope():
        pi = gmpy2.const_pi()
        if args.what == "g-spline":
            records = full_spectrum(problem, ctx)
            left = constants(problem, ctx).omega + mpfr(1) / 2
            for x in _grid(mpfr(0), pi, args.samples):
                add("g", x, g_ext(x))
            for x in _grid(-left, mpfr(0), args.samples):
                add("g_minus_reflected", x, g_minus(-x))
            for r in records:
                x = -r.root if r.variable == "s" else r.root
                add("eigenvalues", x, r.lam)
        elif args.what == "eta":
            for x in _grid(mpfr(0), pi, args.samples):
                add("eta", x, eta(x, kappa))
            for j in range(2, n + 1, 2):
                for x in _grid(pi * (j - 2) / n, pi * (j - 1) / n, 3):
                    add(f"line_j{j}", x, n * x - (j - 1) * pi)
        elif args.what in ("phi", "f"):
            if regime(problem) <= 0:
                raise DomainError(f"phi and f are plotted for n > kappa; kappa={kappa}")
            consts = constants(problem, ctx)
            ell_value = ell(problem, consts, ctx)
            k = mpfr(kappa)
            xs = _grid(ell_value / 4, consts.omega + 1, args.samples)
            at_ell = phi(ell_value, n, k)
            for x in xs:
                value = phi(x, n, k)
                if args.what == "phi":
                    add("phi", x, value)
                    add("identity", x, x)
                    add("tangent_at_ell", x, at_ell + (x - ell_value))
                else:
                    add("f", x, x - value)
                    add("tangent_at_ell", x, ell_value - at_ell)
        else:
            indices = args.j or ([1] if regime(problem) > 0 else []) + list(range(4, n + 1, 4))
            for j in indices:
                record = eigenvalue_record(problem, j, ctx)
                for x, w in profile(problem, record, args.samples, ctx):
                    add(f"w_j{j}", x, w)
                for k, v in enumerate(components(problem, record, ctx), start=1):
                    add(f"v_j{j}", mpfr(k), v)
    return rows


def cmd_plotdata(args, ctx):
    problem = _problem(args, args.n)
    problem.require_negative()
    rows = _plot_rows(args, ctx, problem)
    return "plotdata", _params(args, problem, n=args.n, what=args.what), rows, None


def cmd_verify(args, ctx):
    external = load_external_spectra(args.gen_file) if args.gen_file else None
    alphas = None
    if args.alphas:
        alphas = [parse_alpha(part)[0] for part in args.alphas.split(",")]
    report = run_sweep(alphas, n_max=args.n_max, ctx=ctx, oracle_bits=args.oracle_bits,
                       oracle_n_max=args.oracle_n_max, workers=args.workers)
    rows = summary_rows(report)
    data = {
        "passed": report.passed,
        "summary": rows,
        "failures": report.failures(),
        "alphas": [str(a) for a in (alphas or sweep_alphas())],
        "cases": len(report.cases),
    }
    if external is not None:
        data["external"] = compare_external(external, ctx)
    params = {"prec_bits": args.prec_bits, "n_max": args.n_max, "oracle_bits": args.oracle_bits,
              "oracle_n_max": args.oracle_n_max}
    return "verify", params, rows, data, report.passed


COMMANDS = {
    "constants": cmd_constants,
    "spectrum": cmd_spectrum,
    "outlier": cmd_outlier,
    "eigvec": cmd_eigvec,
    "table1": cmd_table1,
    "table2": cmd_table2,
    "plotdata": cmd_plotdata,
    "verify": cmd_verify,
}


def _write(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    ctx = PrecisionContext(args.prec_bits)
    result = COMMANDS[args.command](args, ctx)
    kind, params, rows, data = result[:4]
    digits = args.digits or ctx.digits
    _write(render(kind, params, rows, digits, args.format, data), args.out)
    if len(result) > 4 and not result[4]:
        raise VerificationError("verification thresholds violated")
    return 0


def main(argv=None) -> int:
    try:
        return run(argv)
    except CycleSpectraError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
