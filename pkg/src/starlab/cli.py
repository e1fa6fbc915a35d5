"""Command-line front end: ``starlab <command> ...``.

Exit status is 0 when a report has no failing entry, 1 when it has one,
and 2 for bad input (unparsable symbols, unknown suites, bad options).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import __version__, calogero, covariance, landau
from .errors import ConfigError, ModeMismatch, ParseError, StarlabError
from .heisenberg import ExtendedStarContext, coeff_table, extended_star, voros_star
from .report import FORMATS, VerificationReport
from .suites import SU11_INDICES, SUITES, RunConfig, calogero_suite_report, run_suite, su11_report
from .symbols import PhaseSymbol, variables

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _emit(text, output=None):
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _finish(report, args):
    _emit(report.render(args.format), getattr(args, "output", None))
    return EXIT_OK if report.passed else EXIT_FAIL


def _add_report_opts(p):
    p.add_argument("--format", choices=FORMATS, default="json", help="report format (default json)")
    p.add_argument("--output", "-o", help="write the report to this file instead of stdout")


def _parse_kvec(text):
    try:
        return tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise ConfigError(f"--k expects comma-separated nonnegative integers, got {text!r}") from None


def _read_symbol(path, exact):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return PhaseSymbol.from_json(text, exact=exact)
    except ParseError as exc:
        err = ParseError(f"{path}: {exc}")
        err.position = exc.position
        raise err from None


# -- commands -----------------------------------------------------------------------


def cmd_verify(args):
    cfg = RunConfig(seed=args.seed, grid=args.grid, tol=args.tol, fmt=args.format)
    return _finish(run_suite(args.suite, cfg), args)


def cmd_star(args):
    f = _read_symbol(args.f, args.exact)
    g = _read_symbol(args.g, args.exact)
    if f.modes != g.modes:
        raise ModeMismatch(f"{args.f} has {f.modes} modes, {args.g} has {g.modes}")
    if args.kind == "voros":
        out = voros_star(f, g)
    else:
        kvec = _parse_kvec(args.k) if args.k else (0,) * f.modes
        if len(kvec) != f.modes:
            raise ModeMismatch(f"--k gives {len(kvec)} levels for {f.modes}-mode symbols")
        out = extended_star(f, g, ExtendedStarContext(kvec))
    _emit(out.to_json(indent=args.indent), args.output)
    return EXIT_OK


def cmd_icoeff(args):
    if args.k < 0 or args.pmax < 0:
        raise ConfigError("--k and --pmax must be nonnegative")
    rows = list(coeff_table(args.k, args.pmax).rows())
    if args.format == "json":
        text = json.dumps({"k": args.k, "p_max": args.pmax, "rows": rows}, indent=2, sort_keys=True) + "\n"
    else:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=["k", "p", "exact", "value", "quadrature", "printed"], lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        text = buf.getvalue()
    _emit(text, args.output)
    return EXIT_OK


def cmd_su11(args):
    cfg = RunConfig(seed=args.seed, grid=args.grid, fmt=args.format)
    report = su11_report(cfg, ks=tuple(args.k))
    return _finish(report, args)


def cmd_calogero_verify(args):
    cfg = RunConfig(seed=args.seed, grid=args.grid, fmt=args.format)
    return _finish(calogero_suite_report(cfg, etas=tuple(args.eta)), args)


def cmd_calogero_spectrum(args):
    if args.n < 1:
        raise ConfigError("--n must be at least 1")
    osc = calogero.SingularOscillator(args.eta, cutoff=max(args.n, 2))
    rows = [{"n": n, "e_n": float(e)} for n, e in enumerate(osc.energies(args.n))]
    header = {"eta": args.eta, "alpha": osc.alpha, "e0": osc.e0, "bargmann_index": osc.calibrated_k}
    if args.format == "json":
        text = json.dumps({**header, "levels": rows}, indent=2, sort_keys=True) + "\n"
    elif args.format == "csv":
        text = "n,e_n\n" + "".join(f"{r['n']},{r['e_n']!r}\n" for r in rows)
    else:
        lines = [f"eta = {args.eta:g}, e0 = {osc.e0:.12g}", "", "| n | e_n |", "|---|---|"]
        lines += [f"| {r['n']} | {r['e_n']:.12g} |" for r in rows]
        text = "\n".join(lines) + "\n"
    _emit(text, args.output)
    return EXIT_OK


def cmd_covariance(args):
    try:
        xi = complex(args.xi.replace(" ", ""))
    except ValueError:
        raise ConfigError(f"--xi expects a complex number such as 0.3 or 0.1+0.2j, got {args.xi!r}") from None
    if args.observable:
        f = _read_symbol(args.observable, False)
    else:
        (z,), (zb,) = variables(1)
        f = zb * z
    if f.modes != 1:
        raise ModeMismatch("the covariance command works with one-mode observables")
    report = VerificationReport("covariance")
    if args.noncanonical:
        gen = covariance.cubic_generator()
        report.extend(covariance.covariance_report(f, gen, canonical=False, order=args.order))
    else:
        gen = covariance.squeeze_generator([[xi]])
        report.extend(covariance.covariance_report(f, gen, canonical=True, tol=args.tol))
        report.extend(covariance.block_check([[xi]]))
    report.environment["xi"] = [xi.real, xi.imag]
    return _finish(report, args)


def cmd_landau(args):
    if args.kmax < 0:
        raise ConfigError("--kmax must be nonnegative")
    report = landau.landau_report(args.kmax, args.lmax)
    return _finish(report, args)


# -- parser ---------------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(prog="starlab", description="Coherent-state star products and their verification.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=SUITES + ("all",))
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--grid", type=int, default=None, help="number of sample points")
    p.add_argument("--tol", type=float, default=None, help="override oracle tolerances")
    _add_report_opts(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("star", help="star product of two symbols given as JSON files")
    p.add_argument("--kind", choices=("voros", "extended"), default="voros")
    p.add_argument("--k", default=None, help="comma-separated reference levels, one per mode")
    p.add_argument("--exact", action="store_true", help="read coefficients as exact rationals")
    p.add_argument("--indent", type=int, default=None)
    p.add_argument("--output", "-o")
    p.add_argument("f")
    p.add_argument("g")
    p.set_defaults(func=cmd_star)

    p = sub.add_parser("icoeff", help="table of the extended-product coefficients")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--pmax", type=int, default=8)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_icoeff)

    p = sub.add_parser("su11", help="su(1,1) star relations")
    s = p.add_subparsers(dest="action", required=True)
    q = s.add_parser("verify")
    q.add_argument("--k", type=float, nargs="+", default=list(SU11_INDICES))
    q.add_argument("--grid", type=int, default=None)
    q.add_argument("--seed", type=int, default=7)
    _add_report_opts(q)
    q.set_defaults(func=cmd_su11)

    p = sub.add_parser("calogero", help="singular oscillator")
    s = p.add_subparsers(dest="action", required=True)
    q = s.add_parser("verify")
    q.add_argument("--eta", type=float, nargs="+", default=list(calogero.DEFAULT_ETAS))
    q.add_argument("--grid", type=int, default=None)
    q.add_argument("--seed", type=int, default=7)
    _add_report_opts(q)
    q.set_defaults(func=cmd_calogero_verify)
    q = s.add_parser("spectrum")
    q.add_argument("--eta", type=float, required=True)
    q.add_argument("--n", type=int, default=10)
    q.add_argument("--format", choices=FORMATS, default="md")
    q.add_argument("--output", "-o")
    q.set_defaults(func=cmd_calogero_spectrum)

    p = sub.add_parser("covariance", help="covariance of an observable under a squeeze or the cubic map")
    p.add_argument("--xi", default="0.3", help="squeeze parameter, e.g. 0.3 or 0.1+0.2j")
    p.add_argument("--observable", help="observable symbol JSON (default zbar z)")
    p.add_argument("--noncanonical", action="store_true", help="use the cubic generator 0.1 (zbar^3 - z^3)")
    p.add_argument("--order", type=int, default=4, help="truncation order for the cubic flow")
    p.add_argument("--tol", type=float, default=1e-7)
    _add_report_opts(p)
    p.set_defaults(func=cmd_covariance)

    p = sub.add_parser("landau", help="Landau-level identification")
    s = p.add_subparsers(dest="action", required=True)
    q = s.add_parser("verify")
    q.add_argument("--kmax", type=int, default=3)
    q.add_argument("--lmax", type=int, default=3)
    _add_report_opts(q)
    q.set_defaults(func=cmd_landau)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"starlab: parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConfigError, ModeMismatch) as exc:
        print(f"starlab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except StarlabError as exc:
        print(f"starlab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
