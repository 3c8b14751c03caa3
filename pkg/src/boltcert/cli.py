"""Command-line front end.

Subcommands: solve, certify, bolts, report, selftest. Results and
certificates are emitted as JSON on stdout; diagnostics go to stderr.
Exit codes: 0 success/Optimal, 1 NotOptimal or no bolt found, 2 malformed
input, 3 internal solver failure, 4 Undecided.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys

from . import __version__
from .bolts import bolt_functional, default_tolerance, extremal_point_sets, find_closed_extremal_bolt
from .errors import BoltcertError, InputFormatError, SolverInternalError
from .selftest import run_all
from .serialize import (
    bolt_to_jsonable,
    certificate_to_jsonable,
    dumps,
    load_problem,
    result_to_jsonable,
)
from .solvers import SolveMethod, Verdict, certify, diliberto_straus, solve_lp
from .space import evaluate_sum, uniform_norm

EXIT_OK = 0
EXIT_NEGATIVE = 1      # NotOptimal verdict / no bolt found
EXIT_BAD_INPUT = 2
EXIT_INTERNAL = 3
EXIT_UNDECIDED = 4

_VERDICT_EXIT = {
    Verdict.OPTIMAL: EXIT_OK,
    Verdict.NOT_OPTIMAL: EXIT_NEGATIVE,
    Verdict.UNDECIDED: EXIT_UNDECIDED,
}


def _env_tol() -> float | None:
    raw = os.environ.get("BOLTCERT_TOL")
    if raw is None:
        return None
    try:
        value = float(raw)
    except ValueError:
        raise InputFormatError(
            f"BOLTCERT_TOL={raw!r} is not a number", field="BOLTCERT_TOL"
        ) from None
    if value <= 0:
        raise InputFormatError(
            "BOLTCERT_TOL must be positive", field="BOLTCERT_TOL"
        )
    return value


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _solve(space, f, args):
    method = SolveMethod(args.method)
    if method is SolveMethod.LP:
        return solve_lp(space, f, tol=args.tol if args.tol else 1e-9)
    return diliberto_straus(space, f, max_iter=args.max_iter, tol=args.tol)


def cmd_solve(args) -> int:
    space, f, _ = load_problem(args.problem)
    result = _solve(space, f, args)
    _emit(dumps(result_to_jsonable(result), indent=2), args.out)
    return EXIT_OK


def cmd_certify(args) -> int:
    space, f, u0 = load_problem(args.problem)
    if u0 is None:
        raise InputFormatError(
            "certify needs a problem file with a u0 entry", field="u0"
        )
    cert = certify(space, f, u0, tol=args.tol)
    _emit(dumps(certificate_to_jsonable(space, cert), indent=2), args.out)
    return _VERDICT_EXIT[cert.verdict]


def cmd_bolts(args) -> int:
    space, f, u0 = load_problem(args.problem)
    if args.emit_svg and space.coords is None:
        raise InputFormatError(
            "--emit-svg needs a space with coords", field="coords"
        )
    if u0 is None:
        u0 = solve_lp(space, f, tol=args.tol if args.tol else 1e-9).u
    residual = f - evaluate_sum(space, u0)
    err = uniform_norm(residual)
    tol_eff = args.tol if args.tol else default_tolerance(err)
    bolt = find_closed_extremal_bolt(space, residual, tol_eff)
    plus, minus = extremal_point_sets(residual, tol_eff)

    payload = {
        "error": err,
        "extremal_plus": sorted(plus),
        "extremal_minus": sorted(minus),
        "found": bolt is not None,
    }
    if err <= tol_eff:
        payload["note"] = (
            "residual is zero within tolerance; the approximant is "
            "trivially optimal"
        )
    if bolt is not None:
        payload["bolt"] = bolt_to_jsonable(space, bolt)
        payload["functional_value"] = bolt_functional(bolt, residual)
    else:
        payload["note"] = payload.get("note", "none found")

    if args.emit_svg:
        from .diagrams import save_bolt_diagram

        save_bolt_diagram(space, residual, bolt, args.emit_svg, tol=tol_eff)
        payload["svg"] = args.emit_svg
    _emit(dumps(payload, indent=2), args.out)
    if bolt is None and err > tol_eff:
        return EXIT_NEGATIVE
    return EXIT_OK


def cmd_report(args) -> int:
    from .diagrams import (
        save_bolt_diagram,
        save_error_history_diagram,
        save_residual_diagram,
    )

    space, f, u0 = load_problem(args.problem)
    os.makedirs(args.outdir, exist_ok=True)
    result = _solve(space, f, args)
    target = u0 if u0 is not None else result.u
    cert = certify(space, f, target, tol=args.tol)
    residual = f - evaluate_sum(space, target)
    u_vals = evaluate_sum(space, target).values

    rows_path = os.path.join(args.outdir, "report.csv")
    with open(rows_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["point", "label", "s_class", "p_class", "f", "u", "residual", "extremal"]
        )
        tol_eff = args.tol if args.tol else default_tolerance(cert.error)
        plus, minus = extremal_point_sets(residual, tol_eff)
        for i in range(space.n_points):
            mark = "+" if i in plus else ("-" if i in minus else "")
            writer.writerow([
                i, space.point_name(i),
                int(space.s_class[i]), int(space.p_class[i]),
                repr(float(f.values[i])), repr(float(u_vals[i])),
                repr(float(residual.values[i])), mark,
            ])

    result_path = os.path.join(args.outdir, "result.json")
    with open(result_path, "w", encoding="utf-8") as fh:
        fh.write(dumps(result_to_jsonable(result), indent=2) + "\n")
    cert_path = os.path.join(args.outdir, "certificate.json")
    with open(cert_path, "w", encoding="utf-8") as fh:
        fh.write(dumps(certificate_to_jsonable(space, cert), indent=2) + "\n")

    figures = []
    residual_fig = os.path.join(args.outdir, "residual.svg")
    save_residual_diagram(space, residual, residual_fig)
    figures.append(residual_fig)
    if space.coords is not None:
        bolt_fig = os.path.join(args.outdir, "bolt.svg")
        save_bolt_diagram(space, residual, cert.bolt, bolt_fig)
        figures.append(bolt_fig)
    if result.history is not None:
        hist_fig = os.path.join(args.outdir, "history.svg")
        save_error_history_diagram(result.history, hist_fig)
        figures.append(hist_fig)

    _emit(dumps({
        "verdict": cert.verdict.value,
        "error": cert.error,
        "csv": rows_path,
        "result": result_path,
        "certificate": cert_path,
        "figures": figures,
    }, indent=2), args.out)
    return _VERDICT_EXIT[cert.verdict]


def cmd_selftest(args) -> int:
    results = run_all(args.seed)
    failed = False
    for name, failures in results.items():
        status = "ok" if not failures else f"FAILED ({len(failures)} counterexamples)"
        print(f"{name}: {status}", file=sys.stderr)
        for record in failures:
            failed = True
            print(dumps(record))
    return EXIT_NEGATIVE if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="boltcert",
        description=(
            "Best uniform approximation by sums of two partition-induced "
            "algebras, with bolt and dual-measure optimality certificates."
        ),
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_method=False):
        p.add_argument("problem", help="problem file (JSON, or CSV grid shorthand)")
        p.add_argument("--tol", type=float, default=None,
                       help="tolerance (default: scale-relative 1e-9; "
                            "env BOLTCERT_TOL overrides the default)")
        p.add_argument("--out", default=None, help="write output JSON to this file")
        if with_method:
            p.add_argument("--method", choices=["lp", "ds"], default="lp")
            p.add_argument("--max-iter", type=int, default=10000)

    p_solve = sub.add_parser("solve", help="compute a best approximation")
    add_common(p_solve, with_method=True)
    p_solve.set_defaults(run=cmd_solve)

    p_cert = sub.add_parser("certify", help="certify a given approximant u0")
    add_common(p_cert)
    p_cert.set_defaults(run=cmd_certify)

    p_bolts = sub.add_parser("bolts", help="show the witness closed extremal bolt")
    add_common(p_bolts)
    p_bolts.add_argument("--emit-svg", default=None, metavar="PATH",
                         help="draw the bolt diagram (needs coords)")
    p_bolts.set_defaults(run=cmd_bolts)

    p_report = sub.add_parser(
        "report", help="solve, certify, and write CSV plus figures to a directory"
    )
    add_common(p_report, with_method=True)
    p_report.add_argument("--outdir", default="boltcert_report")
    p_report.set_defaults(run=cmd_report)

    p_self = sub.add_parser("selftest", help="run the fuzzed invariant suites")
    p_self.add_argument("--seed", type=int, default=0)
    p_self.set_defaults(run=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "tol", None) is None and args.command != "selftest":
            args.tol = _env_tol()
        if getattr(args, "tol", None) is not None and args.tol <= 0:
            raise InputFormatError("--tol must be positive", field="tol")
        return args.run(args)
    except InputFormatError as exc:
        print(f"boltcert: input error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except SolverInternalError as exc:
        print(f"boltcert: solver failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except BoltcertError as exc:
        print(f"boltcert: error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
