"""
main.py
-------
Command-line entry point: `python main.py <command> [flags]`.

Every command goes through a run_* function in document_service and prints the
resulting report; `--json-out PATH` also writes it as JSON. Exit status is 0 on
success, 2 on a parse or validation error, and 1 when `--expect` is given and
the decision differs.
"""

import argparse
import sys

from acceptance import run_suite
from config import DEFAULT_BOUND_COLS, DEFAULT_BOUND_VARS
from document_service import (
    report_lines,
    resolve_ring,
    run_abspure,
    run_demo_eps,
    run_dual,
    run_embed,
    run_equiv,
    run_eval,
    run_flat,
    run_herzog,
    run_ideal,
    run_implies,
    run_kernel,
    run_loc_iso,
    run_morphism_check,
    run_pair_value,
    run_pure,
    run_qe,
    run_serre,
    run_validate,
    run_vnr,
    run_vnr_harness,
)
from errors import DocumentError, PpCalcError
from persistence import log_action, save_report

PAIR_ACTIONS = ("value", "morphism-check", "kernel", "serre", "loc-iso", "demo-4-3", "demo")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ppcalc", description="Exact pp-formula calculus over finite rings and ringoids")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, help_text: str, ring: bool = True, module: bool = False, formula: bool = False):
        p = sub.add_parser(name, help=help_text)
        if ring:
            p.add_argument("--ring", help="built-in ring name (z4, z6, f2e, f3e, z2xz2, m2f2, a2f2, zero)")
            p.add_argument("--ring-file", help="ringoid document (JSON)")
        if module:
            p.add_argument("--module", help="module expression, e.g. 'regular+s1'")
            p.add_argument("--module-file", help="module document (JSON)")
        if formula:
            p.add_argument("--formula", required=True, help="pp formula in DSL syntax")
        p.add_argument("--side", choices=("left", "right"), default="right")
        p.add_argument("--json-out", help="also write the report to this path")
        p.add_argument("--expect", help="expected decision; exit 1 when it differs")
        p.add_argument("--timings", action="store_true", help="include timings in the report")
        return p

    p = command("validate", "validate a ringoid or module document")
    p.add_argument("file")

    p = command("eval", "evaluate a formula on a module", module=True, formula=True)
    p.add_argument("--method", choices=("structured", "enumerate", "auto"), default="structured")

    command("dual", "elementary dual of a formula", formula=True)

    for name in ("implies", "equiv"):
        p = command(name, "compare two formulas" if name == "equiv" else "does the first formula imply the second")
        p.add_argument("first")
        p.add_argument("second")

    command("ideal", "the ideal a one-variable formula defines in R", formula=True)

    p = command("herzog", "decide r (x) s = 0 with a witness formula")
    p.add_argument("--right-module", required=True)
    p.add_argument("--left-module", required=True)
    p.add_argument("--r", required=True, help="tuple from the right module, e.g. '2' or 'Q:1'")
    p.add_argument("--s", required=True, help="tuple from the left module")

    p = command("pure", "purity of the submodule generated by a tuple", module=True)
    p.add_argument("--sub", required=True, help="generators of the submodule")
    p.add_argument("--epi", action="store_true", help="test the projection onto the quotient instead")

    for name in ("flat", "abspure"):
        p = command(name, f"{'flatness' if name == 'flat' else 'absolute purity'} of a module", module=True)
        p.add_argument("--bound-vars", type=int, default=DEFAULT_BOUND_VARS)
        p.add_argument("--bound-cols", type=int, default=2)

    command("vnr", "von Neumann regularity")

    p = command("pairs", "pp-pairs and their morphisms", module=True)
    p.add_argument("action", choices=PAIR_ACTIONS)
    p.add_argument("--top", help="top formula of the (first) pair")
    p.add_argument("--bottom", help="bottom formula of the (first) pair")
    p.add_argument("--top2", help="top formula of the second pair")
    p.add_argument("--bottom2", help="bottom formula of the second pair")
    p.add_argument("--rho", help="formula defining a morphism, source variables first")
    p.add_argument("--generators", help="comma-separated module expressions generating the definable subcategory")
    p.add_argument("--field", default="f2", help="for demo-4-3: f2 or f3")
    p.add_argument("--bound", type=int, default=64)

    p = command("qe", "search for a quantifier-free equivalent", formula=True)
    p.add_argument("--bound-vars", type=int, default=DEFAULT_BOUND_VARS, help="unused: quantifier-free candidates have no bound variables")
    p.add_argument("--bound-cols", type=int, default=DEFAULT_BOUND_COLS)

    p = command("embed", "search for an embedding of a pair into a home sort")
    p.add_argument("--top", required=True)
    p.add_argument("--bottom", required=True)
    p.add_argument("--bound", type=int, default=64)
    p.add_argument("--bound-vars", type=int, default=DEFAULT_BOUND_VARS, help="unused: embeddings are searched as matrices")
    p.add_argument("--bound-cols", type=int, default=DEFAULT_BOUND_COLS, help="unused: embeddings are searched as matrices")

    p = command("vnr-harness", "regularity against both eliminations")
    p.add_argument("--free-vars", type=int, default=1, help="free variables of the sampled formulas")
    p.add_argument("--bound-vars", type=int, default=DEFAULT_BOUND_VARS)
    p.add_argument("--bound-cols", type=int, default=1)

    for name in ("demo-4-3", "demo-eps"):
        p = command(name, "the five sorts over F_p[e]", ring=False)
        p.add_argument("--field", default="f2", help="f2 or f3")

    p = command("suite", "run the reproduction suite", ring=False)
    p.add_argument("--only", help="comma-separated criterion numbers")
    return parser


def _need(value, flag: str):
    if not value:
        raise DocumentError(f"{flag} is required for this command")
    return value


def _pairs(args):
    R = resolve_ring(args.ring, args.ring_file)
    first = (_need(args.top, "--top"), _need(args.bottom, "--bottom"))
    if args.action == "value":
        return run_pair_value(R, *first, args.module, args.side, args.timings)
    if args.action == "serre":
        return run_serre(R, *first, args.generators, args.side, args.timings)
    second = (_need(args.top2, "--top2"), _need(args.bottom2, "--bottom2"))
    if args.action == "loc-iso":
        return run_loc_iso(R, first, second, args.generators, args.side, args.bound, args.timings)
    rho = _need(args.rho, "--rho")
    if args.action == "kernel":
        return run_kernel(R, rho, first, second, args.side, args.timings)
    return run_morphism_check(R, rho, first, second, args.side, args.timings)


def dispatch(args):
    """Run one parsed command and return its report."""
    c = args.command
    if c == "validate":
        return run_validate(args.file, args.ring, args.timings)
    if c in ("demo-4-3", "demo-eps"):
        return run_demo_eps(args.field, args.timings, c)
    if c == "suite":
        only = [int(n) for n in args.only.split(",")] if args.only else None
        return run_suite(only, verbose=True, timings=args.timings)
    if c == "pairs" and args.action in ("demo-4-3", "demo"):
        return run_demo_eps(args.field, args.timings)
    if c == "pairs":
        return _pairs(args)

    R = resolve_ring(args.ring, args.ring_file)
    if c == "eval":
        return run_eval(R, args.module, args.formula, args.side, args.method, args.module_file, args.timings)
    if c == "dual":
        return run_dual(R, args.formula, args.side, args.timings)
    if c == "implies":
        return run_implies(R, args.first, args.second, args.side, args.timings)
    if c == "equiv":
        return run_equiv(R, args.first, args.second, args.side, args.timings)
    if c == "ideal":
        return run_ideal(R, args.formula, args.side, args.timings)
    if c == "herzog":
        return run_herzog(R, args.right_module, args.left_module, args.r, args.s, args.timings)
    if c == "pure":
        return run_pure(R, args.module, args.sub, args.side, args.epi, args.module_file, args.timings)
    if c == "flat":
        return run_flat(R, args.module, args.side, args.bound_vars, args.bound_cols, args.module_file, args.timings)
    if c == "abspure":
        return run_abspure(R, args.module, args.side, args.bound_vars, args.bound_cols, args.module_file, args.timings)
    if c == "vnr":
        return run_vnr(R, args.timings)
    if c == "qe":
        return run_qe(R, args.formula, args.side, args.bound_cols, args.timings)
    if c == "embed":
        return run_embed(R, args.top, args.bottom, args.side, args.bound, args.timings)
    if c == "vnr-harness":
        return run_vnr_harness(R, args.side, args.bound_vars, args.bound_cols, args.timings, args.free_vars)
    raise DocumentError(f"unknown command {c!r}")


def execute(argv=None) -> int:
    """Parse argv, run the command, print the report; returns the exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0

    try:
        report = dispatch(args)
    except PpCalcError as e:
        print(f"❌ {type(e).__name__}: {e}")
        log_action(f"Command '{args.command}' failed: {type(e).__name__}: {e}")
        return 2

    for line in report_lines(report):
        print(line)
    if args.json_out:
        path = save_report(report, args.json_out)
        print(f"✅ Report written to {path}")

    if args.expect is not None and str(report.decision) != args.expect:
        print(f"❌ Expected '{args.expect}', got '{report.decision}'")
        return 1
    if args.command == "suite" and report.decision != "pass":
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(execute())
