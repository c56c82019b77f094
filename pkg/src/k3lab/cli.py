"""Command-line front end: ``k3lab <group> <task> [options]``.

Exit codes: 0 when every check passes, 1 when a check fails, 2 for usage errors.
"""

from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

from . import acceptance, arith, buchi, lattice
from .exact import parse_scalar
from .kummer import (
    FamilyParams,
    automorphism_bruteforce,
    conics,
    fiber_decomposition,
    fibration,
    genus2_data,
    klein_system,
    line_graph,
    lines,
    locus_classify,
    partition_L,
    rank4_analysis,
    sections_o_q,
    singular_fibers,
)
from .kummer.locus import branch_evaluations
from .reports import Check, Report, emit

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    pass


def _params(args) -> FamilyParams:
    if getattr(args, "symbolic", False):
        return FamilyParams.symbolic()
    return FamilyParams(args.t, args.s)


def _param_echo(args) -> dict:
    skip = {"func", "group", "task", "json", "threads", "format"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}


# buchi --------------------------------------------------------------------------


def buchi_system_task(args) -> tuple:
    system = buchi.buchi_system(args.n)
    return system.to_json(), [Check("number of quadrics", args.n - 2, len(system.coefficients))]


def buchi_minors_task(args) -> tuple:
    if args.all or args.a is None:
        specs = buchi.all_minor_specs(args.n)
    else:
        specs = [buchi.MinorSpec(args.n, args.a, args.b, args.c)]
    rows, checks = [], []
    for spec in specs:
        closed = buchi.minor_det_closed(spec)
        brute = buchi.minor_det_brute(spec)
        rows.append({"a": spec.a, "b": spec.b, "c": spec.c, "closed_form": closed, "brute_force": brute})
        checks.append(Check(f"minor ({spec.a},{spec.b},{spec.c})", closed, brute))
    det_a = buchi.cartan_data(args.n)[0].det()
    checks.append(Check("det A_n", (-1) ** args.n * (args.n + 1), det_a))
    return {"n": args.n, "minors": rows, "det_A": det_a}, checks


def buchi_smooth_task(args) -> tuple:
    rep = buchi.smoothness_report(args.n, args.p)
    expected = "singular" if 0 < args.p < args.n else "smooth"
    checks = [Check("verdict matches the coordinate-congruence criterion", expected, rep.verdict)]
    if 0 < args.p < args.n:
        checks.append(Check("components", 2 ** (args.n - args.p), rep.components))
    return rep, checks


def buchi_family_task(args) -> tuple:
    ident = buchi.family_identity()
    out = {"family": list(buchi.FAMILY), "identity_residuals": [str(r) for r in ident]}
    checks = [Check("family lies on X_5 identically", True, all(r.is_zero() for r in ident))]
    if args.alpha is not None:
        alpha = Fraction(args.alpha)
        pt = buchi.family_point(alpha)
        verdict = buchi.is_trivial(pt)
        out["point"] = {
            "alpha": alpha,
            "coords": pt.to_json(),
            "primitive": list(pt.primitive()),
            "triviality": verdict.to_json(),
            "sign_oracle_trivial": buchi.sign_pattern_oracle(pt),
        }
        checks.append(Check("squares criterion agrees with the sign oracle", verdict.trivial, buchi.sign_pattern_oracle(pt)))
    return out, checks


def buchi_search_task(args) -> tuple:
    hits = buchi.integer_search(args.n, args.bound)
    system = buchi.buchi_system(args.n)
    ok = all(not any(system.residuals(list(p))) for p, _ in hits)
    return (
        {"n": args.n, "bound": args.bound, "solutions": [{"point": list(p), "status": s} for p, s in hits]},
        [Check("solutions satisfy the system", True, ok)],
    )


def buchi_lines_task(args) -> tuple:
    found = buchi.lines_of_X(args.n)
    return (
        {"n": args.n, "lines": [{"signs": ln.label(), "on_X": ok} for ln, ok in found]},
        [Check("all sign patterns give lines", True, all(ok for _, ok in found)), Check("line count", 2**args.n, len(found))],
    )


def buchi_x4_task(args) -> tuple:
    res = buchi.x4_param_check()
    rec = buchi.x4_recorded_verdict()
    return res, [
        Check("verdict equals the recorded verdict", rec["verdict"], res["verdict"]),
        Check("symbolic flags equal the recorded ones", rec["symbolic_identically_zero"], res["symbolic_identically_zero"]),
    ]


# kummer -------------------------------------------------------------------------


def kummer_system_task(args) -> tuple:
    p = _params(args)
    checks = [] if p.is_symbolic else [Check("parameters give a smooth member", True, p.smooth)]
    return klein_system(p), checks


def kummer_lines_task(args) -> tuple:
    found = lines(_params(args))
    return (
        {"lines": [{"label": ln.name, "on_X": ok} for ln, ok in found]},
        [Check("32 lines on X_{t,s}", 32, sum(1 for _, ok in found if ok))],
    )


def kummer_graph_task(args) -> tuple:
    g = line_graph(_params(args))
    parts = g.bipartition()
    return g, [
        Check("connected", True, g.connected()),
        Check("6-regular", [6], sorted(g.degrees())),
        Check("bipartition", [16, 16], None if parts is None else sorted(len(x) for x in parts)),
        Check("geometric intersections agree", True, g.geometric_agrees),
    ]


def kummer_quadrics_task(args) -> tuple:
    res = rank4_analysis(_params(args))
    return res, [
        Check("all elimination quadrics match the table", True, res.all_matched),
        Check("all have rank four", True, res.all_rank_four),
        Check("no rank-three member", True, res.no_rank_three),
    ]


def kummer_auts_task(args) -> tuple:
    res = automorphism_bruteforce(_params(args))
    return res, [
        Check("closed under composition", True, res.closed),
        Check("contains tau", True, res.contains_tau),
    ]


def kummer_locus_task(args) -> tuple:
    rep = locus_classify(_params(args))
    return {"classification": rep, "branches": branch_evaluations(_params(args))}, []


def kummer_fibers_task(args) -> tuple:
    fib = fibration(args.which)
    if args.base is not None:
        base = "inf" if args.base == "inf" else parse_scalar(args.base)
        return fiber_decomposition(fib, base), []
    fibers = singular_fibers(fib)
    return (
        {"fibration": fib.name, "base_map": list(fib.base_map()), "singular_fibers": fibers},
        [
            Check("Euler sum", 24, sum(f.euler for f in fibers)),
            Check("degree sums", [4] * len(fibers), [sum(f.degrees) for f in fibers]),
            Check("base relation lies in the net", True, fib.relation_in_ideal()),
        ],
    )


def kummer_genus2_task(args) -> tuple:
    return genus2_data(_params(args)), []


def kummer_conics_task(args) -> tuple:
    res = conics()
    return {"conics": list(res)}, [Check(f"{c.conic.name} lies on X", True, c.on_surface) for c in res]


def kummer_sections_task(args) -> tuple:
    res = sections_o_q()
    checks = []
    for name in ("O", "Q"):
        checks.append(Check(f"{name} on X (shifted reading)", True, res[name]["shifted"]["on_surface"]))
        checks.append(Check(f"{name} fiber relation", True, res[name]["shifted"]["fiber_relation"]))
    return res, checks


def kummer_partition_task(args) -> tuple:
    res = partition_L()
    return res, [
        Check("rows are 4-cycles", True, all(res["rows_are_four_cycles"]["plus"] + res["rows_are_four_cycles"]["minus"])),
        Check("L+ lines are sections of pi-", True, res["plus_lines_are_pi_minus_sections"]),
        Check("L- lines are sections of pi+", True, res["minus_lines_are_pi_plus_sections"]),
    ]


# lattice ------------------------------------------------------------------------


def lattice_gram_task(args) -> tuple:
    g = lattice.picard_gram()
    return (
        {"classes": list(lattice.generators()), "gram": g},
        [Check("diagonal is -2", True, all(g[i, i] == -2 for i in range(g.nrows))), Check("symmetric", True, g.is_symmetric())],
    )


def lattice_invariants_task(args) -> tuple:
    if args.name:
        return {"name": args.name, "invariants": lattice.lattice_invariants(lattice.reference_lattice(args.name))}, []
    rep = lattice.picard_report()
    inv = rep["invariants"]
    return rep, [
        Check("rank", 19, inv["rank"]),
        Check("signature", [1, 18], inv["signature"]),
        Check("discriminant form matches U(4)+(-4)+E8+E8", True, rep["comparison"]["all"]),
    ]


def lattice_mw_task(args) -> tuple:
    rep = lattice.mw_group(args.fibration)
    return rep, [
        Check("rank agrees with Shioda-Tate", rep.shioda_tate_rank, rep.rank),
        Check("torsion represented by lines", True, rep.torsion_by_lines),
        Check("fiber square", 0, rep.fiber_checks["fiber_square"]),
        Check("fiber meets the zero section once", 1, rep.fiber_checks["fiber_dot_zero"]),
    ]


def lattice_ns_task(args) -> tuple:
    res = lattice.ns_tables_check()
    return {"cases": res}, [Check(f"case {c['case']} ({c['group']})", True, c["matches"]) for c in res]


def lattice_chain_task(args) -> tuple:
    res = lattice.chain_for_group(args.group)
    return res, [Check("predicted invariants match the reference", True, res["matches"])]


def lattice_st_task(args) -> tuple:
    rank = lattice.shioda_tate(args.rho, args.fibers)
    return {"rho": args.rho, "fibers": args.fibers, "mw_rank": rank, "euler_sum": lattice.euler_sum(args.fibers)}, []


# arith --------------------------------------------------------------------------


def arith_scan_task(args) -> tuple:
    res = arith.supersingular_scan(bound=args.bound)
    return res, [Check("residues mod 24 in {5, 23}", True, res.congruence_ok)]


def arith_count_task(args) -> tuple:
    res = arith.x_count(args.p, args.method)
    checks = []
    if isinstance(res, arith.CountRecord):
        if res.theorem_value is not None:
            checks.append(Check(f"#X = {res.theorem_value}", res.theorem_value, res.x))
        if res.brute is not None:
            checks.append(Check("chain equals brute force", res.brute, res.x))
    return res, checks


def arith_zeta_task(args) -> tuple:
    res = arith.zeta_supersingular_check(args.p)
    checks = [Check("functional equation", True, res.functional_equation)]
    if res.predicted is not None:
        checks.append(Check("predicted L-polynomial", res.predicted, res.l_poly))
    return res, checks


def arith_galois_task(args) -> tuple:
    res = arith.galois_image_report()
    return res, [
        Check("closed", True, res["closed"]),
        Check("order times index", arith.GL2_Z8_ORDER, res["index_times_order"]),
    ]


def arith_k4_task(args) -> tuple:
    res = arith.k4_splitting_check()
    return res, [Check("quartic equals the product over its roots", True, res["verdict"])]


# selftest -----------------------------------------------------------------------


def selftest_task(args) -> tuple:
    checks = acceptance.run_all(args.level)
    summary = {}
    for k, (name, _) in acceptance.CRITERIA.items():
        mine = [c for c in checks if c.name.startswith(f"[{k}] ")]
        summary[str(k)] = {"name": name, "pass": all(c.passed for c in mine)}
    return {"level": args.level, "criteria": summary}, checks


# parser -------------------------------------------------------------------------


def _global_flags(parser: argparse.ArgumentParser, top: bool) -> None:
    default = None if top else argparse.SUPPRESS
    parser.add_argument("--json", metavar="PATH", default=default, help="also write the JSON report to PATH")
    parser.add_argument("--threads", type=int, default=1 if top else argparse.SUPPRESS, help="worker count (results do not depend on it)")
    parser.add_argument("--format", choices=("json", "text"), default="json" if top else argparse.SUPPRESS)


def _ts(p: argparse.ArgumentParser, symbolic: bool = False) -> None:
    p.add_argument("--t", default="-1", help="exact scalar, e.g. -1, 3/2, sqrt(2)")
    p.add_argument("--s", default="1")
    if symbolic:
        p.add_argument("--symbolic", action="store_true", help="use the generic member")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="k3lab", description=__doc__.splitlines()[0])
    _global_flags(parser, top=True)
    groups = parser.add_subparsers(dest="group", required=True)

    def task(sub, name: str, fn: Callable, help: str):
        p = sub.add_parser(name, help=help)
        _global_flags(p, top=False)
        p.set_defaults(func=fn)
        return p

    g = groups.add_parser("buchi", help="the surfaces X_n")
    sub = g.add_subparsers(dest="task", required=True)
    p = task(sub, "system", buchi_system_task, "the quadrics of X_n")
    p.add_argument("--n", type=int, required=True)
    p = task(sub, "minors", buchi_minors_task, "maximal minors of B_n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--all", action="store_true")
    for k in ("a", "b", "c"):
        p.add_argument(f"--{k}", type=int)
    p = task(sub, "smooth", buchi_smooth_task, "smoothness in characteristic p")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p = task(sub, "family", buchi_family_task, "the one-parameter solution family on X_5")
    p.add_argument("--alpha")
    p = task(sub, "search", buchi_search_task, "bounded integer search with x0 = 1")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--bound", type=int, required=True)
    p = task(sub, "lines", buchi_lines_task, "the lines x_i = ±(t + i)")
    p.add_argument("--n", type=int, default=5)
    task(sub, "x4", buchi_x4_task, "check the printed cubic parametrization of X_4")

    g = groups.add_parser("kummer", help="the family X_{t,s}")
    sub = g.add_subparsers(dest="task", required=True)
    _ts(task(sub, "system", kummer_system_task, "the Klein-form quadrics"), symbolic=True)
    _ts(task(sub, "lines", kummer_lines_task, "the 32 lines"), symbolic=True)
    _ts(task(sub, "graph", kummer_graph_task, "intersection graph of the lines"))
    _ts(task(sub, "quadrics", kummer_quadrics_task, "rank-four quadrics of the net"), symbolic=True)
    _ts(task(sub, "auts", kummer_auts_task, "scalar-permutation automorphisms"))
    _ts(task(sub, "locus", kummer_locus_task, "special automorphism loci"))
    _ts(task(sub, "genus2", kummer_genus2_task, "the genus-two curve and its elliptic quotients"))
    p = task(sub, "fibers", kummer_fibers_task, "fibers of the elliptic fibrations (t, s) = (-1, 1)")
    p.add_argument("--which", choices=("plus", "minus"), required=True)
    p.add_argument("--base", help="base coordinate c of [c, 1], or inf")
    task(sub, "conics", kummer_conics_task, "the conics C1 and C2")
    task(sub, "sections", kummer_sections_task, "the sections O and Q")
    task(sub, "partition", kummer_partition_task, "the partition of the lines into L+ and L-")

    g = groups.add_parser("lattice", help="intersection theory and lattices")
    sub = g.add_subparsers(dest="task", required=True)
    task(sub, "gram", lattice_gram_task, "the 34 x 34 Picard Gram matrix")
    p = task(sub, "invariants", lattice_invariants_task, "lattice invariants")
    p.add_argument("--name", help="reference lattice such as U(4)+(-4)+E8+E8")
    p = task(sub, "mw", lattice_mw_task, "Mordell-Weil group of a fibration")
    p.add_argument("--fibration", choices=("plus", "minus"), required=True)
    task(sub, "ns-tables", lattice_ns_task, "Néron-Severi lattices of the Jacobians")
    p = task(sub, "chain", lattice_chain_task, "from NS(JC) to the Kummer lattice")
    p.add_argument("--group", choices=tuple(lattice.KUMMER_TABLE), required=True)
    p = task(sub, "shioda-tate", lattice_st_task, "Mordell-Weil rank from fiber types")
    p.add_argument("--rho", type=int, required=True)
    p.add_argument("--fibers", required=True, help="e.g. 4I4+4I2")

    g = groups.add_parser("arith", help="counting over finite fields")
    sub = g.add_subparsers(dest="task", required=True)
    p = task(sub, "scan", arith_scan_task, "supersingular primes of E")
    p.add_argument("--bound", type=int, default=arith.DEFAULT_SCAN_BOUND)
    p = task(sub, "count-x", arith_count_task, "#X(F_p)")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--method", choices=("chain", "brute", "both"), default="chain")
    p = task(sub, "zeta", arith_zeta_task, "L-polynomial of C at a supersingular prime")
    p.add_argument("--p", type=int, required=True)
    task(sub, "galois", arith_galois_task, "image of Galois mod 8")
    task(sub, "k4", arith_k4_task, "the quartic of the cyclotomic lemma")

    p = task(groups, "selftest", selftest_task, "run the acceptance checks")
    p.add_argument("--level", choices=acceptance.LEVELS, default="quick")
    return parser


def dispatch(args: argparse.Namespace) -> Report:
    start = time.perf_counter()
    results, checks = args.func(args)
    name = args.group if args.group == "selftest" else f"{args.group} {args.task}"
    return Report(name, _param_echo(args), results, list(checks), wall_time=time.perf_counter() - start)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.threads is not None and args.threads < 1:
        print("k3lab: --threads must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        report = dispatch(args)
    except (ValueError, KeyError) as exc:
        print(f"k3lab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out = emit(report, args.format)
    sys.stdout.buffer.write(out)
    sys.stdout.flush()
    if args.json:
        Path(args.json).write_bytes(emit(report, "json"))
    return EXIT_OK if report.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
