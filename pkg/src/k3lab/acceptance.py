"""The sixteen acceptance criteria as lists of checks.

``level="quick"`` caps primes at 31 and the supersingular scan at 500;
``level="full"`` uses the documented limits.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Callable

from . import arith, buchi, lattice
from .exact.multiquad import sqrt
from .kummer import (
    PI_MINUS,
    BUCHI_PARAMS,
    FamilyParams,
    compare_with_buchi,
    curve_catalog,
    intersection_number,
    klein_system,
    line_graph,
    lines,
    rank4_analysis,
    sections_o_q,
    singular_fibers,
)
from .reports import Check

LEVELS = ("quick", "full")
QUICK_PRIME_CAP = 31
QUICK_SCAN_BOUND = 500


def _level(level: str) -> str:
    if level not in LEVELS:
        raise ValueError(f"level must be quick or full, got {level!r}")
    return level


def criterion_1(level: str = "full") -> list[Check]:
    mismatches = []
    count = 0
    for n in range(3, 13):
        for spec in buchi.all_minor_specs(n):
            count += 1
            if Fraction(buchi.minor_det_closed(spec)) != buchi.minor_det_brute(spec):
                mismatches.append([n, spec.a, spec.b, spec.c])
    dets = {n: int(buchi.cartan_data(n)[0].det()) for n in range(3, 13)}
    return [
        Check("closed forms equal brute-force minors for 3 <= n <= 12", [], mismatches),
        Check("number of minors compared", sum(comb(n + 1, 3) for n in range(3, 13)), count),
        Check("det A_n = (-1)^n (n+1)", {n: (-1) ** n * (n + 1) for n in range(3, 13)}, dets),
    ]


def criterion_2(level: str = "full") -> list[Check]:
    expected, actual = {}, {}
    for p in (0, 2, 3, 5, 7, 11):
        for n in range(3, 9):
            key = f"n={n},p={p}"
            expected[key] = "singular" if 0 < p < n else "smooth"
            actual[key] = buchi.smoothness_report(n, p).verdict
    rep = buchi.smoothness_report(5, 3)
    return [
        Check("smoothness verdict is (0 < p < n)", expected, actual),
        Check("components of X_5 mod 3", 4, rep.components),
        Check("relations hold in the ideal mod 3", True, all(r["in_ideal"] for r in rep.certificate["relations"])),
    ]


def criterion_3(level: str = "full") -> list[Check]:
    matches = compare_with_buchi()
    klein = klein_system(BUCHI_PARAMS).quadrics
    bq = buchi.buchi_system(5).quadrics
    identities = []
    for m, kq in zip(matches, klein):
        if m["match"] is None:
            identities.append(False)
            continue
        lam = Fraction(m["match"]["scalar"])
        identities.append(lam != 0 and (kq - bq[m["match"]["buchi_index"]] * lam).is_zero())
    return [
        Check("every Klein quadric is a nonzero multiple of a Buchi quadric", [True] * 3, identities),
        Check("matched Buchi indices are distinct", 3, len({m["match"]["buchi_index"] for m in matches if m["match"]})),
    ]


def criterion_4(level: str = "full") -> list[Check]:
    sym = lines(FamilyParams.symbolic())
    out = [
        Check("number of lines", 32, len(sym)),
        Check("all lines lie on X_{t,s} symbolically", True, all(ok for _, ok in sym)),
    ]
    for t, s in ((-1, 1), (2, 3)):
        g = line_graph(FamilyParams(t, s))
        parts = g.bipartition()
        out.append(
            Check(
                f"incidence graph at ({t},{s})",
                {"connected": True, "bipartition": [16, 16], "degrees": [6], "geometric_agrees": True},
                {
                    "connected": g.connected(),
                    "bipartition": None if parts is None else sorted([len(parts[0]), len(parts[1])]),
                    "degrees": sorted(g.degrees()),
                    "geometric_agrees": g.geometric_agrees,
                },
            )
        )
    return out


def criterion_5(level: str = "full") -> list[Check]:
    sym = rank4_analysis(FamilyParams.symbolic())
    out = [
        Check("15 elimination quadrics match the table up to scale", True, sym.all_matched),
        Check("elimination quadrics have rank four", True, sym.all_rank_four),
    ]
    for t, s in ((-1, 1), (2, 3)):
        num = rank4_analysis(FamilyParams(t, s))
        out.append(Check(f"20 triple determinants nonzero at ({t},{s})", True, num.no_rank_three and len(num.triple_determinants) == 20))
    return out


def criterion_6(level: str = "full") -> list[Check]:
    fibers = singular_fibers(PI_MINUS)
    i4 = [f for f in fibers if f.kodaira == "I4"]
    i2 = [f for f in fibers if f.kodaira == "I2"]
    cat = curve_catalog()
    from .kummer.fibrations import conic_c1

    s0c1 = conic_c1().with_signs([0], "s0C1").as_curve()
    return [
        Check(
            "I4 bases",
            sorted(str(x) for x in (1, -1, 2, -2)),
            sorted(str(f.base) for f in i4),
        ),
        Check(
            "I2 bases",
            sorted(str(x) for x in (sqrt(2), -sqrt(2), sqrt(-2), -sqrt(-2))),
            sorted(str(f.base) for f in i2),
        ),
        Check("component degree sums", [4] * 8, [sum(f.degrees) for f in fibers]),
        Check("Euler sum", 24, sum(f.euler for f in fibers)),
        Check("C1 . s0C1", 2, intersection_number(cat["C1"], s0c1)),
        Check("C1 . C2", 0, intersection_number(cat["C1"], cat["C2"])),
    ]


def criterion_7(level: str = "full") -> list[Check]:
    rep = lattice.picard_report()
    inv = rep["invariants"]
    return [
        Check("rank", 19, inv["rank"]),
        Check("signature", [1, 18], inv["signature"]),
        Check("elementary divisor product", 2**6, inv["elementary_divisor_product"]),
        Check("discriminant group", [4, 4, 4], inv["discriminant_group"]),
        Check("discriminant form isomorphic to U(4)+(-4)+E8+E8", True, rep["comparison"]["discriminant_form"]),
        Check("isomorphism witness present", True, rep["comparison"]["witness"] is not None),
    ]


def criterion_8(level: str = "full") -> list[Check]:
    st = [lattice.shioda_tate(19, f) for f in ("4I4+4I2", "4I4+2I2+4I1", "4I4+8I1")]
    mw = lattice.mw_group("minus")
    return [
        Check("Shioda-Tate ranks", [1, 3, 5], st),
        Check("Mordell-Weil rank of pi-", 1, mw.rank),
        Check("Mordell-Weil torsion of pi-", [2, 4], list(mw.torsion)),
        Check("torsion classes represented by lines", True, mw.torsion_by_lines),
        Check("torsion lines", 8, len(mw.torsion_sections)),
    ]


def criterion_9(level: str = "full") -> list[Check]:
    ns = lattice.ns_tables_check()
    chain = {g: lattice.chain_for_group(g)["matches"] for g in lattice.KUMMER_TABLE}
    return [
        Check("NS tables reproduce the Jacobian lattices", {c["lattice"]: True for c in ns}, {c["lattice"]: c["matches"] for c in ns}),
        Check("chain reproduces the Kummer lattices", {g: True for g in chain}, chain),
    ]


def criterion_10(level: str = "full") -> list[Check]:
    ident = buchi.family_identity()
    p1, p2 = buchi.family_point(1), buchi.family_point(2)
    v1, v2 = buchi.is_trivial(p1), buchi.is_trivial(p2)
    return [
        Check("family satisfies the quadrics identically", True, all(r.is_zero() for r in ident)),
        Check("alpha = 1", [16, 40, -24, -8, -8, -24], [int(c) for c in p1.coords]),
        Check("alpha = 1 is trivial with t = -7/2", ["trivial", "-7/2"], [v1.status, str(v1.t)]),
        Check("alpha = 1 sign oracle", True, buchi.sign_pattern_oracle(p1)),
        Check("alpha = 2", [211, 558, -353, 164, 135, -314], [int(c) for c in p2.coords]),
        Check("alpha = 2 is non-trivial", "non-trivial", v2.status),
        Check("alpha = 2 sign oracle", False, buchi.sign_pattern_oracle(p2)),
    ]


def criterion_11(level: str = "full") -> list[Check]:
    rep = sections_o_q()
    out = []
    for name in ("O", "Q"):
        r = rep[name]
        out.append(Check(f"{name} on the surface", True, r["shifted"]["on_surface"]))
        out.append(Check(f"{name} fiber relation", True, r["shifted"]["fiber_relation"]))
        out.append(Check(f"{name} matches a line", True, r["line"] is not None))
    return out


def criterion_12(level: str = "full") -> list[Check]:
    _level(level)
    primes = [p for p in range(5, 32) if all(p % q for q in range(2, p))]
    chain = {p: arith.x_count_chain(p).x for p in primes}
    brute = {p: arith.x_count_brute(p) for p in primes}
    out = [
        Check("chain equals brute force for 5 <= p <= 31", brute, chain),
        Check("#X(F_5)", 5**2 + 14 * 5 + 1, chain[5]),
    ]
    zeta_primes = (5,) if level == "quick" else (5, 149, 167, 173)
    if level == "full":
        out.append(Check("#X(F_167)", 167**2 + 18 * 167 + 1, arith.x_count_chain(167).x))
    for p in zeta_primes:
        z = arith.zeta_supersingular_check(p)
        out.append(Check(f"L-polynomial at {p}", z.predicted, z.l_poly))
    return out


def criterion_13(level: str = "full") -> list[Check]:
    bound = QUICK_SCAN_BOUND if _level(level) == "quick" else 2500
    scan = arith.supersingular_scan(bound=bound)
    expected5 = [p for p in (5, 149, 173, 461, 1229, 2213, 2237) if p <= bound]
    return [
        Check("every supersingular prime is 5 or 23 mod 24", True, scan.congruence_ok),
        Check(f"residue-5 primes up to {bound}", expected5, scan.by_residue(5)),
        Check("167 is supersingular", True, 167 in scan.primes),
    ]


def criterion_14(level: str = "full") -> list[Check]:
    g = arith.galois_image_report()
    return [
        Check("order", 64, g["order"]),
        Check("index in GL2(Z/8)", 24, g["index"]),
        Check("solvable", True, g["solvable"]),
        Check("trace-zero elements", 16, g["trace_zero_count"]),
        Check("trace-zero determinants within {5, 7}", True, set(g["trace_zero_determinants"]) <= {"5", "7"}),
    ]


def criterion_15(level: str = "full") -> list[Check]:
    k = arith.k4_splitting_check()
    return [
        Check("expanded product of the roots", ["1", "-16", "-12", "32", "4"], k["expanded"]),
        Check("product of roots", "4", k["product_of_roots"]),
        Check("sum of roots", "16", k["sum_of_roots"]),
    ]


def criterion_16(level: str = "full") -> list[Check]:
    res = buchi.x4_param_check()
    recorded = buchi.x4_recorded_verdict()
    at = {tuple(r["sample"]): r for r in res["samples"]}
    interior = [r for r in res["samples"] if all(r["sample"])]
    return [
        Check("samples evaluated", True, len(res["samples"]) >= 5),
        Check("checker verdict equals the recorded verdict", recorded["verdict"], res["verdict"]),
        Check("symbolic identity flags equal the recorded ones", recorded["symbolic_identically_zero"], res["symbolic_identically_zero"]),
        Check("residual at (1,1,1)", ["0", "-1296"], at[(1, 1, 1)]["residuals"]),
        Check("interior samples with all coordinates nonzero", True, len(interior) >= 4),
    ]


CRITERIA: dict[int, tuple[str, Callable[[str], list[Check]]]] = {
    1: ("minor determinants", criterion_1),
    2: ("smoothness corollary", criterion_2),
    3: ("Buchi/Klein coincidence", criterion_3),
    4: ("lines and incidence graph", criterion_4),
    5: ("rank-four net", criterion_5),
    6: ("fibration fibers", criterion_6),
    7: ("Picard lattice", criterion_7),
    8: ("Mordell-Weil", criterion_8),
    9: ("NS tables and Kummer chain", criterion_9),
    10: ("solution family", criterion_10),
    11: ("sections O and Q", criterion_11),
    12: ("point counts", criterion_12),
    13: ("supersingular scan", criterion_13),
    14: ("Galois image mod 8", criterion_14),
    15: ("K4 quartic", criterion_15),
    16: ("X4 parametrization checker", criterion_16),
}


def run_criterion(k: int, level: str = "full") -> list[Check]:
    _level(level)
    name, fn = CRITERIA[k]
    return [Check(f"[{k}] {c.name}", c.expected, c.actual, c.passed) for c in fn(level)]


def run_all(level: str = "quick") -> list[Check]:
    out = []
    for k in CRITERIA:
        out.extend(run_criterion(k, level))
    return out
