"""Intersection theory on X and lattice bookkeeping.

Classes are handled through their intersection vectors against the 34
generators (32 lines, C1, C2). The Picard lattice is the quotient of Z^34 by
the kernel of the Gram matrix; Smith data of the Gram gives coordinates on it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .exact import (
    ExactMatrix,
    FiniteQuadraticForm,
    discriminant_form,
    fqf_isomorphic,
    smith_normal_form,
    symmetric_signature,
)
from .exact.matrix import int_inverse
from .kummer.fibrations import (
    PI_MINUS,
    PI_PLUS,
    Fibration,
    PlaneCurve,
    conic_c1,
    conic_c2,
    fibration_conics,
    intersection_length,
    line_curve,
    pi_value_on_span,
    singular_base_points,
)
from .kummer.lines import FamilyLine, combinatorial_adjacent

# classes ------------------------------------------------------------------------


@dataclass(frozen=True)
class CurveClass:
    """A line ``σ_P ℓ`` or a catalogued conic on X_{-1,1}."""

    kind: str
    label: str
    curve: PlaneCurve
    line: FamilyLine | None = None

    @property
    def field(self) -> tuple[int, ...]:
        gens: set[int] = set()
        for vec in self.curve.span:
            for c in vec:
                gens.update(getattr(c, "gens", ()))
        return tuple(sorted(gens))

    def to_json(self) -> dict:
        return {"kind": self.kind, "label": self.label, "field": list(self.field)}


def line_class(line: FamilyLine) -> CurveClass:
    return CurveClass("line", line.name, line_curve(line), line)


def line_by_mask(mask: int) -> FamilyLine:
    """Sign-vector encoding: bit ``i - 1`` set iff ``x_i`` changes sign (``x0`` fixed)."""
    return FamilyLine(frozenset(i + 1 for i in range(5) if mask >> i & 1))


@lru_cache(maxsize=None)
def generators() -> tuple[CurveClass, ...]:
    """The 34 generators: lines ordered by sign-vector encoding, then C1, C2."""
    out = [line_class(line_by_mask(m)) for m in range(32)]
    out.append(CurveClass("conic", "C1", conic_c1().as_curve()))
    out.append(CurveClass("conic", "C2", conic_c2().as_curve()))
    return tuple(out)


def intersection_number(a: CurveClass, b: CurveClass) -> int:
    """Self-intersections are -2; distinct lines use the sign-change rule; otherwise a scheme length."""
    if a.kind == b.kind and a.label == b.label:
        return -2
    if a.line is not None and b.line is not None:
        return int(combinatorial_adjacent(a.line, b.line))
    return intersection_length(a.curve, b.curve)


def intersection_vector(c: CurveClass) -> list[int]:
    return [intersection_number(c, g) for g in generators()]


@lru_cache(maxsize=None)
def picard_gram() -> ExactMatrix:
    gens = generators()
    n = len(gens)
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            v = intersection_number(gens[i], gens[j])
            rows[i][j] = rows[j][i] = v
    return ExactMatrix(rows)


# lattices from Gram matrices ---------------------------------------------------------


@dataclass
class QuotientLattice:
    """``Z^n / ker(G)`` with coordinates read from Smith data ``U G V = D``."""

    gram: ExactMatrix
    rank: int
    factors: tuple[int, ...]
    U: ExactMatrix
    V: ExactMatrix
    reduced_gram: ExactMatrix

    @classmethod
    def of(cls, g: ExactMatrix) -> "QuotientLattice":
        snf = smith_normal_form(g)
        r = snf.rank
        full = snf.V.transpose() @ g @ snf.V
        red = full.submatrix(range(r), range(r))
        return cls(g, r, snf.factors[:r], snf.U, snf.V, red)

    def coordinates(self, w: Sequence[int]) -> list[int]:
        """Coordinates of the class whose intersection vector is ``w``."""
        y = self.U.apply(list(w))
        for i in range(self.rank, len(y)):
            if y[i] != 0:
                raise ValueError("vector is not an intersection vector of a class in the span")
        out = []
        for i in range(self.rank):
            q = Fraction(y[i]) / self.factors[i]
            if q.denominator != 1:
                raise ValueError("class is not in the lattice spanned by the generators")
            out.append(int(q))
        return out

    def generator_coordinates(self, j: int) -> list[int]:
        vinv = int_inverse(self.V)
        return [int(vinv[i, j]) for i in range(self.rank)]

    def pair(self, x: Sequence[int], y: Sequence[int]) -> int:
        gy = self.reduced_gram.apply(list(y))
        return int(sum(Fraction(a) * b for a, b in zip(x, gy)))


@dataclass
class LatticeInvariants:
    rank: int
    abs_det: int
    signature: tuple[int, int]
    form: FiniteQuadraticForm | None
    elementary_divisor_product: int

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "abs_det": self.abs_det,
            "signature": list(self.signature),
            "elementary_divisor_product": self.elementary_divisor_product,
            "discriminant_group": None if self.form is None else list(self.form.orders),
            "discriminant_form": None if self.form is None else self.form.to_json(),
        }


def lattice_invariants(g: ExactMatrix) -> LatticeInvariants:
    """Invariants of the nondegenerate quotient of the lattice with Gram ``g``."""
    if not g.is_symmetric() or not g.is_integral():
        raise ValueError("expected a symmetric integer Gram matrix")
    q = QuotientLattice.of(g)
    red = q.reduced_gram
    pos, neg, zero = symmetric_signature(red)
    if zero:
        raise ValueError("internal error: reduced Gram is degenerate")
    det = abs(int(red.det()))
    rows = red.int_rows()
    even = all(rows[i][i] % 2 == 0 for i in range(len(rows)))
    form = discriminant_form(red) if even else None
    prod = 1
    for d in q.factors:
        prod *= d
    return LatticeInvariants(q.rank, det, (pos, neg), form, prod)


# reference lattices --------------------------------------------------------------


def _cartan(kind: str, n: int) -> list[list[int]]:
    """Negative definite root lattice Gram."""
    edges: list[tuple[int, int]] = []
    if kind == "A":
        edges = [(i, i + 1) for i in range(n - 1)]
    elif kind == "D":
        if n < 4:
            raise ValueError("D_n needs n >= 4")
        edges = [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
    elif kind == "E":
        if n not in (6, 7, 8):
            raise ValueError("E_n needs n in 6, 7, 8")
        edges = [(i, i + 1) for i in range(n - 2)] + [(2, n - 1)]
    g = [[-2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i, j in edges:
        g[i][j] = g[j][i] = 1
    return g


_TOKEN = re.compile(r"^(U|[ADE]\d+|\(-?\d+\))(?:\((-?\d+)\))?(?:\^(\d+))?$")


def reference_lattice(name: str) -> ExactMatrix:
    """Assemble ``U``, ``U(k)``, ``A_n``, ``D_n``, ``E_n`` and rank-one ``(k)`` blocks joined by ``+``."""
    text = name.replace(" ", "").replace("⊕", "+").replace("²", "^2").replace("₈", "8").replace("₇", "7")
    if not text:
        raise ValueError("empty lattice name")
    blocks = []
    for token in text.split("+"):
        m = _TOKEN.match(token)
        if not m:
            raise ValueError(f"unknown lattice component {token!r}")
        base, scale, power = m.group(1), int(m.group(2) or 1), int(m.group(3) or 1)
        if base == "U":
            g = [[0, 1], [1, 0]]
        elif base.startswith("("):
            g = [[int(base[1:-1])]]
        else:
            g = _cartan(base[0], int(base[1:]))
        g = ExactMatrix(g).scale(scale)
        blocks.extend([g] * power)
    return ExactMatrix.block_diag(*blocks)


def same_invariants(a: ExactMatrix, b: ExactMatrix) -> dict:
    """Rank, |det|, signature and discriminant-form comparison, with the isomorphism witness."""
    ia, ib = lattice_invariants(a), lattice_invariants(b)
    iso, witness = (False, None)
    if ia.form is not None and ib.form is not None:
        iso, witness = fqf_isomorphic(ia.form, ib.form)
    return {
        "rank": ia.rank == ib.rank,
        "abs_det": ia.abs_det == ib.abs_det,
        "signature": ia.signature == ib.signature,
        "discriminant_form": iso,
        "witness": None if witness is None else {str(k): list(v) for k, v in witness.items()},
        "all": ia.rank == ib.rank and ia.abs_det == ib.abs_det and ia.signature == ib.signature and iso,
    }


PICARD_REFERENCE = "U(4)+(-4)+E8+E8"


def picard_report() -> dict:
    g = picard_gram()
    inv = lattice_invariants(g)
    line_row = [g[0, j] for j in range(32)]
    return {
        "classes": [c.to_json() for c in generators()],
        "invariants": inv.to_json(),
        "diagonal_constant": all(g[i, i] == -2 for i in range(34)),
        "base_line_valence": sum(1 for x in line_row if x == 1),
        "reference": PICARD_REFERENCE,
        "comparison": same_invariants(QuotientLattice.of(g).reduced_gram, reference_lattice(PICARD_REFERENCE)),
    }


# Shioda-Tate ---------------------------------------------------------------------

_KODAIRA = re.compile(r"^(\d*)(I\d+\*?|I\*|II\*?|III\*?|IV\*?)$")


def _components_euler(kind: str) -> tuple[int, int]:
    table = {"II": (1, 2), "III": (2, 3), "IV": (3, 4), "II*": (9, 10), "III*": (8, 9), "IV*": (7, 8)}
    if kind in table:
        return table[kind]
    if kind == "I*":
        kind = "I0*"
    if kind.endswith("*"):
        n = int(kind[1:-1])
        return n + 5, n + 6
    n = int(kind[1:])
    if n < 1:
        raise ValueError("I0 is a smooth fiber")
    return n, n


def parse_fibers(spec: str | Sequence[str]) -> list[str]:
    """``"4I4+4I2"``, ``"4I4 4I2"`` or ``["I4", "I4", ...]`` to a flat list of fiber types."""
    items = re.split(r"[\s,+]+", spec.replace("×", "").strip()) if isinstance(spec, str) else list(spec)
    out = []
    for item in filter(None, items):
        m = _KODAIRA.match(item.replace("x", ""))
        if not m:
            raise ValueError(f"unknown fiber type {item!r}")
        out.extend([m.group(2)] * int(m.group(1) or 1))
    return out


def shioda_tate(rho: int, fibers: str | Sequence[str]) -> int:
    if rho < 2:
        raise ValueError("Picard number must be at least 2")
    kinds = parse_fibers(fibers)
    rank = rho - 2 - sum(_components_euler(k)[0] - 1 for k in kinds)
    if rank < 0:
        raise ValueError(f"inconsistent fiber data: Mordell-Weil rank would be {rank}")
    return rank


def euler_sum(fibers: str | Sequence[str]) -> int:
    return sum(_components_euler(k)[1] for k in parse_fibers(fibers))


# Mordell-Weil -------------------------------------------------------------------

ZERO_SECTIONS = {"minus": "s25l", "plus": "s245l"}


@dataclass
class TrivialLattice:
    fibration: str
    zero_section: str
    fiber_class: list[int]
    components: dict[str, list[str]]
    generators: list[list[int]] = field(repr=False, default_factory=list)

    def to_json(self) -> dict:
        return {
            "fibration": self.fibration,
            "zero_section": self.zero_section,
            "non_identity_components": self.components,
        }


@dataclass
class MWReport:
    fibration: str
    rank: int
    torsion: tuple[int, ...]
    shioda_tate_rank: int
    trivial: TrivialLattice
    fiber_checks: dict
    torsion_sections: dict[str, list[int]]
    torsion_by_lines: bool
    sections_finite_index: bool
    infinite_order_sections: list[str]

    def to_json(self) -> dict:
        return {
            "fibration": self.fibration,
            "rank": self.rank,
            "torsion": list(self.torsion),
            "shioda_tate_rank": self.shioda_tate_rank,
            "trivial_lattice": self.trivial.to_json(),
            "fiber_checks": self.fiber_checks,
            "torsion_sections": self.torsion_sections,
            "torsion_represented_by_lines": self.torsion_by_lines,
            "section_lines_finite_index": self.sections_finite_index,
            "infinite_order_section_lines": self.infinite_order_sections,
        }


def _fiber_components(fib: Fibration) -> list[tuple[str, list[CurveClass]]]:
    lines = [line_class(line_by_mask(m)) for m in range(32)]
    conics = fibration_conics(fib)
    out = []
    for c in singular_base_points():
        comps = []
        for lc in lines:
            try:
                if _eq(pi_value_on_span(lc.curve.span, fib.sign), c):
                    comps.append(lc)
            except ValueError:
                pass
        for name, conic in conics.items():
            curve = conic.as_curve()
            if _eq(pi_value_on_span(curve.span, fib.sign), c):
                comps.append(CurveClass("conic", name, curve))
        out.append((f"I{len(comps)}", comps))
    return out


def _eq(a, b) -> bool:
    from .kummer.fibrations import _eq as eq

    return eq(a, b)


def _vector(c: CurveClass) -> list[int]:
    gens = generators()
    for j, g in enumerate(gens):
        if g.kind == c.kind and g.label == c.label:
            return [picard_gram()[j, k] for k in range(len(gens))]
    return intersection_vector(c)


def mw_group(which: str = "minus") -> MWReport:
    """Mordell-Weil group of π± as the quotient of Pic by the trivial lattice."""
    fib = PI_MINUS if which == "minus" else PI_PLUS if which == "plus" else None
    if fib is None:
        raise ValueError(f"unknown fibration {which!r}; use plus or minus")
    lat = QuotientLattice.of(picard_gram())
    zero_name = ZERO_SECTIONS[fib.name]
    zero = next(c for c in generators() if c.label == zero_name)
    z = lat.coordinates(_vector(zero))
    fibers = _fiber_components(fib)
    comp_names: dict[str, list[str]] = {}
    trivial = [z]
    fiber_class = None
    checks = {"fiber_classes_agree": True, "zero_meets_one_component": True}
    kinds = []
    for kind, comps in fibers:
        kinds.append(kind)
        coords = [lat.coordinates(_vector(c)) for c in comps]
        total = [sum(col) for col in zip(*coords)]
        if fiber_class is None:
            fiber_class = total
            trivial.append(total)
        elif total != fiber_class:
            checks["fiber_classes_agree"] = False
        meets = [lat.pair(x, z) for x in coords]
        if sorted(meets) != [0] * (len(meets) - 1) + [1]:
            checks["zero_meets_one_component"] = False
        key = "+".join(c.label for c in comps)
        comp_names[key] = [c.label for c, m in zip(comps, meets) if m == 0]
        trivial.extend(x for x, m in zip(coords, meets) if m == 0)
    checks["fiber_square"] = lat.pair(fiber_class, fiber_class)
    checks["fiber_dot_zero"] = lat.pair(fiber_class, z)
    checks["zero_square"] = lat.pair(z, z)
    checks["euler_sum"] = euler_sum(kinds)
    checks["fiber_types"] = kinds
    tmat = ExactMatrix([[v[i] for v in trivial] for i in range(lat.rank)])
    snf = smith_normal_form(tmat)
    rank = lat.rank - snf.rank
    torsion = snf.torsion()
    t_report = TrivialLattice(fib.name, zero_name, fiber_class, comp_names, trivial)

    def image(coords: list[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
        y = snf.U.apply(coords)
        tors = tuple(int(y[i]) % snf.factors[i] for i in range(snf.rank) if snf.factors[i] > 1)
        free = tuple(int(y[i]) for i in range(snf.rank, lat.rank))
        return tors, free

    sections = [c for c in generators()[:32] if fib.is_section(c.line)]
    torsion_sections: dict[str, list[int]] = {}
    infinite = []
    free_span = []
    for c in sections:
        tors, free = image(lat.coordinates(_vector(c)))
        if any(free):
            infinite.append(c.label)
            free_span.append(list(free))
        else:
            torsion_sections[c.label] = list(tors)
    group_size = 1
    for d in torsion:
        group_size *= d
    distinct = {tuple(v) for v in torsion_sections.values()}
    finite_index = rank == 0 or (bool(free_span) and ExactMatrix(free_span).rank() == rank)
    return MWReport(
        fib.name,
        rank,
        torsion,
        shioda_tate(lat.rank, kinds),
        t_report,
        checks,
        torsion_sections,
        len(distinct) == group_size,
        finite_index,
        infinite,
    )


# Jacobian Néron-Severi tables and the Kummer chain ----------------------------------

ATOMS = ("Theta", "E_tau", "E_sigma_tau", "E_eta_tau", "E_rho_tau")


def atom_gram(eta_rho: int) -> list[list[int]]:
    th, et, est, eet, ert = range(5)
    g = [[0] * 5 for _ in range(5)]

    def put(i, j, v):
        g[i][j] = g[j][i] = v

    put(th, th, 2)
    for e in (et, est, eet, ert):
        put(th, e, 2)
    put(et, est, 4)
    put(et, eet, 2)
    put(est, eet, 2)
    put(et, ert, 1)
    put(est, ert, 3)
    put(eet, ert, eta_rho)
    return g


@dataclass(frozen=True)
class NSCase:
    case: int
    group: str
    name: str
    generators: tuple[dict[str, Fraction], ...]
    eta_rho: int
    reference: str

    def gram(self) -> ExactMatrix:
        a = atom_gram(self.eta_rho)
        rows = []
        for x in self.generators:
            row = []
            for y in self.generators:
                total = Fraction(0)
                for ka, ca in x.items():
                    for kb, cb in y.items():
                        total += ca * cb * a[ATOMS.index(ka)][ATOMS.index(kb)]
                row.append(total)
            rows.append(row)
        return ExactMatrix(rows)


def _gen(**coeffs) -> dict[str, Fraction]:
    return {k: Fraction(v) for k, v in coeffs.items()}


H = Fraction(1, 2)
NS_CASES = (
    NSCase(1, "V4", "Lambda0", (_gen(E_tau=H, E_sigma_tau=-H), _gen(Theta=1)), 2, "(2)+(-2)"),
    NSCase(2, "D4", "Lambda1", (_gen(E_tau=1), _gen(E_eta_tau=1), _gen(Theta=1, E_tau=-1, E_eta_tau=-1)), 2, "U(2)+(-2)"),
    NSCase(3, "D6", "Lambda2", (_gen(E_tau=1), _gen(E_rho_tau=1), _gen(Theta=1, E_tau=-2, E_rho_tau=-2)), 2, "U+(-6)"),
    NSCase(
        4,
        "2D6",
        "Lambda3",
        (_gen(E_tau=1), _gen(E_rho_tau=1), _gen(Theta=1, E_eta_tau=-1), _gen(Theta=1, E_tau=-2, E_rho_tau=-2)),
        2,
        "U+(-2)+(-6)",
    ),
    NSCase(
        5,
        "S4t",
        "Lambda4",
        (_gen(E_tau=1), _gen(E_rho_tau=1), _gen(Theta=1, E_tau=-1, E_eta_tau=-1), _gen(E_tau=1, E_eta_tau=-1, E_rho_tau=2)),
        1,
        "U+(-2)+(-4)",
    ),
)

KUMMER_TABLE = {
    "V4": "U(2)+E8+D7+(-4)",
    "D4": "U(4)+E8+E8+(-4)",
    "D6": "U(2)+E8+E8+(-12)",
    "2D6": "U+E8+E8+(-4)+(-12)",
    "S4t": "U+E8+E8+(-4)+(-8)",
}
JACOBIAN_TABLE = {case.group: case.reference for case in NS_CASES}


def ns_tables_check() -> list[dict]:
    out = []
    for case in NS_CASES:
        g = case.gram()
        integral = g.is_integral()
        cmp = same_invariants(g, reference_lattice(case.reference)) if integral else {"all": False}
        out.append(
            {
                "case": case.case,
                "group": case.group,
                "lattice": case.name,
                "gram": g.to_json(),
                "integral": integral,
                "reference": case.reference,
                "comparison": cmp,
                "matches": bool(integral and cmp["all"]),
            }
        )
    return out


def _split_hyperbolic(g: ExactMatrix) -> ExactMatrix:
    """Orthogonal complement of the first two generators, which must span U."""
    if [[g[0, 0], g[0, 1]], [g[1, 0], g[1, 1]]] != [[0, 1], [1, 0]]:
        raise ValueError("rank-four input must start with a hyperbolic pair")
    n = g.nrows
    basis = []
    for k in range(2, n):
        v = [Fraction(0)] * n
        v[k] = Fraction(1)
        v[0] -= g[k, 1]
        v[1] -= g[k, 0]
        basis.append(v)
    return ExactMatrix([[sum(a * g[i, j] * b for i, a in enumerate(x) for j, b in enumerate(y) if a and b) for y in basis] for x in basis])


def transcendental_jacobian(g_ns: ExactMatrix) -> ExactMatrix:
    """A lattice with the invariants of the orthogonal complement of ``g_ns`` in ``U^3``."""
    r = g_ns.nrows
    neg = g_ns.scale(-1)
    if r == 2:
        return ExactMatrix.block_diag(neg, reference_lattice("U"))
    if r == 3:
        return neg
    if r == 4:
        return _split_hyperbolic(g_ns).scale(-1)
    raise ValueError(f"Néron-Severi rank must be 2, 3 or 4, got {r}")


def kummer_chain(g_ns: ExactMatrix, reference: str | None = None) -> dict:
    r = g_ns.nrows
    if r not in (2, 3, 4):
        raise ValueError(f"Néron-Severi rank must be 2, 3 or 4, got {r}")
    inv_ns = lattice_invariants(g_ns)
    if inv_ns.signature != (1, r - 1):
        raise ValueError("Néron-Severi lattice must be hyperbolic")
    t_jc = transcendental_jacobian(g_ns)
    inv_t = lattice_invariants(t_jc)
    t_x = t_jc.scale(2)
    inv_tx = lattice_invariants(t_x)
    predicted = inv_tx.form.negated()
    out = {
        "ns_rank": r,
        "T_JC": {"rank": inv_t.rank, "signature": list(inv_t.signature), "form_matches": fqf_isomorphic(inv_t.form, inv_ns.form.negated())[0]},
        "T_X": {"rank": inv_tx.rank, "signature": list(inv_tx.signature), "abs_det": inv_tx.abs_det},
        "predicted": {"rank": 22 - inv_tx.rank, "signature": [1, 21 - inv_tx.rank], "discriminant_group": list(predicted.orders)},
    }
    if reference is not None:
        ref = lattice_invariants(reference_lattice(reference))
        iso, witness = fqf_isomorphic(predicted, ref.form)
        out["reference"] = reference
        out["match"] = {
            "rank": ref.rank == 22 - inv_tx.rank,
            "signature": list(ref.signature) == [1, 21 - inv_tx.rank],
            "discriminant_form": iso,
            "witness": None if witness is None else {str(k): list(v) for k, v in witness.items()},
        }
        out["matches"] = all(v for k, v in out["match"].items() if k != "witness")
    return out


def chain_for_group(group: str) -> dict:
    if group not in JACOBIAN_TABLE:
        raise ValueError(f"unknown group {group!r}; choose from {', '.join(JACOBIAN_TABLE)}")
    out = kummer_chain(reference_lattice(JACOBIAN_TABLE[group]), KUMMER_TABLE[group])
    out["group"] = group
    out["ns_lattice"] = JACOBIAN_TABLE[group]
    return out


__all__ = [
    "CurveClass",
    "KUMMER_TABLE",
    "JACOBIAN_TABLE",
    "LatticeInvariants",
    "MWReport",
    "NS_CASES",
    "QuotientLattice",
    "chain_for_group",
    "euler_sum",
    "generators",
    "intersection_number",
    "intersection_vector",
    "kummer_chain",
    "lattice_invariants",
    "mw_group",
    "ns_tables_check",
    "picard_gram",
    "picard_report",
    "reference_lattice",
    "same_invariants",
    "shioda_tate",
]
