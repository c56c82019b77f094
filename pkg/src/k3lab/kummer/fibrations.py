"""Curves on the Büchi K3 surface X = X_{-1,1}: conics, the fibrations π±, fibers and sections.

Curves are stored as a linear span in K^6 (the plane or line they lie in) plus
the extra equations cutting them out inside it. Intersection numbers are
lengths of intersection schemes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ..exact import ExactMatrix, MultiQuad, SparsePoly, parse_poly
from ..exact.multiquad import sqrt
from ..exact.poly import binary_forms_common_length, normalize_scalar
from .family import BUCHI_PARAMS, VARS, FamilyParams, _json_scalar, is_zero, klein_system
from .lines import FamilyLine, all_lines, is_four_cycle, parse_label, table_lines, L_MINUS, L_PLUS

R2 = sqrt(2)
RM2 = sqrt(-2)


def _zero_vec():
    return [Fraction(0)] * 6


def _dot(a, b):
    return normalize_scalar(sum((x * y for x, y in zip(a, b)), Fraction(0)))


def _conj_scalar(x, d: int):
    if isinstance(x, MultiQuad) and d in x.gens:
        return normalize_scalar(x.conjugate(1 << x.gens.index(d)))
    return x


# curves ----------------------------------------------------------------------

@dataclass(frozen=True)
class PlaneCurve:
    """A line (span of 2 vectors) or a conic (span of 3 vectors plus one quadric)."""

    name: str
    span: tuple[tuple, ...]
    equations: tuple[SparsePoly, ...] = ()

    @property
    def degree(self) -> int:
        return 1 if len(self.span) == 2 else 2

    def restrict(self, poly: SparsePoly, names: Sequence[str]) -> SparsePoly:
        """``poly`` pulled back along ``(a, b, ...) -> Σ a_k span_k``."""
        coords = []
        for i in range(6):
            total = SparsePoly(tuple(names), {})
            for k, vec in enumerate(self.span):
                if not is_zero(vec[i]):
                    total = total + SparsePoly.var(names[k]) * vec[i]
            coords.append(total)
        return poly.subs(dict(zip(VARS, coords)))


def line_curve(line: FamilyLine, params: FamilyParams = BUCHI_PARAMS) -> PlaneCurve:
    u, v = line.linear_coefficients(params)
    return PlaneCurve(line.name, (tuple(u), tuple(v)))


@dataclass(frozen=True)
class ConicCurve:
    """Conic given by three linear forms (coefficient vectors) and a quadric."""

    name: str
    linear_forms: tuple[tuple, ...]
    quadric: SparsePoly

    @property
    def field(self) -> tuple[int, ...]:
        gens: set[int] = set()
        for form in self.linear_forms:
            for c in form:
                if isinstance(c, MultiQuad):
                    gens.update(c.gens)
        for c in self.quadric.terms.values():
            if isinstance(c, MultiQuad):
                gens.update(c.gens)
        return tuple(sorted(gens))

    def plane_basis(self) -> list[list]:
        basis = ExactMatrix([list(f) for f in self.linear_forms]).nullspace()
        if len(basis) != 3:
            raise ValueError(f"{self.name}: linear forms do not cut a plane")
        return basis

    def as_curve(self) -> PlaneCurve:
        return PlaneCurve(self.name, tuple(tuple(b) for b in self.plane_basis()), (self.quadric,))

    def with_signs(self, label: Sequence[int], name: str | None = None) -> "ConicCurve":
        """Image under the sign change of the coordinates in ``label``."""
        flip = [-1 if i in set(label) else 1 for i in range(6)]
        forms = tuple(tuple(normalize_scalar(c * f) for c, f in zip(form, flip)) for form in self.linear_forms)
        q = self.quadric.subs({VARS[i]: SparsePoly.var(VARS[i]) * -1 for i in range(6) if flip[i] < 0})
        return ConicCurve(name or f"s{''.join(map(str, sorted(label)))}{self.name}", forms, q)

    def conjugate(self, d: int, name: str | None = None) -> "ConicCurve":
        """Image under ``√d -> -√d``."""
        forms = tuple(tuple(_conj_scalar(c, d) for c in form) for form in self.linear_forms)
        q = self.quadric.map_coeffs(lambda c: _conj_scalar(c, d))
        return ConicCurve(name or f"{self.name}^conj", forms, q)

    def describe(self) -> list[str]:
        out = []
        for form in self.linear_forms:
            total = SparsePoly(VARS, {})
            for i, c in enumerate(form):
                if not is_zero(c):
                    total = total + SparsePoly.var(VARS[i]) * c
            out.append(str(total))
        out.append(str(self.quadric))
        return out


def _form(**coeffs) -> tuple:
    vec = _zero_vec()
    for k, c in coeffs.items():
        vec[int(k[1:])] = normalize_scalar(c)
    return tuple(vec)


def conic_c1() -> ConicCurve:
    """The Q(√2) conic contracted by π- (corrected form)."""
    return ConicCurve(
        "C1",
        (_form(x1=1, x2=R2), _form(x5=1, x4=-R2), _form(x3=1, x0=-R2)),
        parse_poly("x2^2 + x4^2 - 6*x0^2", VARS),
    )


def conic_c1_printed() -> ConicCurve:
    return ConicCurve(
        "C1_printed",
        (_form(x1=1, x2=R2), _form(x4=1, x5=R2), _form(x3=2, x0=-R2)),
        parse_poly("2*x2^2 - x5^2 + 12*x0^2", VARS),
    )


def conic_c2() -> ConicCurve:
    return ConicCurve(
        "C2",
        (_form(x1=1, x4=-RM2), _form(x2=2, x5=-RM2), _form(x3=1, x0=RM2)),
        parse_poly("2*x4^2 - x5^2 + 4*x0^2", VARS),
    )


@dataclass
class ConicCheck:
    conic: ConicCurve
    on_surface: bool
    irreducible: bool
    proportionality: list
    pi_minus: object

    def to_json(self) -> dict:
        return {
            "name": self.conic.name,
            "equations": self.conic.describe(),
            "field": list(self.conic.field),
            "on_surface": self.on_surface,
            "irreducible": self.irreducible,
            "restricted_equations_ratio": [_json_scalar(x) if x is not None else None for x in self.proportionality],
            "pi_minus_value": _base_json(self.pi_minus),
        }


def check_conic(conic: ConicCurve, params: FamilyParams = BUCHI_PARAMS) -> ConicCheck:
    """Restrict the surface equations to the conic's plane; they must be multiples of the conic."""
    curve = conic.as_curve()
    names = ("a", "b", "c")
    q = curve.restrict(conic.quadric, names)
    ratios = []
    ok = not q.is_zero()
    for eq in klein_system(params).quadrics:
        r = curve.restrict(eq, names)
        ratio = _ratio(r, q) if ok else None
        ratios.append(ratio)
        if ratio is None:
            ok = False
    sym = [[q.coefficient({names[i]: 1, names[j]: 1}) / (1 if i != j else 1) for j in range(3)] for i in range(3)]
    gram = [[(sym[i][j] if i != j else q.coefficient({names[i]: 2}) * 2) for j in range(3)] for i in range(3)]
    irreducible = not is_zero(ExactMatrix(gram).det())
    try:
        value = pi_value_on_span(curve.span, -1)
    except ValueError:
        value = None
    return ConicCheck(conic, ok, irreducible, ratios, value)


def _ratio(p: SparsePoly, q: SparsePoly):
    """``λ`` with ``p = λ q`` (``λ`` may be 0), or None."""
    if p.is_zero():
        return Fraction(0)
    e, c = next(iter(q.terms.items()))
    lam = normalize_scalar(p.terms.get(e, 0) / c) if e in p.terms else None
    if lam is None:
        return None
    return lam if (p - q * lam).is_zero() else None


def conics() -> tuple[ConicCheck, ConicCheck]:
    return check_conic(conic_c1()), check_conic(conic_c2())


# fibrations ----------------------------------------------------------------------

def pi_forms(sign: int) -> tuple[list, list]:
    """Denominator and numerator of the base coordinate ``c = (x1 + x5)/(x2 ± x4)``."""
    den = [0, 0, 1, 0, sign, 0]
    num = [0, 1, 0, 0, 0, 1]
    return den, num


def pi_value_on_span(span, sign: int):
    """Constant value of ``c`` on a span, or raise when π is not constant there."""
    den, num = pi_forms(sign)
    a = [_dot(den, v) for v in span]
    b = [_dot(num, v) for v in span]
    if all(is_zero(x) for x in a) and all(is_zero(y) for y in b):
        raise ValueError("span lies in the base locus")
    for i in range(len(a)):
        for j in range(i + 1, len(a)):
            if not is_zero(a[i] * b[j] - a[j] * b[i]):
                raise ValueError("π is not constant on this span")
    k = next(i for i in range(len(a)) if not (is_zero(a[i]) and is_zero(b[i])))
    if is_zero(a[k]):
        return "inf"
    return normalize_scalar(b[k] / a[k])


def _base_json(c):
    if c is None:
        return None
    if c == "inf":
        return ["1", "0"]
    return [_json_scalar(c), "1"]


@dataclass(frozen=True)
class Fibration:
    sign: int  # +1 for π+, -1 for π-

    @property
    def name(self) -> str:
        return "plus" if self.sign > 0 else "minus"

    def base_map(self) -> tuple[str, str]:
        op = "+" if self.sign > 0 else "-"
        return (f"x2 {op} x4", "x1 + x5")

    def relation_in_ideal(self, params: FamilyParams = BUCHI_PARAMS) -> bool:
        """``(x1+x5)(x1-x5) - 2(x2+x4)(x2-x4)`` lies in the net."""
        rel = [0, 1, -2, 0, 2, -1]
        net = klein_system(params).net_matrix()
        return ExactMatrix(list(net.rows) + [rel]).rank() == 3

    def value_on_line(self, line: FamilyLine, params: FamilyParams = BUCHI_PARAMS):
        try:
            return pi_value_on_span(line_curve(line, params).span, self.sign)
        except ValueError:
            return None

    def is_section(self, line: FamilyLine, params: FamilyParams = BUCHI_PARAMS) -> bool:
        return self.value_on_line(line, params) is None


PI_PLUS = Fibration(1)
PI_MINUS = Fibration(-1)


def fibration(which: str) -> Fibration:
    if which in ("plus", "+"):
        return PI_PLUS
    if which in ("minus", "-"):
        return PI_MINUS
    raise ValueError(f"unknown fibration {which!r}; use plus or minus")


def _minus_conics() -> dict:
    c1, c2 = conic_c1(), conic_c2()
    c1c, c2c = c1.conjugate(2, "C1'"), c2.conjugate(-2, "C2'")
    return {
        "C1": c1,
        "s0C1": c1.with_signs([0], "s0C1"),
        "C1'": c1c,
        "s0C1'": c1c.with_signs([0], "s0C1'"),
        "C2": c2,
        "s0C2": c2.with_signs([0], "s0C2"),
        "C2'": c2c,
        "s0C2'": c2c.with_signs([0], "s0C2'"),
    }


def fibration_conics(fib: Fibration) -> dict[str, ConicCurve]:
    """The eight conics in I2 fibers; π+ uses the images under the sign change of x4."""
    base = _minus_conics()
    if fib.sign < 0:
        return base
    return {f"s4{k}": c.with_signs([4], f"s4{k}") for k, c in base.items()}


def singular_base_points() -> list:
    return [Fraction(1), Fraction(-1), Fraction(2), Fraction(-2), R2, -R2, RM2, -RM2]


@dataclass
class FiberDescriptor:
    fibration: str
    base: object
    components: list[str]
    degrees: list[int]
    kodaira: str
    checks: dict = field(default_factory=dict)

    @property
    def euler(self) -> int:
        if self.kodaira.startswith("I") and self.kodaira[1:].isdigit():
            return int(self.kodaira[1:])
        return 0

    def to_json(self) -> dict:
        return {
            "fibration": self.fibration,
            "base": _base_json(self.base),
            "components": self.components,
            "degrees": self.degrees,
            "degree_sum": sum(self.degrees),
            "kodaira": self.kodaira,
            "checks": self.checks,
        }


def fiber_decomposition(fib: Fibration, base=None) -> FiberDescriptor:
    """Fiber of π± over ``[c, 1]`` at ``(t, s) = (-1, 1)``; ``base=None`` means a generic fiber."""
    if base is not None and base != "inf":
        base = normalize_scalar(base)
    line_comps = [l for l in all_lines() if base is not None and _eq(fib.value_on_line(l), base)]
    conic_comps = []
    if base is not None:
        for name, c in fibration_conics(fib).items():
            if _eq(pi_value_on_span(c.as_curve().span, fib.sign), base):
                conic_comps.append((name, c))
    if line_comps:
        curves = [line_curve(l) for l in line_comps]
        cycle = len(line_comps) == 4 and is_four_cycle(line_comps)
        return FiberDescriptor(
            fib.name,
            base,
            [l.name for l in line_comps],
            [1] * len(line_comps),
            "I4" if cycle else "unknown",
            {"four_cycle": cycle, "pairwise": _pairwise(curves)},
        )
    if conic_comps:
        curves = [c.as_curve() for _, c in conic_comps]
        pair = _pairwise(curves)
        kodaira = "I2" if len(curves) == 2 and pair[0][2] == 2 else "unknown"
        return FiberDescriptor(
            fib.name,
            base,
            [n for n, _ in conic_comps],
            [2] * len(conic_comps),
            kodaira,
            {"on_surface": [check_conic(c).on_surface for _, c in conic_comps], "pairwise": pair},
        )
    total = sum(fiber_decomposition(fib, c).euler for c in singular_base_points())
    return FiberDescriptor(
        fib.name,
        base,
        [],
        [4],
        "smooth",
        {"reason": "Euler numbers of the catalogued singular fibers already sum to 24", "catalogued_euler_sum": total},
    )


def _eq(a, b) -> bool:
    if a is None or b is None:
        return False
    if a == "inf" or b == "inf":
        return a == b
    return is_zero(normalize_scalar(a - b))


def _pairwise(curves: list[PlaneCurve]) -> list:
    out = []
    for i in range(len(curves)):
        for j in range(i + 1, len(curves)):
            out.append([curves[i].name, curves[j].name, intersection_length(curves[i], curves[j])])
    return out


def singular_fibers(fib: Fibration) -> list[FiberDescriptor]:
    return [fiber_decomposition(fib, c) for c in singular_base_points()]


# intersection numbers ------------------------------------------------------------

def intersection_length(a: PlaneCurve, b: PlaneCurve) -> int:
    """Length of the scheme ``a ∩ b`` for distinct curves on the surface."""
    cols = [list(v) for v in a.span] + [[-x for x in v] for v in b.span]
    m = ExactMatrix([[cols[k][i] for k in range(len(cols))] for i in range(6)])
    kernel = m.nullspace()
    common = []
    for vec in kernel:
        point = [normalize_scalar(sum((vec[k] * a.span[k][i] for k in range(len(a.span))), Fraction(0))) for i in range(6)]
        common.append(point)
    dim = len(common)
    if dim == 0:
        return 0
    equations = list(a.equations) + list(b.equations)
    if dim == 1:
        env = dict(zip(VARS, common[0]))
        return int(all(is_zero(eq.evaluate(env)) for eq in equations))
    if dim == 2:
        meet = PlaneCurve("meet", tuple(tuple(p) for p in common))
        forms = [meet.restrict(eq, ("u", "v")) for eq in equations]
        if not forms:
            raise ValueError(f"{a.name} and {b.name} share a line")
        length = binary_forms_common_length(forms, "u", "v")
        if length is None:
            raise ValueError(f"{a.name} and {b.name} share a component")
        return length
    raise ValueError(f"{a.name} and {b.name} span the same plane")


def curve_catalog() -> dict[str, PlaneCurve]:
    """The 32 lines followed by C1 and C2."""
    cat = {l.name: line_curve(l) for l in all_lines()}
    cat["C1"] = conic_c1().as_curve()
    cat["C2"] = conic_c2().as_curve()
    return cat


def intersection_number(a: PlaneCurve, b: PlaneCurve) -> int:
    if a.name == b.name and a.span == b.span:
        return -2
    return intersection_length(a, b)


# sections O and Q ----------------------------------------------------------------

SECTION_O = ("-2*alpha - 2", "2*alpha + 1", "-2*alpha", "-2*alpha + 1", "2*alpha - 2", "1")
SECTION_Q = ("2*alpha + 2", "-2*alpha - 1", "2*alpha", "2*alpha - 1", "-2*alpha + 2", "1")


def section_coords(printed: Sequence[str], reading: str = "shifted") -> list[SparsePoly]:
    """Coordinates ``(x0, ..., x5)``; the shifted reading takes the list as ``(x1, ..., x5, x0)``."""
    polys = [parse_poly(p, ("alpha",)) for p in printed]
    if reading == "shifted":
        return [polys[5]] + polys[:5]
    if reading == "printed":
        return polys
    raise ValueError(f"unknown reading {reading!r}")


def section_report(name: str, printed: Sequence[str], params: FamilyParams = BUCHI_PARAMS) -> dict:
    out = {"name": name}
    system = klein_system(params)
    alpha = SparsePoly.var("alpha")
    for reading in ("printed", "shifted"):
        x = section_coords(printed, reading)
        residuals = system.residuals(x)
        rel = (x[4] - x[2]) - alpha * (x[1] + x[5])
        out[reading] = {
            "residuals": [str(r) for r in residuals],
            "on_surface": all(is_zero(r) for r in residuals),
            "fiber_relation": rel.is_zero(),
        }
    x = section_coords(printed, "shifted")
    const = [p.coefficient({"alpha": 0}) for p in x]
    slope = [p.coefficient({"alpha": 1}) for p in x]
    match = None
    for line in all_lines():
        u, v = line.linear_coefficients(params)
        if ExactMatrix([u, v, const, slope]).rank() == 2:
            match = line
            break
    out["line"] = None if match is None else match.name
    out["pi_minus_section"] = None if match is None else PI_MINUS.is_section(match)
    return out


def sections_o_q() -> dict:
    o = section_report("O", SECTION_O)
    q = section_report("Q", SECTION_Q)
    adjacent = None
    if o["line"] and q["line"]:
        lo = _line_by_name(o["line"])
        lq = _line_by_name(q["line"])
        adjacent = intersection_length(line_curve(lo), line_curve(lq))
    return {"O": o, "Q": q, "O_dot_Q": adjacent}


def _line_by_name(name: str) -> FamilyLine:
    return next(l for l in all_lines() if l.name == name)


# the partition of the lines --------------------------------------------------------

def partition_L(params: FamilyParams = BUCHI_PARAMS) -> dict:
    plus, minus = table_lines(L_PLUS), table_lines(L_MINUS)
    flat_p = [l for row in plus for l in row]
    flat_m = [l for row in minus for l in row]
    values_minus: dict[str, int] = {}
    for l in flat_m:
        v = PI_MINUS.value_on_line(l, params)
        key = "none" if v is None else str(v)
        values_minus[key] = values_minus.get(key, 0) + 1
    intersecting_sections = [
        (a.name, b.name)
        for i, a in enumerate(flat_p)
        for b in flat_p[i + 1 :]
        if len(a.label ^ b.label) in (1, 5)
    ]
    return {
        "covers_all_lines": len(set(flat_p + flat_m)) == 32,
        "rows_are_four_cycles": {
            "plus": [is_four_cycle(r) for r in plus],
            "minus": [is_four_cycle(r) for r in minus],
        },
        "plus_rows_are_pi_plus_fibers": [
            len({str(PI_PLUS.value_on_line(l, params)) for l in row}) == 1
            and PI_PLUS.value_on_line(row[0], params) is not None
            for row in plus
        ],
        "minus_rows_are_pi_minus_fibers": [
            len({str(PI_MINUS.value_on_line(l, params)) for l in row}) == 1
            and PI_MINUS.value_on_line(row[0], params) is not None
            for row in minus
        ],
        "plus_lines_are_pi_minus_sections": all(PI_MINUS.is_section(l, params) for l in flat_p),
        "minus_lines_are_pi_plus_sections": all(PI_PLUS.is_section(l, params) for l in flat_m),
        "pi_minus_values_on_minus_lines": dict(sorted(values_minus.items())),
        "intersecting_pi_minus_sections": len(intersecting_sections),
        "table_plus": [[l.name for l in row] for row in plus],
        "table_minus": [[l.name for l in row] for row in minus],
    }


def empty_coordinate_triples(params: FamilyParams = BUCHI_PARAMS) -> bool:
    """X meets no coordinate plane ``x_a = x_b = x_c = 0`` (all triple minors nonzero)."""
    from itertools import combinations

    net = klein_system(params).net
    for triple in combinations(range(6), 3):
        rest = [i for i in range(6) if i not in triple]
        if is_zero(ExactMatrix([[net[k][i] for i in rest] for k in range(3)]).det()):
            return False
    return True


__all__ = [
    "ConicCurve",
    "FiberDescriptor",
    "Fibration",
    "PI_MINUS",
    "PI_PLUS",
    "PlaneCurve",
    "check_conic",
    "conic_c1",
    "conic_c1_printed",
    "conic_c2",
    "conics",
    "curve_catalog",
    "fiber_decomposition",
    "fibration",
    "fibration_conics",
    "intersection_length",
    "intersection_number",
    "line_curve",
    "parse_label",
    "partition_L",
    "section_report",
    "sections_o_q",
    "singular_base_points",
    "singular_fibers",
]
