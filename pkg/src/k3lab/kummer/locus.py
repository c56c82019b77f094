"""Special automorphism loci in the (t, s) plane and the genus-two source data."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..exact import ExactMatrix, MultiQuad, SparsePoly, field_tag, parse_poly
from ..exact.multiquad import sqrt
from ..exact.poly import normalize_scalar
from .family import FamilyParams, _json_scalar

D4_POLY = "(t + s)*(2*t*s + 1)"
D6_FACTORS = (
    "t^2 - t*s + s^2 - 1/2",
    "4*t^2*s^2 - 2*t*s - 2*t^2 + 1",
    "4*t^2*s^2 - 2*t*s - 2*s^2 + 1",
    "2*t^2*s^2 - t^2 + t*s - s^2",
)

GROUP_ORDERS = {"V4": 4, "D4": 8, "D6": 12, "2D6": 24, "S4t": 48}


def _pm(points):
    out = []
    for t, s in points:
        out.append((t, s))
        out.append((-t, -s))
    return out


def points_2d6() -> list[tuple]:
    a, b = sqrt(Fraction(3, 2)), sqrt(Fraction(1, 6))
    return _pm([(-a, b), (b, -b), (a, -a), (b, -a)])


def points_s4t() -> list[tuple]:
    i = sqrt(-1)
    h = Fraction(1, 2)
    return _pm(
        [
            ((i - 1) * h, (1 - i) * h),
            ((i - 1) * h, (1 + i) * h),
            ((i + 1) * h, (-1 - i) * h),
            ((i + 1) * h, (i - 1) * h),
        ]
    )


def _eval(text: str, params: FamilyParams):
    return parse_poly(text, ("t", "s")).evaluate({"t": params.t, "s": params.s})


def _same(p, q) -> bool:
    return normalize_scalar(p) == normalize_scalar(q)


@dataclass
class LocusReport:
    params: FamilyParams
    label: str
    d4_value: object
    d6_values: list
    special_point: str | None

    def to_json(self) -> dict:
        return {
            "params": self.params.to_json(),
            "group": self.label,
            "group_order": GROUP_ORDERS[self.label],
            "d4_value": _json_scalar(self.d4_value),
            "d6_values": [_json_scalar(v) for v in self.d6_values],
            "special_point": self.special_point,
        }


def locus_classify(params: FamilyParams) -> LocusReport:
    """Largest group among V4, D4, D6, 2D6, S4t whose locus contains ``(t, s)``."""
    if params.is_symbolic:
        raise ValueError("locus classification needs numeric parameters")
    params.require_smooth()
    d4 = _eval(D4_POLY, params)
    d6 = [_eval(f, params) for f in D6_FACTORS]
    special = None
    label = "V4"
    for name, pts in (("S4t", points_s4t()), ("2D6", points_2d6())):
        if any(_same(params.t, t) and _same(params.s, s) for t, s in pts):
            label, special = name, name
            break
    if special is None:
        if any(v == 0 for v in d6):
            label = "D6"
        elif d4 == 0:
            label = "D4"
    return LocusReport(params, label, d4, d6, special)


def branch_evaluations(params: FamilyParams) -> list[dict]:
    """Evaluate the locus polynomials at every Galois conjugate of ``(t, s)``."""
    gens = field_tag(params.t, params.s)
    t = _as_mq(params.t).embed(gens)
    s = _as_mq(params.s).embed(gens)
    out = []
    for mask in range(1 << len(gens)):
        p = FamilyParams(t.conjugate(mask), s.conjugate(mask))
        out.append(
            {
                "conjugation_mask": mask,
                "t": _json_scalar(p.t),
                "s": _json_scalar(p.s),
                "d4_value": _json_scalar(_eval(D4_POLY, p)),
                "d6_values": [_json_scalar(_eval(f, p)) for f in D6_FACTORS],
            }
        )
    return out


def _as_mq(x) -> MultiQuad:
    return x if isinstance(x, MultiQuad) else MultiQuad.from_rational(x)


# genus two data ---------------------------------------------------------------

def j_from_roots(e1, e2, e3):
    lam = normalize_scalar((e3 - e1) / (e2 - e1))
    num = (lam * lam - lam + 1) ** 3 * 256
    den = lam * lam * (lam - 1) ** 2
    return normalize_scalar(num / den)


def multiplication_matrix(x: MultiQuad) -> ExactMatrix:
    cols = []
    for idx in range(len(x.coords)):
        basis = MultiQuad(x.gens, [int(k == idx) for k in range(len(x.coords))])
        cols.append(list((x * basis).embed(x.gens).coords))
    return ExactMatrix([[cols[j][i] for j in range(len(cols))] for i in range(len(cols))])


def integrality(x) -> dict:
    x = normalize_scalar(x)
    if not isinstance(x, MultiQuad):
        return {"rational": True, "rational_integer": x.denominator == 1, "algebraic_integer": x.denominator == 1}
    cp = multiplication_matrix(x).charpoly()
    return {
        "rational": False,
        "rational_integer": False,
        "algebraic_integer": all(Fraction(c).denominator == 1 for c in cp),
    }


@dataclass
class Genus2Data:
    params: FamilyParams
    weierstrass: list
    e1_roots: list
    e2_roots: list
    j1: object
    j2: object

    def sextic(self) -> SparsePoly:
        x = SparsePoly.var("x")
        f = SparsePoly.const(1)
        for r in self.weierstrass:
            f = f * (x - r)
        return f

    def to_json(self) -> dict:
        return {
            "params": self.params.to_json(),
            "model": "y^2 = " + str(self.sextic()),
            "finite_weierstrass_points": [_json_scalar(r) for r in self.weierstrass],
            "E1_roots": [_json_scalar(r) for r in self.e1_roots],
            "E2_roots": [_json_scalar(r) for r in self.e2_roots],
            "j1": _json_scalar(self.j1),
            "j2": _json_scalar(self.j2),
            "j1_integrality": integrality(self.j1),
            "j2_integrality": integrality(self.j2),
        }


def genus2_data(params: FamilyParams) -> Genus2Data:
    if params.is_symbolic:
        raise ValueError("genus-two data needs numeric parameters")
    params.require_smooth()
    t, s = params.t, params.s
    r2 = sqrt(2)
    wp = [Fraction(0), normalize_scalar(t * 2), normalize_scalar(s * 2), normalize_scalar(1 / t), normalize_scalar(1 / s)]
    a = normalize_scalar(t * 2 + 1 / t)
    b = normalize_scalar(s * 2 + 1 / s)
    e1 = [normalize_scalar(-r2 * 2), a, b]
    e2 = [normalize_scalar(r2 * 2), a, b]
    return Genus2Data(params, wp, e1, e2, j_from_roots(*e1), j_from_roots(*e2))


BREMNER_PARAMS = ("1/sqrt(-2) - sqrt(2)", "sqrt(-2)")
BB_PARAMS = ("2*sqrt(2)", "sqrt(2)/3")
