"""Quadrics of rank four in the net of X_{t,s} and the absence of rank-three members."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from ..exact import ExactMatrix, SparsePoly, parse_poly
from .family import VARS, FamilyParams, is_zero, klein_system, proportional

GAMMA_TEXT = {
    "g1": "(2*s^2 - 1)",
    "g2": "(t - s)",
    "g3": "(2*t*s - 1)",
    "g4": "(2*t^2 - 1)",
}

# the printed table, row by row (three entries per row)
RG4_TABLE = (
    "g1*(x1^2 - 2*t^2*x2^2) + g4*(2*s^2*x4^2 - x5^2)",
    "s*x1^2 + g2*x3^2 - t*x5^2 - 4*t*s*g2*x0^2",
    "t*(t*s*x2^2 - s*g2*x3^2 - s^2*x4^2) + g2*x0^2",
    "x1^2 - 2*t^2*x2^2 + g4*(x3^2 - 2*x0^2)",
    "t*s*(g2*x1^2 + t*g3*x2^2 - s*g4*x4^2) - g2*g3*g4*x0^2",
    "s*g3*x1^2 + 4*t^3*s*g2*x2^2 - g2*g3*g4*x3^2 - t*g4*x5^2",
    "g1*x3^2 - 2*s^2*x4^2 + x5^2 - 2*g1*x0^2",
    "t*s*(t*g1*x2^2 - s*g3*x4^2 + g2*x5^2) - g1*g2*g3*x0^2",
    "s*g1*x1^2 - g1*g2*g3*x3^2 + 4*t*s^3*g2*x4^2 - t*g3*x5^2",
    "s*(x1^2 + g3*x3^2 - 2*t*s*x4^2) - 2*t*g3*x0^2",
    "t*(g3*x1^2 + 2*t*g2*x2^2 - g4*x5^2) - 2*g2*g3*g4*x0^2",
    "g2*x1^2 + 2*t^3*g3*x2^2 - g2*g3*g4*x3^2 - 2*t*s^2*g4*x4^2",
    "t*(2*t*s*x2^2 - g3*x3^2 - x5^2) + 2*s*g3*x0^2",
    "s*(g1*x1^2 + 2*s*g2*x4^2 - g3*x5^2) - 2*g1*g2*g3*x0^2",
    "2*s*t^2*g1*x2^2 - g1*g2*g3*x3^2 - 2*s^3*g3*x4^2 + g2*x5^2",
)


def table_poly(index: int) -> SparsePoly:
    text = RG4_TABLE[index]
    for g, expr in GAMMA_TEXT.items():
        text = text.replace(g, expr)
    return parse_poly(text, ("t", "s") + VARS)


def table_position(index: int) -> tuple[int, int]:
    """(row, column) of a table entry, both 1-based."""
    return index // 3 + 1, index % 3 + 1


def diagonal_coefficients(q: SparsePoly, params: FamilyParams) -> list:
    """Coefficients of ``x_i^2`` as polynomials in ``t, s`` or as scalars at ``params``."""
    out = []
    for i, x in enumerate(VARS):
        c = SparsePoly(q.vars, {e: c for e, c in q.terms.items() if e[q.vars.index(x)] == 2})
        c = c.subs({x: 1})
        if not params.is_symbolic:
            c = c.evaluate({"t": params.t, "s": params.s}) if not c.is_zero() else 0
        out.append(c)
    return out


def _cross(a, b):
    return [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]


@dataclass
class RankFourQuadric:
    omitted: tuple[int, int]
    multipliers: list
    coefficients: list
    rank: int
    table_index: int | None

    @property
    def poly(self) -> SparsePoly:
        total = SparsePoly(VARS, {})
        for i, c in enumerate(self.coefficients):
            if not is_zero(c):
                total = total + SparsePoly.var(VARS[i]) ** 2 * c
        return total

    def to_json(self) -> dict:
        return {
            "omitted": [f"x{i}" for i in self.omitted],
            "quadric": str(self.poly),
            "rank": self.rank,
            "table_entry": None if self.table_index is None else list(table_position(self.table_index)),
        }


@dataclass
class Rank4Analysis:
    params: FamilyParams
    quadrics: list[RankFourQuadric]
    triple_determinants: dict[tuple[int, int, int], object]

    @property
    def all_matched(self) -> bool:
        idx = [q.table_index for q in self.quadrics]
        return None not in idx and len(set(idx)) == 15

    @property
    def all_rank_four(self) -> bool:
        return all(q.rank == 4 for q in self.quadrics)

    @property
    def no_rank_three(self) -> bool:
        return all(not is_zero(d) for d in self.triple_determinants.values())

    def to_json(self) -> dict:
        return {
            "params": self.params.to_json(),
            "quadrics": [q.to_json() for q in self.quadrics],
            "all_matched": self.all_matched,
            "all_rank_four": self.all_rank_four,
            "triple_determinants": {
                "".join(map(str, k)): str(v) for k, v in sorted(self.triple_determinants.items())
            },
            "no_rank_three": self.no_rank_three,
        }


def rank4_analysis(params: FamilyParams) -> Rank4Analysis:
    """Eliminate every pair of variables from the net and compare with the printed table."""
    if not params.is_symbolic:
        params.require_smooth()
    net = klein_system(params).net
    cols = [[net[k][i] for k in range(3)] for i in range(6)]
    table = [diagonal_coefficients(table_poly(i), params) for i in range(15)]
    out = []
    for a, b in combinations(range(6), 2):
        lam = _cross(cols[a], cols[b])
        if all(is_zero(x) for x in lam):
            raise ValueError(f"degenerate elimination of x{a}, x{b}")
        coeffs = [sum((lam[k] * net[k][i] for k in range(3)), lam[0] * 0) for i in range(6)]
        coeffs = [_simplify(c) for c in coeffs]
        rank = sum(1 for c in coeffs if not is_zero(c))
        match = next((j for j, row in enumerate(table) if proportional(coeffs, row)), None)
        out.append(RankFourQuadric((a, b), lam, coeffs, rank, match))
    dets = {}
    for triple in combinations(range(6), 3):
        m = ExactMatrix([[net[k][i] for i in triple] for k in range(3)])
        dets[triple] = _simplify(m.det())
    return Rank4Analysis(params, out, dets)


def _simplify(c):
    if isinstance(c, SparsePoly) and c.is_constant():
        from ..exact.poly import normalize_scalar

        return normalize_scalar(c.constant_term())
    return c
