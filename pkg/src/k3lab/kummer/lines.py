"""The 32 lines of X_{t,s}: sign-change orbit of the base line and the intersection graph."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

from ..exact import ExactMatrix, SparsePoly
from .family import BUCHI_PARAMS, FamilyParams, is_zero, klein_system

ALL = frozenset(range(6))


def normalize_label(subset: Iterable[int]) -> frozenset[int]:
    """``σ_P = σ_{[6] - P}``: pick the representative avoiding 0."""
    p = frozenset(subset)
    if not p <= ALL:
        raise ValueError(f"sign-change labels are subsets of 0..5, got {sorted(p)}")
    return ALL - p if 0 in p else p


def parse_label(text: str) -> frozenset[int]:
    """``"014"`` or ``""`` (the base line) to a normalized label."""
    return normalize_label(int(ch) for ch in text.strip())


def label_str(p: Iterable[int]) -> str:
    return "".join(str(i) for i in sorted(p))


@dataclass(frozen=True)
class FamilyLine:
    """The line ``σ_P ℓ``; ``label`` is normalized so that it avoids index 0."""

    label: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "label", normalize_label(self.label))

    def sort_key(self) -> tuple:
        return (len(self.label), sorted(self.label))

    def __lt__(self, other: "FamilyLine") -> bool:
        return self.sort_key() < other.sort_key()

    @property
    def mask(self) -> int:
        return sum(1 << (i - 1) for i in self.label)

    @property
    def name(self) -> str:
        return "l" if not self.label else f"s{label_str(self.label)}l"

    def parity(self) -> int:
        return len(self.label) % 2

    def signs(self) -> tuple[int, ...]:
        return tuple(-1 if i in self.label else 1 for i in range(6))

    def parametrization(self, params: FamilyParams, u: str = "u", v: str = "v") -> list[SparsePoly]:
        base = base_line(params, u, v)
        return [c * e for c, e in zip(base, self.signs())]

    def linear_coefficients(self, params: FamilyParams) -> tuple[list, list]:
        """Coefficients of ``u`` and ``v`` in each coordinate."""
        par = self.parametrization(params)
        return (
            [c.coefficient({"u": 1}) for c in par],
            [c.coefficient({"v": 1}) for c in par],
        )


def base_line(params: FamilyParams, u: str = "u", v: str = "v") -> list[SparsePoly]:
    """The line ``ℓ`` as ``[u : v] -> P^5`` (denominators cleared in the generic case)."""
    t, s = params.t, params.s
    g1, g2, g3, g4 = params.gammas
    U, V = SparsePoly.var(u), SparsePoly.var(v)
    if params.is_symbolic:
        ts = t * s
        return [
            V * ts,
            U * ts,
            U * ts - V * (s * g4),
            U * ts - V * (t * t * s * 2),
            U * ts - V * (t * g3),
            U * ts - V * (ts * g2 * 2),
        ]
    params.require_smooth()
    return [V, U, U - V * (g4 / t), U - V * (t * 2), U - V * (g3 / s), U - V * (g2 * 2)]


def all_lines() -> list[FamilyLine]:
    return sorted(FamilyLine(frozenset(i + 1 for i in range(5) if m >> i & 1)) for m in range(32))


def lines(params: FamilyParams) -> list[tuple[FamilyLine, bool]]:
    """All 32 lines with a symbolic membership check in the line parameter."""
    if not params.is_symbolic:
        params.require_smooth()
    system = klein_system(params)
    out = []
    for line in all_lines():
        residuals = system.residuals(line.parametrization(params))
        out.append((line, all(is_zero(r) for r in residuals)))
    return out


def hyperplane_forms(params: FamilyParams) -> dict[str, list]:
    """Coefficient vectors of ``x1 ± x5 ± 2γ2 x0``."""
    g2 = params.gammas[1]
    out = {}
    for a in (1, -1):
        for b in (1, -1):
            key = f"x1 {'+' if a > 0 else '-'} x5 {'+' if b > 0 else '-'} 2*g2*x0"
            out[key] = [g2 * 2 * b, 1, 0, 0, 0, a]
    return out


def lines_on_hyperplanes(params: FamilyParams) -> dict[str, list[str]]:
    result = {}
    for key, form in hyperplane_forms(params).items():
        hits = []
        for line in all_lines():
            par = line.parametrization(params)
            total = sum((p * c for p, c in zip(par, form) if not is_zero(c)), SparsePoly(("u", "v"), {}))
            if total.is_zero():
                hits.append(line.name)
        result[key] = hits
    return result


def combinatorial_adjacent(a: FamilyLine, b: FamilyLine) -> bool:
    """Adjacent iff ``σ_P σ_P'`` changes the sign of a single variable."""
    return len(a.label ^ b.label) in (1, 5)


def geometric_meet(a: FamilyLine, b: FamilyLine, params: FamilyParams) -> bool:
    """Two distinct lines meet iff their four spanning vectors have rank 3."""
    ua, va = a.linear_coefficients(params)
    ub, vb = b.linear_coefficients(params)
    return ExactMatrix([ua, va, ub, vb]).rank() == 3


@dataclass
class LineGraph:
    vertices: list[FamilyLine]
    adjacency: dict[FamilyLine, list[FamilyLine]]
    geometric_agrees: bool | None

    def degrees(self) -> set[int]:
        return {len(v) for v in self.adjacency.values()}

    def bipartition(self) -> tuple[list[FamilyLine], list[FamilyLine]] | None:
        colour: dict[FamilyLine, int] = {}
        for start in self.vertices:
            if start in colour:
                continue
            colour[start] = 0
            queue = deque([start])
            while queue:
                x = queue.popleft()
                for y in self.adjacency[x]:
                    if y not in colour:
                        colour[y] = 1 - colour[x]
                        queue.append(y)
                    elif colour[y] == colour[x]:
                        return None
        return (
            [v for v in self.vertices if colour[v] == 0],
            [v for v in self.vertices if colour[v] == 1],
        )

    def connected(self) -> bool:
        seen = {self.vertices[0]}
        queue = deque(seen)
        while queue:
            x = queue.popleft()
            for y in self.adjacency[x]:
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return len(seen) == len(self.vertices)

    def edge_count(self) -> int:
        return sum(len(v) for v in self.adjacency.values()) // 2

    def to_json(self) -> dict:
        parts = self.bipartition()
        return {
            "vertices": len(self.vertices),
            "edges": self.edge_count(),
            "degrees": sorted(self.degrees()),
            "connected": self.connected(),
            "bipartition": None if parts is None else [len(parts[0]), len(parts[1])],
            "geometric_agrees": self.geometric_agrees,
        }


def line_graph(params: FamilyParams | None = None) -> LineGraph:
    """Intersection graph; at numeric parameters the rule is cross-checked geometrically."""
    verts = all_lines()
    adj = {a: [b for b in verts if b != a and combinatorial_adjacent(a, b)] for a in verts}
    agrees = None
    if params is not None and not params.is_symbolic:
        params.require_smooth()
        agrees = all(
            geometric_meet(a, b, params) == combinatorial_adjacent(a, b)
            for i, a in enumerate(verts)
            for b in verts[i + 1 :]
        )
    return LineGraph(verts, adj, agrees)


def is_four_cycle(members: list[FamilyLine]) -> bool:
    if len(set(members)) != 4:
        return False
    inner = {a: [b for b in members if b != a and combinatorial_adjacent(a, b)] for a in members}
    if any(len(v) != 2 for v in inner.values()):
        return False
    seen, stack = {members[0]}, [members[0]]
    while stack:
        for y in inner[stack.pop()]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == 4


L_PLUS = (
    ("", "0", "3", "03"),
    ("14", "014", "134", "25"),
    ("24", "024", "234", "15"),
    ("45", "045", "345", "12"),
)
L_MINUS = (
    ("1", "01", "13", "013"),
    ("4", "04", "34", "034"),
    ("124", "35", "05", "5"),
    ("145", "23", "02", "2"),
)


def table_lines(table) -> list[list[FamilyLine]]:
    return [[FamilyLine(parse_label(x)) for x in row] for row in table]


__all__ = [
    "BUCHI_PARAMS",
    "FamilyLine",
    "LineGraph",
    "L_MINUS",
    "L_PLUS",
    "all_lines",
    "base_line",
    "combinatorial_adjacent",
    "geometric_meet",
    "is_four_cycle",
    "label_str",
    "line_graph",
    "lines",
    "lines_on_hyperplanes",
    "normalize_label",
    "parse_label",
    "table_lines",
]
