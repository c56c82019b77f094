"""Büchi surfaces X_n: the diagonal quadric systems, their smoothness and special points."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from itertools import combinations, product
from math import isqrt
from typing import Sequence

from .exact import ExactMatrix, SparsePoly, is_prime, parse_poly
from .exact.finite_field import GF, GFp2
from .exact.numtheory import least_nonresidue
from .exact.poly import MAX_VARIABLES


def _x(i: int) -> str:
    return f"x{i}"


@dataclass(frozen=True)
class BuchiSystem:
    """The ``n - 2`` quadrics ``x_{i+2}^2 - 2x_{i+1}^2 + x_i^2 - 2x_0^2``.

    ``coefficients[k]`` holds the diagonal coefficients of quadric ``k`` on
    ``x_0^2, ..., x_n^2`` (the rows of ``B_n``).
    """

    n: int
    coefficients: tuple[tuple[int, ...], ...]

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(_x(i) for i in range(self.n + 1))

    @property
    def quadrics(self) -> tuple[SparsePoly, ...]:
        if self.n + 1 > MAX_VARIABLES:
            raise ValueError(f"polynomial form limited to n <= {MAX_VARIABLES - 1}; use coefficients")
        out = []
        for row in self.coefficients:
            terms = {}
            for i, c in enumerate(row):
                if c:
                    e = [0] * (self.n + 1)
                    e[i] = 2
                    terms[tuple(e)] = c
            out.append(SparsePoly(self.variables, terms))
        return tuple(out)

    def residuals(self, values: Sequence) -> list:
        """Quadric values at a point whose coordinates may be scalars or polynomials."""
        if len(values) != self.n + 1:
            raise ValueError(f"expected {self.n + 1} coordinates, got {len(values)}")
        squares = [v * v for v in values]
        out = []
        for row in self.coefficients:
            total = Fraction(0)
            for c, sq in zip(row, squares):
                if c:
                    total = sq * c + total
            out.append(total)
        return out

    def to_json(self) -> dict:
        if self.n + 1 <= MAX_VARIABLES:
            eqs = [str(q) for q in self.quadrics]
        else:
            eqs = [
                " + ".join(f"{c}*x{i}^2" for i, c in enumerate(row) if c).replace("+ -", "- ")
                for row in self.coefficients
            ]
        return {"n": self.n, "quadrics": eqs}


def _require_n(n: int) -> None:
    if not isinstance(n, int) or n < 3:
        raise ValueError(f"Büchi systems need n >= 3, got {n}")


def buchi_system(n: int) -> BuchiSystem:
    _require_n(n)
    rows = []
    for i in range(1, n - 1):
        row = [0] * (n + 1)
        row[0] = -2
        row[i] += 1
        row[i + 1] += -2
        row[i + 2] += 1
        rows.append(tuple(row))
    return BuchiSystem(n, tuple(rows))


def residuals(system: BuchiSystem, point: "SequencePoint | Sequence") -> list:
    coords = point.coords if isinstance(point, SequencePoint) else point
    return [
        r if isinstance(r, SparsePoly) else Fraction(r) if isinstance(r, int) else r
        for r in system.residuals(list(coords))
    ]


@dataclass(frozen=True)
class SequencePoint:
    coords: tuple[Fraction, ...]
    projective: bool = True

    def __post_init__(self):
        coords = tuple(Fraction(c) for c in self.coords)
        if not any(coords):
            raise ValueError("the zero vector is not a projective point")
        object.__setattr__(self, "coords", coords)

    @property
    def n(self) -> int:
        return len(self.coords) - 1

    def primitive(self) -> tuple[int, ...]:
        """Primitive integer representative with first non-zero coordinate positive."""
        from math import gcd, lcm

        den = 1
        for c in self.coords:
            den = lcm(den, c.denominator)
        ints = [int(c * den) for c in self.coords]
        g = 0
        for v in ints:
            g = gcd(g, v)
        ints = [v // g for v in ints]
        first = next(v for v in ints if v)
        return tuple(ints if first > 0 else [-v for v in ints])

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coords]


@dataclass(frozen=True)
class TrivialityVerdict:
    status: str  # "trivial", "non-trivial" or "unclassified"
    t: Fraction | None = None
    reason: str = ""

    @property
    def trivial(self) -> bool:
        return self.status == "trivial"

    def to_json(self) -> dict:
        return {"status": self.status, "t": None if self.t is None else str(self.t), "reason": self.reason}


def _affine(point) -> list[Fraction] | None:
    coords = [Fraction(c) for c in (point.coords if isinstance(point, SequencePoint) else point)]
    if coords[0] == 0:
        return None
    return [c / coords[0] for c in coords]


def is_trivial(point) -> TrivialityVerdict:
    """Squares criterion: ``(x_i/x_0)^2 = (t+i)^2`` for a single rational ``t``."""
    y = _affine(point)
    if y is None:
        return TrivialityVerdict("unclassified", None, "point at infinity (x0 = 0)")
    n = len(y) - 1
    if n < 2:
        raise ValueError("need at least x0, x1, x2")
    t = (y[2] ** 2 - y[1] ** 2 - 3) / 2
    if all(y[i] ** 2 == (t + i) ** 2 for i in range(1, n + 1)):
        return TrivialityVerdict("trivial", t)
    return TrivialityVerdict("non-trivial", None, "no t with x_i^2 = (t+i)^2 for all i")


def sign_pattern_oracle(point) -> bool:
    """Exhaustive check: some sign pattern turns ``x_i/x_0`` into ``t+1, ..., t+n``."""
    y = _affine(point)
    if y is None:
        return False
    n = len(y) - 1
    for eps in product((1, -1), repeat=n):
        z = [e * v for e, v in zip(eps, y[1:])]
        if all(z[i] - z[0] == i for i in range(n)):
            return True
    return False


# matrices and minors -------------------------------------------------

def cartan_data(n: int) -> tuple[ExactMatrix, ExactMatrix]:
    """``(A_n, B_n)``: the negated type-A Cartan matrix and the coefficient matrix."""
    _require_n(n)
    a = [[-2 if i == j else 1 if abs(i - j) == 1 else 0 for j in range(n)] for i in range(n)]
    b = [list(row) for row in buchi_system(n).coefficients]
    return ExactMatrix(a), ExactMatrix(b)


@dataclass(frozen=True)
class MinorSpec:
    n: int
    a: int
    b: int
    c: int

    def __post_init__(self):
        _require_n(self.n)
        if not (0 <= self.a < self.b < self.c <= self.n):
            raise ValueError(f"need 0 <= a < b < c <= n, got {(self.a, self.b, self.c)} with n = {self.n}")


def minor_det_closed(spec: MinorSpec) -> int:
    a, b, c = spec.a, spec.b, spec.c
    if a == 0:
        return (-1) ** (b + c) * (b - c)
    return (-1) ** (a + b + c) * (a - b) * (a - c) * (b - c)


def minor_det_brute(spec: MinorSpec) -> Fraction:
    _, bn = cartan_data(spec.n)
    return bn.delete_columns((spec.a, spec.b, spec.c)).det()


def minor_det(spec: MinorSpec, method: str = "closed_form"):
    if method == "closed_form":
        return minor_det_closed(spec)
    if method == "brute_force":
        return minor_det_brute(spec)
    raise ValueError(f"unknown method {method!r}")


def all_minor_specs(n: int) -> list[MinorSpec]:
    return [MinorSpec(n, a, b, c) for a, b, c in combinations(range(n + 1), 3)]


def relation_square(i: int) -> tuple[int, int, int]:
    """Coefficients of ``x_i^2 = α x_0^2 + β x_1^2 + γ x_2^2`` on X_n."""
    return (i - 1) * (i - 2), -(i - 2), i - 1


# smoothness ------------------------------------------------------------

@dataclass
class SmoothnessReport:
    n: int
    p: int
    verdict: str  # "smooth" or "singular"
    components: int | None = None
    witnesses: list = field(default_factory=list)
    certificate: dict = field(default_factory=dict)

    @property
    def singular(self) -> bool:
        return self.verdict == "singular"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "verdict": self.verdict,
            "components": self.components,
            "witnesses": self.witnesses,
            "certificate": self.certificate,
        }


def _square_plane_values(n: int, y0, y1, y2):
    vals = [y0, y1, y2]
    for i in range(3, n + 1):
        a, b, c = relation_square(i)
        vals.append(y0 * a + y1 * b + y2 * c)
    return vals


def _jacobian_rank(n: int, point, p: int) -> int:
    """Rank of the Jacobian of X_n at ``point`` in characteristic ``p``."""
    if p == 2:
        return 0
    _, bn = cartan_data(n)
    support = [i for i, x in enumerate(point) if x]
    if not support:
        return 0
    return bn.submatrix(range(n - 2), support).rank_mod(p)


def _projective_plane(elements):
    elements = list(elements)
    zero, one = elements[0] * 0, elements[0] * 0 + 1
    for a in elements:
        for b in elements:
            yield (one, a, b)
    for b in elements:
        yield (zero, one, b)
    yield (zero, zero, one)


def _find_singular_points(n: int, p: int, field_degree: int, limit: int = 3) -> list:
    if field_degree == 1:
        elems = [GF(v, p) for v in range(p)]
    else:
        d = least_nonresidue(p)
        elems = [GFp2(a, b, p, d) for a in range(p) for b in range(p)]
    found = []
    for x0, x1, x2 in _projective_plane(elems):
        ys = _square_plane_values(n, x0 * x0, x1 * x1, x2 * x2)
        coords = [x0, x1, x2]
        ok = True
        for y in ys[3:]:
            r = y.sqrt()
            if r is None:
                ok = False
                break
            coords.append(r)
        if not ok:
            continue
        if _jacobian_rank(n, coords, p) < n - 2:
            found.append([str(c) for c in coords])
            if len(found) >= limit:
                break
    return found


def smoothness_report(n: int, p: int, search_limit: int = 13) -> SmoothnessReport:
    """Smoothness of X_n in characteristic ``p`` (``p = 0`` for characteristic zero)."""
    _require_n(n)
    if p != 0 and not is_prime(p):
        raise ValueError(f"characteristic must be 0 or a prime, got {p}")
    specs = all_minor_specs(n)
    if p == 0:
        values = [minor_det_closed(s) for s in specs]
        return SmoothnessReport(
            n,
            p,
            "smooth",
            certificate={
                "kind": "minor determinants",
                "triples": len(specs),
                "all_nonzero": all(values),
            },
        )
    if p >= n:
        bad = [(s.a, s.b, s.c) for s in specs if minor_det_closed(s) % p == 0]
        report = SmoothnessReport(
            n,
            p,
            "smooth" if not bad else "singular",
            certificate={"kind": "minor determinants mod p", "triples": len(specs), "vanishing": bad},
        )
        if p <= search_limit:
            report.certificate["searched_fields"] = ["F_p", "F_p^2"]
            report.witnesses = _find_singular_points(n, p, 1) + _find_singular_points(n, p, 2)
            if report.witnesses:
                report.verdict = "singular"
        return report
    # 0 < p < n: the squares of congruent coordinates coincide
    _, bn = cartan_data(n)
    base_rank = bn.rank_mod(p)
    relations = []
    for j in range(p + 1, n + 1):
        i = (j - 1) % p + 1
        vec = [0] * (n + 1)
        vec[j], vec[i] = 1, -1
        stacked = ExactMatrix(list(bn.rows) + [vec])
        relations.append({"relation": f"x{j}^2 = x{i}^2", "in_ideal": stacked.rank_mod(p) == base_rank})
    components = 2 ** len(relations)
    witnesses = _find_singular_points(n, p, 1)
    if not witnesses:
        witnesses = _find_singular_points(n, p, 2)
    return SmoothnessReport(
        n,
        p,
        "singular",
        components=components,
        witnesses=witnesses,
        certificate={
            "kind": "coordinate congruences",
            "relations": relations,
            "component_model": f"X_{p}",
        },
    )


# lines -------------------------------------------------------------------

@dataclass(frozen=True)
class LineXn:
    signs: tuple[int, ...]  # ε_1..ε_n

    def parametrization(self, u: str = "u", v: str = "v") -> list[SparsePoly]:
        """Homogeneous form ``x_0 = v, x_i = ε_i (u + i v)``."""
        U, V = SparsePoly.var(u), SparsePoly.var(v)
        return [V] + [(U + V * i) * e for i, e in enumerate(self.signs, start=1)]

    def point(self, t) -> SequencePoint:
        t = Fraction(t)
        return SequencePoint((Fraction(1),) + tuple(e * (t + i) for i, e in enumerate(self.signs, start=1)))

    def label(self) -> str:
        return "".join("+" if e > 0 else "-" for e in self.signs)


def lines_of_X(n: int) -> list[tuple[LineXn, bool]]:
    """All lines ``x_i = ±(t+i)`` with their symbolic membership check."""
    system = buchi_system(n)
    out = []
    for signs in product((1, -1), repeat=n):
        line = LineXn(signs)
        ok = all(r.is_zero() for r in system.residuals(line.parametrization()))
        out.append((line, ok))
    return out


def lines_of_X5() -> list[tuple[LineXn, bool]]:
    return lines_of_X(5)


# X_4 parametrization ------------------------------------------------------

X4_BASE_POINTS = ((1, 0, 0), (0, 1, 0), (0, 0, 1), (3, -3, 2), (3, -1, 1))
X4_SAMPLES = ((1, 1, 0), (1, 1, 1), (1, 0, 1), (0, 1, 1), (2, 1, 1), (1, 2, 3), (2, -1, 3))


def x4_printed_table() -> list[str]:
    return json.loads(resources.files("k3lab.data").joinpath("x4_table.json").read_text())["cubics"]


def x4_recorded_verdict() -> dict:
    return json.loads(resources.files("k3lab.data").joinpath("x4_verdict.json").read_text())


def x4_param_check(table: Sequence[str] | None = None, samples=X4_SAMPLES) -> dict:
    """Evaluate a cubic parametrization of X_4 against both quadrics."""
    table = list(table if table is not None else x4_printed_table())
    if len(table) != 5:
        raise ValueError("the table needs five cubics (x0..x4)")
    cubics = [parse_poly(t, ("a", "b", "c")) for t in table]
    for f in cubics:
        if set(f.used_vars()) - {"a", "b", "c"} or any(sum(e) != 3 for e in f.terms):
            raise ValueError(f"{f} is not a cubic form in a, b, c")
    system = buchi_system(4)
    symbolic = system.residuals(cubics)
    base = []
    for bp in X4_BASE_POINTS:
        values = [f.evaluate(dict(zip("abc", bp))) for f in cubics]
        base.append({"point": list(bp), "values": [str(v) for v in values], "all_zero": not any(values)})
    rows = []
    for sp in samples:
        env = dict(zip("abc", sp))
        image = [f.evaluate(env) for f in cubics]
        res = system.residuals(image)
        rows.append(
            {
                "sample": list(sp),
                "image": [str(v) for v in image],
                "residuals": [str(r) for r in res],
                "on_X4": not any(res),
            }
        )
    return {
        "symbolic_identically_zero": [r.is_zero() for r in symbolic],
        "symbolic_residuals": [str(r) for r in symbolic],
        "base_points": base,
        "samples": rows,
        "verdict": "parametrization" if all(r.is_zero() for r in symbolic) else "fails",
    }


# solution family ----------------------------------------------------------

FAMILY = (
    "12*alpha^4 + 5*alpha^2 - 1",
    "8*alpha^5 + 8*alpha^4 + 22*alpha^3 - 2*alpha^2 + 2*alpha + 2",
    "-8*alpha^5 - 4*alpha^4 + 2*alpha^3 - 11*alpha^2 - 2*alpha - 1",
    "8*alpha^5 - 10*alpha^3 - 6*alpha",
    "8*alpha^5 - 4*alpha^4 - 2*alpha^3 - 11*alpha^2 + 2*alpha - 1",
    "-8*alpha^5 + 8*alpha^4 - 22*alpha^3 - 2*alpha^2 - 2*alpha + 2",
)


def family_polys() -> list[SparsePoly]:
    return [parse_poly(f) for f in FAMILY]


def family_point(alpha) -> SequencePoint:
    alpha = Fraction(alpha)
    return SequencePoint(tuple(f.evaluate({"alpha": alpha}) for f in family_polys()))


def family_identity() -> list[SparsePoly]:
    return buchi_system(5).residuals(family_polys())


# integer search ------------------------------------------------------------

DEFAULT_SEARCH_CAP = 10_000


def integer_search(n: int, bound: int, cap: int = DEFAULT_SEARCH_CAP) -> list[tuple[tuple[int, ...], str]]:
    """All integer solutions with ``x_0 = 1`` and ``|x_i| <= bound``, tagged trivial or not."""
    _require_n(n)
    if bound > cap:
        raise ValueError(f"bound {bound} exceeds the search cap {cap}")
    import numpy as np

    hits: list[tuple[int, ...]] = []
    x2 = np.arange(bound + 1, dtype=np.int64)
    for x1 in range(bound + 1):
        prev, cur = np.full_like(x2, x1 * x1), x2 * x2
        cols = [np.full_like(x2, x1), x2]
        alive = np.ones_like(x2, dtype=bool)
        for _ in range(3, n + 1):
            nxt = 2 * cur - prev + 2
            alive &= (nxt >= 0) & (nxt <= bound * bound)
            root = np.where(alive, np.rint(np.sqrt(np.where(alive, nxt, 0))).astype(np.int64), 0)
            alive &= root * root == nxt
            cols.append(root)
            prev, cur = cur, nxt
        for idx in np.nonzero(alive)[0]:
            base = [int(c[idx]) for c in cols]
            assert all(isqrt(v * v) == v for v in base)
            hits.append(tuple(base))
    out = set()
    for base in hits:
        for signs in product((1, -1), repeat=n):
            out.add(tuple(s * v for s, v in zip(signs, base)))
    result = []
    for sol in sorted(out):
        point = (1,) + sol
        result.append((point, is_trivial(point).status))
    return result
