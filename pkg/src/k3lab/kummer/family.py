"""The Klein-form family of Kummer surfaces X_{t,s} in P^5."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..exact import ExactMatrix, MultiQuad, SparsePoly, parse_scalar
from ..exact.poly import normalize_scalar

VARS = tuple(f"x{i}" for i in range(6))


def _scalar(value):
    if isinstance(value, SparsePoly):
        return value
    if isinstance(value, str):
        return parse_scalar(value)
    if isinstance(value, dict):
        return normalize_scalar(MultiQuad.from_json(value))
    return normalize_scalar(value)


def is_zero(value) -> bool:
    if isinstance(value, SparsePoly):
        return value.is_zero()
    return not value


@dataclass(frozen=True)
class FamilyParams:
    """Parameters ``(t, s)``: exact scalars, or the polynomial variables for the generic member."""

    t: object
    s: object

    def __post_init__(self):
        object.__setattr__(self, "t", _scalar(self.t))
        object.__setattr__(self, "s", _scalar(self.s))

    @classmethod
    def symbolic(cls) -> "FamilyParams":
        return cls(SparsePoly.var("t"), SparsePoly.var("s"))

    @property
    def is_symbolic(self) -> bool:
        return isinstance(self.t, SparsePoly) or isinstance(self.s, SparsePoly)

    @property
    def gammas(self) -> tuple:
        t, s = self.t, self.s
        return (s * s * 2 - 1, t - s, t * s * 2 - 1, t * t * 2 - 1)

    @property
    def smoothness_scalar(self):
        g1, g2, g3, g4 = self.gammas
        return self.s * self.t * g1 * g2 * g3 * g4

    @property
    def smooth(self) -> bool:
        return not is_zero(self.smoothness_scalar)

    def require_smooth(self) -> None:
        if not self.smooth:
            raise ValueError(f"singular parameters (t, s) = ({self.t}, {self.s})")

    def label(self) -> str:
        return f"({self.t}, {self.s})"

    def to_json(self) -> dict:
        return {
            "t": _json_scalar(self.t),
            "s": _json_scalar(self.s),
            "gammas": [_json_scalar(g) for g in self.gammas],
            "smoothness_scalar": _json_scalar(self.smoothness_scalar),
            "smooth": self.smooth,
        }


def _json_scalar(x):
    if isinstance(x, MultiQuad):
        return x.to_json()
    return str(x)


BUCHI_PARAMS = FamilyParams(-1, 1)


@dataclass(frozen=True)
class KleinSystem:
    """Three diagonal quadrics; ``net[k][i]`` is the coefficient of ``x_i^2`` in quadric ``k``."""

    params: FamilyParams
    net: tuple[tuple, ...]

    @property
    def quadrics(self) -> tuple[SparsePoly, ...]:
        out = []
        for row in self.net:
            total = SparsePoly(VARS, {})
            for i, c in enumerate(row):
                if not is_zero(c):
                    total = total + SparsePoly.var(VARS[i]) ** 2 * c
            out.append(total)
        return tuple(out)

    def residuals(self, values: Sequence) -> list:
        if len(values) != 6:
            raise ValueError("points of P^5 need six coordinates")
        squares = [v * v for v in values]
        out = []
        for row in self.net:
            total = Fraction(0)
            for c, sq in zip(row, squares):
                if not is_zero(c):
                    total = sq * c + total
            out.append(normalize_scalar(total) if not isinstance(total, SparsePoly) else total)
        return out

    def contains(self, values: Sequence) -> bool:
        return all(is_zero(r) for r in self.residuals(values))

    def net_matrix(self) -> ExactMatrix:
        return ExactMatrix([list(r) for r in self.net])

    def to_json(self) -> dict:
        return {"params": self.params.to_json(), "quadrics": [str(q) for q in self.quadrics]}


def klein_system(params: FamilyParams) -> KleinSystem:
    t, s = params.t, params.s
    g1, g2, g3, g4 = params.gammas
    zero = t * 0
    rows = (
        (g4 * -2, zero + 1, t * t * -2, g4, zero, zero),
        (g2, zero, t * t * s, t * s * g2 * -1, t * s * s * -1, zero),
        (g1 * -2, zero, zero, g1, s * s * -2, zero + 1),
    )
    return KleinSystem(params, tuple(tuple(_clean(c) for c in r) for r in rows))


def _clean(c):
    if isinstance(c, SparsePoly):
        return c if not c.is_constant() else normalize_scalar(c.constant_term())
    return normalize_scalar(c)


def proportional(u: Sequence, v: Sequence) -> bool:
    """``u`` and ``v`` span a line (both nonzero, all 2x2 minors vanish)."""
    if all(is_zero(a) for a in u) or all(is_zero(b) for b in v):
        return False
    n = len(u)
    return all(is_zero(u[i] * v[j] - u[j] * v[i]) for i in range(n) for j in range(i + 1, n))


def compare_with_buchi(params: FamilyParams = BUCHI_PARAMS) -> list[dict]:
    """Match each Klein quadric with the proportional Büchi quadric (n = 5)."""
    from ..buchi import buchi_system

    rows = buchi_system(5).coefficients
    out = []
    for k, row in enumerate(klein_system(params).net):
        match = None
        for j, b in enumerate(rows):
            if proportional(row, b):
                pivot = next(i for i, x in enumerate(b) if x)
                match = {"buchi_index": j, "scalar": str(normalize_scalar(row[pivot] / b[pivot]))}
                break
        out.append({"klein_index": k, "match": match})
    return out
