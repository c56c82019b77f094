"""Linear automorphisms of X_{t,s} that are scalar permutations, by exhaustive search."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from math import isqrt

from ..exact import ExactMatrix, MultiQuad
from ..exact.poly import normalize_scalar
from .family import FamilyParams, klein_system
from .lines import all_lines

SIGN_GROUP_ORDER = 32


@dataclass(frozen=True)
class ScalarPermutation:
    """``x -> (c_0 x_{π(0)}, ..., c_5 x_{π(5)})`` recorded through ``μ_i = c_i^2`` with ``μ_0`` normalized."""

    perm: tuple[int, ...]
    mu: tuple

    @classmethod
    def make(cls, perm, mu) -> "ScalarPermutation":
        pivot = next(m for m in mu if m)
        return cls(tuple(perm), tuple(normalize_scalar(m / pivot) for m in mu))

    def compose(self, other: "ScalarPermutation") -> "ScalarPermutation":
        """``self ∘ other``."""
        perm = tuple(other.perm[self.perm[i]] for i in range(6))
        mu = [self.mu[i] * other.mu[self.perm[i]] for i in range(6)]
        return ScalarPermutation.make(perm, mu)

    def scalars(self) -> list | None:
        """Rational square roots of ``μ`` when they exist."""
        out = []
        for m in self.mu:
            if isinstance(m, MultiQuad) or m < 0:
                return None
            m = Fraction(m)
            n, d = m.numerator, m.denominator
            rn, rd = isqrt(n), isqrt(d)
            if rn * rn != n or rd * rd != d:
                return None
            out.append(Fraction(rn, rd))
        return out

    def to_json(self) -> dict:
        c = self.scalars()
        return {
            "perm": list(self.perm),
            "mu": [str(m) for m in self.mu],
            "scalars": None if c is None else [str(x) for x in c],
        }


IDENTITY = ScalarPermutation.make(range(6), [1] * 6)


def rho() -> ScalarPermutation:
    return ScalarPermutation.make((0, 5, 4, 3, 2, 1), [1] * 6)


def tau(params: FamilyParams) -> ScalarPermutation:
    t, s = params.t, params.s
    c = [t * s, t * t * s * 2, s, t * s * 2, t, t * s * s * 2]
    return ScalarPermutation.make((3, 2, 1, 0, 5, 4), [x * x for x in c])


def preserves_net(g: ScalarPermutation, params: FamilyParams) -> bool:
    net = klein_system(params).net_matrix()
    images = []
    for r in net.rows:
        w = [0] * 6
        for i in range(6):
            w[g.perm[i]] = r[i] * g.mu[i]
        images.append(w)
    return ExactMatrix(list(net.rows) + images).rank() == 3


@dataclass
class AutReport:
    params: FamilyParams
    elements: list[ScalarPermutation]
    closed: bool
    contains_rho: bool
    contains_tau: bool
    line_orbits: list[int] = field(default_factory=list)

    @property
    def order(self) -> int:
        return SIGN_GROUP_ORDER * len(self.elements)

    @property
    def quotient_order(self) -> int:
        return len(self.elements)

    def generators(self) -> list[dict]:
        """Sign changes of x1..x5 followed by the permutation classes."""
        out = []
        for i in range(1, 6):
            out.append({"kind": "sign", "coordinate": i})
        for g in self.elements:
            if g != IDENTITY:
                out.append({"kind": "scalar_permutation", **g.to_json()})
        return out

    def to_json(self) -> dict:
        return {
            "params": self.params.to_json(),
            "order": self.order,
            "sign_subgroup": SIGN_GROUP_ORDER,
            "permutation_classes": [g.to_json() for g in self.elements],
            "closed_under_composition": self.closed,
            "contains_rho": self.contains_rho,
            "contains_tau": self.contains_tau,
            "line_orbits_under_signs": self.line_orbits,
        }


def automorphism_bruteforce(params: FamilyParams) -> AutReport:
    """Search all 720 coordinate permutations, solving linearly for the squared scalars.

    Each admissible permutation contributes a coset of the 32 sign changes; the
    scalars are square roots of ``μ`` and may need a field extension.
    """
    if params.is_symbolic:
        raise ValueError("automorphism search needs numeric parameters")
    params.require_smooth()
    net = klein_system(params).net_matrix()
    kernel = net.nullspace()
    found = []
    for perm in permutations(range(6)):
        eqs = []
        for r in net.rows:
            for k in kernel:
                eqs.append([k[perm[i]] * r[i] for i in range(6)])
        sols = ExactMatrix(eqs).nullspace()
        if not sols:
            continue
        if len(sols) > 1:
            raise ValueError(f"positive-dimensional scaling family for permutation {perm}")
        mu = sols[0]
        if all(mu):
            found.append(ScalarPermutation.make(perm, mu))
    elements = sorted(found, key=lambda g: g.perm)
    keys = set(elements)
    closed = all(a.compose(b) in keys for a in elements for b in elements)
    return AutReport(
        params,
        elements,
        closed,
        rho() in keys,
        tau(params) in keys,
        _sign_orbits(),
    )


def _sign_orbits() -> list[int]:
    lines = all_lines()
    seen: set = set()
    sizes = []
    for line in lines:
        if line in seen:
            continue
        orbit = {type(line)(line.label ^ frozenset(q)) for q in _subsets()}
        seen |= orbit
        sizes.append(len(orbit))
    return sizes


def _subsets():
    for m in range(64):
        yield frozenset(i for i in range(6) if m >> i & 1)
