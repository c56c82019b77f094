"""Finite quadratic forms (discriminant forms of even lattices)."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from .matrix import ExactMatrix, int_inverse, smith_normal_form

DEFAULT_ISO_CAP = 256


def mod2(x: Fraction) -> Fraction:
    return Fraction(x) % 2


def mod1(x: Fraction) -> Fraction:
    return Fraction(x) % 1


@dataclass(frozen=True)
class FiniteQuadraticForm:
    """A finite abelian group ``⊕ Z/n_i`` with a ``Q/2Z``-valued quadratic form.

    The form is stored on the generators: ``gen_q[i] = q(g_i)`` and
    ``gen_b[i][j] = b(g_i, g_j)``; everything else is derived.
    """

    orders: tuple[int, ...]
    gen_q: tuple[Fraction, ...]
    gen_b: tuple[tuple[Fraction, ...], ...]
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        for a, b in zip(self.orders, self.orders[1:]):
            if b % a:
                raise ValueError(f"orders {self.orders} are not a divisor chain")
        object.__setattr__(self, "gen_q", tuple(mod2(q) for q in self.gen_q))
        object.__setattr__(self, "gen_b", tuple(tuple(mod1(b) for b in r) for r in self.gen_b))

    @classmethod
    def from_gram(cls, orders: Sequence[int], gram: Sequence[Sequence[Fraction]]) -> "FiniteQuadraticForm":
        """Build from a rational Gram matrix on the generators (diagonal = q)."""
        n = len(orders)
        return cls(
            tuple(orders),
            tuple(Fraction(gram[i][i]) for i in range(n)),
            tuple(tuple(Fraction(gram[i][j]) for j in range(n)) for i in range(n)),
        )

    @property
    def order(self) -> int:
        total = 1
        for n in self.orders:
            total *= n
        return total

    def elements(self) -> list[tuple[int, ...]]:
        return list(product(*(range(n) for n in self.orders)))

    def q(self, x: Sequence[int]) -> Fraction:
        total = Fraction(0)
        k = len(self.orders)
        for i in range(k):
            if x[i]:
                total += x[i] * x[i] * self.gen_q[i]
                for j in range(i + 1, k):
                    if x[j]:
                        total += 2 * x[i] * x[j] * self.gen_b[i][j]
        return mod2(total)

    def b(self, x: Sequence[int], y: Sequence[int]) -> Fraction:
        total = Fraction(0)
        for i, xi in enumerate(x):
            if xi:
                for j, yj in enumerate(y):
                    if yj:
                        total += xi * yj * self.gen_b[i][j]
        return mod1(total)

    @property
    def qvals(self) -> dict[tuple[int, ...], Fraction]:
        if "qvals" not in self._cache:
            self._cache["qvals"] = {x: self.q(x) for x in self.elements()}
        return self._cache["qvals"]

    def add(self, x, y):
        return tuple((a + b) % n for a, b, n in zip(x, y, self.orders))

    def scale(self, k: int, x):
        return tuple(k * a % n for a, n in zip(x, self.orders))

    def element_order(self, x) -> int:
        from math import gcd

        o = 1
        for a, n in zip(x, self.orders):
            if a:
                m = n // gcd(a, n)
                o = o * m // gcd(o, m)
        return o

    def negated(self) -> "FiniteQuadraticForm":
        return FiniteQuadraticForm(
            self.orders,
            tuple(-q for q in self.gen_q),
            tuple(tuple(-b for b in r) for r in self.gen_b),
        )

    def rescaled_by(self, c: Fraction) -> "FiniteQuadraticForm":
        return FiniteQuadraticForm(
            self.orders,
            tuple(c * q for q in self.gen_q),
            tuple(tuple(c * b for b in r) for r in self.gen_b),
        )

    def value_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for v in self.qvals.values():
            counts[str(v)] = counts.get(str(v), 0) + 1
        return dict(sorted(counts.items()))

    def isotropic_elements(self) -> list[tuple[int, ...]]:
        return [x for x, v in self.qvals.items() if any(x) and v == 0]

    def to_json(self) -> dict:
        return {
            "orders": list(self.orders),
            "q": [str(q) for q in self.gen_q],
            "b": [[str(b) for b in r] for r in self.gen_b],
        }

    def __str__(self):
        if not self.orders:
            return "trivial"
        group = " + ".join(f"Z/{n}" for n in self.orders)
        return f"{group}, q(gens) = ({', '.join(str(q) for q in self.gen_q)})"


def discriminant_form(g: ExactMatrix) -> FiniteQuadraticForm:
    """Discriminant form of the even nondegenerate lattice with Gram ``g``."""
    if not g.is_symmetric():
        raise ValueError("Gram matrix must be symmetric")
    rows = g.int_rows()
    n = len(rows)
    if any(rows[i][i] % 2 for i in range(n)):
        raise ValueError("Gram matrix is not even")
    snf = smith_normal_form(g)
    if snf.rank < n:
        raise ValueError("Gram matrix is singular")
    ginv = g.inverse()
    uinv = int_inverse(snf.U)
    gens, orders = [], []
    for i, d in enumerate(snf.factors):
        if d > 1:
            gens.append([uinv[r, i] for r in range(n)])
            orders.append(d)
    gram = []
    for y in gens:
        gy = ginv.apply(y)
        gram.append([sum((a * b for a, b in zip(z, gy)), Fraction(0)) for z in gens])
    return FiniteQuadraticForm.from_gram(orders, gram)


def fqf_isomorphic(
    q1: FiniteQuadraticForm, q2: FiniteQuadraticForm, cap: int = DEFAULT_ISO_CAP
) -> tuple[bool, dict | None]:
    """Decide isomorphism of finite quadratic forms by backtracking over generator images.

    Returns ``(True, witness)`` where ``witness`` maps each generator of ``q1``
    (by index) to its image in ``q2``, or ``(False, None)``.
    """
    if q1.order > cap or q2.order > cap:
        raise ValueError(f"group order exceeds the isomorphism cap {cap}")
    if q1.orders != q2.orders:
        return False, None
    k = len(q1.orders)
    elements = q2.elements()
    by_order: dict[int, list] = {}
    for x in elements:
        by_order.setdefault(q2.element_order(x), []).append(x)
    candidates = []
    for i, n in enumerate(q1.orders):
        unit = tuple(int(j == i) for j in range(k))
        pool = [x for x in by_order.get(n, []) if q2.q(x) == q1.gen_q[i]]
        pool.sort(key=lambda x: (x != unit, x))
        candidates.append(pool)

    images: list = []

    def generated(imgs) -> int:
        seen = {tuple(0 for _ in range(k))}
        frontier = list(seen)
        while frontier:
            nxt = []
            for x in frontier:
                for g in imgs:
                    y = q2.add(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return len(seen)

    def search(i: int) -> bool:
        if i == k:
            return generated(images) == q2.order
        for x in candidates[i]:
            if all(q2.b(images[j], x) == q1.gen_b[j][i] for j in range(i)):
                images.append(x)
                if search(i + 1):
                    return True
                images.pop()
        return False

    if search(0):
        return True, {i: img for i, img in enumerate(images)}
    return False, None
