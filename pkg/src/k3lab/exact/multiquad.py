"""Elements of multiquadratic fields Q(sqrt(d1)) and Q(sqrt(d1), sqrt(d2)).

An element is a rational vector on the basis ``{1, √d1, √d2, √d1·√d2}``
(or ``{1, √d1}``). Square roots of negative integers are the principal ones
(``√-2 = i·√2``), and the last basis vector is always the product of the two
generators, never the principal root of ``d1*d2``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Iterable, Union

from .numtheory import squarefree_decomposition

Rationalish = Union[int, Fraction]
MAX_GENERATORS = 2


def _popcount(n: int) -> int:
    return bin(n).count("1")


def _check_gens(gens: tuple[int, ...]) -> None:
    if len(gens) > MAX_GENERATORS:
        raise ValueError(f"at most {MAX_GENERATORS} square roots supported, got {gens}")
    for d in gens:
        if d in (0, 1) or squarefree_decomposition(d)[0] != 1:
            raise ValueError(f"generator {d} is not a squarefree integer other than 0, 1")
    if len(set(gens)) != len(gens):
        raise ValueError(f"generators {gens} are not independent")


@lru_cache(maxsize=None)
def _mul_table(gens: tuple[int, ...]) -> tuple[tuple[int, int, int, int], ...]:
    n = 1 << len(gens)
    table = []
    for i in range(n):
        for j in range(n):
            factor = 1
            common = i & j
            for bit, d in enumerate(gens):
                if common >> bit & 1:
                    factor *= d
            table.append((i, j, i ^ j, factor))
    return tuple(table)


def _mul_coords(gens, a, b):
    out = [Fraction(0)] * len(a)
    for i, j, k, factor in _mul_table(gens):
        ai, bj = a[i], b[j]
        if ai and bj:
            out[k] += ai * bj * factor
    return out


def _is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def _generator_image(e: int, target: tuple[int, ...]):
    """Coordinates of the principal √e inside the field generated by ``target``."""
    for mask in range(1, 1 << len(target)):
        prod, negatives = 1, 0
        for bit, d in enumerate(target):
            if mask >> bit & 1:
                prod *= d
                negatives += d < 0
        if _is_square(e * prod) and e * prod > 0:
            r = Fraction(isqrt(e * prod), abs(prod))
            if (negatives // 2) % 2:
                r = -r
            coords = [Fraction(0)] * (1 << len(target))
            coords[mask] = r
            return coords
    return None


def _embed(gens: tuple[int, ...], coords, target: tuple[int, ...]):
    if gens == target:
        return list(coords)
    images = []
    for e in gens:
        img = _generator_image(e, target)
        if img is None:
            return None
        images.append(img)
    size = 1 << len(target)
    out = [Fraction(0)] * size
    for idx, c in enumerate(coords):
        if not c:
            continue
        term = [Fraction(0)] * size
        term[0] = Fraction(c)
        for bit in range(len(gens)):
            if idx >> bit & 1:
                term = _mul_coords(target, term, images[bit])
        out = [x + y for x, y in zip(out, term)]
    return out


def _join(g1: tuple[int, ...], g2: tuple[int, ...]) -> tuple[int, ...]:
    current = list(g1)
    for e in g2:
        if _generator_image(e, tuple(current)) is None:
            current.append(e)
    if len(current) > MAX_GENERATORS:
        raise ValueError(f"compositum of Q(√{g1}) and Q(√{g2}) needs more than two square roots")
    return tuple(sorted(current))


class MultiQuad:
    """Immutable element of Q, Q(√d1) or Q(√d1, √d2)."""

    __slots__ = ("gens", "coords")

    def __init__(self, gens: Iterable[int], coords: Iterable[Rationalish]):
        gens = tuple(int(d) for d in gens)
        coords = tuple(Fraction(c) for c in coords)
        _check_gens(gens)
        if len(coords) != 1 << len(gens):
            raise ValueError(f"expected {1 << len(gens)} coordinates, got {len(coords)}")
        order = sorted(range(len(gens)), key=lambda i: gens[i])
        if order != list(range(len(gens))):
            position = {old: new for new, old in enumerate(order)}
            moved = [Fraction(0)] * len(coords)
            for idx, c in enumerate(coords):
                new_idx = sum(1 << position[b] for b in range(len(gens)) if idx >> b & 1)
                moved[new_idx] = c
            gens = tuple(gens[i] for i in order)
            coords = tuple(moved)
        object.__setattr__(self, "gens", gens)
        object.__setattr__(self, "coords", coords)

    def __setattr__(self, name, value):
        raise AttributeError("MultiQuad is immutable")

    # constructors -------------------------------------------------------
    @classmethod
    def from_rational(cls, q: Rationalish) -> "MultiQuad":
        return cls((), (q,))

    @classmethod
    def sqrt(cls, n: Rationalish) -> "MultiQuad":
        """Principal square root of a rational number."""
        n = Fraction(n)
        if n == 0:
            return cls.from_rational(0)
        c, d = squarefree_decomposition(n.numerator * n.denominator)
        scale = Fraction(c, n.denominator)
        if d == 1:
            return cls.from_rational(scale)
        return cls((d,), (0, scale))

    @classmethod
    def from_json(cls, obj: dict) -> "MultiQuad":
        return cls(obj["d"], [Fraction(c) for c in obj["coords"]])

    # coercion -----------------------------------------------------------
    def _pair(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiQuad.from_rational(other)
        elif not isinstance(other, MultiQuad):
            return None
        gens = _join(self.gens, other.gens)
        return gens, _embed(self.gens, self.coords, gens), _embed(other.gens, other.coords, gens)

    def embed(self, gens: Iterable[int]) -> "MultiQuad":
        gens = tuple(sorted(gens))
        coords = _embed(self.gens, self.coords, gens)
        if coords is None:
            raise ValueError(f"{self} does not lie in Q(√{gens})")
        return MultiQuad(gens, coords)

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        gens, a, b = pair
        return MultiQuad(gens, [x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return MultiQuad(self.gens, [-c for c in self.coords])

    def __pos__(self):
        return self

    def __sub__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        gens, a, b = pair
        return MultiQuad(gens, [x - y for x, y in zip(a, b)])

    def __rsub__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        gens, a, b = pair
        return MultiQuad(gens, [y - x for x, y in zip(a, b)])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return MultiQuad(self.gens, [c * other for c in self.coords])
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        gens, a, b = pair
        return MultiQuad(gens, _mul_coords(gens, a, b))

    __rmul__ = __mul__

    def inverse(self) -> "MultiQuad":
        if not self:
            raise ZeroDivisionError("inverse of zero in a multiquadratic field")
        others = self.conjugates()[1:]
        num = MultiQuad.from_rational(1)
        for c in others:
            num = num * c
        norm = (self * num).coords[0]
        return MultiQuad(num.gens, [c / norm for c in num.coords])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return MultiQuad(self.gens, [c / other for c in self.coords])
        if not isinstance(other, MultiQuad):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        return self.inverse() * other

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = MultiQuad(self.gens, [1] + [0] * (len(self.coords) - 1))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # Galois structure ---------------------------------------------------
    def conjugate(self, mask: int) -> "MultiQuad":
        """Apply √d_i ↦ -√d_i for every generator bit set in ``mask``."""
        return MultiQuad(
            self.gens,
            [-c if _popcount(idx & mask) % 2 else c for idx, c in enumerate(self.coords)],
        )

    def conjugates(self) -> list["MultiQuad"]:
        return [self.conjugate(mask) for mask in range(1 << len(self.gens))]

    def norm(self) -> Fraction:
        prod = MultiQuad.from_rational(1)
        for c in self.conjugates():
            prod = prod * c
        return prod.coords[0]

    def trace(self) -> Fraction:
        return self.coords[0] * len(self.coords)

    # predicates ---------------------------------------------------------
    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coords[0]

    def reduced(self) -> "MultiQuad":
        """Same element over the smallest sub-descriptor that still contains it."""
        keep = [
            bit
            for bit in range(len(self.gens))
            if any(c for idx, c in enumerate(self.coords) if idx >> bit & 1)
        ]
        if len(keep) == len(self.gens):
            return self
        gens = tuple(self.gens[b] for b in keep)
        coords = [Fraction(0)] * (1 << len(gens))
        for idx, c in enumerate(self.coords):
            if c:
                new_idx = sum(1 << k for k, b in enumerate(keep) if idx >> b & 1)
                coords[new_idx] = c
        return MultiQuad(gens, coords)

    def __bool__(self):
        return any(self.coords)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coords[0] == other
        if not isinstance(other, MultiQuad):
            return NotImplemented
        try:
            pair = self._pair(other)
        except ValueError:
            # no common two-generator field: compare in the basis of principal roots
            return self.radical_terms() == other.radical_terms()
        _, a, b = pair
        return a == b

    def radical_terms(self) -> dict[int, Fraction]:
        """``{m: c}`` with the element equal to the sum of ``c * √m`` over squarefree ``m``."""
        out: dict[int, Fraction] = {}
        for idx, c in enumerate(self.coords):
            if not c:
                continue
            prod, negatives = 1, 0
            for bit, d in enumerate(self.gens):
                if idx >> bit & 1:
                    prod *= d
                    negatives += d < 0
            k, m = squarefree_decomposition(prod)
            sign = -1 if (negatives // 2) % 2 else 1
            out[m] = out.get(m, Fraction(0)) + sign * abs(k) * c
        return {m: c for m, c in out.items() if c}

    def __hash__(self):
        # the rational coordinate is invariant under re-embedding
        return hash(self.coords[0])

    # output -------------------------------------------------------------
    def to_json(self) -> dict:
        return {"d": list(self.gens), "coords": [str(c) for c in self.coords]}

    def _basis_name(self, idx: int) -> str:
        return "*".join(f"sqrt({d})" for bit, d in enumerate(self.gens) if idx >> bit & 1)

    def __str__(self):
        parts = []
        for idx, c in enumerate(self.coords):
            if not c:
                continue
            if idx == 0:
                body = str(abs(c))
            else:
                name = self._basis_name(idx)
                body = name if abs(c) == 1 else f"{abs(c)}*{name}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        if not parts:
            return "0"
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"MultiQuad({list(self.gens)}, [{', '.join(str(c) for c in self.coords)}])"


def sqrt(n: Rationalish) -> MultiQuad:
    return MultiQuad.sqrt(n)


def field_tag(*values) -> tuple[int, ...]:
    """Generators of the smallest descriptor containing all ``values``."""
    gens: tuple[int, ...] = ()
    for v in values:
        if isinstance(v, MultiQuad):
            gens = _join(gens, v.reduced().gens)
    return gens
