"""Prime fields F_p and quadratic extensions F_{p^2} = F_p(√d)."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .numtheory import is_prime, least_nonresidue, legendre_symbol, sqrt_mod

MAX_MODULUS = 2**31


def _check_prime(p: int) -> None:
    if not (2 <= p <= MAX_MODULUS and is_prime(p)):
        raise ValueError(f"{p} is not a prime modulus below 2^31")


class GF:
    """Element of the prime field F_p."""

    __slots__ = ("p", "v")

    def __init__(self, v, p: int):
        _check_prime(p)
        self.p = p
        self.v = _reduce(v, p)

    @classmethod
    def _raw(cls, v: int, p: int) -> "GF":
        obj = cls.__new__(cls)
        obj.p, obj.v = p, v
        return obj

    def _other(self, other):
        if isinstance(other, GF):
            if other.p != self.p:
                raise ValueError(f"mixing F_{self.p} and F_{other.p}")
            return other.v
        if isinstance(other, (int, Fraction)):
            return _reduce(other, self.p)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return GF._raw((self.v + o) % self.p, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return GF._raw((self.v - o) % self.p, self.p)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return GF._raw((o - self.v) % self.p, self.p)

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return GF._raw(self.v * o % self.p, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return GF._raw(-self.v % self.p, self.p)

    def inverse(self) -> "GF":
        if self.v == 0:
            raise ZeroDivisionError(f"inverse of 0 in F_{self.p}")
        return GF._raw(pow(self.v, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if o == 0:
            raise ZeroDivisionError(f"division by 0 in F_{self.p}")
        return GF._raw(self.v * pow(o, -1, self.p) % self.p, self.p)

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return GF._raw(o, self.p) / self

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return GF._raw(pow(self.v, k, self.p), self.p)

    def __eq__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self.v == o

    def __hash__(self):
        return hash((self.p, self.v))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def is_square(self) -> bool:
        return self.v == 0 or self.p == 2 or legendre_symbol(self.v, self.p) == 1

    def sqrt(self) -> "GF | None":
        if self.p == 2:
            return self
        r = sqrt_mod(self.v, self.p)
        return None if r is None else GF._raw(r, self.p)

    def __repr__(self):
        return f"GF({self.v}, {self.p})"

    def __str__(self):
        return str(self.v)


def _reduce(v, p: int) -> int:
    if isinstance(v, Fraction):
        if v.denominator % p == 0:
            raise ZeroDivisionError(f"denominator of {v} vanishes mod {p}")
        return v.numerator * pow(v.denominator, -1, p) % p
    return int(v) % p


class GFp2:
    """Element ``a + b·√d`` of F_{p^2}, ``d`` the least quadratic non-residue mod ``p``."""

    __slots__ = ("p", "d", "a", "b")

    def __init__(self, a, b, p: int, d: int | None = None):
        _check_prime(p)
        if p == 2:
            raise ValueError("F_4 is not modelled; p must be odd")
        if d is None:
            d = least_nonresidue(p)
        elif legendre_symbol(d, p) != -1:
            raise ValueError(f"{d} is not a non-residue mod {p}")
        self.p, self.d = p, d % p
        self.a, self.b = _reduce(a, p), _reduce(b, p)

    @classmethod
    def _raw(cls, a, b, p, d) -> "GFp2":
        obj = cls.__new__(cls)
        obj.p, obj.d, obj.a, obj.b = p, d, a, b
        return obj

    def _other(self, other):
        if isinstance(other, GFp2):
            if (other.p, other.d) != (self.p, self.d):
                raise ValueError("mixing different quadratic extensions")
            return other.a, other.b
        if isinstance(other, GF):
            if other.p != self.p:
                raise ValueError("mixing different characteristics")
            return other.v, 0
        if isinstance(other, (int, Fraction)):
            return _reduce(other, self.p), 0
        return None

    def _make(self, a, b):
        return GFp2._raw(a % self.p, b % self.p, self.p, self.d)

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self._make(self.a + o[0], self.b + o[1])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self._make(self.a - o[0], self.b - o[1])

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self._make(o[0] - self.a, o[1] - self.b)

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        a, b = self.a, self.b
        c, e = o
        return self._make(a * c + self.d * b * e, a * e + b * c)

    __rmul__ = __mul__

    def __neg__(self):
        return self._make(-self.a, -self.b)

    def frobenius(self) -> "GFp2":
        return self._make(self.a, -self.b)

    def norm(self) -> int:
        return (self.a * self.a - self.d * self.b * self.b) % self.p

    def inverse(self) -> "GFp2":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of 0 in F_{p^2}")
        inv = pow(n, -1, self.p)
        return self._make(self.a * inv, -self.b * inv)

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * GFp2._raw(o[0], o[1], self.p, self.d).inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return GFp2._raw(o[0], o[1], self.p, self.d) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self._make(1, 0)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return (self.a, self.b) == o

    def __hash__(self):
        return hash((self.p, self.d, self.a, self.b))

    def __bool__(self):
        return bool(self.a or self.b)

    def quadratic_character(self) -> int:
        """χ(x) on F_{p^2}: x is a square iff its norm is a square in F_p."""
        n = self.norm()
        return 0 if n == 0 else legendre_symbol(n, self.p)

    def sqrt(self) -> "GFp2 | None":
        if not self:
            return self
        if self.quadratic_character() != 1:
            return None
        roots = _sqrt_table(self.p, self.d).get((self.a, self.b))
        if roots is not None:
            return self._make(*roots)
        # generic route: x = a + b√d with x^2 = self
        for a in range(self.p):
            rem = (a * a - self.a) * pow(self.d, -1, self.p) % self.p
            b = sqrt_mod(rem, self.p)
            if b is None:
                continue
            for bb in {b, -b % self.p}:
                cand = self._make(a, bb)
                if cand * cand == self:
                    return cand
        return None

    def __repr__(self):
        return f"GFp2({self.a}, {self.b}, p={self.p}, d={self.d})"

    def __str__(self):
        return f"{self.a}+{self.b}*sqrt({self.d})"


@lru_cache(maxsize=8)
def _sqrt_table(p: int, d: int) -> dict:
    if p > 400:
        return {}
    table = {}
    for a in range(p):
        for b in range(p):
            key = ((a * a + d * b * b) % p, 2 * a * b % p)
            if key not in table or (a, b) < table[key]:
                table[key] = (a, b)
    return table


def gfp2_elements(p: int):
    d = least_nonresidue(p)
    for a in range(p):
        for b in range(p):
            yield GFp2._raw(a, b, p, d)
