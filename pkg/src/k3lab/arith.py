"""Point counts over finite fields for E, the genus-two curve C and the surface X.

Quadratic characters over F_{p^2} are evaluated through the norm: an element of
F_{p^2}^* is a square iff its norm is a square in F_p.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import isqrt
from typing import Sequence

import numpy as np

from .exact import is_prime, primes_up_to
from .exact.multiquad import sqrt
from .exact.numtheory import least_nonresidue
from .exact.poly import normalize_scalar

BRUTE_CAP = 31
DEFAULT_SCAN_BOUND = 2500
MAX_SCAN_BOUND = 10**6


class WeilBoundError(ArithmeticError):
    """A count violates the Weil bound; this signals a counting bug."""


class BadReductionError(ValueError):
    pass


def _chi_table(p: int) -> np.ndarray:
    """``chi[a]`` for ``a`` in ``0..p-1``."""
    chi = -np.ones(p, dtype=np.int64)
    sq = (np.arange(p, dtype=np.int64) ** 2) % p
    chi[sq] = 1
    chi[0] = 0
    return chi


def _poly_mod(coeffs: Sequence[int], x: np.ndarray, p: int) -> np.ndarray:
    """Horner evaluation; ``coeffs`` from the leading term down."""
    acc = np.zeros_like(x)
    for c in coeffs:
        acc = (acc * x + c) % p
    return acc


def _poly_mod_p2(coeffs: Sequence[int], a: np.ndarray, b: np.ndarray, n: int, p: int):
    """Horner evaluation in ``F_p[i]/(i^2 - n)`` on arrays of ``a + b i``."""
    ra = np.zeros_like(a)
    rb = np.zeros_like(b)
    for c in coeffs:
        ra, rb = (ra * a + n * rb % p * b + c) % p, (ra * b + rb * a) % p
    return ra, rb


def _disc_mod_zero(coeffs: Sequence[int], p: int) -> bool:
    """Whether the polynomial has a repeated root mod ``p`` (or drops degree)."""
    f = [c % p for c in coeffs]
    if f[0] == 0:
        return True
    # gcd(f, f') over F_p
    deg = len(f) - 1
    df = [(c * (deg - k)) % p for k, c in enumerate(f[:-1])]
    a, b = _trim(f), _trim(df)
    while b:
        a, b = b, _polymod(a, b, p)
    return len(a) > 1


def _trim(f):
    i = 0
    while i < len(f) and f[i] == 0:
        i += 1
    return f[i:]


def _polymod(a, b, p):
    a = list(a)
    inv = pow(b[0], p - 2, p)
    while len(a) >= len(b):
        q = a[0] * inv % p
        for k in range(len(b)):
            a[k] = (a[k] - q * b[k]) % p
        a = _trim(a)
        if not a:
            break
    return a


# elliptic curves -------------------------------------------------------------


@dataclass(frozen=True)
class WeierstrassCurve:
    """``y^2 = x^3 + a2 x^2 + a4 x + a6``."""

    a2: int
    a4: int
    a6: int

    @property
    def coeffs(self) -> tuple[int, ...]:
        return (1, self.a2, self.a4, self.a6)

    def discriminant(self) -> int:
        a2, a4, a6 = self.a2, self.a4, self.a6
        b2, b4, b6 = 4 * a2, 2 * a4, 4 * a6
        b8 = 4 * a2 * a6 - a4 * a4
        return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    def __str__(self) -> str:
        return f"y^2 = x^3 + {self.a2}*x^2 + {self.a4}*x + {self.a6}".replace("+ -", "- ")


CURVE_E = WeierstrassCurve(-8, -2, 0)


def ec_count(curve: WeierstrassCurve, p: int) -> tuple[int, int]:
    """``(#E(F_p), a_p)``."""
    if p < 5 or not is_prime(p):
        raise ValueError(f"p must be a prime >= 5, got {p}")
    if curve.discriminant() % p == 0:
        raise BadReductionError(f"{curve} has bad reduction at {p}")
    chi = _chi_table(p)
    x = np.arange(p, dtype=np.int64)
    n = p + 1 + int(chi[_poly_mod(curve.coeffs, x, p)].sum())
    a = p + 1 - n
    if a * a > 4 * p:
        raise WeilBoundError(f"a_{p} = {a} violates the Weil bound")
    return n, a


@dataclass
class ScanResult:
    bound: int
    primes: list[int]
    residues: dict[int, int]

    @property
    def congruence_ok(self) -> bool:
        return all(r in (5, 23) for r in self.residues.values())

    def by_residue(self, r: int) -> list[int]:
        return [p for p in self.primes if p % 24 == r]

    def to_json(self) -> dict:
        return {
            "bound": self.bound,
            "curve": str(CURVE_E),
            "supersingular_primes": self.primes,
            "residues_mod_24": {str(p): r for p, r in self.residues.items()},
            "all_residues_in_5_23": self.congruence_ok,
            "residue_5": self.by_residue(5),
            "residue_23": self.by_residue(23),
        }


def supersingular_scan(curve: WeierstrassCurve = CURVE_E, bound: int = DEFAULT_SCAN_BOUND) -> ScanResult:
    if bound > MAX_SCAN_BOUND:
        raise ValueError(f"scan bound capped at {MAX_SCAN_BOUND}")
    disc = curve.discriminant()
    found = []
    for p in primes_up_to(bound):
        if p < 5 or disc % p == 0:
            continue
        if ec_count(curve, p)[1] == 0:
            found.append(p)
    return ScanResult(bound, found, {p: p % 24 for p in found})


# genus two -------------------------------------------------------------------


@dataclass(frozen=True)
class HyperellipticCurve:
    """``d y^2 = f(x)`` with ``f`` of degree 5 or 6; ``twist`` selects the least non-residue for ``d``."""

    coeffs: tuple[int, ...]
    twist: bool = False

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def twisted(self) -> "HyperellipticCurve":
        return HyperellipticCurve(self.coeffs, not self.twist)


CURVE_C = HyperellipticCurve((1, 0, -5, 0, 4, 0))


def _infinity(curve: HyperellipticCurve, chi_lead: int) -> int:
    if curve.degree == 5:
        return 1
    return 1 + chi_lead


def genus2_counts(curve: HyperellipticCurve, p: int) -> tuple[int, int]:
    """``(#C(F_p), #C(F_{p^2}))`` for the smooth projective model."""
    if p % 2 == 0 or not is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    if curve.degree not in (5, 6):
        raise ValueError("genus-two models have degree 5 or 6")
    if _disc_mod_zero(curve.coeffs, p):
        raise BadReductionError(f"the model has bad reduction at {p}")
    chi = _chi_table(p)
    d = least_nonresidue(p) if curve.twist else 1
    x = np.arange(p, dtype=np.int64)
    fx = _poly_mod(curve.coeffs, x, p)
    # d y^2 = f  has 1 + chi(d f) solutions
    n1 = p + int(chi[(fx * d) % p].sum())
    lead = curve.coeffs[0] % p
    n1 += _infinity(curve, int(chi[lead * d % p]))
    nr = least_nonresidue(p)
    a, b = np.meshgrid(x, x, indexing="ij")
    fa, fb = _poly_mod_p2(curve.coeffs, a.ravel(), b.ravel(), nr, p)
    norm = (fa * fa - nr * (fb * fb % p)) % p
    # d lies in F_p, hence is a square in F_{p^2}
    n2 = p * p + int(chi[norm].sum())
    n2 += _infinity(curve, 1)
    return n1, n2


def l_polynomial(n1: int, n2: int, p: int) -> list[int]:
    a1 = n1 - (p + 1)
    twice = n2 - (p * p + 1) + a1 * a1
    if twice % 2:
        raise WeilBoundError("inconsistent counts: a2 is not an integer")
    a2 = twice // 2
    if abs(a1) > 4 * isqrt(p) + 4 or abs(a2) > 6 * p + 1:
        raise WeilBoundError(f"L-polynomial coefficients ({a1}, {a2}) violate the Weil bounds at p = {p}")
    return [1, a1, a2, p * a1, p * p]


def jacobian_order(n1: int, n2: int, p: int) -> int:
    return sum(l_polynomial(n1, n2, p))


# the surface ------------------------------------------------------------------


@dataclass
class CountRecord:
    p: int
    n1: int
    n2: int
    n1_twist: int
    jac: int
    jac_twist: int
    y: int
    x: int
    method: str
    supersingular: bool
    theorem_value: int | None
    brute: int | None = None

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "method": self.method,
            "N1": self.n1,
            "N2": self.n2,
            "N1_twist": self.n1_twist,
            "jacobian_order": self.jac,
            "jacobian_order_twist": self.jac_twist,
            "Y": self.y,
            "X": self.x,
            "supersingular": self.supersingular,
            "theorem_value": self.theorem_value,
            "theorem_holds": None if self.theorem_value is None else self.theorem_value == self.x,
            "brute": self.brute,
            "chain_equals_brute": None if self.brute is None else self.brute == self.x,
        }


def theorem_value(p: int) -> int | None:
    """``p^2 + 18p + 1`` or ``p^2 + 14p + 1`` at supersingular ``p ≡ 23`` or ``5 mod 24``."""
    if p < 5 or ec_count(CURVE_E, p)[1] != 0:
        return None
    if p % 24 == 23:
        return p * p + 18 * p + 1
    if p % 24 == 5:
        return p * p + 14 * p + 1
    return None


def x_count_chain(p: int) -> CountRecord:
    if p < 5 or not is_prime(p):
        raise ValueError(f"the chain needs a prime p >= 5, got {p}")
    n1, n2 = genus2_counts(CURVE_C, p)
    m1, m2 = genus2_counts(CURVE_C.twisted(), p)
    jac = jacobian_order(n1, n2, p)
    jac_t = jacobian_order(m1, m2, p)
    if (jac + jac_t) % 2:
        raise ArithmeticError(f"#J + #J~ is odd at p = {p}")
    y = (jac + jac_t) // 2
    x = y + 16 * p
    ss = ec_count(CURVE_E, p)[1] == 0
    expected = theorem_value(p)
    if expected is not None and expected != x:
        raise ArithmeticError(f"#X = {x} differs from the supersingular formula {expected} at p = {p}")
    return CountRecord(p, n1, n2, m1, jac, jac_t, y, x, "chain", ss, expected)


def x_count_brute(p: int) -> int:
    """Projective points of the Büchi surface over ``F_p``, lifting ``x3, x4, x5`` from ``[x0 : x1 : x2]``."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p > BRUTE_CAP:
        raise ValueError(f"brute-force count capped at p <= {BRUTE_CAP}")
    reps = []
    for a, b in product(range(p), repeat=2):
        reps.append((1, a, b))
    for b in range(p):
        reps.append((0, 1, b))
    reps.append((0, 0, 1))
    pts = np.array(reps, dtype=np.int64)
    x0, x1, x2 = (pts[:, k] ** 2 % p for k in range(3))
    if p == 2:
        roots = lambda c: np.ones_like(c)  # noqa: E731
    else:
        chi = _chi_table(p)
        roots = lambda c: 1 + chi[c]  # noqa: E731
    total = np.ones(len(reps), dtype=np.int64)
    for i in (3, 4, 5):
        c = ((i - 1) * (i - 2) * x0 - (i - 2) * x1 + (i - 1) * x2) % p
        total *= roots(c)
    return int(total.sum())


def x_count(p: int, method: str = "chain") -> CountRecord | dict:
    if method == "chain":
        return x_count_chain(p)
    if method == "brute":
        return {"p": p, "method": "brute", "X": x_count_brute(p), "good_reduction": p >= 5}
    if method == "both":
        rec = x_count_chain(p)
        rec.method = "both"
        rec.brute = x_count_brute(p)
        return rec
    raise ValueError(f"unknown method {method!r}")


# zeta --------------------------------------------------------------------------


@dataclass
class ZetaRecord:
    p: int
    l_poly: list[int]
    twist_l_poly: list[int]
    residue: int
    predicted: list[int] | None

    @property
    def functional_equation(self) -> bool:
        a = self.l_poly
        return a[3] == self.p * a[1] and a[4] == self.p * self.p

    @property
    def matches(self) -> bool | None:
        return None if self.predicted is None else self.predicted == self.l_poly

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "p_mod_24": self.residue,
            "L_polynomial": self.l_poly,
            "twist_L_polynomial": self.twist_l_poly,
            "predicted": self.predicted,
            "predicted_shape": None if self.predicted is None else ("(pt^2+1)^2" if self.predicted[2] > 0 else "(pt^2-1)^2"),
            "matches": self.matches,
            "functional_equation": self.functional_equation,
        }


def zeta_supersingular_check(p: int) -> ZetaRecord:
    if ec_count(CURVE_E, p)[1] != 0:
        raise ValueError(f"{p} is not a supersingular prime of E")
    l = l_polynomial(*genus2_counts(CURVE_C, p), p)
    lt = l_polynomial(*genus2_counts(CURVE_C.twisted(), p), p)
    r = p % 24
    pred = None
    if r == 23:
        pred = [1, 0, 2 * p, 0, p * p]
    elif r == 5:
        pred = [1, 0, -2 * p, 0, p * p]
    return ZetaRecord(p, l, lt, r, pred)


# Galois image mod 8 ----------------------------------------------------------------

Mat2 = tuple[tuple[int, int], tuple[int, int]]

GALOIS_GENERATORS: tuple[Mat2, ...] = (
    ((4, 3), (1, 4)),
    ((2, 1), (1, 2)),
    ((3, 6), (2, 7)),
    ((1, 2), (6, 3)),
)
GL2_Z8_ORDER = 1536


def _mul(a: Mat2, b: Mat2, n: int = 8) -> Mat2:
    return (
        ((a[0][0] * b[0][0] + a[0][1] * b[1][0]) % n, (a[0][0] * b[0][1] + a[0][1] * b[1][1]) % n),
        ((a[1][0] * b[0][0] + a[1][1] * b[1][0]) % n, (a[1][0] * b[0][1] + a[1][1] * b[1][1]) % n),
    )


def _det(a: Mat2, n: int = 8) -> int:
    return (a[0][0] * a[1][1] - a[0][1] * a[1][0]) % n


def _closure(gens: Sequence[Mat2]) -> set[Mat2]:
    ident: Mat2 = ((1, 0), (0, 1))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = _mul(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def _inverse(a: Mat2, group: set[Mat2]) -> Mat2:
    ident: Mat2 = ((1, 0), (0, 1))
    return next(b for b in group if _mul(a, b) == ident)


def _derived_series(group: set[Mat2]) -> list[int]:
    sizes = [len(group)]
    current = group
    while True:
        comms = {
            _mul(_mul(a, b), _mul(_inverse(a, current), _inverse(b, current)))
            for a in current
            for b in current
        }
        nxt = _closure(list(comms))
        if len(nxt) == len(current):
            return sizes
        sizes.append(len(nxt))
        current = nxt


def galois_image_report() -> dict:
    if any(_det(g) % 2 == 0 for g in GALOIS_GENERATORS):
        raise ValueError("generator is not invertible mod 8")
    group = _closure(GALOIS_GENERATORS)
    closed = all(_mul(a, b) in group for a in group for b in group)
    trace_zero = [g for g in group if (g[0][0] + g[1][1]) % 8 == 0]
    dets: dict[str, int] = {}
    for g in trace_zero:
        dets[str(_det(g))] = dets.get(str(_det(g)), 0) + 1
    series = _derived_series(group)
    return {
        "generators": [[list(r) for r in g] for g in GALOIS_GENERATORS],
        "order": len(group),
        "index": GL2_Z8_ORDER // len(group),
        "index_times_order": GL2_Z8_ORDER // len(group) * len(group),
        "closed": closed,
        "determinants": sorted({_det(g) for g in group}),
        "trace_zero_count": len(trace_zero),
        "trace_zero_determinants": dict(sorted(dets.items())),
        "derived_series_orders": series,
        "solvable": series[-1] == 1,
    }


# the quartic of the cyclotomic lemma -------------------------------------------------

K4_QUARTIC = (1, -16, -12, 32, 4)


def k4_roots() -> list:
    r2, r3 = sqrt(2), sqrt(3)
    r6 = r2 * r3
    a, b = 4 + 2 * r3, 2 * r6 + 3 * r2
    c, d = 4 - 2 * r3, 2 * r6 - 3 * r2
    return [a + b, a - b, c + d, c - d]


def k4_splitting_check() -> dict:
    roots = k4_roots()
    # elementary symmetric functions
    e = [Fraction(1), 0, 0, 0, 0]
    for r in roots:
        for k in range(4, 0, -1):
            e[k] = e[k] + e[k - 1] * r
    coeffs = [normalize_scalar(((-1) ** k) * e[k]) for k in range(5)]
    quadratics = []
    for r, s in ((roots[0], roots[1]), (roots[2], roots[3])):
        quadratics.append([1, normalize_scalar(-(r + s)), normalize_scalar(r * s)])
    matches = [c == k for c, k in zip(coeffs, K4_QUARTIC)]
    return {
        "quartic": list(K4_QUARTIC),
        "field": [2, 3],
        "roots": [str(r) for r in roots],
        "expanded": [str(c) for c in coeffs],
        "sum_of_roots": str(normalize_scalar(sum(roots, Fraction(0)))),
        "product_of_roots": str(normalize_scalar(roots[0] * roots[1] * roots[2] * roots[3])),
        "quadratic_factors": [[str(c) for c in q] for q in quadratics],
        "quadratic_factor_fields": [sorted({g for c in q for g in getattr(c, "gens", ())}) for q in quadratics],
        "verdict": all(matches),
    }


__all__ = [
    "CURVE_C",
    "CURVE_E",
    "CountRecord",
    "GALOIS_GENERATORS",
    "HyperellipticCurve",
    "ScanResult",
    "WeierstrassCurve",
    "WeilBoundError",
    "ZetaRecord",
    "ec_count",
    "galois_image_report",
    "genus2_counts",
    "jacobian_order",
    "k4_splitting_check",
    "l_polynomial",
    "supersingular_scan",
    "theorem_value",
    "x_count",
    "x_count_brute",
    "x_count_chain",
    "zeta_supersingular_check",
]
