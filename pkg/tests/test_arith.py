from __future__ import annotations

from collections import Counter
from itertools import product

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.combinatorics import Permutation, PermutationGroup

from k3lab import arith
from k3lab.arith import CURVE_C, CURVE_E, BadReductionError, HyperellipticCurve, WeierstrassCurve
from k3lab.exact import GFp2, primes_up_to
from k3lab.exact.numtheory import least_nonresidue

SMALL = [p for p in primes_up_to(23) if p >= 5]


def naive_ec(curve, p):
    squares = Counter(y * y % p for y in range(p))
    affine = sum(squares[(x**3 + curve.a2 * x * x + curve.a4 * x + curve.a6) % p] for x in range(p))
    return affine + 1


@pytest.mark.parametrize("p", [p for p in primes_up_to(80) if p >= 5 and CURVE_E.discriminant() % p])
def test_ec_count_matches_naive_loop(p):
    n, a = arith.ec_count(CURVE_E, p)
    assert n == naive_ec(CURVE_E, p)
    assert a == p + 1 - n


def test_ec_count_rejects_bad_primes():
    with pytest.raises(ValueError):
        arith.ec_count(CURVE_E, 3)
    # y^2 = x^3 - 5x^2 has a double root at 0
    with pytest.raises(BadReductionError):
        arith.ec_count(WeierstrassCurve(-5, 0, 0), 5)


def test_discriminant_matches_sympy():
    x = sympy.Symbol("x")
    for curve in (CURVE_E, WeierstrassCurve(1, -3, 5), WeierstrassCurve(0, -1, 0)):
        f = x**3 + curve.a2 * x**2 + curve.a4 * x + curve.a6
        assert curve.discriminant() == 16 * sympy.discriminant(f, x)


def eval_poly(coeffs, x):
    acc = x * 0
    for c in coeffs:
        acc = acc * x + c
    return acc


def naive_genus2(curve, p):
    d = least_nonresidue(p) if curve.twist else 1
    sq1 = Counter(y * y % p for y in range(p))
    n1 = sum(sq1[(eval_poly(curve.coeffs, x) * pow(d, -1, p)) % p] for x in range(p)) + 1
    field = [GFp2(a, b, p) for a, b in product(range(p), repeat=2)]
    sq2 = Counter(((y * y).a, (y * y).b) for y in field)
    n2 = 0
    for x in field:
        v = eval_poly(curve.coeffs, x)
        v = v * GFp2(pow(d, -1, p), 0, p)
        n2 += sq2[(v.a, v.b)]
    return n1, n2 + 1


@pytest.mark.parametrize("p", [7, 11, 13, 17])
@pytest.mark.parametrize("twist", [False, True])
def test_genus_two_counts_match_naive_loops(p, twist):
    curve = HyperellipticCurve(CURVE_C.coeffs, twist)
    assert arith.genus2_counts(curve, p) == naive_genus2(curve, p)


@pytest.mark.parametrize("p", [7, 11, 13, 17, 19, 23])
def test_jacobian_order_from_point_counts(p):
    n1, n2 = arith.genus2_counts(CURVE_C, p)
    assert arith.jacobian_order(n1, n2, p) == (n1 * n1 + n2) // 2 - p
    lp = arith.l_polynomial(n1, n2, p)
    t = sympy.Symbol("t")
    # reciprocal roots of the L-polynomial have absolute value sqrt(p)
    for root in sympy.Poly(list(reversed(lp)), t).nroots():
        assert abs(abs(root) - p**-0.5) < 1e-9


def test_genus_two_rejects_bad_input():
    with pytest.raises(ValueError):
        arith.genus2_counts(CURVE_C, 9)
    with pytest.raises(BadReductionError):
        arith.genus2_counts(CURVE_C, 3)
    with pytest.raises(ValueError):
        arith.genus2_counts(HyperellipticCurve((1, 0, 0, 1)), 7)


def naive_x_count(p):
    total = 0
    for pt in product(range(p), repeat=6):
        if not any(pt):
            continue
        if all((pt[i + 2] ** 2 - 2 * pt[i + 1] ** 2 + pt[i] ** 2 - 2 * pt[0] ** 2) % p == 0 for i in range(1, 4)):
            total += 1
    return total // (p - 1)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_brute_count_matches_enumeration_of_p5(p):
    assert arith.x_count_brute(p) == naive_x_count(p)


@pytest.mark.parametrize("p", [7, 11, 13, 17, 19, 23, 29, 31])
def test_chain_matches_brute(p):
    rec = arith.x_count(p, "both").to_json()
    assert rec["chain_equals_brute"]
    assert rec["X"] == rec["Y"] + 16 * p


def test_theorem_values():
    for p in (5, 23, 29, 47):
        tv = arith.theorem_value(p)
        if tv is not None:
            assert tv in (p * p + 18 * p + 1, p * p + 14 * p + 1)
    assert arith.theorem_value(7) is None


def test_count_method_errors():
    with pytest.raises(ValueError):
        arith.x_count(7, "guess")
    with pytest.raises(ValueError):
        arith.x_count_brute(37)
    with pytest.raises(ValueError):
        arith.x_count_chain(3)


def test_supersingular_scan_against_naive_counts():
    scan = arith.supersingular_scan(bound=300)
    naive = [p for p in primes_up_to(300) if p >= 5 and CURVE_E.discriminant() % p and naive_ec(CURVE_E, p) == p + 1]
    assert scan.primes == naive
    assert scan.congruence_ok
    with pytest.raises(ValueError):
        arith.supersingular_scan(bound=10**7)


@pytest.mark.parametrize("p", [5, 23, 29, 47, 53, 71])
def test_zeta_at_supersingular_primes(p):
    if arith.ec_count(CURVE_E, p)[1] != 0:
        with pytest.raises(ValueError):
            arith.zeta_supersingular_check(p)
        return
    rec = arith.zeta_supersingular_check(p)
    assert rec.functional_equation
    if rec.predicted is not None:
        assert rec.matches


def _as_permutation(m, vectors):
    index = {v: i for i, v in enumerate(vectors)}
    image = [index[((m[0][0] * a + m[0][1] * b) % 8, (m[1][0] * a + m[1][1] * b) % 8)] for a, b in vectors]
    return Permutation(image)


def test_galois_image_order_matches_sympy():
    vectors = list(product(range(8), repeat=2))
    group = PermutationGroup([_as_permutation(g, vectors) for g in arith.GALOIS_GENERATORS])
    report = arith.galois_image_report()
    assert report["order"] == group.order()
    assert report["closed"]
    assert report["solvable"] == group.is_solvable
    assert report["derived_series_orders"] == [g.order() for g in group.derived_series()][: len(report["derived_series_orders"])]
    gl2 = PermutationGroup(
        [_as_permutation(g, vectors) for g in (((1, 1), (0, 1)), ((0, 1), (1, 0)), ((3, 0), (0, 1)), ((5, 0), (0, 1)))]
    )
    assert gl2.order() == arith.GL2_Z8_ORDER


def test_k4_quartic_splits_over_biquadratic_field():
    x = sympy.Symbol("x")
    quartic = sum(c * x ** (4 - k) for k, c in enumerate(arith.K4_QUARTIC))
    factors = sympy.factor_list(quartic, extension=[sympy.sqrt(2), sympy.sqrt(3)])[1]
    assert sorted(sympy.degree(f, x) for f, _ in factors) == [1, 1, 1, 1]
    roots = [sympy.sympify(r.replace("^", "**")) for r in arith.k4_splitting_check()["roots"]]
    for r in roots:
        assert sympy.expand(quartic.subs(x, r)) == 0
    assert arith.k4_splitting_check()["verdict"]


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([7, 11, 13, 17, 19]), st.tuples(*[st.integers(-5, 5)] * 3))
def test_random_weierstrass_counts(p, coeffs):
    curve = WeierstrassCurve(*coeffs)
    if curve.discriminant() % p == 0:
        return
    assert arith.ec_count(curve, p)[0] == naive_ec(curve, p)
