from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from k3lab.exact import GF, GFp2, MultiQuad, field_tag, is_prime, legendre_symbol, parse_scalar, primes_up_to, sqrt, sqrt_mod
from k3lab.exact.numtheory import least_nonresidue, squarefree_decomposition

SMALL_PRIMES = [p for p in primes_up_to(60) if p > 2]
rationals = st.fractions(min_value=-50, max_value=50, max_denominator=20)


def test_primes_match_sympy():
    assert primes_up_to(500) == list(sympy.primerange(2, 501))
    assert primes_up_to(1) == []


@given(st.integers(min_value=-5, max_value=10**6))
def test_is_prime_matches_sympy(n):
    assert is_prime(n) == (n > 1 and sympy.isprime(n))


@given(st.integers(), st.sampled_from(SMALL_PRIMES))
def test_legendre_matches_sympy(a, p):
    expected = 0 if a % p == 0 else sympy.legendre_symbol(a % p, p)
    assert legendre_symbol(a, p) == expected


@given(st.integers(min_value=0, max_value=10**4), st.sampled_from(SMALL_PRIMES + [10007, 65537]))
def test_sqrt_mod_squares_back(a, p):
    r = sqrt_mod(a, p)
    if legendre_symbol(a, p) == -1:
        assert r is None
    else:
        assert r * r % p == a % p


def test_legendre_rejects_even_prime():
    with pytest.raises(ValueError):
        legendre_symbol(3, 2)


@given(st.integers(min_value=-10**5, max_value=10**5).filter(bool))
def test_squarefree_decomposition(n):
    c, d = squarefree_decomposition(n)
    assert c * c * d == n
    assert sympy.factorint(abs(d)) == {q: 1 for q in sympy.factorint(abs(d))}


def test_least_nonresidue():
    assert least_nonresidue(7) == 3
    assert least_nonresidue(5) == 2


# multiquadratic fields ------------------------------------------------------

def mq(gens):
    return st.tuples(*[rationals] * (1 << len(gens))).map(lambda c: MultiQuad(gens, c))


@given(mq((2, 3)), mq((2, 3)), mq((2, 3)))
def test_multiquad_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a


@given(mq((-2, 2)))
def test_multiquad_inverse(a):
    if a:
        assert a * a.inverse() == 1


@given(mq((-1, 3)))
def test_multiquad_norm_is_product_of_conjugates(a):
    prod = MultiQuad.from_rational(1)
    for c in a.conjugates():
        prod = prod * c
    assert prod == a.norm()


def test_sqrt_products_collapse():
    assert sqrt(2) * sqrt(2) == 2
    assert sqrt(-2) * sqrt(-2) == -2
    assert str(sqrt(8)) == "2*sqrt(2)"
    assert sqrt(Fraction(3, 2)) * sqrt(Fraction(3, 2)) == Fraction(3, 2)


def test_parse_scalar_forms():
    assert parse_scalar("-3/2") == Fraction(-3, 2)
    assert parse_scalar("1/sqrt(-2) - sqrt(2)") == 1 / sqrt(-2) - sqrt(2)
    assert field_tag(sqrt(2), sqrt(-2), Fraction(1)) == (-2, 2)


def test_multiquad_json_round_trip():
    x = sqrt(2)
    assert x.to_json() == {"d": [2], "coords": ["0", "1"]}
    assert MultiQuad.from_json(x.to_json()) == x


# finite fields ---------------------------------------------------------------

@given(st.integers(), st.integers(), st.sampled_from(SMALL_PRIMES))
def test_gf_matches_integers(a, b, p):
    x, y = GF(a, p), GF(b, p)
    assert (x * y).v == a * b % p
    assert (x + y).v == (a + b) % p
    if b % p:
        assert (x / y * y) == x


@settings(max_examples=60)
@given(st.integers(0, 100), st.integers(0, 100), st.sampled_from([3, 5, 7, 11, 13]))
def test_gfp2_square_roots(a, b, p):
    z = GFp2(a, b, p)
    r = (z * z).sqrt()
    assert r is not None and r * r == z * z
    assert z.norm() == (z * z.frobenius()).a


def test_every_element_of_fp_is_a_square_in_fp2():
    p = 7
    for v in range(p):
        assert GFp2(v, 0, p).sqrt() is not None
