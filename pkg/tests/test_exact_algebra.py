from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from k3lab.exact import (
    ExactMatrix,
    FiniteQuadraticForm,
    SparsePoly,
    discriminant_form,
    fqf_isomorphic,
    parse_poly,
    poly_identity_zero,
    resultant_univariate,
    smith_normal_form,
    sqrt,
    symmetric_signature,
)
from k3lab.exact.poly import binary_forms_common_length

small_ints = st.integers(min_value=-6, max_value=6)


def int_matrix(rows, cols):
    return st.lists(st.lists(small_ints, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


# polynomials -----------------------------------------------------------------

@given(st.lists(small_ints, min_size=1, max_size=5), st.lists(small_ints, min_size=1, max_size=5))
def test_polynomial_product_matches_sympy(a, b):
    x = sympy.Symbol("x")
    fa, fb = sum(c * x**k for k, c in enumerate(a)), sum(c * x**k for k, c in enumerate(b))
    ours = parse_poly(str(fa), ("x",)) * parse_poly(str(fb), ("x",))
    assert ours == parse_poly(str(sympy.expand(fa * fb)), ("x",))


def test_parse_and_identity():
    f = parse_poly("(x + y)^2 - x^2 - 2*x*y - y^2", ("x", "y"))
    assert poly_identity_zero(f)
    assert not poly_identity_zero(parse_poly("x*y", ("x", "y")))


def test_polynomial_with_surd_coefficients():
    f = parse_poly("(x - sqrt(2))*(x + sqrt(2))", ("x",))
    assert f == parse_poly("x^2 - 2", ("x",))


def test_resultant_sign_convention():
    x = SparsePoly.var("x")
    assert resultant_univariate(x - 1, x + 1) == -2


@settings(max_examples=40)
@given(st.lists(small_ints, min_size=2, max_size=4), st.lists(small_ints, min_size=2, max_size=4))
def test_resultant_matches_sympy(a, b):
    if a[-1] == 0 or b[-1] == 0:
        return
    x = sympy.Symbol("x")
    fa, fb = sum(c * x**k for k, c in enumerate(a)), sum(c * x**k for k, c in enumerate(b))
    ours = resultant_univariate(parse_poly(str(fa), ("x",)), parse_poly(str(fb), ("x",)))
    assert ours == sympy.resultant(fb, fa, x)


def test_binary_forms_common_length():
    u, v = SparsePoly.var("u"), SparsePoly.var("v")
    f = (u - v) * (u - v * 2) * v
    g = (u - v) * v * v
    assert binary_forms_common_length([f, g], "u", "v") == 2
    assert binary_forms_common_length([u * u, (u - v) * (u + v)], "u", "v") == 0
    assert binary_forms_common_length([f * 0], "u", "v") is None


# matrices --------------------------------------------------------------------

@given(st.integers(1, 5).flatmap(lambda n: int_matrix(n, n)))
def test_det_matches_sympy(rows):
    assert ExactMatrix(rows).det() == sympy.Matrix(rows).det()


@given(st.integers(1, 4).flatmap(lambda m: st.integers(1, 5).flatmap(lambda n: int_matrix(m, n))))
def test_rank_and_nullspace(rows):
    m = ExactMatrix(rows)
    assert m.rank() == sympy.Matrix(rows).rank()
    for vec in m.nullspace():
        assert all(x == 0 for x in m.apply(vec))
    assert m.rank() + len(m.nullspace()) == m.ncols


@settings(max_examples=60)
@given(st.integers(1, 4).flatmap(lambda m: st.integers(1, 4).flatmap(lambda n: int_matrix(m, n))))
def test_smith_normal_form(rows):
    m = ExactMatrix(rows)
    snf = smith_normal_form(m)
    assert snf.U @ m @ snf.V == snf.D
    assert abs(int(snf.U.det())) == 1 and abs(int(snf.V.det())) == 1
    ours = [d for d in snf.factors if d]
    for a, b in zip(ours, ours[1:]):
        assert b % a == 0
    theirs = sympy_snf(sympy.Matrix(rows), domain=sympy.ZZ)
    diag = [abs(theirs[i, i]) for i in range(min(theirs.shape)) if theirs[i, i]]
    assert sorted(ours) == sorted(diag)


@given(st.integers(1, 5).flatmap(lambda n: int_matrix(n, n)))
def test_signature_matches_numpy(rows):
    a = np.array(rows, dtype=float)
    sym = (a + a.T).tolist()
    m = ExactMatrix([[int(x) for x in r] for r in sym])
    eig = np.linalg.eigvalsh(np.array(sym))
    pos, neg, zero = symmetric_signature(m)
    if np.min(np.abs(eig)) > 1e-6 or zero:
        assert pos == int((eig > 1e-6).sum()) and neg == int((eig < -1e-6).sum())
    assert pos + neg + zero == len(rows)


def test_charpoly_matches_sympy():
    rows = [[2, 1, 0], [1, -3, 4], [0, 4, 5]]
    lam = sympy.Symbol("lam")
    expected = sympy.Poly(sympy.Matrix(rows).charpoly(lam).as_expr(), lam).all_coeffs()
    # coefficients come back lowest degree first
    assert list(ExactMatrix(rows).charpoly())[::-1] == expected


def test_matrix_over_surds():
    m = ExactMatrix([[sqrt(2), 1], [2, sqrt(2)]])
    assert m.det() == 0
    assert m.rank() == 1


# discriminant forms -------------------------------------------------------------

def test_discriminant_forms_of_small_lattices():
    q = discriminant_form(ExactMatrix([[0, 1, 0], [1, 0, 0], [0, 0, -6]]))
    assert q.orders == (6,)
    assert q.gen_q == (Fraction(-1, 6) % 2,)
    a1 = discriminant_form(ExactMatrix([[-2]]))
    assert a1.orders == (2,) and a1.gen_q == (Fraction(3, 2),)


def test_fqf_isomorphism_with_witness():
    u2 = discriminant_form(ExactMatrix([[0, 2], [2, 0]]))
    # U with a different basis, scaled by 2
    twisted = discriminant_form(ExactMatrix([[0, 2], [2, 4]]))
    ok, witness = fqf_isomorphic(u2, twisted)
    assert ok and witness is not None
    # <2> + <-2> has the same group but a different form
    odd = discriminant_form(ExactMatrix([[2, 2], [2, 0]]))
    assert not fqf_isomorphic(u2, odd)[0]
    d4 = discriminant_form(ExactMatrix([[-2, 1, 0, 0], [1, -2, 1, 1], [0, 1, -2, 0], [0, 1, 0, -2]]))
    assert d4.orders == (2, 2)
    assert not fqf_isomorphic(u2, d4)[0]


def test_fqf_rejects_large_groups():
    big = FiniteQuadraticForm.from_gram((32, 32), [[Fraction(1, 32), 0], [0, Fraction(1, 32)]])
    with pytest.raises(ValueError):
        fqf_isomorphic(big, big)
