from __future__ import annotations

from fractions import Fraction
from itertools import product

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from k3lab import buchi
from k3lab.buchi import MinorSpec, SequencePoint

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def sympy_b(n):
    rows = []
    for i in range(1, n - 1):
        row = [0] * (n + 1)
        row[0], row[i], row[i + 1], row[i + 2] = -2, 1, -2, 1
        rows.append(row)
    return sympy.Matrix(rows)


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7])
def test_minors_match_sympy(n):
    b = sympy_b(n)
    for spec in buchi.all_minor_specs(n):
        keep = [j for j in range(n + 1) if j not in (spec.a, spec.b, spec.c)]
        assert buchi.minor_det_closed(spec) == b[:, keep].det()


def test_minor_spec_validation_and_methods():
    with pytest.raises(ValueError):
        MinorSpec(5, 2, 1, 3)
    with pytest.raises(ValueError):
        buchi.minor_det(MinorSpec(5, 0, 1, 2), "guess")
    spec = MinorSpec(6, 1, 3, 6)
    assert buchi.minor_det(spec) == buchi.minor_det(spec, "brute_force")


def test_cartan_determinant():
    for n in range(3, 10):
        a, _ = buchi.cartan_data(n)
        assert a.det() == (-1) ** n * (n + 1)


def test_system_rejects_small_n():
    with pytest.raises(ValueError):
        buchi.buchi_system(2)


def test_large_n_uses_coefficient_rows():
    system = buchi.buchi_system(10)
    with pytest.raises(ValueError):
        system.quadrics
    assert len(system.to_json()["quadrics"]) == 8
    point = buchi.LineXn((1,) * 10).point(Fraction(3, 7))
    assert not any(buchi.residuals(system, point))


@pytest.mark.parametrize("i", range(3, 9))
def test_relation_square_on_trivial_points(i):
    alpha, beta, gamma = buchi.relation_square(i)
    for t in range(-4, 5):
        assert (t + i) ** 2 == alpha + beta * (t + 1) ** 2 + gamma * (t + 2) ** 2


@given(fractions, st.lists(st.sampled_from([1, -1]), min_size=5, max_size=5))
def test_points_on_lines_are_trivial(t, signs):
    point = buchi.LineXn(tuple(signs)).point(t)
    assert not any(buchi.residuals(buchi.buchi_system(5), point))
    assert buchi.is_trivial(point).trivial
    assert buchi.sign_pattern_oracle(point)


@given(st.lists(fractions, min_size=6, max_size=6))
def test_squares_criterion_agrees_with_sign_oracle(coords):
    coords[0] = Fraction(1)
    verdict = buchi.is_trivial(coords)
    assert verdict.trivial == buchi.sign_pattern_oracle(coords)


def test_point_at_infinity_is_unclassified():
    assert buchi.is_trivial([0, 1, 1, 1, 1]).status == "unclassified"
    with pytest.raises(ValueError):
        SequencePoint((0, 0, 0))


def test_primitive_representative():
    assert SequencePoint((Fraction(-1, 2), 1, Fraction(3, 2))).primitive() == (1, -2, -3)


def test_lines_of_x5():
    found = buchi.lines_of_X5()
    assert len(found) == 32 and all(ok for _, ok in found)


def test_family_identity_matches_sympy():
    alpha = sympy.Symbol("alpha")
    xs = [sympy.sympify(f.replace("^", "**")) for f in buchi.FAMILY]
    for i in range(1, 4):
        expr = xs[i + 2] ** 2 - 2 * xs[i + 1] ** 2 + xs[i] ** 2 - 2 * xs[0] ** 2
        assert sympy.expand(expr) == 0
    assert all(r.is_zero() for r in buchi.family_identity())
    assert not buchi.is_trivial(buchi.family_point(Fraction(1, 3))).trivial
    assert alpha in xs[1].free_symbols


def test_x4_printed_table_fails_with_recorded_residual():
    a, b, c = sympy.symbols("a b c")
    cubics = [sympy.sympify(t.replace("^", "**")) for t in buchi.x4_printed_table()]
    at = [f.subs({a: 1, b: 1, c: 1}) for f in cubics]
    first = at[3] ** 2 - 2 * at[2] ** 2 + at[1] ** 2 - 2 * at[0] ** 2
    second = at[4] ** 2 - 2 * at[3] ** 2 + at[2] ** 2 - 2 * at[0] ** 2
    report = buchi.x4_param_check()
    assert report["verdict"] == "fails"
    row = next(r for r in report["samples"] if r["sample"] == [1, 1, 1])
    assert row["residuals"] == [str(first), str(second)]
    assert -1296 in (first, second)
    assert buchi.x4_recorded_verdict()["verdict"] == "fails"


def test_x4_checker_accepts_a_true_parametrization():
    # x_i = a + i*b, x_0 = b, scaled to cubic forms by c^2
    table = ["b*c^2", "(a + b)*c^2", "(a + 2*b)*c^2", "(a + 3*b)*c^2", "(a + 4*b)*c^2"]
    assert buchi.x4_param_check(table)["verdict"] == "parametrization"
    with pytest.raises(ValueError):
        buchi.x4_param_check(["a^2"] * 5)
    with pytest.raises(ValueError):
        buchi.x4_param_check(table[:4])


def naive_search(n, bound):
    out = []
    rng = range(-bound, bound + 1)
    for xs in product(rng, repeat=n):
        y = (1,) + xs
        if all(y[i + 2] ** 2 - 2 * y[i + 1] ** 2 + y[i] ** 2 - 2 == 0 for i in range(1, n - 1)):
            out.append(y)
    return out


@pytest.mark.parametrize("n,bound", [(3, 9), (4, 7), (5, 5)])
def test_integer_search_matches_naive_loops(n, bound):
    found = buchi.integer_search(n, bound)
    assert [p for p, _ in found] == sorted(naive_search(n, bound))
    for point, status in found:
        assert (status == "trivial") == buchi.sign_pattern_oracle(point)


def test_integer_search_cap():
    with pytest.raises(ValueError):
        buchi.integer_search(5, 10, cap=5)


@pytest.mark.parametrize("n,p,verdict", [(3, 2, "singular"), (4, 3, "singular"), (4, 5, "smooth"), (5, 0, "smooth")])
def test_smoothness_verdicts(n, p, verdict):
    assert buchi.smoothness_report(n, p).verdict == verdict
