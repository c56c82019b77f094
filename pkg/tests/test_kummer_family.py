from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from k3lab.exact import parse_scalar, sqrt
from k3lab.kummer import (
    BB_PARAMS,
    BREMNER_PARAMS,
    BUCHI_PARAMS,
    PI_MINUS,
    PI_PLUS,
    FamilyParams,
    all_lines,
    automorphism_bruteforce,
    check_conic,
    conic_c1,
    conic_c2,
    curve_catalog,
    fibration,
    genus2_data,
    intersection_number,
    klein_system,
    line_graph,
    lines,
    locus_classify,
    parse_label,
    partition_L,
    rank4_analysis,
    sections_o_q,
    singular_fibers,
)
from k3lab.kummer.auts import preserves_net
from k3lab.kummer.fibrations import _base_json, conic_c1_printed
from k3lab.reports import to_plain
from k3lab.kummer.lines import combinatorial_adjacent

T, S, U, V = sympy.symbols("t s u v")
X = sympy.symbols("x0:6")


def sympy_net(t, s):
    g1, g2, g3, g4 = 2 * s**2 - 1, t - s, 2 * t * s - 1, 2 * t**2 - 1
    rows = [
        [-2 * g4, 1, -2 * t**2, g4, 0, 0],
        [g2, 0, t**2 * s, -t * s * g2, -t * s**2, 0],
        [-2 * g1, 0, 0, g1, -2 * s**2, 1],
    ]
    return rows, (g1, g2, g3, g4)


def sympy_line(label, t, s):
    _, (g1, g2, g3, g4) = sympy_net(t, s)
    base = [V, U, U - V * g4 / t, U - 2 * t * V, U - V * g3 / s, U - 2 * g2 * V]
    return [(-1 if i in label else 1) * c for i, c in enumerate(base)]


def test_generic_lines_lie_on_every_member():
    rows, _ = sympy_net(T, S)
    for line in all_lines():
        coords = sympy_line(line.label, T, S)
        for row in rows:
            assert sympy.simplify(sum(c * x**2 for c, x in zip(row, coords))) == 0
    assert all(ok for _, ok in lines(FamilyParams.symbolic()))
    assert all(ok for _, ok in lines(BUCHI_PARAMS))


def sympy_meet(a, b, t, s):
    vecs = []
    for line in (a, b):
        coords = sympy_line(line.label, t, s)
        vecs.append([sympy.diff(c, U) for c in coords])
        vecs.append([sympy.diff(c, V) for c in coords])
    return sympy.Matrix(vecs).rank() < 4


@pytest.mark.parametrize("t,s", [(-1, 1), (3, sympy.Rational(1, 2))])
def test_adjacency_matches_geometric_meeting(t, s):
    verts = all_lines()
    for a, b in combinations(verts, 2):
        assert combinatorial_adjacent(a, b) == sympy_meet(a, b, t, s)


def test_line_graph_shape():
    g = line_graph(BUCHI_PARAMS)
    assert g.to_json() == {
        "vertices": 32,
        "edges": 96,
        "degrees": [6],
        "connected": True,
        "bipartition": [16, 16],
        "geometric_agrees": True,
    }


def test_label_normalization():
    assert parse_label("0") == parse_label("12345")
    assert sorted(all_lines())[0].name == "l"
    assert len({line.mask for line in all_lines()}) == 32


def test_singular_parameters_are_rejected():
    for t, s in ((0, 1), (1, 1), (Fraction(1, 2), 1)):
        params = FamilyParams(t, s)
        assert not params.smooth
        with pytest.raises(ValueError):
            lines(params)


def test_rank_four_quadrics_lie_in_the_net():
    rows, _ = sympy_net(-1, 1)
    report = rank4_analysis(BUCHI_PARAMS).to_json()
    assert len(report["quadrics"]) >= 5
    for entry in report["quadrics"]:
        q = sympy.sympify(entry["quadric"].replace("^", "**"), locals={f"x{i}": X[i] for i in range(6)})
        coeffs = [q.coeff(x**2) for x in X]
        assert sum(1 for c in coeffs if c) == entry["rank"] == 4
        assert sympy.Matrix(rows + [coeffs]).rank() == 3
        for name in entry["omitted"]:
            assert coeffs[int(name[1:])] == 0


def test_automorphism_search_is_a_group_preserving_the_net():
    report = automorphism_bruteforce(BUCHI_PARAMS)
    assert report.closed and report.contains_rho and report.contains_tau
    assert report.order == 128
    assert all(preserves_net(g, BUCHI_PARAMS) for g in report.elements)


def test_locus_labels():
    assert locus_classify(BUCHI_PARAMS).label == "D4"
    for pair in (BREMNER_PARAMS, BB_PARAMS):
        params = FamilyParams(*[parse_scalar(x) for x in pair])
        assert locus_classify(params).label == "V4"


def test_genus_two_data_j_invariants():
    data = genus2_data(BUCHI_PARAMS).to_json()
    assert data["model"] == "y^2 = x^5 - 5*x^3 + 4*x"
    x = sympy.Symbol("x")
    assert sympy.expand(x * (x**2 - 1) * (x**2 - 4)) == x**5 - 5 * x**3 + 4 * x
    # j of y^2 = (x - e1)(x - e2)(x - e3) through the Legendre form
    e1, e2, e3 = -2 * sympy.sqrt(2), -3, 3
    lam = (e3 - e1) / (e2 - e1)
    j = sympy.nsimplify(sympy.simplify(256 * (lam**2 - lam + 1) ** 3 / (lam**2 * (lam - 1) ** 2)))
    assert j == sympy.Rational(2744000, 9)
    assert data["j1"] == data["j2"] == "2744000/9"


def test_conics_on_the_surface():
    assert check_conic(conic_c1()).on_surface
    assert check_conic(conic_c2()).on_surface
    assert not check_conic(conic_c1_printed()).on_surface


def test_c1_quadric_forms_agree_on_its_plane():
    a, b, c = sympy.symbols("a b c")
    r2 = sympy.sqrt(2)
    # plane: x1 = -sqrt2 x2, x5 = sqrt2 x4, x3 = sqrt2 x0
    x0, x2, x4 = a, b, c
    x5 = r2 * x4
    lhs = x2**2 + x4**2 - 6 * x0**2
    rhs = sympy.Rational(1, 2) * (2 * x2**2 + x5**2 - 12 * x0**2)
    assert sympy.expand(lhs - rhs) == 0


def test_fibration_lookup_and_relation():
    assert fibration("minus") is PI_MINUS and fibration("+") is PI_PLUS
    with pytest.raises(ValueError):
        fibration("sideways")
    assert PI_MINUS.relation_in_ideal() and PI_PLUS.relation_in_ideal()


@pytest.mark.parametrize("fib", [PI_MINUS, PI_PLUS], ids=["minus", "plus"])
def test_singular_fibers(fib):
    fibers = singular_fibers(fib)
    kinds = sorted(f.kodaira for f in fibers)
    assert kinds == ["I2"] * 4 + ["I4"] * 4
    assert sum(f.euler for f in fibers) == 24
    for f in fibers:
        assert f.to_json()["degree_sum"] == 4
        for name in f.components:
            if name in LINE_NAMES:
                assert fib.value_on_line(_line(name)) is not None


LINE_NAMES = {line.name for line in all_lines()}


def _line(name):
    return next(line for line in all_lines() if line.name == name)


def test_fiber_components_lie_over_their_base():
    for f in singular_fibers(PI_MINUS):
        base = f.to_json()["base"]
        for name in f.components:
            if name in LINE_NAMES:
                assert to_plain(_base_json(PI_MINUS.value_on_line(_line(name)))) == base


CATALOG = curve_catalog()
names = st.sampled_from(sorted(CATALOG))


@settings(max_examples=60, deadline=None)
@given(names, names)
def test_intersection_numbers_symmetric(a, b):
    n = intersection_number(CATALOG[a], CATALOG[b])
    assert n == intersection_number(CATALOG[b], CATALOG[a])
    assert n >= 0 or a == b


def test_line_intersections_follow_the_combinatorial_rule():
    for a, b in combinations(all_lines(), 2):
        n = intersection_number(CATALOG[a.name], CATALOG[b.name])
        assert n == (1 if combinatorial_adjacent(a, b) else 0)


def test_sections_and_partition():
    report = sections_o_q()
    assert report["O_dot_Q"] == 1
    part = partition_L()
    assert part["covers_all_lines"]
    assert part["plus_lines_are_pi_minus_sections"] and part["minus_lines_are_pi_plus_sections"]


def test_klein_system_rejects_wrong_length():
    with pytest.raises(ValueError):
        klein_system(BUCHI_PARAMS).residuals([1, 2, 3])


def test_parameters_over_surds():
    params = FamilyParams(sqrt(2), Fraction(1, 3))
    assert params.smooth
    assert all(ok for _, ok in lines(params))
