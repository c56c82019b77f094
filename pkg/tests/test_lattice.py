from __future__ import annotations

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from k3lab import lattice as L
from k3lab.exact import ExactMatrix
from k3lab.kummer import all_lines, fibration
from k3lab.kummer.fibrations import fibration_conics
from k3lab.kummer.lines import combinatorial_adjacent


@pytest.fixture(scope="module")
def gram():
    return L.picard_gram()


@pytest.fixture(scope="module")
def gram_sympy(gram):
    return sympy.Matrix(gram.int_rows())


def test_generators_order(gram):
    gens = L.generators()
    assert len(gens) == 34 and gram.nrows == 34
    assert [g.label for g in gens[-2:]] == ["C1", "C2"]
    assert [L.line_class(L.line_by_mask(m)).line.mask for m in range(32)] == list(range(32))


def test_line_block_follows_incidence(gram):
    lines = sorted(all_lines(), key=lambda x: x.mask)
    for a in lines:
        for b in lines:
            expected = -2 if a == b else int(combinatorial_adjacent(a, b))
            assert gram[a.mask, b.mask] == expected


def test_gram_elementary_divisors_match_sympy(gram_sympy):
    snf = sympy_snf(gram_sympy, domain=sympy.ZZ)
    diag = sorted(abs(snf[i, i]) for i in range(34) if snf[i, i])
    assert len(diag) == 19
    assert [d for d in diag if d != 1] == [4, 4, 4]


def test_gram_signature_matches_numpy(gram):
    eig = np.linalg.eigvalsh(np.array(gram.int_rows(), dtype=float))
    assert int((eig > 1e-8).sum()) == 1
    assert int((eig < -1e-8).sum()) == 18


def test_picard_invariants_match_reference(gram):
    inv = L.lattice_invariants(gram).to_json()
    assert inv["rank"] == 19 and inv["abs_det"] == 64 and inv["signature"] == [1, 18]
    assert L.same_invariants(gram, L.reference_lattice(L.PICARD_REFERENCE))["all"]


def test_quotient_coordinates_recover_generators(gram):
    q = L.QuotientLattice.of(gram)
    for j in (0, 5, 32, 33):
        w = [gram[i, j] for i in range(34)]
        assert q.coordinates(w) == q.generator_coordinates(j)
    a, b = q.generator_coordinates(32), q.generator_coordinates(3)
    assert q.pair(a, b) == gram[32, 3]
    with pytest.raises(ValueError):
        q.coordinates([1] + [0] * 33)


@pytest.mark.parametrize(
    "name,det,sig",
    [("U", -1, (1, 1)), ("E8", 1, (0, 8)), ("U(4)+(-4)", 64, (1, 2)), ("A2^2", 9, (0, 4)), ("D4", 4, (0, 4))],
)
def test_reference_lattices(name, det, sig):
    g = L.reference_lattice(name)
    assert sympy.Matrix(g.int_rows()).det() == det
    inv = L.lattice_invariants(g)
    assert inv.signature == sig


def test_reference_lattice_errors():
    for bad in ("", "F4", "E9", "D3", "U+?"):
        with pytest.raises(ValueError):
            L.reference_lattice(bad)


@settings(max_examples=40)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_invariants_signature_matches_numpy(rows):
    n = len(rows)
    sym = [[rows[i][j] + rows[j][i] for j in range(n)] for i in range(n)]
    eig = np.linalg.eigvalsh(np.array(sym, dtype=float))
    inv = L.lattice_invariants(ExactMatrix(sym))
    assert inv.rank == sympy.Matrix(sym).rank()
    if inv.rank == n:
        assert inv.signature == (int((eig > 0).sum()), int((eig < 0).sum()))
        assert inv.abs_det == abs(sympy.Matrix(sym).det())


def test_fiber_parsing():
    assert L.parse_fibers("4I4+4I2") == ["I4"] * 4 + ["I2"] * 4
    assert L.parse_fibers(["I0*", "II"]) == ["I0*", "II"]
    assert L.euler_sum("4I4 4I2") == 24
    assert L.euler_sum("2II* 4I1") == 24
    assert L.shioda_tate(19, "4I4+4I2") == 1
    with pytest.raises(ValueError):
        L.parse_fibers("I4+J2")
    with pytest.raises(ValueError):
        L.shioda_tate(4, "4I4")


def _span_rank(rows):
    return sympy.Matrix(rows).rank()


@pytest.mark.parametrize("which", ["minus", "plus"])
def test_mordell_weil(which, gram):
    rep = L.mw_group(which).to_json()
    assert rep["rank"] == rep["shioda_tate_rank"] == 1
    assert rep["torsion"] == [2, 4]
    assert rep["fiber_checks"]["euler_sum"] == 24
    index = {g.label: i for i, g in enumerate(L.generators())}
    conics = fibration_conics(fibration(which))

    def row(name):
        if name in index:
            return [gram[index[name], j] for j in range(34)]
        return L.intersection_vector(L.CurveClass("conic", name, conics[name].as_curve()))

    zero = rep["trivial_lattice"]["zero_section"]
    fiber = [sum(col) for col in zip(*(row(c) for c in next(iter(rep["trivial_lattice"]["non_identity_components"])).split("+")))]
    trivial = [row(zero), fiber] + [row(c) for comps in rep["trivial_lattice"]["non_identity_components"].values() for c in comps]
    base = _span_rank(trivial)
    assert base == 18
    # a section is torsion exactly when P - O lies in the rational span of the trivial lattice
    for name in rep["torsion_sections"]:
        diff = [a - b for a, b in zip(row(name), row(zero))]
        assert _span_rank(trivial + [diff]) == base
    for name in rep["infinite_order_section_lines"]:
        diff = [a - b for a, b in zip(row(name), row(zero))]
        assert _span_rank(trivial + [diff]) == base + 1


def test_mordell_weil_rejects_unknown_fibration():
    with pytest.raises(ValueError):
        L.mw_group("sideways")


def test_ns_tables_and_chain():
    rows = L.ns_tables_check()
    assert len(rows) == 5 and all(r["matches"] and r["integral"] for r in rows)
    for group in L.KUMMER_TABLE:
        chain = L.chain_for_group(group)
        assert chain["matches"], group
        assert chain["predicted"]["rank"] == chain["ns_rank"] + 16
    assert L.JACOBIAN_TABLE["D4"] == "U(2)+(-2)"
