import random
from fractions import Fraction

import pytest

from polypoisson import affinechart as ac
from polypoisson import catalog
from polypoisson import liealgebra as la
from polypoisson.cli import algebra_from_document
from polypoisson.polycore import PolyMatrix
from polypoisson.tensorcalc import PolyForm, PolyMultiVector

from conftest import ALL_IDS, CHART, GROUPS, random_point


def _at(M: PolyMatrix, point):
    return [[M[i, j].eval(point) for j in range(M.cols)] for i in range(M.rows)]


@pytest.mark.parametrize("entry_id", ALL_IDS)
def test_flags_match_analysis(entry_id):
    e = catalog.load(entry_id)
    rep = la.analyze(e.algebra, e.omega)
    assert rep.structural_ok
    assert bool(rep.unimodular) == e.expected["unimodular"]
    assert rep.nilpotent == e.expected["nilpotent"]
    assert rep.solvable == e.expected["solvable"]
    if e.expected["nilpotent"]:
        assert rep.series.nilindex == e.expected["nilindex"]


@pytest.mark.parametrize("entry_id", ALL_IDS)
def test_golden_target_matches(entry_id):
    assert catalog.golden_compare(catalog.load(entry_id)).ok


@pytest.mark.parametrize("entry_id", GROUPS)
def test_golden_tables_parse_back(entry_id):
    e = catalog.load(entry_id)
    m = e.model()
    t = e.target
    assert PolyMatrix.parse(t.A, CHART) == m.P
    assert PolyMatrix.parse(t.A_inv, CHART) == ac.symplectic_matrix(m).S
    assert PolyMultiVector.parse(t.pi_plus, CHART, 2) == m.poisson_bivector()
    assert PolyForm.parse(t.omega_plus, CHART, 2) == ac.symplectic_form(m)


def test_g2_printed_discrepancy_reported():
    diff = catalog.golden_compare(catalog.load("g2"))
    assert diff.ok
    spots = {(d["tensor"], tuple(d.get("entry", ()))) for d in diff.printed_discrepancies}
    assert ("A", (1, 2)) in spots and ("A", (2, 1)) in spots
    a12 = next(d for d in diff.printed_discrepancies if d["tensor"] == "A" and d["entry"] == [1, 2])
    assert a12["computed"] == "Y" and a12["expected"] == "-Y"


@pytest.mark.parametrize("entry_id", ("g1", "g3", "g4"))
def test_no_printed_discrepancy(entry_id):
    assert catalog.golden_compare(catalog.load(entry_id)).printed_discrepancies == ()


@pytest.mark.parametrize("entry_id", GROUPS)
def test_oracle_matches_chart(entry_id):
    e = catalog.load(entry_id)
    m = e.model()
    S = ac.symplectic_matrix(m).S
    rng = random.Random(GROUPS.index(entry_id))
    for _ in range(10):
        x = random_point(rng, 4)
        assert catalog.numeric_oracle(e, "poisson", x) == _at(m.P, x)
        assert catalog.numeric_oracle(e, "symplectic", x) == _at(S, x)
        assert catalog.numeric_oracle(e, "right_fields", x) == _at(m.P, x)


@pytest.mark.parametrize("entry_id", GROUPS)
def test_oracle_at_identity_is_omega(entry_id):
    e = catalog.load(entry_id)
    P0 = catalog.numeric_oracle(e, "poisson", [0, 0, 0, 0])
    assert P0 == [list(r) for r in e.omega.matrix]


def test_oracle_single_entry_g1():
    e = catalog.load("g1")
    assert catalog.numeric_oracle(e, "poisson", [0, 2, 0, 0])[0][3] == -2


@pytest.mark.parametrize("entry_id", ("g1", "g4"))
def test_oracle_left_fields(entry_id):
    from polypoisson import leftinvariant as li

    e = catalog.load(entry_id)
    m = e.model()
    lf = li.left_fields(m)
    rng = random.Random(5)
    for _ in range(5):
        x = random_point(rng, 4)
        want = catalog.numeric_oracle(e, "left_fields", x)
        got = [[lf[i].eval(x).get((j,), 0) for i in range(4)] for j in range(4)]
        assert got == want


@pytest.mark.parametrize("entry_id", GROUPS)
def test_oracle_symplectic_form_is_hamiltonian_form(entry_id):
    e = catalog.load(entry_id)
    m = e.model()
    S = ac.symplectic_matrix(m).S
    x = [Fraction(1, 2), -1, 3, Fraction(2, 3)]
    # omega_plus in chart components has matrix S^T = -S
    want = [[-v for v in row] for row in _at(S, x)]
    assert catalog.numeric_oracle(e, "symplectic_form", x) == want


def test_g3_chart_inverts():
    e = catalog.load("g3")
    g = catalog.group_point(e, [1, 2, 3, 4])
    # (x, y, z, t) with x = -T, y = -Z, z = Y, t = X + (Y^2 + Z^2)/2
    assert [Fraction(int(v.p), int(v.q)) for v in g] == [-4, -3, 2, Fraction(15, 2)]


def test_unknown_id():
    with pytest.raises(KeyError):
        catalog.load("g9")
    with pytest.raises(ValueError):
        catalog.numeric_oracle(catalog.load("g1"), "curvature", [0, 0, 0, 0])
    with pytest.raises(ValueError):
        catalog.numeric_oracle(catalog.load("aff2"), "poisson", [0, 0])


@pytest.mark.parametrize("entry_id", ALL_IDS)
def test_export_round_trip(entry_id):
    e = catalog.load(entry_id)
    C, om = algebra_from_document(catalog.export_algebra_file(e))
    assert C.brackets == e.algebra.brackets
    assert om.matrix == e.omega.matrix
