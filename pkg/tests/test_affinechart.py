import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polypoisson import affinechart as ac
from polypoisson import catalog, sampling
from polypoisson import liealgebra as la
from polypoisson.polycore import PolyMatrix, Polynomial
from polypoisson.tensorcalc import (
    PolyForm,
    PolyMultiVector,
    exterior_derivative,
    interior_product,
    is_parallel,
    one_form,
)

from conftest import CHART, GROUPS, random_point, random_poly

N4 = list(CHART)


def test_build_chart_examples(models):
    assert models["g1"].P.to_text(N4) == [
        ["0", "1", "0", "-Y"],
        ["-1", "0", "0", "-Z"],
        ["0", "0", "0", "-1"],
        ["Y", "Z", "1", "0"],
    ]
    assert models["g4"].P.to_text(N4) == [
        ["0", "Z", "0", "1"],
        ["-Z", "0", "1", "0"],
        ["0", "-1", "0", "0"],
        ["-1", "0", "0", "0"],
    ]
    w = la.TwoCocycle.from_pairs(4, {(0, 1): 2, (2, 3): -1})
    m = ac.build_chart(la.StructureConstants(4), w)
    assert m.P == PolyMatrix.from_rationals(w.matrix, 4)


def test_build_chart_refuses_invalid_input():
    e = catalog.load("g1")
    with pytest.raises(ac.ChartBuildError) as info:
        ac.build_chart(e.algebra.with_constant(1, 2, 0, 1), e.omega)
    assert info.value.check.witness is not None
    with pytest.raises(ac.ChartBuildError):
        ac.build_chart(e.algebra, la.TwoCocycle.from_pairs(4, {(0, 1): 1}))


def test_symplectic_matrix_examples(models):
    sm = ac.symplectic_matrix(models["g1"])
    assert sm.det == 1
    assert sm.S.to_text(N4) == [
        ["0", "-1", "Z", "0"],
        ["1", "0", "-Y", "0"],
        ["-Z", "Y", "0", "1"],
        ["0", "0", "-1", "0"],
    ]
    w = la.TwoCocycle.from_pairs(2, {(0, 1): 3})
    ab = ac.symplectic_matrix(ac.build_chart(la.StructureConstants(2), w))
    assert ab.S.to_text() == [["0", "-1/3"], ["1/3", "0"]]
    aff = ac.symplectic_matrix(models["aff2"])
    assert aff.S is None and aff.marker == ac.NON_UNIMODULAR_MARKER
    assert aff.det == Polynomial.parse("(x2 + 1)^2", ["x1", "x2"])
    with pytest.raises(ac.NonUnimodularError):
        ac.symplectic_form(models["aff2"])


def test_symplectic_form_examples(models):
    assert ac.symplectic_form(models["g1"]).to_text(N4) == "-dX^dY + Z*dX^dZ - Y*dY^dZ + dZ^dT"
    assert ac.symplectic_form(models["g4"]).to_text(N4) == "-dX^dT - dY^dZ - Z*dZ^dT"
    w = la.TwoCocycle.from_pairs(2, {(0, 1): 1})
    assert is_parallel(ac.symplectic_form(ac.build_chart(la.StructureConstants(2), w)))
    for gid in GROUPS:
        assert exterior_derivative(ac.symplectic_form(models[gid])).is_zero()


def test_hamiltonian_coordinates(models):
    for gid in GROUPS:
        m = models[gid]
        assert ac.hamiltonian_coordinates_check(m)
        om = ac.hamiltonian_form(m)
        assert om == -ac.symplectic_form(m)
        for i in range(4):
            dx = one_form([Polynomial.constant(4, int(k == i)) for k in range(4)])
            assert interior_product(ac.basis_field(m, i), om) == dx


def test_right_invariant_field_examples(models):
    assert ac.right_invariant_field(models["g1"], [0, 0, 0, 1]).to_text(N4) == "-Y*∂X - Z*∂Y - ∂Z"
    w = la.TwoCocycle.from_pairs(4, {(0, 1): 1, (2, 3): 1})
    ab = ac.build_chart(la.StructureConstants(4), w)
    assert is_parallel(ac.right_invariant_field(ab, [1, 2, 3, 4]))
    with pytest.raises(ValueError):
        ac.right_invariant_field(models["g1"], [1, 0])


@pytest.mark.parametrize("gid", GROUPS)
def test_right_fields_match_pushforward_oracle(models, gid):
    """Chain rule through the chart map of the group coordinates."""
    rng = random.Random(31)
    e = catalog.load(gid)
    m = models[gid]
    for _ in range(5):
        x = random_point(rng, 4)
        oracle = catalog.numeric_oracle(e, "right_fields", x)
        for i in range(4):
            col = ac.basis_field(m, i).eval(x)
            assert [col.get((k,), 0) for k in range(4)] == [oracle[k][i] for k in range(4)]


def test_g2_sign_resolution():
    """The printed A[1][2] of g2 is -Y; the group-coordinate oracle says +Y."""
    e = catalog.load("g2")
    val = catalog.numeric_oracle(e, "poisson", [0, 5, 0, 0])[0][1]
    assert val == 5
    assert e.model().P[0, 1].to_text(N4) == "Y"


def test_right_invariant_form_examples(models):
    m = models["g1"]
    assert ac.right_invariant_form(m, [1, 0, 0, 0]).to_text(N4) == "-dY + Z*dZ"
    w = la.TwoCocycle.from_pairs(2, {(0, 1): 1})
    assert is_parallel(ac.right_invariant_form(ac.build_chart(la.StructureConstants(2), w), [1, 1]))
    for gid in GROUPS:
        mm = models[gid]
        for i in range(4):
            a = ac.right_invariant_form(mm, [int(k == i) for k in range(4)])
            for j in range(4):
                X = ac.basis_field(mm, j)
                pairing = sum((a.component((k,)) * X.component((k,)) for k in range(4)), Polynomial.zero(4))
                assert pairing == int(i == j)
    with pytest.raises(ac.NonUnimodularError):
        ac.right_invariant_form(models["aff2"], [1, 0])


def test_right_multivector_examples(models):
    m = models["g1"]
    mv = ac.right_multivector(m, {(0, 1): 1})
    assert mv.degree() <= 2
    r = la.yang_baxter_r(m.omega)
    rm = ac.right_multivector(m, r)
    assert rm.degree() <= 2
    assert rm.to_text(N4) == "∂X^∂Y - 2*Y*∂X^∂T - 2*Z*∂Y^∂T - ∂Z^∂T"
    w = la.TwoCocycle.from_pairs(4, {(0, 1): 1, (2, 3): 1})
    ab = ac.build_chart(la.StructureConstants(4), w)
    assert is_parallel(ac.right_multivector(ab, {(0, 1, 2): 1, (1, 2, 3): 5}))
    with pytest.raises(ValueError):
        ac.right_multivector(m, {(0, 1): 1, (0, 1, 2): 1})


@pytest.mark.parametrize("gid", GROUPS)
def test_right_multivector_degrees(models, gid):
    rng = random.Random(17)
    m = models[gid]
    for k in range(1, 5):
        for _ in range(3):
            w = {idx: rng.randint(-2, 2) for idx in combinations(range(4), k)}
            if not any(w.values()):
                continue
            assert ac.right_multivector(m, w).degree() <= k


def test_poisson_bracket_examples(models):
    m = models["g1"]
    for i in range(4):
        for j in range(4):
            assert ac.poisson_bracket(m, m.variable(i), m.variable(j)) == m.P[i, j]
    assert ac.poisson_bracket(m, m.variable(0) ** 2, Polynomial.constant(4, 5)).is_zero()


def test_poisson_bracket_jacobi_cubic(models):
    rng = random.Random(23)
    m = models["g1"]
    for _ in range(3):
        f, g, h = (random_poly(rng, 4, 3, 3) for _ in range(3))
        pb = lambda a, b: ac.poisson_bracket(m, a, b)  # noqa: E731
        total = pb(f, pb(g, h)) + pb(g, pb(h, f)) + pb(h, pb(f, g))
        assert total.is_zero()
        assert pb(f, g).degree() <= f.degree() + g.degree()


def test_volume_examples(models):
    for gid in GROUPS:
        v = ac.volume_check(models[gid])
        assert v.parallel and v.consistent
        assert is_parallel(ac.volume_form(models[gid]))
    assert ac.volume_check(models["g1"]).det == 1
    v = ac.volume_check(models["aff2"])
    assert not v.parallel and v.consistent


def test_volume_rejects_odd_dimension():
    m = ac.ChartModel(la.StructureConstants(3), la.TwoCocycle([[0] * 3] * 3), PolyMatrix.from_rationals([[0] * 3] * 3, 3), ("a", "b", "c"))
    with pytest.raises(ValueError):
        ac.volume_check(m)


def test_is_parallel_examples(models):
    m = models["g1"]
    om = ac.symplectic_form(m)
    assert not is_parallel(om)
    from polypoisson.tensorcalc import wedge

    assert is_parallel(wedge(om, om))
    assert is_parallel(PolyMultiVector.parse("3*∂X^∂Y", N4))


def test_commuting_frame(models):
    for gid in GROUPS:
        assert ac.commuting_frame_check(models[gid])
        fields = ac.frame_fields(models[gid])
        assert all(is_parallel(X) for X in fields)
    w = la.TwoCocycle.from_pairs(2, {(0, 1): 1})
    assert ac.commuting_frame_check(ac.build_chart(la.StructureConstants(2), w))


@pytest.mark.parametrize("gid", catalog.CATALOG_IDS)
def test_bracket_sign_random(models, gid):
    rng = random.Random(41)
    m = models[gid]
    for _ in range(10):
        u, v = sampling.random_vector(rng, m.n), sampling.random_vector(rng, m.n)
        assert ac.bracket_sign_check(m, u, v)


@pytest.mark.parametrize("gid", GROUPS)
def test_frame_gradient_identity(models, gid):
    rng = random.Random(43)
    m = models[gid]
    for _ in range(5):
        f = random_poly(rng, 4, 3, 5)
        derivs = ac.frame_derivatives(m, f)
        assert ac.gradient_from_frame(m, derivs) == f.gradient()


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_chart_invariants_random(seed):
    C, omega = sampling.random_symplectic_algebra(random.Random(seed))
    m = ac.build_chart(C, omega)
    assert ac.chart_invariants(m).ok
    assert ac.poisson_check(m).is_zero()


def test_chart_invariants_catalog(models):
    for m in models.values():
        rep = ac.chart_invariants(m)
        assert rep.ok, rep.failures


def test_degree_table(models):
    for m in models.values():
        assert all(row["ok"] for row in ac.degree_table(m))
