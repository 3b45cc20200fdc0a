import random
from fractions import Fraction
from itertools import combinations

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from polypoisson import affinechart as ac
from polypoisson import catalog, linalg, sampling
from polypoisson import liealgebra as la

from conftest import GROUPS


def _dense(C):
    n = C.dim
    return [[[C.c(i, j, k) for k in range(n)] for j in range(n)] for i in range(n)]


def _jacobiator_nonzero(C):
    """Brute force over all ordered triples, straight from the definition."""
    T, n = _dense(C), C.dim
    bad = []
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    s = sum(T[i][j][m] * T[m][k][l] + T[j][k][m] * T[m][i][l] + T[k][i][m] * T[m][j][l] for m in range(n))
                    if s:
                        bad.append((i, j, k, l))
    return bad


def _cocycle_defect(C, W):
    T, n = _dense(C), C.dim
    out = []
    for i in range(n):
        for j in range(n):
            for k in range(n):
                s = sum(T[i][j][m] * W[m][k] + T[j][k][m] * W[m][i] + T[k][i][m] * W[m][j] for m in range(n))
                if s:
                    out.append((i, j, k))
    return out


NON_LIE = la.StructureConstants(3, {(0, 1): [1, 0, 0], (0, 2): [0, 0, 1], (1, 2): [0, 1, 0]})


def test_jacobi_examples():
    assert la.check_jacobi(catalog.load("g1").algebra)
    assert la.check_jacobi(la.StructureConstants(5))
    res = la.check_jacobi(NON_LIE)
    assert not res and _jacobiator_nonzero(NON_LIE)
    i, j, k, l = res.witness
    assert (i, j, k, l) in _jacobiator_nonzero(NON_LIE)


def test_cocycle_examples():
    g1 = catalog.load("g1")
    assert la.check_cocycle(g1.omega, g1.algebra)
    ab = la.StructureConstants(4)
    assert la.check_cocycle(la.TwoCocycle.from_pairs(4, {(0, 2): 3, (1, 3): -1}), ab)
    g2 = catalog.load("g2")
    w = la.TwoCocycle.from_pairs(4, {(0, 1): 1})
    assert bool(la.check_cocycle(w, g2.algebra)) == (not _cocycle_defect(g2.algebra, w.matrix))


def test_non_antisymmetric_omega_rejected():
    with pytest.raises(ValueError):
        la.TwoCocycle([[0, 1], [1, 0]])


def test_redundant_bracket_keys_rejected():
    with pytest.raises(ValueError):
        la.StructureConstants(3, {(1, 0): [0, 0, 1]})


def test_unimodular_examples():
    assert la.check_unimodular(catalog.load("g2").algebra)
    assert la.check_unimodular(la.StructureConstants(3))
    res = la.check_unimodular(catalog.load("aff2").algebra)
    assert not res and res.witness == (0,)


def test_lower_central_series_examples():
    g1 = la.lower_central_series(catalog.load("g1").algebra)
    assert g1.nilpotent and g1.nilindex == 3 and g1.lower_central_dims == (4, 2, 1, 0)
    g4 = la.lower_central_series(catalog.load("g4").algebra)
    assert g4.nilpotent and g4.nilindex == 2
    g2 = la.lower_central_series(catalog.load("g2").algebra)
    assert not g2.nilpotent and g2.solvable and g2.nilindex is None
    assert len(g2.witness) == 2
    assert la.lower_central_series(la.StructureConstants(3)).nilindex == 1


def test_catalog_verdicts():
    expected = {"g1": 3, "g2": None, "g3": None, "g4": 2}
    for gid in GROUPS:
        e = catalog.load(gid)
        rep = la.analyze(e.algebra, e.omega)
        assert rep.structural_ok and rep.unimodular and rep.cybe
        assert rep.series.nilindex == expected[gid]
        assert rep.solvable


def test_yang_baxter_r_examples():
    w = la.TwoCocycle([[0, 1], [-1, 0]])
    r = la.yang_baxter_r(w)
    assert la.sharp_matrix(r, 2) == [[0, -1], [1, 0]]
    g1 = catalog.load("g1")
    r1 = la.yang_baxter_r(g1.omega)
    inv = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in g1.omega.matrix]).inv()
    assert la.sharp_matrix(r1, 4) == [[Fraction(int(inv[i, j].p), int(inv[i, j].q)) for j in range(4)] for i in range(4)]
    # involution: inverting the sharp matrix of r gives omega back
    assert linalg.inverse(la.sharp_matrix(r1, 4)) == [list(row) for row in g1.omega.matrix]
    with pytest.raises(ValueError):
        la.yang_baxter_r(la.TwoCocycle([[0, 0], [0, 0]]))


def _cybe_bruteforce(r, C):
    """[r, r] by the cyclic contraction r^ia r^jb C^k_ab, entry by entry."""
    n = C.dim
    R = la.bivector_matrix(r, n)
    T = _dense(C)
    for i, j, k in combinations(range(n), 3):
        s = sum(
            R[i][a] * R[j][b] * T[a][b][k] + R[j][a] * R[k][b] * T[a][b][i] + R[k][a] * R[i][b] * T[a][b][j]
            for a in range(n)
            for b in range(n)
        )
        if s:
            return False
    return True


def test_cybe_examples():
    g1 = catalog.load("g1")
    assert la.check_cybe(la.yang_baxter_r(g1.omega), g1.algebra)
    rng = random.Random(2)
    ab = la.StructureConstants(4)
    g2 = catalog.load("g2").algebra
    for _ in range(10):
        r = {(i, j): rng.randint(-2, 2) for i in range(4) for j in range(i + 1, 4)}
        assert la.check_cybe(r, ab)
        assert bool(la.check_cybe(r, g2)) == _cybe_bruteforce(r, g2)


def test_algebraic_schouten_matches_chart_schouten(models):
    """[r, r] pushed to right fields equals the chart Schouten bracket of r^-."""
    from polypoisson.tensorcalc import schouten_bracket

    rng = random.Random(4)
    for gid in GROUPS:
        m = models[gid]
        for _ in range(3):
            r = {(i, j): rng.randint(-2, 2) for i in range(4) for j in range(i + 1, 4)}
            rm = ac.right_multivector(m, r)
            lhs = schouten_bracket(rm, rm)
            alg = la.algebraic_schouten(r, m.algebra)
            if alg:
                assert lhs == ac.right_multivector(m, alg)
            else:
                assert lhs.is_zero()


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_cybe_iff_cocycle(seed):
    rng = random.Random(seed)
    C, omega = sampling.random_symplectic_algebra(rng, max_dim=4)
    assert la.check_cybe(la.yang_baxter_r(omega), C)
    # perturb omega off the cocycle space; keep it non-degenerate
    n = C.dim
    for _ in range(10):
        i, j = sorted(rng.sample(range(n), 2))
        grid = [list(row) for row in omega.matrix]
        d = Fraction(rng.choice((-1, 1, 2)))
        grid[i][j] += d
        grid[j][i] -= d
        w = la.TwoCocycle(grid)
        if la.check_nondegenerate(w):
            assert bool(la.check_cocycle(w, C)) == bool(la.check_cybe(la.yang_baxter_r(w), C))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_random_algebras_are_valid(seed):
    C, omega = sampling.random_symplectic_algebra(random.Random(seed))
    assert not _jacobiator_nonzero(C)
    assert not _cocycle_defect(C, omega.matrix)
    rep = la.analyze(C, omega)
    if rep.nilpotent:
        assert rep.solvable and rep.unimodular
    if rep.unimodular:
        assert ac.symplectic_matrix(ac.build_chart(C, omega)).det.is_constant()


def test_nilpotent_triangular_cocycle_space():
    rng = random.Random(9)
    for _ in range(5):
        C = sampling.triangular_nilpotent_algebra(rng, 4)
        assert la.check_jacobi(C) and la.lower_central_series(C).nilpotent
        for W in sampling.cocycle_space(C):
            assert not _cocycle_defect(C, W)


def test_change_basis_preserves_validity():
    rng = random.Random(1)
    e = catalog.load("g1")
    g = [[1, 2, 0, 0], [0, 1, 0, 1], [0, 0, 1, 0], [1, 0, 0, 1]]
    C2, w2 = sampling.change_basis(e.algebra, e.omega, g)
    assert la.check_jacobi(C2) and la.check_cocycle(w2, C2)
    assert la.lower_central_series(C2).nilindex == 3
