"""Random symplectic Lie algebras ``(C, omega)`` for property tests.

Three constructions, all exact:

* nilpotent subalgebras of strictly upper-triangular matrices, generated by
  a few random integer matrices and closed under commutators;
* catalog algebras (and direct sums with aff(R)) seen through a random
  integral change of basis;
* direct sums of the above with the sum cocycle.

In the first case the cocycle is a random integer point of the cocycle
space, retried until it is non-degenerate.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from . import linalg
from . import liealgebra as la

__all__ = [
    "cocycle_space",
    "random_cocycle",
    "triangular_nilpotent_algebra",
    "change_basis",
    "direct_sum",
    "random_symplectic_algebra",
    "random_vector",
]


def cocycle_space(C: la.StructureConstants) -> list[list[list[Fraction]]]:
    """Basis of the scalar 2-cocycles, as antisymmetric matrices."""
    n = C.dim
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    col = {p: t for t, p in enumerate(pairs)}

    def put(row, a, b, coeff):
        if a == b or not coeff:
            return
        if a < b:
            row[col[(a, b)]] += coeff
        else:
            row[col[(b, a)]] -= coeff

    rows = []
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                row = [Fraction(0)] * len(pairs)
                for (x, y, z) in ((i, j, k), (j, k, i), (k, i, j)):
                    for c in range(n):
                        put(row, c, z, C.c(x, y, c))
                if any(row):
                    rows.append(row)
    basis = []
    for v in linalg.nullspace(rows, len(pairs)):
        grid = [[Fraction(0)] * n for _ in range(n)]
        for (a, b), t in col.items():
            grid[a][b], grid[b][a] = v[t], -v[t]
        basis.append(grid)
    return basis


def random_cocycle(C: la.StructureConstants, rng: random.Random, tries: int = 40, spread: int = 3) -> la.TwoCocycle | None:
    """A random non-degenerate cocycle with small integer weights, or None."""
    n = C.dim
    if n % 2:
        return None
    basis = cocycle_space(C)
    if not basis:
        return None
    for _ in range(tries):
        w = [rng.randint(-spread, spread) for _ in basis]
        grid = [[sum((c * b[i][j] for c, b in zip(w, basis)), Fraction(0)) for j in range(n)] for i in range(n)]
        if linalg.det(grid):
            return la.TwoCocycle(grid)
    return None


def _flat(m):
    return [x for row in m for x in row]


def _commutator(a, b):
    ab = linalg.matmul(a, b)
    ba = linalg.matmul(b, a)
    return [[x - y for x, y in zip(r, s)] for r, s in zip(ab, ba)]


def triangular_nilpotent_algebra(rng: random.Random, size: int = 4, generators: int = 2) -> la.StructureConstants:
    """Lie algebra generated by random strictly upper-triangular ``size x size`` matrices."""
    gens = []
    for _ in range(generators):
        m = [[Fraction(rng.choice((-1, 0, 0, 1, 2)) if j > i else 0) for j in range(size)] for i in range(size)]
        gens.append(m)
    basis = linalg.span_basis([_flat(g) for g in gens])
    while True:
        mats = [[row[r * size:(r + 1) * size] for r in range(size)] for row in basis]
        new = [_flat(_commutator(a, b)) for a in mats for b in mats]
        grown = linalg.span_basis(basis + new)
        if len(grown) == len(basis):
            break
        basis = grown
    _, pivots = linalg.rref(basis)
    mats = [[row[r * size:(r + 1) * size] for r in range(size)] for row in basis]
    n = len(basis)
    table = {}
    for i in range(n):
        for j in range(i + 1, n):
            v = _flat(_commutator(mats[i], mats[j]))
            # rref basis: coordinates are read off at the pivot columns
            table[(i, j)] = [v[p] for p in pivots]
    return la.StructureConstants(n, table)


def _unimodular_integer_matrix(rng: random.Random, n: int, steps: int = 6):
    g = linalg.identity(n)
    for _ in range(steps):
        a, b = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if a == b:
            continue
        f = rng.choice((-2, -1, 1, 2))
        g = [[g[r][c] + (f * g[r][b] if c == a else 0) for c in range(n)] for r in range(n)]
    perm = list(range(n))
    rng.shuffle(perm)
    return [[g[r][perm[c]] * (rng.choice((1, -1)) if r == 0 else 1) for c in range(n)] for r in range(n)]


def change_basis(C: la.StructureConstants, omega: la.TwoCocycle, g: Sequence[Sequence]):
    """Structure constants and cocycle in the basis ``f_i = sum_a g[a][i] e_a``."""
    n = C.dim
    g = linalg.to_fractions(g)
    ginv = linalg.inverse(g)
    cols = [[g[a][i] for a in range(n)] for i in range(n)]
    table = {}
    for i in range(n):
        for j in range(i + 1, n):
            table[(i, j)] = linalg.matvec(ginv, C.bracket(cols[i], cols[j]))
    W = linalg.matmul(linalg.matmul(linalg.transpose(g), omega.rows()), g)
    return la.StructureConstants(n, table), la.TwoCocycle(W)


def direct_sum(parts: Sequence[tuple]):
    """Direct sum of ``(C, omega)`` pairs with the block cocycle."""
    n = sum(C.dim for C, _ in parts)
    table = {}
    grid = [[Fraction(0)] * n for _ in range(n)]
    off = 0
    for C, om in parts:
        d = C.dim
        for (i, j), v in C.brackets.items():
            vec = [Fraction(0)] * n
            vec[off:off + d] = v
            table[(off + i, off + j)] = vec
        for i in range(d):
            for j in range(d):
                grid[off + i][off + j] = om.matrix[i][j]
        off += d
    return la.StructureConstants(n, table), la.TwoCocycle(grid)


def _catalog_pair(rng: random.Random, ids: Sequence[str]):
    from . import catalog

    e = catalog.load(rng.choice(list(ids)))
    return e.algebra, e.omega


def random_symplectic_algebra(rng: random.Random, max_dim: int = 6, nilpotent_only: bool = False):
    """A random ``(C, omega)`` passing jacobi, cocycle and non-degeneracy."""
    while True:
        kind = "triangular" if nilpotent_only else rng.choice(("triangular", "catalog", "sum"))
        if kind == "triangular":
            size = rng.choice((3, 4, 5))
            C = triangular_nilpotent_algebra(rng, size, rng.choice((2, 2, 3)))
            if C.dim == 0 or C.dim > max_dim or C.dim % 2:
                continue
            omega = random_cocycle(C, rng)
            if omega is None:
                continue
        elif kind == "catalog":
            C, omega = _catalog_pair(rng, ("g1", "g2", "g3", "g4", "aff2"))
        else:
            parts = [_catalog_pair(rng, ("aff2",))]
            budget = max_dim - 2
            if budget >= 4 and rng.random() < 0.5:
                parts.append(_catalog_pair(rng, ("g1", "g2", "g3", "g4")))
            elif budget >= 2:
                parts.append(_catalog_pair(rng, ("aff2",)))
            rng.shuffle(parts)
            C, omega = direct_sum(parts)
        if C.dim > max_dim:
            continue
        C, omega = change_basis(C, omega, _unimodular_integer_matrix(rng, C.dim))
        if la.check_jacobi(C) and la.check_cocycle(omega, C) and la.check_nondegenerate(omega):
            return C, omega


def random_vector(rng: random.Random, n: int, spread: int = 3) -> list[Fraction]:
    while True:
        v = [Fraction(rng.randint(-spread, spread)) for _ in range(n)]
        if any(v):
            return v
