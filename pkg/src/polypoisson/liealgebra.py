"""Structure constants, scalar 2-cocycles and the algebraic checks on them.

Indices are 0-based here.  ``C.c(i, j, k)`` is the coefficient of ``e_k`` in
``[e_i, e_j]``.  Constant k-vectors on the algebra are plain dicts from
strictly increasing index tuples to Fractions, e.g. ``{(0, 1): 1}`` for
``e1 ^ e2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from . import linalg
from .polycore import as_rational

__all__ = [
    "StructureConstants",
    "TwoCocycle",
    "CheckResult",
    "SeriesReport",
    "AlgebraReport",
    "check_jacobi",
    "check_cocycle",
    "check_nondegenerate",
    "check_unimodular",
    "lower_central_series",
    "yang_baxter_r",
    "sharp_matrix",
    "algebraic_schouten",
    "check_cybe",
    "analyze",
]


class StructureConstants:
    """A finite-dimensional algebra given by ``[e_i, e_j]`` for ``i < j``.

    ``brackets`` maps ``(i, j)`` with ``i < j`` to a length-``dim`` sequence.
    Supplying a pair with ``i >= j`` is an error; antisymmetry is implied.
    """

    def __init__(self, dim: int, brackets: Mapping | None = None, names: Sequence[str] | None = None):
        self.dim = dim
        self.names = list(names) if names is not None else [f"e{i + 1}" for i in range(dim)]
        if len(self.names) != dim:
            raise ValueError("one name per basis vector required")
        table = {}
        for (i, j), coeffs in (brackets or {}).items():
            if not (0 <= i < j < dim):
                raise ValueError(f"bracket key ({i}, {j}) must satisfy 0 <= i < j < {dim}")
            coeffs = tuple(as_rational(c) for c in coeffs)
            if len(coeffs) != dim:
                raise ValueError(f"bracket ({i}, {j}) needs {dim} coefficients")
            if any(coeffs):
                table[(i, j)] = coeffs
        self.brackets = dict(sorted(table.items()))
        zero = (Fraction(0),) * dim
        self._dense = [[zero] * dim for _ in range(dim)]
        for (i, j), v in self.brackets.items():
            self._dense[i][j] = v
            self._dense[j][i] = tuple(-x for x in v)

    @classmethod
    def from_dense(cls, table, names=None):
        """From a full ``table[i][j][k]`` (only ``i < j`` entries are read)."""
        dim = len(table)
        return cls(dim, {(i, j): table[i][j] for i in range(dim) for j in range(i + 1, dim)}, names)

    def c(self, i: int, j: int, k: int) -> Fraction:
        return self._dense[i][j][k]

    def bracket_basis(self, i: int, j: int) -> tuple:
        return self._dense[i][j]

    def bracket(self, u: Sequence, v: Sequence) -> list[Fraction]:
        out = [Fraction(0)] * self.dim
        for i, ui in enumerate(u):
            if not ui:
                continue
            for j, vj in enumerate(v):
                if not vj:
                    continue
                for k, c in enumerate(self._dense[i][j]):
                    if c:
                        out[k] += ui * vj * c
        return out

    def ad(self, i: int) -> list[list[Fraction]]:
        """Matrix of ``ad_{e_i}``: column j is ``[e_i, e_j]``."""
        return [[self._dense[i][j][k] for j in range(self.dim)] for k in range(self.dim)]

    def dense(self):
        return [[list(v) for v in row] for row in self._dense]

    def with_constant(self, i: int, j: int, k: int, value) -> "StructureConstants":
        """Copy with ``C^k_ij`` replaced (antisymmetric partner follows)."""
        if i == j:
            raise ValueError("i and j must differ")
        sign = 1
        if i > j:
            i, j, sign = j, i, -1
        table = {key: list(v) for key, v in self.brackets.items()}
        row = table.setdefault((i, j), [Fraction(0)] * self.dim)
        row[k] = as_rational(value) * sign
        return StructureConstants(self.dim, table, self.names)

    def is_abelian(self) -> bool:
        return not self.brackets

    def __eq__(self, other):
        return isinstance(other, StructureConstants) and (self.dim, self.brackets) == (other.dim, other.brackets)

    def __repr__(self):
        return f"StructureConstants(dim={self.dim}, brackets={self.describe()!r})"

    def describe(self) -> str:
        parts = []
        for (i, j), v in self.brackets.items():
            rhs = ""
            for k, c in enumerate(v):
                if not c:
                    continue
                mag = "" if abs(c) == 1 else f"{abs(c)}*"
                if rhs:
                    rhs += " - " if c < 0 else " + "
                elif c < 0:
                    rhs = "-"
                rhs += mag + self.names[k]
            parts.append(f"[{self.names[i]}, {self.names[j]}] = {rhs}")
        return "; ".join(parts) or "abelian"


@dataclass(frozen=True)
class TwoCocycle:
    """Antisymmetric bilinear form given by its Gram matrix ``omega[i][j]``."""

    matrix: tuple

    def __init__(self, matrix):
        grid = tuple(tuple(as_rational(v) for v in row) for row in matrix)
        n = len(grid)
        if any(len(r) != n for r in grid):
            raise ValueError("omega must be square")
        for i in range(n):
            for j in range(n):
                if grid[i][j] != -grid[j][i]:
                    raise ValueError(f"omega is not antisymmetric at ({i + 1}, {j + 1})")
        object.__setattr__(self, "matrix", grid)

    @classmethod
    def from_pairs(cls, dim: int, pairs: Mapping):
        """``{(i, j): value}`` with ``i < j``, e.g. ``{(0, 1): 1}`` for e1*^e2*."""
        grid = [[Fraction(0)] * dim for _ in range(dim)]
        for (i, j), v in pairs.items():
            if not 0 <= i < j < dim:
                raise ValueError(f"omega key ({i}, {j}) must satisfy i < j")
            grid[i][j] = as_rational(v)
            grid[j][i] = -as_rational(v)
        return cls(grid)

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def __call__(self, u, v) -> Fraction:
        return sum((u[i] * self.matrix[i][j] * v[j] for i in range(self.dim) for j in range(self.dim) if u[i] and v[j]), Fraction(0))

    def rows(self) -> list[list[Fraction]]:
        return [list(r) for r in self.matrix]


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    witness: tuple | None = None
    detail: str = ""

    def __bool__(self):
        return self.ok


def check_jacobi(C: StructureConstants) -> CheckResult:
    """Jacobiator on every basis triple; witness ``(i, j, k, l)`` on failure."""
    n = C.dim
    for i, j, k in combinations(range(n), 3):
        for l in range(n):
            total = Fraction(0)
            for m in range(n):
                total += (
                    C.c(i, j, m) * C.c(m, k, l)
                    + C.c(j, k, m) * C.c(m, i, l)
                    + C.c(k, i, m) * C.c(m, j, l)
                )
            if total:
                return CheckResult(
                    False,
                    (i, j, k, l),
                    f"Jacobi fails for ({C.names[i]}, {C.names[j]}, {C.names[k]}): "
                    f"coefficient of {C.names[l]} is {total}",
                )
    return CheckResult(True)


def check_cocycle(omega: TwoCocycle, C: StructureConstants) -> CheckResult:
    """``omega([u,v],w) + omega([v,w],u) + omega([w,u],v) = 0`` on basis triples."""
    if omega.dim != C.dim:
        raise ValueError("omega and the algebra have different dimensions")
    n = C.dim
    W = omega.matrix
    for i, j, k in combinations(range(n), 3):
        total = Fraction(0)
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            br = C.bracket_basis(a, b)
            total += sum((br[m] * W[m][c] for m in range(n) if br[m]), Fraction(0))
        if total:
            return CheckResult(
                False,
                (i, j, k),
                f"cocycle condition fails on ({C.names[i]}, {C.names[j]}, {C.names[k]}): {total}",
            )
    return CheckResult(True)


def check_nondegenerate(omega: TwoCocycle) -> CheckResult:
    d = linalg.det(omega.matrix)
    if d:
        return CheckResult(True, detail=f"det = {d}")
    null = linalg.nullspace(omega.rows(), omega.dim)
    return CheckResult(False, tuple(null[0]), "omega is degenerate; witness spans its kernel")


def check_unimodular(C: StructureConstants) -> CheckResult:
    """``trace(ad_{e_i}) = sum_k C^k_ik`` must vanish for every i."""
    for i in range(C.dim):
        tr = sum((C.c(i, k, k) for k in range(C.dim)), Fraction(0))
        if tr:
            return CheckResult(False, (i,), f"trace(ad {C.names[i]}) = {tr}")
    return CheckResult(True)


@dataclass(frozen=True)
class SeriesReport:
    nilpotent: bool
    nilindex: int | None
    lower_central_dims: tuple
    solvable: bool
    derived_dims: tuple
    witness: tuple | None = None
    detail: str = ""


def _bracket_span(C: StructureConstants, A, B):
    vecs = [C.bracket(a, b) for a in A for b in B]
    return linalg.span_basis(vecs)


def lower_central_series(C: StructureConstants) -> SeriesReport:
    """Lower central and derived series by exact row reduction.

    ``nilindex`` is the number of bracket steps ``g -> [g, g] -> ...`` needed
    to reach 0 (so an abelian algebra has nilindex 1).  When the series
    stalls, the witness is a basis of the stable nonzero term.
    """
    n = C.dim
    full = linalg.identity(n)
    lower = [full]
    dims = [n]
    current = full
    while current:
        nxt = _bracket_span(C, full, current)
        if len(nxt) == len(current):
            break
        current = nxt
        lower.append(current)
        dims.append(len(current))
    nilpotent = not current
    nilindex = len(dims) - 1 if nilpotent else None

    derived = full
    ddims = [n]
    while derived:
        nxt = _bracket_span(C, derived, derived)
        if len(nxt) == len(derived):
            break
        derived = nxt
        ddims.append(len(derived))
    solvable = not derived

    if nilpotent:
        return SeriesReport(True, nilindex, tuple(dims), solvable, tuple(ddims))
    witness = tuple(tuple(v) for v in current)
    stable = ", ".join(
        "(" + ", ".join(str(x) for x in v) + ")" for v in current
    )
    return SeriesReport(
        False,
        None,
        tuple(dims),
        solvable,
        tuple(ddims),
        witness,
        f"lower central series stabilizes at dimension {len(current)}: span{{{stable}}}",
    )


def yang_baxter_r(omega: TwoCocycle) -> dict:
    """Constant bivector r whose sharp map ``alpha -> r(alpha, .)`` is ``omega^{-1}``.

    Components are ``r[(i, j)] = r(alpha_i, alpha_j) = (omega^{-1})[j][i]``.
    """
    try:
        inv = linalg.inverse(omega.matrix)
    except ZeroDivisionError:
        raise ValueError("omega is degenerate; no r-matrix") from None
    n = omega.dim
    return {(i, j): inv[j][i] for i in range(n) for j in range(i + 1, n) if inv[j][i]}


def kvector_component(w: Mapping, idx: Sequence[int]) -> Fraction:
    idx = list(idx)
    if len(set(idx)) != len(idx):
        return Fraction(0)
    sign = 1
    for a in range(len(idx)):
        for b in range(a + 1, len(idx)):
            if idx[a] > idx[b]:
                sign = -sign
    return sign * Fraction(w.get(tuple(sorted(idx)), 0))


def bivector_matrix(w: Mapping, n: int) -> list[list[Fraction]]:
    """``M[i][j] = w(alpha_i, alpha_j)``."""
    return [[kvector_component(w, (i, j)) for j in range(n)] for i in range(n)]


def sharp_matrix(w: Mapping, n: int) -> list[list[Fraction]]:
    """Matrix of ``alpha -> w(alpha, .)``; column j is ``w(alpha_j, .)``."""
    return linalg.transpose(bivector_matrix(w, n))


def algebraic_schouten(r: Mapping, C: StructureConstants) -> dict:
    """``[r, r]`` in the exterior cube of the algebra.

    Component ``(i, j, k)`` is ``2 * sum_{a,b}`` over cyclic ``(i, j, k)`` of
    ``r[i,a] r[j,b] C^k_ab``.  With this normalization the chart extensions
    satisfy ``[r^-, r^-] = ([r, r])^-`` and ``[r^+, r^+] = -([r, r])^+``, so
    ``[r, r] = 0`` exactly when ``r^+`` (equivalently ``r^-``) is Poisson.
    """
    n = C.dim
    R = bivector_matrix(r, n)
    out = {}
    for i, j, k in combinations(range(n), 3):
        total = Fraction(0)
        for x, y, z in ((i, j, k), (j, k, i), (k, i, j)):
            for a in range(n):
                if not R[x][a]:
                    continue
                for b in range(n):
                    if R[y][b]:
                        total += R[x][a] * R[y][b] * C.c(a, b, z)
        if total:
            out[(i, j, k)] = 2 * total
    return out


def check_cybe(r: Mapping, C: StructureConstants) -> CheckResult:
    br = algebraic_schouten(r, C)
    if not br:
        return CheckResult(True)
    key = min(br)
    return CheckResult(False, key, f"[r, r] has component {br[key]} at {tuple(C.names[k] for k in key)}")


@dataclass(frozen=True)
class AlgebraReport:
    jacobi: CheckResult
    cocycle: CheckResult
    nondegenerate: CheckResult
    unimodular: CheckResult
    series: SeriesReport | None
    cybe: CheckResult | None = None
    notes: tuple = field(default_factory=tuple)

    @property
    def structural_ok(self) -> bool:
        return bool(self.jacobi and self.cocycle and self.nondegenerate)

    @property
    def nilpotent(self) -> bool:
        return bool(self.series and self.series.nilpotent)

    @property
    def solvable(self) -> bool:
        return bool(self.series and self.series.solvable)


def analyze(C: StructureConstants, omega: TwoCocycle) -> AlgebraReport:
    jac = check_jacobi(C)
    coc = check_cocycle(omega, C)
    nd = check_nondegenerate(omega)
    uni = check_unimodular(C)
    series = lower_central_series(C) if jac else None
    cybe = check_cybe(yang_baxter_r(omega), C) if nd else None
    return AlgebraReport(jac, coc, nd, uni, series, cybe)
