"""Built-in examples: four 4-dimensional symplectic Lie groups and aff(R).

Each group entry carries the tables printed for it (matrix A of the Poisson
bracket, its inverse, the Poisson bivector and the symplectic form in the
chart ``(X, Y, Z, T)``), and an oracle pack in group coordinates: the chart
map, its inverse, the left-invariant symplectic form and the invariant
vector fields.  The oracle is evaluated with sympy at exact rational points
and never goes through this package's own polynomial code.

For g2 the printed A has ``A[1][2] = -Y``.  Evaluating
``omega_plus(e1^-, e2^-)`` through the printed chart gives ``+Y``, so the
comparison target for g2 is the oracle-resolved table and the printed
entries are reported as a known discrepancy.

For g3 the oracle chart uses ``X = t - (y^2 + z^2)/2``.  The alternative
``X = t - y*z`` is not compatible with ``e1^- = d/dx - z d/dy + y d/dz``,
while the printed g3 tables agree with the corrected chart.

For g4 the group coordinate ``t > 0`` is replaced by ``s = ln t``; in
``(x, y, z, s)`` every oracle expression is polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import sympy

from . import liealgebra as la
from .affinechart import ChartModel, build_chart, symplectic_form, symplectic_matrix
from .polycore import as_rational

__all__ = [
    "CatalogEntry",
    "OraclePack",
    "GoldenTables",
    "DiffReport",
    "CATALOG_IDS",
    "load",
    "golden_compare",
    "numeric_oracle",
    "ORACLE_TENSORS",
]

CATALOG_IDS = ("g1", "g2", "g3", "g4", "aff2")
ORACLE_TENSORS = ("poisson", "symplectic", "right_fields", "left_fields", "symplectic_form")


@dataclass(frozen=True)
class GoldenTables:
    A: tuple
    A_inv: tuple | None
    pi_plus: str
    omega_plus: str | None


@dataclass(frozen=True)
class OraclePack:
    group_vars: tuple
    chart_map: tuple
    inverse_chart: tuple
    omega_group: tuple
    right_fields: tuple
    left_fields: tuple | None = None


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    title: str
    algebra: la.StructureConstants
    omega: la.TwoCocycle
    chart_names: tuple
    printed: GoldenTables | None
    target: GoldenTables
    oracle: OraclePack | None
    expected: dict
    lattice_notes: str = ""
    notes: tuple = field(default_factory=tuple)

    def model(self) -> ChartModel:
        return build_chart(self.algebra, self.omega, self.chart_names)


def _sc(dim, brackets):
    """Brackets given 1-based as ``{(i, j): {k: c}}``."""
    table = {}
    for (i, j), rhs in brackets.items():
        v = [0] * dim
        for k, c in rhs.items():
            v[k - 1] = c
        if i < j:
            table[(i - 1, j - 1)] = v
        else:
            table[(j - 1, i - 1)] = [-x for x in v]
    return la.StructureConstants(dim, table)


def _omega(dim, pairs):
    """``{(i, j): c}`` 1-based, meaning ``c * e_i^* ^ e_j^*``."""
    grid = [[Fraction(0)] * dim for _ in range(dim)]
    for (i, j), c in pairs.items():
        grid[i - 1][j - 1] += c
        grid[j - 1][i - 1] -= c
    return la.TwoCocycle(grid)


_G1_PRINTED = GoldenTables(
    A=(("0", "1", "0", "-Y"), ("-1", "0", "0", "-Z"), ("0", "0", "0", "-1"), ("Y", "Z", "1", "0")),
    A_inv=(("0", "-1", "Z", "0"), ("1", "0", "-Y", "0"), ("-Z", "Y", "0", "1"), ("0", "0", "-1", "0")),
    pi_plus="∂X^∂Y - Y*∂X^∂T - Z*∂Y^∂T - ∂Z^∂T",
    omega_plus="-dX^dY + Z*dX^dZ - Y*dY^dZ + dZ^dT",
)

_G2_PRINTED = GoldenTables(
    A=(("0", "-Y", "-Z", "1"), ("Y", "0", "1", "0"), ("Z", "-1", "0", "0"), ("-1", "0", "0", "0")),
    A_inv=(("0", "0", "0", "-1"), ("0", "0", "-1", "-Z"), ("0", "1", "0", "Y"), ("1", "Z", "-Y", "0")),
    pi_plus="-Y*∂X^∂Y - Z*∂X^∂Z + ∂X^∂T + ∂Y^∂Z",
    omega_plus="-dX^dT - dY^dZ - Z*dY^dT + Y*dZ^dT",
)

# Oracle-resolved: omega_plus(e1^-, e2^-) = z = +Y through the printed chart.
_G2_TARGET = GoldenTables(
    A=(("0", "Y", "-Z", "1"), ("-Y", "0", "1", "0"), ("Z", "-1", "0", "0"), ("-1", "0", "0", "0")),
    A_inv=(("0", "0", "0", "-1"), ("0", "0", "-1", "-Z"), ("0", "1", "0", "-Y"), ("1", "Z", "Y", "0")),
    pi_plus="Y*∂X^∂Y - Z*∂X^∂Z + ∂X^∂T + ∂Y^∂Z",
    omega_plus="-dX^dT - dY^dZ - Z*dY^dT - Y*dZ^dT",
)

_G3_PRINTED = GoldenTables(
    A=(("0", "Z", "-Y", "1"), ("-Z", "0", "1", "0"), ("Y", "-1", "0", "0"), ("-1", "0", "0", "0")),
    A_inv=(("0", "0", "0", "-1"), ("0", "0", "-1", "-Y"), ("0", "1", "0", "-Z"), ("1", "Y", "Z", "0")),
    pi_plus="Z*∂X^∂Y - Y*∂X^∂Z + ∂X^∂T + ∂Y^∂Z",
    omega_plus="-dX^dT - dY^dZ - Y*dY^dT - Z*dZ^dT",
)

_G4_PRINTED = GoldenTables(
    A=(("0", "Z", "0", "1"), ("-Z", "0", "1", "0"), ("0", "-1", "0", "0"), ("-1", "0", "0", "0")),
    A_inv=(("0", "0", "0", "-1"), ("0", "0", "-1", "0"), ("0", "1", "0", "-Z"), ("1", "0", "Z", "0")),
    pi_plus="Z*∂X^∂Y + ∂X^∂T + ∂Y^∂Z",
    omega_plus="-dX^dT - dY^dZ - Z*dZ^dT",
)

_AFF2_TARGET = GoldenTables(
    A=(("0", "x2 + 1"), ("-x2 - 1", "0")),
    A_inv=None,
    pi_plus="(x2 + 1)*∂x1^∂x2",
    omega_plus=None,
)


def _build():
    entries = {}
    entries["g1"] = CatalogEntry(
        id="g1",
        title="G1: R^4 with [e4, e1] = e2, [e4, e2] = e3 (filiform, nilpotent)",
        algebra=_sc(4, {(4, 1): {2: 1}, (4, 2): {3: 1}}),
        omega=_omega(4, {(4, 3): 1, (1, 2): 1}),
        chart_names=("X", "Y", "Z", "T"),
        printed=_G1_PRINTED,
        target=_G1_PRINTED,
        oracle=OraclePack(
            group_vars=("x", "y", "z", "t"),
            chart_map=("y - t**3/6", "-x + t**2/2", "-t", "-x**2/2 + x*t**2/2 - y*t + z"),
            inverse_chart=("-Y + Z**2/2", "X - Z**3/6", None, "-Z"),
            omega_group=(
                ("0", "1", "0", "-t**2/2"),
                ("-1", "0", "0", "t"),
                ("0", "0", "0", "-1"),
                ("t**2/2", "-t", "1", "0"),
            ),
            right_fields=(("1", "0", "0", "0"), ("0", "1", "0", "0"), ("0", "0", "1", "0"), ("0", "x", "y", "1")),
            left_fields=(
                ("1", "t", "t**2/2", "0"),
                ("0", "1", "t", "0"),
                ("0", "0", "1", "0"),
                ("0", "0", "0", "1"),
            ),
        ),
        expected={"unimodular": True, "nilpotent": True, "nilindex": 3, "solvable": True},
        lattice_notes=(
            "Gamma = {(m, n, k, 2r) : m, n, k, r integers} is a uniform lattice; "
            "G1 admits infinitely many non-isomorphic lattices."
        ),
    )
    entries["g2"] = CatalogEntry(
        id="g2",
        title="G2: R^4 with [e1, e2] = e2, [e1, e3] = -e3 (solvable, not nilpotent)",
        algebra=_sc(4, {(1, 2): {2: 1}, (1, 3): {3: -1}}),
        omega=_omega(4, {(1, 4): 1, (2, 3): 1}),
        chart_names=("X", "Y", "Z", "T"),
        printed=_G2_PRINTED,
        target=_G2_TARGET,
        oracle=OraclePack(
            group_vars=("x", "y", "z", "t"),
            chart_map=("t + y*z", "z", "-y", "-x"),
            inverse_chart=("-T", "-Z", "Y", "X + Z*Y"),
            omega_group=(("0", "0", "0", "1"), ("0", "0", "1", "0"), ("0", "-1", "0", "0"), ("-1", "0", "0", "0")),
            right_fields=(("1", "y", "-z", "0"), ("0", "1", "0", "0"), ("0", "0", "1", "0"), ("0", "0", "0", "1")),
        ),
        expected={"unimodular": True, "nilpotent": False, "nilindex": None, "solvable": True},
        lattice_notes=(
            "G2 = G2' x R; a lattice Gamma1 of G2' gives Gamma1 x Z.  Lattices of G2' are Z^2 "
            "semidirect Z with phi(1) acting as [[0, -1], [1, n]], n >= 3, on Gamma1 cap N."
        ),
        notes=("printed A[1][2] = -Y disagrees with omega_plus(e1^-, e2^-) = +Y; target is oracle-resolved",),
    )
    entries["g3"] = CatalogEntry(
        id="g3",
        title="G3: R^4 with [e1, e2] = e3, [e1, e3] = -e2 (solvable, not nilpotent)",
        algebra=_sc(4, {(1, 2): {3: 1}, (1, 3): {2: -1}}),
        omega=_omega(4, {(1, 4): 1, (2, 3): 1}),
        chart_names=("X", "Y", "Z", "T"),
        printed=_G3_PRINTED,
        target=_G3_PRINTED,
        oracle=OraclePack(
            group_vars=("x", "y", "z", "t"),
            # contracting e1^- with omega_plus gives d(t - (y^2 + z^2)/2); the
            # printed first coordinate t - y*z does not satisfy i_{e1^-} = dX
            chart_map=("t - (y**2 + z**2)/2", "z", "-y", "-x"),
            inverse_chart=("-T", "-Z", "Y", "X + (Y**2 + Z**2)/2"),
            omega_group=(("0", "0", "0", "1"), ("0", "0", "1", "0"), ("0", "-1", "0", "0"), ("-1", "0", "0", "0")),
            right_fields=(("1", "-z", "y", "0"), ("0", "1", "0", "0"), ("0", "0", "1", "0"), ("0", "0", "0", "1")),
        ),
        expected={"unimodular": True, "nilpotent": False, "nilindex": None, "solvable": True},
        lattice_notes=(
            "G3 = G3' x R with G3' the universal cover of the positive motions of the plane. "
            "1 in R with Z^2 generates a lattice isomorphic to Z^3; 1/2 with Z^2 gives a "
            "non-nilpotent lattice containing it with index 2."
        ),
        notes=("printed chart X = t - y*z replaced by X = t - (y^2 + z^2)/2; the printed tables already match it",),
    )
    entries["g4"] = CatalogEntry(
        id="g4",
        title="G4: Heisenberg x R, [e1, e2] = e3 (nilpotent)",
        algebra=_sc(4, {(1, 2): {3: 1}}),
        omega=_omega(4, {(1, 4): 1, (2, 3): 1}),
        chart_names=("X", "Y", "Z", "T"),
        printed=_G4_PRINTED,
        target=_G4_PRINTED,
        oracle=OraclePack(
            group_vars=("x", "y", "z", "s"),
            chart_map=("s - y**2/2", "z", "-y", "-x"),
            inverse_chart=("-T", "-Z", "Y", "X + Z**2/2"),
            omega_group=(("0", "0", "0", "1"), ("0", "0", "1", "0"), ("0", "-1", "0", "0"), ("-1", "0", "0", "0")),
            right_fields=(("1", "0", "y", "0"), ("0", "1", "0", "0"), ("0", "0", "1", "0"), ("0", "0", "0", "1")),
            left_fields=(("1", "0", "0", "0"), ("0", "1", "x", "0"), ("0", "0", "1", "0"), ("0", "0", "0", "1")),
        ),
        expected={"unimodular": True, "nilpotent": True, "nilindex": 2, "solvable": True},
        lattice_notes=(
            "Gamma_{p,q,r} = unipotent matrices [[1, m/p, k/(pqr)], [0, 1, n/q], [0, 0, 1]] is a lattice "
            "in the Heisenberg factor N3, commensurable with Gamma_{1,1,1} (index p^2 q^2 r)."
        ),
    )
    entries["aff2"] = CatalogEntry(
        id="aff2",
        title="aff(R): [e1, e2] = e2, omega = e1*^e2* (not unimodular)",
        algebra=_sc(2, {(1, 2): {2: 1}}),
        omega=_omega(2, {(1, 2): 1}),
        chart_names=("x1", "x2"),
        printed=None,
        target=_AFF2_TARGET,
        oracle=None,
        expected={"unimodular": False, "nilpotent": False, "nilindex": None, "solvable": True},
        lattice_notes="not unimodular, so it has no lattices",
    )
    return entries


_ENTRIES = _build()


def load(entry_id: str) -> CatalogEntry:
    try:
        return _ENTRIES[entry_id.lower()]
    except KeyError:
        raise KeyError(f"unknown catalog id {entry_id!r}; known: {', '.join(CATALOG_IDS)}") from None


# -- golden comparison --------------------------------------------------------

@dataclass(frozen=True)
class DiffReport:
    entry_id: str
    diffs: tuple
    printed_discrepancies: tuple

    @property
    def ok(self) -> bool:
        return not self.diffs


def _matrix_diff(label, computed: Sequence[Sequence[str]], expected: Sequence[Sequence[str]]):
    out = []
    for i, (rc, re_) in enumerate(zip(computed, expected)):
        for j, (c, e) in enumerate(zip(rc, re_)):
            if c != e:
                out.append({"tensor": label, "entry": [i + 1, j + 1], "computed": c, "expected": e})
    return out


def _terms(text: str) -> list[str]:
    # split a canonical tensor string into signed top-level terms
    parts, depth, cur = [], 0, ""
    for ch in text:
        depth += ch == "("
        depth -= ch == ")"
        if depth == 0 and ch in "+-" and cur.strip():
            parts.append(cur.strip())
            cur = ch
        else:
            cur += ch
    parts.append(cur.strip())
    return [p.replace(" ", "") for p in parts if p]


def _tensor_diff(label, computed: str, expected: str):
    if computed == expected:
        return []
    c, e = _terms(computed), _terms(expected)
    return [{
        "tensor": label,
        "computed": computed,
        "expected": expected,
        "only_computed": [t for t in c if t not in e],
        "only_expected": [t for t in e if t not in c],
    }]


def computed_tables(m: ChartModel) -> dict:
    names = m.names
    sm = symplectic_matrix(m)
    return {
        "A": m.P.to_text(names),
        "A_inv": sm.S.to_text(names) if sm.S is not None else None,
        "pi_plus": m.poisson_bivector().to_text(names),
        "omega_plus": symplectic_form(m).to_text(names) if sm.S is not None else None,
    }


def _compare(label_prefix, tables: dict, golden: GoldenTables):
    diffs = []
    diffs += _matrix_diff(f"{label_prefix}A", tables["A"], golden.A)
    if golden.A_inv is not None:
        diffs += _matrix_diff(f"{label_prefix}A_inv", tables["A_inv"] or [], golden.A_inv)
    diffs += _tensor_diff(f"{label_prefix}pi_plus", tables["pi_plus"], golden.pi_plus)
    if golden.omega_plus is not None:
        diffs += _tensor_diff(f"{label_prefix}omega_plus", tables["omega_plus"] or "", golden.omega_plus)
    return diffs


def golden_compare(entry: CatalogEntry, model: ChartModel | None = None) -> DiffReport:
    """Canonical-text comparison of computed tables against the entry target.

    Differences between the target and the printed tables (g2 only) are
    listed separately and do not count as failures.
    """
    model = model or entry.model()
    tables = computed_tables(model)
    diffs = _compare("", tables, entry.target)
    printed = ()
    if entry.printed is not None and entry.printed != entry.target:
        printed = tuple(_compare("", tables, entry.printed))
    return DiffReport(entry.id, tuple(diffs), printed)


# -- numeric oracle ----------------------------------------------------------

@dataclass(frozen=True)
class _Compiled:
    gsyms: tuple
    csyms: tuple
    to_group: tuple
    jac: sympy.Matrix
    omega: sympy.Matrix
    right: sympy.Matrix
    left: sympy.Matrix | None


@lru_cache(maxsize=None)
def _compiled(entry_id: str) -> _Compiled:
    entry = load(entry_id)
    pack = entry.oracle
    if pack is None:
        raise ValueError(f"catalog entry {entry_id} has no oracle pack")
    gsyms = sympy.symbols(pack.group_vars)
    csyms = sympy.symbols(entry.chart_names)
    local = {str(s): s for s in gsyms + csyms}
    chart = sympy.Matrix([sympy.sympify(e, locals=local) for e in pack.chart_map])
    jac = chart.jacobian(sympy.Matrix(gsyms))
    # inverse chart: entries given in chart symbols; a None entry is solved
    # from the chart map itself after the others are known
    inv = [None if e is None else sympy.sympify(e, locals=local) for e in pack.inverse_chart]
    if any(e is None for e in inv):
        k = inv.index(None)
        sub = {gsyms[i]: inv[i] for i in range(len(inv)) if i != k}
        for i, expr in enumerate(chart):
            if expr.has(gsyms[k]):
                sol = sympy.solve(sympy.Eq(expr.subs(sub), csyms[i]), gsyms[k])
                if len(sol) == 1:
                    inv[k] = sympy.expand(sol[0])
                    break
        if inv[k] is None:
            raise ValueError("could not invert the chart map")
    omega = sympy.Matrix([[sympy.sympify(e, locals=local) for e in row] for row in pack.omega_group])
    right = sympy.Matrix([[sympy.sympify(e, locals=local) for e in col] for col in pack.right_fields]).T
    left = None
    if pack.left_fields is not None:
        left = sympy.Matrix([[sympy.sympify(e, locals=local) for e in col] for col in pack.left_fields]).T
    return _Compiled(tuple(gsyms), tuple(csyms), tuple(inv), jac, omega, right, left)


def _to_fraction(v) -> Fraction:
    v = sympy.nsimplify(v) if not isinstance(v, sympy.Rational) else v
    if not isinstance(v, sympy.Rational):
        raise ValueError(f"oracle value {v} is not rational")
    return Fraction(int(v.p), int(v.q))


def group_point(entry: CatalogEntry, chart_point: Sequence) -> list:
    comp = _compiled(entry.id)
    if len(chart_point) != len(comp.csyms):
        raise ValueError(f"chart point needs {len(comp.csyms)} coordinates")
    sub = {s: sympy.Rational(as_rational(v).numerator, as_rational(v).denominator) for s, v in zip(comp.csyms, chart_point)}
    return [sympy.nsimplify(e.subs(sub)) for e in comp.to_group]


def numeric_oracle(entry: CatalogEntry, tensor: str, chart_point: Sequence) -> list[list[Fraction]]:
    """Evaluate a group-coordinate tensor at a chart point, in chart components.

    ``poisson``         ``omega_plus(e_i^-, e_j^-)``
    ``symplectic``      ``alpha_i^-(d/dX_j)`` with ``alpha^-`` the coframe dual to the right fields
    ``right_fields``    column i = chart components of ``e_i^-``
    ``left_fields``     column i = chart components of ``e_i^+`` (g1, g4)
    ``symplectic_form`` ``omega_plus(d/dX_a, d/dX_b)``
    """
    if tensor not in ORACLE_TENSORS:
        raise ValueError(f"unknown oracle tensor {tensor!r}")
    comp = _compiled(entry.id)
    g = group_point(entry, chart_point)
    gsub = dict(zip(comp.gsyms, g))
    J = comp.jac.subs(gsub)
    R = comp.right.subs(gsub)
    W = comp.omega.subs(gsub)
    if tensor == "poisson":
        out = R.T * W * R
    elif tensor == "right_fields":
        out = J * R
    elif tensor == "symplectic":
        out = (J * R).inv()
    elif tensor == "left_fields":
        if comp.left is None:
            raise ValueError(f"{entry.id} has no polynomial left-invariant fields")
        out = J * comp.left.subs(gsub)
    else:
        Jinv = J.inv()
        out = Jinv.T * W * Jinv
    return [[_to_fraction(out[i, j]) for j in range(out.cols)] for i in range(out.rows)]


def export_algebra_file(entry: CatalogEntry) -> dict:
    """The entry as an algebra-file document (1-based indices)."""
    C, om = entry.algebra, entry.omega
    brackets = []
    for (i, j), v in C.brackets.items():
        brackets.append({
            "i": i + 1,
            "j": j + 1,
            "coeffs": {str(k + 1): _rat_str(c) for k, c in enumerate(v) if c},
        })
    omega = []
    n = C.dim
    for i in range(n):
        for j in range(i + 1, n):
            if om.matrix[i][j]:
                omega.append({"i": i + 1, "j": j + 1, "value": _rat_str(om.matrix[i][j])})
    return {"dim": n, "names": list(C.names), "brackets": brackets, "omega": omega}


def _rat_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
