"""The affine-chart model of a symplectic Lie group.

Given structure constants ``C`` and a nondegenerate scalar 2-cocycle
``omega``, the chart is centred at the identity and carries the Poisson
matrix ``P[i][j](x) = sum_k C^k_ij x_k + omega[i][j]``.  Everything else is
read off ``P``: right-invariant fields are its columns, right-invariant
1-forms are the rows of ``S = P^{-1}``, and the symplectic form has
coefficient matrix ``S``.

Sign conventions, fixed by the G1 golden data:

``RIGHT_BRACKET_SIGN``
    ``[u^-, v^-] = RIGHT_BRACKET_SIGN * [u, v]^-`` in the chart.
``HAMILTONIAN_SIGN``
    ``i_{u_i^-} omega_plus = HAMILTONIAN_SIGN * dx_i`` where ``omega_plus`` is
    :func:`symplectic_form` (the form printed with coefficient matrix ``S``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import factorial
from typing import Mapping, Sequence

from . import liealgebra as la
from .polycore import PolyMatrix, Polynomial, as_rational, default_names
from .tensorcalc import (
    PolyForm,
    PolyMultiVector,
    bivector_from_matrix,
    dualize,
    interior_product,
    is_parallel,
    lie_bracket,
    one_form,
    schouten_bracket,
    two_form_from_matrix,
    vector_field,
    wedge,
    wedge_power,
)

RIGHT_BRACKET_SIGN = -1
HAMILTONIAN_SIGN = -1
NON_UNIMODULAR_MARKER = "non-polynomial inverse (non-unimodular)"


class ChartBuildError(ValueError):
    """The algebraic preconditions of :func:`build_chart` failed."""

    def __init__(self, message: str, check: la.CheckResult):
        super().__init__(message)
        self.check = check


class NonUnimodularError(ValueError):
    """A polynomial inverse of ``P`` was required but ``det P`` is not constant."""


@dataclass(frozen=True)
class ChartModel:
    algebra: la.StructureConstants
    omega: la.TwoCocycle
    P: PolyMatrix
    names: tuple

    @property
    def n(self) -> int:
        return self.algebra.dim

    def poisson_bivector(self) -> PolyMultiVector:
        return bivector_from_matrix(self.P)

    def variable(self, k: int) -> Polynomial:
        return Polynomial.variable(self.n, k)


def poisson_matrix(C: la.StructureConstants, omega: la.TwoCocycle) -> PolyMatrix:
    """``P[i][j] = sum_k C^k_ij x_k + omega[i][j]`` with no checks."""
    n = C.dim
    return PolyMatrix(
        [[Polynomial.linear(C.bracket_basis(i, j), omega.matrix[i][j]) for j in range(n)] for i in range(n)],
        n,
    )


def build_chart(C: la.StructureConstants, omega: la.TwoCocycle, names: Sequence[str] | None = None) -> ChartModel:
    if omega.dim != C.dim:
        raise ValueError("omega and the algebra have different dimensions")
    for label, res in (
        ("Jacobi identity", la.check_jacobi(C)),
        ("cocycle condition", la.check_cocycle(omega, C)),
        ("nondegeneracy", la.check_nondegenerate(omega)),
    ):
        if not res:
            raise ChartBuildError(f"{label} failed: {res.detail}", res)
    names = tuple(names) if names is not None else tuple(default_names(C.dim))
    if len(names) != C.dim or len(set(names)) != C.dim:
        raise ValueError("need distinct chart variable names, one per dimension")
    return ChartModel(C, omega, poisson_matrix(C, omega), names)


@dataclass(frozen=True)
class InvariantReport:
    antisymmetric: bool
    identity_value: bool
    derivatives: bool
    degree_dichotomy: bool
    failures: tuple = ()

    @property
    def ok(self):
        return self.antisymmetric and self.identity_value and self.derivatives and self.degree_dichotomy


def chart_invariants(m: ChartModel) -> InvariantReport:
    """P antisymmetric, ``P(0) = omega``, ``d_k P_ij = C^k_ij`` and the
    degree dichotomy: ``deg P_ij == 1`` iff ``[u_i, u_j] != 0``, else constant."""
    n, P, C = m.n, m.P, m.algebra
    fails = []
    anti = P.is_antisymmetric()
    if not anti:
        fails.append("P is not antisymmetric")
    zero = [0] * n
    ident = all(P[i, j].eval(zero) == m.omega.matrix[i][j] for i in range(n) for j in range(n))
    if not ident:
        fails.append("P(0) != omega")
    deriv = True
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if P[i, j].partial(k) != C.c(i, j, k):
                    deriv = False
                    fails.append(f"d{m.names[k]} P[{i + 1},{j + 1}] != C")
    dich = True
    for i in range(n):
        for j in range(n):
            nonzero = any(C.bracket_basis(i, j))
            d = P[i, j].degree()
            if (nonzero and d != 1) or (not nonzero and d > 0):
                dich = False
                fails.append(f"degree of P[{i + 1},{j + 1}] is {d}")
    return InvariantReport(anti, ident, deriv, dich, tuple(fails))


@dataclass(frozen=True)
class SymplecticMatrix:
    det: Polynomial
    adjugate: PolyMatrix
    S: PolyMatrix | None

    @property
    def polynomial(self) -> bool:
        return self.S is not None

    @property
    def marker(self) -> str | None:
        return None if self.S is not None else NON_UNIMODULAR_MARKER


def symplectic_matrix(m: ChartModel) -> SymplecticMatrix:
    """``S = adj(P) / det P`` when ``det P`` is a nonzero constant.

    For non-constant determinants the adjugate and determinant come back
    separately with ``S = None`` and :attr:`SymplecticMatrix.marker` set.
    """
    det, adj = m.P.det_adjugate()
    if det.is_zero():
        raise ValueError("det P vanishes identically; omega is degenerate")
    if det.is_constant():
        return SymplecticMatrix(det, adj, adj.scale(1 / det.constant_term()))
    return SymplecticMatrix(det, adj, None)


def _require_S(m: ChartModel) -> PolyMatrix:
    sm = symplectic_matrix(m)
    if sm.S is None:
        raise NonUnimodularError(f"{NON_UNIMODULAR_MARKER}: det P = {sm.det.to_text(m.names)}")
    return sm.S


def symplectic_form(m: ChartModel) -> PolyForm:
    return two_form_from_matrix(_require_S(m))


def hamiltonian_form(m: ChartModel) -> PolyForm:
    """The inverse of the bivector ``P`` (coefficient matrix ``S^T``).

    Equal to ``-symplectic_form(m)``; contracting it with ``u_i^-`` gives
    ``+dx_i`` exactly, the form used by :func:`tensorcalc.dualize`.
    """
    return two_form_from_matrix(_require_S(m).transpose())


def right_invariant_field(m: ChartModel, u: Sequence) -> PolyMultiVector:
    """``u^- = sum_i u_i * (column i of P)``."""
    if len(u) != m.n:
        raise ValueError(f"vector has {len(u)} entries, expected {m.n}")
    u = [as_rational(c) for c in u]
    comps = []
    for row in range(m.n):
        acc = Polynomial.zero(m.n)
        for i, ui in enumerate(u):
            if ui:
                acc = acc + m.P[row, i] * ui
        comps.append(acc)
    return vector_field(comps)


def basis_field(m: ChartModel, i: int) -> PolyMultiVector:
    return vector_field(m.P.col(i))


def right_invariant_form(m: ChartModel, alpha: Sequence) -> PolyForm:
    """``alpha^- = sum_i alpha_i * (row i of S)``; needs polynomial ``S``."""
    if len(alpha) != m.n:
        raise ValueError(f"covector has {len(alpha)} entries, expected {m.n}")
    S = _require_S(m)
    alpha = [as_rational(c) for c in alpha]
    comps = []
    for col in range(m.n):
        acc = Polynomial.zero(m.n)
        for i, ai in enumerate(alpha):
            if ai:
                acc = acc + S[i, col] * ai
        comps.append(acc)
    return one_form(comps)


def extend_kvector(fields: Sequence[PolyMultiVector], w: Mapping, n: int) -> PolyMultiVector:
    """Linear extension of ``u_i -> fields[i]`` to wedges: ``sum w_I fields_I``."""
    arities = {len(k) for k in w}
    if len(arities) > 1:
        raise ValueError("mixed arities in k-vector")
    k = arities.pop() if arities else None
    if k is None:
        raise ValueError("empty k-vector; arity unknown")
    if not 1 <= k <= n:
        raise ValueError(f"arity {k} out of range 1..{n}")
    total = PolyMultiVector.zero(n, k)
    for idx, coeff in sorted(w.items()):
        coeff = as_rational(coeff)
        if not coeff:
            continue
        if list(idx) != sorted(set(idx)) or any(not 0 <= i < n for i in idx):
            raise ValueError(f"index tuple {idx} must be strictly increasing and in range")
        term = fields[idx[0]]
        for i in idx[1:]:
            term = wedge(term, fields[i])
        total = total + term * coeff
    return total


def right_multivector(m: ChartModel, w: Mapping) -> PolyMultiVector:
    fields = [basis_field(m, i) for i in range(m.n)]
    return extend_kvector(fields, w, m.n)


def poisson_bracket(m: ChartModel, f: Polynomial, g: Polynomial) -> Polynomial:
    if f.nvars != m.n or g.nvars != m.n:
        raise ValueError("polynomials must live in the chart variables")
    gf, gg = f.gradient(), g.gradient()
    acc = Polynomial.zero(m.n)
    for i in range(m.n):
        if gf[i].is_zero():
            continue
        for j in range(m.n):
            if gg[j].is_zero() or m.P[i, j].is_zero():
                continue
            acc = acc + m.P[i, j] * gf[i] * gg[j]
    return acc


def poisson_check(m: ChartModel) -> PolyMultiVector:
    """``[P, P]``; the zero trivector for every valid model."""
    pi = m.poisson_bivector()
    return schouten_bracket(pi, pi)


@dataclass(frozen=True)
class VolumeReport:
    det: Polynomial
    top_coefficient_numerator: Polynomial
    parallel: bool
    det_constant: bool
    volume_constant: bool
    pfaffian_identity: bool

    @property
    def consistent(self) -> bool:
        return self.det_constant == self.volume_constant == self.parallel and self.pfaffian_identity


def volume_check(m: ChartModel) -> VolumeReport:
    """Parallelism of the volume form ``^{n/2} omega_plus``.

    The top coefficient is computed from the adjugate form
    ``sum adj[i][j] dx_i ^ dx_j = det(P) * omega_plus`` so that non-unimodular
    models can be handled without rational functions: with ``c'`` the top
    coefficient of the adjugate form's ``n/2``-th wedge power, the volume
    coefficient is ``c' / det^{n/2}``, and the squared-volume identity reads
    ``c'^2 * det = ((n/2)!)^2 * det^n``.
    """
    n = m.n
    if n % 2:
        raise ValueError("volume form needs even dimension")
    half = n // 2
    det, adj = m.P.det_adjugate()
    top = wedge_power(two_form_from_matrix(adj), half)
    c_num = top.component(tuple(range(n)))
    det_pow = det ** half
    pfaff = c_num * c_num * det == det_pow * det_pow * (factorial(half) ** 2)
    zero = [0] * n
    d0 = det_pow.eval(zero)
    # c_num / det^half is constant iff c_num == (c_num(0)/d0) * det^half
    volume_constant = c_num == det_pow * (c_num.eval(zero) / d0)
    det_constant = det.is_constant()
    return VolumeReport(det, c_num, det_constant and volume_constant, det_constant, volume_constant, pfaff)


def volume_form(m: ChartModel) -> PolyForm:
    return wedge_power(symplectic_form(m), m.n // 2)


def hamiltonian_coordinates_check(m: ChartModel) -> bool:
    """``i_{u_i^-} omega_plus == HAMILTONIAN_SIGN * dx_i`` for every basis vector."""
    om = symplectic_form(m)
    for i in range(m.n):
        lhs = interior_product(basis_field(m, i), om)
        dx = PolyForm(m.n, 1, {(i,): Polynomial.constant(m.n, HAMILTONIAN_SIGN)})
        if lhs != dx:
            return False
    return True


def frame_fields(m: ChartModel) -> list[PolyMultiVector]:
    """``-dualize(alpha_i^-)`` for the dual basis; constant coordinate fields."""
    S = _require_S(m)
    out = []
    for i in range(m.n):
        alpha = right_invariant_form(m, [int(i == k) for k in range(m.n)])
        out.append(-dualize(alpha, S, m.P))
    return out


def commuting_frame_check(m: ChartModel) -> la.CheckResult:
    fields = frame_fields(m)
    for i, X in enumerate(fields):
        if not is_parallel(X):
            return la.CheckResult(False, (i,), f"frame field {i + 1} is not constant")
    for i, j in combinations(range(m.n), 2):
        if not lie_bracket(fields[i], fields[j]).is_zero():
            return la.CheckResult(False, (i, j), f"frame fields {i + 1}, {j + 1} do not commute")
    return la.CheckResult(True)


def bracket_sign_check(m: ChartModel, u: Sequence, v: Sequence) -> bool:
    """``[u^-, v^-] == RIGHT_BRACKET_SIGN * [u, v]^-``."""
    lhs = lie_bracket(right_invariant_field(m, u), right_invariant_field(m, v))
    rhs = right_invariant_field(m, m.algebra.bracket(u, v)) * RIGHT_BRACKET_SIGN
    return lhs == rhs


def frame_derivatives(m: ChartModel, f: Polynomial) -> list[Polynomial]:
    """``(u_1^-(f), ..., u_n^-(f))``."""
    grad = f.gradient()
    return [
        sum((m.P[j, i] * grad[j] for j in range(m.n) if grad[j].terms and m.P[j, i].terms), Polynomial.zero(m.n))
        for i in range(m.n)
    ]


def gradient_from_frame(m: ChartModel, derivs: Sequence[Polynomial]) -> list[Polynomial]:
    """Recover ``grad f`` from the frame derivatives: ``grad f = S^T (u_i^-(f))``."""
    S = _require_S(m)
    return S.transpose().apply(list(derivs))


def degree_table(m: ChartModel, max_arity: int | None = None) -> list[dict]:
    """Rows ``{bound, value, limit, ok}`` for the polynomial degree bounds."""
    n = m.n
    rows = []

    def add(label, value, limit):
        rows.append({"bound": label, "degree": value, "limit": limit, "ok": value <= limit})

    add("Poisson matrix P", m.P.degree(), 1)
    top = n if max_arity is None else min(n, max_arity)
    fields = [basis_field(m, i) for i in range(n)]
    for k in range(1, top + 1):
        worst = -1
        for idx in combinations(range(n), k):
            worst = max(worst, extend_kvector(fields, {idx: 1}, n).degree())
        add(f"right {k}-vectors", worst, k)
    sm = symplectic_matrix(m)
    if sm.S is not None:
        add("symplectic matrix S", sm.S.degree(), n - 1)
    return rows
