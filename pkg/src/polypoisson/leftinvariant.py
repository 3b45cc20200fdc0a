"""Left-invariant polynomial tensors on nilpotent symplectic Lie groups.

A left-invariant field ``u^+ = sum_i f_i d_i`` commutes with every
right-invariant field.  In the chart this is the first-order system

    u_j^-(f_i) = RIGHT_BRACKET_SIGN * sum_k C^k_ji f_k,    f_i(0) = omega(u_i, u)

which :func:`left_invariant_field` solves one homogeneous degree at a time.
Writing ``P = omega + L(x)`` with ``L`` linear, the degree-``d`` part of the
system fixes the gradient of the degree-``d+1`` part of ``f`` through the
constant matrix ``omega``; Euler's identity then integrates it.  On a
nilpotent algebra the right-hand side dies after finitely many steps.

Termination is residual-driven.  The nilindex bounds the length of nonzero
chains of frame derivatives of ``f``, not its degree in the chart: a
six-dimensional algebra with lower central dimensions (6, 4, 3, 1, 0) has
nilindex 4 but left fields of degree 6.  The degree cap is therefore only a
runaway guard, and each solution records whether the nilindex bound held.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from . import linalg
from . import liealgebra as la
from .affinechart import (
    RIGHT_BRACKET_SIGN,
    ChartModel,
    basis_field,
    extend_kvector,
    right_multivector,
    symplectic_matrix,
)
from .polycore import Polynomial, as_rational
from .tensorcalc import (
    PolyForm,
    PolyMultiVector,
    dualize,
    lie_bracket,
    lie_derivative,
    schouten_bracket,
    vector_field,
)

__all__ = [
    "NotNilpotentError",
    "SolverError",
    "LeftFieldSolution",
    "left_invariant_field",
    "left_multivector",
    "lie_poisson_difference",
    "parallel_transport_identity_check",
    "LEFT_BRACKET_SIGN",
]

LEFT_BRACKET_SIGN = 1
# runaway guard: cap = CAP_PER_DIMENSION * n (observed degrees stay <= n)
CAP_PER_DIMENSION = 4


class NotNilpotentError(ValueError):
    def __init__(self, report: la.SeriesReport):
        super().__init__(f"algebra is not nilpotent: {report.detail}")
        self.report = report


class SolverError(RuntimeError):
    """Internal inconsistency in the graded solver (a convention bug)."""


@dataclass(frozen=True)
class LeftFieldSolution:
    u: tuple
    components: tuple
    achieved_degree: int
    nilindex: int | None = None

    @property
    def within_nilindex(self) -> bool:
        return self.nilindex is not None and self.achieved_degree <= self.nilindex

    @property
    def field(self) -> PolyMultiVector:
        return vector_field(list(self.components))


def _require_nilpotent(m: ChartModel) -> la.SeriesReport:
    rep = la.lower_central_series(m.algebra)
    if not rep.nilpotent:
        raise NotNilpotentError(rep)
    return rep


def _frame_rhs(m: ChartModel, f: Sequence[Polynomial], f_prev: Sequence[Polynomial] | None):
    """Degree-d right-hand side ``R[i][j]`` for the next homogeneous layer.

    ``R[i][j] = eps * sum_k C^k_ji f_k - sum_l L[l][j] d_l f_i`` where ``f`` is
    the degree-d layer.
    """
    n, C = m.n, m.algebra
    R = [[Polynomial.zero(n) for _ in range(n)] for _ in range(n)]
    grads = [fi.gradient() for fi in f]
    lin = [[m.P[l, j] - m.P[l, j].constant_term() for j in range(n)] for l in range(n)]
    for i in range(n):
        for j in range(n):
            acc = Polynomial.zero(n)
            for k in range(n):
                c = C.c(j, i, k)
                if c and f[k].terms:
                    acc = acc + f[k] * (c * RIGHT_BRACKET_SIGN)
            for l in range(n):
                if lin[l][j].terms and grads[i][l].terms:
                    acc = acc - lin[l][j] * grads[i][l]
            R[i][j] = acc
    return R


def left_invariant_field(m: ChartModel, u: Sequence, degree_cap: int | None = None) -> LeftFieldSolution:
    """Solve for ``u^+`` in the chart (nilpotent algebras only).

    The cap defaults to ``CAP_PER_DIMENSION * n``; exceeding it or meeting
    non-integrable data raises :class:`SolverError`.
    """
    rep = _require_nilpotent(m)
    n = m.n
    if len(u) != n:
        raise ValueError(f"vector has {len(u)} entries, expected {n}")
    u = tuple(as_rational(c) for c in u)
    cap = CAP_PER_DIMENSION * n if degree_cap is None else degree_cap
    W = m.omega.matrix
    Winv = linalg.inverse(W)
    layer = [Polynomial.constant(n, sum((W[i][j] * u[j] for j in range(n)), Fraction(0))) for i in range(n)]
    total = list(layer)
    d = 0
    while True:
        R = _frame_rhs(m, layer, None)
        if all(R[i][j].is_zero() for i in range(n) for j in range(n)):
            break
        if d + 1 > cap:
            raise SolverError(f"left-invariant field for u={u} did not terminate by degree {cap}")
        # sum_l W[l][j] G[i][l] = R[i][j]  =>  G[i] = R[i] . W^{-1}
        nxt = []
        for i in range(n):
            grad = [
                sum((R[i][j] * Winv[j][l] for j in range(n) if Winv[j][l] and R[i][j].terms), Polynomial.zero(n))
                for l in range(n)
            ]
            for a in range(n):
                for b in range(a + 1, n):
                    if grad[a].partial(b) != grad[b].partial(a):
                        raise SolverError(
                            f"non-integrable layer at degree {d + 1}, component {i + 1}, variables {a + 1},{b + 1}"
                        )
            fi = Polynomial.zero(n)
            for l in range(n):
                if grad[l].terms:
                    fi = fi + Polynomial.variable(n, l) * grad[l]
            nxt.append(fi / (d + 1))
        layer = nxt
        total = [a + b for a, b in zip(total, layer)]
        d += 1
    achieved = max((p.degree() for p in total), default=-1)
    return LeftFieldSolution(u, tuple(total), max(achieved, 0), rep.nilindex)


def left_fields(m: ChartModel) -> list[PolyMultiVector]:
    return [left_invariant_field(m, [int(i == k) for k in range(m.n)]).field for i in range(m.n)]


def left_multivector(m: ChartModel, w: Mapping) -> PolyMultiVector:
    return extend_kvector(left_fields(m), w, m.n)


@dataclass(frozen=True)
class LiePoissonResult:
    bivector: PolyMultiVector
    degree: int
    schouten_zero: bool


def lie_poisson_difference(m: ChartModel, w: Mapping) -> LiePoissonResult:
    """``w^+ - w^-`` together with its degree and whether it is Poisson."""
    diff = left_multivector(m, w) - right_multivector(m, w)
    return LiePoissonResult(diff, diff.degree(), schouten_bracket(diff, diff).is_zero())


def parallel_transport_identity_check(m: ChartModel, u: Sequence, T) -> bool:
    """``D_{u^+} T == dualize(L_{u^+} dualize(T))`` for a vector field or 1-form.

    The left side is the coefficient-wise derivative along ``u^+`` (the flat
    chart connection).
    """
    sm = symplectic_matrix(m)
    if sm.S is None:
        raise ValueError("needs a polynomial symplectic matrix")
    X = left_invariant_field(m, u).field
    if T.arity != 1:
        raise ValueError("supported tensors: vector fields and 1-forms")
    lhs = T.map_coeffs(lambda p: lie_derivative(X, p))
    flipped = dualize(T, sm.S, m.P)
    rhs = dualize(lie_derivative(X, flipped), sm.S, m.P)
    return lhs == rhs


def left_right_commute(m: ChartModel) -> list[tuple]:
    """Basis pairs ``(i, j)`` with ``[u_i^+, u_j^-] != 0`` (empty when correct)."""
    lf = left_fields(m)
    bad = []
    for i in range(m.n):
        for j in range(m.n):
            if not lie_bracket(lf[i], basis_field(m, j)).is_zero():
                bad.append((i, j))
    return bad
