"""Polynomial multivector fields and differential forms on chart space.

Both kinds store components sparsely on strictly increasing index tuples:
``{(0, 2): p}`` is ``p * dx1^dx3`` for a form and ``p * ∂x1^∂x3`` for a
multivector.  A multivector of arity 1 is a vector field.

Conventions used throughout:

* ``(dx_a ^ dx_b)(∂_a, ∂_b) = 1``; a 2-form with coefficient matrix ``S``
  is ``sum_{a<b} S[a][b] dx_a ^ dx_b``.
* Interior products contract the first slot.
* ``sharp(alpha, P)`` is ``P(alpha, .)``, i.e. the vector with components
  ``sum_a alpha_a P[a][b]``.
"""

from __future__ import annotations

from itertools import combinations
from typing import Sequence

from .polycore import PolyMatrix, Polynomial, default_names

__all__ = [
    "PolyMultiVector",
    "PolyForm",
    "vector_field",
    "one_form",
    "bivector_from_matrix",
    "two_form_from_matrix",
    "wedge",
    "exterior_derivative",
    "interior_product",
    "lie_bracket",
    "lie_derivative",
    "schouten_bracket",
    "poisson_jacobiator",
    "sharp",
    "koszul_bracket",
    "dualize",
    "is_parallel",
    "tensor_degree",
]


def _merge_sign(a: tuple, b: tuple):
    """Sign of the shuffle sorting ``a + b``, or 0 if they share an index."""
    if set(a) & set(b):
        return 0, None
    inversions = sum(1 for x in a for y in b if x > y)
    return (-1 if inversions % 2 else 1), tuple(sorted(a + b))


def _sort_sign(idx: Sequence[int]):
    """Sign of the permutation sorting ``idx`` (0 if an index repeats)."""
    idx = list(idx)
    if len(set(idx)) != len(idx):
        return 0, None
    sign = 1
    for i in range(len(idx)):
        for j in range(i + 1, len(idx)):
            if idx[i] > idx[j]:
                sign = -sign
    return sign, tuple(sorted(idx))


class _Alternating:
    """Shared storage for forms and multivectors."""

    symbol = "?"

    __slots__ = ("nvars", "arity", "comps")

    def __init__(self, nvars: int, arity: int, comps: dict | None = None):
        if not 0 <= arity <= nvars:
            raise ValueError(f"arity {arity} out of range for {nvars} variables")
        self.nvars = nvars
        self.arity = arity
        clean = {}
        for key, p in (comps or {}).items():
            key = tuple(key)
            if len(key) != arity or any(not 0 <= k < nvars for k in key):
                raise ValueError(f"bad index tuple {key}")
            if list(key) != sorted(set(key)):
                raise ValueError(f"index tuple {key} must be strictly increasing")
            if not isinstance(p, Polynomial):
                p = Polynomial.constant(nvars, p)
            if p.nvars != nvars:
                raise ValueError("coefficient variable count mismatch")
            if not p.is_zero():
                clean[key] = p
        self.comps = clean

    @classmethod
    def _raw(cls, nvars, arity, comps):
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj.arity = arity
        obj.comps = {k: v for k, v in comps.items() if not v.is_zero()}
        return obj

    @classmethod
    def zero(cls, nvars: int, arity: int):
        return cls._raw(nvars, arity, {})

    @classmethod
    def from_unsorted(cls, nvars: int, arity: int, items):
        """Build from ``(index_tuple, coeff)`` pairs in any index order."""
        comps: dict = {}
        for idx, p in items:
            s, key = _sort_sign(idx)
            if not s:
                continue
            comps[key] = comps.get(key, Polynomial.zero(nvars)) + p * s
        return cls._raw(nvars, arity, comps)

    def component(self, idx: Sequence[int]) -> Polynomial:
        s, key = _sort_sign(idx)
        if not s:
            return Polynomial.zero(self.nvars)
        return self.comps.get(key, Polynomial.zero(self.nvars)) * s

    def as_list(self) -> list[Polynomial]:
        """Dense component list (arity 1 only)."""
        if self.arity != 1:
            raise ValueError("as_list needs arity 1")
        return [self.comps.get((i,), Polynomial.zero(self.nvars)) for i in range(self.nvars)]

    def as_matrix(self) -> PolyMatrix:
        """Antisymmetric component matrix (arity 2 only)."""
        if self.arity != 2:
            raise ValueError("as_matrix needs arity 2")
        n = self.nvars
        return PolyMatrix([[self.component((i, j)) for j in range(n)] for i in range(n)], n)

    def _check(self, other):
        if type(self) is not type(other):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")

    def __add__(self, other):
        self._check(other)
        if self.arity != other.arity:
            raise ValueError("arity mismatch")
        comps = dict(self.comps)
        for k, p in other.comps.items():
            comps[k] = comps[k] + p if k in comps else p
        return type(self)._raw(self.nvars, self.arity, comps)

    def __neg__(self):
        return type(self)._raw(self.nvars, self.arity, {k: -p for k, p in self.comps.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        if isinstance(c, _Alternating):
            return NotImplemented
        return type(self)._raw(self.nvars, self.arity, {k: p * c for k, p in self.comps.items()})

    __rmul__ = __mul__

    def __xor__(self, other):
        return wedge(self, other)

    def __eq__(self, other):
        if not isinstance(other, _Alternating):
            return NotImplemented
        return (type(self), self.nvars, self.arity, self.comps) == (type(other), other.nvars, other.arity, other.comps)

    def __hash__(self):
        return hash((type(self).__name__, self.nvars, self.arity, frozenset(self.comps.items())))

    def is_zero(self):
        return not self.comps

    def degree(self) -> int:
        return max((p.degree() for p in self.comps.values()), default=-1)

    def map_coeffs(self, fn):
        return type(self)._raw(self.nvars, self.arity, {k: fn(p) for k, p in self.comps.items()})

    def eval(self, point) -> dict:
        return {k: p.eval(point) for k, p in sorted(self.comps.items())}

    def to_text(self, names: Sequence[str] | None = None) -> str:
        """``coeff*dX^dY`` terms in increasing tuple order; ``0`` if empty."""
        names = list(names) if names is not None else default_names(self.nvars)
        if not self.comps:
            return "0"
        parts = []
        for i, key in enumerate(sorted(self.comps)):
            p = self.comps[key]
            basis = "^".join(f"{self.symbol}{names[k]}" for k in key) if key else ""
            negative = False
            if len(p.terms) == 1:
                (e, c), = p.terms.items()
                negative = c < 0
                mag = -p if negative else p
                coeff = mag.to_text(names)
                if not basis:
                    body = coeff
                elif coeff == "1":
                    body = basis
                else:
                    body = f"{coeff}*{basis}"
            else:
                coeff = p.to_text(names)
                body = f"({coeff})*{basis}" if basis else coeff
            if i == 0:
                parts.append(("-" if negative else "") + body)
            else:
                parts.append((" - " if negative else " + ") + body)
        return "".join(parts)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"{type(self).__name__}(arity={self.arity}, {self.to_text()!r})"


class PolyMultiVector(_Alternating):
    symbol = "∂"

    @classmethod
    def parse(cls, text: str, names: Sequence[str], arity: int | None = None):
        return _parse_alternating(cls, text, names, arity)


class PolyForm(_Alternating):
    symbol = "d"

    @classmethod
    def parse(cls, text: str, names: Sequence[str], arity: int | None = None):
        return _parse_alternating(cls, text, names, arity)


def _parse_alternating(cls, text: str, names: Sequence[str], arity: int | None = None):
    """Inverse of ``to_text``: splits on top-level +/- and basis tokens."""
    import re

    names = list(names)
    n = len(names)
    text = text.replace("−", "-").replace("∧", "^").strip()
    if text == "0":
        if arity is None:
            raise ValueError("arity is needed to parse the zero tensor")
        return cls.zero(n, arity)
    token = re.escape(cls.symbol) + "(" + "|".join(sorted(map(re.escape, names), key=len, reverse=True)) + ")"
    basis_re = re.compile(rf"{token}(?:\s*\^\s*{token})*")
    # split into signed terms at top-level +/-
    terms, depth, cur = [], 0, ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch in "+-" and depth == 0 and cur.strip() and not cur.rstrip().endswith(("*", "^")):
            terms.append(cur)
            cur = ch
        else:
            cur += ch
    terms.append(cur)
    items = []
    for t in terms:
        t = t.strip()
        sign = 1
        if t.startswith("-"):
            sign, t = -1, t[1:].strip()
        elif t.startswith("+"):
            t = t[1:].strip()
        m = basis_re.search(t)
        if not m or m.end() != len(t):
            raise ValueError(f"cannot find basis element at the end of term {t!r}")
        idx = tuple(names.index(x) for x in re.findall(token, m.group(0)))
        coeff = t[: m.start()].strip()
        if coeff.endswith("*"):
            coeff = coeff[:-1].strip()
        if coeff.startswith("(") and coeff.endswith(")"):
            coeff = coeff[1:-1]
        p = Polynomial.parse(coeff, names) if coeff else Polynomial.constant(n, 1)
        if arity is None:
            arity = len(idx)
        elif arity != len(idx):
            raise ValueError("mixed arities in one expression")
        items.append((idx, p * sign))
    return cls.from_unsorted(n, arity, items)


def vector_field(components: Sequence[Polynomial]) -> PolyMultiVector:
    n = len(components)
    return PolyMultiVector._raw(n, 1, {(i,): p for i, p in enumerate(components)})


def one_form(components: Sequence[Polynomial]) -> PolyForm:
    n = len(components)
    return PolyForm._raw(n, 1, {(i,): p for i, p in enumerate(components)})


def bivector_from_matrix(m: PolyMatrix) -> PolyMultiVector:
    n = m.rows
    return PolyMultiVector._raw(m.nvars, 2, {(i, j): m[i, j] for i in range(n) for j in range(i + 1, n)})


def two_form_from_matrix(m: PolyMatrix) -> PolyForm:
    n = m.rows
    return PolyForm._raw(m.nvars, 2, {(i, j): m[i, j] for i in range(n) for j in range(i + 1, n)})


def wedge(a: _Alternating, b: _Alternating):
    a._check(b)
    if a.arity + b.arity > a.nvars:
        raise ValueError(f"arities {a.arity} + {b.arity} exceed dimension {a.nvars}")
    comps: dict = {}
    for ka, pa in a.comps.items():
        for kb, pb in b.comps.items():
            s, key = _merge_sign(ka, kb)
            if not s:
                continue
            term = pa * pb
            if s < 0:
                term = -term
            comps[key] = comps[key] + term if key in comps else term
    return type(a)._raw(a.nvars, a.arity + b.arity, comps)


def wedge_power(a: _Alternating, k: int):
    result = type(a)._raw(a.nvars, 0, {(): Polynomial.constant(a.nvars, 1)})
    for _ in range(k):
        result = wedge(result, a)
    return result


def exterior_derivative(f: PolyForm) -> PolyForm:
    if not isinstance(f, PolyForm):
        raise TypeError("exterior derivative needs a PolyForm")
    if f.arity >= f.nvars:
        return PolyForm.zero(f.nvars, f.nvars)
    items = []
    for key, p in f.comps.items():
        for k in range(f.nvars):
            dp = p.partial(k)
            if not dp.is_zero():
                items.append(((k,) + key, dp))
    return PolyForm.from_unsorted(f.nvars, f.arity + 1, items)


def interior_product(X: PolyMultiVector, f: PolyForm) -> PolyForm:
    if X.arity != 1:
        raise ValueError("interior product needs a vector field")
    if f.arity == 0:
        raise ValueError("cannot contract a 0-form")
    if X.nvars != f.nvars:
        raise ValueError("variable count mismatch")
    comps: dict = {}
    for key, p in f.comps.items():
        for s, k in enumerate(key):
            xk = X.comps.get((k,))
            if xk is None:
                continue
            rest = key[:s] + key[s + 1:]
            term = xk * p
            if s % 2:
                term = -term
            comps[rest] = comps[rest] + term if rest in comps else term
    return PolyForm._raw(f.nvars, f.arity - 1, comps)


def _apply_field(X: PolyMultiVector, p: Polynomial) -> Polynomial:
    """Directional derivative ``X(p)``."""
    acc = Polynomial.zero(p.nvars)
    for (k,), xk in X.comps.items():
        dp = p.partial(k)
        if not dp.is_zero():
            acc = acc + xk * dp
    return acc


def lie_bracket(X: PolyMultiVector, Y: PolyMultiVector) -> PolyMultiVector:
    if X.arity != 1 or Y.arity != 1:
        raise ValueError("lie_bracket takes vector fields")
    X._check(Y)
    xs, ys = X.as_list(), Y.as_list()
    return vector_field([_apply_field(X, ys[m]) - _apply_field(Y, xs[m]) for m in range(X.nvars)])


def lie_derivative(X: PolyMultiVector, T):
    """Lie derivative of a polynomial, vector field or form along ``X``."""
    if isinstance(T, Polynomial):
        return _apply_field(X, T)
    if isinstance(T, PolyMultiVector):
        if T.arity != 1:
            raise ValueError("only vector fields among multivectors are supported")
        return lie_bracket(X, T)
    if isinstance(T, PolyForm):
        if T.arity == 0:
            return T.map_coeffs(lambda p: _apply_field(X, p))
        out = interior_product(X, exterior_derivative(T))
        inner = interior_product(X, T)
        return out + exterior_derivative(inner)
    raise TypeError(f"unsupported tensor {type(T).__name__}")


def schouten_bracket(P: PolyMultiVector, Q: PolyMultiVector) -> PolyMultiVector:
    """Schouten-Nijenhuis bracket of two bivectors.

    Component ``(i, j, k)`` is ``sum_l`` over cyclic ``(i, j, k)`` of
    ``P[l,i] d_l Q[j,k] + Q[l,i] d_l P[j,k]``.  With this normalization
    ``[P, P]`` component ``(i, j, k)`` is ``-2`` times the Jacobiator of
    ``x_i, x_j, x_k`` under ``{f, g} = sum P[a,b] d_a f d_b g``, so
    ``[P, P] == 0`` exactly when that bracket satisfies Jacobi.
    """
    if P.arity != 2 or Q.arity != 2 or not isinstance(P, PolyMultiVector):
        raise ValueError("schouten_bracket takes two bivectors")
    P._check(Q)
    n = P.nvars
    Pm, Qm = P.as_matrix(), Q.as_matrix()
    dP = {}
    dQ = {}
    comps = {}
    for i, j, k in combinations(range(n), 3):
        acc = Polynomial.zero(n)
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            for l in range(n):
                pla, qla = Pm[l, a], Qm[l, a]
                if not qla.is_zero():
                    d = dP.setdefault((b, c, l), Pm[b, c].partial(l))
                    if d.terms:
                        acc = acc + qla * d
                if not pla.is_zero():
                    d = dQ.setdefault((b, c, l), Qm[b, c].partial(l))
                    if d.terms:
                        acc = acc + pla * d
        if not acc.is_zero():
            comps[(i, j, k)] = acc
    return PolyMultiVector._raw(n, 3, comps)


def poisson_jacobiator(P: PolyMatrix, f: Polynomial, g: Polynomial, h: Polynomial) -> Polynomial:
    """``{f,{g,h}} + {g,{h,f}} + {h,{f,g}}`` for ``{a,b} = grad a . P . grad b``."""

    def br(a, b):
        ga, gb = a.gradient(), b.gradient()
        acc = Polynomial.zero(P.nvars)
        for i in range(P.rows):
            if ga[i].is_zero():
                continue
            for j in range(P.cols):
                if P[i, j].terms and gb[j].terms:
                    acc = acc + P[i, j] * ga[i] * gb[j]
        return acc

    return br(f, br(g, h)) + br(g, br(h, f)) + br(h, br(f, g))


def sharp(alpha: PolyForm, P: PolyMatrix) -> PolyMultiVector:
    """``P(alpha, .)``: components ``sum_a alpha_a P[a][b]``."""
    if alpha.arity != 1:
        raise ValueError("sharp takes a 1-form")
    a = alpha.as_list()
    return vector_field(P.transpose().apply(a))


def koszul_bracket(alpha: PolyForm, beta: PolyForm, P: PolyMatrix) -> PolyForm:
    """``L_{P#a} b - L_{P#b} a - d P(a, b)`` with ``P# = sharp``."""
    if alpha.arity != 1 or beta.arity != 1:
        raise ValueError("koszul_bracket takes 1-forms")
    if alpha.nvars != P.nvars or beta.nvars != P.nvars:
        raise ValueError("variable count mismatch")
    pa, pb = sharp(alpha, P), sharp(beta, P)
    pairing = Polynomial.zero(P.nvars)
    for (b,), coeff in beta.comps.items():
        comp = pa.comps.get((b,))
        if comp is not None:
            pairing = pairing + comp * coeff
    d_pair = exterior_derivative(PolyForm._raw(P.nvars, 0, {(): pairing}))
    return lie_derivative(pa, beta) - lie_derivative(pb, alpha) - d_pair


def dualize(T, S: PolyMatrix, P: PolyMatrix, check: bool = True):
    """Musical isomorphism ``T -> T^omega`` for the Poisson matrix ``P``.

    ``S`` must be ``P^{-1}``.  The symplectic form here is the one with
    coefficient matrix ``S^T``, i.e. the inverse of the bivector ``P``, so
    that ``i_X omega`` has components ``S X`` and a 1-form ``alpha`` goes to
    ``P alpha = -P#(alpha)``.  Bivectors and 2-forms are mapped slot-wise,
    so ``dualize(dualize(T)) == T`` for every supported arity.
    """
    if check and S @ P != PolyMatrix.identity(S.rows, S.nvars):
        raise ValueError("S and P are not mutually inverse")
    if T.arity == 1:
        vec = T.as_list()
        if isinstance(T, PolyMultiVector):
            return one_form(S.apply(vec))
        return vector_field(P.apply(vec))
    if T.arity == 2:
        M = T.as_matrix()
        if isinstance(T, PolyMultiVector):
            return two_form_from_matrix(S @ M @ S.transpose())
        return bivector_from_matrix(P @ M @ P.transpose())
    raise ValueError("dualize supports arities 1 and 2")


def tensor_degree(T) -> int:
    if isinstance(T, Polynomial):
        return T.degree()
    if isinstance(T, (PolyMatrix, _Alternating)):
        return T.degree()
    if isinstance(T, (list, tuple)):
        return max((tensor_degree(t) for t in T), default=-1)
    raise TypeError(f"unsupported tensor {type(T).__name__}")


def is_parallel(T) -> bool:
    """Constant coefficients in the affine chart (flat connection)."""
    return tensor_degree(T) <= 0
