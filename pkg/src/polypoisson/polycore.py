"""Exact multivariate polynomials over the rationals and polynomial matrices.

Coefficients are :class:`fractions.Fraction`; nothing in this module ever
touches floating point.  Polynomials do not carry variable names: names are
supplied when a polynomial is printed or parsed, so the same value can be
rendered as ``-X*Z`` or ``-x1*x3``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Rational = Fraction

__all__ = [
    "Rational",
    "Polynomial",
    "PolyMatrix",
    "PolynomialParseError",
    "as_rational",
    "format_rational",
    "default_names",
]


class PolynomialParseError(ValueError):
    """Raised for malformed polynomial text."""


def as_rational(value) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string into a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip().replace("−", "-")
        if not re.fullmatch(r"[+-]?\d+(/\d+)?", text):
            raise ValueError(f"not a rational literal: {value!r}")
        return Fraction(text)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def format_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def default_names(n: int) -> list[str]:
    return [f"x{i + 1}" for i in range(n)]


def _grlex_key(exps: tuple[int, ...]):
    return (sum(exps), exps)


def _lcm_denominators(coeffs) -> int:
    d = 1
    for c in coeffs:
        q = c.denominator
        if q != 1 and d % q:
            d = d * q // gcd(d, q)
    return d


class Polynomial:
    """Sparse polynomial in ``nvars`` variables with rational coefficients.

    ``terms`` maps exponent tuples to nonzero Fractions.  Instances are
    treated as immutable; every operation returns a new polynomial.
    """

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: dict | None = None):
        if nvars < 0:
            raise ValueError("nvars must be non-negative")
        self.nvars = nvars
        clean = {}
        if terms:
            for exps, c in terms.items():
                exps = tuple(exps)
                if len(exps) != nvars or any(e < 0 for e in exps):
                    raise ValueError(f"bad exponent vector {exps} for {nvars} variables")
                c = as_rational(c)
                if c:
                    clean[exps] = c
        self.terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------------
    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> "Polynomial":
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls._raw(nvars, {})

    @classmethod
    def constant(cls, nvars: int, c) -> "Polynomial":
        c = as_rational(c)
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def variable(cls, nvars: int, k: int) -> "Polynomial":
        if not 0 <= k < nvars:
            raise IndexError(f"variable index {k} out of range for {nvars} variables")
        exps = [0] * nvars
        exps[k] = 1
        return cls._raw(nvars, {tuple(exps): Fraction(1)})

    @classmethod
    def linear(cls, coeffs: Sequence, const=0) -> "Polynomial":
        """``sum(coeffs[k] * x_k) + const``."""
        n = len(coeffs)
        terms = {}
        for k, c in enumerate(coeffs):
            c = as_rational(c)
            if c:
                exps = [0] * n
                exps[k] = 1
                terms[tuple(exps)] = c
        const = as_rational(const)
        if const:
            terms[(0,) * n] = const
        return cls._raw(n, terms)

    # -- basic queries ------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; the zero polynomial has degree -1."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_constant(self) -> bool:
        return self.degree() <= 0

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def homogeneous_part(self, d: int) -> "Polynomial":
        return Polynomial._raw(self.nvars, {e: c for e, c in self.terms.items() if sum(e) == d})

    def leading_term(self):
        """(exponents, coefficient) of the grlex-largest term."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")
            return other
        return Polynomial.constant(self.nvars, other)

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, 0) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return Polynomial._raw(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            try:
                c = as_rational(other)
            except TypeError:
                return NotImplemented
            if not c:
                return Polynomial.zero(self.nvars)
            return Polynomial._raw(self.nvars, {e: c * v for e, v in self.terms.items()})
        other = self._coerce(other)
        if not self.terms or not other.terms:
            return Polynomial.zero(self.nvars)
        # integer accumulation over a common denominator; Fraction arithmetic
        # in the inner loop dominates otherwise
        da = _lcm_denominators(self.terms.values())
        db = _lcm_denominators(other.terms.values())
        a = [(e, c.numerator * (da // c.denominator)) for e, c in self.terms.items()]
        b = [(e, c.numerator * (db // c.denominator)) for e, c in other.terms.items()]
        terms: dict = {}
        get = terms.get
        for e1, c1 in a:
            for e2, c2 in b:
                e = tuple(map(int.__add__, e1, e2))
                terms[e] = get(e, 0) + c1 * c2
        den = da * db
        return Polynomial._raw(self.nvars, {e: Fraction(c, den) for e, c in terms.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = Polynomial.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, other):
        # Only division by a nonzero scalar; polynomial division is divmod().
        c = as_rational(other)
        if not c:
            raise ZeroDivisionError("division of a polynomial by zero")
        return self * (1 / c)

    def divmod(self, divisor: "Polynomial"):
        """Multivariate division by a single polynomial (grlex order)."""
        divisor = self._coerce(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        lead_e, lead_c = divisor.leading_term()
        quotient = Polynomial.zero(self.nvars)
        remainder = Polynomial.zero(self.nvars)
        p = self
        while not p.is_zero():
            e, c = p.leading_term()
            if all(a >= b for a, b in zip(e, lead_e)):
                shift = tuple(a - b for a, b in zip(e, lead_e))
                t = Polynomial._raw(self.nvars, {shift: c / lead_c})
                quotient = quotient + t
                p = p - t * divisor
            else:
                lt = Polynomial._raw(self.nvars, {e: c})
                remainder = remainder + lt
                p = p - lt
        return quotient, remainder

    def exact_div(self, divisor: "Polynomial") -> "Polynomial":
        q, r = self.divmod(divisor)
        if not r.is_zero():
            raise ArithmeticError("polynomial division is not exact")
        return q

    # -- calculus and evaluation ------------------------------------------
    def partial(self, k: int) -> "Polynomial":
        if not 0 <= k < self.nvars:
            raise IndexError(f"variable index {k} out of range for {self.nvars} variables")
        terms = {}
        for e, c in self.terms.items():
            if e[k]:
                ne = list(e)
                ne[k] -= 1
                terms[tuple(ne)] = c * e[k]
        return Polynomial._raw(self.nvars, terms)

    def gradient(self) -> list["Polynomial"]:
        return [self.partial(k) for k in range(self.nvars)]

    def eval(self, point: Sequence) -> Fraction:
        if len(point) != self.nvars:
            raise ValueError(f"point has {len(point)} coordinates, expected {self.nvars}")
        pt = [as_rational(v) for v in point]
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for v, k in zip(pt, e):
                if k:
                    term *= v ** k
            total += term
        return total

    def substitute(self, values: Sequence["Polynomial"]) -> "Polynomial":
        """Compose with polynomials ``values`` (one per variable)."""
        if len(values) != self.nvars:
            raise ValueError("need one substitute per variable")
        target = values[0].nvars if values else 0
        out = Polynomial.zero(target)
        for e, c in self.terms.items():
            term = Polynomial.constant(target, c)
            for v, k in zip(values, e):
                if k:
                    term = term * v ** k
            out = out + term
        return out

    # -- comparison --------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self.terms == other.terms
        try:
            c = as_rational(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.terms == ({(0,) * self.nvars: c} if c else {})

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # -- text ----------------------------------------------------------------
    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def to_text(self, names: Sequence[str] | None = None) -> str:
        """Canonical text: grlex-descending terms, e.g. ``-1/2*X^2 + X*Z``."""
        names = list(names) if names is not None else default_names(self.nvars)
        if len(names) != self.nvars:
            raise ValueError("one name per variable required")
        if not self.terms:
            return "0"
        parts = []
        for i, (e, c) in enumerate(self.sorted_terms()):
            mono = "*".join(
                n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k
            )
            mag = abs(c)
            if not mono:
                body = format_rational(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{format_rational(mag)}*{mono}"
            if i == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"Polynomial({self.nvars}, {self.to_text()!r})"

    @classmethod
    def parse(cls, text: str, names: Sequence[str]) -> "Polynomial":
        return _Parser(text, list(names)).parse()


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


class _Parser:
    """Recursive-descent parser for the canonical grammar (plus parentheses)."""

    def __init__(self, text: str, names: list[str]):
        self.names = {n: i for i, n in enumerate(names)}
        if len(self.names) != len(names):
            raise ValueError("duplicate variable names")
        self.n = len(names)
        self.text = text.replace("−", "-")
        self.tokens = self._tokenize(self.text)
        self.pos = 0

    def _tokenize(self, text):
        tokens = []
        i = 0
        while i < len(text):
            if text[i].isspace():
                i += 1
                continue
            m = _TOKEN.match(text, i)
            if not m or m.end() == i:
                raise PolynomialParseError(f"unexpected character {text[i]!r} at offset {i} in {text!r}")
            num, name, op = m.groups()
            if num is not None:
                tokens.append(("num", int(num)))
            elif name is not None:
                tokens.append(("name", name))
            else:
                tokens.append(("op", "^" if op == "**" else op))
            i = m.end()
        return tokens

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect_op(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise PolynomialParseError(f"expected {op!r} in {self.text!r}")

    def parse(self) -> Polynomial:
        if not self.tokens:
            raise PolynomialParseError("empty polynomial text")
        p = self.expr()
        if self.pos != len(self.tokens):
            raise PolynomialParseError(f"trailing input in {self.text!r}")
        return p

    def expr(self):
        sign = 1
        kind, val = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        acc = self.term() * sign
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.term()
                acc = acc + t if val == "+" else acc - t
            else:
                return acc

    def term(self):
        acc = self.power()
        while True:
            kind, val = self.peek()
            if kind == "op" and val == "*":
                self.take()
                acc = acc * self.power()
            elif kind == "op" and val == "/":
                self.take()
                k2, v2 = self.take()
                if k2 != "num" or v2 == 0:
                    raise PolynomialParseError(f"division only by a nonzero integer in {self.text!r}")
                acc = acc / v2
            else:
                return acc

    def power(self):
        base = self.atom()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.take()
            k2, v2 = self.take()
            if k2 != "num":
                raise PolynomialParseError(f"exponent must be an integer in {self.text!r}")
            return base ** v2
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return Polynomial.constant(self.n, val)
        if kind == "name":
            if val not in self.names:
                raise PolynomialParseError(f"unknown variable {val!r}; expected one of {sorted(self.names)}")
            return Polynomial.variable(self.n, self.names[val])
        if kind == "op" and val == "(":
            p = self.expr()
            self.expect_op(")")
            return p
        if kind == "op" and val == "-":
            return -self.power()
        raise PolynomialParseError(f"unexpected token {val!r} in {self.text!r}")


class PolyMatrix:
    """Dense matrix of polynomials sharing one variable count."""

    __slots__ = ("rows", "cols", "nvars", "entries")

    def __init__(self, entries: Sequence[Sequence[Polynomial]], nvars: int | None = None):
        rows = [list(r) for r in entries]
        if rows and len({len(r) for r in rows}) != 1:
            raise ValueError("ragged matrix")
        if nvars is None:
            if not rows or not rows[0]:
                raise ValueError("nvars required for an empty matrix")
            nvars = rows[0][0].nvars
        for r in rows:
            for p in r:
                if not isinstance(p, Polynomial) or p.nvars != nvars:
                    raise ValueError("all entries must be polynomials in the same variables")
        self.entries = rows
        self.rows = len(rows)
        self.cols = len(rows[0]) if rows else 0
        self.nvars = nvars

    @classmethod
    def from_rationals(cls, grid: Sequence[Sequence], nvars: int) -> "PolyMatrix":
        return cls([[Polynomial.constant(nvars, v) for v in row] for row in grid], nvars)

    @classmethod
    def identity(cls, size: int, nvars: int) -> "PolyMatrix":
        return cls.from_rationals([[int(i == j) for j in range(size)] for i in range(size)], nvars)

    @classmethod
    def parse(cls, grid: Sequence[Sequence[str]], names: Sequence[str]) -> "PolyMatrix":
        return cls([[Polynomial.parse(s, names) for s in row] for row in grid], len(names))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i):
        return list(self.entries[i])

    def col(self, j):
        return [r[j] for r in self.entries]

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix([self.col(j) for j in range(self.cols)], self.nvars)

    @property
    def T(self):
        return self.transpose()

    def is_square(self):
        return self.rows == self.cols

    def __add__(self, other: "PolyMatrix"):
        self._check_shape(other)
        return PolyMatrix([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)], self.nvars)

    def __sub__(self, other: "PolyMatrix"):
        self._check_shape(other)
        return PolyMatrix([[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)], self.nvars)

    def __neg__(self):
        return PolyMatrix([[-a for a in r] for r in self.entries], self.nvars)

    def scale(self, c) -> "PolyMatrix":
        return PolyMatrix([[a * c for a in r] for r in self.entries], self.nvars)

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.cols != other.rows or self.nvars != other.nvars:
            raise ValueError("incompatible matrix product")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = Polynomial.zero(self.nvars)
                for k in range(self.cols):
                    a, b = self.entries[i][k], other.entries[k][j]
                    if a.terms and b.terms:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return PolyMatrix(out, self.nvars)

    def apply(self, vec: Sequence[Polynomial]) -> list[Polynomial]:
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        out = []
        for r in self.entries:
            acc = Polynomial.zero(self.nvars)
            for a, b in zip(r, vec):
                if a.terms and b.terms:
                    acc = acc + a * b
            out.append(acc)
        return out

    def _check_shape(self, other):
        if (self.rows, self.cols, self.nvars) != (other.rows, other.cols, other.nvars):
            raise ValueError("matrix shape mismatch")

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.nvars) == (other.rows, other.cols, other.nvars) and self.entries == other.entries

    def __hash__(self):
        return hash(tuple(tuple(r) for r in self.entries))

    def eval(self, point) -> list[list[Fraction]]:
        return [[p.eval(point) for p in r] for r in self.entries]

    def degree(self) -> int:
        return max((p.degree() for r in self.entries for p in r), default=-1)

    def is_antisymmetric(self) -> bool:
        return self.is_square() and all(
            self.entries[i][j] == -self.entries[j][i] for i in range(self.rows) for j in range(self.cols)
        )

    def to_text(self, names=None) -> list[list[str]]:
        return [[p.to_text(names) for p in r] for r in self.entries]

    def __repr__(self):
        return f"PolyMatrix({self.to_text()!r})"

    # -- determinant and adjugate ------------------------------------------
    def det(self) -> Polynomial:
        """Fraction-free (Bareiss) elimination with row pivoting."""
        if not self.is_square():
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return Polynomial.constant(self.nvars, 1)
        a = [list(r) for r in self.entries]
        sign = 1
        prev = Polynomial.constant(self.nvars, 1)
        for k in range(n - 1):
            if a[k][k].is_zero():
                swap = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
                if swap is None:
                    return Polynomial.zero(self.nvars)
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                    a[i][j] = num.exact_div(prev)
                a[i][k] = Polynomial.zero(self.nvars)
            prev = a[k][k]
        return a[n - 1][n - 1] * sign

    def det_cofactor(self) -> Polynomial:
        """Laplace expansion along the first row; exponential, for small n."""
        if not self.is_square():
            raise ValueError("determinant of a non-square matrix")
        return _laplace(self.entries, self.nvars)

    def minor(self, i: int, j: int) -> "PolyMatrix":
        return PolyMatrix(
            [[p for c, p in enumerate(r) if c != j] for rr, r in enumerate(self.entries) if rr != i],
            self.nvars,
        )

    def det_adjugate(self):
        """Return ``(det, adj)`` with ``self @ adj == det * I``."""
        if not self.is_square():
            raise ValueError("adjugate of a non-square matrix")
        n = self.rows
        det = self.det()
        if n == 1:
            return det, PolyMatrix.identity(1, self.nvars)
        adj = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                cof = self.minor(i, j).det()
                adj[j][i] = -cof if (i + j) % 2 else cof
        return det, PolyMatrix(adj, self.nvars)


def _laplace(rows, nvars):
    n = len(rows)
    if n == 0:
        return Polynomial.constant(nvars, 1)
    if n == 1:
        return rows[0][0]
    total = Polynomial.zero(nvars)
    for j, p in enumerate(rows[0]):
        if p.is_zero():
            continue
        sub = [[q for c, q in enumerate(r) if c != j] for r in rows[1:]]
        term = p * _laplace(sub, nvars)
        total = total - term if j % 2 else total + term
    return total


def rational_vector(values: Iterable) -> list[Fraction]:
    return [as_rational(v) for v in values]
