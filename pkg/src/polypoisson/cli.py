"""Command-line frontend.

Input files describe a Lie algebra and a scalar 2-cocycle::

    {
      "dim": 4,
      "names": ["e1", "e2", "e3", "e4"],
      "brackets": [{"i": 1, "j": 4, "coeffs": {"2": "1"}}],
      "omega": [{"i": 1, "j": 2, "value": "1"}]
    }

Indices are 1-based; ``omega`` may also be a full antisymmetric grid.
Exit codes: 0 success, 2 structural failure or golden mismatch,
3 parse failure or unknown catalog id, 4 left-invariant request on a
non-nilpotent algebra.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from typing import Any, Sequence

import sympy

from . import affinechart as ac
from . import catalog
from . import leftinvariant as li
from . import liealgebra as la
from .polycore import Polynomial, PolynomialParseError, default_names, format_rational

EXIT_OK = 0
EXIT_STRUCTURAL = 2
EXIT_PARSE = 3
EXIT_NOT_NILPOTENT = 4

_RATIONAL = re.compile(r"^\s*-?\d+(\s*/\s*\d+)?\s*$")
_TOP_KEYS = {"dim", "names", "brackets", "omega"}


class AlgebraFileError(ValueError):
    """Malformed algebra file; the message names the offending field."""


class CliExit(Exception):
    def __init__(self, code: int, message: str = ""):
        super().__init__(message)
        self.code = code
        self.message = message


# -- input ---------------------------------------------------------------------

def parse_rational(value, where: str) -> Fraction:
    if isinstance(value, bool):
        raise AlgebraFileError(f"{where}: expected a rational string, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if not isinstance(value, str) or not _RATIONAL.match(value):
        raise AlgebraFileError(f"{where}: expected a rational string 'p' or 'p/q', got {value!r}")
    try:
        return Fraction(value.replace(" ", ""))
    except ZeroDivisionError:
        raise AlgebraFileError(f"{where}: zero denominator in {value!r}") from None


def _index(value, dim: int, where: str) -> int:
    if isinstance(value, str) and value.strip().isdigit():
        value = int(value)
    if isinstance(value, bool) or not isinstance(value, int) or not 1 <= value <= dim:
        raise AlgebraFileError(f"{where}: index must be an integer in 1..{dim}, got {value!r}")
    return value - 1


def algebra_from_document(doc: Any) -> tuple[la.StructureConstants, la.TwoCocycle]:
    if not isinstance(doc, dict):
        raise AlgebraFileError("top level: expected a JSON object")
    extra = set(doc) - _TOP_KEYS
    if extra:
        raise AlgebraFileError(f"top level: unknown field(s) {', '.join(sorted(extra))}")
    for key in ("dim", "brackets", "omega"):
        if key not in doc:
            raise AlgebraFileError(f"top level: missing field '{key}'")
    dim = doc["dim"]
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise AlgebraFileError(f"dim: expected a positive integer, got {dim!r}")
    names = doc.get("names")
    if names is not None:
        if not isinstance(names, list) or len(names) != dim or not all(isinstance(s, str) and s for s in names):
            raise AlgebraFileError(f"names: expected {dim} non-empty strings")
        if len(set(names)) != dim:
            raise AlgebraFileError("names: duplicate basis name")

    if not isinstance(doc["brackets"], list):
        raise AlgebraFileError("brackets: expected a list")
    table = {}
    for pos, item in enumerate(doc["brackets"]):
        where = f"brackets[{pos}]"
        if not isinstance(item, dict) or set(item) != {"i", "j", "coeffs"}:
            raise AlgebraFileError(f"{where}: expected an object with fields i, j, coeffs")
        i = _index(item["i"], dim, f"{where}.i")
        j = _index(item["j"], dim, f"{where}.j")
        if i >= j:
            raise AlgebraFileError(f"{where}: need i < j, got ({i + 1}, {j + 1})")
        if (i, j) in table:
            raise AlgebraFileError(f"{where}: duplicate bracket ({i + 1}, {j + 1})")
        if not isinstance(item["coeffs"], dict):
            raise AlgebraFileError(f"{where}.coeffs: expected an object k -> rational")
        vec = [Fraction(0)] * dim
        for k, c in item["coeffs"].items():
            kk = _index(k, dim, f"{where}.coeffs key")
            vec[kk] = parse_rational(c, f"{where}.coeffs[{k}]")
        table[(i, j)] = vec

    raw = doc["omega"]
    grid = [[Fraction(0)] * dim for _ in range(dim)]
    if isinstance(raw, list) and raw and all(isinstance(r, list) for r in raw):
        if len(raw) != dim or any(len(r) != dim for r in raw):
            raise AlgebraFileError(f"omega: grid must be {dim}x{dim}")
        for a, row in enumerate(raw):
            for b, v in enumerate(row):
                grid[a][b] = parse_rational(v, f"omega[{a}][{b}]")
        for a in range(dim):
            for b in range(dim):
                if grid[a][b] != -grid[b][a]:
                    raise AlgebraFileError(f"omega: grid not antisymmetric at ({a + 1}, {b + 1})")
    elif isinstance(raw, list):
        seen = set()
        for pos, item in enumerate(raw):
            where = f"omega[{pos}]"
            if not isinstance(item, dict) or set(item) != {"i", "j", "value"}:
                raise AlgebraFileError(f"{where}: expected an object with fields i, j, value")
            i = _index(item["i"], dim, f"{where}.i")
            j = _index(item["j"], dim, f"{where}.j")
            if i >= j:
                raise AlgebraFileError(f"{where}: need i < j, got ({i + 1}, {j + 1})")
            if (i, j) in seen:
                raise AlgebraFileError(f"{where}: duplicate entry ({i + 1}, {j + 1})")
            seen.add((i, j))
            v = parse_rational(item["value"], f"{where}.value")
            grid[i][j], grid[j][i] = v, -v
    else:
        raise AlgebraFileError("omega: expected a grid or a list of {i, j, value}")
    return la.StructureConstants(dim, table, names), la.TwoCocycle(grid)


def load_algebra_file(path: str) -> tuple[la.StructureConstants, la.TwoCocycle]:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise AlgebraFileError(f"{path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AlgebraFileError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    try:
        return algebra_from_document(doc)
    except AlgebraFileError as exc:
        raise AlgebraFileError(f"{path}: {exc}") from None


def _chart_names(args, dim: int) -> list[str]:
    if not getattr(args, "vars", None):
        return default_names(dim)
    names = [s.strip() for s in args.vars.split(",")]
    if len(names) != dim or len(set(names)) != dim or not all(re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", s) for s in names):
        raise CliExit(EXIT_PARSE, f"--vars: need {dim} distinct identifiers")
    return names


def _int_list(text: str, where: str) -> list[int]:
    try:
        return [int(s) for s in text.split(",")]
    except ValueError:
        raise CliExit(EXIT_PARSE, f"{where}: expected comma-separated integers, got {text!r}") from None


def _rational_list(text: str, dim: int, where: str) -> list[Fraction]:
    parts = [s.strip() for s in text.split(",")]
    if len(parts) != dim:
        raise CliExit(EXIT_PARSE, f"{where}: expected {dim} entries, got {len(parts)}")
    try:
        return [parse_rational(p, where) for p in parts]
    except AlgebraFileError as exc:
        raise CliExit(EXIT_PARSE, str(exc)) from None


# -- report assembly ---------------------------------------------------------

def _witness_item(w):
    # basis indices shift to 1-based; rationals and vectors print as text
    if isinstance(w, int) and not isinstance(w, bool):
        return w + 1
    if isinstance(w, (list, tuple)):
        return [format_rational(x) for x in w]
    return format_rational(w)


def _check(res: la.CheckResult | None) -> dict:
    if res is None:
        return {"ok": None, "detail": "not run"}
    out = {"ok": res.ok}
    if res.witness is not None:
        out["witness"] = [_witness_item(w) for w in res.witness]
    if res.detail:
        out["detail"] = res.detail
    return out


def validate_report(C: la.StructureConstants, omega: la.TwoCocycle) -> tuple[dict, bool]:
    rep = la.analyze(C, omega)
    series = rep.series
    checks = {
        "jacobi": _check(rep.jacobi),
        "cocycle": _check(rep.cocycle),
        "nondegenerate": _check(rep.nondegenerate),
        "cybe": _check(rep.cybe),
    }
    flags = {
        "unimodular": rep.unimodular.ok,
        "nilpotent": series.nilindex if series and series.nilpotent else False,
        "solvable": bool(series and series.solvable),
    }
    if series is not None:
        flags["lower_central_dims"] = list(series.lower_central_dims)
        flags["derived_dims"] = list(series.derived_dims)
    if not rep.unimodular.ok:
        flags["unimodular_detail"] = rep.unimodular.detail
    ok = rep.structural_ok and bool(rep.cybe)
    report = {
        "dim": C.dim,
        "brackets": C.describe(),
        "structural_ok": ok,
        "checks": checks,
        "flags": flags,
    }
    return report, ok


def _sparse_matrix(M, names) -> list[dict]:
    out = []
    for i in range(M.rows):
        for j in range(M.cols):
            p = M[i, j]
            if not p.is_zero():
                out.append({"i": i + 1, "j": j + 1, "value": p.to_text(names)})
    return out


def factored_text(p: Polynomial, names: Sequence[str]) -> str:
    """``p`` factored over Q, in the canonical operator spelling (``^``)."""
    syms = sympy.symbols(list(names))
    expr = sympy.sympify(p.to_text(names).replace("^", "**"), locals=dict(zip(names, syms)))
    text = str(sympy.factor(expr)).replace("**", "^")
    return re.sub(r"\s+", "", text)


def chart_report(m: ac.ChartModel, sections: Sequence[str]) -> tuple[dict, bool]:
    names = m.names
    report: dict = {"variables": list(names)}
    ok = True
    sm = ac.symplectic_matrix(m)
    if "poisson" in sections:
        report["poisson"] = {
            "matrix": m.P.to_text(names),
            "bivector": m.poisson_bivector().to_text(names),
            "sparse": _sparse_matrix(m.P, names),
            "degree": m.P.degree(),
        }
    if "symplectic" in sections:
        if sm.S is not None:
            report["symplectic"] = {
                "matrix": sm.S.to_text(names),
                "form": ac.symplectic_form(m).to_text(names),
                "sparse": _sparse_matrix(sm.S, names),
                "degree": sm.S.degree(),
            }
        else:
            report["symplectic"] = {
                "marker": sm.marker,
                "det": sm.det.to_text(names),
                "det_factored": factored_text(sm.det, names),
                "adjugate": sm.adjugate.to_text(names),
            }
    if "volume" in sections:
        if m.n % 2:
            report["volume"] = {"detail": "odd dimension"}
        else:
            vol = ac.volume_check(m)
            entry = {
                "det": vol.det.to_text(names),
                "det_factored": factored_text(vol.det, names),
                "parallel": vol.parallel,
                "det_constant": vol.det_constant,
                "volume_constant": vol.volume_constant,
                "pfaffian_identity": vol.pfaffian_identity,
            }
            if sm.S is not None:
                entry["volume_form"] = ac.volume_form(m).to_text(names)
            report["volume"] = entry
            ok = ok and vol.consistent
    if "degrees" in sections:
        rows = ac.degree_table(m)
        report["degrees"] = rows
        ok = ok and all(r["ok"] for r in rows)
    return report, ok


# -- rendering -----------------------------------------------------------------

def _is_grid(v) -> bool:
    return isinstance(v, list) and bool(v) and all(isinstance(r, list) and all(isinstance(x, str) for x in r) for r in v)


def _render_text(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if _is_grid(v):
                lines.append(f"{pad}{k}:")
                width = max(len(x) for r in v for x in r)
                for r in v:
                    lines.append(pad + "  [ " + "  ".join(x.rjust(width) for x in r) + " ]")
            elif isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.extend(_render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(obj, list):
        for item in obj:
            if isinstance(item, dict):
                lines.append(pad + ", ".join(f"{k}={_scalar(v)}" for k, v in item.items()))
            else:
                lines.append(f"{pad}- {_scalar(item)}")
    else:
        lines.append(pad + _scalar(obj))
    return lines


def _scalar(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_scalar(x)}" for k, x in v.items()) + "}"
    return str(v)


def latex_expr(text: str) -> str:
    """Canonical polynomial/form/multivector text to LaTeX."""
    out = re.sub(r"\^(\d+)", r"^{\1}", text)
    out = re.sub(r"∂([A-Za-z_]\w*)", r"\\partial_{\1}", out)
    out = re.sub(r"(?<![A-Za-z_\\])d([A-Z][A-Za-z_0-9]*|x\d+)", r"d\1", out)
    out = out.replace("^\\partial", " \\wedge \\partial")
    out = re.sub(r"\^d", r" \\wedge d", out)
    out = re.sub(r"(\d+)/(\d+)", r"\\frac{\1}{\2}", out)
    return out.replace("*", " ")


def _render_latex(obj, title: str = "") -> list[str]:
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            label = f"{title}.{k}" if title else k
            if k == "sparse":
                continue
            if _is_grid(v):
                lines.append(f"% {label}")
                lines.append("\\begin{pmatrix}")
                lines.extend("  " + " & ".join(latex_expr(x) for x in r) + " \\\\" for r in v)
                lines.append("\\end{pmatrix}")
            elif isinstance(v, dict):
                lines.extend(_render_latex(v, label))
            elif isinstance(v, str) and k in ("bivector", "form", "volume_form", "det", "det_factored", "field", "bracket"):
                lines.append(f"% {label}")
                lines.append(f"${latex_expr(v)}$")
            else:
                lines.append(f"% {label}: {_scalar(v)}")
    elif isinstance(obj, list):
        for item in obj:
            lines.extend(_render_latex(item, title) if isinstance(item, dict) else [f"% {_scalar(item)}"])
    return lines


def emit(report: dict, fmt: str, stream=None) -> None:
    stream = stream or sys.stdout
    if fmt == "json":
        stream.write(json.dumps(report, indent=2, ensure_ascii=False) + "\n")
    elif fmt == "latex":
        stream.write("\n".join(_render_latex(report)) + "\n")
    else:
        stream.write("\n".join(_render_text(report)) + "\n")


# -- commands ------------------------------------------------------------------

def _load(args):
    try:
        return load_algebra_file(args.path)
    except AlgebraFileError as exc:
        raise CliExit(EXIT_PARSE, f"parse error: {exc}") from None


def _validated_model(args) -> ac.ChartModel:
    C, omega = _load(args)
    report, ok = validate_report(C, omega)
    if not ok:
        emit(report, args.format)
        raise CliExit(EXIT_STRUCTURAL, "structural checks failed")
    return ac.build_chart(C, omega, _chart_names(args, C.dim))


def cmd_validate(args) -> int:
    C, omega = _load(args)
    report, ok = validate_report(C, omega)
    emit(report, args.format)
    return EXIT_OK if ok else EXIT_STRUCTURAL


def cmd_chart(args) -> int:
    m = _validated_model(args)
    sections = [s for s in ("poisson", "symplectic", "volume", "degrees") if getattr(args, s)]
    report, ok = chart_report(m, sections or ("poisson", "symplectic", "volume", "degrees"))
    emit(report, args.format)
    return EXIT_OK if ok else EXIT_STRUCTURAL


def _multi_spec(text: str, n: int) -> tuple:
    idx = _int_list(text, "--multi")
    if any(not 1 <= i <= n for i in idx) or len(set(idx)) != len(idx):
        raise CliExit(EXIT_PARSE, f"--multi: need distinct indices in 1..{n}")
    return tuple(i - 1 for i in idx)


def cmd_fields(args) -> int:
    m = _validated_model(args)
    n, names = m.n, m.names
    if args.side == "left":
        series = la.lower_central_series(m.algebra)
        if not series.nilpotent:
            emit({"side": "left", "nilpotent": False, "witness": series.detail}, args.format)
            raise CliExit(EXIT_NOT_NILPOTENT, f"left-invariant fields need a nilpotent algebra; {series.detail}")

    def field_of(u):
        if args.side == "left":
            return li.left_invariant_field(m, u).field
        return ac.right_invariant_field(m, u)

    items = []
    if args.multi:
        idx = _multi_spec(args.multi, n)
        mv = (li.left_multivector if args.side == "left" else ac.right_multivector)(m, {idx: 1})
        label = "^".join(m.algebra.names[i] for i in idx)
        items.append({"label": label, "field": mv.to_text(names), "degree": mv.degree()})
    elif args.vector:
        u = _rational_list(args.vector, n, "--vector")
        X = field_of(u)
        items.append({"label": "(" + ", ".join(format_rational(c) for c in u) + ")", "field": X.to_text(names), "degree": X.degree()})
    else:
        for i in range(n):
            X = field_of([int(k == i) for k in range(n)])
            items.append({"label": m.algebra.names[i], "field": X.to_text(names), "degree": X.degree()})
    emit({"side": args.side, "fields": items}, args.format)
    return EXIT_OK


def cmd_bracket(args) -> int:
    m = _validated_model(args)
    try:
        f = Polynomial.parse(args.f, m.names)
        g = Polynomial.parse(args.g, m.names)
    except PolynomialParseError as exc:
        raise CliExit(EXIT_PARSE, f"parse error: {exc}") from None
    result = ac.poisson_bracket(m, f, g).to_text(m.names)
    if args.format == "text":
        print(result)
    else:
        emit({"f": f.to_text(m.names), "g": g.to_text(m.names), "bracket": result}, args.format)
    return EXIT_OK


def catalog_report(entry: catalog.CatalogEntry, golden: bool) -> tuple[dict, bool, list[str]]:
    """Full pipeline on a catalog entry; returns (report, ok, notes)."""
    rep, structural = validate_report(entry.algebra, entry.omega)
    m = entry.model()
    flags = rep["flags"]
    exp = entry.expected
    flag_ok = (
        flags["unimodular"] == exp["unimodular"]
        and bool(flags["nilpotent"]) == exp["nilpotent"]
        and (not exp["nilpotent"] or flags["nilpotent"] == exp["nilindex"])
        and flags["solvable"] == exp["solvable"]
    )
    report = {
        "id": entry.id,
        "title": entry.title,
        "validate": rep,
        "expected_flags_match": flag_ok,
        "tables": catalog.computed_tables(m),
        "lattice_notes": entry.lattice_notes,
    }
    ok = structural and flag_ok
    notes: list[str] = []
    if golden:
        diff = catalog.golden_compare(entry, m)
        report["golden"] = {
            "target": "oracle-resolved" if entry.printed is not None and entry.printed != entry.target else "printed",
            "diffs": list(diff.diffs),
        }
        if diff.printed_discrepancies:
            report["golden"]["printed_table_discrepancies"] = list(diff.printed_discrepancies)
            spots = sorted({d["tensor"] + (str(tuple(d["entry"])) if "entry" in d else "") for d in diff.printed_discrepancies})
            notes.append("paper-table discrepancy: computed tables differ from the printed ones at " + ", ".join(spots))
        ok = ok and diff.ok
    return report, ok, notes


def cmd_catalog(args) -> int:
    if args.id is None:
        emit({"entries": [{"id": k, "title": catalog.load(k).title} for k in catalog.CATALOG_IDS]}, args.format)
        return EXIT_OK
    try:
        entry = catalog.load(args.id)
    except KeyError as exc:
        raise CliExit(EXIT_PARSE, str(exc.args[0])) from None
    if args.export:
        sys.stdout.write(json.dumps(catalog.export_algebra_file(entry), indent=2, ensure_ascii=False) + "\n")
        return EXIT_OK
    report, ok, notes = catalog_report(entry, args.golden)
    emit(report, args.format)
    for note in notes:
        print(note, file=sys.stderr)
        if args.format == "text":
            print(note)
    return EXIT_OK if ok else EXIT_STRUCTURAL


# -- entry point ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polypoisson",
        description="Polynomial Poisson and symplectic tensors in the affine chart of a symplectic Lie group.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_file=True):
        if with_file:
            p.add_argument("path", help="algebra file (JSON)")
            p.add_argument("--vars", help="comma-separated chart variable names (default x1..xn)")
        p.add_argument("--format", choices=("text", "json", "latex"), default="text")

    p = sub.add_parser("validate", help="structural checks and flags")
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("chart", help="Poisson matrix, symplectic matrix, volume, degree table")
    common(p)
    for name in ("poisson", "symplectic", "volume", "degrees"):
        p.add_argument(f"--{name}", action="store_true")
    p.set_defaults(func=cmd_chart)

    p = sub.add_parser("fields", help="right- or left-invariant fields and multivectors")
    common(p)
    p.add_argument("--side", choices=("left", "right"), default="right")
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--vector", help="coefficients c1,...,cn of u")
    grp.add_argument("--basis", action="store_true", help="all basis vectors (default)")
    grp.add_argument("--multi", help="basis indices i,j,... of a decomposable multivector")
    p.set_defaults(func=cmd_fields)

    p = sub.add_parser("bracket", help="Poisson bracket {f, g} of chart polynomials")
    common(p)
    p.add_argument("-f", required=True)
    p.add_argument("-g", required=True)
    p.set_defaults(func=cmd_bracket)

    p = sub.add_parser("catalog", help="built-in examples")
    p.add_argument("id", nargs="?", help=f"one of {', '.join(catalog.CATALOG_IDS)}; omit to list")
    common(p, with_file=False)
    p.add_argument("--golden", action="store_true", help="compare against the stored tables")
    p.add_argument("--export", action="store_true", help="print the entry as an algebra file")
    p.set_defaults(func=cmd_catalog)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses 2 for usage errors; that code is reserved here
        return EXIT_OK if exc.code == 0 else EXIT_PARSE
    try:
        return args.func(args)
    except CliExit as exc:
        if exc.message:
            print(exc.message, file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
