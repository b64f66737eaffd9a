"""Command line interface: element expressions, verification runs, suites.

Element expression language (no spaces inside literals)::

    expr    :=  term (('+' | '-') term)*
    term    :=  factor ('*' factor)*
    factor  :=  atom ('^' integer)?          # ^ binds tightest
    atom    :=  literal | T<k> | x[c1,...,cn] | '(' expr ')'
    literal :=  1.5 | 2+0.5i | 0.5i | ...    # complex, i suffix

``T1 .. Tn`` are the finite generators; ``T0 = x^{phi_vee} (T_{s_phi})^{-1}``
is the affine generator, expanded through the algebra engines.  ``x[c1,..,cn]``
is the lattice monomial with the given integer exponent vector.  ``+``/``-``/
``*`` are left-associative; ``^`` takes an integer exponent and binds tighter
than ``*``.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import re
import sys
from dataclasses import dataclass

from .hecke_core import HeckeAlgebra, HeckeElement, make_params
from .plancherel import (
    BoundaryParameters,
    constants,
    residue_constant_checks,
    rhs_lhs_table,
    spectral_terms,
    verify,
)
from .reps import check_relations, one_dim_catalog
from .root_data import datum_from_tag

__all__ = [
    "BadExponentVector",
    "UnknownGenerator",
    "build_element",
    "main",
    "parse_element",
    "pretty",
    "run_suite",
    "run_verify",
]


class UnknownGenerator(ValueError):
    """An identifier that is not T<k> (k in range) or x[...]."""


class BadExponentVector(ValueError):
    """A monomial exponent vector of wrong arity or non-integer entries."""


# ---------------------------------------------------------------------------
# AST.

@dataclass(frozen=True)
class Lit:
    value: complex


@dataclass(frozen=True)
class Gen:
    index: int


@dataclass(frozen=True)
class Mono:
    exponents: tuple


@dataclass(frozen=True)
class BinOp:
    op: str  # '+', '-', '*'
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int


_NUM = r"(?:\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)"
_RE_COMPLEX = re.compile(rf"{_NUM}i?(?:[+-]{_NUM}i)?")
_RE_GEN = re.compile(r"[A-Za-z]\w*")
_RE_INT = re.compile(r"-?\d+")


def _syntax_error(src: str, pos: int, message: str) -> SyntaxError:
    offset = len(src[:pos].encode("utf-8"))
    err = SyntaxError(f"{message} at byte offset {offset}")
    err.offset = offset
    return err


class _Parser:
    def __init__(self, src: str, rank: int | None):
        self.src = src
        self.pos = 0
        self.rank = rank

    def _skip_ws(self):
        while self.pos < len(self.src) and self.src[self.pos].isspace():
            self.pos += 1

    def _peek(self):
        self._skip_ws()
        return self.src[self.pos] if self.pos < len(self.src) else ""

    def parse(self):
        node = self.expr()
        self._skip_ws()
        if self.pos != len(self.src):
            raise _syntax_error(self.src, self.pos, "unexpected trailing input")
        return node

    def expr(self):
        node = self.term()
        while self._peek() in ("+", "-"):
            op = self.src[self.pos]
            self.pos += 1
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self._peek() == "*":
            self.pos += 1
            node = BinOp("*", node, self.factor())
        return node

    def factor(self):
        node = self.atom()
        if self._peek() == "^":
            self.pos += 1
            self._skip_ws()
            m = _RE_INT.match(self.src, self.pos)
            if not m:
                raise _syntax_error(self.src, self.pos, "expected integer exponent")
            self.pos = m.end()
            node = Pow(node, int(m.group()))
        return node

    def atom(self):
        ch = self._peek()
        if not ch:
            raise _syntax_error(self.src, self.pos, "unexpected end of input")
        if ch == "(":
            self.pos += 1
            node = self.expr()
            if self._peek() != ")":
                raise _syntax_error(self.src, self.pos, "expected ')'")
            self.pos += 1
            return node
        if ch.isdigit() or ch == ".":
            m = _RE_COMPLEX.match(self.src, self.pos)
            if not m:
                raise _syntax_error(self.src, self.pos, "malformed number")
            self.pos = m.end()
            return Lit(_parse_complex(m.group()))
        if ch == "x":
            return self._monomial()
        if ch.isalpha():
            m = _RE_GEN.match(self.src, self.pos)
            name = m.group()
            if re.fullmatch(r"T\d+", name):
                k = int(name[1:])
                if self.rank is not None and not (0 <= k <= self.rank):
                    raise UnknownGenerator(
                        f"generator {name} out of range for rank {self.rank}"
                    )
                self.pos = m.end()
                return Gen(k)
            raise UnknownGenerator(f"unknown generator {name!r}")
        raise _syntax_error(self.src, self.pos, f"unexpected character {ch!r}")

    def _monomial(self):
        start = self.pos
        self.pos += 1  # consume 'x'
        if self._peek() != "[":
            raise UnknownGenerator("bare 'x' is not a generator; use x[c1,...,cn]")
        self.pos += 1
        entries = []
        while True:
            self._skip_ws()
            m = _RE_INT.match(self.src, self.pos)
            if not m:
                raise BadExponentVector(
                    f"non-integer entry in exponent vector at position {self.pos}"
                )
            entries.append(int(m.group()))
            self.pos = m.end()
            ch = self._peek()
            if ch == ",":
                self.pos += 1
                continue
            if ch == "]":
                self.pos += 1
                break
            raise _syntax_error(self.src, self.pos, "expected ',' or ']'")
        if self.rank is not None and len(entries) != self.rank:
            raise BadExponentVector(
                f"exponent vector {self.src[start:self.pos]!r} has"
                f" {len(entries)} entries; rank is {self.rank}"
            )
        return Mono(tuple(entries))


def _parse_complex(text: str) -> complex:
    # Forms: NUM, NUMi, NUM+NUMi, NUM-NUMi.
    m = re.fullmatch(rf"({_NUM})(i?)(?:([+-])({_NUM})i)?", text)
    re_part, imag_flag, sign, im_part = m.groups()
    if imag_flag:
        return complex(0.0, float(re_part))
    if im_part is None:
        return complex(float(re_part), 0.0)
    im = float(im_part)
    return complex(float(re_part), -im if sign == "-" else im)


def parse_element(src: str, rank: int | None = None):
    """Parse an element expression into an AST."""
    return _Parser(src, rank).parse()


# ---------------------------------------------------------------------------
# Pretty printer (fixed point of pretty . parse).

def _fmt_float(v: float) -> str:
    if v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


def _fmt_complex(c: complex) -> str:
    if c.imag == 0:
        return _fmt_float(c.real)
    if c.real == 0:
        return _fmt_float(c.imag) + "i"
    sign = "-" if c.imag < 0 else "+"
    return _fmt_float(c.real) + sign + _fmt_float(abs(c.imag)) + "i"


_PREC = {"+": 1, "-": 1, "*": 2}


def pretty(node, parent_prec: int = 0, right: bool = False) -> str:
    if isinstance(node, Lit):
        text = _fmt_complex(node.value)
        # A negative or composite literal needs parens in any binary context.
        if parent_prec > 0 and (text.startswith("-") or "+" in text[1:] or "-" in text[1:].replace("e-", "")):
            return "(" + text + ")"
        return text
    if isinstance(node, Gen):
        return f"T{node.index}"
    if isinstance(node, Mono):
        return "x[" + ",".join(str(e) for e in node.exponents) + "]"
    if isinstance(node, Pow):
        return pretty(node.base, 3) + "^" + str(node.exponent)
    if isinstance(node, BinOp):
        prec = _PREC[node.op]
        text = (
            pretty(node.left, prec)
            + node.op
            + pretty(node.right, prec, right=True)
        )
        # Left associativity: a right child at equal precedence needs parens,
        # and any child at lower precedence does.
        if prec < parent_prec or (right and prec == parent_prec):
            return "(" + text + ")"
        return text
    raise TypeError(f"not an element AST node: {node!r}")


# ---------------------------------------------------------------------------
# Evaluation.

def _affine_generator(algebra: HeckeAlgebra) -> HeckeElement:
    """T0 = x^{phi_vee} (T_{s_phi})^{-1}, expanded through the engines."""
    datum = algebra.datum
    word = datum.weyl[datum.s_phi_index].word
    inv = algebra.one()
    for i in reversed(word):
        inv = algebra.bernstein_mult(inv, _gen_inverse(algebra, algebra.T(i)))
    return algebra.bernstein_mult(algebra.x(datum.highest_root.coroot), inv)


def _gen_inverse(algebra: HeckeAlgebra, t: HeckeElement) -> HeckeElement:
    """Inverse of a generator via its quadratic relation t^2 = a t + b."""
    sq = algebra.bernstein_mult(t, t)
    key_t = next(iter(t.terms))
    a = sq.coefficient(key_t)
    zero = (0,) * algebra.datum.rank
    b = sq.coefficient((0, zero))
    if abs(b) < 1e-14:
        raise ValueError("generator is not invertible")
    return (t - algebra.one().scale(a)).scale(1.0 / b)


def build_element(node, algebra: HeckeAlgebra) -> HeckeElement:
    """Evaluate an element AST inside the given algebra (Bernstein basis)."""
    if isinstance(node, Lit):
        return algebra.one().scale(node.value)
    if isinstance(node, Gen):
        if node.index == 0:
            return _affine_generator(algebra)
        if not 1 <= node.index <= algebra.datum.rank:
            raise UnknownGenerator(
                f"generator T{node.index} out of range for rank {algebra.datum.rank}"
            )
        return algebra.T(node.index)
    if isinstance(node, Mono):
        if len(node.exponents) != algebra.datum.rank:
            raise BadExponentVector(
                f"exponent vector has {len(node.exponents)} entries;"
                f" rank is {algebra.datum.rank}"
            )
        return algebra.x(node.exponents)
    if isinstance(node, BinOp):
        left = build_element(node.left, algebra)
        right = build_element(node.right, algebra)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        return algebra.bernstein_mult(left, right)
    if isinstance(node, Pow):
        n = node.exponent
        if n < 0:
            if isinstance(node.base, Mono):
                base = algebra.x(tuple(-e for e in node.base.exponents))
            elif isinstance(node.base, Gen):
                base = _gen_inverse(algebra, build_element(node.base, algebra))
            else:
                raise ValueError("negative powers only supported for T_i and x[...]")
            n = -n
        else:
            base = build_element(node.base, algebra)
        out = algebra.one()
        for _ in range(n):
            out = algebra.bernstein_mult(out, base)
        return out
    raise TypeError(f"not an element AST node: {node!r}")


# ---------------------------------------------------------------------------
# Reports.

def _json_bytes(payload) -> bytes:
    return json.dumps(
        payload, sort_keys=True, separators=(",", ":"), allow_nan=False
    ).encode("utf-8")


def _write_csv(path: str, reports) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["type", "params", "element", "term_label", "value_re", "value_im"]
        )
        for report in reports:
            params = ";".join(
                f"{k}={v}" for k, v in sorted(report["params"].items())
            )
            for entry in report["breakdown"]:
                writer.writerow(
                    [
                        report["type"],
                        params,
                        report["element_src"],
                        entry["label"],
                        repr(entry["value"]["re"]),
                        repr(entry["value"]["im"]),
                    ]
                )


def run_verify(args) -> int:
    try:
        datum = datum_from_tag(args.type)
    except Exception as exc:
        print(f"error: bad type tag {args.type!r}: {exc}", file=sys.stderr)
        return 2
    try:
        values = tuple(float(v) for v in args.q.split(","))
        params = make_params(datum, values)
    except Exception as exc:
        print(f"error: bad parameters {args.q!r}: {exc}", file=sys.stderr)
        return 2

    reports = []
    all_pass = True
    algebra = HeckeAlgebra(datum, params)
    for src in args.element:
        try:
            ast = parse_element(src, datum.rank)
            h = build_element(ast, algebra)
        except (SyntaxError, UnknownGenerator, BadExponentVector) as exc:
            print(f"error: cannot parse {src!r}: {exc}", file=sys.stderr)
            return 2
        try:
            report = verify(
                args.type, params, h, resolution=args.resolution, element_src=src
            )
        except BoundaryParameters as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        reports.append(report)
        status = "ok" if report["rel_err"] < args.tolerance else "FAIL"
        if status == "FAIL":
            all_pass = False
        print(
            f"{args.type} {src!r}: lhs={report['lhs']['re']:+.9g}"
            f"{report['lhs']['im']:+.3g}i rhs={report['rhs']['re']:+.9g}"
            f"{report['rhs']['im']:+.3g}i rel_err={report['rel_err']:.3e} {status}"
        )

    payload = {"schema_version": "1", "reports": reports}
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(_json_bytes(payload))
    if args.csv:
        _write_csv(args.csv, reports)
    return 0 if all_pass else 1


# ---------------------------------------------------------------------------
# Suite.

_SUITE_ROUNDTRIP = [
    "1", "2.5", "0.5i", "2+0.5i", "1-2i", "T1", "T0", "x[1,0]", "x[-2,1]",
    "T1+T2", "T1-T2", "T1*T2", "T1*T2*T1", "T1^2", "T1^-1", "x[1,1]^-2",
    "T1+T2*x[1,0]", "(T1+T2)*x[1,0]", "T1*(T2+x[0,1])", "2*T1", "2.5*T1+1",
    "T1*T2+T2*T1", "(T1-T2)^2", "T0*T1*T2", "x[2,-1]*T1", "1+2i",
    "(1+2i)*T1", "T1^3*x[1,1]", "((T1))", "T1-1", "1-T1", "T1+T2+T1",
    "T1-T2-T1", "T1-(T2-T1)", "T1*T2^2", "(T1*T2)^2", "x[0,0]", "x[1,-2]^3",
    "0.25*x[1,0]+0.75*x[0,1]", "T2*T1*T2*T1", "T0^2", "T0+T0", "3i*T1",
    "T1*3", "(T1+1)*(T2-1)", "x[1,0]*x[0,1]", "x[1,0]+x[-1,0]",
    "T1*x[1,0]*T2", "2e3*T1", "1.5e-2+2i",
]


def run_suite(args) -> int:
    rows = []

    def record(name, ok, detail):
        rows.append((name, "ok" if ok else "FAIL", detail))
        return ok

    passed = True

    # Parser round trip: pretty . parse is a fixed point.
    worst = None
    for src in _SUITE_ROUNDTRIP:
        p1 = pretty(parse_element(src, 2))
        p2 = pretty(parse_element(p1, 2))
        if p1 != p2:
            worst = f"{src!r} -> {p1!r} -> {p2!r}"
            break
    passed &= record(
        "parser-roundtrip", worst is None, worst or f"{len(_SUITE_ROUNDTRIP)} exprs"
    )

    # Appendix-constant fixtures.
    a_23 = constants("C2Q", (2.0, 3.0))["A"]
    passed &= record(
        "constant-C2Q-A", abs(a_23 - 85.0 / 336.0) < 1e-12, f"A(2,3)={a_23:.12g}"
    )
    worst = 0.0
    for tag, vals in [
        ("A1Q", (2.0,)),
        ("A1P", (3.0,)),
        ("BC1Q", (2.0, 5.0)),
        ("A2Q", (2.0,)),
        ("A2P", (3.0,)),
    ]:
        for check in residue_constant_checks(tag, vals):
            worst = max(worst, abs(check["constant"] - check["residue"]))
    passed &= record("constant-residues", worst < 1e-8, f"worst={worst:.2e}")

    # Discrete-series fixtures: the catalog satisfies the defining relations.
    worst = 0.0
    for tag, vals in [
        ("C2Q", (2.0, 3.0)),
        ("C2P", (2.0, 3.0)),
        ("G2Q", (2.0, 3.0)),
        ("BC2Q", (5.0, 2.0, 3.0)),
    ]:
        datum = datum_from_tag(tag)
        params = make_params(datum, vals)
        for rep in one_dim_catalog(datum, params).values():
            worst = max(worst, check_relations(datum, params, rep))
    passed &= record("one-dim-relations", worst < 1e-10, f"worst={worst:.2e}")

    # Trace identity on a fast configuration, plus a negative control: a
    # perturbed mass must break the identity.
    table = rhs_lhs_table("BC1Q", (2.0, 5.0), resolution=128)
    passed &= record(
        "plancherel-BC1Q",
        table["worst_rel_err"] < 1e-8,
        f"worst={table['worst_rel_err']:.2e}",
    )
    terms = spectral_terms("BC1Q", (2.0, 5.0))
    terms[1].mass *= 1.001
    bad = rhs_lhs_table("BC1Q", (2.0, 5.0), resolution=128, terms=terms)
    passed &= record(
        "negative-control",
        bad["worst_rel_err"] > 1e-5,
        f"perturbed worst={bad['worst_rel_err']:.2e}",
    )

    # Property battery: JSON determinism of a report.
    report = verify(
        "A1Q", (2.0,), HeckeAlgebra(
            datum_from_tag("A1Q"), make_params(datum_from_tag("A1Q"), (2.0,))
        ).T(1), resolution=64, element_src="T1",
    )
    passed &= record(
        "json-determinism",
        _json_bytes(report) == _json_bytes(json.loads(_json_bytes(report))),
        "byte-identical",
    )

    width = max(len(r[0]) for r in rows)
    print(f"{'check'.ljust(width)}  status  detail")
    for name, status, detail in rows:
        print(f"{name.ljust(width)}  {status:6}  {detail}")
    print(f"{sum(1 for r in rows if r[1] == 'ok')}/{len(rows)} checks passed")
    return 0 if passed else 1


# ---------------------------------------------------------------------------
# Entry point.

def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="ahecke",
        description="Verify the trace decomposition of affine Hecke algebras.",
    )
    parser.add_argument("--type", help="type tag, e.g. A1Q, C2P, BC2Q")
    parser.add_argument("--q", help="comma-separated parameters, e.g. 2.0,3.0")
    parser.add_argument(
        "--element",
        action="append",
        default=[],
        help="element expression (repeatable), e.g. 'T1*x[1,0]'",
    )
    parser.add_argument("--resolution", type=int, default=256)
    parser.add_argument("--out", help="write JSON report to this path")
    parser.add_argument("--csv", help="write per-term CSV breakdown to this path")
    parser.add_argument("--suite", action="store_true", help="run the self-test suite")
    parser.add_argument("--tolerance", type=float, default=1e-5)
    args = parser.parse_args(argv)

    if args.suite:
        return run_suite(args)
    if not args.type or not args.q:
        parser.print_usage(sys.stderr)
        print("error: --type and --q are required (or use --suite)", file=sys.stderr)
        return 2
    return run_verify(args)


if __name__ == "__main__":
    sys.exit(main())
