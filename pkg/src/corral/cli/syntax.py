"""Text format: tokenizer, parser and printer.

A file is a sequence of documents ``KIND NAME { statement; ... }``. Comments
run from ``#`` to the end of the line. The parser checks syntax and that
names resolve inside a document; cross-document references (germ spaces,
morphism endpoints) are resolved when the document is built.
"""

import math
import re
from dataclasses import dataclass
from typing import List

from ..errors import ParseError
from ..expr import Add, Const, Exp, Expr, InteriorExpr, Mul, Neg, Var, variables
from .documents import KINDS, Document

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+|\#[^\n]*)
  | (?P<nl>\n)
  | (?P<num>\d+\.\d*(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+|\.\d+(?:[eE][+-]?\d+)?|\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_.']*)
  | (?P<arrow>->)
  | (?P<punct>[{}();,=+*^\-\[\]])
""", re.VERBOSE)

KEYWORDS = {
    "monoid": "monoid_presentation",
    "affine": "affine_monoid",
    "model": "local_model",
    "germpair": "germ_pair",
    "cring": "cring_presentation",
    "point": "point",
    "morphism": "morphism",
}
KIND_WORD = {v: k for k, v in KEYWORDS.items()}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> List[Token]:
    out, line, start, pos = [], 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line, start = line + 1, m.end()
        elif kind != "ws":
            out.append(Token(kind, m.group(), line, m.start() - start + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - start + 1))
    return out


class Parser:
    def __init__(self, text):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        return ParseError(msg, tok.line, tok.col)

    def next(self):
        t = self.tok
        self.i += 1
        return t

    def at(self, text):
        return self.tok.text == text and self.tok.kind in ("punct", "arrow", "name")

    def expect(self, text):
        if not self.at(text):
            raise self.error(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        return self.next()

    def name(self):
        if self.tok.kind != "name":
            raise self.error(f"expected a name, found {self.tok.text or 'end of input'!r}")
        return self.next().text

    def _sign(self):
        if self.at("-"):
            self.next()
            return -1
        return 1

    def integer(self):
        sign = self._sign()
        t = self.tok
        if t.kind != "num" or not t.text.isdigit():
            raise self.error("expected an integer")
        self.next()
        return sign * int(t.text)

    def number(self):
        sign = self._sign()
        t = self.tok
        if t.kind != "num":
            raise self.error("expected a number")
        self.next()
        return sign * (int(t.text) if t.text.isdigit() else float(t.text))

    def end(self):
        self.expect(";")

    # documents

    def documents(self):
        docs = []
        while self.tok.kind != "eof":
            docs.append(self.document())
        return docs

    def document(self):
        head = self.tok
        word = self.name()
        if word not in KEYWORDS:
            raise self.error(f"unknown document kind {word!r}", head)
        kind = KEYWORDS[word]
        name = self.name()
        self.expect("{")
        payload = getattr(self, "_" + kind)()
        self.expect("}")
        return Document(kind, name, payload)

    def _statements(self, handlers):
        while not self.at("}"):
            if self.tok.kind == "eof":
                raise self.error("missing '}'")
            head = self.tok
            word = self.name()
            if word not in handlers:
                raise self.error(f"unexpected statement {word!r}", head)
            handlers[word](head)
            self.end()

    def _monoid_presentation(self):
        gens, rels, pending = [], [], []

        def g(_):
            while self.tok.kind == "name":
                t = self.tok
                n = self.name()
                if n in gens:
                    raise self.error(f"duplicate generator {n!r}", t)
                gens.append(n)

        def r(_):
            lhs = self.additive()
            self.expect("=")
            pending.append((lhs, self.additive()))

        self._statements({"gens": g, "rel": r})
        for lhs, rhs in pending:
            rels.append([self.vector(lhs, gens), self.vector(rhs, gens)])
        return {"generators": gens, "relations": rels}

    def additive(self):
        """Terms ``[k[*]]name`` joined by '+', or the literal 0."""
        terms = []
        if self.tok.kind == "num" and self.tok.text == "0" and self.toks[self.i + 1].text in (";", "="):
            self.next()
            return terms
        while True:
            k = 1
            if self.tok.kind == "num":
                k = self.integer()
                if self.at("*"):
                    self.next()
            t = self.tok
            terms.append((self.name(), k, t))
            if not self.at("+"):
                return terms
            self.next()

    def vector(self, terms, names):
        v = [0] * len(names)
        for n, k, t in terms:
            if n not in names:
                raise self.error(f"undeclared generator {n!r}", t)
            v[names.index(n)] += k
        return v

    def tuple_(self, num=None):
        num = num or self.integer
        self.expect("(")
        out = []
        if not self.at(")"):
            out.append(num())
            while self.at(","):
                self.next()
                out.append(num())
        self.expect(")")
        return out

    def _affine_monoid(self):
        data = {"free_rank": None, "torsion": [], "names": [], "vectors": []}

        def amb(_):
            data["free_rank"] = self.integer()
            if self.at("torsion"):
                self.next()
                while self.tok.kind == "num":
                    data["torsion"].append(self.integer())

        def gen(head):
            n = self.name()
            if n in data["names"]:
                raise self.error(f"duplicate generator {n!r}", head)
            self.expect("=")
            data["names"].append(n)
            data["vectors"].append(self.tuple_())

        self._statements({"ambient": amb, "gen": gen})
        if data["free_rank"] is None:
            raise self.error("affine monoid needs an 'ambient' statement")
        dim = data["free_rank"] + len(data["torsion"])
        for v in data["vectors"]:
            if len(v) != dim:
                raise self.error(f"generator vector has length {len(v)}, expected {dim}")
        return data

    def monomial(self):
        terms = []
        if self.tok.kind == "num" and self.tok.text == "1":
            self.next()
            return terms
        while True:
            t = self.tok
            n = self.name()
            k = 1
            if self.at("^"):
                self.next()
                k = self.integer()
            terms.append((n, k, t))
            if not self.at("*"):
                return terms
            self.next()

    def _local_model(self):
        names, pending = [], []

        def vs(_):
            while self.tok.kind == "name":
                names.append(self.name())

        def binom(_):
            lhs = self.monomial()
            self.expect("=")
            pending.append((lhs, self.monomial()))

        self._statements({"vars": vs, "binom": binom})
        rels = [[self.vector(a, names), self.vector(b, names)] for a, b in pending]
        return {"variables": names, "binomials": rels}

    def _germ_pair(self):
        spaces, maps = {}, {}

        def space(head):
            key = head.text
            self.expect("free")
            free = self.integer()
            self.expect("gens")
            gens = []
            while self.at("("):
                gens.append(self.tuple_())
            spaces[key] = {"free": free, "generators": gens}

        def germ(head):
            key = head.text
            part = self.name()
            if part not in ("phi", "jac"):
                raise self.error("expected 'phi' or 'jac'")
            rows = []
            while self.at("("):
                rows.append(self.tuple_(self.integer if part == "phi" else self.number))
            maps.setdefault(key, {})[part] = rows

        self._statements({"X": space, "Y": space, "Z": space, "g": germ, "h": germ})
        for k in ("X", "Y", "Z"):
            if k not in spaces:
                raise self.error(f"germ pair is missing space {k}")
        for k in ("g", "h"):
            if set(maps.get(k, {})) != {"phi", "jac"}:
                raise self.error(f"germ {k} needs both phi and jac")
        return {"spaces": spaces, "maps": maps}

    # expressions

    def expr(self):
        terms = [self.term()]
        while self.at("+") or self.at("-"):
            if self.next().text == "-":
                terms.append(Neg(self.term()))
            else:
                terms.append(self.term())
        return terms[0] if len(terms) == 1 else Add(tuple(terms))

    def term(self):
        factors = [self.factor()]
        while self.at("*"):
            self.next()
            factors.append(self.factor())
        return factors[0] if len(factors) == 1 else Mul(tuple(factors))

    def factor(self):
        if self.at("-"):
            self.next()
            literal = self.tok.kind == "num"
            inner = self.factor()
            # only a sign written directly on a number is folded into it
            if literal and isinstance(inner, Const):
                return Const(-inner.value)
            return Neg(inner)
        base = self.atom()
        if self.at("^"):
            self.next()
            k = self.integer()
            if k < 0:
                raise self.error("negative powers are not allowed")
            return base ** k
        return base

    def atom(self):
        t = self.tok
        if t.kind == "num":
            self.next()
            return Const(float(t.text))
        if self.at("("):
            self.next()
            e = self.expr()
            self.expect(")")
            return e
        n = self.name()
        if n != "exp":
            return Var(n)
        if not self.at("("):
            raise self.error("'exp' needs an argument", t)
        self.next()
        e = self.expr()
        self.expect(")")
        return Exp(e)

    def checked_expr(self, known):
        start = self.tok
        e = self.expr()
        bad = sorted(variables(e) - set(known))
        if bad:
            raise self.error(f"undeclared generator {bad[0]!r}", start)
        return e

    def _cring_presentation(self):
        data = {"real": [], "interior": [], "real_relations": [], "interior_relations": []}

        def names(key):
            def handler(_):
                while self.tok.kind == "name":
                    t = self.tok
                    n = self.name()
                    if n in data["real"] or n in data["interior"]:
                        raise self.error(f"duplicate generator {n!r}", t)
                    data[key].append(n)
            return handler

        def realrel(_):
            known = data["real"] + data["interior"]
            lhs = self.checked_expr(known)
            if self.at("="):
                self.next()
                lhs = Add((lhs, Neg(self.checked_expr(known))))
            data["real_relations"].append(print_expr(lhs))

        def rel(_):
            known = data["real"] + data["interior"]
            sides = []
            for k in range(2):
                t = self.tok
                e = self.checked_expr(known)
                try:
                    sides.append(print_interior(to_interior(e, data["interior"])))
                except ValueError as err:
                    raise self.error(str(err), t) from None
                if k == 0:
                    self.expect("=")
            data["interior_relations"].append(sides)

        self._statements({"real": names("real"), "interior": names("interior"),
                          "realrel": realrel, "rel": rel})
        return data

    def _point(self):
        values = []

        def assign(head):
            self.expect("=")
            if any(n == head.text for n, _ in values):
                raise self.error(f"duplicate coordinate {head.text!r}", head)
            values.append([head.text, float(self.number())])

        while not self.at("}"):
            if self.tok.kind == "eof":
                raise self.error("missing '}'")
            head = self.tok
            self.name()
            assign(head)
            self.end()
        return {"values": values}

    def _morphism(self):
        data = {"source": None, "target": None, "images": []}

        def frm(_):
            data["source"] = self.name()

        def to(_):
            data["target"] = self.name()

        self.expect("from")
        frm(None)
        self.end()
        self.expect("to")
        to(None)
        self.end()
        while not self.at("}"):
            if self.tok.kind == "eof":
                raise self.error("missing '}'")
            n = self.name()
            self.expect("->")
            data["images"].append([n, print_expr(self.expr())])
            self.end()
        return data


def parse_documents(text: str) -> List[Document]:
    return Parser(text).documents()


def parse_expr(text: str) -> Expr:
    p = Parser(text)
    e = p.expr()
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.text!r}")
    return e


def to_interior(e: Expr, interior) -> InteriorExpr:
    """Normal form y^alpha exp(f) of a product of interior generators,
    exponentials and positive constants."""
    factors = e.factors if isinstance(e, Mul) else (e,)
    exps, logs = {}, []
    for f in factors:
        if isinstance(f, Var) and f.name in interior:
            exps[f.name] = exps.get(f.name, 0) + 1
        elif isinstance(f, Exp):
            logs.append(f.arg)
        elif isinstance(f, Const) and f.value > 0:
            if f.value != 1.0:
                logs.append(Const(math.log(f.value)))
        else:
            raise ValueError("interior expressions are products of interior "
                             "generators, exp(...) and positive constants")
    if not logs:
        factor = Const(0.0)
    else:
        factor = logs[0] if len(logs) == 1 else Add(tuple(logs))
    return InteriorExpr(tuple(exps.items()), factor)


def _num(x):
    if isinstance(x, int):
        return str(x)
    if not math.isfinite(x):
        raise ValueError("non-finite number")
    return repr(float(x))


def print_expr(e: Expr) -> str:
    if isinstance(e, Const):
        text = _num(float(e.value))
        return "(" + text + ")" if text.startswith("-") else text
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Add):
        return "(" + " + ".join(print_expr(t) for t in e.terms) + ")"
    if isinstance(e, Mul):
        return "(" + " * ".join(print_expr(f) for f in e.factors) + ")"
    if isinstance(e, Neg):
        return "(-" + print_expr(e.arg) + ")"
    if isinstance(e, Exp):
        return "exp(" + print_expr(e.arg) + ")"
    raise TypeError(f"not an expression: {e!r}")


def print_interior(ie: InteriorExpr) -> str:
    return print_expr(ie.as_smooth())


def _additive(v, names):
    terms = [n if k == 1 else f"{k}{n}" for n, k in zip(names, v) if k]
    return " + ".join(terms) if terms else "0"


def _multiplicative(v, names):
    terms = [n if k == 1 else f"{n}^{k}" for n, k in zip(names, v) if k]
    return "*".join(terms) if terms else "1"


def _tuple(v):
    return "(" + ", ".join(_num(x) for x in v) + ")"


def print_document(doc: Document) -> str:
    p = doc.payload
    lines = [f"{KIND_WORD[doc.kind]} {doc.name} {{"]
    if doc.kind == "monoid_presentation":
        if p["generators"]:
            lines.append("  gens " + " ".join(p["generators"]) + ";")
        for u, v in p["relations"]:
            lines.append(f"  rel {_additive(u, p['generators'])} = {_additive(v, p['generators'])};")
    elif doc.kind == "affine_monoid":
        amb = f"  ambient {p['free_rank']}"
        if p["torsion"]:
            amb += " torsion " + " ".join(str(t) for t in p["torsion"])
        lines.append(amb + ";")
        for n, v in zip(p["names"], p["vectors"]):
            lines.append(f"  gen {n} = {_tuple(v)};")
    elif doc.kind == "local_model":
        if p["variables"]:
            lines.append("  vars " + " ".join(p["variables"]) + ";")
        for u, v in p["binomials"]:
            lines.append(f"  binom {_multiplicative(u, p['variables'])} = "
                         f"{_multiplicative(v, p['variables'])};")
    elif doc.kind == "germ_pair":
        for k in ("X", "Y", "Z"):
            s = p["spaces"][k]
            gens = " ".join(_tuple(v) for v in s["generators"])
            lines.append(f"  {k} free {s['free']} gens{' ' + gens if gens else ''};")
        for k in ("g", "h"):
            for part in ("phi", "jac"):
                rows = " ".join(_tuple(r) for r in p["maps"][k][part])
                lines.append(f"  {k} {part}{' ' + rows if rows else ''};")
    elif doc.kind == "cring_presentation":
        if p["real"]:
            lines.append("  real " + " ".join(p["real"]) + ";")
        if p["interior"]:
            lines.append("  interior " + " ".join(p["interior"]) + ";")
        for f in p["real_relations"]:
            lines.append(f"  realrel {f};")
        for g, h in p["interior_relations"]:
            lines.append(f"  rel {g} = {h};")
    elif doc.kind == "point":
        for n, v in p["values"]:
            lines.append(f"  {n} = {_num(float(v))};")
    elif doc.kind == "morphism":
        lines.append(f"  from {p['source']};")
        lines.append(f"  to {p['target']};")
        for n, e in p["images"]:
            lines.append(f"  {n} -> {e};")
    else:
        raise ValueError(f"unknown kind {doc.kind}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def print_documents(docs) -> str:
    return "\n".join(print_document(d) for d in docs)


assert set(KEYWORDS.values()) == set(KINDS)
