"""
pp_dsl.py
---------
One-line text syntax for pp formulas, and the printer that produces it.

    [x1:P, x2:Q |] [E y1:Q, y2:Q .] equation ; equation ; ...

An equation is `sum = sum` (or a bare `sum`, read as `sum = 0`). A term is a
variable, `var*morph` (right modules), `morph*var` (left modules, also accepted
on the right), or the literal 0. A morphism is an integer n (n times the
identity), a generator label, a parenthesised sum such as `(1 + 2*e)`, or an
explicit `{P->Q:c1,c2}` in coordinates of the acting category.

Free variables are the declared ones, or else every name of the form x, x1,
x2, … in order of their index. On a one-object ring sorts may be omitted.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from errors import DslSyntaxError, SortMismatch
from groups import Element
from modules import acting_category
from pp_formula import PpFormula, make_formula
from ringoid import Ringoid

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<arrow>->)|(?P<sym>[:,|.=+\-*;(){}]))")
_FREE_NAME = re.compile(r"^x(\d*)$")


@dataclass
class Token:
    kind: str
    text: str
    column: int


def tokenize(text: str, line: int = 1) -> list[Token]:
    tokens, pos = [], 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN.match(text, pos)
        if not match:
            col = pos + 1 + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise DslSyntaxError(f"unexpected character {text[col - 1]!r}", line, col)
        kind = match.lastgroup
        start = match.start(kind) + 1
        tokens.append(Token(kind, match.group(kind), start))
        pos = match.end()
    tokens.append(Token("end", "", len(text) + 1))
    return tokens


# --- morphism expressions: [(coefficient, label | None)] or an explicit element ---

@dataclass
class MorphExpr:
    parts: list[tuple[int, str | None]]
    explicit: tuple[str, str, tuple[int, ...]] | None = None
    column: int = 1


@dataclass
class Term:
    sign: int
    var: str
    morph: MorphExpr
    column: int


class _Parser:
    def __init__(self, text: str, R: Ringoid, side: str, line: int):
        self.tokens = tokenize(text, line)
        self.i = 0
        self.R = R
        self.side = side
        self.line = line

    # -- token helpers --
    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.i + offset, len(self.tokens) - 1)]

    def error(self, message: str, token: Token | None = None):
        token = token or self.tok
        raise DslSyntaxError(message, self.line, token.column)

    def accept(self, text: str) -> bool:
        if self.tok.text == text and self.tok.kind != "end":
            self.i += 1
            return True
        return False

    def expect(self, text: str):
        if not self.accept(text):
            self.error(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")

    def name(self) -> Token:
        if self.tok.kind != "name":
            self.error(f"expected a name, found {self.tok.text or 'end of input'!r}")
        token = self.tok
        self.i += 1
        return token

    # -- grammar --
    def declarations(self, stop: str) -> list[tuple[str, str | None]]:
        decls = []
        while True:
            var = self.name()
            sort = None
            if self.accept(":"):
                sort_tok = self.name()
                if sort_tok.text not in self.R.objects:
                    self.error(f"unknown object {sort_tok.text!r}", sort_tok)
                sort = sort_tok.text
            decls.append((var.text, sort))
            if self.accept(","):
                continue
            self.expect(stop)
            return decls

    def has_free_prefix(self) -> bool:
        for t in self.tokens[self.i:]:
            if t.text == "|":
                return True
            if t.text in ("=", ";", "."):
                return False
        return False

    def morph_atom(self) -> MorphExpr:
        tok = self.tok
        if tok.kind == "int":
            self.i += 1
            return MorphExpr([(int(tok.text), None)], column=tok.column)
        if tok.kind == "name":
            self.i += 1
            return MorphExpr([(1, tok.text)], column=tok.column)
        if self.accept("("):
            parts = []
            sign = -1 if self.accept("-") else 1
            while True:
                coeff, label = 1, None
                if self.tok.kind == "int":
                    coeff = int(self.tok.text)
                    self.i += 1
                    if self.accept("*"):
                        label = self.name().text
                else:
                    label = self.name().text
                parts.append((sign * coeff, label))
                if self.accept("+"):
                    sign = 1
                elif self.accept("-"):
                    sign = -1
                else:
                    break
            self.expect(")")
            return MorphExpr(parts, column=tok.column)
        if self.accept("{"):
            dom = self.name().text
            self.expect("->")
            cod = self.name().text
            self.expect(":")
            coords = []
            while self.tok.kind == "int":
                coords.append(int(self.tok.text))
                self.i += 1
                if not self.accept(","):
                    break
            self.expect("}")
            return MorphExpr([], (dom, cod, tuple(coords)), column=tok.column)
        self.error(f"expected a morphism, found {tok.text or 'end of input'!r}")

    def term(self, sign: int, variables: set[str]) -> Term | None:
        tok = self.tok
        if tok.kind == "int" and tok.text == "0" and self.peek().text != "*":
            self.i += 1
            return None
        if tok.kind == "name" and self._is_variable(tok.text, variables):
            self.i += 1
            if self.accept("*"):
                return Term(sign, tok.text, self.morph_atom(), tok.column)
            return Term(sign, tok.text, MorphExpr([(1, None)], column=tok.column), tok.column)
        morph = self.morph_atom()
        self.expect("*")
        var = self.name()
        if not self._is_variable(var.text, variables):
            self.error(f"unknown variable {var.text!r}", var)
        return Term(sign, var.text, morph, tok.column)

    def _is_variable(self, name: str, variables: set[str]) -> bool:
        return name in variables or bool(_FREE_NAME.match(name))

    def side_of_equation(self, variables: set[str], sign: int) -> list[Term]:
        terms = []
        s = -1 if self.accept("-") else 1
        while True:
            t = self.term(sign * s, variables)
            if t is not None:
                terms.append(t)
            if self.accept("+"):
                s = 1
            elif self.accept("-"):
                s = -1
            else:
                return terms

    def equations(self, variables: set[str]) -> list[list[Term]]:
        eqs = []
        while True:
            terms = self.side_of_equation(variables, 1)
            if self.accept("="):
                terms += self.side_of_equation(variables, -1)
            eqs.append(terms)
            if self.accept(";"):
                continue
            if self.tok.kind != "end":
                self.error(f"unexpected {self.tok.text!r}")
            return eqs


def _default_sort(R: Ringoid, var: str, line: int, column: int) -> str:
    if R.is_ring:
        return R.objects[0]
    raise DslSyntaxError(f"declare the sort of {var!r} on a multi-object ringoid", line, column)


def _resolve(A: Ringoid, expr: MorphExpr, dom: str, index) -> dict[str, Element]:
    """Every codomain the expression makes sense for, with its coordinates there."""
    if expr.explicit is not None:
        P, Q, coords = expr.explicit
        if P != dom or (P, Q) not in A.homs or len(coords) != A.hom(P, Q).dim:
            return {}
        return {Q: A.hom(P, Q).reduce(coords)}
    options: dict[str, Element] | None = None
    for coeff, label in expr.parts:
        if label is None:
            here = {dom: A.hom(dom, dom).scale(coeff, A.identities[dom])}
        else:
            here = {}
            for P, Q, i in index.get(label, []):
                if P == dom:
                    here[Q] = A.hom(P, Q).scale(coeff, A.hom(P, Q).basis(i))
        if options is None:
            options = here
        else:
            options = {Q: A.hom(dom, Q).add(options[Q], v) for Q, v in here.items() if Q in options}
    return options or {}


def parse_formula(text: str, R: Ringoid, side: str, line: int = 1) -> PpFormula:
    """Parse one formula; DslSyntaxError carries line and column."""
    A = acting_category(R, side)
    index = A.label_index()
    p = _Parser(text, R, side, line)

    free_decl: list[tuple[str, str | None]] = []
    if p.has_free_prefix():
        free_decl = p.declarations("|")
    bound_decl: list[tuple[str, str | None]] = []
    if p.tok.kind == "name" and p.tok.text == "E":
        p.i += 1
        bound_decl = p.declarations(".")

    declared = {v for v, _ in free_decl + bound_decl}
    bound_names = {v for v, _ in bound_decl}
    eqs = p.equations(declared)

    if free_decl:
        free = free_decl
        for terms in eqs:
            for t in terms:
                if t.var not in declared:
                    raise DslSyntaxError(f"undeclared variable {t.var!r}", line, t.column)
    else:
        names = sorted(
            {t.var for terms in eqs for t in terms if t.var not in bound_names},
            key=lambda v: int(_FREE_NAME.match(v).group(1) or 0),
        )
        free = [(v, None) for v in names]
    if not free:
        raise DslSyntaxError("a formula needs at least one free variable", line, 1)

    sorts = {}
    for v, s in free + bound_decl:
        if v in sorts:
            raise DslSyntaxError(f"variable {v!r} declared twice", line, 1)
        sorts[v] = s or _default_sort(R, v, line, 1)
    variables = [v for v, _ in free] + [v for v, _ in bound_decl]

    columns: list[tuple[str, dict[str, Element]]] = []
    for terms in eqs:
        resolved = []
        candidates: set[str] | None = None
        for t in terms:
            options = _resolve(A, t.morph, sorts[t.var], index)
            if not options:
                raise DslSyntaxError(f"no morphism matches {t.var!r} of sort {sorts[t.var]}", line, t.morph.column)
            resolved.append((t, options))
            candidates = set(options) if candidates is None else candidates & set(options)
        if not terms:
            continue
        if not candidates:
            raise DslSyntaxError("terms of one equation land in different sorts", line, terms[0].column)
        if len(candidates) > 1:
            raise DslSyntaxError(f"equation sort is ambiguous among {sorted(candidates)}", line, terms[0].column)
        S = candidates.pop()
        entries: dict[str, Element] = {}
        for t, options in resolved:
            hom = A.hom(sorts[t.var], S)
            value = options[S] if t.sign > 0 else hom.neg(options[S])
            entries[t.var] = hom.add(entries.get(t.var, hom.zero), value)
        if any(any(e) for e in entries.values()):
            columns.append((S, entries))

    matrix = [
        [entries.get(v, A.hom(sorts[v], S).zero) for S, entries in columns]
        for v in variables
    ]
    try:
        return make_formula(
            R, side,
            [sorts[v] for v, _ in free],
            [sorts[v] for v, _ in bound_decl],
            [S for S, _ in columns],
            matrix,
        )
    except SortMismatch as e:
        raise DslSyntaxError(str(e), line, 1)


# === printer ===

def _variable_names(count: int, stem: str) -> list[str]:
    return [stem] if count == 1 else [f"{stem}{i + 1}" for i in range(count)]


def format_morph(A: Ringoid, P: str, Q: str, e: Sequence[int]) -> str:
    hom = A.hom(P, Q)
    parts = []
    for i, c in enumerate(e):
        if not c:
            continue
        label = A.label(P, Q, i)
        if label == "1":
            parts.append(str(c))
        else:
            parts.append(label if c == 1 else f"{c}*{label}")
    if not parts:
        return "0"
    if len(parts) == 1 and "*" not in parts[0]:
        return parts[0]
    return "(" + " + ".join(parts) + ")"


def _term(phi: PpFormula, var: str, P: str, Q: str, e: Sequence[int]) -> str:
    A = phi.acting
    if P == Q and tuple(e) == tuple(A.identities[P]):
        return var
    morph = format_morph(A, P, Q, e)
    return f"{var}*{morph}" if phi.side == "right" else f"{morph}*{var}"


def format_formula(phi: PpFormula) -> str:
    A = phi.acting
    multi = not phi.ringoid.is_ring
    free_names = _variable_names(phi.n, "x")
    bound_names = _variable_names(phi.m, "y") if phi.m else []
    names = free_names + bound_names
    sorts = phi.variable_sorts

    def decl(vs, ss):
        return ", ".join(f"{v}:{s}" if multi else v for v, s in zip(vs, ss))

    head = ""
    if phi.n > 1 or multi:
        head += f"{decl(free_names, phi.free_sorts)} | "
    if phi.m:
        head += f"E {decl(bound_names, phi.bound_sorts)} . "

    equations = []
    for j, S in enumerate(phi.relation_sorts):
        rows = [i for i in range(len(names)) if any(phi.matrix[i][j])]
        if not rows:
            continue
        first = rows[0]
        lead = phi.matrix[first][j]
        if sorts[first] == S and tuple(lead) == tuple(A.identities[S]):
            rest = [
                _term(phi, names[i], sorts[i], S, A.hom(sorts[i], S).neg(phi.matrix[i][j]))
                for i in rows[1:]
            ]
            equations.append(f"{names[first]} = {' + '.join(rest) if rest else '0'}")
        else:
            terms = [_term(phi, names[i], sorts[i], S, phi.matrix[i][j]) for i in rows]
            equations.append(f"{' + '.join(terms)} = 0")
    if not equations:
        equations.append(f"{free_names[0]} = {free_names[0]}")
    return head + " ; ".join(equations)
