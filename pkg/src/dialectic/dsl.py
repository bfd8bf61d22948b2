"""Text format for two-agent rule systems.

Grammar (EBNF)::

    document   = { meta } { block } ;
    meta       = ( "name" | "comment" ) STRING ";" ;
    block      = ( "agent1" | "agent2" ) "{" { rule } "}"
               | "initial" "{" { section } "}" ;
    section    = ( "private1" | "public" | "private2" ) ":" [ literals ] ";" ;
    literals   = literal { "," literal } ;
    rule       = condition "=>" action ";" ;
    condition  = cterm { "|" cterm } ;
    cterm      = cfactor { "&" cfactor } ;
    cfactor    = "!" cfactor | "(" condition ")" | atom ;
    action     = aterm { "|" aterm } ;
    aterm      = afactor { "&" afactor } ;
    afactor    = "(" action ")" | unit ;
    unit       = ( "priv+" | "priv-" | "pub+" | "pub-" ) literal ;
    literal    = [ "!" ] atom ;
    atom       = NAME [ "(" term { "," term } ")" ] ;
    term       = [ "~" ] NAME ;

``NAME`` starts with a lowercase letter or digit; identifiers starting with an
uppercase letter or underscore are variables and are rejected.  ``#`` starts a
comment that runs to the end of the line.  ``agent1``/``agent2`` blocks may be
omitted (no rules); the ``initial`` block is required.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .execution import ExecutionState, Rule, System
from .logic import (
    ActionUnit,
    And,
    Atom,
    Formula,
    Literal,
    Not,
    Op,
    Or,
    Term,
    canonical,
    format_formula,
)


class SpecError(ValueError):
    """A diagnostic tied to a position in the input (1-based line and column)."""

    kind = "error"

    def __init__(self, message: str, line: int, column: int, expected: frozenset = frozenset()):
        self.message = message
        self.line = line
        self.column = column
        self.expected = expected
        super().__init__(f"{line}:{column}: {self.kind}: {message}")


class ParseError(SpecError):
    kind = "syntax error"


class SemanticError(SpecError):
    kind = "semantic error"


@dataclass(frozen=True)
class SpecDocument:
    system: System
    initial: ExecutionState
    name: Optional[str] = None
    comment: Optional[str] = None

    @classmethod
    def build(cls, rules1, rules2, initial: ExecutionState, **meta) -> SpecDocument:
        initial = initial.without_actions()
        return cls(System(tuple(rules1), tuple(rules2), (initial,)), initial, **meta)


_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<unitop>(?:priv|pub)[+-])
  | (?P<arrow>=>)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<name>[A-Za-z0-9_]+)
  | (?P<punct>[&|!~(){};:,])
    """,
    re.VERBOSE,
)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        chunk = m.group()
        if kind != "ws":
            toks.append(_Tok(kind if kind != "punct" else chunk, chunk, line, pos - line_start + 1))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


_OPS = {op.value: op for op in Op}
_SECTIONS = ("private1", "public", "private2")
_DISPLAY = {"arrow": "=>", "name": "identifier", "eof": "end of input"}


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, expected: set[str]) -> ParseError:
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        wanted = ", ".join(sorted(expected))
        return ParseError(f"expected {wanted}; found {found}", t.line, t.col, frozenset(expected))

    def accept(self, kind: str, text: Optional[str] = None) -> Optional[_Tok]:
        t = self.tok
        if t.kind == kind and (text is None or t.text == text):
            self.i += 1
            return t
        return None

    def expect(self, kind: str, text: Optional[str] = None) -> _Tok:
        t = self.accept(kind, text)
        if t is None:
            raise self.error({text or _DISPLAY.get(kind, kind)})
        return t

    # -- document ----------------------------------------------------------

    def document(self) -> SpecDocument:
        meta: dict[str, str] = {}
        while self.tok.kind == "name" and self.tok.text in ("name", "comment"):
            key = self.expect("name").text
            if key in meta:
                raise SemanticError(f"duplicate {key!r}", self.tok.line, self.tok.col)
            raw = self.expect("string").text
            meta[key] = re.sub(r"\\(.)", r"\1", raw[1:-1])
            self.expect(";")
        rules: dict[str, list[Rule]] = {}
        initial: Optional[ExecutionState] = None
        while self.tok.kind != "eof":
            t = self.tok
            if t.kind == "name" and t.text in ("agent1", "agent2"):
                if t.text in rules:
                    raise SemanticError(f"duplicate block {t.text!r}", t.line, t.col)
                self.i += 1
                rules[t.text] = self.rule_block()
            elif t.kind == "name" and t.text == "initial":
                if initial is not None:
                    raise SemanticError("duplicate block 'initial'", t.line, t.col)
                self.i += 1
                initial = self.initial_block()
            else:
                raise self.error({"agent1", "agent2", "initial"})
        if initial is None:
            t = self.tok
            raise SemanticError("missing initial", t.line, t.col)
        return SpecDocument.build(rules.get("agent1", []), rules.get("agent2", []), initial, **meta)

    def rule_block(self) -> list[Rule]:
        self.expect("{")
        rules = []
        while not self.accept("}"):
            cond = self.condition()
            self.expect("arrow")
            head = self.action()
            self.expect(";")
            rules.append(Rule(cond, head))
        return rules

    def initial_block(self) -> ExecutionState:
        self.expect("{")
        sections: dict[str, frozenset] = {}
        while not self.accept("}"):
            t = self.tok
            if t.kind != "name" or t.text not in _SECTIONS:
                raise self.error(set(_SECTIONS) | {"}"})
            if t.text in sections:
                raise SemanticError(f"duplicate section {t.text!r}", t.line, t.col)
            self.i += 1
            self.expect(":")
            lits: list[Literal] = []
            if not self.accept(";"):
                lits.append(self.literal())
                while self.accept(","):
                    lits.append(self.literal())
                self.expect(";")
            sections[t.text] = frozenset(lits)
        empty: frozenset = frozenset()
        return ExecutionState(
            s1=sections.get("private1", empty),
            p=sections.get("public", empty),
            s2=sections.get("private2", empty),
        )

    # -- formulas ----------------------------------------------------------

    def condition(self) -> Formula:
        parts = [self.cterm()]
        while self.accept("|"):
            parts.append(self.cterm())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def cterm(self) -> Formula:
        parts = [self.cfactor()]
        while self.accept("&"):
            parts.append(self.cfactor())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def cfactor(self) -> Formula:
        if self.accept("!"):
            return Not(self.cfactor())
        if self.accept("("):
            f = self.condition()
            self.expect(")")
            return f
        if self.tok.kind != "name":
            raise self.error({"!", "(", "atom"})
        return self.atom()

    def action(self) -> Formula:
        parts = [self.aterm()]
        while self.accept("|"):
            parts.append(self.aterm())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def aterm(self) -> Formula:
        parts = [self.afactor()]
        while self.accept("&"):
            parts.append(self.afactor())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def afactor(self) -> Formula:
        if self.accept("("):
            f = self.action()
            self.expect(")")
            return f
        t = self.accept("unitop")
        if t is None:
            raise self.error({"(", "priv+", "priv-", "pub+", "pub-"})
        return ActionUnit(_OPS[t.text], self.literal())

    def literal(self) -> Literal:
        positive = not self.accept("!")
        if self.tok.kind != "name":
            raise self.error({"atom"} | ({"!"} if positive else set()))
        return Literal(self.atom(), positive)

    def atom(self) -> Atom:
        pred = self.constant()
        args: list[Term] = []
        if self.accept("("):
            args.append(self.term())
            while self.accept(","):
                args.append(self.term())
            self.expect(")")
        return Atom(pred, tuple(args))

    def term(self) -> Term:
        negated = bool(self.accept("~"))
        if self.tok.kind != "name":
            raise self.error({"constant"} | (set() if negated else {"~"}))
        return Term(self.constant(), negated)

    def constant(self) -> str:
        t = self.expect("name")
        if t.text[0].isupper() or t.text[0] == "_":
            raise SemanticError(f"non-ground atom: {t.text!r} is a variable", t.line, t.col)
        return t.text


def parse_spec(text: str) -> SpecDocument:
    """Parse a document; raises :class:`ParseError` or :class:`SemanticError`."""
    return _Parser(text).document()


def parse_literal(text: str) -> Literal:
    p = _Parser(text)
    lit = p.literal()
    p.expect("eof")
    return lit


def parse_action_unit(text: str) -> ActionUnit:
    p = _Parser(text)
    f = p.afactor()
    p.expect("eof")
    if not isinstance(f, ActionUnit):
        raise ParseError("expected a single action unit", 1, 1)
    return f


def parse_condition(text: str) -> Formula:
    p = _Parser(text)
    f = p.condition()
    p.expect("eof")
    return f


def parse_action(text: str) -> Formula:
    p = _Parser(text)
    f = p.action()
    p.expect("eof")
    return f


# -- serialization -----------------------------------------------------------


def format_literals(lits) -> str:
    return ", ".join(sorted(map(str, lits)))


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def canonical_document(doc: SpecDocument) -> SpecDocument:
    """Normalize formula shape so that the document round-trips exactly."""

    def canon(rules):
        return tuple(Rule(canonical(r.condition), canonical(r.head)) for r in rules)

    return SpecDocument(
        System(canon(doc.system.rules1), canon(doc.system.rules2), doc.system.initials),
        doc.initial,
        doc.name,
        doc.comment,
    )


def serialize_spec(doc: SpecDocument) -> str:
    lines = []
    if doc.name is not None:
        lines.append(f"name {_quote(doc.name)};")
    if doc.comment is not None:
        lines.append(f"comment {_quote(doc.comment)};")
    for block, rules in (("agent1", doc.system.rules1), ("agent2", doc.system.rules2)):
        lines.append(f"{block} {{")
        for r in rules:
            cond = format_formula(canonical(r.condition))
            head = format_formula(canonical(r.head))
            lines.append(f"  {cond} => {head};")
        lines.append("}")
    init = doc.initial
    lines.append("initial {")
    for section, lits in (("private1", init.s1), ("public", init.p), ("private2", init.s2)):
        body = format_literals(lits)
        lines.append(f"  {section}: {body};" if body else f"  {section}: ;")
    lines.append("}")
    return "\n".join(lines) + "\n"
