"""Lexer, recursive-descent parser and canonical printer for ``.quml`` text.

Parsing is syntax-only: names are not checked against declarations here (see
:func:`quanuml.model.resolve`).  The first syntax violation raises
:class:`ParseError`; there is no error recovery.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .model import (
    ANGLE_GATES,
    MULTI_GATES,
    SINGLE_GATES,
    Alt,
    Angle,
    Attribute,
    CbitDecl,
    ClassDecl,
    CondAnd,
    CondEq,
    CondExpr,
    CondXor,
    Event,
    Measure,
    Model,
    MultiGate,
    Operation,
    Param,
    QubitDecl,
    Relation,
    RelationKind,
    SeqDiagram,
    SingleGate,
    SourceSpan,
    Stereotype,
    Swap,
    Use,
    canonicalize,
)

KEYWORDS = frozenset(
    "model classes class attr op circuit seq qubit cbit gate on control target "
    "kickback swap measure alt else use pi".split()
)
MAX_NESTING = 64

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\f\v]+)
  | (?P<nl>\n)
  | (?P<comment>//[^\n]*)
  | (?P<ket>\|[01]>)
  | (?P<punct>\*-->|--\|>|-->|->|<<|>>|==|&&|[{}(),:=^/-])
  | (?P<float>\d+\.\d+(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
    """,
    re.VERBOSE,
)

_RELATIONS = {
    "-->": RelationKind.ASSOCIATION,
    "--|>": RelationKind.GENERALIZATION,
    "*-->": RelationKind.COMPOSITION,
}
_RELATION_ARROWS = {kind: arrow for arrow, kind in _RELATIONS.items()}


class ParseError(Exception):
    def __init__(self, span: SourceSpan, expected: list[str], found: str):
        self.span = span
        self.expected = list(expected) or ["valid input"]
        self.found = found
        super().__init__(f"{span}: expected {self._expected_text()}, found {found}")

    def _expected_text(self) -> str:
        if len(self.expected) == 1:
            return self.expected[0]
        return "one of " + ", ".join(self.expected)

    @property
    def message(self) -> str:
        return f"expected {self._expected_text()}, found {self.found}"


@dataclass(frozen=True)
class Token:
    kind: str  # ident, int, float, ket, punct, eof
    text: str
    span: SourceSpan

    def describe(self) -> str:
        return "end of input" if self.kind == "eof" else repr(self.text)


def tokenize(text: str, file: str = "<input>") -> list[Token]:
    tokens: list[Token] = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            span = SourceSpan(file, line, col, line, col + 1)
            raise ParseError(span, ["a token"], repr(text[pos]))
        kind = m.lastgroup
        lexeme = m.group()
        if kind == "nl":
            line, col = line + 1, 1
        else:
            if kind not in ("ws", "comment"):
                span = SourceSpan(file, line, col, line, col + len(lexeme))
                tokens.append(Token(kind, lexeme, span))
            col += len(lexeme)
        pos = m.end()
    tokens.append(Token("eof", "", SourceSpan(file, line, col, line, col)))
    return tokens


def _join(a: SourceSpan, b: SourceSpan) -> SourceSpan:
    return SourceSpan(a.file, a.start_line, a.start_col, b.end_line, b.end_col)


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0
        self.depth = 0

    # -- token helpers

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def at(self, text: str) -> bool:
        t = self.tok
        return t.text == text and t.kind in ("ident", "punct", "ket")

    def fail(self, *expected: str):
        raise ParseError(self.tok.span, list(expected), self.tok.describe())

    def advance(self) -> Token:
        t = self.tok
        if t.kind != "eof":
            self.pos += 1
        return t

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(repr(text))
        return self.advance()

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.advance()
            return True
        return False

    def ident(self, what: str = "identifier") -> Token:
        t = self.tok
        if t.kind != "ident" or t.text in KEYWORDS:
            self.fail(what)
        return self.advance()

    def ident_list(self) -> list[Token]:
        names = [self.ident()]
        while self.accept(","):
            names.append(self.ident())
        return names

    def enter(self):
        self.depth += 1
        if self.depth > MAX_NESTING:
            self.fail(f"nesting depth at most {MAX_NESTING}")

    def leave(self):
        self.depth -= 1

    # -- grammar

    def model(self) -> Model:
        start = self.expect("model")
        name = self.ident("model name").text
        self.expect("{")
        classes: list[ClassDecl] = []
        relations: list[Relation] = []
        seqs: list[SeqDiagram] = []
        while not self.at("}"):
            if self.at("classes"):
                self.class_block(classes, relations)
            elif self.at("seq"):
                seqs.append(self.seq_diagram())
            else:
                self.fail("'classes'", "'seq'", "'}'")
        end = self.expect("}")
        if self.tok.kind != "eof":
            self.fail("end of input")
        return Model(name, tuple(classes), tuple(relations), tuple(seqs), _join(start.span, end.span))

    def stereotypes(self) -> tuple[Stereotype, ...]:
        if not self.accept("<<"):
            return ()
        tags = []
        while True:
            t = self.tok
            if t.kind != "ident" or t.text not in Stereotype._value2member_map_:
                self.fail(*(f"stereotype {s.value!r}" for s in Stereotype))
            tags.append(Stereotype(self.advance().text))
            if not self.accept(","):
                break
        self.expect(">>")
        return tuple(tags)

    def class_block(self, classes: list[ClassDecl], relations: list[Relation]):
        self.expect("classes")
        self.expect("{")
        while not self.at("}"):
            if self.at("class"):
                classes.append(self.class_decl())
            elif self.tok.kind == "ident" and self.tok.text not in KEYWORDS:
                src = self.advance()
                arrow = self.tok
                if arrow.text not in _RELATIONS or arrow.kind != "punct":
                    self.fail("'-->'", "'--|>'", "'*-->'")
                self.advance()
                dst = self.ident("class name")
                relations.append(
                    Relation(_RELATIONS[arrow.text], src.text, dst.text, _join(src.span, dst.span))
                )
            else:
                self.fail("'class'", "relation", "'}'")
        self.expect("}")

    def class_decl(self) -> ClassDecl:
        start = self.expect("class")
        name = self.ident("class name").text
        stereo = self.stereotypes()
        self.expect("{")
        attrs: list[Attribute] = []
        ops: list[Operation] = []
        circuit: str | None = None
        while not self.at("}"):
            t = self.tok
            if self.accept("attr"):
                aname = self.ident().text
                self.expect(":")
                tname = self.ident("type name")
                attrs.append(Attribute(aname, tname.text, _join(t.span, tname.span)))
            elif self.accept("op"):
                oname = self.ident().text
                self.expect("(")
                params: list[Param] = []
                if not self.at(")"):
                    params.append(self.param())
                    while self.accept(","):
                        params.append(self.param())
                last = self.expect(")")
                ret = None
                if self.accept(":"):
                    last = self.ident("type name")
                    ret = last.text
                ops.append(Operation(oname, tuple(params), ret, _join(t.span, last.span)))
            elif self.accept("circuit"):
                if circuit is not None:
                    self.fail("at most one 'circuit' member")
                circuit = self.ident("sequence diagram name").text
            else:
                self.fail("'attr'", "'op'", "'circuit'", "'}'")
        end = self.expect("}")
        return ClassDecl(name, stereo, tuple(attrs), tuple(ops), circuit, _join(start.span, end.span))

    def param(self) -> Param:
        name = self.ident().text
        if self.accept(":"):
            return Param(name, self.ident("type name").text)
        return Param(name)

    def seq_diagram(self) -> SeqDiagram:
        start = self.expect("seq")
        name = self.ident("diagram name").text
        formals: list[QubitDecl] = []
        if self.accept("("):
            formals = [QubitDecl(t.text, 0, t.span) for t in self.ident_list()]
            self.expect(")")
        stereo = self.stereotypes()
        self.expect("{")
        qubits: list[QubitDecl] = []
        cbits: list[CbitDecl] = []
        while self.at("qubit") or self.at("cbit"):
            if self.accept("qubit"):
                qubits.append(self.qinit())
                while self.accept(","):
                    qubits.append(self.qinit())
            else:
                self.advance()
                cbits.extend(CbitDecl(t.text, t.span) for t in self.ident_list())
        if formals and qubits:
            raise ParseError(qubits[0].span, ["no qubit declarations in a parameterized diagram"], "'qubit'")
        events = self.events()
        end = self.expect("}")
        return SeqDiagram(
            name, stereo, tuple(formals), tuple(qubits), tuple(cbits), tuple(events),
            _join(start.span, end.span),
        )

    def qinit(self) -> QubitDecl:
        t = self.ident("qubit name")
        init = 0
        if self.accept("="):
            k = self.tok
            if k.kind != "ket":
                self.fail("'|0>'", "'|1>'")
            self.advance()
            init = int(k.text[1])
        return QubitDecl(t.text, init, t.span)

    def events(self) -> list[Event]:
        out: list[Event] = []
        while not self.at("}"):
            out.append(self.event())
        return out

    def event(self) -> Event:
        start = self.tok
        if self.accept("gate"):
            return self.gate(start)
        if self.accept("swap"):
            a = self.ident("qubit name")
            self.expect(",")
            b = self.ident("qubit name")
            return Swap(a.text, b.text, _join(start.span, b.span))
        if self.accept("measure"):
            q = self.ident("qubit name")
            self.expect("->")
            c = self.ident("cbit name")
            return Measure(q.text, c.text, _join(start.span, c.span))
        if self.accept("alt"):
            self.enter()
            cond = self.cond()
            self.expect("{")
            then = self.events()
            end = self.expect("}")
            other: list[Event] = []
            if self.accept("else"):
                self.expect("{")
                other = self.events()
                end = self.expect("}")
            self.leave()
            return Alt(cond, tuple(then), tuple(other), _join(start.span, end.span))
        if self.accept("use"):
            name = self.ident("diagram name").text
            self.expect("on")
            self.expect("(")
            actuals = [t.text for t in self.ident_list()]
            end = self.expect(")")
            return Use(name, tuple(actuals), _join(start.span, end.span))
        self.fail("'gate'", "'swap'", "'measure'", "'alt'", "'use'", "'}'")

    def gate(self, start: Token) -> Event:
        g = self.tok
        if g.kind != "ident" or g.text not in SINGLE_GATES:
            self.fail("gate name")
        self.advance()
        angle = self.angle() if self.at("(") else None
        if (angle is not None) != (g.text in ANGLE_GATES):
            what = "an angle" if g.text in ANGLE_GATES else "no angle"
            raise ParseError(g.span, [f"gate {g.text} with {what}"], g.text)
        if self.accept("on"):
            q = self.ident("qubit name")
            return SingleGate(g.text, q.text, angle, _join(start.span, q.span))
        if not self.at("control"):
            self.fail("'on'", "'control'")
        if g.text not in MULTI_GATES:
            raise ParseError(g.span, ["controlled gate X, Z or P"], g.text)
        self.advance()
        controls = [t.text for t in self.ident_list()]
        self.expect("target")
        targets = self.ident_list()
        end = targets[-1]
        kickback = False
        if self.at("kickback"):
            end = self.advance()
            kickback = True
        return MultiGate(
            g.text, tuple(controls), tuple(t.text for t in targets), angle, kickback,
            _join(start.span, end.span),
        )

    def angle(self) -> Angle:
        self.expect("(")
        sign = -1 if self.accept("-") else 1
        t = self.tok
        if t.kind == "float":
            self.advance()
            value = float(t.text)
            if not math.isfinite(value):
                raise ParseError(t.span, ["finite angle"], t.text)
            self.expect(")")
            return Angle(radians=sign * value)
        num = 1
        if t.kind == "int":
            num = int(self.advance().text)
        self.expect("pi")
        den = 1
        if self.accept("/"):
            d = self.tok
            if d.kind != "int" or int(d.text) == 0:
                self.fail("positive integer denominator")
            den = int(self.advance().text)
        self.expect(")")
        return Angle(sign * num, den)

    def cond(self) -> CondExpr:
        left = self.and_expr()
        while self.at("^"):
            self.advance()
            right = self.and_expr()
            left = CondXor(left, right, _join(left.span, right.span))
        return left

    def and_expr(self) -> CondExpr:
        left = self.atom()
        while self.at("&&"):
            self.advance()
            right = self.atom()
            left = CondAnd(left, right, _join(left.span, right.span))
        return left

    def atom(self) -> CondExpr:
        if self.accept("("):
            self.enter()
            inner = self.cond()
            self.expect(")")
            self.leave()
            return inner
        name = self.ident("cbit name")
        self.expect("==")
        v = self.tok
        if v.kind != "int" or v.text not in ("0", "1"):
            self.fail("'0'", "'1'")
        self.advance()
        return CondEq(name.text, int(v.text), _join(name.span, v.span))


def parse(text: str | bytes, file: str = "<input>") -> Model:
    """Parse ``.quml`` source into a :class:`Model` or raise :class:`ParseError`."""
    if isinstance(text, bytes):
        if text.startswith(b"\xef\xbb\xbf"):
            raise ParseError(SourceSpan(file), ["UTF-8 text without byte-order mark"], "BOM")
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(SourceSpan(file), ["valid UTF-8"], f"byte at offset {exc.start}") from None
    if text.startswith("\ufeff"):
        raise ParseError(SourceSpan(file), ["UTF-8 text without byte-order mark"], "BOM")
    return _Parser(tokenize(text, file)).model()


# --- printing -----------------------------------------------------------------

_INDENT = "  "


def format_angle(angle: Angle) -> str:
    angle = angle.canonical()
    if angle.radians is not None:
        text = format(abs(angle.radians), ".17g")
        if not any(ch in text for ch in ".e"):
            text += ".0"
        return ("-" if math.copysign(1.0, angle.radians) < 0 else "") + text
    num, den = angle.numerator, angle.denominator
    sign = "-" if num < 0 else ""
    mag = abs(num)
    head = "pi" if mag == 1 else f"{mag}pi"
    return sign + head + (f"/{den}" if den != 1 else "")


def format_cond(cond: CondExpr, level: int = 0) -> str:
    """Print with the minimum parentheses that keep the tree shape.

    ``level`` is 0 at xor position, 1 at and position, 2 at atom position.
    """
    if isinstance(cond, CondEq):
        return f"{cond.bit} == {cond.value}"
    if isinstance(cond, CondXor):
        text = f"{format_cond(cond.left, 0)} ^ {format_cond(cond.right, 1)}"
        return f"({text})" if level > 0 else text
    text = f"{format_cond(cond.left, 1)} && {format_cond(cond.right, 2)}"
    return f"({text})" if level > 1 else text


def _stereo(tags) -> str:
    return " <<" + ", ".join(t.value for t in tags) + ">>" if tags else ""


def _events(events, depth: int, out: list[str]):
    pad = _INDENT * depth
    for ev in events:
        if isinstance(ev, SingleGate):
            ang = f"({format_angle(ev.angle)})" if ev.angle else ""
            out.append(f"{pad}gate {ev.gate}{ang} on {ev.qubit}")
        elif isinstance(ev, MultiGate):
            ang = f"({format_angle(ev.angle)})" if ev.angle else ""
            line = (
                f"{pad}gate {ev.gate}{ang} control {', '.join(ev.controls)}"
                f" target {', '.join(ev.targets)}"
            )
            out.append(line + (" kickback" if ev.kickback else ""))
        elif isinstance(ev, Swap):
            out.append(f"{pad}swap {ev.a}, {ev.b}")
        elif isinstance(ev, Measure):
            out.append(f"{pad}measure {ev.qubit} -> {ev.cbit}")
        elif isinstance(ev, Use):
            out.append(f"{pad}use {ev.sub_name} on ({', '.join(ev.actuals)})")
        elif isinstance(ev, Alt):
            out.append(f"{pad}alt {format_cond(ev.condition)} {{")
            _events(ev.then_events, depth + 1, out)
            if ev.else_events:
                out.append(f"{pad}}} else {{")
                _events(ev.else_events, depth + 1, out)
            out.append(f"{pad}}}")
        else:  # pragma: no cover - closed sum
            raise TypeError(f"unknown event {ev!r}")


def pretty_print(model: Model) -> str:
    """Canonical, deterministic text for ``model``."""
    model = canonicalize(model)
    out = [f"model {model.name} {{"]
    if model.classes or model.relations:
        out.append(f"{_INDENT}classes {{")
        for cls in model.classes:
            pad = _INDENT * 3
            out.append(f"{_INDENT * 2}class {cls.name}{_stereo(cls.stereotypes)} {{")
            for a in cls.attributes:
                out.append(f"{pad}attr {a.name} : {a.type_name}")
            for op in cls.operations:
                params = ", ".join(
                    p.name + (f": {p.type_name}" if p.type_name else "") for p in op.params
                )
                ret = f" : {op.return_type}" if op.return_type else ""
                out.append(f"{pad}op {op.name}({params}){ret}")
            if cls.circuit_ref:
                out.append(f"{pad}circuit {cls.circuit_ref}")
            out.append(f"{_INDENT * 2}}}")
        for rel in model.relations:
            out.append(f"{_INDENT * 2}{rel.source} {_RELATION_ARROWS[rel.kind]} {rel.target}")
        out.append(f"{_INDENT}}}")
    for seq in model.sequences:
        formals = f"({', '.join(f.name for f in seq.formals)})" if seq.formals else ""
        out.append(f"{_INDENT}seq {seq.name}{formals}{_stereo(seq.stereotypes)} {{")
        pad = _INDENT * 2
        if seq.qubits:
            decls = ", ".join(q.name + (" = |1>" if q.init else "") for q in seq.qubits)
            out.append(f"{pad}qubit {decls}")
        if seq.cbits:
            out.append(f"{pad}cbit {', '.join(c.name for c in seq.cbits)}")
        _events(seq.events, 2, out)
        out.append(f"{_INDENT}}}")
    out.append("}")
    return "\n".join(out) + "\n"
