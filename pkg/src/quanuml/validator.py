"""Semantic checks for resolved QuanUML models.

Codes are stable and never reused:

====  ========  ==============================================================
Q001  error     quantum operation on a qubit whose lifeline ended (measured on
                every path) outside any Alt fragment
Q002  error     malformed measurement: source is not a qubit, target is not a
                cbit, or a cbit is written twice on one path
Q003  error     Alt condition reads a cbit that no earlier Measure assigns on
                any path (or a leaf that is not a cbit)
Q004  error     gate operands overlap or are not qubits (controls vs. targets,
                ``swap q, q``)
Q005  error     ``use`` arity mismatch, repeated actual, or non-qubit actual
Q006  error     cyclic ``use`` references
Q007  error     class with a ``circuit`` member but no <<Quantum>> stereotype
Q008  warning   declared qubit never used
Q009  warning   qubit used but never measured in a top-level diagram
Q010  error     like Q001, for operations inside an Alt fragment
====  ========  ==============================================================

Path sensitivity is conservative.  A Measure inside one Alt branch counts as
"assigned on some path" for Q003 but ends the lifeline only when both
branches measure the qubit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .model import (
    Alt,
    Measure,
    Model,
    MultiGate,
    SeqDiagram,
    SingleGate,
    SourceSpan,
    Stereotype,
    Swap,
    SymbolTable,
    Use,
    cond_leaves,
    event_qubits,
    resolve,
    walk_events,
)

CODES = {
    "Q001": "error",
    "Q002": "error",
    "Q003": "error",
    "Q004": "error",
    "Q005": "error",
    "Q006": "error",
    "Q007": "error",
    "Q008": "warning",
    "Q009": "warning",
    "Q010": "error",
}


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    span: SourceSpan
    severity: str = field(default="")

    def __post_init__(self):
        if self.code not in CODES:
            raise ValueError(f"unknown diagnostic code {self.code}")
        if not self.severity:
            object.__setattr__(self, "severity", CODES[self.code])

    @property
    def is_error(self) -> bool:
        return self.severity == "error"

    def sort_key(self):
        s = self.span
        return (s.file, s.start_line, s.start_col, self.code)

    def render(self) -> str:
        s = self.span
        return f"{s.file}:{s.start_line}:{s.start_col}: {self.severity}[{self.code}]: {self.message}"

    def to_dict(self) -> dict:
        s = self.span
        return {
            "code": self.code,
            "severity": self.severity,
            "message": self.message,
            "file": s.file,
            "line": s.start_line,
            "col": s.start_col,
            "end_line": s.end_line,
            "end_col": s.end_col,
        }


def diagnostics_json(diags: list[Diagnostic]) -> str:
    return json.dumps([d.to_dict() for d in diags], indent=2) + "\n"


def has_errors(diags: list[Diagnostic]) -> bool:
    return any(d.is_error for d in diags)


@dataclass
class _PathState:
    ended: set[str]  # qubits measured on every path so far
    assigned: set[str]  # cbits measured on some path so far

    def copy(self) -> _PathState:
        return _PathState(set(self.ended), set(self.assigned))


class _DiagramChecker:
    def __init__(self, seq: SeqDiagram, table: SymbolTable, out: list[Diagnostic]):
        self.seq = seq
        self.table = table
        self.kinds = {name: l.kind for name, l in table.lifelines[seq.name].items()}
        self.out = out

    def report(self, code: str, span: SourceSpan, message: str):
        self.out.append(Diagnostic(code, message, span))

    def is_qubit(self, name: str) -> bool:
        return self.kinds.get(name) in ("qubit", "formal")

    def run(self):
        self.events(self.seq.events, _PathState(set(), set()), in_fragment=False)

    def check_alive(self, names, span, state: _PathState, in_fragment: bool):
        for q in dict.fromkeys(names):
            if q in state.ended:
                code = "Q010" if in_fragment else "Q001"
                where = " inside alt fragment" if in_fragment else ""
                self.report(code, span, f"qubit {q!r} used{where} after its measurement ended the lifeline")

    def events(self, events, state: _PathState, in_fragment: bool):
        for ev in events:
            if isinstance(ev, SingleGate):
                if not self.is_qubit(ev.qubit):
                    self.report("Q004", ev.span, f"gate operand {ev.qubit!r} is not a qubit")
                self.check_alive([ev.qubit], ev.span, state, in_fragment)
            elif isinstance(ev, MultiGate):
                operands = ev.controls + ev.targets
                bad = [n for n in operands if not self.is_qubit(n)]
                if bad:
                    self.report("Q004", ev.span, f"gate operand {bad[0]!r} is not a qubit")
                elif len(set(operands)) != len(operands):
                    self.report("Q004", ev.span, "controls and targets must be distinct qubits")
                self.check_alive(operands, ev.span, state, in_fragment)
            elif isinstance(ev, Swap):
                bad = [n for n in (ev.a, ev.b) if not self.is_qubit(n)]
                if bad:
                    self.report("Q004", ev.span, f"swap operand {bad[0]!r} is not a qubit")
                elif ev.a == ev.b:
                    self.report("Q004", ev.span, f"swap applied to qubit {ev.a!r} twice")
                self.check_alive([ev.a, ev.b], ev.span, state, in_fragment)
            elif isinstance(ev, Measure):
                if not self.is_qubit(ev.qubit):
                    self.report("Q002", ev.span, f"measured lifeline {ev.qubit!r} is not a qubit")
                elif self.kinds.get(ev.cbit) != "cbit":
                    self.report("Q002", ev.span, f"measurement target {ev.cbit!r} is not a declared cbit")
                elif ev.cbit in state.assigned:
                    self.report("Q002", ev.span, f"cbit {ev.cbit!r} is measured into twice")
                self.check_alive([ev.qubit], ev.span, state, in_fragment)
                state.ended.add(ev.qubit)
                state.assigned.add(ev.cbit)
            elif isinstance(ev, Use):
                self.use(ev, state, in_fragment)
            elif isinstance(ev, Alt):
                for leaf in cond_leaves(ev.condition):
                    name = str(leaf.bit)
                    if self.kinds.get(name) != "cbit":
                        self.report("Q003", leaf.span, f"condition reads {name!r}, which is not a cbit")
                    elif name not in state.assigned:
                        self.report("Q003", leaf.span, f"condition reads cbit {name!r} before any measurement assigns it")
                then_state = state.copy()
                else_state = state.copy()
                self.events(ev.then_events, then_state, in_fragment=True)
                self.events(ev.else_events, else_state, in_fragment=True)
                state.ended = then_state.ended & else_state.ended
                state.assigned = then_state.assigned | else_state.assigned

    def use(self, ev: Use, state: _PathState, in_fragment: bool):
        callee = self.table.diagrams[ev.sub_name]
        bad = [n for n in ev.actuals if not self.is_qubit(n)]
        if len(ev.actuals) != len(callee.formals):
            self.report(
                "Q005", ev.span,
                f"{ev.sub_name} takes {len(callee.formals)} qubits, {len(ev.actuals)} given",
            )
        elif bad:
            self.report("Q005", ev.span, f"actual {bad[0]!r} is not a qubit")
        elif len(set(ev.actuals)) != len(ev.actuals):
            self.report("Q005", ev.span, f"the same qubit is passed to {ev.sub_name} twice")
        self.check_alive(ev.actuals, ev.span, state, in_fragment)


def _use_cycles(model: Model, out: list[Diagnostic]):
    """Report each back edge of a depth-first walk over the use graph once."""
    color: dict[str, int] = {}  # 1 = on stack, 2 = done
    by_name = {s.name: s for s in model.sequences}

    def visit(name: str):
        color[name] = 1
        for ev in walk_events(by_name[name].events):
            if not isinstance(ev, Use):
                continue
            state = color.get(ev.sub_name, 0)
            if state == 1:
                out.append(Diagnostic("Q006", f"use of {ev.sub_name!r} closes a cycle of sub-diagram references", ev.span))
            elif state == 0:
                visit(ev.sub_name)
        color[name] = 2

    for seq in model.sequences:
        if color.get(seq.name, 0) == 0:
            visit(seq.name)


def _measured_qubits(model: Model) -> dict[str, set[str]]:
    """Names measured in each diagram, following ``use`` into callees."""
    by_name = {s.name: s for s in model.sequences}
    memo: dict[str, set[int]] = {}

    def measured(seq: SeqDiagram, visiting: frozenset) -> set[str]:
        names: set[str] = set()
        for ev in walk_events(seq.events):
            if isinstance(ev, Measure):
                names.add(ev.qubit)
            elif isinstance(ev, Use) and ev.sub_name not in visiting:
                callee = by_name[ev.sub_name]
                if callee.name not in memo:
                    inner = measured(callee, visiting | {callee.name})
                    memo[callee.name] = {i for i, f in enumerate(callee.formals) if f.name in inner}
                names.update(a for i, a in enumerate(ev.actuals) if i in memo[callee.name])
        return names

    return {s.name: measured(s, frozenset({s.name})) for s in model.sequences}


def validate(model: Model) -> list[Diagnostic]:
    """All diagnostics for ``model``, ordered by (file, line, col, code).

    Raises a :class:`~quanuml.model.ResolveError` if names do not resolve.
    """
    table = resolve(model)
    out: list[Diagnostic] = []

    for cls in model.classes:
        if cls.circuit_ref is not None and Stereotype.QUANTUM not in cls.stereotypes:
            out.append(Diagnostic("Q007", f"class {cls.name!r} owns circuit {cls.circuit_ref!r} but lacks <<Quantum>>", cls.span))

    for seq in model.sequences:
        _DiagramChecker(seq, table, out).run()

    _use_cycles(model, out)

    measured = _measured_qubits(model)
    for seq in model.sequences:
        used = {n for ev in walk_events(seq.events) for n in event_qubits(ev)}
        for q in seq.qubits:
            if q.name not in used:
                out.append(Diagnostic("Q008", f"qubit {q.name!r} is declared but never used", q.span))
            elif q.name not in measured[seq.name]:
                out.append(Diagnostic("Q009", f"qubit {q.name!r} is never measured; its result is unobservable", q.span))

    out.sort(key=Diagnostic.sort_key)
    return out
