"""Abstract syntax of QuanUML models and symbol resolution.

A model has two levels: a class diagram describing the hybrid architecture
and a set of named sequence diagrams, each describing one circuit.  Every node
is an immutable dataclass.  Source spans are carried on nodes but excluded
from equality, so two models compare equal when they are structurally equal.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Union


@dataclass(frozen=True)
class SourceSpan:
    file: str = "<input>"
    start_line: int = 1
    start_col: int = 1
    end_line: int = 1
    end_col: int = 1

    def __str__(self) -> str:
        return f"{self.file}:{self.start_line}:{self.start_col}"


NO_SPAN = SourceSpan()


def _span() -> SourceSpan:
    return field(default=NO_SPAN, compare=False, repr=False)


class Stereotype(str, Enum):
    QUANTUM = "Quantum"
    QUBIT = "qubit"
    CLASSICALBIT = "classicalbit"
    CONTROL = "control"
    CONTROLLED = "controlled"


STEREOTYPE_ORDER = {s: i for i, s in enumerate(Stereotype)}


class RelationKind(str, Enum):
    ASSOCIATION = "association"
    GENERALIZATION = "generalization"
    COMPOSITION = "composition"


SINGLE_GATES = ("H", "X", "Y", "Z", "S", "Sdg", "T", "Tdg", "RX", "RY", "RZ", "P")
MULTI_GATES = ("X", "Z", "P")
ANGLE_GATES = frozenset({"RX", "RY", "RZ", "P"})


@dataclass(frozen=True)
class Angle:
    """A rotation angle: either ``numerator/denominator * pi`` or plain radians."""

    numerator: int = 0
    denominator: int = 1
    radians: float | None = None

    @property
    def is_rational(self) -> bool:
        return self.radians is None

    @property
    def value(self) -> float:
        if self.radians is not None:
            return self.radians
        return self.numerator * math.pi / self.denominator

    def canonical(self) -> Angle:
        if self.radians is not None:
            return self
        num, den = self.numerator, self.denominator
        if den < 0:
            num, den = -num, -den
        g = math.gcd(num, den)
        if g > 1:
            num, den = num // g, den // g
        if num == 0:
            den = 1
        return Angle(num, den)


# --- conditions -------------------------------------------------------------
# Leaves hold a cbit name in models and a cbit index once lowered.


@dataclass(frozen=True)
class CondEq:
    bit: str | int
    value: int
    span: SourceSpan = _span()


@dataclass(frozen=True)
class CondXor:
    left: CondExpr
    right: CondExpr
    span: SourceSpan = _span()


@dataclass(frozen=True)
class CondAnd:
    left: CondExpr
    right: CondExpr
    span: SourceSpan = _span()


CondExpr = Union[CondEq, CondXor, CondAnd]


def cond_leaves(cond: CondExpr) -> Iterator[CondEq]:
    if isinstance(cond, CondEq):
        yield cond
    else:
        yield from cond_leaves(cond.left)
        yield from cond_leaves(cond.right)


def eval_cond(cond: CondExpr, lookup) -> bool:
    """Evaluate ``cond`` with ``lookup(bit) -> 0|1`` supplying leaf values."""
    if isinstance(cond, CondEq):
        return lookup(cond.bit) == cond.value
    left = eval_cond(cond.left, lookup)
    right = eval_cond(cond.right, lookup)
    if isinstance(cond, CondXor):
        return left != right
    return left and right


# --- events -----------------------------------------------------------------


@dataclass(frozen=True)
class SingleGate:
    gate: str
    qubit: str
    angle: Angle | None = None
    span: SourceSpan = _span()


@dataclass(frozen=True)
class MultiGate:
    gate: str
    controls: tuple[str, ...]
    targets: tuple[str, ...]
    angle: Angle | None = None
    kickback: bool = False
    span: SourceSpan = _span()


@dataclass(frozen=True)
class Swap:
    a: str
    b: str
    span: SourceSpan = _span()


@dataclass(frozen=True)
class Measure:
    qubit: str
    cbit: str
    span: SourceSpan = _span()


@dataclass(frozen=True)
class Alt:
    condition: CondExpr
    then_events: tuple[Event, ...] = ()
    else_events: tuple[Event, ...] = ()
    span: SourceSpan = _span()


@dataclass(frozen=True)
class Use:
    sub_name: str
    actuals: tuple[str, ...]
    span: SourceSpan = _span()


Event = Union[SingleGate, MultiGate, Swap, Measure, Alt, Use]


def event_qubits(event: Event) -> tuple[str, ...]:
    """Names of lifelines an event touches on the quantum side (Alt excluded)."""
    if isinstance(event, SingleGate):
        return (event.qubit,)
    if isinstance(event, MultiGate):
        return event.controls + event.targets
    if isinstance(event, Swap):
        return (event.a, event.b)
    if isinstance(event, Measure):
        return (event.qubit,)
    if isinstance(event, Use):
        return event.actuals
    return ()


def walk_events(events: tuple[Event, ...]) -> Iterator[Event]:
    """Depth-first, in source order, descending into Alt branches."""
    for ev in events:
        yield ev
        if isinstance(ev, Alt):
            yield from walk_events(ev.then_events)
            yield from walk_events(ev.else_events)


# --- declarations -----------------------------------------------------------


@dataclass(frozen=True)
class QubitDecl:
    name: str
    init: int = 0
    span: SourceSpan = _span()


@dataclass(frozen=True)
class CbitDecl:
    name: str
    span: SourceSpan = _span()


@dataclass(frozen=True)
class SeqDiagram:
    name: str
    stereotypes: tuple[Stereotype, ...] = ()
    formals: tuple[QubitDecl, ...] = ()
    qubits: tuple[QubitDecl, ...] = ()
    cbits: tuple[CbitDecl, ...] = ()
    events: tuple[Event, ...] = ()
    span: SourceSpan = _span()

    @property
    def is_top_level(self) -> bool:
        return not self.formals

    def lifeline_names(self) -> list[str]:
        return [d.name for d in (*self.formals, *self.qubits, *self.cbits)]


@dataclass(frozen=True)
class Attribute:
    name: str
    type_name: str
    span: SourceSpan = _span()


@dataclass(frozen=True)
class Param:
    name: str
    type_name: str | None = None


@dataclass(frozen=True)
class Operation:
    name: str
    params: tuple[Param, ...] = ()
    return_type: str | None = None
    span: SourceSpan = _span()


@dataclass(frozen=True)
class ClassDecl:
    name: str
    stereotypes: tuple[Stereotype, ...] = ()
    attributes: tuple[Attribute, ...] = ()
    operations: tuple[Operation, ...] = ()
    circuit_ref: str | None = None
    span: SourceSpan = _span()


@dataclass(frozen=True)
class Relation:
    kind: RelationKind
    source: str
    target: str
    span: SourceSpan = _span()


@dataclass(frozen=True)
class Model:
    name: str
    classes: tuple[ClassDecl, ...] = ()
    relations: tuple[Relation, ...] = ()
    sequences: tuple[SeqDiagram, ...] = ()
    span: SourceSpan = _span()

    def diagram(self, name: str) -> SeqDiagram:
        for seq in self.sequences:
            if seq.name == name:
                return seq
        raise UnknownDiagram(name, self.span)

    def top_level_diagrams(self) -> list[SeqDiagram]:
        return [s for s in self.sequences if s.is_top_level]


# --- resolution ---------------------------------------------------------------


class ResolveError(Exception):
    kind = "resolve"

    def __init__(self, name: str, span: SourceSpan, detail: str = ""):
        self.name = name
        self.span = span
        msg = detail or f"{self.kind} {name!r}"
        super().__init__(f"{span}: {msg}")
        self.message = msg


class UnknownClass(ResolveError):
    kind = "unknown class"


class UnknownDiagram(ResolveError):
    kind = "unknown sequence diagram"


class UnknownLifeline(ResolveError):
    kind = "unknown lifeline"


class DuplicateName(ResolveError):
    kind = "duplicate name"


@dataclass(frozen=True)
class Lifeline:
    name: str
    kind: str  # "formal" | "qubit" | "cbit"
    index: int
    span: SourceSpan

    @property
    def is_quantum(self) -> bool:
        return self.kind != "cbit"


@dataclass
class SymbolTable:
    classes: dict[str, ClassDecl]
    diagrams: dict[str, SeqDiagram]
    lifelines: dict[str, dict[str, Lifeline]]
    uses: dict[str, tuple[str, ...]]

    def qubit_count(self, diagram: str) -> int:
        return sum(1 for l in self.lifelines[diagram].values() if l.kind == "qubit")

    def cbit_count(self, diagram: str) -> int:
        return sum(1 for l in self.lifelines[diagram].values() if l.kind == "cbit")


def resolve(model: Model) -> SymbolTable:
    """Bind every name in ``model`` to its declaration, or raise a ResolveError."""
    classes: dict[str, ClassDecl] = {}
    for cls in model.classes:
        if cls.name in classes:
            raise DuplicateName(cls.name, cls.span)
        classes[cls.name] = cls
    diagrams: dict[str, SeqDiagram] = {}
    for seq in model.sequences:
        if seq.name in diagrams or seq.name in classes:
            raise DuplicateName(seq.name, seq.span)
        diagrams[seq.name] = seq

    for rel in model.relations:
        for end in (rel.source, rel.target):
            if end not in classes:
                raise UnknownClass(end, rel.span)
    for cls in model.classes:
        if cls.circuit_ref is not None and cls.circuit_ref not in diagrams:
            raise UnknownDiagram(cls.circuit_ref, cls.span)

    lifelines: dict[str, dict[str, Lifeline]] = {}
    uses: dict[str, tuple[str, ...]] = {}
    for seq in model.sequences:
        table: dict[str, Lifeline] = {}
        groups = (("formal", seq.formals), ("qubit", seq.qubits), ("cbit", seq.cbits))
        for kind, decls in groups:
            for i, decl in enumerate(decls):
                if decl.name in table:
                    raise DuplicateName(decl.name, decl.span)
                table[decl.name] = Lifeline(decl.name, kind, i, decl.span)
        callees = []
        for ev in walk_events(seq.events):
            for name in event_qubits(ev):
                if name not in table:
                    raise UnknownLifeline(name, ev.span)
            if isinstance(ev, Measure) and ev.cbit not in table:
                raise UnknownLifeline(ev.cbit, ev.span)
            if isinstance(ev, Alt):
                for leaf in cond_leaves(ev.condition):
                    if leaf.bit not in table:
                        raise UnknownLifeline(str(leaf.bit), leaf.span)
            if isinstance(ev, Use):
                if ev.sub_name not in diagrams:
                    raise UnknownDiagram(ev.sub_name, ev.span)
                callees.append(ev.sub_name)
        lifelines[seq.name] = table
        uses[seq.name] = tuple(callees)
    return SymbolTable(classes, diagrams, lifelines, uses)


# --- canonical form -----------------------------------------------------------


def _order_stereotypes(tags) -> tuple[Stereotype, ...]:
    return tuple(sorted(set(tags), key=STEREOTYPE_ORDER.__getitem__))


def _canon_event(ev: Event) -> Event:
    if isinstance(ev, (SingleGate, MultiGate)) and ev.angle is not None:
        return dataclasses.replace(ev, angle=ev.angle.canonical())
    if isinstance(ev, Alt):
        return dataclasses.replace(
            ev,
            then_events=tuple(_canon_event(e) for e in ev.then_events),
            else_events=tuple(_canon_event(e) for e in ev.else_events),
        )
    return ev


def canonicalize(model: Model) -> Model:
    """Reduce angles and order stereotype sets.  Idempotent."""
    classes = tuple(
        dataclasses.replace(c, stereotypes=_order_stereotypes(c.stereotypes))
        for c in model.classes
    )
    seqs = tuple(
        dataclasses.replace(
            s,
            stereotypes=_order_stereotypes(s.stereotypes),
            events=tuple(_canon_event(e) for e in s.events),
        )
        for s in model.sequences
    )
    return dataclasses.replace(model, classes=classes, sequences=seqs)
