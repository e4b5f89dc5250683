"""Lowering of sequence diagrams to a flat circuit IR.

Qubits and cbits are indexed in declaration order.  ``use`` events are
inlined with formal-to-actual substitution, and callee-local cbits get fresh
indices at every call site.  Alt fragments become :class:`Cond` blocks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Union

from .model import (
    Alt,
    Angle,
    CondAnd,
    CondEq,
    CondExpr,
    CondXor,
    Measure,
    Model,
    MultiGate,
    SingleGate,
    Swap,
    Use,
    cond_leaves,
)

MAX_INLINE_DEPTH = 32
MAX_COND_DEPTH = 8


class LoweringError(Exception):
    pass


class NotTopLevel(LoweringError):
    pass


class InliningDepthExceeded(LoweringError):
    pass


class CondDepthExceeded(LoweringError):
    pass


@dataclass(frozen=True)
class Unitary:
    """``gate`` on ``qubits``; the first ``num_controls`` entries are controls.

    With several targets the gate acts on each target, all sharing the same
    controls.
    """

    gate: str
    qubits: tuple[int, ...]
    num_controls: int = 0
    angle: Angle | None = None

    @property
    def controls(self) -> tuple[int, ...]:
        return self.qubits[: self.num_controls]

    @property
    def targets(self) -> tuple[int, ...]:
        return self.qubits[self.num_controls :]


@dataclass(frozen=True)
class MeasureI:
    qubit: int
    cbit: int


@dataclass(frozen=True)
class SwapI:
    a: int
    b: int


@dataclass(frozen=True)
class Cond:
    condition: CondExpr
    body: tuple[Instr, ...] = ()
    else_body: tuple[Instr, ...] = ()


Instr = Union[Unitary, MeasureI, SwapI, Cond]


@dataclass(frozen=True)
class CircuitIR:
    name: str
    num_qubits: int
    num_cbits: int
    qubit_names: tuple[str, ...]
    cbit_names: tuple[str, ...]
    instructions: tuple[Instr, ...] = ()
    init_ones: frozenset[int] = frozenset()

    def __post_init__(self):
        if len(self.qubit_names) != self.num_qubits or len(self.cbit_names) != self.num_cbits:
            raise ValueError("register name lists do not match register sizes")
        _check_indices(self.instructions, self.num_qubits, self.num_cbits, 0)
        if any(not 0 <= q < self.num_qubits for q in self.init_ones):
            raise ValueError("init_ones index out of range")


def _check_indices(instrs, nq: int, nc: int, depth: int):
    for ins in instrs:
        if isinstance(ins, Unitary):
            qs = ins.qubits
            if not qs or ins.num_controls >= len(qs) or ins.num_controls < 0:
                raise ValueError(f"malformed unitary {ins}")
        elif isinstance(ins, SwapI):
            qs = (ins.a, ins.b)
        elif isinstance(ins, MeasureI):
            qs = (ins.qubit,)
            if not 0 <= ins.cbit < nc:
                raise ValueError(f"cbit index out of range in {ins}")
        elif isinstance(ins, Cond):
            if depth + 1 > MAX_COND_DEPTH:
                raise CondDepthExceeded(f"conditional blocks nest deeper than {MAX_COND_DEPTH}")
            for leaf in cond_leaves(ins.condition):
                if not isinstance(leaf.bit, int) or not 0 <= leaf.bit < nc:
                    raise ValueError(f"condition bit out of range in {ins}")
            _check_indices(ins.body, nq, nc, depth + 1)
            _check_indices(ins.else_body, nq, nc, depth + 1)
            continue
        else:
            raise TypeError(f"unknown instruction {ins!r}")
        if any(not 0 <= q < nq for q in qs) or len(set(qs)) != len(qs):
            raise ValueError(f"bad qubit indices in {ins}")


def _map_cond(cond: CondExpr, cmap: dict[str, int]) -> CondExpr:
    if isinstance(cond, CondEq):
        return CondEq(cmap[cond.bit], cond.value)
    cls = CondXor if isinstance(cond, CondXor) else CondAnd
    return cls(_map_cond(cond.left, cmap), _map_cond(cond.right, cmap))


class _Lowerer:
    def __init__(self, model: Model, cbit_names: list[str]):
        self.by_name = {s.name: s for s in model.sequences}
        self.cbit_names = cbit_names
        self.sites = 0

    def events(self, events, qmap, cmap, inline_depth: int, cond_depth: int) -> list[Instr]:
        out: list[Instr] = []
        for ev in events:
            if isinstance(ev, SingleGate):
                out.append(Unitary(ev.gate, (qmap[ev.qubit],), 0, ev.angle))
            elif isinstance(ev, MultiGate):
                qubits = tuple(qmap[n] for n in ev.controls + ev.targets)
                out.append(Unitary(ev.gate, qubits, len(ev.controls), ev.angle))
            elif isinstance(ev, Swap):
                out.append(SwapI(qmap[ev.a], qmap[ev.b]))
            elif isinstance(ev, Measure):
                out.append(MeasureI(qmap[ev.qubit], cmap[ev.cbit]))
            elif isinstance(ev, Alt):
                if cond_depth + 1 > MAX_COND_DEPTH:
                    raise CondDepthExceeded(f"alt fragments nest deeper than {MAX_COND_DEPTH}")
                out.append(
                    Cond(
                        _map_cond(ev.condition, cmap),
                        tuple(self.events(ev.then_events, qmap, cmap, inline_depth, cond_depth + 1)),
                        tuple(self.events(ev.else_events, qmap, cmap, inline_depth, cond_depth + 1)),
                    )
                )
            elif isinstance(ev, Use):
                if inline_depth + 1 > MAX_INLINE_DEPTH:
                    raise InliningDepthExceeded(
                        f"use of {ev.sub_name!r} exceeds {MAX_INLINE_DEPTH} nested levels"
                    )
                callee = self.by_name[ev.sub_name]
                self.sites += 1
                sub_q = {f.name: qmap[a] for f, a in zip(callee.formals, ev.actuals)}
                sub_c = {}
                for c in callee.cbits:
                    sub_c[c.name] = len(self.cbit_names)
                    self.cbit_names.append(f"{callee.name}@{self.sites}.{c.name}")
                out.extend(self.events(callee.events, sub_q, sub_c, inline_depth + 1, cond_depth))
            else:  # pragma: no cover - closed sum
                raise TypeError(f"unknown event {ev!r}")
        return out


def lower(model: Model, diagram_name: str) -> CircuitIR:
    """Flatten the top-level diagram ``diagram_name`` of a validated model."""
    seq = model.diagram(diagram_name)
    if not seq.is_top_level:
        raise NotTopLevel(f"{diagram_name!r} is a parameterized sub-diagram")
    qmap = {q.name: i for i, q in enumerate(seq.qubits)}
    cmap = {c.name: i for i, c in enumerate(seq.cbits)}
    cbit_names = [c.name for c in seq.cbits]
    instrs = _Lowerer(model, cbit_names).events(seq.events, qmap, cmap, 0, 0)
    return CircuitIR(
        name=seq.name,
        num_qubits=len(seq.qubits),
        num_cbits=len(cbit_names),
        qubit_names=tuple(q.name for q in seq.qubits),
        cbit_names=tuple(cbit_names),
        instructions=tuple(instrs),
        init_ones=frozenset(i for i, q in enumerate(seq.qubits) if q.init),
    )


# --- statistics -------------------------------------------------------------


class IRStats(NamedTuple):
    depth: int
    gate_count: int
    measure_count: int
    cond_count: int


def _wires(ins: Instr) -> set:
    if isinstance(ins, Unitary):
        return {("q", q) for q in ins.qubits}
    if isinstance(ins, SwapI):
        return {("q", ins.a), ("q", ins.b)}
    if isinstance(ins, MeasureI):
        return {("q", ins.qubit), ("c", ins.cbit)}
    wires = {("c", leaf.bit) for leaf in cond_leaves(ins.condition)}
    for sub in (*ins.body, *ins.else_body):
        wires |= _wires(sub)
    return wires


def _stats(instrs) -> IRStats:
    level: dict = {}
    depth = gates = measures = conds = 0
    for ins in instrs:
        wires = _wires(ins)
        start = max((level.get(w, 0) for w in wires), default=0)
        if isinstance(ins, Cond):
            then_s, else_s = _stats(ins.body), _stats(ins.else_body)
            weight = 1 + max(then_s.depth, else_s.depth)
            gates += max(then_s.gate_count, else_s.gate_count)
            measures += max(then_s.measure_count, else_s.measure_count)
            conds += 1 + then_s.cond_count + else_s.cond_count
        else:
            weight = 1
            if isinstance(ins, MeasureI):
                measures += 1
            else:
                gates += 1
        for w in wires:
            level[w] = start + weight
        depth = max(depth, start + weight)
    return IRStats(depth, gates, measures, conds)


def ir_stats(ir: CircuitIR) -> IRStats:
    """Depth and instruction counts.

    Depth is the longest chain of instructions that share a qubit or cbit.  A
    Cond block weighs 1 plus the deeper of its two branches and occupies every
    wire it reads or touches.  Gate and measurement counts take the larger
    branch of each Cond (one execution path); ``cond_count`` counts every
    Cond block, nested ones included.
    """
    return _stats(ir.instructions)


def entangling_depth(ir: CircuitIR) -> int:
    """Depth of the multi-qubit layer that precedes the first measurement.

    Single-qubit gates are ignored; the prefix stops at the first MeasureI or
    Cond instruction.
    """
    prefix = []
    for ins in ir.instructions:
        if isinstance(ins, (MeasureI, Cond)):
            break
        if isinstance(ins, SwapI) or (isinstance(ins, Unitary) and len(ins.qubits) > 1):
            prefix.append(ins)
    return _stats(prefix).depth
