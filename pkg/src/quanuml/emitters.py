"""Text serializations: OpenQASM 3, canonical IR JSON, and PlantUML diagrams.

Every emitter is a pure function of its input and returns byte-stable text.
"""

from __future__ import annotations

import json

from .lowering import CircuitIR, Cond, Instr, MeasureI, SwapI, Unitary
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
)
from .parser import format_angle, format_cond


class EmitError(Exception):
    pass


class UnsupportedCondition(EmitError):
    pass


# --- OpenQASM 3 -------------------------------------------------------------

_QASM_NAMES = {
    "H": "h", "X": "x", "Y": "y", "Z": "z", "S": "s", "Sdg": "sdg",
    "T": "t", "Tdg": "tdg", "RX": "rx", "RY": "ry", "RZ": "rz", "P": "p",
}
_CONTROLLED = {("X", 1): "cx", ("X", 2): "ccx", ("Z", 1): "cz", ("P", 1): "cp"}


def qasm_angle(angle: Angle) -> str:
    angle = angle.canonical()
    if angle.radians is not None:
        return format(angle.radians, ".17g")
    num, den = angle.numerator, angle.denominator
    if num == 0:
        return "0"
    sign = "-" if num < 0 else ""
    head = "pi" if abs(num) == 1 else f"{abs(num)}*pi"
    return sign + head + (f"/{den}" if den != 1 else "")


def _qasm_gate(ins: Unitary) -> list[str]:
    param = f"({qasm_angle(ins.angle)})" if ins.angle is not None else ""
    ctrl = ins.num_controls
    if ctrl == 0:
        name = _QASM_NAMES[ins.gate] + param
    elif (ins.gate, ctrl) in _CONTROLLED:
        name = _CONTROLLED[ins.gate, ctrl] + param
    else:
        name = f"ctrl({ctrl}) @ {_QASM_NAMES[ins.gate]}{param}"
    head = [f"q[{c}]" for c in ins.controls]
    return [f"{name} {', '.join([*head, f'q[{t}]'])};" for t in ins.targets]


def _bit_expr(cond: CondExpr, top: bool = True) -> str:
    if isinstance(cond, CondEq):
        return f"c[{cond.bit}]" if cond.value == 1 else f"(c[{cond.bit}] ^ 1)"
    if isinstance(cond, CondXor):
        op = "^"
    elif isinstance(cond, CondAnd):
        op = "&"
    else:
        raise UnsupportedCondition(f"cannot express {cond!r}")
    text = f"{_bit_expr(cond.left, False)} {op} {_bit_expr(cond.right, False)}"
    return text if top else f"({text})"


def qasm_condition(cond: CondExpr) -> str:
    """Single comparisons stay ``c[i] == v``; compound ones become a bit expression."""
    if isinstance(cond, CondEq):
        return f"c[{cond.bit}] == {cond.value}"
    return f"({_bit_expr(cond)}) == 1"


def _qasm_body(instrs: tuple[Instr, ...], depth: int, out: list[str]):
    pad = "  " * depth
    for ins in instrs:
        if isinstance(ins, Unitary):
            out.extend(pad + line for line in _qasm_gate(ins))
        elif isinstance(ins, SwapI):
            out.append(f"{pad}swap q[{ins.a}], q[{ins.b}];")
        elif isinstance(ins, MeasureI):
            out.append(f"{pad}c[{ins.cbit}] = measure q[{ins.qubit}];")
        elif isinstance(ins, Cond):
            out.append(f"{pad}if ({qasm_condition(ins.condition)}) {{")
            _qasm_body(ins.body, depth + 1, out)
            if ins.else_body:
                out.append(f"{pad}}} else {{")
                _qasm_body(ins.else_body, depth + 1, out)
            out.append(f"{pad}}}")
        else:  # pragma: no cover - closed sum
            raise TypeError(f"unknown instruction {ins!r}")


def emit_qasm3(ir: CircuitIR) -> str:
    out = ["OPENQASM 3.0;", 'include "stdgates.inc";']
    if ir.num_qubits:
        out.append(f"qubit[{ir.num_qubits}] q;")
    if ir.num_cbits:
        out.append(f"bit[{ir.num_cbits}] c;")
    out.extend(f"x q[{q}];" for q in sorted(ir.init_ones))
    _qasm_body(ir.instructions, 0, out)
    return "\n".join(out) + "\n"


# --- IR JSON ----------------------------------------------------------------


def _angle_obj(angle: Angle | None):
    if angle is None:
        return None
    if angle.radians is not None:
        return {"radians": angle.radians}
    return {"num": angle.numerator, "den": angle.denominator}


def _cond_obj(cond: CondExpr) -> dict:
    if isinstance(cond, CondEq):
        return {"op": "eq", "bit": cond.bit, "value": cond.value}
    kind = "xor" if isinstance(cond, CondXor) else "and"
    return {"op": kind, "left": _cond_obj(cond.left), "right": _cond_obj(cond.right)}


def _instr_obj(ins: Instr) -> dict:
    if isinstance(ins, Unitary):
        return {
            "op": "unitary", "gate": ins.gate, "qubits": list(ins.qubits),
            "controls": ins.num_controls, "angle": _angle_obj(ins.angle),
        }
    if isinstance(ins, MeasureI):
        return {"op": "measure", "qubit": ins.qubit, "cbit": ins.cbit}
    if isinstance(ins, SwapI):
        return {"op": "swap", "a": ins.a, "b": ins.b}
    return {
        "op": "cond", "condition": _cond_obj(ins.condition),
        "body": [_instr_obj(i) for i in ins.body],
        "else": [_instr_obj(i) for i in ins.else_body],
    }


def emit_ir_json(ir: CircuitIR) -> str:
    """Canonical JSON: sorted keys, compact separators, trailing newline."""
    doc = {
        "name": ir.name,
        "qubits": ir.num_qubits,
        "cbits": ir.num_cbits,
        "names": {"qubits": list(ir.qubit_names), "cbits": list(ir.cbit_names)},
        "init_ones": sorted(ir.init_ones),
        "instructions": [_instr_obj(i) for i in ir.instructions],
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), allow_nan=False) + "\n"


def _load_angle(obj) -> Angle | None:
    if obj is None:
        return None
    if "radians" in obj:
        return Angle(radians=float(obj["radians"]))
    return Angle(int(obj["num"]), int(obj["den"]))


def _load_cond(obj) -> CondExpr:
    if obj["op"] == "eq":
        return CondEq(int(obj["bit"]), int(obj["value"]))
    cls = CondXor if obj["op"] == "xor" else CondAnd
    return cls(_load_cond(obj["left"]), _load_cond(obj["right"]))


def _load_instr(obj) -> Instr:
    op = obj["op"]
    if op == "unitary":
        return Unitary(obj["gate"], tuple(obj["qubits"]), obj["controls"], _load_angle(obj["angle"]))
    if op == "measure":
        return MeasureI(obj["qubit"], obj["cbit"])
    if op == "swap":
        return SwapI(obj["a"], obj["b"])
    if op == "cond":
        return Cond(
            _load_cond(obj["condition"]),
            tuple(_load_instr(i) for i in obj["body"]),
            tuple(_load_instr(i) for i in obj["else"]),
        )
    raise ValueError(f"unknown instruction op {op!r}")


def load_ir_json(text: str) -> CircuitIR:
    doc = json.loads(text)
    return CircuitIR(
        name=doc["name"],
        num_qubits=doc["qubits"],
        num_cbits=doc["cbits"],
        qubit_names=tuple(doc["names"]["qubits"]),
        cbit_names=tuple(doc["names"]["cbits"]),
        instructions=tuple(_load_instr(i) for i in doc["instructions"]),
        init_ones=frozenset(doc["init_ones"]),
    )


# --- PlantUML ---------------------------------------------------------------


def _gate_label(gate: str, angle: Angle | None) -> str:
    return gate + (f"({format_angle(angle)})" if angle is not None else "")


def _diagram_events(events, depth: int, out: list[str]):
    pad = "  " * depth
    for ev in events:
        if isinstance(ev, SingleGate):
            out.append(f"{pad}{ev.qubit} -> {ev.qubit} : {_gate_label(ev.gate, ev.angle)}")
        elif isinstance(ev, MultiGate):
            label = _gate_label(ev.gate, ev.angle)
            for t in ev.targets:
                for c in ev.controls:
                    out.append(f"{pad}{c} -> {t} : <<control>> {label}")
            if ev.kickback:
                out.append(f"{pad}{ev.targets[0]} --> {ev.controls[0]} : <<controlled>>")
        elif isinstance(ev, Swap):
            out.append(f"{pad}{ev.a} <-> {ev.b} : SWAP")
        elif isinstance(ev, Measure):
            out.append(f"{pad}{ev.qubit} -> {ev.cbit} : measure")
            out.append(f"{pad}deactivate {ev.qubit}")
        elif isinstance(ev, Alt):
            out.append(f"{pad}alt {format_cond(ev.condition)}")
            _diagram_events(ev.then_events, depth + 1, out)
            if ev.else_events:
                out.append(f"{pad}else")
                _diagram_events(ev.else_events, depth + 1, out)
            out.append(f"{pad}end")
        elif isinstance(ev, Use):
            out.append(f"{pad}ref over {', '.join(ev.actuals)} : {ev.sub_name}")
        else:  # pragma: no cover - closed sum
            raise TypeError(f"unknown event {ev!r}")


def emit_diagram_text(model: Model, diagram_name: str) -> str:
    """PlantUML sequence diagram for one QuanUML diagram.

    Qubit lifelines are activated at the start and deactivated by their
    measurement.  Formal qubits of a sub-diagram carry no stereotype.
    """
    seq = model.diagram(diagram_name)
    out = [f"@startuml {seq.name}"]
    for f in seq.formals:
        out.append(f"participant {f.name}")
    for q in seq.qubits:
        if q.init:
            out.append(f'participant "{q.name} |1>" as {q.name} <<qubit>>')
        else:
            out.append(f"participant {q.name} <<qubit>>")
    for c in seq.cbits:
        out.append(f"participant {c.name} <<classicalbit>>")
    for q in (*seq.formals, *seq.qubits):
        out.append(f"activate {q.name}")
    _diagram_events(seq.events, 0, out)
    out.append("@enduml")
    return "\n".join(out) + "\n"
