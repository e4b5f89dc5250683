import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import GOLDEN
from generators import random_ir
from quanuml.emitters import (
    emit_diagram_text,
    emit_ir_json,
    emit_qasm3,
    load_ir_json,
    qasm_angle,
    qasm_condition,
)
from quanuml.library import load_example
from quanuml.lowering import lower
from quanuml.model import Angle, CondAnd, CondEq, CondXor
from quanuml.parser import parse
from regen_golden import golden_cases

CASES = list(golden_cases())


@pytest.mark.parametrize("name, seq, model, top", CASES, ids=[f"{c[0]}.{c[1]}" for c in CASES])
def test_golden_files(name, seq, model, top):
    stem = f"{name}.{seq}"
    assert emit_diagram_text(model, seq) == (GOLDEN / f"{stem}.puml").read_text()
    if top:
        ir = lower(model, seq)
        assert emit_qasm3(ir) == (GOLDEN / f"{stem}.qasm").read_text()
        assert emit_ir_json(ir) == (GOLDEN / f"{stem}.json").read_text()


def test_golden_directory_has_no_strays():
    expected = set()
    for name, seq, _, top in CASES:
        expected.add(f"{name}.{seq}.puml")
        if top:
            expected |= {f"{name}.{seq}.qasm", f"{name}.{seq}.json"}
    assert {p.name for p in GOLDEN.iterdir()} == expected


def _qasm(body: str) -> str:
    return emit_qasm3(lower(parse(f"model M {{ seq A {{ {body} }} }}"), "A"))


def test_conditional_correction_qasm():
    text = _qasm("qubit q cbit c measure q -> c alt c == 1 { gate Z on q }")
    assert text.endswith("c[0] = measure q[0];\nif (c[0] == 1) {\n  z q[0];\n}\n")


def test_else_branch_qasm():
    text = _qasm("qubit q cbit c measure q -> c alt c == 0 { gate X on q } else { gate H on q }")
    assert "if (c[0] == 0) {\n  x q[0];\n} else {\n  h q[0];\n}\n" in text


def test_controlled_gate_names():
    text = _qasm(
        "qubit a, b, c, d "
        "gate X control a, b target c "
        "gate Z control a target b "
        "gate P(pi/8) control a target b "
        "gate X control a, b, c target d "
        "gate P(3pi/4) control a, b target c"
    )
    assert text.splitlines()[3:] == [
        "ccx q[0], q[1], q[2];",
        "cz q[0], q[1];",
        "cp(pi/8) q[0], q[1];",
        "ctrl(3) @ x q[0], q[1], q[2], q[3];",
        "ctrl(2) @ p(3*pi/4) q[0], q[1], q[2];",
    ]


def test_multi_target_gate_emits_one_line_per_target():
    text = _qasm("qubit a, b, c gate X control a target b, c")
    assert text.splitlines()[-2:] == ["cx q[0], q[1];", "cx q[0], q[2];"]


def test_empty_diagram_is_header_only():
    assert _qasm("") == 'OPENQASM 3.0;\ninclude "stdgates.inc";\n'
    text = emit_diagram_text(parse("model M { seq A { } }"), "A")
    assert text == "@startuml A\n@enduml\n"


@pytest.mark.parametrize(
    "angle, text",
    [
        (Angle(1, 4), "pi/4"),
        (Angle(-1, 2), "-pi/2"),
        (Angle(3, 4), "3*pi/4"),
        (Angle(4, 2), "2*pi"),
        (Angle(0, 3), "0"),
        (Angle(radians=0.1), "0.10000000000000001"),
    ],
)
def test_qasm_angle(angle, text):
    assert qasm_angle(angle) == text


def test_compound_conditions():
    assert qasm_condition(CondEq(2, 0)) == "c[2] == 0"
    assert qasm_condition(CondXor(CondEq(0, 1), CondEq(2, 1))) == "(c[0] ^ c[2]) == 1"
    cond = CondAnd(CondEq(0, 0), CondXor(CondEq(1, 1), CondEq(3, 1)))
    assert qasm_condition(cond) == "((c[0] ^ 1) & (c[1] ^ c[3])) == 1"


def test_kickback_reply_arrow():
    text = emit_diagram_text(load_example("grover2"), "Main")
    assert "q0 -> q1 : <<control>> Z\nq1 --> q0 : <<controlled>>" in text


def test_else_fragment_and_ref_render():
    m = parse("""model M {
      seq Sub(a) { gate H on a }
      seq A { qubit q cbit c measure q -> c alt c == 1 { use Sub on (q) } else { gate X on q } }
    }""")
    text = emit_diagram_text(m, "A")
    assert "alt c == 1\n  ref over q : Sub\nelse\n  q -> q : X\nend\n" in text


def test_ir_json_shape():
    doc = json.loads(emit_ir_json(lower(load_example("bell"), "Main")))
    assert list(doc) == ["cbits", "init_ones", "instructions", "name", "names", "qubits"]
    assert doc["instructions"][1] == {"angle": None, "controls": 1, "gate": "X", "op": "unitary", "qubits": [0, 1]}


def test_ir_json_round_trip_random():
    for seed in range(300):
        ir = random_ir(random.Random(seed))
        text = emit_ir_json(ir)
        assert load_ir_json(text) == ir
        assert emit_ir_json(load_ir_json(text)) == text


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=2**32))
def test_ir_json_round_trip_property(seed):
    ir = random_ir(random.Random(seed))
    assert load_ir_json(emit_ir_json(ir)) == ir


def test_emitters_are_deterministic():
    m = load_example("shor15")
    ir = lower(m, "Shor7")
    assert emit_qasm3(ir) == emit_qasm3(lower(m, "Shor7"))
    assert emit_ir_json(ir) == emit_ir_json(lower(m, "Shor7"))
