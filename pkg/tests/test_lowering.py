import pytest

from quanuml.library import load_example
from quanuml.lowering import (
    MAX_COND_DEPTH,
    MAX_INLINE_DEPTH,
    CircuitIR,
    Cond,
    CondDepthExceeded,
    InliningDepthExceeded,
    MeasureI,
    NotTopLevel,
    SwapI,
    Unitary,
    entangling_depth,
    ir_stats,
    lower,
)
from quanuml.model import Angle, CondEq, CondXor, Use, walk_events
from quanuml.parser import parse


def test_bell_lowering():
    ir = lower(load_example("bell"), "Main")
    assert ir.instructions == (
        Unitary("H", (0,)),
        Unitary("X", (0, 1), 1),
        MeasureI(0, 0),
        MeasureI(1, 1),
    )
    assert ir.qubit_names == ("q0", "q1") and ir.cbit_names == ("c0", "c1")
    assert ir_stats(ir) == (3, 2, 2, 0)


def test_init_ones_recorded():
    ir = lower(load_example("teleport-cnot-dynamic"), "LongRangeCNOT")
    assert ir.init_ones == frozenset({0})


def test_teleport_conditions_use_cbit_indices():
    ir = lower(load_example("teleport-cnot-dynamic"), "LongRangeCNOT")
    conds = [i for i in ir.instructions if isinstance(i, Cond)]
    assert conds[0] == Cond(CondXor(CondEq(0, 1), CondEq(2, 1)), (Unitary("X", (5,)),))
    assert conds[1] == Cond(CondXor(CondEq(1, 1), CondEq(3, 1)), (Unitary("Z", (0,)),))


def test_teleport_stats():
    ir = lower(load_example("teleport-cnot-dynamic"), "LongRangeCNOT")
    assert ir_stats(ir) == (8, 11, 6, 2)
    assert entangling_depth(ir) == 2


def _event_count(model, name):
    """Instructions a diagram lowers to, counted on the model side."""
    total = 0
    for ev in model.diagram(name).events:
        total += _event_count(model, ev.sub_name) if isinstance(ev, Use) else 1
    return total


@pytest.mark.parametrize("a", [1, 2, 4, 7, 8, 11, 13, 14])
def test_shor_inlining_preserves_event_count(a):
    m = load_example("shor15")
    ir = lower(m, f"Shor{a}")
    assert len(ir.instructions) == _event_count(m, f"Shor{a}")
    assert ir.num_qubits == 7
    assert not any(isinstance(i, Cond) for i in ir.instructions)


def test_use_maps_formals_to_actuals():
    m = parse("""model M {
      seq Pair(a, b) { gate X control a target b swap a, b }
      seq Main { qubit x, y, z cbit c use Pair on (z, x) measure x -> c }
    }""")
    ir = lower(m, "Main")
    assert ir.instructions == (Unitary("X", (2, 0), 1), SwapI(2, 0), MeasureI(0, 0))


def test_callee_cbits_get_fresh_names():
    m = parse("""model M {
      seq Read(a) { cbit r measure a -> r alt r == 1 { gate X on a } }
      seq Main { qubit q, p cbit c use Read on (q) use Read on (p) }
    }""")
    ir = lower(m, "Main")
    assert ir.cbit_names == ("c", "Read@1.r", "Read@2.r")
    assert ir.instructions[0] == MeasureI(0, 1)
    assert ir.instructions[2] == MeasureI(1, 2)
    assert ir.instructions[3] == Cond(CondEq(2, 1), (Unitary("X", (1,)),))


def test_angles_are_carried():
    m = parse("model M { seq A { qubit a, b gate P(pi/2) control a target b } }")
    assert lower(m, "A").instructions == (Unitary("P", (0, 1), 1, Angle(1, 2)),)


def test_multi_target_gate_keeps_controls_first():
    m = parse("model M { seq A { qubit a, b, c gate Z control a target b, c } }")
    [ins] = lower(m, "A").instructions
    assert ins.controls == (0,) and ins.targets == (1, 2)


def test_parameterized_diagram_is_not_top_level():
    with pytest.raises(NotTopLevel):
        lower(load_example("shor15"), "QFTDagger")


def test_inlining_depth_limit():
    seqs = [f"seq S{i}(a) {{ use S{i + 1} on (a) }}" for i in range(MAX_INLINE_DEPTH + 2)]
    seqs.append(f"seq S{MAX_INLINE_DEPTH + 2}(a) {{ gate H on a }}")
    m = parse("model M { " + " ".join(seqs) + " seq Main { qubit q use S0 on (q) } }")
    with pytest.raises(InliningDepthExceeded):
        lower(m, "Main")


def test_cond_depth_limit():
    inner = "gate X on q"
    for _ in range(MAX_COND_DEPTH + 1):
        inner = f"alt c == 1 {{ {inner} }}"
    m = parse(f"model M {{ seq A {{ qubit q cbit c measure q -> c {inner} }} }}")
    with pytest.raises(CondDepthExceeded):
        lower(m, "A")


def test_cond_depth_at_limit_is_fine():
    inner = "gate X on q"
    for _ in range(MAX_COND_DEPTH):
        inner = f"alt c == 1 {{ {inner} }}"
    m = parse(f"model M {{ seq A {{ qubit q cbit c measure q -> c {inner} }} }}")
    assert ir_stats(lower(m, "A")).cond_count == MAX_COND_DEPTH


def test_stats_take_larger_branch():
    m = parse("""model M { seq A {
      qubit a, b
      cbit c
      measure a -> c
      alt c == 1 { gate X on b gate H on b gate Z on b } else { gate X on b }
    } }""")
    assert ir_stats(lower(m, "A")) == (5, 3, 1, 1)


def test_empty_circuit_stats():
    ir = lower(parse("model M { seq A { } }"), "A")
    assert ir_stats(ir) == (0, 0, 0, 0)
    assert entangling_depth(ir) == 0


def test_ir_rejects_bad_indices():
    with pytest.raises(ValueError):
        CircuitIR("x", 1, 0, ("q",), (), (Unitary("H", (1,)),))
    with pytest.raises(ValueError):
        CircuitIR("x", 2, 1, ("a", "b"), ("c",), (Unitary("X", (0, 0), 1),))
    with pytest.raises(ValueError):
        CircuitIR("x", 1, 1, ("a",), ("c",), (Cond(CondEq(3, 1)),))


def test_every_bundled_event_is_lowered():
    m = load_example("fulladder4")
    ir = lower(m, "Main")
    assert len(ir.instructions) == sum(1 for _ in walk_events(m.diagram("Main").events))
