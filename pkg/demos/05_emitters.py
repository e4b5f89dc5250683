# # Three ways out: OpenQASM 3, IR JSON and PlantUML
#
# All three emitters are pure functions of their input and produce
# byte-stable text.  That makes them safe to golden-test.

# %%

from quanuml import emit_diagram_text, emit_ir_json, emit_qasm3, load_example, load_ir_json, lower

model = load_example("teleport-cnot-dynamic")
ir = lower(model, "LongRangeCNOT")

# The XOR conditions of the corrections become bit expressions in OpenQASM 3.

# %%

print(emit_qasm3(ir))

# The IR JSON is compact with sorted keys, and loading it gives back an equal IR.

# %%

text = emit_ir_json(ir)
print(text[:200], "...")
print("round trip equal:", load_ir_json(text) == ir)

# The diagram text feeds PlantUML directly.  Kickback on a controlled gate
# shows up as a dashed <<controlled>> reply to the control lifeline.

# %%

print(emit_diagram_text(load_example("grover2"), "Main"))
print(emit_diagram_text(load_example("shor15"), "QFTDagger"))
