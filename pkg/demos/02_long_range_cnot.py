# # A long-range CNOT with mid-circuit measurement
#
# Qubits q0 and q5 sit at the two ends of a six-qubit chain.  The model
# implements CNOT(q0 -> q5) in constant depth.  It uses two Bell pairs, a
# single layer of CNOTs, measurements of the four middle qubits and two
# classically controlled Pauli corrections drawn as alt fragments.

# %%

import dataclasses

from quanuml import entangling_depth, ir_stats, load_example, lower, marginal, run_exact
from quanuml.library import example_text

print(example_text("teleport-cnot-dynamic"))

# %%

model = load_example("teleport-cnot-dynamic")
ir = lower(model, "LongRangeCNOT")
print(ir_stats(ir))
print("entangling depth before the first measurement:", entangling_depth(ir))

# The bundled model starts with q0 = |1>.  Flip the initial states to run
# all four basis inputs and compare with a plain CNOT.  The final (q0, q5)
# pair is deterministic on every branch: 16 measurement histories with
# probability 1/16 each, all carrying the same answer.

# %%


def with_inputs(a, b):
    seq = model.diagram("LongRangeCNOT")
    qubits = tuple(
        dataclasses.replace(q, init={"q0": a, "q5": b}.get(q.name, q.init)) for q in seq.qubits
    )
    return dataclasses.replace(model, sequences=(dataclasses.replace(seq, qubits=qubits),))


for a in (0, 1):
    for b in (0, 1):
        branches = run_exact(lower(with_inputs(a, b), "LongRangeCNOT"))
        print(f"in q0 q5 = {a}{b}  ->  {marginal(branches, [0, 5])}   ({len(branches)} branches)")
