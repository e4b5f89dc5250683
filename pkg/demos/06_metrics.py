# # How many diagram elements does a circuit cost?
#
# Each bundled model is measured twice.  The first count uses the QuanUML
# notation: lifelines, messages, fragments and stereotype labels.  The
# second uses a UML-profile activity-diagram baseline, where every gate is
# a node with one edge per operand.

# %%

from quanuml import compare, load_example
from quanuml.metrics import format_comparison

for name, seq in [("bell", "Main"), ("grover2", "Main"), ("fulladder4", "Main"), ("teleport-cnot-dynamic", "LongRangeCNOT")]:
    cmp = compare(load_example(name), seq)
    print(f"{name:<22} quanuml {cmp.quanuml.total:>3}  baseline {cmp.baseline.total:>3}  ratio {cmp.ratio:.3f}")

# Grover needs about half as many elements, because each single-qubit gate
# costs one self-message instead of a node with two edges and a label.
# The full adder is dominated by multi-qubit gates and lands much closer.

# %%

print(format_comparison(compare(load_example("fulladder4"), "Main")))
