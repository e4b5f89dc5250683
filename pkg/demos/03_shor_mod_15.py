# # Factoring 15
#
# The bundled shor15 model carries one period-finding circuit per base x
# coprime to 15.  Each circuit has three counting qubits, four work qubits,
# controlled multiplications built from swap networks, and an inverse QFT
# reused through `use`.

# %%

from fractions import Fraction

from quanuml.shor import (
    ClassicalOracle,
    SimulatedCircuit,
    factor,
    find_order,
    format_result,
    success_probability,
)

sim = SimulatedCircuit()
for x in (2, 4, 7, 8, 11, 13):
    dist = sim.distribution(x, 15)
    phases = {str(Fraction(y, dist.denominator)): round(p, 6) for y, p in dist.probabilities.items()}
    r, _ = find_order(x, 15, sim)
    print(f"x={x:>2}  phases {phases}  order {r}")

# A single run recovers the order of 7 from phases 1/4 and 3/4.  Phase 1/2
# only gives the divisor 2.  Testing small multiples of the candidate
# rescues it, which lifts the success rate from 1/2 to 3/4.

# %%

print("without multiples:", success_probability(7, 15, sim, multiples=False))
print("with multiples:   ", success_probability(7, 15, sim, multiples=True))

# The classical driver runs the five steps: even check, perfect power,
# random base with a gcd shortcut, order finding, and the final gcd test.

# %%

print(format_result(factor(15, x=7, seed=1, backend=sim)))
print(format_result(factor(14)))
print(format_result(factor(27)))
print(format_result(factor(15, x=5)))

# The classical oracle backend computes the ideal phase distribution
# directly.  It reaches moduli that have no bundled circuit.

# %%

for n in (21, 35, 91):
    print(format_result(factor(n, seed=5, backend=ClassicalOracle())))
