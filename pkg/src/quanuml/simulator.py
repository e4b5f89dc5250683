"""Exact statevector simulation of :class:`~quanuml.lowering.CircuitIR`.

Qubit 0 is the most significant bit of a basis-state label, so the state of
an ``n``-qubit register is stored as an array of shape ``(2,) * n`` whose
axis ``i`` is qubit ``i``.  Every measurement forks the running branch into
one child per outcome with nonzero probability; classical conditions are
evaluated per branch.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .lowering import CircuitIR, Cond, Instr, MeasureI, SwapI, Unitary
from .model import Angle, eval_cond

MAX_QUBITS = 24
# Branches lighter than this are numerical noise from exact cancellations.
PRUNE_PROBABILITY = 1e-14


class SimulationError(Exception):
    pass


class TooManyQubits(SimulationError):
    pass


class UnmeasuredCondBit(SimulationError):
    pass


_S2 = 1 / math.sqrt(2)
_FIXED = {
    "H": np.array([[_S2, _S2], [_S2, -_S2]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "Sdg": np.array([[1, 0], [0, -1j]], dtype=complex),
    "T": np.array([[1, 0], [0, np.exp(1j * math.pi / 4)]], dtype=complex),
    "Tdg": np.array([[1, 0], [0, np.exp(-1j * math.pi / 4)]], dtype=complex),
}


def gate_matrix(gate: str, angle: Angle | None = None) -> np.ndarray:
    """2x2 matrix of a single-qubit gate."""
    if gate in _FIXED:
        return _FIXED[gate]
    theta = angle.value
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    if gate == "RX":
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    if gate == "RY":
        return np.array([[c, -s], [s, c]], dtype=complex)
    if gate == "RZ":
        return np.array([[np.exp(-1j * theta / 2), 0], [0, np.exp(1j * theta / 2)]], dtype=complex)
    if gate == "P":
        return np.array([[1, 0], [0, np.exp(1j * theta)]], dtype=complex)
    raise ValueError(f"unknown gate {gate!r}")


def apply_unitary(state: np.ndarray, ins: Unitary) -> np.ndarray:
    """Apply ``ins`` to a ``(2,)*n`` state array, returning a new array."""
    out = state.copy()
    index = [slice(None)] * state.ndim
    for c in ins.controls:
        index[c] = 1
    index = tuple(index)
    sub = out[index]
    # axes of ``sub`` are the uncontrolled qubits in ascending order
    free = [q for q in range(state.ndim) if q not in ins.controls]
    u = gate_matrix(ins.gate, ins.angle)
    for t in ins.targets:
        axis = free.index(t)
        sub = np.moveaxis(np.tensordot(u, sub, axes=([1], [axis])), 0, axis)
    out[index] = sub
    return out


def apply_swap(state: np.ndarray, a: int, b: int) -> np.ndarray:
    return np.ascontiguousarray(np.swapaxes(state, a, b))


@dataclass
class StateBranch:
    """One classical outcome history.  ``cbits`` holds None for unset bits."""

    probability: float
    cbits: tuple[int | None, ...]
    amplitudes: np.ndarray  # flat, length 2**num_qubits

    @property
    def bitstring(self) -> str:
        return format_bits(self.cbits)


def format_bits(bits) -> str:
    return "".join("x" if b is None else str(b) for b in bits)


@dataclass
class _Walker:
    state: np.ndarray  # shaped (2,)*n
    cbits: tuple[int | None, ...]
    weight: float  # probability for exact runs, shot count for sampling


def _initial(ir: CircuitIR) -> np.ndarray:
    if ir.num_qubits > MAX_QUBITS:
        raise TooManyQubits(f"{ir.num_qubits} qubits exceeds the limit of {MAX_QUBITS}")
    state = np.zeros((2,) * ir.num_qubits, dtype=complex)
    state[tuple(1 if q in ir.init_ones else 0 for q in range(ir.num_qubits))] = 1.0
    return state


def _outcome_probs(state: np.ndarray, qubit: int) -> tuple[float, float]:
    probs = np.abs(state) ** 2
    axes = tuple(i for i in range(state.ndim) if i != qubit)
    p = probs.sum(axis=axes)
    return float(p[0]), float(p[1])


def _project(state: np.ndarray, qubit: int, outcome: int, p: float) -> np.ndarray:
    out = np.zeros_like(state)
    index = [slice(None)] * state.ndim
    index[qubit] = outcome
    out[tuple(index)] = state[tuple(index)] / math.sqrt(p)
    return out


def _cond_holds(ins: Cond, cbits) -> bool:
    def lookup(i):
        value = cbits[i]
        if value is None:
            raise UnmeasuredCondBit(f"condition reads cbit {i} before it is measured")
        return value

    return eval_cond(ins.condition, lookup)


def _run(instrs: tuple[Instr, ...], walkers: list[_Walker], split) -> list[_Walker]:
    for ins in instrs:
        if isinstance(ins, Unitary):
            for w in walkers:
                w.state = apply_unitary(w.state, ins)
        elif isinstance(ins, SwapI):
            for w in walkers:
                w.state = apply_swap(w.state, ins.a, ins.b)
        elif isinstance(ins, MeasureI):
            children = []
            for w in walkers:
                probs = _outcome_probs(w.state, ins.qubit)
                total = probs[0] + probs[1]
                for outcome, weight in split(w.weight, (probs[0] / total, probs[1] / total)):
                    cbits = list(w.cbits)
                    cbits[ins.cbit] = outcome
                    state = _project(w.state, ins.qubit, outcome, probs[outcome])
                    children.append(_Walker(state, tuple(cbits), weight))
            walkers = children
        elif isinstance(ins, Cond):
            taken = [w for w in walkers if _cond_holds(ins, w.cbits)]
            other = [w for w in walkers if not _cond_holds(ins, w.cbits)]
            walkers = _run(ins.body, taken, split) + _run(ins.else_body, other, split)
        else:  # pragma: no cover - closed sum
            raise TypeError(f"unknown instruction {ins!r}")
    return walkers


def _exact_split(weight: float, probs):
    for outcome in (0, 1):
        p = weight * probs[outcome]
        if p > PRUNE_PROBABILITY:
            yield outcome, p


def run_exact(ir: CircuitIR) -> list[StateBranch]:
    """Enumerate every measurement outcome history of ``ir``.

    Branches come back sorted by cbit string.  Probabilities sum to one up
    to the mass of pruned branches (below ``PRUNE_PROBABILITY`` each).
    """
    start = _Walker(_initial(ir), (None,) * ir.num_cbits, 1.0)
    leaves = _run(ir.instructions, [start], _exact_split)
    branches = [StateBranch(w.weight, w.cbits, w.state.reshape(-1)) for w in leaves]
    branches.sort(key=lambda b: b.bitstring)
    return branches


def final_state(ir: CircuitIR) -> np.ndarray:
    """Statevector of a measurement-free circuit."""
    branches = run_exact(ir)
    if len(branches) != 1:
        raise SimulationError("circuit has more than one outcome branch")
    return branches[0].amplitudes


def distribution(branches: list[StateBranch]) -> dict[str, float]:
    """Probability of each cbit string, aggregated over branches."""
    out: dict[str, float] = {}
    for b in branches:
        out[b.bitstring] = out.get(b.bitstring, 0.0) + b.probability
    return dict(sorted(out.items()))


def marginal(branches: list[StateBranch], qubits: list[int]) -> dict[str, float]:
    """Computational-basis distribution of ``qubits``, aggregated over branches."""
    out: dict[str, float] = {}
    for b in branches:
        n = int(round(math.log2(b.amplitudes.size))) if b.amplitudes.size > 1 else 0
        probs = (np.abs(b.amplitudes) ** 2).reshape((2,) * n)
        rest = tuple(i for i in range(n) if i not in qubits)
        reduced = probs.sum(axis=rest) if rest else probs
        # summed axes leave the kept ones ascending; reorder to the caller's order
        kept = sorted(qubits)
        reduced = np.transpose(reduced, [kept.index(q) for q in qubits]) if qubits else reduced
        for idx in np.ndindex(*reduced.shape):
            p = float(reduced[idx]) * b.probability
            if p > 0:
                key = "".join(map(str, idx))
                out[key] = out.get(key, 0.0) + p
    return {k: v for k, v in sorted(out.items()) if v > PRUNE_PROBABILITY}


def sample(ir: CircuitIR, shots: int, seed: int) -> dict[str, int]:
    """Empirical cbit-string counts from ``shots`` seeded runs.

    All shots walk the measurement tree together: at each split the shots of
    a branch are divided binomially by the outcome probability.  The
    generator is created per call, so equal (ir, shots, seed) give equal
    counts.
    """
    if shots < 1:
        raise ValueError("shots must be at least 1")
    rng = np.random.default_rng(seed)

    def split(weight, probs):
        ones = int(rng.binomial(int(weight), min(max(probs[1], 0.0), 1.0)))
        for outcome, count in ((0, int(weight) - ones), (1, ones)):
            if count:
                yield outcome, count

    start = _Walker(_initial(ir), (None,) * ir.num_cbits, shots)
    counts: dict[str, int] = {}
    for w in _run(ir.instructions, [start], split):
        key = format_bits(w.cbits)
        counts[key] = counts.get(key, 0) + int(w.weight)
    return dict(sorted(counts.items()))


def format_distribution(dist: dict[str, float]) -> str:
    return "".join(f"{k} {v:.12f}\n" for k, v in sorted(dist.items()))


def format_counts(counts: dict[str, int]) -> str:
    return "".join(f"{k} {v}\n" for k, v in sorted(counts.items()))


def distribution_json(dist: dict) -> str:
    return json.dumps(dict(sorted(dist.items())), indent=2) + "\n"
