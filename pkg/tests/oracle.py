"""Dense-matrix reference simulator: every instruction becomes a full 2^n x 2^n
matrix built from Kronecker products.  Slow and obviously correct."""

from __future__ import annotations

import cmath
import math
from functools import reduce

import numpy as np

from quanuml.lowering import CircuitIR, SwapI, Unitary

I2 = np.eye(2)
P0 = np.diag([1.0, 0.0])
P1 = np.diag([0.0, 1.0])


def textbook(gate: str, theta: float | None = None) -> np.ndarray:
    r = 1 / math.sqrt(2)
    fixed = {
        "H": [[r, r], [r, -r]],
        "X": [[0, 1], [1, 0]],
        "Y": [[0, -1j], [1j, 0]],
        "Z": [[1, 0], [0, -1]],
        "S": [[1, 0], [0, 1j]],
        "Sdg": [[1, 0], [0, -1j]],
        "T": [[1, 0], [0, cmath.exp(1j * math.pi / 4)]],
        "Tdg": [[1, 0], [0, cmath.exp(-1j * math.pi / 4)]],
    }
    if gate in fixed:
        return np.array(fixed[gate], dtype=complex)
    if gate == "P":
        return np.array([[1, 0], [0, cmath.exp(1j * theta)]])
    if gate == "RZ":
        return np.array([[cmath.exp(-0.5j * theta), 0], [0, cmath.exp(0.5j * theta)]])
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    if gate == "RX":
        return np.array([[c, -1j * s], [-1j * s, c]])
    return np.array([[c, -s], [s, c]], dtype=complex)  # RY


def _kron(ops):
    return reduce(np.kron, ops, np.eye(1))


def full_matrix(ins, n: int) -> np.ndarray:
    dim = 2 ** n
    if isinstance(ins, SwapI):
        m = np.zeros((dim, dim))
        for i in range(dim):
            bits = [(i >> (n - 1 - k)) & 1 for k in range(n)]
            bits[ins.a], bits[ins.b] = bits[ins.b], bits[ins.a]
            j = sum(b << (n - 1 - k) for k, b in enumerate(bits))
            m[j, i] = 1
        return m
    g = textbook(ins.gate, ins.angle.value if ins.angle is not None else None)
    gate_ops = [g if k in ins.targets else I2 for k in range(n)]
    if not ins.controls:
        return _kron(gate_ops)
    proj = _kron([P1 if k in ins.controls else I2 for k in range(n)])
    return np.eye(dim) - proj + proj @ _kron(gate_ops)


def initial_vector(ir: CircuitIR) -> np.ndarray:
    n = ir.num_qubits
    index = sum(1 << (n - 1 - q) for q in ir.init_ones)
    v = np.zeros(2 ** n, dtype=complex)
    v[index] = 1
    return v


def reference_state(ir: CircuitIR) -> np.ndarray:
    v = initial_vector(ir)
    for ins in ir.instructions:
        assert isinstance(ins, (Unitary, SwapI))
        v = full_matrix(ins, ir.num_qubits) @ v
    return v
