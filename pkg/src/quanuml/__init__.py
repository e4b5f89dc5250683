"""QuanUML: textual quantum UML models compiled to OpenQASM 3 and simulated exactly."""

from .emitters import emit_diagram_text, emit_ir_json, emit_qasm3, load_ir_json
from .library import example_names, load_example
from .lowering import CircuitIR, entangling_depth, ir_stats, lower
from .metrics import compare, count_baseline, count_quanuml
from .model import Model, canonicalize, resolve
from .parser import ParseError, parse, pretty_print
from .shor import ClassicalOracle, SimulatedCircuit, factor, find_order
from .simulator import distribution, marginal, run_exact, sample
from .validator import Diagnostic, validate

__version__ = "0.1.0"

__all__ = [
    "CircuitIR", "ClassicalOracle", "Diagnostic", "Model", "ParseError", "SimulatedCircuit",
    "canonicalize", "compare", "count_baseline", "count_quanuml", "distribution",
    "emit_diagram_text", "emit_ir_json", "emit_qasm3", "entangling_depth", "example_names",
    "factor", "find_order", "ir_stats", "load_example", "load_ir_json", "lower", "marginal",
    "parse", "pretty_print", "resolve", "run_exact", "sample", "validate",
]
