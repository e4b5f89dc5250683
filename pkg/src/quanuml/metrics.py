"""Diagram element counts for QuanUML and a UML-profile baseline.

QuanUML rules: one element per lifeline and per lifeline stereotype label;
one self-message per single-qubit gate; one ``<<control>>`` arrow per
(control, target) pair of a controlled gate plus one ``<<controlled>>`` reply
when kickback is drawn; one message per swap, measurement and ``use``; one
fragment per Alt plus one per else branch.

Baseline rules: one lane per qubit; a gate acting on ``k`` qubits costs one
node and ``k`` edges; a measurement costs one node and two edges; qubit lanes
and gate nodes each carry one stereotype label.  Alt fragments cost one
decision node plus one per else branch, and a ``use`` costs one call node,
one edge per actual, and a label.

Formal qubits of a sub-diagram are unlabeled lifelines in both notations.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

from .model import Alt, Measure, Model, MultiGate, SingleGate, Swap, Use


@dataclass(frozen=True)
class ElementCount:
    lifelines: int = 0
    messages: int = 0
    fragments: int = 0
    stereotype_labels: int = 0

    @property
    def total(self) -> int:
        return self.lifelines + self.messages + self.fragments + self.stereotype_labels

    def __add__(self, other: ElementCount) -> ElementCount:
        return ElementCount(
            self.lifelines + other.lifelines,
            self.messages + other.messages,
            self.fragments + other.fragments,
            self.stereotype_labels + other.stereotype_labels,
        )

    def to_dict(self) -> dict:
        return asdict(self) | {"total": self.total}


def _quanuml_events(events) -> ElementCount:
    n = ElementCount()
    for ev in events:
        if isinstance(ev, MultiGate):
            arrows = len(ev.controls) * len(ev.targets) + (1 if ev.kickback else 0)
            n += ElementCount(messages=arrows)
        elif isinstance(ev, (SingleGate, Swap, Measure, Use)):
            n += ElementCount(messages=1)
        elif isinstance(ev, Alt):
            n += ElementCount(fragments=1 + (1 if ev.else_events else 0))
            n += _quanuml_events(ev.then_events) + _quanuml_events(ev.else_events)
    return n


def _baseline_events(events) -> ElementCount:
    n = ElementCount()
    for ev in events:
        if isinstance(ev, SingleGate):
            n += ElementCount(messages=2, stereotype_labels=1)
        elif isinstance(ev, MultiGate):
            arity = len(ev.controls) + len(ev.targets)
            n += ElementCount(messages=1 + arity, stereotype_labels=1)
        elif isinstance(ev, Swap):
            n += ElementCount(messages=3, stereotype_labels=1)
        elif isinstance(ev, Measure):
            n += ElementCount(messages=3)
        elif isinstance(ev, Use):
            n += ElementCount(messages=1 + len(ev.actuals), stereotype_labels=1)
        elif isinstance(ev, Alt):
            n += ElementCount(fragments=1 + (1 if ev.else_events else 0))
            n += _baseline_events(ev.then_events) + _baseline_events(ev.else_events)
    return n


def count_quanuml(model: Model, diagram_name: str) -> ElementCount:
    seq = model.diagram(diagram_name)
    labeled = len(seq.qubits) + len(seq.cbits)
    heads = ElementCount(lifelines=labeled + len(seq.formals), stereotype_labels=labeled)
    return heads + _quanuml_events(seq.events)


def count_baseline(model: Model, diagram_name: str) -> ElementCount:
    seq = model.diagram(diagram_name)
    heads = ElementCount(
        lifelines=len(seq.qubits) + len(seq.formals), stereotype_labels=len(seq.qubits)
    )
    return heads + _baseline_events(seq.events)


@dataclass(frozen=True)
class Comparison:
    quanuml: ElementCount
    baseline: ElementCount

    @property
    def ratio(self) -> float:
        return self.quanuml.total / self.baseline.total if self.baseline.total else float("nan")


def compare(model: Model, diagram_name: str) -> Comparison:
    return Comparison(count_quanuml(model, diagram_name), count_baseline(model, diagram_name))


def format_comparison(cmp: Comparison) -> str:
    rows = [("element", "quanuml", "baseline")]
    for f in ("lifelines", "messages", "fragments", "stereotype_labels", "total"):
        rows.append((f, str(getattr(cmp.quanuml, f)), str(getattr(cmp.baseline, f))))
    width = max(len(r[0]) for r in rows)
    lines = [f"{a:<{width}}  {b:>8}  {c:>8}" for a, b, c in rows]
    lines.append(f"{'ratio':<{width}}  {cmp.ratio:>8.4f}")
    return "\n".join(lines) + "\n"


def comparison_json(cmp: Comparison) -> str:
    doc = {"quanuml": cmp.quanuml.to_dict(), "baseline": cmp.baseline.to_dict(), "ratio": cmp.ratio}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
