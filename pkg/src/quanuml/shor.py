"""Classical driver of Shor's factoring algorithm around simulated order finding.

Two order-finding backends share one interface: :class:`SimulatedCircuit`
lowers and exactly simulates the bundled N = 15 period-finding models, and
:class:`ClassicalOracle` derives the ideal counting-register distribution
from the order found by a direct power loop.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .library import load_example
from .lowering import lower
from .simulator import run_exact

MAX_MULTIPLE = 4
DEFAULT_ATTEMPTS = 16


class UnsupportedModulus(ValueError):
    pass


# --- number theory ----------------------------------------------------------


def integer_root(n: int, k: int) -> int:
    """Largest ``r`` with ``r**k <= n``."""
    if n < 2:
        return n
    r = int(round(n ** (1.0 / k)))
    while r ** k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


def perfect_power(n: int) -> tuple[int, int] | None:
    """``(a, b)`` with ``a**b == n`` and the smallest ``b >= 2``, if any."""
    for b in range(2, n.bit_length() + 1):
        a = integer_root(n, b)
        if a > 1 and a ** b == n:
            return a, b
    return None


def classical_order(x: int, n: int) -> int:
    """Multiplicative order of ``x`` modulo ``n`` by repeated multiplication."""
    if math.gcd(x, n) != 1:
        raise ValueError(f"{x} is not coprime to {n}")
    r, value = 1, x % n
    while value != 1:
        value = value * x % n
        r += 1
    return r


def continued_fraction_order(numerator: int, denominator: int, n: int) -> int:
    """Denominator of the last convergent of ``numerator/denominator`` below ``n``."""
    if not 0 <= numerator < denominator:
        raise ValueError("need 0 <= numerator < denominator")
    if numerator == 0:
        return 1
    return Fraction(numerator, denominator).limit_denominator(n - 1).denominator


def recover_order(x: int, n: int, numerator: int, denominator: int, multiples: bool = True) -> int | None:
    """Order candidate from one phase measurement, verified by ``x**r = 1 (mod n)``.

    A zero phase carries no information; its candidate 1 is only accepted
    when it is genuinely the order.
    """
    r = continued_fraction_order(numerator, denominator, n)
    tries = [r] if numerator == 0 or not multiples else [r * k for k in range(1, MAX_MULTIPLE + 1)]
    for cand in tries:
        if pow(x, cand, n) == 1:
            return cand
    return None


# --- backends ---------------------------------------------------------------


@dataclass(frozen=True)
class PhaseDistribution:
    """Distribution of the counting-register integer ``y`` over ``2**width``."""

    width: int
    probabilities: dict[int, float]

    @property
    def denominator(self) -> int:
        return 1 << self.width


class SimulatedCircuit:
    """Exact simulation of the bundled ``Shor<a>`` diagrams (N = 15 only)."""

    name = "sim"
    modulus = 15
    width = 3

    def supports(self, n: int) -> bool:
        return n == self.modulus

    def distribution(self, x: int, n: int) -> PhaseDistribution:
        if n != self.modulus:
            raise UnsupportedModulus(f"no bundled period-finding circuit for N = {n}")
        return _simulated_phases(x % n)


@lru_cache(maxsize=None)
def _simulated_phases(x: int) -> PhaseDistribution:
    model = load_example("shor15")
    name = f"Shor{x}"
    if name not in {s.name for s in model.sequences}:
        raise UnsupportedModulus(f"no bundled period-finding circuit for base {x} mod 15")
    ir = lower(model, name)
    counting = [ir.cbit_names.index(f"m{k}") for k in range(SimulatedCircuit.width)]
    probs: dict[int, float] = {}
    for branch in run_exact(ir):
        y = sum(branch.cbits[c] << k for k, c in enumerate(counting))
        probs[y] = probs.get(y, 0.0) + branch.probability
    return PhaseDistribution(SimulatedCircuit.width, dict(sorted(probs.items())))


class ClassicalOracle:
    """Ideal phase statistics for the order found by a direct power loop."""

    name = "oracle"
    max_width = 22

    def supports(self, n: int) -> bool:
        return self.width_for(n) <= self.max_width

    def width_for(self, n: int) -> int:
        return 2 * max(1, (n - 1).bit_length())

    def distribution(self, x: int, n: int) -> PhaseDistribution:
        if not self.supports(n):
            raise UnsupportedModulus(f"N = {n} needs more than {self.max_width} counting bits")
        r = classical_order(x, n)
        width = self.width_for(n)
        q = 1 << width
        # residue class s holds m_s = ceil((q - s) / r) counting values; its
        # amplitude at y is a geometric sum with ratio exp(-2 pi i y r / q)
        y = np.arange(q)
        theta = np.pi * ((y * r) % q) / q
        aligned = np.isclose(np.sin(theta), 0.0, atol=1e-15)
        total = np.zeros(q)
        lengths = [(q - s + r - 1) // r for s in range(r)]
        for m in set(lengths):
            with np.errstate(divide="ignore", invalid="ignore"):
                mag = np.where(aligned, float(m * m), np.sin(m * theta) ** 2 / np.sin(theta) ** 2)
            total += lengths.count(m) * mag / (q * q)
        probs = {int(yi): float(total[yi]) for yi in np.nonzero(total > 1e-14)[0]}
        return PhaseDistribution(width, probs)

    def order(self, x: int, n: int) -> int:
        return classical_order(x, n)


Backend = SimulatedCircuit | ClassicalOracle


def make_backend(name: str) -> Backend:
    if name in ("sim", "simulated"):
        return SimulatedCircuit()
    if name in ("oracle", "classical"):
        return ClassicalOracle()
    raise ValueError(f"unknown backend {name!r}")


# --- driver -----------------------------------------------------------------


@dataclass(frozen=True)
class Attempt:
    x: int
    phase_numerator: int | None
    candidate: int | None
    accepted: bool


@dataclass
class FactorResult:
    n: int
    status: str  # factored | trivial-even | perfect-power | gcd-shortcut | failed
    factors: tuple[int, ...] = ()
    order: int | None = None
    x: int | None = None
    attempts: int = 0
    transcript: list[Attempt] = field(default_factory=list)
    phase_denominator: int | None = None

    def __post_init__(self):
        if self.status == "factored":
            p, q = self.factors
            assert p * q == self.n and 1 < p <= q < self.n, self


def find_order(x: int, n: int, backend: Backend, multiples: bool = True) -> tuple[int, list[Attempt]]:
    """Smallest verified order candidate over every outcome the backend can produce."""
    if math.gcd(x, n) != 1:
        raise ValueError(f"{x} is not coprime to {n}")
    if isinstance(backend, ClassicalOracle):
        r = backend.order(x, n)
        return r, [Attempt(x, None, r, True)]
    dist = backend.distribution(x, n)
    transcript = []
    best = None
    for y in dist.probabilities:
        cand = continued_fraction_order(y, dist.denominator, n)
        r = recover_order(x, n, y, dist.denominator, multiples)
        transcript.append(Attempt(x, y, r if r is not None else cand, r is not None))
        if r is not None and (best is None or r < best):
            best = r
    if best is None:
        raise RuntimeError(f"no outcome recovered the order of {x} mod {n}")
    return best, transcript


def success_probability(x: int, n: int, backend: Backend, multiples: bool = True) -> float:
    """Exact probability that one order-finding run yields the true order."""
    true_r = classical_order(x, n)
    dist = backend.distribution(x, n)
    return sum(
        p for y, p in dist.probabilities.items()
        if recover_order(x, n, y, dist.denominator, multiples) == true_r
    )


def _split(x: int, r: int, n: int) -> tuple[int, int] | None:
    if r % 2:
        return None
    half = pow(x, r // 2, n)
    if half == n - 1:
        return None
    for g in (math.gcd(half - 1, n), math.gcd(half + 1, n)):
        if 1 < g < n:
            return tuple(sorted((g, n // g)))
    return None


def factor(
    n: int,
    x: int | None = None,
    seed: int = 0,
    backend: Backend | None = None,
    max_attempts: int = DEFAULT_ATTEMPTS,
    multiples: bool = True,
) -> FactorResult:
    """Factor ``n`` following the five classical steps of Shor's algorithm.

    Each attempt draws one counting-register outcome from the backend's
    distribution with a generator seeded by ``seed``.  A forced base ``x`` is
    reused on every attempt; otherwise a fresh base is drawn each time.
    """
    if n < 2:
        raise ValueError("N must be at least 2")
    backend = backend or SimulatedCircuit()
    if n == 2:
        return FactorResult(n, "failed")
    if n % 2 == 0:
        return FactorResult(n, "trivial-even", (2, n // 2))
    pp = perfect_power(n)
    if pp is not None:
        return FactorResult(n, "perfect-power", pp)
    if not backend.supports(n):
        raise UnsupportedModulus(f"no bundled period-finding circuit for N = {n}")

    rng = np.random.default_rng(seed)
    result = FactorResult(n, "failed")
    for attempt in range(1, max_attempts + 1):
        base = x if x is not None else int(rng.integers(1, n))
        result.attempts = attempt
        g = math.gcd(base, n)
        if g > 1:
            return FactorResult(n, "gcd-shortcut", (g,), x=base, attempts=attempt, transcript=result.transcript)
        dist = backend.distribution(base, n)
        outcomes = list(dist.probabilities)
        weights = np.array([dist.probabilities[y] for y in outcomes])
        y = outcomes[int(rng.choice(len(outcomes), p=weights / weights.sum()))]
        r = recover_order(base, n, y, dist.denominator, multiples)
        cand = r if r is not None else continued_fraction_order(y, dist.denominator, n)
        result.phase_denominator = dist.denominator
        result.transcript.append(Attempt(base, y, cand, r is not None))
        if r is None:
            continue
        split = _split(base, r, n)
        if split is not None:
            return FactorResult(
                n, "factored", split, order=r, x=base, attempts=attempt,
                transcript=result.transcript, phase_denominator=dist.denominator,
            )
    return result


def format_result(result: FactorResult) -> str:
    lines = []
    if result.transcript:
        den = result.phase_denominator
        phases = ["-" if a.phase_numerator is None else f"{a.phase_numerator}/{den}" for a in result.transcript]
        w = max(9, *(len(p) for p in phases))
        lines.append(f"{'x':>4}  {'phase':>{w}}  {'r':>4}  accepted")
        for a, phase in zip(result.transcript, phases):
            cand = "-" if a.candidate is None else str(a.candidate)
            lines.append(f"{a.x:>4}  {phase:>{w}}  {cand:>4}  {'yes' if a.accepted else 'no'}")
    n = result.n
    if result.status == "factored":
        p, q = result.factors
        lines.append(f"order: x={result.x}, r={result.order}")
        lines.append(f"factors: {n} = {p} x {q} (attempts={result.attempts})")
    elif result.status == "trivial-even":
        lines.append(f"factors: {n} is even, factor 2")
    elif result.status == "perfect-power":
        a, b = result.factors
        lines.append(f"factors: {n} = {a}^{b}")
    elif result.status == "gcd-shortcut":
        lines.append(f"factors: gcd({result.x}, {n}) = {result.factors[0]}")
    else:
        lines.append(f"failed: no nontrivial factor of {n} after {result.attempts} attempts")
    return "\n".join(lines) + "\n"
