import math

import pytest

from quanuml.shor import (
    ClassicalOracle,
    SimulatedCircuit,
    UnsupportedModulus,
    classical_order,
    continued_fraction_order,
    factor,
    find_order,
    format_result,
    integer_root,
    perfect_power,
    recover_order,
    success_probability,
)

COPRIME_15 = [x for x in range(1, 15) if math.gcd(x, 15) == 1]
# 7^k mod 15 = 7, 4, 13, 1 and similar power loops worked by hand
ORDERS_15 = {1: 1, 2: 4, 4: 2, 7: 4, 8: 4, 11: 2, 13: 4, 14: 2}


def test_coprime_bases():
    assert COPRIME_15 == sorted(ORDERS_15)


@pytest.mark.parametrize("x", COPRIME_15)
def test_classical_order(x):
    assert classical_order(x, 15) == ORDERS_15[x]


def test_classical_order_rejects_shared_factor():
    with pytest.raises(ValueError):
        classical_order(5, 15)


@pytest.mark.parametrize("n, expected", [(16, (4, 2)), (27, (3, 3)), (243, (3, 5)), (15, None), (2**40, (2**20, 2)), (7**9, (7**3, 3))])
def test_perfect_power(n, expected):
    assert perfect_power(n) == expected


def test_integer_root_is_exact_for_large_values():
    big = (10**20 + 7) ** 3
    assert integer_root(big, 3) == 10**20 + 7
    assert integer_root(big - 1, 3) == 10**20 + 6


@pytest.mark.parametrize(
    "num, den, n, r",
    [(0, 8, 15, 1), (2, 8, 15, 4), (4, 8, 15, 2), (6, 8, 15, 4), (3, 8, 15, 8), (85, 256, 21, 3), (171, 1024, 21, 6)],
)
def test_continued_fraction_order(num, den, n, r):
    assert continued_fraction_order(num, den, n) == r


def test_multiple_testing_recovers_order_from_half_phase():
    assert recover_order(7, 15, 4, 8, multiples=True) == 4
    assert recover_order(7, 15, 4, 8, multiples=False) is None
    assert recover_order(7, 15, 0, 8) is None
    assert recover_order(1, 15, 0, 8) == 1


@pytest.mark.parametrize("x", [2, 7, 8, 13])
def test_simulated_phase_distribution_order_four(x):
    dist = SimulatedCircuit().distribution(x, 15)
    assert dist.denominator == 8
    assert dist.probabilities.keys() == {0, 2, 4, 6}
    assert all(abs(p - 0.25) < 1e-10 for p in dist.probabilities.values())


@pytest.mark.parametrize("x", [4, 11, 14])
def test_simulated_phase_distribution_order_two(x):
    dist = SimulatedCircuit().distribution(x, 15)
    assert dist.probabilities == pytest.approx({0: 0.5, 4: 0.5}, abs=1e-10)


@pytest.mark.parametrize("x", COPRIME_15)
def test_backends_agree(x):
    r_sim, transcript = find_order(x, 15, SimulatedCircuit())
    r_oracle, _ = find_order(x, 15, ClassicalOracle())
    assert r_sim == r_oracle == ORDERS_15[x]
    assert any(a.accepted for a in transcript)


def test_oracle_distribution_for_15_is_four_sharp_peaks():
    dist = ClassicalOracle().distribution(7, 15)
    assert dist.width == 8
    assert dist.probabilities == pytest.approx({0: 0.25, 64: 0.25, 128: 0.25, 192: 0.25}, abs=1e-12)


@pytest.mark.parametrize("n, x", [(21, 2), (35, 3), (33, 5)])
def test_oracle_distribution_is_normalized(n, x):
    dist = ClassicalOracle().distribution(x, n)
    assert abs(sum(dist.probabilities.values()) - 1) < 1e-9


def test_success_probability_with_and_without_multiples():
    sim = SimulatedCircuit()
    assert abs(success_probability(7, 15, sim, multiples=True) - 0.75) < 1e-10
    assert abs(success_probability(7, 15, sim, multiples=False) - 0.5) < 1e-10


def test_factor_15_with_base_7():
    result = factor(15, x=7, seed=1, backend=SimulatedCircuit())
    assert result.status == "factored"
    assert result.factors == (3, 5)
    assert result.order == 4


def test_classical_steps():
    assert factor(14).status == "trivial-even" and factor(14).factors == (2, 7)
    assert factor(27).status == "perfect-power" and factor(27).factors == (3, 3)
    shortcut = factor(15, x=5)
    assert shortcut.status == "gcd-shortcut" and shortcut.factors == (5,)


def test_prime_input_fails():
    assert factor(2).status == "failed"
    assert factor(13, backend=ClassicalOracle()).status == "failed"


@pytest.mark.parametrize("seed", range(20))
def test_random_base_always_finishes_for_15(seed):
    result = factor(15, seed=seed)
    assert result.status in {"factored", "gcd-shortcut"}
    if result.status == "factored":
        assert sorted(result.factors) == [3, 5]
    else:
        assert result.factors[0] in (3, 5)


@pytest.mark.parametrize("n", [21, 33, 35, 39, 55])
def test_oracle_backend_factors_small_semiprimes(n):
    result = factor(n, seed=3, backend=ClassicalOracle())
    assert result.status in {"factored", "gcd-shortcut"}
    if result.status == "factored":
        p, q = result.factors
        assert p * q == n


def test_factor_is_seed_deterministic():
    a = factor(15, seed=42)
    b = factor(15, seed=42)
    assert a == b


def test_simulated_backend_rejects_other_moduli():
    with pytest.raises(UnsupportedModulus):
        factor(21, backend=SimulatedCircuit())


def test_format_result():
    text = format_result(factor(15, x=7, seed=1))
    assert "order: x=7, r=4" in text
    assert text.endswith("factors: 15 = 3 x 5 (attempts=1)\n")
