import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from typed_contracts.generators import theorem32_family
from typed_contracts.instance import (
    Instance,
    InstanceError,
    check_valid,
    cost_gap_statistic,
    expected_rewards,
    make_instance,
    normalize,
    perturb_costs,
    sort_instance,
    validate,
)

from helpers import random_instance

F = Fraction


def test_degenerate_instance_is_valid():
    inst = make_instance(rewards=[0], forecasts=[[[1]]], costs=[0])
    assert validate(inst) == []
    assert inst.shape == (1, 1, 1)
    assert inst.weights == (F(1),)


def test_row_sum_violation_message():
    inst = make_instance(rewards=[0, 1], forecasts=[[["0.5", "0.4"]]], costs=[0])
    problems = validate(inst)
    assert len(problems) == 1
    assert str(problems[0]).startswith("row sum ≠ 1 at (t=0,i=0)")
    assert problems[0].where == (0, 0)
    with pytest.raises(InstanceError):
        check_valid(inst)


def test_theorem32_output_is_valid():
    inst = theorem32_family(3, 2, 10**6)
    assert validate(inst, require_sorted=True) == []


def test_other_violations_are_reported():
    inst = make_instance(
        rewards=[1, "-1/2"],
        forecasts=[[["3/2", "-1/2"]], [["1", "0"]]],
        costs=["-1"],
        weights=["1/2", "1/4"],
    )
    kinds = {v.kind for v in validate(inst)}
    assert {"probability", "cost", "reward", "weight-sum"} <= kinds
    assert "zero-reward" in {v.kind for v in validate(inst, require_normalized=True)}
    assert "reward-order" in {v.kind for v in validate(inst, require_sorted=True)}


def test_ragged_input_rejected():
    with pytest.raises(InstanceError):
        make_instance(rewards=[0, 1], forecasts=[[[1, 0], [1]]], costs=[0, 1])
    with pytest.raises(InstanceError):
        make_instance(rewards=[0, 1], forecasts=[[[1, 0]]], costs=[0, 1])


def test_normalize_costs_and_rewards():
    inst = make_instance(rewards=[2, 7], forecasts=[[[1, 0], [0, 1], ["1/2", "1/2"]]], costs=[1, 3, 5])
    out = normalize(inst)
    assert out.costs[0] == (0, 2, 4)
    assert out.rewards == (0, 5)
    assert out.forecasts == inst.forecasts
    assert normalize(out) is out


def test_normalize_per_type():
    inst = make_instance(
        rewards=[0, 1],
        forecasts=[[[1, 0], [0, 1]], [[1, 0], [0, 1]]],
        costs_per_type=[[2, 3], [1, 5]],
    )
    out = normalize(inst)
    assert out.costs == ((0, 1), (0, 4))
    assert validate(out, require_normalized=True) == []


def test_expected_rewards_examples():
    inst = make_instance(rewards=[0, 1], forecasts=[[[1, 0], ["1/2", "1/2"]]], costs=[0, 0])
    R = expected_rewards(inst)
    assert R[0][0] == 0
    assert R[0][1] == F(1, 2)


def test_theorem32_expected_rewards():
    n, T = 3, 4
    inst = theorem32_family(n, T, 10**6)
    L = inst.metadata["provenance"]["derived"]["log_T"]
    R = expected_rewards(inst)
    for t in range(T):
        for i in range(n + 1):
            assert R[t][i] == inst.costs[t][i] + F(i) / ((t + 1) * n * L)


def test_cost_gap_examples():
    forecasts4 = [[[1]] * 3] * 4
    prof = cost_gap_statistic(make_instance(rewards=[0], forecasts=forecasts4, costs=[0, 1, 3]))
    assert prof.gaps == ((1, 4), (2, 4))
    assert prof.delta == pytest.approx(2 * math.log(4))

    prof = cost_gap_statistic(make_instance(rewards=[0], forecasts=[[[1], [1]]], costs=[0, 5]))
    assert prof.gaps == ((5, 1),) and prof.delta == 0

    prof = cost_gap_statistic(make_instance(rewards=[0], forecasts=[[[1]] * 4], costs=[0, 1, 2, 3]))
    assert prof.gaps == ((1, 3),)
    assert prof.delta == pytest.approx(math.log(3))


def test_cost_gap_needs_two_actions():
    with pytest.raises(ValueError):
        cost_gap_statistic(make_instance(rewards=[0], forecasts=[[[1]]], costs=[0]))


def test_perturb_examples():
    inst = make_instance(rewards=[0], forecasts=[[[1], [1]]], costs=[0, 1])
    assert perturb_costs(inst, 0, [1, -1]) == inst
    out = perturb_costs(inst, F(1, 4), [1, -1])
    assert out.costs[0] == (F(1, 4), F(3, 4))
    with pytest.raises(ValueError):
        perturb_costs(inst, F(1, 4), [-1, 1])
    with pytest.raises(ValueError):
        perturb_costs(inst, F(1, 4), [2, 0])


@pytest.mark.parametrize("seed", range(10))
def test_perturb_distance_bound(seed):
    rng = random.Random(seed)
    inst = random_instance(rng, cost_varying=True)
    inst = perturb_costs(inst, 1, [[1] * inst.num_actions] * inst.num_types)
    eps = F(rng.randint(1, 12), 12)
    table = [[F(rng.randint(-4, 4), 4) for _ in range(inst.num_actions)] for _ in range(inst.num_types)]
    out = perturb_costs(inst, eps, table)
    dist = max(abs(a - b) for r, s in zip(out.costs, inst.costs) for a, b in zip(r, s))
    assert dist <= eps


def test_sort_records_permutation():
    inst = make_instance(
        rewards=[1, 0],
        forecasts=[[[1, 0], [0, 1]]],
        costs=[1, 0],
    )
    out, orders, outcome_order = sort_instance(inst)
    assert out.costs[0] == (0, 1) and out.rewards == (0, 1)
    assert orders == ((1, 0),) and outcome_order == (1, 0)
    assert out.forecasts[0][0] == (1, 0)  # old action 1 puts mass on old outcome 1
    assert "sort_permutation" in out.metadata
    assert validate(out, require_sorted=True) == []


def test_float_round_trip():
    inst = make_instance(rewards=[0, 1], forecasts=[[["1/3", "2/3"]]], costs=[0])
    flt = inst.to_float()
    assert not flt.is_exact and flt.tolerance == 1e-9
    assert validate(flt) == []
    assert inst.to_exact() is inst


def test_instances_are_hashable_values():
    a = make_instance(rewards=[0], forecasts=[[[1]]], costs=[0], metadata={"x": 1})
    b = make_instance(rewards=[0], forecasts=[[[1]]], costs=[0])
    assert a == b and hash(a) == hash(b)
    assert isinstance(a, Instance)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_normalize_properties(seed):
    rng = random.Random(seed)
    inst = random_instance(rng, cost_varying=rng.random() < 0.5)
    shift = F(rng.randint(0, 5), 3)
    shifted = perturb_costs(inst, shift, [[1] * inst.num_actions] * inst.num_types)
    out = normalize(shifted)
    assert out.shape == inst.shape
    assert out.weights == inst.weights and out.forecasts == inst.forecasts
    assert normalize(out) == out
    kinds = {v.kind for v in validate(out, require_normalized=True)}
    assert not kinds & {"zero-cost", "zero-reward"}


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_expected_rewards_linear_in_rewards(seed):
    rng = random.Random(seed)
    inst = random_instance(rng)
    doubled = make_instance(
        rewards=[2 * r for r in inst.rewards],
        forecasts=inst.forecasts,
        costs_per_type=inst.costs,
        weights=inst.weights,
    )
    for a, b in zip(expected_rewards(inst), expected_rewards(doubled)):
        assert [2 * v for v in a] == list(b)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_shared_cost_multiplicities_divisible_by_T(seed):
    rng = random.Random(seed)
    inst = random_instance(rng, n=rng.randint(2, 4))
    assert all(k % inst.num_types == 0 for k in cost_gap_statistic(inst).multiplicities)
