"""Convergence of the event-driven rule to the literal epsilon-step loop."""

import random

import pytest

from pricekit import build_profile, continuous_phragmen, micro_step_oracle
from pricekit.rational import rat
from pricekit.rules import StepBudgetExceeded
from conftest import BRICK_WALL_COMMITTEE
from test_rules import random_instance


def max_budget_deviation(profile, committee, epsilon):
    exact = continuous_phragmen(profile, committee).budgets()
    approx = micro_step_oracle(profile, committee, epsilon).budgets()
    return max(abs(a - b) for a, b in zip(exact, approx))


def test_oracle_matches_on_ex_rs(ex_rs_q2):
    ps = micro_step_oracle(ex_rs_q2, {1}, rat(1, 10000))
    budgets = ps.budgets()
    targets = [rat(2, 3), rat(2, 3), rat(1, 3), rat(1, 3)]
    assert all(abs(b - t) <= rat(1, 1000) for b, t in zip(budgets, targets))


def test_oracle_matches_on_brick_wall(brick_wall):
    dev = max_budget_deviation(brick_wall, BRICK_WALL_COMMITTEE, rat(1, 100))
    assert dev <= rat(10, 100)


def test_pure_accumulation_agrees_within_n_epsilon():
    # no blocking events ever: two disjoint pairs fund their own candidate
    profile = build_profile(4, [{0}, {0}, {1}, {1}])
    eps = rat(1, 100)
    dev = max_budget_deviation(profile, frozenset({0, 1}), eps)
    assert dev <= 4 * eps


@pytest.mark.parametrize("epsilon", [rat(1, 100), rat(1, 1000)])
def test_oracle_convergence_on_random_instances(epsilon):
    rng = random.Random(17)
    for _ in range(8):
        profile, committee = random_instance(rng, n_max=8, m_max=7)
        dev = max_budget_deviation(profile, committee, epsilon)
        assert dev <= 10 * epsilon, (profile.approvals, sorted(committee), dev)


def test_step_budget_guard(ex_rs_q2):
    with pytest.raises(StepBudgetExceeded):
        micro_step_oracle(ex_rs_q2, {1}, rat(1, 10000), max_steps=5)
