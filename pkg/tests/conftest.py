"""Shared fixtures: the worked instances used throughout the suite.

Candidate indices are zero-based, so the write-ups' c1, c2, ... become
0, 1, ... here.
"""

import pytest

from pricekit import PriceSystem, build_profile
from pricekit.rational import rat


@pytest.fixture
def fig1a():
    """Four voters; candidates 0,1 approved by all, 2,3,4 by voters {0,1},
    5,6,7 by voters {2,3}. The classic laminar ladder."""
    return build_profile(
        4,
        [
            {0, 1, 2, 3, 4},
            {0, 1, 2, 3, 4},
            {0, 1, 5, 6, 7},
            {0, 1, 5, 6, 7},
        ],
    )


@pytest.fixture
def fig1b(fig1a):
    """Budget-uniform residual-stable system on fig1a with W={0,1,2,3} that
    treats identical voters very differently (all budgets 5/4)."""
    return PriceSystem(
        committee=frozenset({0, 1, 2, 3}),
        payments={
            (0, 2): rat(7, 10),
            (0, 3): rat(1, 10),
            (1, 2): rat(3, 10),
            (1, 3): rat(9, 10),
            (1, 0): rat(1, 20),
            (2, 0): rat(19, 20),
            (3, 1): rat(1),
        },
        residuals=[rat(9, 20), rat(0), rat(3, 10), rat(1, 4)],
    )


@pytest.fixture
def fig1d(fig1a):
    """Symmetric budget-uniform system on fig1a with W={0,1,2,3}: voters 0,1
    pay 1/2 to each of 2,3; voters 2,3 pay 1/2 to each of 0,1."""
    return PriceSystem(
        committee=frozenset({0, 1, 2, 3}),
        payments={
            (0, 2): rat(1, 2),
            (0, 3): rat(1, 2),
            (1, 2): rat(1, 2),
            (1, 3): rat(1, 2),
            (2, 0): rat(1, 2),
            (2, 1): rat(1, 2),
            (3, 0): rat(1, 2),
            (3, 1): rat(1, 2),
        },
        residuals=[rat(0)] * 4,
    )


def brick_wall_profile():
    """x-voters 0,1 approve {1,3,5}; y-voters 2,3 approve {0,2,4}; voter 4
    approves everything. Committee {0,1,2,3}."""
    return build_profile(
        5,
        [
            {1, 3, 5},
            {1, 3, 5},
            {0, 2, 4},
            {0, 2, 4},
            {0, 1, 2, 3, 4, 5},
        ],
    )


@pytest.fixture
def brick_wall():
    return brick_wall_profile()


BRICK_WALL_COMMITTEE = frozenset({0, 1, 2, 3})


def ex_rs_profile(q: int):
    """Candidate 0 approved by everyone but voter 0; candidate 1 approved by
    the first q of the 2q voters. Committee {1}."""
    approvals = []
    for i in range(2 * q):
        s = set()
        if i != 0:
            s.add(0)
        if i < q:
            s.add(1)
        approvals.append(s)
    return build_profile(2 * q, approvals)


def ex_rs_price_system(q: int) -> PriceSystem:
    """The residual-stable but not 1-stable system: supporters split candidate
    1 equally, the other q voters hold residual 1/q."""
    payments = {(i, 1): rat(1, q) for i in range(q)}
    residuals = [rat(0)] * q + [rat(1, q)] * q
    return PriceSystem(committee=frozenset({1}), payments=payments, residuals=residuals)


@pytest.fixture
def ex_rs_q2():
    return ex_rs_profile(2)


@pytest.fixture
def ex_payment_misattribution():
    """Three voters; candidate 0 approved by {0,1}, candidate 1 by {1,2};
    committee {1}. The budget-uniform system paying p(1,c)=2/3 violates
    1-stability."""
    profile = build_profile(3, [{0}, {0, 1}, {1, 2}])
    ps = PriceSystem(
        committee=frozenset({1}),
        payments={(1, 1): rat(2, 3), (2, 1): rat(1, 3)},
        residuals=[rat(2, 3), rat(0), rat(1, 3)],
    )
    return profile, ps


def prop_b2_profile():
    """Perfect-coverage instance from the monotonicity impossibility proof.

    Candidates: 0 approved by {0,1,2}; 1 by {3,4}; 2,3,4 are the pair
    candidates {0,4},{1,4},{2,4}; 5..9 private singletons of voters 0..4.
    Committee {0,1}.
    """
    approvals = [
        {0, 2, 5},
        {0, 3, 6},
        {0, 4, 7},
        {1, 8},
        {1, 2, 3, 4, 9},
    ]
    return build_profile(5, approvals)


PROP_B2_COMMITTEE = frozenset({0, 1})


@pytest.fixture
def prop_b2():
    return prop_b2_profile()


def prop_a3_profile():
    """Eight voters, nine candidates; committee {1, 4, 7} is Pareto optimal
    but admits no weakly stable price system."""
    supporters = [
        {1, 3, 4, 6, 7},
        {0, 1, 4, 5},
        {0, 2, 4, 6},
        {1, 5, 6, 7},
        {0, 2, 3, 4, 5, 6},
        {0, 4, 7},
        {0, 1, 2, 3, 6},
        {2, 3, 6, 7},
        {2, 3, 5, 7},
    ]
    approvals = [set() for _ in range(8)]
    for c, sup in enumerate(supporters):
        for i in sup:
            approvals[i].add(c)
    return build_profile(8, approvals)


PROP_A3_COMMITTEE = frozenset({1, 4, 7})


@pytest.fixture
def prop_a3():
    return prop_a3_profile()


@pytest.fixture
def example_c1():
    """Eleven voters; candidate 0 approved by all, 1 and 2 only by voter 0,
    candidates 3..13 by voters 1..10. Committee {0, 1} plus candidates 3..12
    is laminar proportional; naive spending sets break its budget uniformity.
    """
    approvals = [{0, 1, 2}]
    for _ in range(10):
        approvals.append({0} | set(range(3, 14)))
    profile = build_profile(11, approvals)
    committee = frozenset({0, 1} | set(range(3, 13)))
    return profile, committee
