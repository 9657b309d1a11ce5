import random

import pytest

from pricekit import PriceSystem, build_profile, equal_split
from pricekit.axioms import (
    is_one_stable,
    is_residual_stable,
    is_stable,
    is_weakly_stable_bruteforce,
    weak_stability_exhaustive_oracle,
)
from pricekit.axioms.stability import one_stability_violation, pair_constraint_value
from pricekit.rational import rat
from conftest import (
    PROP_A3_COMMITTEE,
    ex_rs_price_system,
    ex_rs_profile,
)


def test_fig1b_residual_stable(fig1a, fig1b):
    assert is_residual_stable(fig1a, fig1b)


def test_zero_residuals_always_residual_stable(fig1a, fig1d):
    assert is_residual_stable(fig1a, fig1d)


def test_single_heavy_residual_not_residual_stable():
    profile = build_profile(2, [{0}, {0, 1}])
    ps = PriceSystem(
        committee=frozenset({0}), payments={(0, 0): rat(1)}, residuals=[rat(0), rat(2)]
    )
    assert not is_residual_stable(profile, ps)


@pytest.mark.parametrize("q", [2, 3, 5])
def test_ex_rs_violates_one_stability(q):
    profile = ex_rs_profile(q)
    ps = ex_rs_price_system(q)
    assert is_residual_stable(profile, ps)
    assert not is_one_stable(profile, ps)
    # the violating swap pools residuals of the non-supporters with voter 1's payment
    assert pair_constraint_value(profile, ps, 0, 1) == rat(2 * q - 1, q)


def test_ex_payment_misattribution_violates_one_stability(ex_payment_misattribution):
    profile, ps = ex_payment_misattribution
    assert is_residual_stable(profile, ps)
    assert one_stability_violation(profile, ps) == (0, 1)


def test_equal_cost_split_zero_residuals_is_one_stable(fig1a):
    ps = equal_split(fig1a, {0, 1, 2, 3})
    zeroed = PriceSystem(ps.committee, ps.payments, [rat(0)] * fig1a.n)
    assert is_one_stable(fig1a, zeroed)


def test_private_candidates_never_stable():
    # two voters with private selected candidates and a shared unselected one
    profile = build_profile(2, [{0, 1}, {0, 2}])
    ps = PriceSystem(
        committee=frozenset({1, 2}),
        payments={(0, 1): rat(1), (1, 2): rat(1)},
        residuals=[rat(0), rat(0)],
    )
    assert not is_stable(profile, ps)
    assert not is_weakly_stable_bruteforce(profile, ps)


def test_disjoint_support_stable():
    profile = build_profile(4, [{0}, {0}, {0}, {0, 1}])
    ps = PriceSystem(
        committee=frozenset({0}),
        payments={(i, 0): rat(1, 4) for i in range(4)},
        residuals=[rat(0)] * 4,
    )
    assert is_stable(profile, ps)


def test_prop_a3_equal_split_zero_residuals_not_weakly_stable(prop_a3):
    ps = equal_split(prop_a3, PROP_A3_COMMITTEE)
    zeroed = PriceSystem(ps.committee, ps.payments, [rat(0)] * prop_a3.n)
    assert not is_weakly_stable_bruteforce(prop_a3, zeroed)
    assert not weak_stability_exhaustive_oracle(prop_a3, zeroed)


def test_committee_covering_everything_weakly_stable():
    profile = build_profile(2, [{0}, {0, 1}])
    ps = PriceSystem(
        committee=frozenset({0, 1}),
        payments={(0, 0): rat(1, 2), (1, 0): rat(1, 2), (1, 1): rat(1)},
        residuals=[rat(0), rat(0)],
    )
    assert is_weakly_stable_bruteforce(profile, ps)


def _random_system(rng, profile, committee):
    payments = {}
    for c in sorted(committee):
        sup = sorted(profile.supporters(c))
        cuts = sorted(rng.randint(0, 12) for _ in range(len(sup) - 1))
        shares = []
        prev = 0
        for cut in cuts + [12]:
            shares.append(rat(cut - prev, 12))
            prev = cut
        for i, share in zip(sup, shares):
            if share:
                payments[(i, c)] = share
    residuals = [rat(rng.randint(0, 6), 12) for _ in range(profile.n)]
    return PriceSystem(frozenset(committee), payments, residuals)


def test_stability_implication_chain_on_random_instances():
    rng = random.Random(7)
    checked = 0
    for _ in range(60):
        n = rng.randint(2, 6)
        m = rng.randint(2, 6)
        approvals = []
        for _ in range(n):
            size = rng.randint(1, m)
            approvals.append(set(rng.sample(range(m), size)))
        for c in range(m):
            if not any(c in a for a in approvals):
                approvals[rng.randrange(n)].add(c)
        profile = build_profile(n, approvals)
        k = rng.randint(1, m)
        committee = frozenset(rng.sample(range(m), k))
        ps = _random_system(rng, profile, committee)
        stable = is_stable(profile, ps)
        weakly = weak_stability_exhaustive_oracle(profile, ps)
        assert weakly == is_weakly_stable_bruteforce(profile, ps)
        one = is_one_stable(profile, ps)
        residual = is_residual_stable(profile, ps)
        if stable:
            assert weakly
        if weakly:
            assert one
        if one:
            assert residual
        checked += 1
    assert checked == 60
