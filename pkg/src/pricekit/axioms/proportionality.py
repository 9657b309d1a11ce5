"""Proportionality notions: perfect coverage, EJR+/PJR+ levels, MMS bound, Pareto."""

from __future__ import annotations

from itertools import combinations
from typing import Optional

from ..core import ApprovalProfile, Committee, InstanceTooLarge, PriceSystem
from ..rational import ExactRational, ZERO, rat


def provides_perfect_coverage(profile: ApprovalProfile, committee: Committee) -> bool:
    """Exact cover (each voter approves exactly one member) and no unselected
    candidate strictly out-scores a selected one."""
    for a in profile.approvals:
        if len(a & committee) != 1:
            return False
    scores = profile.approval_scores()
    min_selected = min(scores[c] for c in committee)
    return all(scores[c] <= min_selected for c in range(profile.m) if c not in committee)


def min_alpha_ejr_plus(profile: ApprovalProfile, committee: Committee) -> ExactRational:
    """Tight EJR+ threshold: the committee satisfies alpha-EJR+ exactly for
    alpha strictly above the returned value (0 when no candidate is unselected).

    For every unselected c and demand level l, the largest group that can
    deviate is all supporters of c covered fewer than l times; the threshold
    is the max of |group| * |W| / (l * n) over those pairs. Polynomial time.
    """
    k = len(committee)
    coverage = [len(a & committee) for a in profile.approvals]
    best = ZERO
    for c in range(profile.m):
        if c in committee:
            continue
        cov_counts = [0] * (k + 1)
        for i in range(profile.n):
            if c in profile.approvals[i] and coverage[i] <= k:
                cov_counts[min(coverage[i], k)] += 1
        below = 0
        for ell in range(1, k + 1):
            below += cov_counts[ell - 1]
            if below == 0:
                continue
            value = rat(below * k, ell * profile.n)
            if value > best:
                best = value
    return best


def min_alpha_ejr_plus_oracle(
    profile: ApprovalProfile, committee: Committee, max_n: int = 12
) -> ExactRational:
    """Exhaustive oracle over all groups V', levels l, and unselected candidates."""
    if profile.n > max_n:
        raise InstanceTooLarge(f"group enumeration guarded to n<={max_n}")
    k = len(committee)
    coverage = [len(a & committee) for a in profile.approvals]
    unselected = [c for c in range(profile.m) if c not in committee]
    best = ZERO
    voters = list(range(profile.n))
    for size in range(1, profile.n + 1):
        for group in combinations(voters, size):
            common = frozenset.intersection(*(profile.approvals[i] for i in group))
            if not any(c in common for c in unselected):
                continue
            max_cov = max(coverage[i] for i in group)
            for ell in range(max_cov + 1, k + 1):
                value = rat(size * k, ell * profile.n)
                if value > best:
                    best = value
    return best


def satisfies_alpha_pjr_plus_bruteforce(
    profile: ApprovalProfile,
    committee: Committee,
    alpha,
    max_n: int = 14,
) -> bool:
    """alpha-PJR+ by exhaustive group enumeration (guarded to n <= max_n)."""
    if profile.n > max_n:
        raise InstanceTooLarge(f"group enumeration guarded to n<={max_n}")
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    alpha = ExactRational(alpha)
    k = len(committee)
    n = profile.n
    voters = list(range(n))
    for size in range(1, n + 1):
        for group in combinations(voters, size):
            common = frozenset.intersection(*(profile.approvals[i] for i in group))
            if common <= committee:
                continue
            covered = len(frozenset().union(*(profile.approvals[i] & committee for i in group)))
            # smallest demand level this group could claim and still be large enough
            ell = covered + 1
            if ell <= k and size >= alpha * rat(ell * n, k):
                return False
    return True


def maximin_support_lower_bound(
    profile: ApprovalProfile, ps: PriceSystem, verify_max: int = 12
) -> ExactRational:
    """1 / max budget, a lower bound on the maximin support of the committee.

    For small instances the bound is verified against the exhaustive MMS value
    (enumeration over nonempty subsets of W); a failure would be an internal
    error and raises AssertionError.
    """
    bound = 1 / max(ps.budgets())
    members = sorted(ps.committee)
    if profile.n <= verify_max and len(members) <= verify_max:
        sup = {c: profile.supporters(c) for c in members}
        mms = None
        for size in range(1, len(members) + 1):
            for subset in combinations(members, size):
                united = frozenset().union(*(sup[c] for c in subset))
                value = rat(len(united), size)
                if mms is None or value < mms:
                    mms = value
        assert mms >= bound, f"MMS {mms} fell below 1/max-budget {bound}"
    return bound


def is_pareto_optimal_bruteforce(
    profile: ApprovalProfile, committee: Committee, max_alternatives: int = 10**6
) -> bool:
    """No equal-size committee weakly dominates with one strict gain."""
    k = len(committee)
    m = profile.m
    count = 1
    for i in range(k):
        count = count * (m - i) // (i + 1)
        if count > max_alternatives:
            raise InstanceTooLarge(f"C({m},{k}) exceeds guard {max_alternatives}")
    base = [len(a & committee) for a in profile.approvals]
    for alt in combinations(range(m), k):
        alt_set = frozenset(alt)
        if alt_set == committee:
            continue
        strict = False
        dominated = True
        for i in range(profile.n):
            got = len(profile.approvals[i] & alt_set)
            if got < base[i]:
                dominated = False
                break
            if got > base[i]:
                strict = True
        if dominated and strict:
            return False
    return True
