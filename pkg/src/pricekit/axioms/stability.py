"""Residual stability, 1-stability, stability and weak stability checkers.

The swap constraint for an unselected c and a selected c' reads

    sum of residuals over V[c] minus V[c']  +  sum of payments p(i, c')
    over V[c] intersect V[c']  <=  1,

i.e. supporters of c cannot afford c by pooling residuals and redirecting
their payments away from c'.
"""

from __future__ import annotations

from itertools import combinations
from typing import Optional, Tuple

from ..core import ApprovalProfile, InstanceTooLarge, PriceSystem
from ..rational import ONE, ZERO


def pair_constraint_value(profile: ApprovalProfile, ps: PriceSystem, c: int, cprime: int):
    """Value of the swap constraint for unselected c against selected c'."""
    total = ZERO
    for i in range(profile.n):
        if c not in profile.approvals[i]:
            continue
        if cprime in profile.approvals[i]:
            total += ps.payment(i, cprime)
        else:
            total += ps.residuals[i]
    return total


def residual_stability_violation(profile: ApprovalProfile, ps: PriceSystem) -> Optional[int]:
    """First unselected candidate whose supporters' residuals exceed 1, if any."""
    for c in range(profile.m):
        if c in ps.committee:
            continue
        total = sum((ps.residuals[i] for i in range(profile.n) if c in profile.approvals[i]), ZERO)
        if total > ONE:
            return c
    return None


def is_residual_stable(profile: ApprovalProfile, ps: PriceSystem) -> bool:
    return residual_stability_violation(profile, ps) is None


def one_stability_violation(
    profile: ApprovalProfile, ps: PriceSystem
) -> Optional[Tuple[int, Optional[int]]]:
    """Witness for a 1-stability violation.

    Returns (c, None) when residual stability fails for c, or (c, cprime) when
    a swap constraint exceeds 1; None if the system is 1-stable.
    """
    c = residual_stability_violation(profile, ps)
    if c is not None:
        return (c, None)
    for c in range(profile.m):
        if c in ps.committee:
            continue
        for cprime in sorted(ps.committee):
            if pair_constraint_value(profile, ps, c, cprime) > ONE:
                return (c, cprime)
    return None


def is_one_stable(profile: ApprovalProfile, ps: PriceSystem) -> bool:
    return one_stability_violation(profile, ps) is None


def stability_violation(profile: ApprovalProfile, ps: PriceSystem) -> Optional[int]:
    """Stability: supporters of any unselected c, each contributing
    max(residual, largest single payment), cannot afford c."""
    members = sorted(ps.committee)
    for c in range(profile.m):
        if c in ps.committee:
            continue
        total = ZERO
        for i in range(profile.n):
            if c not in profile.approvals[i]:
                continue
            best = ps.residuals[i]
            for cstar in members:
                p = ps.payment(i, cstar)
                if p > best:
                    best = p
            total += best
        if total > ONE:
            return c
    return None


def is_stable(profile: ApprovalProfile, ps: PriceSystem) -> bool:
    return stability_violation(profile, ps) is None


def _best_weak_deviation_for_candidate(
    profile: ApprovalProfile, ps: PriceSystem, c: int, members: list
):
    """Max deviation value for unselected c over all S subseteq W and disjoint X, Y.

    For a fixed S each supporter independently takes the best admissible role:
    X (pay max over S, needs |S cap A_i| <= 1), Y (residual, needs
    S cap A_i empty), or stay out. Exponential only in |W|.
    """
    supporters = [i for i in range(profile.n) if c in profile.approvals[i]]
    best = ZERO
    for size in range(len(members) + 1):
        for s in combinations(members, size):
            total = ZERO
            for i in supporters:
                overlap = [cs for cs in s if cs in profile.approvals[i]]
                if not overlap:
                    contrib = ps.residuals[i]  # Y is at least as good as X here
                elif len(overlap) == 1:
                    contrib = ps.payment(i, overlap[0])
                else:
                    continue  # voter cannot join either role
                if contrib > 0:
                    total += contrib
            if total > best:
                best = total
    return best


def is_weakly_stable_bruteforce(
    profile: ApprovalProfile,
    ps: PriceSystem,
    max_committee: int = 12,
    max_supporters: int = 12,
) -> bool:
    """Weak stability by enumeration over payment-target sets S.

    Guarded: |W| and each unselected candidate's supporter count must stay
    within the configured bounds.
    """
    members = sorted(ps.committee)
    if len(members) > max_committee:
        raise InstanceTooLarge(f"|W|={len(members)} exceeds guard {max_committee}")
    for c in range(profile.m):
        if c in ps.committee:
            continue
        n_sup = sum(1 for i in range(profile.n) if c in profile.approvals[i])
        if n_sup > max_supporters:
            raise InstanceTooLarge(f"candidate {c} has {n_sup} supporters, guard {max_supporters}")
        if _best_weak_deviation_for_candidate(profile, ps, c, members) > ONE:
            return False
    return True


def weak_stability_exhaustive_oracle(profile: ApprovalProfile, ps: PriceSystem) -> bool:
    """Independent oracle: enumerate every (X, Y, S) assignment explicitly.

    3^{supporters} * 2^{|W|} per unselected candidate; only for tiny instances.
    """
    members = sorted(ps.committee)
    for c in range(profile.m):
        if c in ps.committee:
            continue
        supporters = [i for i in range(profile.n) if c in profile.approvals[i]]
        for size in range(len(members) + 1):
            for s in combinations(members, size):
                # role[i] in {out, X, Y} enumerated positionally
                stack = [(0, ZERO)]
                while stack:
                    idx, acc = stack.pop()
                    if idx == len(supporters):
                        if acc > ONE:
                            return False
                        continue
                    i = supporters[idx]
                    stack.append((idx + 1, acc))  # out
                    overlap = [cs for cs in s if cs in profile.approvals[i]]
                    if len(overlap) <= 1:  # X admissible
                        pay = max((ps.payment(i, cs) for cs in overlap), default=ZERO)
                        stack.append((idx + 1, acc + pay))
                    if not overlap:  # Y admissible
                        stack.append((idx + 1, acc + ps.residuals[i]))
        # fall through: no deviation for c
    return True
