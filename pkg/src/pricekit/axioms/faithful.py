"""Budget-averaging, single-winner payment responsiveness, monotonicity probes."""

from __future__ import annotations

from typing import Callable, List, Optional, Tuple

from ..core import ApprovalProfile, ApprovalProfile as _P, Committee, PriceSystem, build_profile
from ..rational import ONE, rat
from .stability import is_one_stable, pair_constraint_value


class NotOneStable(ValueError):
    pass


class PreconditionViolated(ValueError):
    pass


def is_budget_averaging(profile: ApprovalProfile, ps: PriceSystem) -> bool:
    """Every voter below the average payment |W|/n sits on a tight 1-stability
    constraint through their residual slot (so no extra residual is possible).

    Requires a 1-stable system; tightness is exact rational equality.
    """
    if not is_one_stable(profile, ps):
        raise NotOneStable("budget-averaging is only defined for 1-stable systems")
    threshold = rat(len(ps.committee), profile.n)
    budgets = ps.budgets()
    members = sorted(ps.committee)
    unselected = [c for c in range(profile.m) if c not in ps.committee]
    for i in range(profile.n):
        if budgets[i] >= threshold:
            continue
        blocked = False
        for c in unselected:
            if c not in profile.approvals[i]:
                continue
            total = sum(
                (ps.residuals[j] for j in range(profile.n) if c in profile.approvals[j]),
                rat(0),
            )
            if total == ONE:
                blocked = True
                break
            for cprime in members:
                if cprime in profile.approvals[i]:
                    continue  # i's residual only enters when i is in V[c] minus V[c']
                if pair_constraint_value(profile, ps, c, cprime) == ONE:
                    blocked = True
                    break
            if blocked:
                break
        if not blocked:
            return False
    return True


def approval_winners(profile: ApprovalProfile) -> List[int]:
    scores = profile.approval_scores()
    top = max(scores)
    return [c for c in range(profile.m) if scores[c] == top]


def is_single_winner_payment_responsive(
    profile: ApprovalProfile, ps: PriceSystem
) -> Optional[bool]:
    """For W = {c} with c not an approval winner: supporters of c approving no
    approval winner must pay strictly more than those approving one.

    Returns None (not applicable) for other committees.
    """
    if len(ps.committee) != 1:
        return None
    (c,) = ps.committee
    winners = set(approval_winners(profile))
    if c in winners:
        return None
    payers = [i for i in range(profile.n) if c in profile.approvals[i]]
    unlucky = [i for i in payers if not (profile.approvals[i] & winners)]
    lucky = [i for i in payers if profile.approvals[i] & winners]
    for i in unlucky:
        for j in lucky:
            if not ps.payment(i, c) > ps.payment(j, c):
                return False
    return True


def check_monotonicity_pair(
    rule: Callable[[ApprovalProfile, Committee], PriceSystem],
    profile: ApprovalProfile,
    committee: Committee,
    voter: int,
    candidate: int,
) -> List[Tuple[int, str]]:
    """Delete voter's approval of a selected candidate, re-run the rule, and
    report every voter whose relative budget order versus the deleted voter
    flips the wrong way. Empty list means no monotonicity violation.
    """
    if candidate not in committee or candidate not in profile.approvals[voter]:
        raise PreconditionViolated("candidate must be a committee member approved by the voter")
    if len(profile.supporters(candidate)) < 2:
        raise PreconditionViolated("deleted candidate must keep at least one supporter")
    new_sets = [set(a) for a in profile.approvals]
    new_sets[voter].discard(candidate)
    if not new_sets[voter]:
        raise PreconditionViolated("deletion would empty the voter's approval set")
    modified = build_profile(profile.n, new_sets)
    before = rule(profile, committee).budgets()
    after = rule(modified, committee).budgets()
    violations: List[Tuple[int, str]] = []
    for j in range(profile.n):
        if j == voter:
            continue
        if before[j] > before[voter] and not after[j] > after[voter]:
            violations.append((j, "strict order not preserved"))
        elif before[j] == before[voter] and not after[j] >= after[voter]:
            violations.append((j, "tie order not preserved"))
    return violations
