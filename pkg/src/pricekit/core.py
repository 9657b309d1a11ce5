"""Domain types: approval profiles, committees, price systems.

Voters and candidates are 0-indexed integers. A price system assigns each
voter nonnegative payments towards approved committee members plus a
nonnegative residual; every committee member is bought at a price of exactly 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, Optional, Sequence, Tuple

from .rational import ExactRational, ZERO, ONE

Committee = FrozenSet[int]


class ProfileError(ValueError):
    pass


class EmptyApprovalSet(ProfileError):
    def __init__(self, voter: int):
        self.voter = voter
        super().__init__(f"voter {voter} approves no candidate")


class UnsupportedCandidate(ProfileError):
    def __init__(self, candidate: int):
        self.candidate = candidate
        super().__init__(f"candidate {candidate} is approved by no voter")


class OutOfRange(ProfileError):
    pass


class InstanceTooLarge(RuntimeError):
    """Raised by brute-force checkers when the configured guard is exceeded."""


@dataclass(frozen=True)
class ApprovalProfile:
    """Approval sets of n voters over m candidates.

    Every voter approves at least one candidate and every candidate has at
    least one supporter; constructors enforce both standing assumptions.
    Optional positive voter weights are carried for weighted committee rules
    (price systems themselves are unweighted).
    """

    n: int
    m: int
    approvals: Tuple[FrozenSet[int], ...]
    weights: Optional[Tuple[ExactRational, ...]] = None

    def supporters(self, c: int) -> FrozenSet[int]:
        return frozenset(i for i in range(self.n) if c in self.approvals[i])

    def supporter_lists(self) -> list[list[int]]:
        """supporters of every candidate, as sorted lists (index = candidate)."""
        out: list[list[int]] = [[] for _ in range(self.m)]
        for i in range(self.n):
            for c in self.approvals[i]:
                out[c].append(i)
        return out

    def approval_scores(self) -> list[int]:
        scores = [0] * self.m
        for a in self.approvals:
            for c in a:
                scores[c] += 1
        return scores

    def restricted(self, voters: Sequence[int], candidates: FrozenSet[int]) -> "ApprovalProfile":
        """Sub-profile on the given voters and candidates (no validation)."""
        return ApprovalProfile(
            n=len(voters),
            m=self.m,
            approvals=tuple(self.approvals[i] & candidates for i in voters),
        )


def build_profile(
    n: int,
    approvals: Sequence[Iterable[int]],
    weights: Optional[Sequence] = None,
) -> ApprovalProfile:
    """Validate and construct an approval profile.

    Candidate count is inferred as 1 + max approved index. Raises
    EmptyApprovalSet / UnsupportedCandidate / OutOfRange on violations of the
    standing assumptions.
    """
    if n <= 0:
        raise OutOfRange(f"voter count must be positive, got {n}")
    if len(approvals) != n:
        raise OutOfRange(f"expected {n} approval sets, got {len(approvals)}")
    sets = []
    for i, a in enumerate(approvals):
        s = frozenset(int(c) for c in a)
        if not s:
            raise EmptyApprovalSet(i)
        if any(c < 0 for c in s):
            raise OutOfRange(f"voter {i} approves a negative candidate index")
        sets.append(s)
    m = 1 + max(max(s) for s in sets)
    supported = set()
    for s in sets:
        supported |= s
    for c in range(m):
        if c not in supported:
            raise UnsupportedCandidate(c)
    w = None
    if weights is not None:
        if len(weights) != n:
            raise OutOfRange(f"expected {n} weights, got {len(weights)}")
        w = tuple(ExactRational(x) for x in weights)
        if any(x <= 0 for x in w):
            raise OutOfRange("voter weights must be positive")
    return ApprovalProfile(n=n, m=m, approvals=tuple(sets), weights=w)


def ensure_committee(profile: ApprovalProfile, members: Iterable[int]) -> Committee:
    w = frozenset(int(c) for c in members)
    if not w:
        raise OutOfRange("committee must be nonempty")
    if any(c < 0 or c >= profile.m for c in w):
        raise OutOfRange("committee references a candidate outside the profile")
    return w


@dataclass
class PriceSystem:
    """Payments p(i,c) for committee members plus per-voter residuals.

    payments is sparse: missing (voter, candidate) keys mean a zero payment.
    """

    committee: Committee
    payments: dict  # (voter, candidate) -> ExactRational
    residuals: list  # voter -> ExactRational

    def payment(self, i: int, c: int) -> ExactRational:
        return self.payments.get((i, c), ZERO)

    def residual(self, i: int) -> ExactRational:
        return self.residuals[i]

    def total_payment(self, i: int) -> ExactRational:
        return sum((v for (j, _), v in self.payments.items() if j == i), ZERO)

    def budgets(self) -> list:
        """b_i = r_i + sum of i's payments, exactly."""
        out = list(self.residuals)
        for (i, _), v in self.payments.items():
            out[i] = out[i] + v
        return out

    def candidate_income(self, c: int) -> ExactRational:
        return sum((v for (_, d), v in self.payments.items() if d == c), ZERO)


def budgets(ps: PriceSystem) -> list:
    return ps.budgets()


@dataclass(frozen=True)
class Violation:
    """First violated price-system clause, with the indices that witness it."""

    clause: str
    voter: Optional[int] = None
    candidate: Optional[int] = None

    def __str__(self) -> str:
        parts = [self.clause]
        if self.voter is not None:
            parts.append(f"voter={self.voter}")
        if self.candidate is not None:
            parts.append(f"candidate={self.candidate}")
        return " ".join(parts)


def validate_price_system(profile: ApprovalProfile, ps: PriceSystem) -> Optional[Violation]:
    """Return None if ps satisfies all price-system invariants, else the first violation.

    Checked clauses, in order: committee inside the profile, residual vector
    length, nonnegative entries, payments only from supporters to committee
    members, and each member bought at a price of exactly 1.
    """
    if not ps.committee or any(c < 0 or c >= profile.m for c in ps.committee):
        return Violation("committee outside profile")
    if len(ps.residuals) != profile.n:
        return Violation("residual vector length mismatch")
    for i, r in enumerate(ps.residuals):
        if r < 0:
            return Violation("negative residual", voter=i)
    for (i, c), v in sorted(ps.payments.items()):
        if i < 0 or i >= profile.n:
            return Violation("payment from unknown voter", voter=i)
        if c not in ps.committee:
            return Violation("payment to non-committee candidate", voter=i, candidate=c)
        if v < 0:
            return Violation("negative payment", voter=i, candidate=c)
        if v > 0 and c not in profile.approvals[i]:
            return Violation("payment outside approval set", voter=i, candidate=c)
    for c in sorted(ps.committee):
        income = ps.candidate_income(c)
        if income != ONE:
            if income < ONE:
                return Violation("underfunded candidate", candidate=c)
            return Violation("overfunded candidate", candidate=c)
    return None
