"""Automorphisms of (profile, committee) and the symmetry-style axioms.

Candidate permutations are found by backtracking constrained by invariants
(approval score, committee membership, pairwise co-support counts); voter
permutations then factor through classes of identical approval sets. Intended
for desk scale; guards are parameters so callers can raise them deliberately.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product
from typing import Iterator, List, Optional, Tuple

from ..core import ApprovalProfile, Committee, InstanceTooLarge, PriceSystem


@dataclass(frozen=True)
class Automorphism:
    sigma: Tuple[int, ...]  # voter permutation, sigma[i] = image of voter i
    pi: Tuple[int, ...]  # candidate permutation

    def inverse(self) -> "Automorphism":
        inv_s = [0] * len(self.sigma)
        inv_p = [0] * len(self.pi)
        for i, j in enumerate(self.sigma):
            inv_s[j] = i
        for c, d in enumerate(self.pi):
            inv_p[d] = c
        return Automorphism(tuple(inv_s), tuple(inv_p))

    def compose(self, other: "Automorphism") -> "Automorphism":
        """self after other: (sigma1 . sigma2, pi1 . pi2)."""
        return Automorphism(
            tuple(self.sigma[other.sigma[i]] for i in range(len(self.sigma))),
            tuple(self.pi[other.pi[c]] for c in range(len(self.pi))),
        )


def _iter_automorphisms(
    profile: ApprovalProfile, committee: Optional[Committee]
) -> Iterator[Automorphism]:
    n, m = profile.n, profile.m
    scores = profile.approval_scores()
    sup = [frozenset(profile.supporters(c)) for c in range(m)]
    co = [[len(sup[c] & sup[d]) for d in range(m)] for c in range(m)]
    in_w = [committee is not None and c in committee for c in range(m)]

    # candidate signature that any automorphism must preserve
    sig = [(scores[c], in_w[c]) for c in range(m)]

    approval_multiset = {}
    for i in range(n):
        approval_multiset[profile.approvals[i]] = approval_multiset.get(profile.approvals[i], 0) + 1

    pi = [-1] * m
    used = [False] * m

    def extend(c: int) -> Iterator[Tuple[int, ...]]:
        if c == m:
            yield tuple(pi)
            return
        for d in range(m):
            if used[d] or sig[c] != sig[d]:
                continue
            if any(co[c][c2] != co[d][pi[c2]] for c2 in range(c)):
                continue
            pi[c] = d
            used[d] = True
            yield from extend(c + 1)
            used[d] = False
            pi[c] = -1

    classes = {}
    for i in range(n):
        classes.setdefault(profile.approvals[i], []).append(i)

    for cand_perm in extend(0):
        # pi must map every voter class onto a class of the same size
        mapped = {}
        ok = True
        for aset, voters in classes.items():
            image = frozenset(cand_perm[c] for c in aset)
            target = classes.get(image)
            if target is None or len(target) != len(voters):
                ok = False
                break
            mapped[aset] = target
        if not ok:
            continue
        class_list = list(classes.items())
        for choice in product(*(permutations(mapped[aset]) for aset, _ in class_list)):
            sigma = [-1] * n
            for (aset, voters), images in zip(class_list, choice):
                for i, j in zip(voters, images):
                    sigma[i] = j
            yield Automorphism(tuple(sigma), cand_perm)


def _check_guard(profile: ApprovalProfile, max_n: int, max_m: int) -> None:
    if profile.n > max_n or profile.m > max_m:
        raise InstanceTooLarge(
            f"automorphism search guarded to n<={max_n}, m<={max_m} "
            f"(got n={profile.n}, m={profile.m})"
        )


def enumerate_automorphisms(
    profile: ApprovalProfile,
    committee: Committee,
    max_n: int = 8,
    max_m: int = 10,
) -> List[Automorphism]:
    """All (sigma, pi) with A_sigma(i) = pi(A_i) and pi(W) = W."""
    _check_guard(profile, max_n, max_m)
    return list(_iter_automorphisms(profile, committee))


def enumerate_profile_automorphisms(
    profile: ApprovalProfile, max_n: int = 8, max_m: int = 10
) -> List[Automorphism]:
    """Profile automorphisms without the committee constraint."""
    _check_guard(profile, max_n, max_m)
    return list(_iter_automorphisms(profile, None))


def is_symmetric(
    profile: ApprovalProfile,
    committee: Committee,
    ps: PriceSystem,
    max_n: int = 8,
    max_m: int = 10,
) -> bool:
    """Payments and residuals invariant under every automorphism of (A, W)."""
    _check_guard(profile, max_n, max_m)
    members = sorted(committee)
    for auto in _iter_automorphisms(profile, committee):
        for i in range(profile.n):
            if ps.residuals[i] != ps.residuals[auto.sigma[i]]:
                return False
            for c in members:
                if ps.payment(i, c) != ps.payment(auto.sigma[i], auto.pi[c]):
                    return False
    return True


def is_equal_treatment(profile: ApprovalProfile, ps: PriceSystem) -> bool:
    """Voters with identical approval sets pay identically and hold equal residuals."""
    members = sorted(ps.committee)
    classes = {}
    for i in range(profile.n):
        classes.setdefault(profile.approvals[i], []).append(i)
    for voters in classes.values():
        head = voters[0]
        for i in voters[1:]:
            if ps.residuals[i] != ps.residuals[head]:
                return False
            if any(ps.payment(i, c) != ps.payment(head, c) for c in members):
                return False
    return True


def is_perfect_symmetry_instance(
    profile: ApprovalProfile,
    committee: Committee,
    max_n: int = 8,
    max_m: int = 10,
) -> bool:
    """All candidates pairwise isomorphic and W takes equally many from each type.

    Types are classes of identical supporter sets; isomorphism is via profile
    automorphisms (no committee constraint).
    """
    _check_guard(profile, max_n, max_m)
    m = profile.m
    # orbit of candidates under the profile automorphism group
    parent = list(range(m))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for auto in _iter_automorphisms(profile, None):
        for c in range(m):
            a, b = find(c), find(auto.pi[c])
            if a != b:
                parent[a] = b
    if len({find(c) for c in range(m)}) != 1:
        return False
    types = {}
    for c in range(m):
        types.setdefault(profile.supporters(c), []).append(c)
    counts = {len([c for c in cs if c in committee]) for cs in types.values()}
    return len(counts) == 1
