"""Laminar profiles: decomposition, coherence, proportionality, unproportionality.

A profile is laminar if it is unanimous, or becomes laminar after removing a
unanimously approved candidate, or is a disjoint union of two laminar
profiles. The decomposition below strips all unanimous candidates at once
(equivalent to stripping them one by one, since unanimity of the remaining
candidates is unaffected) and splits along connected components of the
voter-candidate incidence graph. Split nodes keep all components as children;
a k-ary split stands for any nesting of binary disjoint unions.

The proportionality definitions quantify existentially over binary partitions,
so the committee-level checks enumerate all bipartitions of the components at
each split node (desk scale).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet, Optional, Tuple

from ..core import ApprovalProfile, Committee, PriceSystem
from ..rational import ExactRational, rat

Rational = ExactRational


class NotLaminar(ValueError):
    pass


@dataclass(frozen=True)
class LaminarDecomposition:
    """Node of a laminar decomposition.

    kind is 'leaf' (unanimous sub-profile), 'strip' (unanimously approved
    candidates removed; single child) or 'split' (children are the connected
    components, voter- and candidate-disjoint).
    """

    kind: str
    voters: Tuple[int, ...]
    candidates: FrozenSet[int]
    stripped: Tuple[int, ...] = ()
    parts: Tuple["LaminarDecomposition", ...] = ()

    def reconstruct(self) -> dict:
        """voter -> approved candidate set implied by the tree (for validation)."""
        if self.kind == "leaf":
            return {i: set(self.candidates) for i in self.voters}
        if self.kind == "strip":
            out = self.parts[0].reconstruct()
            for i in out:
                out[i] |= set(self.stripped)
            return out
        out = {}
        for part in self.parts:
            out.update(part.reconstruct())
        return out


def _components(profile: ApprovalProfile, voters: Tuple[int, ...], cands: FrozenSet[int]):
    """Connected components of the incidence graph, as (voters, candidates) pairs.

    A voter whose restricted approval set is empty forms its own component.
    """
    supporters = {c: [] for c in cands}
    for i in voters:
        for c in profile.approvals[i] & cands:
            supporters[c].append(i)
    seen_v, seen_c = set(), set()
    comps = []
    for start in voters:
        if start in seen_v:
            continue
        comp_v, comp_c = [], set()
        queue = [("v", start)]
        seen_v.add(start)
        while queue:
            kind, x = queue.pop()
            if kind == "v":
                comp_v.append(x)
                for c in profile.approvals[x] & cands:
                    if c not in seen_c:
                        seen_c.add(c)
                        queue.append(("c", c))
            else:
                comp_c.add(x)
                for j in supporters[x]:
                    if j not in seen_v:
                        seen_v.add(j)
                        queue.append(("v", j))
        comps.append((tuple(sorted(comp_v)), frozenset(comp_c)))
    return comps


def _decompose(profile: ApprovalProfile, voters: Tuple[int, ...], cands: FrozenSet[int]):
    restricted = [profile.approvals[i] & cands for i in voters]
    first = restricted[0]
    if all(a == first for a in restricted):
        return LaminarDecomposition("leaf", voters, cands)
    unanimous = frozenset(c for c in cands if all(c in a for a in restricted))
    if unanimous:
        child = _decompose(profile, voters, cands - unanimous)
        if child is None:
            return None
        return LaminarDecomposition(
            "strip", voters, cands, stripped=tuple(sorted(unanimous)), parts=(child,)
        )
    comps = _components(profile, voters, cands)
    if len(comps) <= 1:
        return None
    parts = []
    for comp_v, comp_c in comps:
        sub = _decompose(profile, comp_v, comp_c)
        if sub is None:
            return None
        parts.append(sub)
    return LaminarDecomposition("split", voters, cands, parts=tuple(parts))


def laminar_decomposition(profile: ApprovalProfile) -> Optional[LaminarDecomposition]:
    """Decomposition tree if the profile is laminar, else None."""
    return _decompose(profile, tuple(range(profile.n)), frozenset(range(profile.m)))


def is_laminar(profile: ApprovalProfile) -> bool:
    return laminar_decomposition(profile) is not None


def is_laminar_coherent(profile: ApprovalProfile, ps: PriceSystem) -> bool:
    """Each member's cost split equally over its supporters; equal residuals
    for voters with identical approval sets. Requires a laminar profile."""
    if not is_laminar(profile):
        raise NotLaminar("profile is not laminar")
    for c in sorted(ps.committee):
        sup = profile.supporters(c)
        share = rat(1, len(sup))
        for i in range(profile.n):
            expected = share if i in sup else 0
            if ps.payment(i, c) != expected:
                return False
    by_set = {}
    for i in range(profile.n):
        by_set.setdefault(profile.approvals[i], []).append(i)
    for group in by_set.values():
        r0 = ps.residuals[group[0]]
        if any(ps.residuals[i] != r0 for i in group[1:]):
            return False
    return True


def _bipartitions(k: int):
    """Nonempty proper bipartitions of range(k), up to swapping sides."""
    for mask in range(1, 1 << (k - 1)):
        left = [i for i in range(k) if mask >> i & 1]
        right = [i for i in range(k) if not mask >> i & 1]
        yield left, right


def _node_lamprop(profile: ApprovalProfile, voters, cands, w) -> bool:
    restricted = [profile.approvals[i] & cands for i in voters]
    unanimous = frozenset(c for c in cands if all(c in a for a in restricted))
    if w <= unanimous:
        return True
    if unanimous:
        return _node_lamprop(profile, voters, cands - unanimous, w - unanimous)
    comps = _components(profile, voters, cands)
    if len(comps) <= 1:
        raise NotLaminar("profile is not laminar")
    for left, right in _bipartitions(len(comps)):
        v1 = tuple(i for idx in left for i in comps[idx][0])
        c1 = frozenset().union(*(comps[idx][1] for idx in left))
        v2 = tuple(i for idx in right for i in comps[idx][0])
        c2 = frozenset().union(*(comps[idx][1] for idx in right))
        w1, w2 = w & c1, w & c2
        if len(v1) * len(w2) != len(v2) * len(w1):
            continue
        if _node_lamprop(profile, v1, c1, w1) and _node_lamprop(profile, v2, c2, w2):
            return True
    return False


def is_laminar_proportional(profile: ApprovalProfile, committee: Committee) -> bool:
    """Does the committee split proportionally across every subparty level?"""
    if not is_laminar(profile):
        raise NotLaminar("profile is not laminar")
    return _node_lamprop(
        profile, tuple(range(profile.n)), frozenset(range(profile.m)), frozenset(committee)
    )


def _delta_star(profile: ApprovalProfile, v1, c1, w1_size: int, w2_size: int, v2_size: int, w) -> int:
    # largest d in N with w1_size + d < w2_size * |V1| / |V2|, capped by the
    # number of candidates approved by all of V1 that lie outside W
    gap_num = w2_size * len(v1) - w1_size * v2_size
    if gap_num <= 0:
        return 0
    d_max = (gap_num - 1) // v2_size
    common = frozenset(c1)
    for i in v1:
        common &= profile.approvals[i]
    cap = len(common - w)
    return max(0, min(d_max, cap))


def _node_maxdelta(profile: ApprovalProfile, voters, cands, w) -> int:
    restricted = [profile.approvals[i] & cands for i in voters]
    first = restricted[0]
    if all(a == first for a in restricted):
        return 0
    unanimous = frozenset(c for c in cands if all(c in a for a in restricted))
    if unanimous:
        return _node_maxdelta(profile, voters, cands - unanimous, w - unanimous)
    comps = _components(profile, voters, cands)
    if len(comps) <= 1:
        raise NotLaminar("profile is not laminar")
    best = 0
    for left, right in _bipartitions(len(comps)):
        v1 = tuple(i for idx in left for i in comps[idx][0])
        c1 = frozenset().union(*(comps[idx][1] for idx in left))
        v2 = tuple(i for idx in right for i in comps[idx][0])
        c2 = frozenset().union(*(comps[idx][1] for idx in right))
        w1, w2 = w & c1, w & c2
        d1 = _node_maxdelta(profile, v1, c1, w1)
        d2 = _node_maxdelta(profile, v2, c2, w2)
        ds = max(
            _delta_star(profile, v1, c1, len(w1), len(w2), len(v2), w),
            _delta_star(profile, v2, c2, len(w2), len(w1), len(v1), w),
        )
        best = max(best, d1, d2, ds)
    return best


def max_laminar_unproportionality(profile: ApprovalProfile, committee: Committee) -> int:
    """Largest Delta for which the committee is Delta-laminar-unproportional.

    Both orientations of each bipartition are evaluated, since partitions are
    unordered; 0 means no subparty is underrepresented.
    """
    if not is_laminar(profile):
        raise NotLaminar("profile is not laminar")
    return _node_maxdelta(
        profile, tuple(range(profile.n)), frozenset(range(profile.m)), frozenset(committee)
    )
