"""Synthetic instance generation and the weighted method of equal shares.

All generators draw from an explicit random.Random so that (seed, instance
index) fully determines the output; experiment workers derive per-instance
sub-streams as Random(f"{seed}:{index}").
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .core import ApprovalProfile, Committee, build_profile
from .rational import ExactRational, ZERO, rat

Q = ExactRational

RESAMPLE_LIMIT = 10**4


class ResampleLimitExceeded(RuntimeError):
    pass


def substream(seed: int, index: int) -> random.Random:
    """Independent deterministic stream for one instance of a batch."""
    return random.Random(f"{seed}:{index}")


@dataclass
class EuclideanInstance:
    profile: ApprovalProfile
    voter_points: List[Tuple[float, float]]
    candidate_points: List[Tuple[float, float]]
    radius: float


def gen_euclidean_vcr(
    n: int, m: int, rng: random.Random, on_invalid: str = "resample"
) -> EuclideanInstance:
    """Voters and candidates uniform in the unit square; approval within a
    per-profile radius drawn from [0.05, 0.3].

    on_invalid picks the handling of draws that violate the support
    assumptions: "resample" redraws the whole instance (fresh points and
    radius, same stream), keeping n and m exact but conditioning the surviving
    radii upward; "drop" removes empty-ballot voters and unsupported
    candidates (remapping indices), which preserves sparse spatial draws and
    is what the desk-scale empirical reproduction calibrates against. Under
    "drop" a redraw happens only when fewer than two voters or candidates
    survive.
    """
    if on_invalid not in ("resample", "drop"):
        raise ValueError(f"unknown on_invalid mode {on_invalid!r}")
    for _ in range(RESAMPLE_LIMIT):
        voters = [(rng.random(), rng.random()) for _ in range(n)]
        cands = [(rng.random(), rng.random()) for _ in range(m)]
        radius = rng.uniform(0.05, 0.3)
        r2 = radius * radius
        approvals = []
        for vx, vy in voters:
            s = {
                c
                for c, (cx, cy) in enumerate(cands)
                if (vx - cx) ** 2 + (vy - cy) ** 2 <= r2
            }
            approvals.append(s)
        if on_invalid == "drop":
            keep = [i for i in range(n) if approvals[i]]
            if len(keep) < 2:
                continue
            supported = sorted(set().union(*(approvals[i] for i in keep)))
            if len(supported) < 2:
                continue
            remap = {c: j for j, c in enumerate(supported)}
            kept_approvals = [{remap[c] for c in approvals[i]} for i in keep]
            return EuclideanInstance(
                build_profile(len(keep), kept_approvals),
                [voters[i] for i in keep],
                [cands[c] for c in supported],
                radius,
            )
        if any(not s for s in approvals):
            continue
        supported = set().union(*approvals)
        if len(supported) < m:
            continue
        return EuclideanInstance(build_profile(n, approvals), voters, cands, radius)
    raise ResampleLimitExceeded(f"no valid instance after {RESAMPLE_LIMIT} draws")


def gen_resampling(
    n: int, m: int, p: float, phi: float, rng: random.Random,
    max_attempts: int = RESAMPLE_LIMIT,
) -> ApprovalProfile:
    """Resampling model: a central ballot approved with probability p; each
    voter keeps each entry with probability 1-phi and redraws it with
    probability p otherwise. Nonemptiness enforced by redrawing the instance.
    """
    if not (0 <= p <= 1 and 0 <= phi <= 1):
        raise ValueError("p and phi must lie in [0, 1]")
    for _ in range(max_attempts):
        central = [rng.random() < p for _ in range(m)]
        approvals = []
        for _ in range(n):
            ballot = set()
            for c in range(m):
                if rng.random() < phi:
                    approve = rng.random() < p
                else:
                    approve = central[c]
                if approve:
                    ballot.add(c)
            approvals.append(ballot)
        if any(not s for s in approvals):
            continue
        supported = set().union(*approvals)
        if len(supported) < m:
            continue
        return build_profile(n, approvals)
    raise ResampleLimitExceeded(f"no valid instance after {max_attempts} draws")


def gen_resampling_random_params(n: int, m: int, rng: random.Random) -> ApprovalProfile:
    """Resampling instance with p and phi uniform in [0, 1].

    Extreme parameter draws can make the nonemptiness assumptions essentially
    unreachable, so the parameters themselves are part of the resampled
    instance: after a bounded number of ballot redraws, fresh p and phi are
    drawn from the same stream.
    """
    for _ in range(400):
        p = rng.uniform(0, 1)
        phi = rng.uniform(0, 1)
        try:
            return gen_resampling(n, m, p, phi, rng, max_attempts=50)
        except ResampleLimitExceeded:
            continue
    raise ResampleLimitExceeded("no valid resampling instance after 400 parameter draws")


def gen_spatial_weights(
    voter_points: Sequence[Tuple[float, float]], rng: random.Random
) -> List[Q]:
    """Gaussian-decay weights around a uniformly drawn focal point.

    exp(-d^2 / (2 * 0.3^2)) is evaluated in floating point and snapped to an
    exact rational with 12 decimal digits so downstream budget arithmetic
    stays exact.
    """
    qx, qy = rng.random(), rng.random()
    weights = []
    for vx, vy in voter_points:
        d2 = (vx - qx) ** 2 + (vy - qy) ** 2
        w = math.exp(-d2 / (2 * 0.3**2))
        weights.append(rat(round(w * 10**12), 10**12))
    return weights


def random_committee(profile: ApprovalProfile, k: int, rng: random.Random) -> Committee:
    """Uniform k-subset of the candidates."""
    if not 1 <= k <= profile.m:
        raise ValueError(f"k must be in [1, {profile.m}]")
    return frozenset(rng.sample(range(profile.m), k))


def _min_rho(budgets: List[Q], supporters: Sequence[int]) -> Optional[Q]:
    """Smallest rho with sum of min(b_i, rho) over supporters equal to 1."""
    values = sorted(budgets[i] for i in supporters)
    total = sum(values, ZERO)
    if total < 1:
        return None
    prefix = ZERO
    for t, b in enumerate(values):
        # suppose the t voters with smallest budgets pay in full
        remaining = len(values) - t
        rho = (1 - prefix) / remaining
        if rho <= b:
            return rho
        prefix += b
    return values[-1]  # total == 1 exactly


def weighted_mes(profile: ApprovalProfile, k: int) -> Committee:
    """Method of equal shares with per-voter budgets k * w_i / sum(w).

    Repeatedly buys the candidate with the smallest per-voter contribution
    rho (ties to the lowest candidate index). When nothing is affordable, all
    remaining budgets are scaled up by the smallest uniform factor that makes
    some candidate affordable; stops early only when no remaining candidate
    has a supporter with positive budget.
    """
    if not 1 <= k <= profile.m:
        raise ValueError(f"k must be in [1, {profile.m}]")
    weights = profile.weights or tuple([rat(1)] * profile.n)
    total_w = sum(weights, ZERO)
    budgets = [k * w / total_w for w in weights]
    supporters = [sorted(profile.supporters(c)) for c in range(profile.m)]
    selected: List[int] = []
    remaining = set(range(profile.m))
    while len(selected) < k and remaining:
        best_rho, best_c = None, None
        for c in sorted(remaining):
            rho = _min_rho(budgets, supporters[c])
            if rho is None:
                continue
            if best_rho is None or rho < best_rho:
                best_rho, best_c = rho, c
        if best_c is None:
            pools = [
                (c, sum((budgets[i] for i in supporters[c]), ZERO)) for c in sorted(remaining)
            ]
            pools = [(c, s) for c, s in pools if s > 0]
            if not pools:
                break
            factor = min(1 / s for _, s in pools)
            budgets = [b * factor for b in budgets]
            continue
        for i in supporters[best_c]:
            budgets[i] -= min(budgets[i], best_rho)
        selected.append(best_c)
        remaining.discard(best_c)
    return frozenset(selected)
