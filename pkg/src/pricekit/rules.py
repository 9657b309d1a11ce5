"""Explanation rules: Equal Split and Continuous Phragmen.

Continuous Phragmen lets voters earn money at unit rate and spend it
continuously on approved committee members, blocking any spending or residual
growth that would break 1-stability, promoting unfundable members to critical
status, and pruning residuals when exempted critical supporters push a swap
constraint past 1. The implementation here is event-driven: between events
every tracked quantity is linear in time, so event times are exact rationals.
A literal epsilon-step rendition of the same loop (micro_step_oracle) serves
as a convergence oracle in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from .core import ApprovalProfile, Committee, PriceSystem, ensure_committee
from .rational import ExactRational, ONE, ZERO, rat

Q = ExactRational


class StepBudgetExceeded(RuntimeError):
    pass


@dataclass
class PhragmenState:
    """Work-in-progress state of the continuous rule.

    remaining_cost maps committee members to their unpaid cost h_c; spending
    maps each active voter to the candidate set their earnings currently flow
    into. money_in and pruned_mass are conservation diagnostics: money earned
    equals money held (payments plus residuals) plus pruned_mass.
    """

    committee: Tuple[int, ...]
    remaining_cost: Dict[int, Q]
    active: Set[int]
    blocked: Set[int]
    critical: Set[int]
    remaining: Set[int]
    spending: Dict[int, FrozenSet[int]]
    payments: List[Dict[int, Q]]
    residuals: List[Q]
    elapsed: Q = ZERO
    money_in: Q = ZERO
    pruned_mass: Q = ZERO
    held_after_main: Q = ZERO  # payments + residuals when the last h_c hit 0


class _ConstraintTable:
    """Slot membership of every 1-stability constraint, with adjacency lists
    from voters (and voter-payment pairs) to the constraints they enter."""

    def __init__(self, profile: ApprovalProfile, committee: Committee):
        self.unselected = [c for c in range(profile.m) if c not in committee]
        self.members = sorted(committee)
        self.sup = [profile.supporters(c) for c in range(profile.m)]
        self.res_slot: Dict[Tuple[int, int], Tuple[int, ...]] = {}
        self.pay_slot: Dict[Tuple[int, int], Tuple[int, ...]] = {}
        n = profile.n
        self.cond1_touch: List[List[int]] = [[] for _ in range(n)]
        self.res_pair_touch: List[List[Tuple[int, int]]] = [[] for _ in range(n)]
        self.pay_pair_touch: Dict[Tuple[int, int], List[Tuple[int, int]]] = {}
        for c in self.unselected:
            for i in self.sup[c]:
                self.cond1_touch[i].append(c)
            for cp in self.members:
                key = (c, cp)
                res = tuple(sorted(self.sup[c] - self.sup[cp]))
                pay = tuple(sorted(self.sup[c] & self.sup[cp]))
                self.res_slot[key] = res
                self.pay_slot[key] = pay
                for i in res:
                    self.res_pair_touch[i].append(key)
                for i in pay:
                    self.pay_pair_touch.setdefault((i, cp), []).append(key)


class _Values:
    """Current values of every constraint, updated incrementally."""

    def __init__(self, table: _ConstraintTable, payments, residuals):
        self.table = table
        self.cond1: Dict[int, Q] = {}
        self.pair: Dict[Tuple[int, int], Q] = {}
        for c in table.unselected:
            total = ZERO
            for i in table.sup[c]:
                if residuals[i]:
                    total += residuals[i]
            self.cond1[c] = total
        for key, res in table.res_slot.items():
            cp = key[1]
            total = ZERO
            for i in res:
                if residuals[i]:
                    total += residuals[i]
            for i in table.pay_slot[key]:
                v = payments[i].get(cp)
                if v:
                    total += v
            self.pair[key] = total

    def residual_delta(self, i: int, dr: Q) -> None:
        for c in self.table.cond1_touch[i]:
            self.cond1[c] += dr
        for key in self.table.res_pair_touch[i]:
            self.pair[key] += dr

    def payment_delta(self, i: int, cp: int, dp: Q) -> None:
        for key in self.table.pay_pair_touch.get((i, cp), ()):
            self.pair[key] += dp

    def verify(self, payments, residuals) -> None:
        fresh = _Values(self.table, payments, residuals)
        assert fresh.cond1 == self.cond1 and fresh.pair == self.pair


def money_flow(
    profile: ApprovalProfile,
    active: Set[int],
    remaining_cost: Dict[int, Q],
    remaining: Set[int],
) -> Dict[int, FrozenSet[int]]:
    """Spending sets by iterative covering.

    Voters with no approved remaining candidate get an empty set. Otherwise,
    repeatedly pick the candidates minimizing remaining cost per unassigned
    supporter and assign every unassigned voter intersecting that argmin set.
    """
    sup = {c: profile.supporters(c) for c in remaining}
    return _money_flow_lex(profile, sup, active, remaining_cost, {}, remaining)


def _money_flow_lex(
    profile: ApprovalProfile,
    sup: Dict[int, FrozenSet[int]],
    active: Set[int],
    h: Dict[int, Q],
    h_rate: Dict[int, Q],
    remaining: Set[int],
    record_layers: Optional[list] = None,
) -> Dict[int, FrozenSet[int]]:
    """Iterative covering; ties in the cost ratio break by its decline rate.

    With an empty h_rate this is the plain time-zero covering. With rates it
    compares (h_c / count, rate_c / count) lexicographically, i.e. the ratio
    an instant later, which stabilizes assignments whose time-zero ratios tie
    but immediately separate.
    """
    spending: Dict[int, FrozenSet[int]] = {}
    vstar = set()
    for i in active:
        if profile.approvals[i] & remaining:
            vstar.add(i)
        else:
            spending[i] = frozenset()
    while vstar:
        best = None
        argmin: List[int] = []
        layer = []
        for c in remaining:
            count = len(sup[c] & vstar)
            if count == 0:
                continue
            key = (h[c] / count, h_rate.get(c, ZERO) / count)
            if record_layers is not None:
                layer.append((c, count))
            if best is None or key < best:
                best, argmin = key, [c]
            elif key == best:
                argmin.append(c)
        if record_layers is not None:
            record_layers.append(layer)
        chosen = frozenset(argmin)
        assigned = [i for i in vstar if profile.approvals[i] & chosen]
        for i in assigned:
            spending[i] = profile.approvals[i] & chosen
        vstar -= set(assigned)
    return spending


def _check_blocking(
    table: _ConstraintTable,
    active: Set[int],
    exempt: Set[int],
    spending: Dict[int, FrozenSet[int]],
    values: _Values,
    at_least: bool = False,
    slack: Q = ZERO,
) -> Set[int]:
    if at_least:
        def tight(v):
            return v >= ONE
    elif slack:
        threshold = ONE - slack

        def tight(v):
            return v >= threshold
    else:
        def tight(v):
            return v == ONE

    blocked: Set[int] = set()
    for c in table.unselected:
        if tight(values.cond1[c]):
            for i in table.sup[c] & active:
                if i not in exempt and not spending.get(i):
                    blocked.add(i)
    for key, res in table.res_slot.items():
        if not tight(values.pair[key]):
            continue
        cp = key[1]
        for i in res:
            if i in active and i not in exempt and not spending.get(i):
                blocked.add(i)
        for i in table.pay_slot[key]:
            if i in active and i not in exempt and cp in spending.get(i, frozenset()):
                blocked.add(i)
    return blocked


def check_blocking(
    profile: ApprovalProfile,
    committee,
    active: Set[int],
    critical: Set[int],
    payments: List[Dict[int, Q]],
    residuals: List[Q],
    spending: Dict[int, FrozenSet[int]],
    at_least: bool = False,
) -> Set[int]:
    """Active voters sitting on a tight 1-stability constraint in the role
    about to grow: residual growers (empty spending set) via their residual
    slot, spenders via a candidate in their spending set. Voters approving a
    critical candidate are exempt.

    `at_least` relaxes the tightness test from ==1 to >=1 (used by the
    epsilon-step oracle, whose values overshoot by fractions of a step).
    """
    committee = ensure_committee(profile, committee)
    table = _ConstraintTable(profile, committee)
    values = _Values(table, payments, residuals)
    exempt = {i for i in active if profile.approvals[i] & critical} if critical else set()
    return _check_blocking(table, active, exempt, spending, values, at_least)


def _initial_state(profile: ApprovalProfile, committee: Committee) -> PhragmenState:
    members = tuple(sorted(committee))
    return PhragmenState(
        committee=members,
        remaining_cost={c: ONE for c in members},
        active=set(range(profile.n)),
        blocked=set(),
        critical=set(),
        remaining=set(members),
        spending={},
        payments=[{} for _ in range(profile.n)],
        residuals=[ZERO] * profile.n,
    )


def _budgets(payments: List[Dict[int, Q]], residuals: List[Q]) -> List[Q]:
    return [residuals[i] + sum(payments[i].values(), ZERO) for i in range(len(residuals))]


def _to_price_system(profile, committee, payments, residuals) -> PriceSystem:
    pay = {(i, c): v for i in range(profile.n) for c, v in payments[i].items() if v != 0}
    return PriceSystem(committee=frozenset(committee), payments=pay, residuals=list(residuals))


def _cost_rates(spending: Dict[int, FrozenSet[int]], remaining: Set[int]) -> Dict[int, Q]:
    rates = {c: ZERO for c in remaining}
    for i, cands in spending.items():
        if not cands:
            continue
        share = rat(1, len(cands))
        for c in cands:
            rates[c] -= share
    return rates


def _refined_money_flow(profile, table, state: PhragmenState) -> Dict[int, FrozenSet[int]]:
    """Iterate the slope-refined assignment to a fixed point.

    Plain money flow splits time-zero ties; when the induced rates immediately
    break such a tie the epsilon-limit locks onto the refined assignment
    instead. Cycles (genuine sliding between assignments) fall back to the
    plain time-zero split.
    """
    sup = {c: table.sup[c] for c in state.remaining}
    plain = _money_flow_lex(profile, sup, state.active, state.remaining_cost, {}, state.remaining)
    current = plain
    seen = set()
    for _ in range(profile.n + len(state.committee) + 4):
        rates = _cost_rates(current, state.remaining)
        refined = _money_flow_lex(
            profile, sup, state.active, state.remaining_cost, rates, state.remaining
        )
        if refined == current:
            return current
        key = tuple(sorted((i, tuple(sorted(s))) for i, s in refined.items()))
        if key in seen:
            return plain
        seen.add(key)
        current = refined
    return plain


def _exempt_voters(profile, state: PhragmenState) -> Set[int]:
    if not state.critical:
        return set()
    return {i for i in state.active if profile.approvals[i] & state.critical}


def _plan(profile, state: PhragmenState, table: _ConstraintTable, values: _Values,
          slack: Q = ZERO) -> None:
    """Planning fixed point: money flow, blocking, critical promotion."""
    for _ in range(profile.n + len(state.committee) + 4):
        spending = _refined_money_flow(profile, table, state)
        newly = _check_blocking(
            table, state.active, _exempt_voters(profile, state), spending, values,
            slack=slack,
        )
        changed = False
        if newly:
            state.blocked |= newly
            state.active -= newly
            changed = True
        unsupported = {c for c in state.remaining if not (table.sup[c] & state.active)}
        if unsupported - state.critical:
            state.critical |= unsupported
            freed = set().union(*(table.sup[c] for c in unsupported))
            state.active |= freed
            state.blocked -= freed
            changed = True
        if not changed and spending == state.spending:
            return
        state.spending = spending
    raise AssertionError("planning fixed point did not stabilize within its bound")


def _phase_rates(profile, state: PhragmenState, table: _ConstraintTable, values: _Values):
    """Per-voter residual rates (growth or pruning decay) and payment rates.

    A swap constraint sitting exactly at 1 while exempted critical supporters
    keep paying into it is pinned: residuals on its residual slot scale down
    uniformly so the constraint stays at 1. With several pinned constraints
    per voter the strongest demanded decay wins.
    """
    res_growth: Dict[int, Q] = {}
    pay_rate: Dict[Tuple[int, int], Q] = {}
    for i in state.active:
        cands = state.spending.get(i, frozenset())
        if cands:
            share = rat(1, len(cands))
            for c in cands:
                pay_rate[(i, c)] = share
        else:
            res_growth[i] = ONE
    # growth pressure per swap constraint, via adjacency
    pair_growth: Dict[Tuple[int, int], Q] = {}
    for i, r in res_growth.items():
        for key in table.res_pair_touch[i]:
            pair_growth[key] = pair_growth.get(key, ZERO) + r
    for (i, cp), pr in pay_rate.items():
        for key in table.pay_pair_touch.get((i, cp), ()):
            pair_growth[key] = pair_growth.get(key, ZERO) + pr
    decay: Dict[int, Q] = {}
    demanded: Set[int] = set()
    shared_pin = False
    for key, growth in pair_growth.items():
        if growth <= 0 or values.pair[key] != ONE:
            continue
        res_slot = table.res_slot[key]
        pool = ZERO
        for i in res_slot:
            pool += state.residuals[i]
        assert pool > 0, "pinned swap constraint with an empty residual pool"
        for i in res_slot:
            if state.residuals[i] == 0:
                continue
            if i in demanded:
                # two pinned constraints prune the same voter: the proportional
                # per-pair rates are no longer exact (sliding regime)
                shared_pin = True
            demanded.add(i)
            want = growth * state.residuals[i] / pool
            if want > decay.get(i, ZERO):
                decay[i] = want
    net_res = dict(res_growth)
    for i, d in decay.items():
        assert i not in res_growth, "voter cannot grow and decay at once"
        net_res[i] = -d
    return net_res, pay_rate, shared_pin


def _next_event(profile, state: PhragmenState, table: _ConstraintTable, values: _Values,
                net_res, pay_rate):
    """Largest exact time step before any event.

    Events: a remaining candidate fully paid; a constraint strictly below 1
    reaching 1 while something pushes it; a decaying residual reaching zero;
    the money-flow covering order changing (a cost-ratio crossing).
    """
    best: Optional[Q] = None

    def consider(dt: Q):
        nonlocal best
        if dt > 0 and (best is None or dt < best):
            best = dt

    h_rate = _cost_rates(state.spending, state.remaining)
    for c in state.remaining:
        rate = h_rate.get(c, ZERO)
        if rate < 0:
            consider(state.remaining_cost[c] / -rate)
    cond1_rate: Dict[int, Q] = {}
    pair_rate: Dict[Tuple[int, int], Q] = {}
    for i, r in net_res.items():
        if not r:
            continue
        for c in table.cond1_touch[i]:
            cond1_rate[c] = cond1_rate.get(c, ZERO) + r
        for key in table.res_pair_touch[i]:
            pair_rate[key] = pair_rate.get(key, ZERO) + r
    for (i, cp), pr in pay_rate.items():
        for key in table.pay_pair_touch.get((i, cp), ()):
            pair_rate[key] = pair_rate.get(key, ZERO) + pr
    for c, rate in cond1_rate.items():
        if rate > 0:
            value = values.cond1[c]
            if value < ONE:
                consider((ONE - value) / rate)
    for key, rate in pair_rate.items():
        if rate > 0:
            value = values.pair[key]
            if value < ONE:
                consider((ONE - value) / rate)
    for i, r in net_res.items():
        if r < 0:
            consider(state.residuals[i] / -r)
    # cost-ratio crossings that would reorder the covering
    layers: List[List[Tuple[int, int]]] = []
    sup = {c: table.sup[c] for c in state.remaining}
    _money_flow_lex(
        profile, sup, state.active, state.remaining_cost, h_rate, state.remaining,
        record_layers=layers,
    )
    horizon = best
    for layer in layers:
        for a in range(len(layer)):
            c1, k1 = layer[a]
            h1, r1 = state.remaining_cost[c1], h_rate.get(c1, ZERO)
            for b in range(a + 1, len(layer)):
                c2, k2 = layer[b]
                h2, r2 = state.remaining_cost[c2], h_rate.get(c2, ZERO)
                denom = r1 * k2 - r2 * k1
                if denom == 0:
                    continue
                t = (h2 * k1 - h1 * k2) / denom
                if t > 0 and (horizon is None or t <= horizon):
                    consider(t)
    return best


def _advance(state: PhragmenState, values: _Values, dt: Q, net_res, pay_rate) -> None:
    state.elapsed += dt
    state.money_in += dt * len(state.active)
    for i, r in net_res.items():
        if r:
            delta = dt * r
            state.residuals[i] += delta
            values.residual_delta(i, delta)
            if r < 0:
                state.pruned_mass += -delta
            assert state.residuals[i] >= 0
    for (i, c), r in pay_rate.items():
        amount = dt * r
        state.payments[i][c] = state.payments[i].get(c, ZERO) + amount
        state.remaining_cost[c] -= amount
        values.payment_delta(i, c, amount)
    for c in state.remaining:
        assert state.remaining_cost[c] >= 0


def _verify_one_stability(state: PhragmenState, table: _ConstraintTable, values: _Values) -> None:
    for c in table.unselected:
        assert values.cond1[c] <= ONE
    for key in table.res_slot:
        assert values.pair[key] <= ONE


_SLIDING_STEP = rat(1, 4096)
_SLIDING_CAP = 10**6
_SNAP_BITS = 48
_SNAP_DEN = 1 << _SNAP_BITS


def _snap_down(x: Q) -> Q:
    """Largest multiple of 2^-48 that is <= x (x nonnegative)."""
    return Q(int(x * _SNAP_DEN), _SNAP_DEN)


def _sliding_substeps(profile, state: PhragmenState, table: _ConstraintTable,
                      values: _Values) -> None:
    """Fixed-step integration through a sliding regime.

    Swap constraints interacting through shared pruned voters make the
    continuum limit a sliding mode: which of them hover at 1 and which get
    pushed strictly below decides who keeps earning, and per-constraint decay
    rates cannot express that. This integrator follows the literal loop at a
    small exact step: spend, prune multiplicatively, then replan. Blocking is
    evaluated on post-pruning values (with a 2^-40 tolerance band matching the
    residual snapping), so a constraint held strictly below 1 by cross-pruning
    keeps its voters active, exactly like the epsilon-step process.

    Pruned residuals are snapped down to the 2^-48 grid (the sliver joins the
    pruned mass). Rounding down preserves every <= constraint and treats equal
    residuals identically, and it stops the pruning factors from compounding
    into unboundedly long rationals. Returns at the next hard change: a
    candidate completes or the blocked/critical sets move.
    """
    for i in range(profile.n):
        r = state.residuals[i]
        if r and r.denominator > _SNAP_DEN:
            snapped = _snap_down(r)
            if snapped != r:
                state.residuals[i] = snapped
                values.residual_delta(i, snapped - r)
                state.pruned_mass += r - snapped
    slack = Q(1, 1 << 40)
    sup = {c: table.sup[c] for c in state.remaining}
    for _ in range(_SLIDING_CAP):
        before = (len(state.blocked), len(state.critical), len(state.remaining))
        # refresh spending sets without blocking; blocking waits until the
        # post-pruning state at the end of the step
        state.spending = _money_flow_lex(
            profile, sup, state.active, state.remaining_cost, {}, state.remaining
        )
        res_growth: Dict[int, Q] = {}
        pay_rate: Dict[Tuple[int, int], Q] = {}
        for i in state.active:
            cands = state.spending.get(i, frozenset())
            if cands:
                share = rat(1, len(cands))
                for c in cands:
                    pay_rate[(i, c)] = share
            else:
                res_growth[i] = ONE
        step = _SLIDING_STEP
        h_rate = _cost_rates(state.spending, state.remaining)
        for c in state.remaining:
            rate = h_rate.get(c, ZERO)
            if rate < 0:
                step = min(step, state.remaining_cost[c] / -rate)
        # residual-stability sums have no pruning mechanism: clamp the step so
        # they never cross 1 (swap constraints may overshoot and get pruned),
        # and block growers already sitting on a tight sum before stepping
        cond1_rate: Dict[int, Q] = {}
        for i in res_growth:
            for c in table.cond1_touch[i]:
                cond1_rate[c] = cond1_rate.get(c, ZERO) + ONE
        pre_blocked: Set[int] = set()
        for c, rate in cond1_rate.items():
            gap = ONE - values.cond1[c]
            if gap <= slack:
                for i in table.sup[c]:
                    if i in res_growth:
                        pre_blocked.add(i)
            else:
                step = min(step, gap / rate)
        if pre_blocked:
            state.blocked |= pre_blocked
            state.active -= pre_blocked
            return
        assert step > 0
        state.elapsed += step
        state.money_in += step * len(state.active)
        for i in res_growth:
            state.residuals[i] += step
            values.residual_delta(i, step)
        for (i, c), r in pay_rate.items():
            amount = step * r
            state.payments[i][c] = state.payments[i].get(c, ZERO) + amount
            state.remaining_cost[c] -= amount
            values.payment_delta(i, c, amount)
        # literal pruning: scale residual slots of any exceeded swap constraint
        scale: Dict[int, Q] = {}
        for key, res_slot in table.res_slot.items():
            delta = values.pair[key] - ONE
            if delta <= 0:
                continue
            pool = ZERO
            for i in res_slot:
                pool += state.residuals[i]
            assert pool > 0
            factor = ONE - delta / pool
            for i in res_slot:
                if factor < scale.get(i, ONE):
                    scale[i] = factor
        for i, factor in scale.items():
            old = state.residuals[i]
            new = _snap_down(old * factor)
            if new != old:
                state.residuals[i] = new
                values.residual_delta(i, new - old)
                state.pruned_mass += old - new
        done = {c for c in state.remaining if state.remaining_cost[c] == 0}
        if done:
            state.remaining -= done
            state.critical &= state.remaining
            return
        _plan(profile, state, table, values, slack=slack)
        if (len(state.blocked), len(state.critical), len(state.remaining)) != before:
            return
    raise AssertionError("sliding regime did not resolve within the substep cap")


def _tangled_pairs(state: PhragmenState, table: _ConstraintTable, values: _Values) -> bool:
    """True when several swap constraints sit exactly at 1, share a residual
    slot voter, and something is still moving (an active voter in a slot or a
    payment flowing into one of their committee members). Which of them stays
    pinned is then a sliding-mode question for the fixed-step integrator."""
    at_one = [key for key, v in values.pair.items() if v == ONE]
    if len(at_one) < 2:
        return False
    seen: Dict[int, int] = {}
    shared = False
    for idx, key in enumerate(at_one):
        for i in table.res_slot[key]:
            if i in seen and seen[i] != idx:
                shared = True
                break
            seen[i] = idx
        if shared:
            break
    if not shared:
        return False
    for key in at_one:
        cp = key[1]
        if any(i in state.active for i in table.res_slot[key]):
            return True
        if cp in state.remaining:
            for i in table.pay_slot[key]:
                if i in state.active and cp in state.spending.get(i, frozenset()):
                    return True
    return False


def continuous_phragmen(
    profile: ApprovalProfile, committee, with_state: bool = False
):
    """Event-driven limit of the continuous rule, then the residual phase.

    with_state additionally returns the final PhragmenState (conservation
    diagnostics for tests).
    """
    committee = ensure_committee(profile, committee)
    state = _initial_state(profile, committee)
    table = _ConstraintTable(profile, committee)
    values = _Values(table, state.payments, state.residuals)
    cross_check = profile.n * profile.m <= 400
    max_phases = 60 * (profile.n + profile.m) * (len(state.committee) + 1)
    phases = 0
    tiny_streak = 0
    tiny = rat(1, 1 << 20)
    slide_now = False
    while state.remaining:
        phases += 1
        if phases > max_phases:
            raise AssertionError("continuous phragmen exceeded its phase bound")
        if slide_now or tiny_streak >= 6:
            _sliding_substeps(profile, state, table, values)
            tiny_streak = 0
            slide_now = False
        else:
            _plan(profile, state, table, values)
            net_res, pay_rate, shared_pin = _phase_rates(profile, state, table, values)
            if shared_pin:
                _sliding_substeps(profile, state, table, values)
                tiny_streak = 0
                continue
            dt = _next_event(profile, state, table, values, net_res, pay_rate)
            assert dt is not None, "no progress possible with candidates remaining"
            if dt.denominator.bit_length() > 4096:
                # event gaps are collapsing into a sliding mode; do not advance,
                # let the fixed-step integrator take this stretch
                slide_now = True
                continue
            _advance(state, values, dt, net_res, pay_rate)
            state.remaining = {c for c in state.remaining if state.remaining_cost[c] > 0}
            state.critical &= state.remaining
            if _tangled_pairs(state, table, values):
                slide_now = True
            if dt < tiny and state.critical:
                tiny_streak += 1
            else:
                tiny_streak = 0
        if cross_check:
            values.verify(state.payments, state.residuals)
        _verify_one_stability(state, table, values)
    state.held_after_main = sum(_budgets(state.payments, state.residuals), ZERO)
    _distribute_residual_inplace(profile, state.payments, state.residuals, table)
    ps = _to_price_system(profile, state.committee, state.payments, state.residuals)
    if with_state:
        return ps, state
    return ps


def equal_split(profile: ApprovalProfile, committee) -> PriceSystem:
    """Split each member's unit cost equally over its supporters, then run the
    shared residual phase."""
    committee = ensure_committee(profile, committee)
    payments: List[Dict[int, Q]] = [{} for _ in range(profile.n)]
    for c in sorted(committee):
        sup = profile.supporters(c)
        share = rat(1, len(sup))
        for i in sup:
            payments[i][c] = share
    residuals = [ZERO] * profile.n
    table = _ConstraintTable(profile, committee)
    _distribute_residual_inplace(profile, payments, residuals, table)
    return _to_price_system(profile, tuple(sorted(committee)), payments, residuals)


def distribute_residual(profile: ApprovalProfile, ps: PriceSystem) -> PriceSystem:
    """Residual phase on an existing system: raise the residuals of the lowest
    budget unblocked voters until 1-stability or the running maximum stops them."""
    committee = ensure_committee(profile, ps.committee)
    payments: List[Dict[int, Q]] = [{} for _ in range(profile.n)]
    for (i, c), v in ps.payments.items():
        payments[i][c] = Q(v)
    residuals = [Q(r) for r in ps.residuals]
    table = _ConstraintTable(profile, committee)
    _distribute_residual_inplace(profile, payments, residuals, table)
    return _to_price_system(profile, tuple(sorted(committee)), payments, residuals)


def _distribute_residual_inplace(profile, payments, residuals, table) -> None:
    n = profile.n
    active = set(range(n))
    budgets = _budgets(payments, residuals)
    values = _Values(table, payments, residuals)
    empty: Dict[int, FrozenSet[int]] = {}
    for _ in range(4 * n + 8):
        newly = _check_blocking(table, active, set(), empty, values)
        active -= newly
        if not active:
            return
        max_budget = max(budgets)
        min_budget = min(budgets[i] for i in active)
        if min_budget >= max_budget:
            return
        grower_set = {i for i in active if budgets[i] == min_budget}
        steps = [max_budget - min_budget]
        higher = [budgets[i] - min_budget for i in active if budgets[i] > min_budget]
        if higher:
            steps.append(min(higher))
        cond1_rate: Dict[int, int] = {}
        pair_rate: Dict[Tuple[int, int], int] = {}
        for i in grower_set:
            for c in table.cond1_touch[i]:
                cond1_rate[c] = cond1_rate.get(c, 0) + 1
            for key in table.res_pair_touch[i]:
                pair_rate[key] = pair_rate.get(key, 0) + 1
        for c, rate in cond1_rate.items():
            steps.append((ONE - values.cond1[c]) / rate)
        for key, rate in pair_rate.items():
            steps.append((ONE - values.pair[key]) / rate)
        dt = min(steps)
        assert dt > 0
        for i in grower_set:
            residuals[i] += dt
            budgets[i] += dt
            values.residual_delta(i, dt)
    raise AssertionError("residual phase exceeded its event bound")


def micro_step_oracle(
    profile: ApprovalProfile,
    committee,
    epsilon,
    max_steps: int = 10**6,
) -> PriceSystem:
    """Literal epsilon-step execution of the continuous rule, used as a test
    oracle: its output converges to continuous_phragmen's as epsilon -> 0.

    Each step replans from scratch, spends/earns epsilon, applies the
    multiplicative residual pruning, and finally runs an epsilon-step residual
    phase. Tightness checks use >= 1 since discrete values overshoot. Values
    are recomputed from the raw payments and residuals every step, keeping the
    oracle independent of the event engine's caching.
    """
    committee = ensure_committee(profile, committee)
    eps = Q(epsilon)
    if not 0 < eps <= rat(1, 10):
        raise ValueError("epsilon must be in (0, 1/10]")
    state = _initial_state(profile, committee)
    table = _ConstraintTable(profile, committee)
    sup_all = {c: table.sup[c] for c in state.committee}
    steps = 0
    while state.remaining:
        steps += 1
        if steps > max_steps:
            raise StepBudgetExceeded(f"exceeded {max_steps} steps")
        for _ in range(profile.n + len(state.committee) + 4):
            sup = {c: sup_all[c] for c in state.remaining}
            spending = _money_flow_lex(
                profile, sup, state.active, state.remaining_cost, {}, state.remaining
            )
            values = _Values(table, state.payments, state.residuals)
            newly = _check_blocking(
                table, state.active, _exempt_voters(profile, state), spending, values,
                at_least=True,
            )
            changed = False
            if newly:
                state.blocked |= newly
                state.active -= newly
                changed = True
            unsupported = {c for c in state.remaining if not (table.sup[c] & state.active)}
            if unsupported - state.critical:
                state.critical |= unsupported
                freed = set().union(*(table.sup[c] for c in unsupported))
                state.active |= freed
                state.blocked -= freed
                changed = True
            if not changed and spending == state.spending:
                break
            state.spending = spending
        for i in state.active:
            cands = state.spending.get(i, frozenset())
            if cands:
                share = eps / len(cands)
                for c in cands:
                    state.payments[i][c] = state.payments[i].get(c, ZERO) + share
                    state.remaining_cost[c] -= share
            else:
                state.residuals[i] += eps
        scale = [ONE] * profile.n
        for key, res_slot in table.res_slot.items():
            cp = key[1]
            value = ZERO
            for i in res_slot:
                if state.residuals[i]:
                    value += state.residuals[i]
            for i in table.pay_slot[key]:
                v = state.payments[i].get(cp)
                if v:
                    value += v
            delta = value - ONE
            if delta <= 0:
                continue
            pool = ZERO
            for i in res_slot:
                pool += state.residuals[i]
            if pool <= 0:
                continue
            factor = ONE - delta / pool
            for i in res_slot:
                if factor < scale[i]:
                    scale[i] = factor
        for i in range(profile.n):
            if scale[i] != ONE:
                state.residuals[i] *= scale[i]
        state.remaining = {c for c in state.remaining if state.remaining_cost[c] > 0}
        state.critical &= state.remaining
    active = set(range(profile.n))
    budgets = _budgets(state.payments, state.residuals)
    empty: Dict[int, FrozenSet[int]] = {}
    while active:
        steps += 1
        if steps > max_steps:
            raise StepBudgetExceeded(f"exceeded {max_steps} steps")
        values = _Values(table, state.payments, state.residuals)
        newly = _check_blocking(table, active, set(), empty, values, at_least=True)
        active -= newly
        if not active:
            break
        max_budget = max(budgets)
        min_budget = min(budgets[i] for i in active)
        if min_budget >= max_budget:
            break
        for i in active:
            if budgets[i] == min_budget:
                state.residuals[i] += eps
                budgets[i] += eps
    return _to_price_system(profile, state.committee, state.payments, state.residuals)


RULES = {
    "cont-phragmen": continuous_phragmen,
    "equal-split": equal_split,
}


def get_rule(name: str):
    """Resolve a rule identifier ('cont-phragmen', 'equal-split', 'approx-price')."""
    if name in RULES:
        return RULES[name]
    if name == "approx-price":
        from .optimize import approximate_priceability

        return approximate_priceability
    raise KeyError(f"unknown rule id {name!r}")
