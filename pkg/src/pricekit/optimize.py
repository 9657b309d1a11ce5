"""Exact rational linear programming and the LP-based approximate priceability rule.

The simplex here runs entirely over exact rationals with Bland's anti-cycling
pivot rule, so feasibility answers and optima are certificates, not estimates.
In particular "objective equals zero" is a crisp priceability test.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .core import ApprovalProfile, Committee, PriceSystem, ensure_committee
from .rational import ExactRational, ONE, ZERO, rat
from .rules import equal_split

Q = ExactRational


@dataclass
class LinearProgram:
    """Minimization LP over nonnegative variables.

    Rows are (coefficients by variable index, sense, rhs) with sense one of
    '<=', '==', '>='. The objective maps variable index to coefficient.
    """

    names: List[str] = field(default_factory=list)
    objective: Dict[int, Q] = field(default_factory=dict)
    rows: List[Tuple[Dict[int, Q], str, Q]] = field(default_factory=list)

    def add_var(self, name: str) -> int:
        self.names.append(name)
        return len(self.names) - 1

    def add_row(self, coeffs: Dict[int, Q], sense: str, rhs) -> None:
        if sense not in ("<=", "==", ">="):
            raise ValueError(f"bad sense {sense!r}")
        self.rows.append((dict(coeffs), sense, Q(rhs)))

    def to_text(self) -> str:
        """Plain-text standard form for debugging."""
        lines = ["vars: " + " ".join(self.names)]
        obj = " + ".join(f"{v}*{self.names[j]}" for j, v in sorted(self.objective.items()))
        lines.append("min " + (obj or "0"))
        for coeffs, sense, rhs in self.rows:
            expr = " + ".join(f"{v}*{self.names[j]}" for j, v in sorted(coeffs.items()))
            lines.append(f"{expr or '0'} {sense} {rhs}")
        return "\n".join(lines)


@dataclass
class LPResult:
    status: str  # optimal | infeasible | unbounded
    solution: Optional[List[Q]] = None
    objective: Optional[Q] = None


def _pivot(tableau: List[List[Q]], basis: List[int], row: int, col: int) -> None:
    piv_row = tableau[row]
    inv = ONE / piv_row[col]
    if inv != ONE:
        tableau[row] = piv_row = [v * inv for v in piv_row]
    for r, current in enumerate(tableau):
        if r == row:
            continue
        factor = current[col]
        if factor == 0:
            continue
        tableau[r] = [a - factor * b if b else a for a, b in zip(current, piv_row)]
    basis[row] = col


def _run_simplex(tableau: List[List[Q]], basis: List[int], cost: List[Q]) -> Tuple[str, List[Q]]:
    """Minimize cost over the tableau; cost has one entry per column plus the
    current negated objective in the last slot.

    Pivots use Dantzig's rule (most negative reduced cost) while the objective
    keeps moving, and fall back to Bland's rule after a run of degenerate
    pivots so cycling is impossible. Deterministic for a fixed column order.
    """
    ncols = len(cost) - 1
    stalled = 0
    while True:
        entering = -1
        if stalled < 30:
            best = ZERO
            for j in range(ncols):
                cj = cost[j]
                if cj < best:
                    best, entering = cj, j
        else:  # Bland: first improving column
            for j in range(ncols):
                if cost[j] < 0:
                    entering = j
                    break
        if entering < 0:
            return "optimal", cost
        leaving = -1
        best_ratio = None
        for r, row in enumerate(tableau):
            a = row[entering]
            if a > 0:
                ratio = row[-1] / a
                if best_ratio is None or ratio < best_ratio or (
                    ratio == best_ratio and basis[r] < basis[leaving]
                ):
                    best_ratio, leaving = ratio, r
        if leaving < 0:
            return "unbounded", cost
        stalled = stalled + 1 if best_ratio == 0 else 0
        _pivot(tableau, basis, leaving, entering)
        piv = tableau[leaving]
        factor = cost[entering]
        if factor != 0:
            for j in range(len(cost)):
                if piv[j]:
                    cost[j] -= factor * piv[j]


def solve_lp_exact(lp: LinearProgram) -> LPResult:
    """Two-phase exact simplex. Deterministic for a fixed variable/row order."""
    nvars = len(lp.names)
    rows = []
    senses = []
    for coeffs, sense, rhs in lp.rows:
        if rhs < 0 or (rhs == 0 and sense == ">="):
            # normalize so '<=' rows keep a plain slack basis (no artificial)
            coeffs = {j: -v for j, v in coeffs.items()}
            sense = {"<=": ">=", ">=": "<=", "==": "=="}[sense]
            rhs = -rhs
        rows.append((coeffs, rhs))
        senses.append(sense)
    nslack = sum(1 for s in senses if s in ("<=", ">="))
    total = nvars + nslack + len(rows)  # slacks then one artificial per row
    tableau: List[List[Q]] = []
    basis: List[int] = []
    slack_at = nvars
    art_at = nvars + nslack
    for r, ((coeffs, rhs), sense) in enumerate(zip(rows, senses)):
        line = [ZERO] * (total + 1)
        for j, v in coeffs.items():
            line[j] = Q(v)
        if sense == "<=":
            line[slack_at] = ONE
            slack_col = slack_at
            slack_at += 1
        elif sense == ">=":
            line[slack_at] = -ONE
            slack_col = None
            slack_at += 1
        else:
            slack_col = None
        line[-1] = rhs
        if sense == "<=":
            basis.append(slack_col)
            line[art_at + r] = ZERO
        else:
            line[art_at + r] = ONE
            basis.append(art_at + r)
        tableau.append(line)
    # phase 1: minimize sum of artificials
    cost = [ZERO] * (total + 1)
    for r in range(len(rows)):
        if basis[r] >= art_at:
            for j in range(total + 1):
                if tableau[r][j]:
                    cost[j] -= tableau[r][j]
    for r in range(len(rows)):
        if basis[r] >= art_at:
            cost[basis[r]] = ZERO
    status, cost = _run_simplex(tableau, basis, cost)
    assert status == "optimal", "phase 1 cannot be unbounded"
    if -cost[-1] != 0:
        return LPResult("infeasible")
    # drive any artificial still in the basis out (or drop its redundant row)
    for r in range(len(tableau)):
        if basis[r] >= art_at:
            pivot_col = -1
            for j in range(art_at):
                if tableau[r][j] != 0:
                    pivot_col = j
                    break
            if pivot_col >= 0:
                _pivot(tableau, basis, r, pivot_col)
    keep = [r for r in range(len(tableau)) if basis[r] < art_at]
    tableau = [tableau[r][:art_at] + [tableau[r][-1]] for r in keep]
    basis = [basis[r] for r in keep]
    # phase 2
    cost = [ZERO] * (art_at + 1)
    for j, v in lp.objective.items():
        cost[j] = Q(v)
    for r, b in enumerate(basis):
        factor = cost[b]
        if factor != 0:
            for j in range(art_at + 1):
                if tableau[r][j]:
                    cost[j] -= factor * tableau[r][j]
    status, cost = _run_simplex(tableau, basis, cost)
    if status == "unbounded":
        return LPResult("unbounded")
    solution = [ZERO] * nvars
    for r, b in enumerate(basis):
        if b < nvars:
            solution[b] = tableau[r][-1]
    objective = sum((Q(v) * solution[j] for j, v in lp.objective.items()), ZERO)
    return LPResult("optimal", solution, objective)


def _feasibility_vars(lp: LinearProgram, profile: ApprovalProfile, committee: Committee):
    members = sorted(committee)
    pvar: Dict[Tuple[int, int], int] = {}
    for c in members:
        for i in sorted(profile.supporters(c)):
            pvar[(i, c)] = lp.add_var(f"p_{i}_{c}")
    rvar = [lp.add_var(f"r_{i}") for i in range(profile.n)]
    for c in members:
        lp.add_row({pvar[(i, c)]: ONE for i in sorted(profile.supporters(c))}, "==", ONE)
    for c in range(profile.m):
        if c in committee:
            continue
        lp.add_row({rvar[i]: ONE for i in sorted(profile.supporters(c))}, "<=", ONE)
    return pvar, rvar


def _solution_to_ps(profile, committee, pvar, rvar, solution) -> PriceSystem:
    payments = {}
    for (i, c), j in pvar.items():
        if solution[j] != 0:
            payments[(i, c)] = solution[j]
    residuals = [solution[rvar[i]] for i in range(profile.n)]
    return PriceSystem(committee=frozenset(committee), payments=payments, residuals=residuals)


def uniform_budget_system(profile: ApprovalProfile, committee) -> Optional[PriceSystem]:
    """A budget-uniform residual-stable price system, or None if the committee
    is not priceable. Exact feasibility LP.

    Residuals are substituted out (r_i = B - total payment of i), which leaves
    artificial variables only on the funding equalities and keeps phase 1
    short.
    """
    committee = ensure_committee(profile, committee)
    lp = LinearProgram()
    pvar, rvar = _feasibility_vars(lp, profile, committee)
    bvar = lp.add_var("B")
    for i in range(profile.n):
        coeffs = {rvar[i]: ONE, bvar: -ONE}
        for c in sorted(committee):
            if (i, c) in pvar:
                coeffs[pvar[(i, c)]] = ONE
        lp.add_row(coeffs, "==", ZERO)
    result = solve_lp_exact(lp)
    if result.status != "optimal":
        return None
    return _solution_to_ps(profile, committee, pvar, rvar, result.solution)


def pairwise_budget_objective(budgets: List[Q]) -> Q:
    """Sum over voter pairs of |b_i - b_j| (each unordered pair once)."""
    ordered = sorted(budgets)
    total = ZERO
    running = ZERO
    for k, b in enumerate(ordered):
        total += k * b - running
        running += b
    return total


def _full_pairwise_lp(profile: ApprovalProfile, committee: Committee) -> PriceSystem:
    lp = LinearProgram()
    pvar, rvar = _feasibility_vars(lp, profile, committee)

    def budget_coeffs(i: int, sign: Q) -> Dict[int, Q]:
        coeffs = {rvar[i]: sign}
        for c in sorted(committee):
            if (i, c) in pvar:
                coeffs[pvar[(i, c)]] = sign
        return coeffs

    for i in range(profile.n):
        for j in range(i + 1, profile.n):
            d = lp.add_var(f"d_{i}_{j}")
            lp.objective[d] = ONE
            row = {d: ONE}
            for k, v in budget_coeffs(i, -ONE).items():
                row[k] = row.get(k, ZERO) + v
            for k, v in budget_coeffs(j, ONE).items():
                row[k] = row.get(k, ZERO) + v
            lp.add_row(row, ">=", ZERO)  # d >= b_i - b_j
            row = {d: ONE}
            for k, v in budget_coeffs(i, ONE).items():
                row[k] = row.get(k, ZERO) + v
            for k, v in budget_coeffs(j, -ONE).items():
                row[k] = row.get(k, ZERO) + v
            lp.add_row(row, ">=", ZERO)  # d >= b_j - b_i
    result = solve_lp_exact(lp)
    assert result.status == "optimal", "pairwise LP is always feasible"
    return _solution_to_ps(profile, committee, pvar, rvar, result.solution)


def _ordered_descent(profile: ApprovalProfile, committee: Committee, max_rounds: int = 24):
    """Exact coordinate descent over budget orderings.

    The pairwise objective is linear within each budget ordering, so we solve
    the ordering-constrained LP, re-sort, and repeat while the objective
    strictly improves. The result is residual-stable and ordering-locally
    optimal; optima of this rule are non-unique by design and only
    budget-level behavior is contractual.
    """
    n = profile.n
    members = sorted(committee)
    start = equal_split(profile, committee)
    best_budgets = start.budgets()
    best_value = pairwise_budget_objective(best_budgets)
    best_ps = start
    order = sorted(range(n), key=lambda i: (best_budgets[i], i))
    for _ in range(max_rounds):
        # budget-variable form: vars p and b, with r_i = b_i - total payment
        lp = LinearProgram()
        pvar: Dict[Tuple[int, int], int] = {}
        for c in members:
            for i in sorted(profile.supporters(c)):
                pvar[(i, c)] = lp.add_var(f"p_{i}_{c}")
        bvar = [lp.add_var(f"b_{i}") for i in range(n)]
        for c in members:
            lp.add_row({pvar[(i, c)]: ONE for i in sorted(profile.supporters(c))}, "==", ONE)
        for i in range(n):
            coeffs = {pvar[(i, c)]: ONE for c in members if (i, c) in pvar}
            coeffs[bvar[i]] = -ONE
            lp.add_row(coeffs, "<=", ZERO)  # r_i >= 0
        for cp in range(profile.m):
            if cp in committee:
                continue
            coeffs: Dict[int, Q] = {}
            for i in sorted(profile.supporters(cp)):
                coeffs[bvar[i]] = ONE
                for c in members:
                    if (i, c) in pvar:
                        coeffs[pvar[(i, c)]] = coeffs.get(pvar[(i, c)], ZERO) - ONE
            lp.add_row(coeffs, "<=", ONE)
        for pos in range(n - 1):
            lo, hi = order[pos], order[pos + 1]
            lp.add_row({bvar[lo]: ONE, bvar[hi]: -ONE}, "<=", ZERO)
        for pos, i in enumerate(order):
            lp.objective[bvar[i]] = Q(2 * (pos + 1) - 1 - n)
        result = solve_lp_exact(lp)
        assert result.status == "optimal"
        payments = {}
        totals = [ZERO] * n
        for (i, c), j in pvar.items():
            if result.solution[j] != 0:
                payments[(i, c)] = result.solution[j]
                totals[i] += result.solution[j]
        budgets = [result.solution[bvar[i]] for i in range(n)]
        ps = PriceSystem(
            committee=frozenset(committee),
            payments=payments,
            residuals=[budgets[i] - totals[i] for i in range(n)],
        )
        value = pairwise_budget_objective(budgets)
        if value < best_value:
            best_value, best_ps, best_budgets = value, ps, budgets
            order = sorted(range(n), key=lambda i: (budgets[i], i))
        else:
            break
    return best_ps


def approximate_priceability(
    profile: ApprovalProfile, committee, full_lp_max_n: int = 16
) -> PriceSystem:
    """Residual-stable price system with budgets as equal as possible.

    Minimizes the total absolute pairwise budget difference. Priceable
    committees (a budget-uniform residual-stable system exists) always get a
    budget-uniform output with objective exactly 0, decided by an exact
    feasibility LP. Otherwise the full pairwise LP is solved exactly up to
    full_lp_max_n voters, and an exact ordering-descent (documented in
    _ordered_descent) is used beyond that.
    """
    committee = ensure_committee(profile, committee)
    uniform = uniform_budget_system(profile, committee)
    if uniform is not None:
        return uniform
    if profile.n <= full_lp_max_n:
        return _full_pairwise_lp(profile, committee)
    return _ordered_descent(profile, committee)
