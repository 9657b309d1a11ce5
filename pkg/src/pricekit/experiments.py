"""Experiment harness: EJR+ vs budgets, and voter-weight recovery.

Every instance is generated from its own (seed, index) sub-stream and
processed independently, so the worker count never changes any output byte.
Rationals are rendered with 12 significant digits in the CSV; exact values go
to an optional sidecar document.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from multiprocessing import Pool
from typing import Dict, List, Optional, Sequence, Tuple

from .axioms.proportionality import min_alpha_ejr_plus
from .core import ApprovalProfile
from .gen import (
    gen_euclidean_vcr,
    gen_resampling_random_params,
    gen_spatial_weights,
    random_committee,
    substream,
    weighted_mes,
)
from .rational import ExactRational, format_rational
from .rules import get_rule

Q = ExactRational

PCC_THRESHOLDS = (0.4, 0.7, 0.9)


class LengthMismatch(ValueError):
    pass


class ConstantVector(ValueError):
    pass


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Sample Pearson correlation coefficient; raises on degenerate input."""
    if len(xs) != len(ys):
        raise LengthMismatch(f"{len(xs)} vs {len(ys)}")
    if len(xs) < 2:
        raise LengthMismatch("need at least two points")
    mx = sum(xs) / len(xs)
    my = sum(ys) / len(ys)
    sxx = sum((x - mx) ** 2 for x in xs)
    syy = sum((y - my) ** 2 for y in ys)
    if sxx == 0 or syy == 0:
        raise ConstantVector("a vector is constant")
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    return sxy / math.sqrt(sxx * syy)


def render_rational(q: Q) -> str:
    """Decimal rendering with 12 significant digits (plots need no exactness)."""
    with localcontext() as ctx:
        ctx.prec = 12
        d = Decimal(int(q.numerator)) / Decimal(int(q.denominator))
    return format(d, "f")


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str  # "ejr" | "recover"
    model: str = "euclidean-vcr"  # euclidean-vcr | resampling
    count: int = 200
    n_range: Tuple[int, int] = (10, 100)
    m_range: Tuple[int, int] = (10, 100)
    k_frac: Optional[Tuple[int, int]] = (1, 2)  # numerator, denominator of k/m
    k: Optional[int] = None
    rules: Tuple[str, ...] = ("cont-phragmen", "equal-split", "approx-price")
    seed: int = 1
    # spatial draws violating the support assumptions lose the offending
    # voters/candidates instead of being redrawn; redrawing skews radii up
    # and makes recovered influence look much stronger than it should
    euclidean_on_invalid: str = "drop" 


@dataclass
class ExperimentRow:
    instance: int
    n: int
    m: int
    k: int
    rule: str
    min_budget_fraction: Q
    ejr_alpha: Q
    pcc: Optional[float] = None
    pcc_undefined: bool = False

    def csv_cells(self, with_pcc: bool) -> List[str]:
        cells = [
            str(self.instance),
            str(self.n),
            str(self.m),
            str(self.k),
            self.rule,
            render_rational(self.min_budget_fraction),
            render_rational(self.ejr_alpha),
        ]
        if with_pcc:
            cells.append("" if self.pcc is None else repr(self.pcc))
        return cells


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    rows: List[ExperimentRow]
    failures: List[Tuple[int, str]]
    summary: Dict[str, Dict[str, float]] = field(default_factory=dict)

    def csv_text(self) -> str:
        with_pcc = self.config.kind == "recover"
        header = "instance,n,m,k,rule,min_budget_fraction,ejr_alpha"
        if with_pcc:
            header += ",pcc"
        lines = [header]
        for row in self.rows:
            lines.append(",".join(row.csv_cells(with_pcc)))
        return "\n".join(lines) + "\n"

    def sidecar(self) -> dict:
        return {
            "rows": [
                {
                    "instance": r.instance,
                    "rule": r.rule,
                    "min_budget_fraction": format_rational(r.min_budget_fraction),
                    "ejr_alpha": format_rational(r.ejr_alpha),
                }
                for r in self.rows
            ],
            "failures": [{"instance": i, "error": e} for i, e in self.failures],
            "summary": self.summary,
        }


def resolve_workers(requested: Optional[int] = None) -> int:
    cap = os.environ.get("PRICEKIT_THREADS")
    workers = requested if requested else (os.cpu_count() or 1)
    if cap:
        workers = min(workers, max(1, int(cap)))
    return max(1, workers)


def _committee_size(config: ExperimentConfig, m: int) -> int:
    if config.k is not None:
        k = min(config.k, m)
    else:
        num, den = config.k_frac
        k = m * num // den
    return max(1, k)


def _run_one(args: Tuple[ExperimentConfig, int]):
    config, index = args
    rng = substream(config.seed, index)
    try:
        n = rng.randint(*config.n_range)
        m = rng.randint(*config.m_range)
        if config.kind == "recover" or config.model == "euclidean-vcr":
            inst = gen_euclidean_vcr(n, m, rng, on_invalid=config.euclidean_on_invalid)
            profile = inst.profile
        elif config.model == "resampling":
            profile = gen_resampling_random_params(n, m, rng)
            inst = None
        else:
            raise ValueError(f"unknown model {config.model!r}")
        k = _committee_size(config, profile.m)
        weights: Optional[list] = None
        if config.kind == "recover":
            weights = gen_spatial_weights(inst.voter_points, rng)
            weighted = ApprovalProfile(
                n=profile.n, m=profile.m, approvals=profile.approvals,
                weights=tuple(weights),
            )
            committee = weighted_mes(weighted, k)
        else:
            committee = random_committee(profile, k, rng)
        k_actual = len(committee)
        alpha = min_alpha_ejr_plus(profile, committee)
        rows = []
        for rule_id in config.rules:
            ps = get_rule(rule_id)(profile, committee)
            min_budget = min(ps.budgets())
            fraction = min_budget * profile.n / k_actual
            row = ExperimentRow(
                instance=index, n=profile.n, m=profile.m, k=k_actual,
                rule=rule_id, min_budget_fraction=fraction, ejr_alpha=alpha,
            )
            if config.kind == "recover":
                budget_floats = [float(b) for b in ps.budgets()]
                weight_floats = [float(w) for w in weights]
                try:
                    row.pcc = pearson(weight_floats, budget_floats)
                except ConstantVector:
                    row.pcc = None
                    row.pcc_undefined = True
            rows.append(row)
        return ("ok", index, rows)
    except Exception as exc:  # per-instance failures recorded, run continues
        return ("error", index, f"{type(exc).__name__}: {exc}")


def run_experiment(config: ExperimentConfig, workers: Optional[int] = None) -> ExperimentResult:
    tasks = [(config, i) for i in range(config.count)]
    nworkers = resolve_workers(workers)
    if nworkers > 1 and config.count > 1:
        with Pool(processes=nworkers) as pool:
            outcomes = pool.map(_run_one, tasks)
    else:
        outcomes = [_run_one(t) for t in tasks]
    rows: List[ExperimentRow] = []
    failures: List[Tuple[int, str]] = []
    for outcome in sorted(outcomes, key=lambda o: o[1]):
        if outcome[0] == "ok":
            rows.extend(outcome[2])
        else:
            failures.append((outcome[1], outcome[2]))
    result = ExperimentResult(config=config, rows=rows, failures=failures)
    if config.kind == "recover":
        result.summary = recovery_summary(rows, config.rules)
    return result


def run_ejr_experiment(config: ExperimentConfig, workers: Optional[int] = None) -> ExperimentResult:
    if config.kind != "ejr":
        raise ValueError("config.kind must be 'ejr'")
    return run_experiment(config, workers)


def run_recovery_experiment(
    config: ExperimentConfig, workers: Optional[int] = None
) -> ExperimentResult:
    if config.kind != "recover":
        raise ValueError("config.kind must be 'recover'")
    return run_experiment(config, workers)


def recovery_summary(rows: Sequence[ExperimentRow], rules: Sequence[str]) -> dict:
    """Per rule: fraction of defined-PCC instances above each threshold, plus
    the count of undefined (constant-budget) instances."""
    out: Dict[str, Dict[str, float]] = {}
    for rule_id in rules:
        mine = [r for r in rows if r.rule == rule_id]
        defined = [r.pcc for r in mine if r.pcc is not None]
        entry: Dict[str, float] = {"instances": len(mine), "undefined": len(mine) - len(defined)}
        for threshold in PCC_THRESHOLDS:
            share = (
                sum(1 for p in defined if p > threshold) / len(defined) if defined else 0.0
            )
            entry[f"pcc>{threshold}"] = share
        out[rule_id] = entry
    return out


def summary_lines(summary: dict) -> List[str]:
    lines = []
    for rule_id, entry in summary.items():
        parts = [f"{rule_id}:"]
        for threshold in PCC_THRESHOLDS:
            parts.append(f"PCC>{threshold}: {100 * entry[f'pcc>{threshold}']:.1f}%")
        parts.append(f"undefined: {int(entry['undefined'])}")
        lines.append(" ".join(parts))
    return lines
