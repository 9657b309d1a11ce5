"""Audit report: one record per axiom with verdict and witness."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from ..core import ApprovalProfile, InstanceTooLarge, PriceSystem
from . import faithful, laminar, stability
from .automorphism import is_equal_treatment, is_symmetric


@dataclass
class AuditRecord:
    axiom: str
    verdict: str  # pass | fail | not-applicable | skipped-too-large
    witness: Optional[dict] = None

    def to_json(self) -> dict:
        out = {"axiom": self.axiom, "verdict": self.verdict}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


AXIOM_IDS = [
    "residual-stability",
    "one-stability",
    "stability",
    "weak-stability",
    "equal-treatment",
    "symmetry",
    "laminar-coherence",
    "budget-averaging",
    "sw-payment-responsiveness",
]


def _record(axiom: str, fn) -> AuditRecord:
    try:
        return fn()
    except InstanceTooLarge:
        return AuditRecord(axiom, "skipped-too-large")


def run_audit(
    profile: ApprovalProfile,
    ps: PriceSystem,
    axioms: Optional[Sequence[str]] = None,
    max_n: int = 8,
    max_m: int = 10,
) -> List[AuditRecord]:
    """Evaluate the selected axioms (all by default) on one price system."""
    selected = list(axioms) if axioms is not None else list(AXIOM_IDS)
    unknown = [a for a in selected if a not in AXIOM_IDS]
    if unknown:
        raise ValueError(f"unknown axiom ids: {unknown}")
    records: List[AuditRecord] = []
    for axiom in selected:
        if axiom == "residual-stability":
            c = stability.residual_stability_violation(profile, ps)
            records.append(
                AuditRecord(axiom, "pass" if c is None else "fail",
                            None if c is None else {"candidate": c})
            )
        elif axiom == "one-stability":
            w = stability.one_stability_violation(profile, ps)
            witness = None
            if w is not None:
                witness = {"candidate": w[0]}
                if w[1] is not None:
                    witness["against"] = w[1]
            records.append(AuditRecord(axiom, "pass" if w is None else "fail", witness))
        elif axiom == "stability":
            c = stability.stability_violation(profile, ps)
            records.append(
                AuditRecord(axiom, "pass" if c is None else "fail",
                            None if c is None else {"candidate": c})
            )
        elif axiom == "weak-stability":
            records.append(_record(axiom, lambda: AuditRecord(
                axiom, "pass" if stability.is_weakly_stable_bruteforce(profile, ps) else "fail")))
        elif axiom == "equal-treatment":
            witness = _equal_treatment_witness(profile, ps)
            records.append(
                AuditRecord(axiom, "pass" if witness is None else "fail", witness)
            )
        elif axiom == "symmetry":
            records.append(_record(axiom, lambda: AuditRecord(
                axiom,
                "pass" if is_symmetric(profile, ps.committee, ps, max_n, max_m) else "fail")))
        elif axiom == "laminar-coherence":
            if not laminar.is_laminar(profile):
                records.append(AuditRecord(axiom, "not-applicable"))
            else:
                ok = laminar.is_laminar_coherent(profile, ps)
                records.append(AuditRecord(axiom, "pass" if ok else "fail"))
        elif axiom == "budget-averaging":
            try:
                ok = faithful.is_budget_averaging(profile, ps)
                records.append(AuditRecord(axiom, "pass" if ok else "fail"))
            except faithful.NotOneStable:
                records.append(AuditRecord(axiom, "not-applicable",
                                           {"reason": "system is not 1-stable"}))
        elif axiom == "sw-payment-responsiveness":
            verdict = faithful.is_single_winner_payment_responsive(profile, ps)
            if verdict is None:
                records.append(AuditRecord(axiom, "not-applicable"))
            else:
                records.append(AuditRecord(axiom, "pass" if verdict else "fail"))
    return records


def _equal_treatment_witness(profile: ApprovalProfile, ps: PriceSystem) -> Optional[dict]:
    classes = {}
    for i in range(profile.n):
        classes.setdefault(profile.approvals[i], []).append(i)
    members = sorted(ps.committee)
    for voters in classes.values():
        head = voters[0]
        for i in voters[1:]:
            if ps.residuals[i] != ps.residuals[head]:
                return {"voters": [head, i], "field": "residual"}
            for c in members:
                if ps.payment(i, c) != ps.payment(head, c):
                    return {"voters": [head, i], "candidate": c, "field": "payment"}
    return None
