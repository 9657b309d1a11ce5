"""Decision procedures for every price-system axiom, plus brute-force oracles."""

from .stability import (
    is_residual_stable,
    residual_stability_violation,
    is_one_stable,
    one_stability_violation,
    is_stable,
    stability_violation,
    is_weakly_stable_bruteforce,
    weak_stability_exhaustive_oracle,
)
from .laminar import (
    LaminarDecomposition,
    is_laminar,
    laminar_decomposition,
    is_laminar_coherent,
    is_laminar_proportional,
    max_laminar_unproportionality,
    NotLaminar,
)
from .automorphism import (
    Automorphism,
    enumerate_automorphisms,
    enumerate_profile_automorphisms,
    is_symmetric,
    is_equal_treatment,
    is_perfect_symmetry_instance,
)
from .proportionality import (
    provides_perfect_coverage,
    min_alpha_ejr_plus,
    min_alpha_ejr_plus_oracle,
    satisfies_alpha_pjr_plus_bruteforce,
    maximin_support_lower_bound,
    is_pareto_optimal_bruteforce,
)
from .faithful import (
    is_budget_averaging,
    NotOneStable,
    is_single_winner_payment_responsive,
    check_monotonicity_pair,
    PreconditionViolated,
)
from .report import AuditRecord, run_audit, AXIOM_IDS

__all__ = [name for name in dir() if not name.startswith("_")]
