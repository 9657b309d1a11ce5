"""Price-system explanations for approval-based committees."""

from .core import (
    ApprovalProfile,
    Committee,
    EmptyApprovalSet,
    InstanceTooLarge,
    OutOfRange,
    PriceSystem,
    UnsupportedCandidate,
    Violation,
    budgets,
    build_profile,
    ensure_committee,
    validate_price_system,
)
from .rational import ExactRational, format_rational, parse_rational, rat
from .rules import (
    PhragmenState,
    check_blocking,
    continuous_phragmen,
    distribute_residual,
    equal_split,
    get_rule,
    micro_step_oracle,
    money_flow,
)

__version__ = "0.1.0"
