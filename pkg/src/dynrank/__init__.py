"""dynrank: dynamic proportional ranking rules for sequential selection."""

from dynrank.model import (
    ApprovalProfile,
    avg_satisfaction,
    dump_profile,
    load_profile,
    prefix,
    profile_from_dict,
    profile_to_dict,
    supporters,
)
from dynrank.rules import (
    RULE_IDS,
    BuyingEvent,
    PurchaseEvent,
    compute_buying_time,
    compute_debts,
    dynamic_phragmen_trace,
    rank,
    rank_av,
    rank_dynamic_phragmen,
    rank_dynamic_seqpav,
    rank_myopic_phragmen,
    rank_myopic_seqpav,
    tsc,
)
from dynrank.session import (
    SessionState,
    Trajectory,
    clone_candidates,
    ensure_clone_supply,
    implement,
    new_session,
    preview,
    replay_trajectory,
    trajectory_from_session,
    update_profile,
)

__version__ = "0.1.0"

__all__ = [
    "ApprovalProfile",
    "BuyingEvent",
    "PurchaseEvent",
    "RULE_IDS",
    "SessionState",
    "Trajectory",
    "avg_satisfaction",
    "clone_candidates",
    "compute_buying_time",
    "compute_debts",
    "dump_profile",
    "dynamic_phragmen_trace",
    "ensure_clone_supply",
    "implement",
    "load_profile",
    "new_session",
    "prefix",
    "preview",
    "profile_from_dict",
    "profile_to_dict",
    "rank",
    "rank_av",
    "rank_dynamic_phragmen",
    "rank_dynamic_seqpav",
    "rank_myopic_phragmen",
    "rank_myopic_seqpav",
    "replay_trajectory",
    "supporters",
    "trajectory_from_session",
    "tsc",
    "update_profile",
]
