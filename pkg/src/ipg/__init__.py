"""Intention-aware policy graphs for post-hoc explanation of opaque agents."""

from .graph import PolicyGraph, build, merge
from .intention import (
    CommitmentThreshold,
    Desire,
    IntentionIndex,
    PropagationConfig,
    attributed_desires,
    desire_metrics,
    register_desire,
)
from .predicates import DesireClause, PredicateSpace, PredicateState

__all__ = [
    "PolicyGraph",
    "build",
    "merge",
    "CommitmentThreshold",
    "Desire",
    "IntentionIndex",
    "PropagationConfig",
    "attributed_desires",
    "desire_metrics",
    "register_desire",
    "DesireClause",
    "PredicateSpace",
    "PredicateState",
]

__version__ = "0.1.0"
