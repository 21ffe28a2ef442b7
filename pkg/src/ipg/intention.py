"""Desires and intention propagation over a policy graph.

A desire is a state region (a clause) plus a desirable action. The
intention value I_d(s) is the probability mass of all paths from s that
reach the region and fulfil the desire there, not counting paths that
fulfil it midway. It is computed backwards from the region with a
worklist: each desire state seeds an increment P(a_d|s) which is pushed
to parents, scaled by the parent's probability of transitioning into
the child -- excluding the fulfilling action when the parent is itself
in the region. Increments accumulate per state and a state only
re-enters the worklist while its pending mass is at least epsilon,
which terminates the propagation on any cycle whose non-fulfilling
probability product is below 1; a hard update budget guards the rest.
"""

from __future__ import annotations

import json
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import ClauseValidationError, PropagationBudgetError
from .graph import PolicyGraph
from .predicates import DesireClause, PredicateState


@dataclass(frozen=True)
class Desire:
    id: str
    clause: DesireClause
    action: str

    def validate(self, graph: PolicyGraph) -> None:
        self.clause.validate(graph.space)
        if self.action not in graph.actions:
            raise ClauseValidationError(
                f"desire {self.id!r}: action {self.action!r} not in action set"
            )

    def region(self, graph: PolicyGraph) -> set[PredicateState]:
        return {s for s in graph.occupancy if self.clause.satisfied_by(s)}

    def to_json(self) -> dict:
        return {"id": self.id, "where": self.clause.to_json(), "action": self.action}

    @classmethod
    def from_json(cls, payload: dict) -> Desire:
        return cls(
            id=payload["id"],
            clause=DesireClause.from_json(payload["where"]),
            action=payload["action"],
        )


def load_desires(path) -> list[Desire]:
    with open(path) as fh:
        payload = json.load(fh)
    return [Desire.from_json(d) for d in payload["desires"]]


def save_desires(desires: Iterable[Desire], path) -> None:
    with open(path, "w") as fh:
        json.dump({"desires": [d.to_json() for d in desires]}, fh, indent=2)
        fh.write("\n")


@dataclass(frozen=True)
class PropagationConfig:
    epsilon: float = 1e-4
    max_updates: int = 10_000_000

    def __post_init__(self):
        if not (0.0 < self.epsilon < 1.0):
            raise ClauseValidationError("epsilon must be in (0, 1)")
        if self.max_updates < 1:
            raise ClauseValidationError("max_updates must be >= 1")


@dataclass(frozen=True)
class CommitmentThreshold:
    value: float

    def __post_init__(self):
        if not (0.0 < self.value <= 1.0):
            raise ClauseValidationError("commitment threshold must be in (0, 1]")


class IntentionIndex:
    """Per-desire map state -> I_d(s); raw values kept for diagnostics."""

    def __init__(self, desire: Desire, raw_values: dict[PredicateState, float],
                 config: PropagationConfig):
        self.desire = desire
        self.raw_values = raw_values
        self.config = config

    def value(self, s: PredicateState) -> float:
        """Stored value clamped to [0, 1]; 0 for absent states."""
        return min(1.0, max(0.0, self.raw_values.get(s, 0.0)))

    def attributed_states(self, threshold: float) -> set[PredicateState]:
        return {s for s in self.raw_values if self.value(s) > threshold}

    def items(self):
        return ((s, self.value(s)) for s in self.raw_values)


def desire_metrics(graph: PolicyGraph, desire: Desire) -> tuple[float, Optional[float]]:
    """(region probability, action probability | in region)."""
    desire.validate(graph)
    region = desire.region(graph)
    region_prob = sum(graph.p_state(s) for s in region)
    if region_prob == 0.0:
        return 0.0, None
    weighted = sum(
        graph.action_probs(s).get(desire.action, 0.0) * graph.p_state(s)
        for s in region
    )
    return region_prob, weighted / region_prob


def register_desire(
    graph: PolicyGraph, desire: Desire, config: PropagationConfig = PropagationConfig()
) -> IntentionIndex:
    desire.validate(graph)
    region = desire.region(graph)

    # Parent adjacency with both scaling factors precomputed:
    # P(S'=child | S=parent) and P(S'=child, A != a_d | S=parent).
    parents: dict[PredicateState, dict[PredicateState, list[float]]] = defaultdict(dict)
    for (src, action, dst), count in graph.transitions.items():
        out = graph.out_count[src]
        entry = parents[dst].setdefault(src, [0.0, 0.0])
        entry[0] += count / out
        if action != desire.action:
            entry[1] += count / out

    # Residual accumulation: pending increments per state are applied in
    # one batch per pop, so mass from many paths cannot be dropped
    # piecemeal and cycles settle in O(log epsilon) passes.
    values: dict[PredicateState, float] = defaultdict(float)
    pending: dict[PredicateState, float] = defaultdict(float)
    queue: deque[PredicateState] = deque()
    queued: set[PredicateState] = set()
    for s in sorted(region, key=lambda st: st.id):
        increment = graph.action_probs(s).get(desire.action, 0.0)
        if increment > 0.0:
            pending[s] = increment
            queue.append(s)
            queued.add(s)

    pops = 0
    while queue:
        s = queue.popleft()
        queued.discard(s)
        pops += 1
        if pops > config.max_updates:
            raise PropagationBudgetError(
                f"desire {desire.id!r}: propagation exceeded {config.max_updates} updates",
                active_states=sorted({s.id} | {st.id for st in queue}),
            )
        increment = pending.pop(s, 0.0)
        if increment <= 0.0:
            continue
        values[s] += increment
        for parent, (w_all, w_nonfulfil) in parents.get(s, {}).items():
            weight = w_nonfulfil if parent in region else w_all
            propagable = weight * increment
            if propagable > 0.0:
                pending[parent] += propagable
                if pending[parent] >= config.epsilon and parent not in queued:
                    queue.append(parent)
                    queued.add(parent)

    return IntentionIndex(desire=desire, raw_values=dict(values), config=config)


def intention_value(index: IntentionIndex, s: PredicateState) -> float:
    return index.value(s)


def attributed_desires(
    indices: Iterable[IntentionIndex],
    s: PredicateState,
    threshold: CommitmentThreshold,
) -> list[tuple[str, float]]:
    """Desires with I_d(s) strictly above the threshold, best first."""
    hits = [
        (idx.desire.id, idx.value(s))
        for idx in indices
        if idx.value(s) > threshold.value
    ]
    return sorted(hits, key=lambda pair: (-pair[1], pair[0]))
