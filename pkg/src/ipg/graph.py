"""Frequentist policy graph: P(s) and P(s', a | s) from discrete episodes.

Counts are stored exactly as integers; probabilities are derived on
demand and never stored, so merges are exact and order-independent.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import (
    EmptyGraphError,
    EmptyInputError,
    GraphFormatError,
    SpaceMismatchError,
    UnseenStateError,
)
from .predicates import PredicateSpace, PredicateState
from .trajectories import Episode

FORMAT_VERSION = 1


@dataclass(frozen=True)
class TransitionDistribution:
    """P(s', a | s) for one source state: (action, successor, probability)."""

    entries: tuple[tuple[str, PredicateState, float], ...]


@dataclass(frozen=True)
class StateDistributions:
    p_state: float
    action_probs: dict[str, float]
    transition: TransitionDistribution
    terminal: bool


class PolicyGraph:
    """Immutable once built; all mutation paths go through constructors."""

    def __init__(
        self,
        space: PredicateSpace,
        actions: Sequence[str],
        occupancy: dict[PredicateState, int],
        transitions: dict[tuple[PredicateState, str, PredicateState], int],
    ):
        self.space = space
        self.actions = tuple(actions)
        self.occupancy = dict(occupancy)
        self.transitions = dict(transitions)
        self.out_count: dict[PredicateState, int] = {}
        for (s, a, s2), count in self.transitions.items():
            if a not in self.actions:
                raise SpaceMismatchError(f"transition action {a!r} not in action set")
            self.out_count[s] = self.out_count.get(s, 0) + count
            for state in (s, s2):
                if state not in self.occupancy:
                    raise SpaceMismatchError(
                        f"state {state.id} appears in a transition but not in occupancy"
                    )
        for s, out in self.out_count.items():
            if out > self.occupancy[s]:
                raise SpaceMismatchError(
                    f"state {s.id}: out_count {out} exceeds occupancy {self.occupancy[s]}"
                )
        self.total_occupancy = sum(self.occupancy.values())

    # -- construction ------------------------------------------------------

    @classmethod
    def from_episodes(
        cls, episodes: Iterable[Episode], actions: Optional[Sequence[str]] = None
    ) -> PolicyGraph:
        """Build from episodes; the action set is inferred unless declared."""
        episodes = list(episodes)
        if not episodes:
            raise EmptyInputError("cannot build a policy graph from zero episodes")
        space = episodes[0].steps[0].state.space
        occupancy: dict[PredicateState, int] = {}
        transitions: dict[tuple[PredicateState, str, PredicateState], int] = {}
        seen_actions: set[str] = set()
        for ep in episodes:
            states = [step.state for step in ep.steps] + [ep.terminal]
            for state in states:
                if state.space != space:
                    raise SpaceMismatchError("episodes mix predicate spaces")
                occupancy[state] = occupancy.get(state, 0) + 1
            for step, succ in zip(ep.steps, states[1:]):
                key = (step.state, step.action, succ)
                transitions[key] = transitions.get(key, 0) + 1
                seen_actions.add(step.action)
        if actions is None:
            actions = sorted(seen_actions)
        elif not seen_actions <= set(actions):
            raise SpaceMismatchError(
                f"episodes use actions outside the declared set: "
                f"{sorted(seen_actions - set(actions))}"
            )
        return cls(space, actions, occupancy, transitions)

    @classmethod
    def from_counts(cls, space, actions, occupancy, transitions) -> PolicyGraph:
        return cls(space, actions, occupancy, transitions)

    def merge(self, other: PolicyGraph) -> PolicyGraph:
        if self.space != other.space or set(self.actions) != set(other.actions):
            raise SpaceMismatchError("cannot merge graphs over different spaces/actions")
        occupancy = dict(self.occupancy)
        for s, c in other.occupancy.items():
            occupancy[s] = occupancy.get(s, 0) + c
        transitions = dict(self.transitions)
        for key, c in other.transitions.items():
            transitions[key] = transitions.get(key, 0) + c
        return PolicyGraph(self.space, self.actions, occupancy, transitions)

    # -- probability views -------------------------------------------------

    def states(self) -> list[PredicateState]:
        return sorted(self.occupancy, key=lambda s: s.id)

    def is_terminal(self, s: PredicateState) -> bool:
        return self.out_count.get(s, 0) == 0

    def p_state(self, s: PredicateState) -> float:
        return self.occupancy.get(s, 0) / self.total_occupancy

    def successors(self, s: PredicateState) -> list[tuple[str, PredicateState, int]]:
        return [
            (a, s2, c) for (s1, a, s2), c in self.transitions.items() if s1 == s
        ]

    def transition_dist(self, s: PredicateState) -> TransitionDistribution:
        out = self.out_count.get(s, 0)
        if out == 0:
            return TransitionDistribution(entries=())
        entries = sorted(
            ((a, s2, c / out) for a, s2, c in self.successors(s)),
            key=lambda e: (e[1].id, e[0]),
        )
        return TransitionDistribution(entries=tuple(entries))

    def action_probs(self, s: PredicateState) -> dict[str, float]:
        out = self.out_count.get(s, 0)
        probs: dict[str, float] = {}
        if out == 0:
            return probs
        for a, _, c in self.successors(s):
            probs[a] = probs.get(a, 0.0) + c / out
        return probs

    def successor_probs(self, s: PredicateState, a: str) -> dict[PredicateState, float]:
        """P(s' | s, a) over observed successors of (s, a)."""
        counts: dict[PredicateState, int] = {}
        total = 0
        for act, s2, c in self.successors(s):
            if act == a:
                counts[s2] = counts.get(s2, 0) + c
                total += c
        return {s2: c / total for s2, c in counts.items()} if total else {}

    def distributions(self, s: PredicateState) -> StateDistributions:
        if s not in self.occupancy:
            raise UnseenStateError(f"state {s.id} was never observed")
        return StateDistributions(
            p_state=self.p_state(s),
            action_probs=self.action_probs(s),
            transition=self.transition_dist(s),
            terminal=self.is_terminal(s),
        )

    def nearest_state(self, s: PredicateState) -> PredicateState:
        """Occupied state minimizing predicate distance; ties by canonical id."""
        if not self.occupancy:
            raise EmptyGraphError("cannot search an empty graph")
        if s in self.occupancy:
            return s
        return min(self.occupancy, key=lambda cand: (s.distance(cand), cand.id))

    def surrogate_action(self, s: PredicateState, rng: random.Random) -> str:
        """Sample from P(a|s); falls back to the nearest occupied non-terminal state."""
        if not self.occupancy:
            raise EmptyGraphError("cannot sample from an empty graph")
        target = s if s in self.occupancy else self.nearest_state(s)
        if self.is_terminal(target):
            candidates = [c for c in self.occupancy if not self.is_terminal(c)]
            if not candidates:
                raise EmptyGraphError("graph has no non-terminal states to sample from")
            target = min(candidates, key=lambda cand: (s.distance(cand), cand.id))
        probs = self.action_probs(target)
        actions = sorted(probs)
        weights = [probs[a] for a in actions]
        return rng.choices(actions, weights=weights, k=1)[0]

    # -- persistence -------------------------------------------------------

    def _payload(self) -> dict:
        index = {s: i for i, s in enumerate(self.states())}
        nodes = [
            {
                "id": s.id,
                "predicates": s.assignment(),
                "occupancy": self.occupancy[s],
                "out": self.out_count.get(s, 0),
            }
            for s in self.states()
        ]
        edges = sorted(
            (
                {"from": s.id, "action": a, "to": s2.id, "count": c}
                for (s, a, s2), c in self.transitions.items()
            ),
            key=lambda e: (e["from"], e["action"], e["to"]),
        )
        return {
            "version": FORMAT_VERSION,
            "space": self.space.to_json(),
            "actions": list(self.actions),
            "nodes": nodes,
            "edges": edges,
        }

    def save(self, path) -> None:
        payload = self._payload()
        payload["checksum"] = _checksum(payload)
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> PolicyGraph:
        with open(path) as fh:
            payload = json.load(fh)
        if payload.get("version") != FORMAT_VERSION:
            raise GraphFormatError(
                f"unsupported policy-graph format version {payload.get('version')!r}"
            )
        stored = payload.pop("checksum", None)
        if stored != _checksum(payload):
            raise GraphFormatError("policy-graph file failed checksum validation")
        space = PredicateSpace.from_json(payload["space"])
        by_id = {}
        occupancy = {}
        for node in payload["nodes"]:
            state = space.state(node["predicates"])
            by_id[node["id"]] = state
            occupancy[state] = node["occupancy"]
        transitions = {}
        for edge in payload["edges"]:
            key = (by_id[edge["from"]], edge["action"], by_id[edge["to"]])
            transitions[key] = edge["count"]
        return cls(space, payload["actions"], occupancy, transitions)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolicyGraph):
            return NotImplemented
        return (
            self.space == other.space
            and set(self.actions) == set(other.actions)
            and self.occupancy == other.occupancy
            and self.transitions == other.transitions
        )


def _checksum(payload: dict) -> str:
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def build(episodes: Iterable[Episode], actions: Optional[Sequence[str]] = None) -> PolicyGraph:
    return PolicyGraph.from_episodes(episodes, actions)


def merge(g1: PolicyGraph, g2: PolicyGraph) -> PolicyGraph:
    return g1.merge(g2)
