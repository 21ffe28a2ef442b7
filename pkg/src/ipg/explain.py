"""What / how / why queries over a graph plus intention indices.

``how`` greedily follows the successor with maximal intention until the
desire region is reached; a visited set and depth cap guard against
cycles. ``how_stochastic`` instead samples rollouts from P(s', a | s)
and classifies them as success (region reached), failure (intention
dropped below the commitment threshold) or truncated. ``why`` grounds
an action in the expected intention change it induces.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional

from .errors import (
    NoEvidenceError,
    NoImprovingPathError,
    UnseenStateError,
    ZeroIntentionError,
)
from .graph import PolicyGraph
from .intention import CommitmentThreshold, IntentionIndex, attributed_desires
from .predicates import PredicateState


@dataclass(frozen=True)
class PlanStep:
    action: str
    successor: PredicateState
    intention: float


class VerdictKind(Enum):
    FURTHERS = "furthers_intention"
    GAMBLE = "gamble"
    UNINTENTIONAL = "unintentional"


@dataclass(frozen=True)
class WhyVerdict:
    kind: VerdictKind
    desire_id: Optional[str] = None
    expected_increase: Optional[float] = None
    p_increase: Optional[float] = None
    expected_positive: Optional[float] = None


@dataclass(frozen=True)
class RolloutSummary:
    success_paths: dict[tuple, int]
    failure_count: int
    truncated_count: int

    @property
    def success_count(self) -> int:
        return sum(self.success_paths.values())

    @property
    def n_samples(self) -> int:
        return self.success_count + self.failure_count + self.truncated_count

    @property
    def success_rate(self) -> float:
        return self.success_count / self.n_samples


def what(
    indices: Iterable[IntentionIndex],
    s: PredicateState,
    threshold: CommitmentThreshold,
) -> list[tuple[str, float]]:
    return attributed_desires(indices, s, threshold)


def how(
    graph: PolicyGraph,
    index: IntentionIndex,
    s: PredicateState,
    max_depth: int = 64,
) -> list[PlanStep]:
    desire = index.desire
    if index.value(s) <= 0.0 and not desire.clause.satisfied_by(s):
        raise ZeroIntentionError(
            f"state {s.id} has no intention toward desire {desire.id!r}"
        )
    plan: list[PlanStep] = []
    current = s
    visited = {current}
    for _ in range(max_depth):
        if desire.clause.satisfied_by(current):
            plan.append(
                PlanStep(action=desire.action, successor=current,
                         intention=index.value(current))
            )
            return plan
        candidates = [
            (a, s2) for a, s2, _ in graph.successors(current)
        ]
        candidates = [(a, s2) for a, s2 in candidates if s2 not in visited]
        if not candidates:
            raise NoImprovingPathError(
                f"no unvisited successor from {current.id} toward desire {desire.id!r}"
            )
        # Max intention successor; ties by canonical id, then action name.
        action, nxt = min(
            candidates, key=lambda pair: (-index.value(pair[1]), pair[1].id, pair[0])
        )
        plan.append(PlanStep(action=action, successor=nxt, intention=index.value(nxt)))
        visited.add(nxt)
        current = nxt
    raise NoImprovingPathError(
        f"max depth {max_depth} reached before desire {desire.id!r} from {s.id}"
    )


def how_stochastic(
    graph: PolicyGraph,
    index: IntentionIndex,
    s: PredicateState,
    threshold: CommitmentThreshold,
    n_samples: int = 1000,
    max_depth: int = 64,
    seed: int = 0,
) -> RolloutSummary:
    desire = index.desire
    rng = random.Random(seed)
    success_paths: Counter = Counter()
    failures = 0
    truncated = 0
    for _ in range(n_samples):
        current = s
        path: list[tuple[str, str]] = []
        outcome = None
        for _ in range(max_depth):
            if desire.clause.satisfied_by(current):
                path.append((desire.action, current.id))
                outcome = "success"
                break
            if index.value(current) < threshold.value:
                outcome = "failure"
                break
            dist = graph.transition_dist(current)
            if not dist.entries:
                outcome = "failure"
                break
            weights = [p for _, _, p in dist.entries]
            a, nxt, _ = rng.choices(dist.entries, weights=weights, k=1)[0]
            path.append((a, nxt.id))
            current = nxt
        if outcome == "success":
            success_paths[tuple(path)] += 1
        elif outcome == "failure":
            failures += 1
        else:
            truncated += 1
    return RolloutSummary(
        success_paths=dict(success_paths),
        failure_count=failures,
        truncated_count=truncated,
    )


def delta_distribution(
    graph: PolicyGraph,
    index: IntentionIndex,
    s: PredicateState,
    action: str,
) -> list[tuple[float, float]]:
    """Discrete distribution of I_d(s') - I_d(s) when taking ``action`` in s.

    A fulfilling pair (s in the region, action == a_d) is a point mass at
    1 - I_d(s): executing the desirable action brings the desire about.
    """
    desire = index.desire
    if desire.clause.satisfied_by(s) and action == desire.action:
        return [(1.0 - index.value(s), 1.0)]
    succ = graph.successor_probs(s, action)
    if not succ:
        raise NoEvidenceError(f"action {action!r} was never observed at {s.id}")
    base = index.value(s)
    masses: dict[float, float] = {}
    for s2, p in succ.items():
        delta = index.value(s2) - base
        masses[delta] = masses.get(delta, 0.0) + p
    return sorted(masses.items())


DEFAULT_TEMPLATES = {
    "what_one": "I intend to {desire} (confidence {value:.3f}).",
    "what_none": "I have no attributed intention in this state.",
    "how_step": "Step {n}: {action} -> change {changes} (intention {value:.3f}).",
    "how_fulfil": "Step {n}: {action} fulfils the desire.",
    "why_furthers": (
        "I am taking {action} because it furthers my intention to {desire} "
        "(expected increase {delta:+.3f})."
    ),
    "why_gamble": (
        "Taking {action} is a gamble for {desire}: with probability {p:.3f} "
        "my intention does not decrease (expected value then {positive:.3f})."
    ),
    "why_unintentional": "This action is apparently unintentional.",
}


def _diff(before: PredicateState, after: PredicateState) -> str:
    changes = [
        f"{name}: {a}->{b}"
        for name, a, b in zip(before.space.names, before.values, after.values)
        if a != b
    ]
    return ", ".join(changes) if changes else "nothing"


def render_what(result: list[tuple[str, float]], templates=None) -> str:
    tpl = dict(DEFAULT_TEMPLATES, **(templates or {}))
    if not result:
        return tpl["what_none"]
    return "\n".join(
        tpl["what_one"].format(desire=d, value=v) for d, v in result
    )


def render_how(start: PredicateState, plan: list[PlanStep], templates=None) -> str:
    tpl = dict(DEFAULT_TEMPLATES, **(templates or {}))
    lines = []
    previous = start
    for n, step in enumerate(plan, start=1):
        if n == len(plan):
            lines.append(tpl["how_fulfil"].format(n=n, action=step.action))
        else:
            lines.append(
                tpl["how_step"].format(
                    n=n,
                    action=step.action,
                    changes=_diff(previous, step.successor),
                    value=step.intention,
                )
            )
        previous = step.successor
    return "\n".join(lines)


def render_why(action: str, verdicts: list[WhyVerdict], templates=None) -> str:
    tpl = dict(DEFAULT_TEMPLATES, **(templates or {}))
    lines = []
    for v in verdicts:
        if v.kind is VerdictKind.FURTHERS:
            lines.append(
                tpl["why_furthers"].format(
                    action=action, desire=v.desire_id, delta=v.expected_increase
                )
            )
        elif v.kind is VerdictKind.GAMBLE:
            lines.append(
                tpl["why_gamble"].format(
                    action=action,
                    desire=v.desire_id,
                    p=v.p_increase,
                    positive=v.expected_positive,
                )
            )
        else:
            lines.append(tpl["why_unintentional"])
    return "\n".join(lines)


def why(
    graph: PolicyGraph,
    indices: Iterable[IntentionIndex],
    s: PredicateState,
    action: str,
    threshold: CommitmentThreshold,
) -> list[WhyVerdict]:
    indices = list(indices)
    if s not in graph.occupancy:
        raise UnseenStateError(f"state {s.id} was never observed")
    observed = any(a == action for a, _, _ in graph.successors(s))
    fulfilling_ids = {
        idx.desire.id
        for idx in indices
        if idx.desire.clause.satisfied_by(s) and idx.desire.action == action
    }
    if not observed and not fulfilling_ids:
        raise NoEvidenceError(f"action {action!r} was never observed at {s.id}")

    attributed = attributed_desires(indices, s, threshold)
    if not attributed:
        return [WhyVerdict(kind=VerdictKind.UNINTENTIONAL)]

    by_id = {idx.desire.id: idx for idx in indices}
    verdicts = []
    for desire_id, value in attributed:
        index = by_id[desire_id]
        dist = delta_distribution(graph, index, s, action)
        mean = sum(delta * p for delta, p in dist)
        if desire_id in fulfilling_ids or mean > 0.0:
            verdicts.append(
                WhyVerdict(
                    kind=VerdictKind.FURTHERS,
                    desire_id=desire_id,
                    expected_increase=mean,
                )
            )
            continue
        p_inc = sum(p for delta, p in dist if delta >= 0.0)
        if p_inc > 0.0:
            expected_positive = (
                sum((value + delta) * p for delta, p in dist if delta >= 0.0) / p_inc
            )
            verdicts.append(
                WhyVerdict(
                    kind=VerdictKind.GAMBLE,
                    desire_id=desire_id,
                    expected_increase=mean,
                    p_increase=p_inc,
                    expected_positive=expected_positive,
                )
            )
        else:
            verdicts.append(
                WhyVerdict(
                    kind=VerdictKind.UNINTENTIONAL,
                    desire_id=desire_id,
                    expected_increase=mean,
                )
            )
    return verdicts
