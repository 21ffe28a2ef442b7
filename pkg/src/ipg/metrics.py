"""Static entropy metrics, surrogate reward comparison, and the
interpretability / reliability metrics with their commitment-threshold
trade-off curve.

Per-state entropies (in bits) over the joint immediate future:

    H(s)   = - sum_{s',a} P(s',a|s) log2 P(s',a|s)
    H_a(s) = - sum_{a}    P(a|s)    log2 P(a|s)
    H_w(s) = - sum_{a}    P(a|s) sum_{s'} P(s'|s,a) log2 P(s'|s,a)

with H = H_a + H_w holding per state. Terminal states contribute zero
entropy; unweighted means exclude them and weighted aggregates
renormalize P(s) over non-terminal states.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from statistics import mean, pstdev
from typing import Iterable, Optional, Sequence

from .errors import EmptyGraphError, EmptyInputError
from .graph import PolicyGraph
from .intention import CommitmentThreshold, IntentionIndex
from .predicates import PredicateState


@dataclass(frozen=True)
class StateEntropy:
    total: float
    action: float
    world: float


@dataclass(frozen=True)
class EntropyReport:
    per_state: dict[PredicateState, StateEntropy]
    weighted: StateEntropy
    unweighted: StateEntropy


@dataclass(frozen=True)
class TradeoffPoint:
    threshold: float
    per_desire: dict[str, tuple[float, Optional[float]]]
    interpretability: float
    reliability: Optional[float]


@dataclass(frozen=True)
class DeltaRewardConfig:
    horizon: int
    n_episodes: int
    seed: int = 0

    def __post_init__(self):
        if self.horizon < 1 or self.n_episodes < 1:
            raise EmptyInputError("horizon and n_episodes must be >= 1")


@dataclass(frozen=True)
class DeltaRewardResult:
    delta: float
    pooled_std: float
    original_mean: float
    surrogate_mean: float


def _entropy(probs: Iterable[float]) -> float:
    return -sum(p * math.log2(p) for p in probs if p > 0.0)


def state_entropy(graph: PolicyGraph, s: PredicateState) -> StateEntropy:
    if graph.is_terminal(s):
        return StateEntropy(0.0, 0.0, 0.0)
    joint = [p for _, _, p in graph.transition_dist(s).entries]
    action_probs = graph.action_probs(s)
    h_total = _entropy(joint)
    h_action = _entropy(action_probs.values())
    h_world = sum(
        p_a * _entropy(graph.successor_probs(s, a).values())
        for a, p_a in action_probs.items()
    )
    return StateEntropy(total=h_total, action=h_action, world=h_world)


def entropy_report(graph: PolicyGraph) -> EntropyReport:
    if not graph.occupancy:
        raise EmptyGraphError("cannot compute entropies on an empty graph")
    per_state = {s: state_entropy(graph, s) for s in graph.occupancy}
    non_terminal = [s for s in graph.occupancy if not graph.is_terminal(s)]
    if non_terminal:
        mass = sum(graph.p_state(s) for s in non_terminal)
        weighted = StateEntropy(
            total=sum(graph.p_state(s) / mass * per_state[s].total for s in non_terminal),
            action=sum(graph.p_state(s) / mass * per_state[s].action for s in non_terminal),
            world=sum(graph.p_state(s) / mass * per_state[s].world for s in non_terminal),
        )
        unweighted = StateEntropy(
            total=mean(per_state[s].total for s in non_terminal),
            action=mean(per_state[s].action for s in non_terminal),
            world=mean(per_state[s].world for s in non_terminal),
        )
    else:
        weighted = unweighted = StateEntropy(0.0, 0.0, 0.0)
    return EntropyReport(per_state=per_state, weighted=weighted, unweighted=unweighted)


def delta_reward(env, agent, graph: PolicyGraph, discretiser,
                 cfg: DeltaRewardConfig) -> DeltaRewardResult:
    """Difference in mean cumulative reward, original minus surrogate.

    The surrogate acts by sampling P(a | disc(raw state)) from the graph.
    The pooled std is the standard error of the difference of means.
    """

    def run(policy, seed_offset: int) -> list[float]:
        returns = []
        for i in range(cfg.n_episodes):
            rng = random.Random((cfg.seed * 2 + seed_offset) * 1_000_003 + i)
            raw = env.initial(rng)
            total = 0.0
            for _ in range(cfg.horizon):
                action = policy(raw, rng)
                raw, reward = env.step(raw, action, rng)
                total += reward
            returns.append(total)
        return returns

    def surrogate_policy(raw, rng):
        return graph.surrogate_action(discretiser(raw), rng)

    original = run(lambda raw, rng: agent.act(raw, rng), seed_offset=1)
    surrogate = run(surrogate_policy, seed_offset=2)
    n = cfg.n_episodes
    pooled = math.sqrt(pstdev(original) ** 2 / n + pstdev(surrogate) ** 2 / n)
    return DeltaRewardResult(
        delta=mean(original) - mean(surrogate),
        pooled_std=pooled,
        original_mean=mean(original),
        surrogate_mean=mean(surrogate),
    )


def intention_metrics(
    graph: PolicyGraph, index: IntentionIndex, threshold: CommitmentThreshold
) -> tuple[float, Optional[float]]:
    """(intention probability, expected intention) at the given threshold."""
    attributed = [
        s for s in graph.occupancy if index.value(s) > threshold.value
    ]
    prob = sum(graph.p_state(s) for s in attributed)
    if prob == 0.0:
        return 0.0, None
    expected = sum(index.value(s) * graph.p_state(s) for s in attributed) / prob
    return prob, expected


def any_desire_metrics(
    graph: PolicyGraph,
    indices: Sequence[IntentionIndex],
    threshold: CommitmentThreshold,
) -> tuple[float, Optional[float]]:
    """Interpretability and reliability over 'any desire' (max_d inside)."""
    if not indices:
        raise EmptyInputError("any_desire_metrics needs at least one index")
    attributed = [
        s
        for s in graph.occupancy
        if any(idx.value(s) > threshold.value for idx in indices)
    ]
    prob = sum(graph.p_state(s) for s in attributed)
    if prob == 0.0:
        return 0.0, None
    expected = (
        sum(max(idx.value(s) for idx in indices) * graph.p_state(s) for s in attributed)
        / prob
    )
    return prob, expected


def tradeoff_curve(
    graph: PolicyGraph,
    indices: Sequence[IntentionIndex],
    thresholds: Sequence[float],
) -> list[TradeoffPoint]:
    if not thresholds:
        raise EmptyInputError("threshold grid is empty")
    if list(thresholds) != sorted(set(thresholds)):
        raise EmptyInputError("threshold grid must be strictly increasing")
    points = []
    for c in thresholds:
        threshold = CommitmentThreshold(c)
        per_desire = {
            idx.desire.id: intention_metrics(graph, idx, threshold) for idx in indices
        }
        interp, reli = any_desire_metrics(graph, indices, threshold)
        points.append(
            TradeoffPoint(
                threshold=c,
                per_desire=per_desire,
                interpretability=interp,
                reliability=reli,
            )
        )
    return points
