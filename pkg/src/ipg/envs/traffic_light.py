"""Three-state traffic-light environment.

The next light is independent of the action (biased toward Y and R);
reward is +1 for going up on green and -1 for going up on red. The
optimal agent plays uniform {left, down, right} on red, left on yellow
and up on green. Two one-variable discretisers are provided: one that
distinguishes G from {Y, R} and one that distinguishes R from {Y, G}.
The first can still represent an optimal surrogate; the second cannot,
yet scores a lower occupancy-weighted action entropy -- the blind spot
this fixture exists to demonstrate.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from ..predicates import PredicateSpace, PredicateState

LIGHTS = ("R", "Y", "G")
ACTIONS = ("down", "left", "right", "up")

DEFAULT_BIAS = {"Y": 0.50, "R": 0.45, "G": 0.05}

OPTIMAL_POLICY = {
    "R": {"left": 1 / 3, "down": 1 / 3, "right": 1 / 3},
    "Y": {"left": 1.0},
    "G": {"up": 1.0},
}


@dataclass(frozen=True)
class TrafficLightEnv:
    bias: tuple[tuple[str, float], ...] = tuple(sorted(DEFAULT_BIAS.items()))
    actions: tuple[str, ...] = ACTIONS

    def _sample_light(self, rng: random.Random) -> str:
        lights = [l for l, _ in self.bias]
        weights = [w for _, w in self.bias]
        return rng.choices(lights, weights=weights, k=1)[0]

    def initial(self, rng: random.Random) -> str:
        return self._sample_light(rng)

    def step(self, raw: str, action: str, rng: random.Random):
        reward = 0.0
        if action == "up":
            if raw == "G":
                reward = 1.0
            elif raw == "R":
                reward = -1.0
        return self._sample_light(rng), reward


class ScriptedAgent:
    """Acts by sampling a fixed per-raw-state action distribution."""

    def __init__(self, policy: dict[str, dict[str, float]]):
        self.policy = policy

    def act(self, raw, rng: random.Random) -> str:
        dist = self.policy[raw]
        actions = sorted(dist)
        return rng.choices(actions, weights=[dist[a] for a in actions], k=1)[0]


class LightDiscretiser:
    """Maps the raw light to `distinguished` vs the merged rest."""

    def __init__(self, distinguished: str):
        rest = "".join(l for l in LIGHTS if l != distinguished)
        self.distinguished = distinguished
        self.merged = rest
        self.space = PredicateSpace(
            variables=(("light", (distinguished, rest)),)
        )

    def __call__(self, raw: str) -> PredicateState:
        value = raw if raw == self.distinguished else self.merged
        return self.space.state({"light": value})


def traffic_light_fixture():
    env = TrafficLightEnv()
    agent = ScriptedAgent(OPTIMAL_POLICY)
    return env, agent, LightDiscretiser("G"), LightDiscretiser("R")


def analytic_weighted_action_entropy(
    discretiser: LightDiscretiser,
    bias: dict[str, float] = DEFAULT_BIAS,
    policy: dict[str, dict[str, float]] = OPTIMAL_POLICY,
) -> float:
    """Occupancy-weighted H_a of the merged policy graph, in closed form.

    Occupancy equals the bias (next state is action-independent), so each
    discrete group's action distribution is the occupancy-weighted mixture
    of the member lights' policies.
    """
    groups: dict[str, list[str]] = {}
    for light in LIGHTS:
        value = light if light == discretiser.distinguished else discretiser.merged
        groups.setdefault(value, []).append(light)
    total = 0.0
    for members in groups.values():
        weight = sum(bias[l] for l in members)
        mixture: dict[str, float] = {}
        for l in members:
            for a, p in policy[l].items():
                mixture[a] = mixture.get(a, 0.0) + bias[l] / weight * p
        entropy = -sum(p * math.log2(p) for p in mixture.values() if p > 0.0)
        total += weight * entropy
    return total
