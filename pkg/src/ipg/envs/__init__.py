"""Desk-scale environments and scripted agents for fixtures and tests."""

from __future__ import annotations

import random
from typing import Protocol

from ..predicates import Discretiser
from ..trajectories import Episode, RawEpisode, discretise_episodes, write_trajectories


class Environment(Protocol):
    actions: tuple[str, ...]

    def initial(self, rng: random.Random): ...

    def step(self, raw, action: str, rng: random.Random): ...


class Agent(Protocol):
    def act(self, raw, rng: random.Random) -> str: ...


def rollout_episodes(
    env: Environment,
    agent: Agent,
    discretiser: Discretiser,
    n_episodes: int,
    horizon: int,
    seed: int = 0,
) -> list[Episode]:
    """Deterministic per seed; each episode gets a derived sub-seed."""
    raws = []
    for i in range(n_episodes):
        rng = random.Random(seed * 1_000_003 + i)
        raw = env.initial(rng)
        steps = []
        for _ in range(horizon):
            action = agent.act(raw, rng)
            nxt, _reward = env.step(raw, action, rng)
            steps.append((raw, action))
            raw = nxt
        raws.append(RawEpisode(id=i, steps=tuple(steps), terminal_raw=raw))
    return discretise_episodes(raws, discretiser)


def generate_trajectories(
    env: Environment,
    agent: Agent,
    discretiser: Discretiser,
    n_episodes: int,
    horizon: int,
    seed: int,
    path,
) -> list[Episode]:
    episodes = rollout_episodes(env, agent, discretiser, n_episodes, horizon, seed)
    write_trajectories(path, episodes)
    return episodes


from . import mini_kitchen, traffic_light  # noqa: E402,F401
