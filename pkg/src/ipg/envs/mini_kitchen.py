"""Single-agent mini-kitchen gridworld.

A 5x5 layout with an onion source, one pot, a dish source and a service
tile on the border. The agent cooks by putting three onions in the pot,
waits for it to finish, collects the soup with a dish and delivers it
at the service tile for +1 reward. Move actions turn the agent and, if
the target cell is free, move it; ``interact`` acts on the tile the
agent is facing.

Layout (rows x cols)::

    # O # P #
    # . . . #
    # . . . #
    # . . . #
    # D # S #
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, replace

from ..intention import Desire
from ..predicates import DesireClause, PredicateSpace, PredicateState

ACTIONS = ("up", "down", "left", "right", "interact", "stay")
COOK_TICKS = 5

ONION_TILE = (0, 1)
POT_TILE = (0, 3)
DISH_TILE = (4, 1)
SERVICE_TILE = (4, 3)
INTERIOR = tuple((r, c) for r in range(1, 4) for c in range(1, 4))

_DELTA = {"up": (-1, 0), "down": (1, 0), "left": (0, -1), "right": (0, 1)}
_DIR_CODE = {"up": "U", "down": "D", "left": "L", "right": "R"}


@dataclass(frozen=True)
class KitchenState:
    pos: tuple[int, int] = (2, 2)
    facing: str = "up"
    held: str = "none"  # none | O | D | S
    pot_onions: int = 0
    pot_timer: int = 0

    @property
    def pot_phase(self) -> str:
        if self.pot_onions < 3:
            return "Empty" if self.pot_onions == 0 else "Waiting"
        return "Cooking" if self.pot_timer > 0 else "Finished"

    def front_tile(self) -> tuple[int, int]:
        dr, dc = _DELTA[self.facing]
        return (self.pos[0] + dr, self.pos[1] + dc)

    def to_json(self) -> dict:
        return {
            "pos": list(self.pos),
            "facing": self.facing,
            "held": self.held,
            "pot_onions": self.pot_onions,
            "pot_timer": self.pot_timer,
        }

    @classmethod
    def from_json(cls, payload: dict) -> "KitchenState":
        return cls(
            pos=tuple(payload["pos"]),
            facing=payload["facing"],
            held=payload["held"],
            pot_onions=payload["pot_onions"],
            pot_timer=payload["pot_timer"],
        )


class MiniKitchenEnv:
    actions = ACTIONS

    def initial(self, rng: random.Random) -> KitchenState:
        return KitchenState(pos=rng.choice(INTERIOR), facing=rng.choice(list(_DELTA)))

    def step(self, raw: KitchenState, action: str, rng: random.Random):
        reward = 0.0
        state = raw
        if action in _DELTA:
            target = (raw.pos[0] + _DELTA[action][0], raw.pos[1] + _DELTA[action][1])
            pos = target if target in INTERIOR else raw.pos
            state = replace(raw, pos=pos, facing=action)
        elif action == "interact":
            front = raw.front_tile()
            if front == ONION_TILE and raw.held == "none":
                state = replace(raw, held="O")
            elif front == DISH_TILE and raw.held == "none":
                state = replace(raw, held="D")
            elif front == POT_TILE:
                if raw.held == "O" and raw.pot_phase in ("Empty", "Waiting"):
                    onions = raw.pot_onions + 1
                    timer = COOK_TICKS if onions == 3 else 0
                    state = replace(raw, held="none", pot_onions=onions, pot_timer=timer)
                elif raw.held == "D" and raw.pot_phase == "Finished":
                    state = replace(raw, held="S", pot_onions=0, pot_timer=0)
            elif front == SERVICE_TILE and raw.held == "S":
                state = replace(raw, held="none")
                reward = 1.0
        # Pot cooks one tick per environment step.
        if state.pot_onions == 3 and state.pot_timer > 0:
            state = replace(state, pot_timer=state.pot_timer - 1)
        return state, reward


def _next_move_toward(pos: tuple[int, int], tile: tuple[int, int]) -> str:
    """First move action along a shortest interior path to a cell adjacent
    to ``tile``; deterministic tie-break in up/down/left/right order."""
    adjacent = {
        (tile[0] + dr, tile[1] + dc) for dr, dc in _DELTA.values()
    } & set(INTERIOR)
    if pos in adjacent:
        dr, dc = tile[0] - pos[0], tile[1] - pos[1]
        for name, delta in _DELTA.items():
            if delta == (dr, dc):
                return name
    dist = {cell: 0 for cell in adjacent}
    queue = deque(adjacent)
    while queue:
        cell = queue.popleft()
        for delta in _DELTA.values():
            nxt = (cell[0] + delta[0], cell[1] + delta[1])
            if nxt in INTERIOR and nxt not in dist:
                dist[nxt] = dist[cell] + 1
                queue.append(nxt)
    best = None
    for name in ("up", "down", "left", "right"):
        delta = _DELTA[name]
        nxt = (pos[0] + delta[0], pos[1] + delta[1])
        if nxt in dist and (best is None or dist[nxt] < best[1]):
            best = (name, dist[nxt])
    assert best is not None, "layout keeps every tile reachable"
    return best[0]


class KitchenDiscretiser:
    """held, pot_state, and next-step-to-item variables for the four tiles."""

    ITEMS = (
        ("onion_pos", ONION_TILE),
        ("pot_pos", POT_TILE),
        ("dish_pos", DISH_TILE),
        ("service_pos", SERVICE_TILE),
    )

    def __init__(self):
        variables = [
            ("held", ("O", "D", "S", "none")),
            ("pot_state", ("Empty", "Waiting", "Cooking", "Finished")),
        ]
        for name, _ in self.ITEMS:
            variables.append((name, ("U", "D", "L", "R", "I")))
        self.space = PredicateSpace(variables=tuple(variables))

    def __call__(self, raw) -> PredicateState:
        if isinstance(raw, dict):
            raw = KitchenState.from_json(raw)
        assignment = {"held": raw.held, "pot_state": raw.pot_phase}
        front = raw.front_tile()
        for name, tile in self.ITEMS:
            if front == tile:
                assignment[name] = "I"
            else:
                assignment[name] = _DIR_CODE[_next_move_toward(raw.pos, tile)]
        return self.space.state(assignment)


class CompetentAgent:
    """Scripted cook-and-serve loop with uniform exploration noise."""

    def __init__(self, noise: float = 0.15):
        self.noise = noise

    def act(self, raw: KitchenState, rng: random.Random) -> str:
        if rng.random() < self.noise:
            return rng.choice(ACTIONS)
        return self._scripted(raw)

    def _scripted(self, raw: KitchenState) -> str:
        held, phase = raw.held, raw.pot_phase
        if held == "S":
            goal = SERVICE_TILE
        elif held == "D":
            goal = POT_TILE
        elif held == "O":
            if phase in ("Empty", "Waiting"):
                goal = POT_TILE
            else:
                return "stay"
        else:
            goal = ONION_TILE if phase in ("Empty", "Waiting") else DISH_TILE
        if raw.front_tile() == goal:
            if goal == POT_TILE and held == "D" and phase != "Finished":
                return "stay"
            return "interact"
        return _next_move_toward(raw.pos, goal)


class RandomAgent:
    def act(self, raw, rng: random.Random) -> str:
        return rng.choice(ACTIONS)


def mini_kitchen_desires() -> list[Desire]:
    return [
        Desire(
            id="service",
            clause=DesireClause(
                literals=(
                    ("held", frozenset({"S"})),
                    ("service_pos", frozenset({"I"})),
                )
            ),
            action="interact",
        ),
        Desire(
            id="cook",
            clause=DesireClause(
                literals=(
                    ("held", frozenset({"O"})),
                    ("pot_state", frozenset({"Waiting"})),
                    ("pot_pos", frozenset({"I"})),
                )
            ),
            action="interact",
        ),
        Desire(
            id="start_cooking",
            clause=DesireClause(
                literals=(
                    ("held", frozenset({"O"})),
                    ("pot_state", frozenset({"Empty"})),
                    ("pot_pos", frozenset({"I"})),
                )
            ),
            action="interact",
        ),
    ]


def mini_kitchen_fixture():
    return MiniKitchenEnv(), CompetentAgent(), RandomAgent(), KitchenDiscretiser()
