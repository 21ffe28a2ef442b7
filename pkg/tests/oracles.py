"""Independent oracles used by the test suite.

These deliberately avoid the library's propagation/counting code paths:
intention values come from a linear-system solve, rollout success from
finite-horizon dynamic programming, and graph counts from a separate
hash-based counting pass.
"""

from __future__ import annotations

import random
from collections import Counter

import numpy as np

from ipg.graph import PolicyGraph
from ipg.intention import Desire
from ipg.predicates import DesireClause, PredicateSpace


def intention_linear_solve(graph: PolicyGraph, desire: Desire) -> dict:
    """Exact I_d by solving I = b + W I over fulfilment-co-reachable states.

    b(s) = P(a_d|s) for region states, else 0. W(s, s') is the transition
    probability s -> s' excluding the fulfilling action when s is in the
    region. States with no W-path to a positive-b state have I = 0.
    """
    states = sorted(graph.occupancy, key=lambda s: s.id)
    region = {s for s in states if desire.clause.satisfied_by(s)}
    b = {}
    for s in region:
        p = 0.0
        out = graph.out_count.get(s, 0)
        if out:
            p = sum(
                c / out
                for (s1, a, _), c in graph.transitions.items()
                if s1 == s and a == desire.action
            )
        b[s] = p
    weights: dict[tuple, float] = {}
    parents: dict = {}
    for (s1, a, s2), c in graph.transitions.items():
        if s1 in region and a == desire.action:
            continue
        weights[(s1, s2)] = weights.get((s1, s2), 0.0) + c / graph.out_count[s1]
        parents.setdefault(s2, set()).add(s1)

    seeds = [s for s in region if b.get(s, 0.0) > 0.0]
    coreach = set(seeds)
    frontier = list(seeds)
    while frontier:
        s = frontier.pop()
        for p in parents.get(s, ()):
            if p not in coreach:
                coreach.add(p)
                frontier.append(p)

    ordered = [s for s in states if s in coreach]
    n = len(ordered)
    values = {s: 0.0 for s in states}
    if n:
        pos = {s: i for i, s in enumerate(ordered)}
        mat = np.eye(n)
        vec = np.zeros(n)
        for i, s in enumerate(ordered):
            vec[i] = b.get(s, 0.0)
            for (s1, s2), w in weights.items():
                if s1 == s and s2 in pos:
                    mat[i, pos[s2]] -= w
        solution = np.linalg.solve(mat, vec)
        for s, v in zip(ordered, solution):
            values[s] = float(v)
    return values


def rollout_success_probability(
    graph: PolicyGraph, desire: Desire, index, start, commitment: float,
    max_depth: int,
) -> float:
    """Finite-horizon DP matching the stochastic rollout semantics:
    at each of max_depth checks, a region state is a success, a state
    below the commitment threshold (or terminal) a failure, and the
    last check cannot expand further."""
    memo: dict = {}

    def f(s, checks_left: int) -> float:
        if desire.clause.satisfied_by(s):
            return 1.0
        if index.value(s) < commitment or graph.is_terminal(s):
            return 0.0
        if checks_left <= 1:
            return 0.0
        key = (s, checks_left)
        if key not in memo:
            memo[key] = sum(
                p * f(s2, checks_left - 1)
                for _, s2, p in graph.transition_dist(s).entries
            )
        return memo[key]

    return f(start, max_depth)


def count_by_hash(episodes):
    """Independent counting pass over raw (id, action, id) triples."""
    occupancy: Counter = Counter()
    transitions: Counter = Counter()
    for ep in episodes:
        ids = [st.state.id for st in ep.steps] + [ep.terminal.id]
        occupancy.update(ids)
        for st, nxt in zip(ep.steps, ids[1:]):
            transitions[(st.state.id, st.action, nxt)] += 1
    return occupancy, transitions


def random_graph(rng: random.Random, max_states: int = 6):
    """Random policy graph from integer counts, plus a random desire."""
    n = rng.randint(2, max_states)
    values = tuple(f"s{i}" for i in range(n))
    space = PredicateSpace(variables=(("v", values),))
    states = [space.state({"v": v}) for v in values]
    actions = ("a", "b", "c")[: rng.randint(2, 3)]
    transitions = {}
    for s in states:
        if rng.random() < 0.15:  # terminal state
            continue
        for _ in range(rng.randint(1, 4)):
            key = (s, rng.choice(actions), rng.choice(states))
            transitions[key] = transitions.get(key, 0) + rng.randint(1, 5)
    occupancy = {}
    mentioned = set(states)
    for s in mentioned:
        out = sum(c for (s1, _, _), c in transitions.items() if s1 == s)
        occupancy[s] = max(1, out + rng.randint(0, 2))
    graph = PolicyGraph.from_counts(space, actions, occupancy, transitions)
    region_values = rng.sample(values, rng.randint(1, n))
    desire = Desire(
        id="fuzz",
        clause=DesireClause(literals=(("v", frozenset(region_values)),)),
        action=rng.choice(actions),
    )
    return graph, desire
