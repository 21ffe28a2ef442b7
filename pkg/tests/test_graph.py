import random
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from conftest import chain_graph
from ipg.errors import (
    EmptyInputError,
    GraphFormatError,
    SpaceMismatchError,
    UnseenStateError,
)
from ipg.graph import PolicyGraph, build, merge
from ipg.predicates import PredicateSpace
from ipg.trajectories import Episode, Step
from oracles import count_by_hash, random_graph

SPACE = PredicateSpace(variables=(("v", ("A", "B", "C")),))
A = SPACE.state({"v": "A"})
B = SPACE.state({"v": "B"})
C = SPACE.state({"v": "C"})


def _episode(ep_id, path, actions):
    steps = tuple(
        Step(episode=ep_id, t=t, state=s, action=a)
        for t, (s, a) in enumerate(zip(path[:-1], actions))
    )
    return Episode(id=ep_id, steps=steps, terminal=path[-1])


def test_single_episode_counts():
    g = build([_episode(0, [A, B], ["a"])])
    assert g.occupancy == {A: 1, B: 1}
    assert g.transitions == {(A, "a", B): 1}
    assert g.is_terminal(B)


def test_branching_probabilities():
    g = build([_episode(0, [A, B], ["a"]), _episode(1, [A, C], ["b"])])
    probs = g.action_probs(A)
    assert probs == {"a": 0.5, "b": 0.5}


def test_empty_input_rejected():
    with pytest.raises(EmptyInputError):
        build([])


def test_build_matches_count_by_hash_oracle(kitchen):
    episodes = kitchen["episodes"][:50]
    g = build(episodes)
    occupancy, transitions = count_by_hash(episodes)
    assert {s.id: c for s, c in g.occupancy.items()} == dict(occupancy)
    assert {(s.id, a, s2.id): c for (s, a, s2), c in g.transitions.items()} == dict(
        transitions
    )


def test_merge_identity_and_commutativity():
    g = build([_episode(0, [A, B, C], ["a", "b"])])
    empty = PolicyGraph.from_counts(SPACE, ("a", "b"), {}, {})
    assert merge(g, empty) == g


def _random_over(space, actions, rng):
    states = [space.state({"v": v}) for v in space.domain("v")]
    transitions = {}
    for s in states:
        for _ in range(rng.randint(0, 3)):
            key = (s, rng.choice(actions), rng.choice(states))
            transitions[key] = transitions.get(key, 0) + rng.randint(1, 4)
    occupancy = {}
    for s in states:
        out = sum(c for (s1, _, _), c in transitions.items() if s1 == s)
        occupancy[s] = max(1, out)
    return PolicyGraph.from_counts(space, actions, occupancy, transitions)


@settings(max_examples=30)
@given(seed=st.integers(min_value=0, max_value=10_000))
def test_merge_commutative_and_associative_on_random_graphs(seed):
    rng = random.Random(seed)
    g1, _ = random_graph(rng)
    g2 = _random_over(g1.space, g1.actions, rng)
    g3 = _random_over(g1.space, g1.actions, rng)
    assert merge(g1, g2) == merge(g2, g1)
    assert merge(merge(g1, g2), g3) == merge(g1, merge(g2, g3))


@settings(max_examples=30)
@given(seed=st.integers(min_value=0, max_value=10_000), split=st.integers(1, 49))
def test_build_distributes_over_merge(seed, split):
    rng = random.Random(seed)
    paths = []
    for i in range(50):
        length = rng.randint(1, 5)
        states = [rng.choice([A, B, C]) for _ in range(length + 1)]
        actions = [rng.choice(["a", "b"]) for _ in range(length)]
        paths.append(_episode(i, states, actions))
    actions = ("a", "b")
    whole = build(paths, actions)
    parts = merge(build(paths[:split], actions), build(paths[split:], actions))
    assert whole == parts


def test_merge_space_mismatch():
    g = build([_episode(0, [A, B], ["a"])])
    other_space = PredicateSpace(variables=(("w", ("A", "B")),))
    other = PolicyGraph.from_counts(other_space, ("a",), {}, {})
    with pytest.raises(SpaceMismatchError):
        merge(g, other)


def test_distributions_normalized():
    g = build([_episode(0, [A, B], ["a"]), _episode(1, [A, C], ["b"]),
               _episode(2, [A, B, A], ["a", "b"])])
    assert abs(sum(g.p_state(s) for s in g.occupancy) - 1.0) < 1e-9
    for s in g.occupancy:
        if g.is_terminal(s):
            continue
        dist = g.distributions(s)
        assert abs(sum(p for _, _, p in dist.transition.entries) - 1.0) < 1e-9
        assert abs(sum(dist.action_probs.values()) - 1.0) < 1e-9
        # P(a|s) equals the transition marginal
        for a, p in dist.action_probs.items():
            marginal = sum(pp for aa, _, pp in dist.transition.entries if aa == a)
            assert abs(p - marginal) < 1e-12


def test_terminal_states_flagged():
    g = build([_episode(0, [A, B], ["a"])])
    assert g.distributions(B).terminal
    assert g.distributions(B).action_probs == {}


def test_unseen_state_error():
    g = build([_episode(0, [A, B], ["a"])])
    with pytest.raises(UnseenStateError):
        g.distributions(C)


def test_nearest_state_brute_force():
    space = PredicateSpace(variables=(("x", ("0", "1")), ("y", ("0", "1")),
                                      ("z", ("0", "1"))))
    all_states = list(space.enumerate_states())
    occupied = all_states[::2]
    occupancy = {s: 1 for s in occupied}
    g = PolicyGraph.from_counts(space, ("a",), occupancy, {})
    for s in all_states:
        got = g.nearest_state(s)
        best = min(occupied, key=lambda c: (s.distance(c), c.id))
        assert got == best
    for s in occupied:
        assert g.nearest_state(s) == s


def test_surrogate_point_mass():
    g = build([_episode(0, [A, B], ["a"]), _episode(1, [A, B], ["a"])])
    rng = random.Random(0)
    assert all(g.surrogate_action(A, rng) == "a" for _ in range(20))


def test_surrogate_frequencies_match_distribution():
    episodes = [_episode(i, [A, B if i % 4 else C], ["a" if i % 4 else "b"])
                for i in range(100)]
    g = build(episodes)
    rng = random.Random(42)
    n = 100_000
    counts = Counter(g.surrogate_action(A, rng) for _ in range(n))
    for action, p in g.action_probs(A).items():
        sigma = (p * (1 - p) / n) ** 0.5
        assert abs(counts[action] / n - p) < 3 * sigma + 1e-9


def test_surrogate_unseen_state_uses_nearest(kitchen):
    g = kitchen["graph"]
    # perturb one variable of an occupied state
    s = next(iter(g.occupancy))
    rng = random.Random(1)
    assert g.surrogate_action(s, rng) in g.actions


def test_save_load_round_trip(tmp_path, kitchen):
    g = kitchen["graph"]
    path = tmp_path / "pg.json"
    g.save(path)
    loaded = PolicyGraph.load(path)
    assert loaded == g
    # byte-equal on re-save
    first = path.read_text()
    loaded.save(path)
    assert path.read_text() == first


def test_empty_graph_round_trip(tmp_path):
    g = PolicyGraph.from_counts(SPACE, ("a",), {}, {})
    path = tmp_path / "empty.json"
    g.save(path)
    assert PolicyGraph.load(path) == g


def test_corrupted_file_fails_checksum(tmp_path):
    g = build([_episode(0, [A, B], ["a"])])
    path = tmp_path / "pg.json"
    g.save(path)
    text = path.read_text().replace('"occupancy": 1', '"occupancy": 2', 1)
    path.write_text(text)
    with pytest.raises(GraphFormatError, match="checksum"):
        PolicyGraph.load(path)


def test_version_mismatch(tmp_path):
    g = build([_episode(0, [A, B], ["a"])])
    path = tmp_path / "pg.json"
    g.save(path)
    text = path.read_text().replace('"version": 1', '"version": 99')
    path.write_text(text)
    with pytest.raises(GraphFormatError, match="version"):
        PolicyGraph.load(path)
