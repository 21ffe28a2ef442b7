import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import chain_graph
from ipg.errors import (
    NoEvidenceError,
    NoImprovingPathError,
    UnseenStateError,
    ZeroIntentionError,
)
from ipg.explain import (
    VerdictKind,
    delta_distribution,
    how,
    how_stochastic,
    render_how,
    render_what,
    render_why,
    what,
    why,
)
from ipg.graph import PolicyGraph
from ipg.intention import (
    CommitmentThreshold,
    Desire,
    PropagationConfig,
    register_desire,
)
from ipg.predicates import DesireClause, PredicateSpace
from oracles import random_graph, rollout_success_probability


def _desire(region_values, action, var="v"):
    return Desire(
        id="d",
        clause=DesireClause(literals=((var, frozenset(region_values)),)),
        action=action,
    )


def _lottery():
    """Buy a ticket: w.p. 0.1 reach the winning state and claim (I=1),
    w.p. 0.9 lose (I=0). I(start) = 0.1."""
    space = PredicateSpace(variables=(("v", ("S", "W", "L")),))
    s, w, l = (space.state({"v": v}) for v in ("S", "W", "L"))
    graph = PolicyGraph.from_counts(
        space, ("buy", "claim"),
        {s: 10, w: 1, l: 9},
        {(s, "buy", w): 1, (s, "buy", l): 9, (w, "claim", l): 1},
    )
    desire = _desire({"W"}, "claim")
    index = register_desire(graph, desire, PropagationConfig(epsilon=1e-9))
    return graph, index, (s, w, l)


def test_what_returns_attributed_sorted(kitchen):
    graph = kitchen["graph"]
    threshold = CommitmentThreshold(0.5)
    indices = kitchen["indices"]
    found_any = False
    for s in graph.occupancy:
        result = what(indices, s, threshold)
        values = [v for _, v in result]
        assert values == sorted(values, reverse=True)
        assert all(v > 0.5 for v in values)
        found_any = found_any or bool(result)
    assert found_any


def test_how_on_chain_reaches_region():
    _, graph, (a, b, d) = chain_graph()
    index = register_desire(graph, _desire({"D"}, "act"),
                            PropagationConfig(epsilon=1e-9))
    plan = how(graph, index, a)
    assert [step.successor.id for step in plan] == ["v=B", "v=D", "v=D"]
    assert plan[-1].action == "act"
    assert plan[-1].intention == index.value(d)


def test_how_from_region_state_is_single_fulfilling_step():
    _, graph, (_, _, d) = chain_graph()
    index = register_desire(graph, _desire({"D"}, "act"))
    plan = how(graph, index, d)
    assert len(plan) == 1 and plan[0].action == "act" and plan[0].successor == d


def test_how_greedy_picks_max_intention_successor():
    # From S the successors split: G leads to the region, B is a dead end.
    space = PredicateSpace(variables=(("v", ("S", "G", "B", "D")),))
    s, g, b, d = (space.state({"v": v}) for v in ("S", "G", "B", "D"))
    graph = PolicyGraph.from_counts(
        space, ("go", "act"),
        {s: 2, g: 1, b: 1, d: 1},
        {(s, "go", g): 1, (s, "go", b): 1, (g, "go", d): 1, (d, "act", d): 1},
    )
    index = register_desire(graph, _desire({"D"}, "act"), PropagationConfig(epsilon=1e-9))
    assert index.value(g) > index.value(b)
    plan = how(graph, index, s)
    assert [step.successor.id for step in plan][:2] == ["v=G", "v=D"]


def test_how_zero_intention_rejected():
    _, graph, _ = chain_graph()
    index = register_desire(graph, _desire({"D"}, "act"))
    space = graph.space
    # build a graph where one state cannot reach the region
    iso_space = PredicateSpace(variables=(("v", ("A", "D", "X")),))
    a, d, x = (iso_space.state({"v": v}) for v in ("A", "D", "X"))
    g2 = PolicyGraph.from_counts(
        iso_space, ("go", "act"),
        {a: 1, d: 1, x: 2},
        {(a, "go", d): 1, (d, "act", d): 1, (x, "go", x): 1},
    )
    idx2 = register_desire(g2, _desire({"D"}, "act"))
    with pytest.raises(ZeroIntentionError):
        how(g2, idx2, x)


def test_how_depth_cap_raises():
    _, graph, (a, _, _) = chain_graph()
    index = register_desire(graph, _desire({"D"}, "act"))
    with pytest.raises(NoImprovingPathError):
        how(graph, index, a, max_depth=1)


def test_how_visited_set_raises_on_dead_end():
    # A hand-built index lures the greedy step into A, whose only
    # successor is the already-visited start state.
    from ipg.intention import IntentionIndex

    space = PredicateSpace(variables=(("v", ("X", "A", "B", "D")),))
    x, a, b, d = (space.state({"v": v}) for v in ("X", "A", "B", "D"))
    graph = PolicyGraph.from_counts(
        space, ("go", "act"),
        {x: 2, a: 1, b: 1, d: 1},
        {(x, "go", a): 1, (x, "go", b): 1, (a, "go", x): 1,
         (b, "go", d): 1, (d, "act", d): 1},
    )
    desire = _desire({"D"}, "act")
    index = IntentionIndex(desire, {x: 0.8, a: 0.9, b: 0.5, d: 1.0},
                           PropagationConfig())
    with pytest.raises(NoImprovingPathError):
        how(graph, index, x)


def test_how_stochastic_matches_dp_oracle_on_chain():
    _, graph, (a, b, d) = chain_graph()
    desire = _desire({"D"}, "act")
    index = register_desire(graph, desire, PropagationConfig(epsilon=1e-9))
    threshold = CommitmentThreshold(0.05)
    n = 4000
    for start in (a, b):
        summary = how_stochastic(graph, index, start, threshold,
                                 n_samples=n, max_depth=16, seed=7)
        p = rollout_success_probability(graph, desire, index, start, 0.05, 16)
        sigma = (p * (1 - p) / n) ** 0.5
        assert abs(summary.success_rate - p) < 3 * sigma + 1e-9
        assert summary.n_samples == n


@settings(max_examples=12, deadline=None)
@given(seed=st.integers(min_value=0, max_value=50_000))
def test_how_stochastic_fuzz_matches_dp(seed):
    rng = random.Random(seed)
    graph, desire = random_graph(rng)
    index = register_desire(graph, desire, PropagationConfig(epsilon=1e-8))
    threshold = CommitmentThreshold(0.1)
    start = max(graph.occupancy, key=lambda s: (index.value(s), s.id))
    n = 1500
    summary = how_stochastic(graph, index, start, threshold,
                             n_samples=n, max_depth=12, seed=seed)
    p = rollout_success_probability(graph, desire, index, start, 0.1, 12)
    sigma = (p * (1 - p) / n) ** 0.5
    assert abs(summary.success_rate - p) < 4 * sigma + 5e-3


def test_how_stochastic_seed_determinism():
    _, graph, (a, _, _) = chain_graph()
    index = register_desire(graph, _desire({"D"}, "act"))
    kwargs = dict(threshold=CommitmentThreshold(0.05), n_samples=500,
                  max_depth=16)
    first = how_stochastic(graph, index, a, seed=3, **kwargs)
    second = how_stochastic(graph, index, a, seed=3, **kwargs)
    assert first == second


def test_delta_distribution_sums_to_one_and_groups():
    graph, index, (s, w, l) = _lottery()
    dist = delta_distribution(graph, index, s, "buy")
    assert sum(p for _, p in dist) == pytest.approx(1.0)
    assert dist == [
        (pytest.approx(-0.1), pytest.approx(0.9)),
        (pytest.approx(0.9), pytest.approx(0.1)),
    ]


def test_delta_distribution_fulfilling_point_mass():
    graph, index, (s, w, l) = _lottery()
    assert index.value(w) == pytest.approx(1.0)
    dist = delta_distribution(graph, index, w, "claim")
    assert dist == [(pytest.approx(0.0), 1.0)]


def test_delta_distribution_no_evidence():
    graph, index, (s, w, l) = _lottery()
    with pytest.raises(NoEvidenceError):
        delta_distribution(graph, index, s, "claim")


def test_why_lottery_is_gamble():
    graph, index, (s, _, _) = _lottery()
    verdicts = why(graph, [index], s, "buy", CommitmentThreshold(0.05))
    assert len(verdicts) == 1
    v = verdicts[0]
    assert v.kind is VerdictKind.GAMBLE
    assert v.expected_increase == pytest.approx(0.0)
    assert v.p_increase == pytest.approx(0.1)
    assert v.expected_positive == pytest.approx(1.0)


def test_why_furthers_when_expected_change_positive():
    _, graph, (a, b, d) = chain_graph()
    desire = _desire({"D"}, "act")
    index = register_desire(graph, desire, PropagationConfig(epsilon=1e-3))
    # coarse epsilon leaves I(A) < I(B), so `go` at A strictly furthers
    if index.value(b) > index.value(a):
        verdicts = why(graph, [index], a, "go", CommitmentThreshold(0.05))
        assert verdicts[0].kind is VerdictKind.FURTHERS
        assert verdicts[0].expected_increase > 0.0


def test_why_fulfilling_action_is_furthers():
    graph, index, (_, w, _) = _lottery()
    verdicts = why(graph, [index], w, "claim", CommitmentThreshold(0.5))
    assert verdicts[0].kind is VerdictKind.FURTHERS


def test_why_unattributed_state_single_unintentional():
    graph, index, (s, _, l) = _lottery()
    verdicts = why(graph, [index], s, "buy", CommitmentThreshold(0.5))
    assert verdicts == [pytest.approx(verdicts[0])]
    assert verdicts[0].kind is VerdictKind.UNINTENTIONAL
    assert verdicts[0].desire_id is None


def test_why_errors():
    graph, index, (s, w, l) = _lottery()
    other = graph.space.state({"v": "L"})
    with pytest.raises(NoEvidenceError):
        why(graph, [index], s, "claim", CommitmentThreshold(0.05))
    unseen_space = PredicateSpace(variables=(("v", ("S", "W", "L", "Z")),))
    z = unseen_space.state({"v": "Z"})
    with pytest.raises(UnseenStateError):
        why(graph, [index], z, "buy", CommitmentThreshold(0.05))


def test_verdict_mean_consistent_with_kind(kitchen):
    """Away from the fulfilling boundary, Furthers implies a positive mean
    and Unintentional/Gamble a non-positive one."""
    graph = kitchen["graph"]
    indices = kitchen["indices"]
    threshold = CommitmentThreshold(0.5)
    by_id = {idx.desire.id: idx for idx in indices}
    checked = 0
    for s in graph.occupancy:
        for a in set(a for a, _, _ in graph.successors(s)):
            verdicts = why(graph, indices, s, a, threshold)
            for v in verdicts:
                if v.desire_id is None:
                    continue
                idx = by_id[v.desire_id]
                fulfilling = (idx.desire.clause.satisfied_by(s)
                              and a == idx.desire.action)
                if fulfilling:
                    continue
                if v.kind is VerdictKind.FURTHERS:
                    assert v.expected_increase > 0.0
                else:
                    assert v.expected_increase <= 1e-12
                checked += 1
    assert checked > 10


def test_render_what_templates():
    assert render_what([]) == "I have no attributed intention in this state."
    text = render_what([("serve", 0.91)])
    assert "serve" in text and "0.910" in text
    custom = render_what([("serve", 0.91)],
                         templates={"what_one": "{desire}:{value:.1f}"})
    assert custom == "serve:0.9"


def test_render_how_shows_changes_and_fulfilment():
    _, graph, (a, b, d) = chain_graph()
    index = register_desire(graph, _desire({"D"}, "act"))
    text = render_how(a, how(graph, index, a))
    lines = text.splitlines()
    assert "v: A->B" in lines[0]
    assert lines[-1].endswith("act fulfils the desire.")


def test_render_why_covers_all_kinds():
    graph, index, (s, w, _) = _lottery()
    gamble = render_why("buy", why(graph, [index], s, "buy", CommitmentThreshold(0.05)))
    assert "gamble" in gamble and "0.100" in gamble
    furthers = render_why("claim", why(graph, [index], w, "claim",
                                       CommitmentThreshold(0.5)))
    assert "furthers" in furthers
    unint = render_why("buy", why(graph, [index], s, "buy", CommitmentThreshold(0.5)))
    assert unint == "This action is apparently unintentional."
