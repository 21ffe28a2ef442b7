import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ipg.envs import rollout_episodes
from ipg.envs.mini_kitchen import mini_kitchen_desires, mini_kitchen_fixture
from ipg.envs.traffic_light import traffic_light_fixture
from ipg.graph import PolicyGraph
from ipg.intention import PropagationConfig, register_desire
from ipg.predicates import DesireClause, PredicateSpace


@pytest.fixture(scope="session")
def kitchen():
    """Mini-kitchen fixture: env, agents, discretiser, episodes, graph, indices."""
    env, competent, random_agent, discretiser = mini_kitchen_fixture()
    episodes = rollout_episodes(env, competent, discretiser,
                                n_episodes=200, horizon=80, seed=11)
    graph = PolicyGraph.from_episodes(episodes)
    desires = mini_kitchen_desires()
    indices = [register_desire(graph, d, PropagationConfig(epsilon=1e-6))
               for d in desires]
    return {
        "env": env,
        "competent": competent,
        "random": random_agent,
        "discretiser": discretiser,
        "episodes": episodes,
        "graph": graph,
        "desires": desires,
        "indices": indices,
    }


@pytest.fixture(scope="session")
def traffic():
    env, agent, disc_g, disc_r = traffic_light_fixture()
    return {"env": env, "agent": agent, "disc_g": disc_g, "disc_r": disc_r}


@pytest.fixture
def tiny_space():
    return PredicateSpace(
        variables=(("held", ("O", "D", "S", "none")), ("pot", ("Empty", "Full")))
    )


def chain_graph():
    """A -> B -> D with D in the desire region; includes a B -> A loop edge."""
    space = PredicateSpace(variables=(("v", ("A", "B", "D")),))
    a = space.state({"v": "A"})
    b = space.state({"v": "B"})
    d = space.state({"v": "D"})
    transitions = {
        (a, "go", b): 2,
        (b, "go", d): 1,
        (b, "go", a): 1,
        (d, "act", a): 2,
    }
    occupancy = {a: 4, b: 2, d: 2}
    graph = PolicyGraph.from_counts(space, ("go", "act"), occupancy, transitions)
    return space, graph, (a, b, d)
