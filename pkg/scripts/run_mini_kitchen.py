"""Mini-kitchen end-to-end run.

Generates trajectories with the scripted cook, builds the policy graph,
registers the three kitchen desires, and prints the interpretability /
reliability trade-off curve plus a what/how/why sample and the revision
regions of the first episode.
"""

import argparse
import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from ipg import explain, revision
from ipg.envs import rollout_episodes
from ipg.envs.mini_kitchen import mini_kitchen_desires, mini_kitchen_fixture
from ipg.graph import build
from ipg.intention import CommitmentThreshold, PropagationConfig, register_desire
from ipg.metrics import tradeoff_curve


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--episodes", type=int, default=200)
    parser.add_argument("--horizon", type=int, default=80)
    parser.add_argument("--seed", type=int, default=11)
    parser.add_argument("--commitment", type=float, default=0.5)
    parser.add_argument("--epsilon", type=float, default=1e-6)
    args = parser.parse_args()

    env, agent, _, disc = mini_kitchen_fixture()
    episodes = rollout_episodes(env, agent, disc, n_episodes=args.episodes,
                                horizon=args.horizon, seed=args.seed)
    graph = build(episodes)
    config = PropagationConfig(epsilon=args.epsilon)
    indices = [register_desire(graph, d, config) for d in mini_kitchen_desires()]
    threshold = CommitmentThreshold(args.commitment)

    print(f"graph: {len(graph.occupancy)} states, "
          f"{len(graph.transitions)} transitions")
    grid = [round(0.05 * i, 2) for i in range(1, 20)]
    print("\ncommitment  interpretability  reliability")
    for point in tradeoff_curve(graph, indices, grid):
        reli = "-" if point.reliability is None else f"{point.reliability:.3f}"
        print(f"{point.threshold:10.2f}  {point.interpretability:16.3f}  {reli:>11}")

    probe = max(
        (s for s in graph.states() if not graph.is_terminal(s)),
        key=lambda s: max(idx.value(s) for idx in indices),
    )
    attributed = explain.what(indices, probe, threshold)
    print(f"\nstate {probe.id}")
    print(explain.render_what(attributed))
    if attributed:
        index = next(i for i in indices if i.desire.id == attributed[0][0])
        print(explain.render_how(probe, explain.how(graph, index, probe)))
        action = max(graph.action_probs(probe).items(), key=lambda kv: kv[1])[0]
        verdicts = explain.why(graph, indices, probe, action, threshold)
        print(explain.render_why(action, verdicts))

    annotation = revision.annotate(graph, indices, episodes[0], threshold)
    found = revision.find_unintentional(annotation, threshold)
    found += revision.find_unfulfilled(annotation, threshold)
    print(f"\nepisode 0 regions ({len(found)}):")
    for region in found:
        print(json.dumps({
            "kind": region.kind.value, "t_start": region.t_start,
            "t_end": region.t_end, "desire": region.desire_id,
            "peak": round(region.peak, 3),
        }))


if __name__ == "__main__":
    main()
