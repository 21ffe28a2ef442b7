"""Command-line entry point: gen, ingest, build, desires, metrics, query,
regions, serve.

Machine-readable JSON goes to stdout by default; ``--format text`` uses
the explanation templates. Domain errors exit 1, usage errors exit 2.
"""

from __future__ import annotations

import csv
import json
import logging
import os
import sys
from dataclasses import asdict

import click

from . import explain, metrics, revision
from .envs import generate_trajectories
from .envs.mini_kitchen import mini_kitchen_desires, mini_kitchen_fixture
from .envs.traffic_light import traffic_light_fixture
from .errors import IpgError
from .graph import PolicyGraph
from .intention import (
    CommitmentThreshold,
    PropagationConfig,
    attributed_desires,
    desire_metrics,
    load_desires,
    register_desire,
    save_desires,
)
from .predicates import load_space, save_space
from .trajectories import load_trajectories

logging.basicConfig(level=os.environ.get("IPG_LOG", "WARNING"))
log = logging.getLogger("ipg")


def _fixture(env_name: str, agent_name: str, discretiser_name: str):
    if env_name == "traffic-light":
        env, agent, disc_g, disc_r = traffic_light_fixture()
        disc = disc_g if discretiser_name != "R" else disc_r
        return env, agent, disc, []
    if env_name == "mini-kitchen":
        env, competent, rnd, disc = mini_kitchen_fixture()
        agent = rnd if agent_name == "random" else competent
        return env, agent, disc, mini_kitchen_desires()
    raise click.UsageError(f"unknown environment {env_name!r}")


def _load_session(pg_path, desires_path, epsilon):
    graph = PolicyGraph.load(pg_path)
    indices = []
    if desires_path:
        config = PropagationConfig(epsilon=epsilon)
        for desire in load_desires(desires_path):
            indices.append(register_desire(graph, desire, config))
    return graph, indices


def _emit(payload) -> None:
    click.echo(json.dumps(payload, indent=2, sort_keys=True))


@click.group()
def main():
    """Intention-aware policy graph toolkit."""


@main.command()
@click.option("--env", "env_name", required=True,
              type=click.Choice(["traffic-light", "mini-kitchen"]))
@click.option("--agent", "agent_name", default="competent",
              type=click.Choice(["competent", "random"]))
@click.option("--discretiser", "discretiser_name", default="G",
              type=click.Choice(["G", "R"]),
              help="Traffic-light only: which state to distinguish.")
@click.option("--episodes", default=100, show_default=True)
@click.option("--horizon", default=100, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", required=True, type=click.Path())
@click.option("--space-out", type=click.Path(), help="Also write the predicate space file.")
@click.option("--desires-out", type=click.Path(), help="Also write the fixture desires file.")
def gen(env_name, agent_name, discretiser_name, episodes, horizon, seed, out,
        space_out, desires_out):
    """Generate a trajectory file from a fixture environment."""
    env, agent, disc, desires = _fixture(env_name, agent_name, discretiser_name)
    eps = generate_trajectories(env, agent, disc, episodes, horizon, seed, out)
    if space_out:
        save_space(disc.space, space_out)
    if desires_out:
        save_desires(desires, desires_out)
    _emit({
        "episodes": len(eps),
        "steps": sum(len(e) for e in eps),
        "actions": sorted(env.actions),
        "out": out,
    })


@main.command()
@click.option("--trajectories", required=True, type=click.Path(exists=True))
@click.option("--space", "space_path", required=True, type=click.Path(exists=True))
@click.option("--actions", default=None, help="Comma-separated declared action set.")
def ingest(trajectories, space_path, actions):
    """Validate a trajectory file and report its shape."""
    space = load_space(space_path)
    action_set = actions.split(",") if actions else None
    eps = load_trajectories(trajectories, space, action_set)
    _emit({
        "episodes": len(eps),
        "steps": sum(len(e) for e in eps),
        "distinct_states": len({s.state.id for e in eps for s in e.steps}
                                | {e.terminal.id for e in eps}),
    })


@main.command()
@click.option("--trajectories", required=True, type=click.Path(exists=True))
@click.option("--space", "space_path", required=True, type=click.Path(exists=True))
@click.option("--actions", default=None, help="Comma-separated declared action set.")
@click.option("--out", required=True, type=click.Path())
def build(trajectories, space_path, actions, out):
    """Build a policy graph file from trajectories."""
    space = load_space(space_path)
    action_set = actions.split(",") if actions else None
    eps = load_trajectories(trajectories, space, action_set)
    graph = PolicyGraph.from_episodes(eps)
    graph.save(out)
    _emit({"states": len(graph.occupancy), "edges": len(graph.transitions), "out": out})


@main.group()
def desires():
    """Desire registration commands."""


@desires.command()
@click.option("--pg", "pg_path", required=True, type=click.Path(exists=True))
@click.option("--desires", "desires_path", required=True, type=click.Path(exists=True))
@click.option("--epsilon", default=1e-4, show_default=True)
@click.option("--out", required=True, type=click.Path(),
              help="CSV dump: state_id,desire_id,value")
def register(pg_path, desires_path, epsilon, out):
    """Register desires and dump the intention indices."""
    graph, indices = _load_session(pg_path, desires_path, epsilon)
    with open(out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["state_id", "desire_id", "value"])
        for idx in indices:
            for state in sorted(idx.raw_values, key=lambda s: s.id):
                writer.writerow([state.id, idx.desire.id, repr(idx.value(state))])
    summary = {}
    for idx in indices:
        region_prob, action_prob = desire_metrics(graph, idx.desire)
        summary[idx.desire.id] = {
            "region_probability": region_prob,
            "action_probability": action_prob,
            "states_with_intention": len(idx.raw_values),
        }
    _emit({"desires": summary, "out": out})


@main.command("metrics")
@click.option("--pg", "pg_path", required=True, type=click.Path(exists=True))
@click.option("--desires", "desires_path", default=None, type=click.Path(exists=True))
@click.option("--commitment", default=0.5, show_default=True)
@click.option("--epsilon", default=1e-4, show_default=True)
@click.option("--curve", default=None,
              help="Comma-separated commitment grid for the trade-off curve.")
@click.option("--out", default=None, type=click.Path())
def metrics_cmd(pg_path, desires_path, commitment, epsilon, curve, out):
    """Entropy, desire and intention metric report."""
    graph, indices = _load_session(pg_path, desires_path, epsilon)
    report = metrics_report(graph, indices, commitment, curve)
    if out:
        with open(out, "w") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    _emit(report)


def metrics_report(graph, indices, commitment, curve=None) -> dict:
    entropy = metrics.entropy_report(graph)
    report = {
        "entropy": {
            "weighted": asdict(entropy.weighted),
            "unweighted": asdict(entropy.unweighted),
        },
        "states": len(graph.occupancy),
        "total_occupancy": graph.total_occupancy,
    }
    if indices:
        threshold = CommitmentThreshold(commitment)
        per_desire = {}
        for idx in indices:
            region_prob, action_prob = desire_metrics(graph, idx.desire)
            prob, expected = metrics.intention_metrics(graph, idx, threshold)
            per_desire[idx.desire.id] = {
                "region_probability": region_prob,
                "action_probability": action_prob,
                "intention_probability": prob,
                "expected_intention": expected,
            }
        interp, reli = metrics.any_desire_metrics(graph, indices, threshold)
        report["desires"] = per_desire
        report["any_desire"] = {"interpretability": interp, "reliability": reli}
        if curve:
            grid = [float(c) for c in curve.split(",")]
            points = metrics.tradeoff_curve(graph, indices, grid)
            report["curve"] = [
                {
                    "commitment": p.threshold,
                    "interpretability": p.interpretability,
                    "reliability": p.reliability,
                    "per_desire": {
                        d: {"intention_probability": ip, "expected_intention": ei}
                        for d, (ip, ei) in p.per_desire.items()
                    },
                }
                for p in points
            ]
    return report


@main.group()
def query():
    """What / how / why queries against a policy graph."""


def _query_session(pg_path, desires_path, epsilon, state_id):
    graph, indices = _load_session(pg_path, desires_path, epsilon)
    state = graph.space.state_from_id(state_id)
    return graph, indices, state


@query.command()
@click.option("--pg", "pg_path", required=True, type=click.Path(exists=True))
@click.option("--desires", "desires_path", required=True, type=click.Path(exists=True))
@click.option("--state", "state_id", required=True)
@click.option("--commitment", default=0.5, show_default=True)
@click.option("--epsilon", default=1e-4, show_default=True)
@click.option("--format", "fmt", default="json", type=click.Choice(["json", "text"]))
def what(pg_path, desires_path, state_id, commitment, epsilon, fmt):
    graph, indices, state = _query_session(pg_path, desires_path, epsilon, state_id)
    result = explain.what(indices, state, CommitmentThreshold(commitment))
    if fmt == "text":
        click.echo(explain.render_what(result))
    else:
        _emit({"state": state.id, "attributed": [
            {"desire": d, "intention": v} for d, v in result
        ]})


@query.command()
@click.option("--pg", "pg_path", required=True, type=click.Path(exists=True))
@click.option("--desires", "desires_path", required=True, type=click.Path(exists=True))
@click.option("--state", "state_id", required=True)
@click.option("--desire", "desire_id", required=True)
@click.option("--max-depth", default=64, show_default=True)
@click.option("--epsilon", default=1e-4, show_default=True)
@click.option("--format", "fmt", default="json", type=click.Choice(["json", "text"]))
def how(pg_path, desires_path, state_id, desire_id, max_depth, epsilon, fmt):
    graph, indices, state = _query_session(pg_path, desires_path, epsilon, state_id)
    index = _index_by_id(indices, desire_id)
    plan = explain.how(graph, index, state, max_depth=max_depth)
    if fmt == "text":
        click.echo(explain.render_how(state, plan))
    else:
        _emit({"state": state.id, "desire": desire_id, "plan": [
            {"action": s.action, "successor": s.successor.id, "intention": s.intention}
            for s in plan
        ]})


@query.command()
@click.option("--pg", "pg_path", required=True, type=click.Path(exists=True))
@click.option("--desires", "desires_path", required=True, type=click.Path(exists=True))
@click.option("--state", "state_id", required=True)
@click.option("--action", required=True)
@click.option("--commitment", default=0.5, show_default=True)
@click.option("--epsilon", default=1e-4, show_default=True)
@click.option("--format", "fmt", default="json", type=click.Choice(["json", "text"]))
def why(pg_path, desires_path, state_id, action, commitment, epsilon, fmt):
    graph, indices, state = _query_session(pg_path, desires_path, epsilon, state_id)
    verdicts = explain.why(graph, indices, state, action, CommitmentThreshold(commitment))
    if fmt == "text":
        click.echo(explain.render_why(action, verdicts))
    else:
        _emit({"state": state.id, "action": action, "verdicts": [
            _verdict_json(v) for v in verdicts
        ]})


def _verdict_json(v: explain.WhyVerdict) -> dict:
    return {
        "kind": v.kind.value,
        "desire": v.desire_id,
        "expected_increase": v.expected_increase,
        "p_increase": v.p_increase,
        "expected_positive": v.expected_positive,
    }


def _index_by_id(indices, desire_id):
    for idx in indices:
        if idx.desire.id == desire_id:
            return idx
    raise IpgError(f"desire {desire_id!r} is not registered")


@main.command()
@click.option("--pg", "pg_path", required=True, type=click.Path(exists=True))
@click.option("--desires", "desires_path", required=True, type=click.Path(exists=True))
@click.option("--trajectories", required=True, type=click.Path(exists=True))
@click.option("--episode", "episode_id", default=None, type=int,
              help="Restrict to one episode id.")
@click.option("--commitment", default=0.5, show_default=True)
@click.option("--epsilon", default=1e-4, show_default=True)
@click.option("--min-len", default=5, show_default=True)
@click.option("--grace", default=1, show_default=True)
@click.option("--stall", default=50, show_default=True)
@click.option("--out", default=None, type=click.Path())
def regions(pg_path, desires_path, trajectories, episode_id, commitment, epsilon,
            min_len, grace, stall, out):
    """Detect unintentional / unfulfilled / stalled regions per episode."""
    graph, indices = _load_session(pg_path, desires_path, epsilon)
    episodes = load_trajectories(trajectories, graph.space)
    if episode_id is not None:
        episodes = [e for e in episodes if e.id == episode_id]
        if not episodes:
            raise IpgError(f"episode {episode_id} not found in {trajectories}")
    threshold = CommitmentThreshold(commitment)
    rows = []
    for ep in episodes:
        annotation = revision.annotate(graph, indices, ep, threshold)
        found = revision.find_unintentional(annotation, threshold, min_len)
        found += revision.find_unfulfilled(annotation, threshold, grace, stall)
        for region in sorted(found, key=lambda r: (r.t_start, r.t_end, r.kind.value)):
            rows.append({
                "episode": ep.id,
                "kind": region.kind.value,
                "t_start": region.t_start,
                "t_end": region.t_end,
                "desire": region.desire_id,
                "peak": region.peak,
            })
    payload = {"regions": rows, "commitment": commitment,
               "min_len": min_len, "grace": grace, "stall": stall}
    if out:
        with open(out, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    _emit(payload)


@main.command()
@click.option("--pg", "pg_path", required=True, type=click.Path(exists=True))
@click.option("--trajectories", default=None, type=click.Path(exists=True))
@click.option("--desires", "desires_path", default=None, type=click.Path(exists=True))
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8420, show_default=True)
def serve(pg_path, trajectories, desires_path, host, port):
    """Serve the audit HTTP API over a loaded policy graph."""
    import uvicorn

    from .service import SessionState, create_app

    session = SessionState.load(pg_path, trajectories, desires_path)
    uvicorn.run(create_app(session), host=host, port=port)


def entrypoint(argv=None) -> int:
    try:
        main.main(args=argv, standalone_mode=False)
        return 0
    except click.UsageError as exc:
        exc.show()
        return 2
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.exceptions.Abort:
        return 2
    except IpgError as exc:
        click.echo(f"error: {exc}", err=True)
        return 1


if __name__ == "__main__":
    sys.exit(entrypoint())
