"""Read-mostly HTTP/JSON API over a loaded policy graph.

Desire registration is the only mutation; it runs synchronously under a
lock so readers always see either the pre- or post-registration
snapshot. Binds to loopback by default; there is no authentication.
"""

from __future__ import annotations

import threading
import time
from typing import Optional

from fastapi import FastAPI, HTTPException, Query
from pydantic import BaseModel

from . import explain, revision
from .cli import metrics_report
from .errors import (
    ClauseValidationError,
    IpgError,
    NoEvidenceError,
    UnseenStateError,
)
from .graph import PolicyGraph
from .intention import (
    CommitmentThreshold,
    Desire,
    DesireClause,
    PropagationConfig,
    load_desires,
    register_desire,
)
from .trajectories import Episode, load_trajectories

PAGE_SIZE = 100


class SessionState:
    def __init__(self, graph: PolicyGraph, episodes: Optional[list[Episode]] = None,
                 epsilon: float = 1e-4):
        self.graph = graph
        self.episodes = {ep.id: ep for ep in (episodes or [])}
        self.epsilon = epsilon
        self.indices: dict[str, object] = {}
        self.lock = threading.Lock()

    @classmethod
    def load(cls, pg_path, trajectories_path=None, desires_path=None,
             epsilon: float = 1e-4) -> "SessionState":
        graph = PolicyGraph.load(pg_path)
        episodes = (
            load_trajectories(trajectories_path, graph.space)
            if trajectories_path
            else []
        )
        session = cls(graph, episodes, epsilon)
        if desires_path:
            for desire in load_desires(desires_path):
                session.register(desire)
        return session

    def register(self, desire: Desire, epsilon: Optional[float] = None) -> float:
        config = PropagationConfig(epsilon=epsilon or self.epsilon)
        started = time.perf_counter()
        index = register_desire(self.graph, desire, config)
        with self.lock:
            self.indices[desire.id] = index
        return time.perf_counter() - started

    def index_list(self):
        with self.lock:
            return list(self.indices.values())


class LiteralBody(BaseModel):
    var: str
    in_: list[str]

    model_config = {"populate_by_name": True}

    def __init__(self, **data):
        if "in" in data:
            data["in_"] = data.pop("in")
        super().__init__(**data)


class DesireBody(BaseModel):
    id: str
    where: list[LiteralBody]
    action: str
    epsilon: Optional[float] = None


def create_app(session: SessionState) -> FastAPI:
    app = FastAPI(title="ipg audit service")
    graph = session.graph

    def resolve_state(state_id: str):
        try:
            state = graph.space.state_from_id(state_id)
        except ClauseValidationError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        if state not in graph.occupancy:
            raise HTTPException(status_code=404, detail=f"unknown state {state_id!r}")
        return state

    def state_payload(state, commitment: float) -> dict:
        dist = graph.distributions(state)
        indices = session.index_list()
        return {
            "id": state.id,
            "predicates": state.assignment(),
            "p_state": dist.p_state,
            "terminal": dist.terminal,
            "action_probs": dist.action_probs,
            "transitions": [
                {"action": a, "to": s2.id, "p": p}
                for a, s2, p in dist.transition.entries
            ],
            "intentions": {idx.desire.id: idx.value(state) for idx in indices},
            "attributed": [
                {"desire": d, "intention": v}
                for d, v in explain.what(indices, state, CommitmentThreshold(commitment))
            ],
        }

    @app.get("/graph/summary")
    def graph_summary():
        return {
            "states": len(graph.occupancy),
            "edges": len(graph.transitions),
            "actions": sorted(graph.actions),
            "total_occupancy": graph.total_occupancy,
            "episodes": sorted(session.episodes),
            "desires": sorted(session.indices),
            "space": graph.space.to_json(),
        }

    @app.get("/states")
    def states(page: int = Query(default=0, ge=0)):
        ordered = graph.states()
        chunk = ordered[page * PAGE_SIZE : (page + 1) * PAGE_SIZE]
        return {
            "page": page,
            "page_size": PAGE_SIZE,
            "total": len(ordered),
            "states": [
                {"id": s.id, "occupancy": graph.occupancy[s], "p_state": graph.p_state(s)}
                for s in chunk
            ],
        }

    @app.get("/state/{state_id}")
    def state_detail(state_id: str, commitment: float = 0.5):
        return state_payload(resolve_state(state_id), commitment)

    @app.get("/desires")
    def list_desires():
        indices = session.index_list()
        return {
            "desires": [
                {
                    "id": idx.desire.id,
                    "where": idx.desire.clause.to_json(),
                    "action": idx.desire.action,
                    "epsilon": idx.config.epsilon,
                    "states_with_intention": len(idx.raw_values),
                }
                for idx in indices
            ]
        }

    @app.post("/desires", status_code=201)
    def post_desire(body: DesireBody):
        if body.id in session.indices:
            raise HTTPException(status_code=409, detail=f"desire {body.id!r} exists")
        desire = Desire(
            id=body.id,
            clause=DesireClause(
                literals=tuple((l.var, frozenset(l.in_)) for l in body.where)
            ),
            action=body.action,
        )
        try:
            desire.validate(graph)
        except ClauseValidationError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        duration = session.register(desire, body.epsilon)
        return {
            "id": desire.id,
            "duration_seconds": duration,
            "metrics": metrics_report(graph, session.index_list(), 0.5),
        }

    @app.delete("/desires/{desire_id}")
    def delete_desire(desire_id: str):
        with session.lock:
            if desire_id not in session.indices:
                raise HTTPException(status_code=404, detail=f"unknown desire {desire_id!r}")
            del session.indices[desire_id]
        return {"deleted": desire_id}

    @app.get("/query/what")
    def query_what(state: str, commitment: float = 0.5):
        st = resolve_state(state)
        result = explain.what(session.index_list(), st, CommitmentThreshold(commitment))
        return {
            "state": st.id,
            "attributed": [{"desire": d, "intention": v} for d, v in result],
            "text": explain.render_what(result),
        }

    @app.get("/query/how")
    def query_how(state: str, desire: str, max_depth: int = 64):
        st = resolve_state(state)
        with session.lock:
            index = session.indices.get(desire)
        if index is None:
            raise HTTPException(status_code=404, detail=f"unknown desire {desire!r}")
        try:
            plan = explain.how(graph, index, st, max_depth=max_depth)
        except IpgError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return {
            "state": st.id,
            "desire": desire,
            "plan": [
                {"action": s.action, "successor": s.successor.id, "intention": s.intention}
                for s in plan
            ],
            "text": explain.render_how(st, plan),
        }

    @app.get("/query/why")
    def query_why(state: str, action: str, commitment: float = 0.5):
        st = resolve_state(state)
        try:
            verdicts = explain.why(
                graph, session.index_list(), st, action, CommitmentThreshold(commitment)
            )
        except (NoEvidenceError, UnseenStateError) as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        return {
            "state": st.id,
            "action": action,
            "verdicts": [
                {
                    "kind": v.kind.value,
                    "desire": v.desire_id,
                    "expected_increase": v.expected_increase,
                    "p_increase": v.p_increase,
                    "expected_positive": v.expected_positive,
                }
                for v in verdicts
            ],
            "text": explain.render_why(action, verdicts),
        }

    @app.get("/metrics")
    def metrics_endpoint(commitment: float = 0.5, curve: Optional[str] = None):
        return metrics_report(graph, session.index_list(), commitment, curve)

    @app.get("/timeline/{episode_id}")
    def timeline(episode_id: int, commitment: float = 0.5):
        episode = session.episodes.get(episode_id)
        if episode is None:
            raise HTTPException(status_code=404, detail=f"unknown episode {episode_id}")
        annotation = revision.annotate(
            graph, session.index_list(), episode, CommitmentThreshold(commitment)
        )
        return {
            "episode": episode_id,
            "commitment": commitment,
            "steps": [
                {
                    "t": s.t,
                    "state": s.state_id,
                    "action": s.action,
                    "values": s.values,
                    "attributed": list(s.attributed),
                    "fulfilled": list(s.fulfilled),
                    "unseen": s.unseen,
                }
                for s in annotation.steps
            ],
        }

    @app.get("/regions/{episode_id}")
    def regions_endpoint(
        episode_id: int,
        commitment: float = 0.5,
        minlen: int = 5,
        grace: int = 1,
        stall: int = 50,
    ):
        episode = session.episodes.get(episode_id)
        if episode is None:
            raise HTTPException(status_code=404, detail=f"unknown episode {episode_id}")
        threshold = CommitmentThreshold(commitment)
        annotation = revision.annotate(graph, session.index_list(), episode, threshold)
        found = revision.find_unintentional(annotation, threshold, minlen)
        found += revision.find_unfulfilled(annotation, threshold, grace, stall)
        return {
            "episode": episode_id,
            "commitment": commitment,
            "regions": [
                {
                    "kind": r.kind.value,
                    "t_start": r.t_start,
                    "t_end": r.t_end,
                    "desire": r.desire_id,
                    "peak": r.peak,
                }
                for r in sorted(found, key=lambda r: (r.t_start, r.t_end, r.kind.value))
            ],
        }

    return app
