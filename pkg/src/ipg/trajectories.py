"""Trajectory files: line-delimited JSON, one step per line.

Each line carries ``episode``, ``t``, ``predicates``, ``action`` and an
optional ``raw`` payload kept verbatim. The last line of an episode has
``action: null`` and carries the terminal state so that every action in
the episode has a successor.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from .errors import EmptyInputError, IngestError
from .predicates import Discretiser, PredicateSpace, PredicateState


@dataclass(frozen=True)
class Step:
    episode: int
    t: int
    state: PredicateState
    action: str
    raw: Optional[object] = None


@dataclass(frozen=True)
class Episode:
    id: int
    steps: tuple[Step, ...]
    terminal: PredicateState
    terminal_raw: Optional[object] = None

    def __post_init__(self):
        if not self.steps:
            raise IngestError(f"episode {self.id} has no steps")

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class RawEpisode:
    """Pre-discretisation episode: opaque raw states plus actions."""

    id: int
    steps: tuple[tuple[object, str], ...]
    terminal_raw: object


def discretise_episodes(
    raw_episodes: Iterable[RawEpisode], discretiser: Discretiser
) -> list[Episode]:
    """Apply a discretiser per step, preserving raw payloads."""
    episodes = []
    for ep in raw_episodes:
        steps = []
        for t, (raw, action) in enumerate(ep.steps):
            try:
                state = discretiser(raw)
            except Exception as exc:
                raise IngestError(
                    f"discretiser failed at episode {ep.id} step {t}: {exc}"
                ) from exc
            steps.append(Step(episode=ep.id, t=t, state=state, action=action, raw=raw))
        try:
            terminal = discretiser(ep.terminal_raw)
        except Exception as exc:
            raise IngestError(
                f"discretiser failed at episode {ep.id} terminal state: {exc}"
            ) from exc
        episodes.append(
            Episode(
                id=ep.id,
                steps=tuple(steps),
                terminal=terminal,
                terminal_raw=ep.terminal_raw,
            )
        )
    return episodes


def load_trajectories(
    path,
    space: PredicateSpace,
    actions: Optional[Sequence[str]] = None,
) -> list[Episode]:
    """Load and validate a trajectory file.

    Episodes are grouped by id and sorted by t; non-consecutive step
    indices and unknown variables/values/actions are rejected. When
    ``actions`` is None the action set is not validated.
    """
    records: dict[int, list[dict]] = {}
    action_set = set(actions) if actions is not None else None
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise IngestError(f"{path}:{lineno}: invalid JSON ({exc})") from exc
            for key in ("episode", "t", "predicates"):
                if key not in rec:
                    raise IngestError(f"{path}:{lineno}: missing field {key!r}")
            action = rec.get("action")
            if action is not None and action_set is not None and action not in action_set:
                raise IngestError(f"{path}:{lineno}: unknown action {action!r}")
            try:
                rec["_state"] = space.state(rec["predicates"])
            except Exception as exc:
                raise IngestError(f"{path}:{lineno}: {exc}") from exc
            records.setdefault(int(rec["episode"]), []).append(rec)

    if not records:
        raise EmptyInputError(f"{path}: no trajectory records")
    episodes = []
    for ep_id in sorted(records):
        recs = sorted(records[ep_id], key=lambda r: r["t"])
        for i, rec in enumerate(recs):
            if rec["t"] != i:
                raise IngestError(
                    f"episode {ep_id}: non-consecutive step index {rec['t']} "
                    f"(expected {i})"
                )
        if recs[-1]["action"] is not None:
            raise IngestError(f"episode {ep_id}: missing terminal record (action null)")
        non_terminal = recs[:-1]
        if not non_terminal:
            raise IngestError(f"episode {ep_id}: has only a terminal record")
        for rec in non_terminal:
            if rec["action"] is None:
                raise IngestError(
                    f"episode {ep_id}: null action before the final step (t={rec['t']})"
                )
        steps = tuple(
            Step(
                episode=ep_id,
                t=rec["t"],
                state=rec["_state"],
                action=rec["action"],
                raw=rec.get("raw"),
            )
            for rec in non_terminal
        )
        episodes.append(
            Episode(
                id=ep_id,
                steps=steps,
                terminal=recs[-1]["_state"],
                terminal_raw=recs[-1].get("raw"),
            )
        )
    return episodes


def _raw_default(obj):
    if hasattr(obj, "to_json"):
        return obj.to_json()
    raise TypeError(f"raw payload of type {type(obj).__name__} is not serializable")


def write_trajectories(path, episodes: Iterable[Episode]) -> None:
    """Canonical writer; loading then re-writing is idempotent."""
    with open(path, "w") as fh:
        for ep in episodes:
            for step in ep.steps:
                rec = {
                    "episode": ep.id,
                    "t": step.t,
                    "predicates": step.state.assignment(),
                    "action": step.action,
                }
                if step.raw is not None:
                    rec["raw"] = step.raw
                fh.write(json.dumps(rec, sort_keys=True, default=_raw_default) + "\n")
            rec = {
                "episode": ep.id,
                "t": len(ep.steps),
                "predicates": ep.terminal.assignment(),
                "action": None,
            }
            if ep.terminal_raw is not None:
                rec["raw"] = ep.terminal_raw
            fh.write(json.dumps(rec, sort_keys=True, default=_raw_default) + "\n")
