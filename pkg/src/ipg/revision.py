"""Timeline annotation and region detection for the revision loop.

An annotated episode carries, per step, the intention value of every
registered desire plus the attributed set under a commitment threshold.
Unintentional regions are maximal runs where no desire clears the
threshold; unfulfilled regions track a single desire whose attribution
lapses (or stalls) without its fulfilling transition happening.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from .errors import EmptyGraphError, SpaceMismatchError
from .graph import PolicyGraph
from .intention import CommitmentThreshold, IntentionIndex
from .predicates import PredicateState
from .trajectories import Episode, Step


class RegionKind(Enum):
    UNINTENTIONAL = "unintentional"
    UNFULFILLED = "unfulfilled"
    STALLED = "stalled"


@dataclass(frozen=True)
class Region:
    kind: RegionKind
    t_start: int
    t_end: int
    desire_id: Optional[str] = None
    peak: float = 0.0


@dataclass(frozen=True)
class StepAnnotation:
    t: int
    state_id: str
    action: str
    values: dict[str, float]
    attributed: tuple[str, ...]
    fulfilled: tuple[str, ...]
    unseen: bool


@dataclass(frozen=True)
class TimelineAnnotation:
    episode_id: int
    threshold: float
    steps: tuple[StepAnnotation, ...]

    def __len__(self) -> int:
        return len(self.steps)


def annotate(
    graph: PolicyGraph,
    indices: Sequence[IntentionIndex],
    episode: Episode,
    threshold: CommitmentThreshold,
) -> TimelineAnnotation:
    steps = []
    for step in episode.steps:
        if step.state.space != graph.space:
            raise SpaceMismatchError("episode states use a different predicate space")
        unseen = step.state not in graph.occupancy
        lookup = graph.nearest_state(step.state) if unseen else step.state
        values = {idx.desire.id: idx.value(lookup) for idx in indices}
        attributed = tuple(
            sorted(d for d, v in values.items() if v > threshold.value)
        )
        fulfilled = tuple(
            sorted(
                idx.desire.id
                for idx in indices
                if idx.desire.clause.satisfied_by(step.state)
                and step.action == idx.desire.action
            )
        )
        steps.append(
            StepAnnotation(
                t=step.t,
                state_id=step.state.id,
                action=step.action,
                values=values,
                attributed=attributed,
                fulfilled=fulfilled,
                unseen=unseen,
            )
        )
    return TimelineAnnotation(
        episode_id=episode.id, threshold=threshold.value, steps=tuple(steps)
    )


def find_unintentional(
    annotation: TimelineAnnotation, threshold: CommitmentThreshold, min_len: int = 5
) -> list[Region]:
    """Maximal runs of length >= min_len with every desire at or below C."""
    regions = []
    start = None
    for step in annotation.steps:
        quiet = all(v <= threshold.value for v in step.values.values())
        if quiet and start is None:
            start = step.t
        elif not quiet and start is not None:
            if step.t - start >= min_len:
                regions.append(
                    Region(RegionKind.UNINTENTIONAL, t_start=start, t_end=step.t - 1)
                )
            start = None
    if start is not None:
        end = annotation.steps[-1].t
        if end - start + 1 >= min_len:
            regions.append(Region(RegionKind.UNINTENTIONAL, t_start=start, t_end=end))
    return regions


def find_unfulfilled(
    annotation: TimelineAnnotation,
    threshold: CommitmentThreshold,
    grace: int = 1,
    stall_horizon: int = 50,
) -> list[Region]:
    """Per-desire candidate tracking.

    A candidate opens when a desire's value first exceeds C. It closes
    silently on the desire's fulfilling transition, as Unfulfilled when
    the value stays at or below C for more than ``grace`` consecutive
    steps, and as Stalled when attribution persists for more than
    ``stall_horizon`` steps without fulfilment. After a Stalled close,
    a new candidate only opens once the value has dropped below C.
    """
    desire_ids = sorted(annotation.steps[0].values) if annotation.steps else []
    regions = []
    for d in desire_ids:
        open_t: Optional[int] = None
        last_attr_t: Optional[int] = None
        peak = 0.0
        below_run = 0
        attributed_run = 0
        need_reset = False  # after a stall, wait for value to drop below C
        for step in annotation.steps:
            v = step.values[d]
            above = v > threshold.value
            if not above:
                need_reset = False
            if open_t is None:
                if above and not need_reset:
                    open_t = step.t
                    last_attr_t = step.t
                    peak = v
                    below_run = 0
                    attributed_run = 1
            else:
                peak = max(peak, v)
                if d in step.fulfilled:
                    open_t = None
                    continue
                if above:
                    below_run = 0
                    attributed_run += 1
                    last_attr_t = step.t
                    if attributed_run > stall_horizon:
                        regions.append(
                            Region(RegionKind.STALLED, open_t, step.t, d, peak)
                        )
                        open_t = None
                        need_reset = True
                else:
                    below_run += 1
                    attributed_run = 0
                    if below_run > grace:
                        regions.append(
                            Region(RegionKind.UNFULFILLED, open_t, last_attr_t, d, peak)
                        )
                        open_t = None
        if open_t is not None:
            regions.append(
                Region(RegionKind.UNFULFILLED, open_t, last_attr_t, d, peak)
            )
    return sorted(regions, key=lambda r: (r.t_start, r.t_end, r.kind.value, r.desire_id or ""))


def sample_timeline(
    graph: PolicyGraph,
    n_steps: int,
    start: PredicateState,
    seed: int = 0,
    episode_id: int = 0,
) -> Episode:
    """Synthetic episode by sampling P(s', a | s); ends early on absorption."""
    if not graph.occupancy:
        raise EmptyGraphError("cannot sample from an empty graph")
    rng = random.Random(seed)
    current = start if start in graph.occupancy else graph.nearest_state(start)
    steps = []
    for t in range(n_steps):
        dist = graph.transition_dist(current)
        if not dist.entries:
            break
        weights = [p for _, _, p in dist.entries]
        action, nxt, _ = rng.choices(dist.entries, weights=weights, k=1)[0]
        steps.append(Step(episode=episode_id, t=t, state=current, action=action))
        current = nxt
    if not steps:
        raise EmptyGraphError(f"start state {current.id} is terminal")
    return Episode(id=episode_id, steps=tuple(steps), terminal=current)
