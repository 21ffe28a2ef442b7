"""Predicate spaces, discrete states, and desire clauses.

A discrete state is a total assignment of finite-domain predicate
variables. The declaration order of the variables fixes the canonical
serialization (``name=value|...``), and the distance between two states
is the number of variables whose values differ.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterator, Mapping, Protocol

from .errors import ClauseValidationError, SpaceMismatchError


@dataclass(frozen=True)
class PredicateSpace:
    """Ordered list of (variable name, finite value domain) pairs."""

    variables: tuple[tuple[str, tuple[str, ...]], ...]

    def __post_init__(self):
        names = [name for name, _ in self.variables]
        if len(names) != len(set(names)):
            raise ClauseValidationError(f"duplicate variable names in space: {names}")
        for name, domain in self.variables:
            if not domain:
                raise ClauseValidationError(f"variable {name!r} has an empty domain")
            if len(domain) != len(set(domain)):
                raise ClauseValidationError(f"variable {name!r} has duplicate values")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.variables)

    def domain(self, name: str) -> tuple[str, ...]:
        for var, dom in self.variables:
            if var == name:
                return dom
        raise ClauseValidationError(f"unknown variable {name!r}")

    def state(self, assignment: Mapping[str, str]) -> PredicateState:
        """Build a total state from a name -> value mapping."""
        values = []
        for name, dom in self.variables:
            if name not in assignment:
                raise ClauseValidationError(f"missing value for variable {name!r}")
            value = assignment[name]
            if value not in dom:
                raise ClauseValidationError(
                    f"value {value!r} not in domain of {name!r} {dom}"
                )
            values.append(value)
        extra = set(assignment) - set(self.names)
        if extra:
            raise ClauseValidationError(f"unknown variables in assignment: {sorted(extra)}")
        return PredicateState(space=self, values=tuple(values))

    def state_from_id(self, state_id: str) -> PredicateState:
        """Parse a canonical ``name=value|...`` id back into a state."""
        assignment = {}
        for part in state_id.split("|"):
            if "=" not in part:
                raise ClauseValidationError(f"malformed state id fragment {part!r}")
            name, value = part.split("=", 1)
            assignment[name] = value
        return self.state(assignment)

    def enumerate_states(self) -> Iterator[PredicateState]:
        domains = [dom for _, dom in self.variables]
        for combo in itertools.product(*domains):
            yield PredicateState(space=self, values=tuple(combo))

    def size(self) -> int:
        n = 1
        for _, dom in self.variables:
            n *= len(dom)
        return n

    def to_json(self) -> dict:
        return {
            "variables": [
                {"name": name, "domain": list(dom)} for name, dom in self.variables
            ]
        }

    @classmethod
    def from_json(cls, payload: dict) -> PredicateSpace:
        return cls(
            variables=tuple(
                (var["name"], tuple(var["domain"])) for var in payload["variables"]
            )
        )


@dataclass(frozen=True)
class PredicateState:
    """Total assignment over a PredicateSpace, canonically ordered."""

    space: PredicateSpace
    values: tuple[str, ...]

    @property
    def id(self) -> str:
        return "|".join(
            f"{name}={value}" for name, value in zip(self.space.names, self.values)
        )

    def __getitem__(self, name: str) -> str:
        try:
            return self.values[self.space.names.index(name)]
        except ValueError:
            raise ClauseValidationError(f"unknown variable {name!r}") from None

    def assignment(self) -> dict[str, str]:
        return dict(zip(self.space.names, self.values))

    def distance(self, other: PredicateState) -> int:
        """Number of differing predicates; a metric on one space."""
        if self.space != other.space:
            raise SpaceMismatchError("states belong to different predicate spaces")
        return sum(a != b for a, b in zip(self.values, other.values))

    def __repr__(self) -> str:
        return f"PredicateState({self.id})"


def distance(s1: PredicateState, s2: PredicateState) -> int:
    return s1.distance(s2)


@dataclass(frozen=True)
class DesireClause:
    """Conjunction of membership literals (variable, allowed values)."""

    literals: tuple[tuple[str, frozenset[str]], ...]

    def validate(self, space: PredicateSpace) -> None:
        for var, allowed in self.literals:
            dom = set(space.domain(var))  # raises on unknown variable
            if not allowed:
                raise ClauseValidationError(f"empty membership set for {var!r}")
            unknown = set(allowed) - dom
            if unknown:
                raise ClauseValidationError(
                    f"values {sorted(unknown)} not in domain of {var!r}"
                )

    def satisfied_by(self, state: PredicateState) -> bool:
        return all(state[var] in allowed for var, allowed in self.literals)

    def to_json(self) -> list[dict]:
        return [{"var": var, "in": sorted(allowed)} for var, allowed in self.literals]

    @classmethod
    def from_json(cls, payload: list[dict]) -> DesireClause:
        return cls(
            literals=tuple((lit["var"], frozenset(lit["in"])) for lit in payload)
        )


def satisfies(state: PredicateState, clause: DesireClause) -> bool:
    return clause.satisfied_by(state)


class Discretiser(Protocol):
    """Deterministic total mapping from raw environment states to PredicateState."""

    space: PredicateSpace

    def __call__(self, raw) -> PredicateState: ...


def load_space(path) -> PredicateSpace:
    with open(path) as fh:
        return PredicateSpace.from_json(json.load(fh))


def save_space(space: PredicateSpace, path) -> None:
    with open(path, "w") as fh:
        json.dump(space.to_json(), fh, indent=2)
        fh.write("\n")
