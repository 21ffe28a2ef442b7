"""Exception hierarchy shared across the package.

Everything user-facing derives from IpgError so the CLI and service can
map domain failures to exit code 1 / structured HTTP errors uniformly.
"""


class IpgError(Exception):
    """Base class for all domain errors."""


class SpaceMismatchError(IpgError):
    """Two objects built over different predicate spaces were combined."""


class ClauseValidationError(IpgError):
    """A desire clause references unknown variables or values."""


class IngestError(IpgError):
    """A trajectory file is malformed or violates episode invariants."""


class EmptyInputError(IpgError):
    """An operation that needs at least one episode/state got none."""


class EmptyGraphError(IpgError):
    """The policy graph has no occupied states."""


class UnseenStateError(IpgError):
    """A queried state was never observed in the graph."""


class GraphFormatError(IpgError):
    """A policy-graph file failed version or checksum validation."""


class PropagationBudgetError(IpgError):
    """Intention propagation exceeded its update budget."""

    def __init__(self, message, active_states=None):
        super().__init__(message)
        self.active_states = active_states or []


class ZeroIntentionError(IpgError):
    """A plan was requested from a state with no intention value."""


class NoImprovingPathError(IpgError):
    """Greedy planning cycled or hit max depth before reaching the goal region."""


class NoEvidenceError(IpgError):
    """The (state, action) pair was never observed; no verdict can be given."""


class TemplateError(IpgError):
    """A rendering template key is missing."""
