"""Exception hierarchy shared by all msdiff modules."""


class MsdiffError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameterError(MsdiffError):
    """A physical or numerical parameter is out of range; names the field."""


class ConfigurationError(MsdiffError):
    """Invalid simulation setup (grid, initial condition, config invariants)."""


class SchemaError(ConfigurationError):
    """Config document does not match the expected schema; carries a field path."""


class SingularSystemError(MsdiffError):
    """A dense linear system was (numerically) singular.

    Attributes:
        pivot_index: elimination column at which the pivot fell below tolerance
        system_index: index of the offending system within a batch (or None)
        context: free-form location info, e.g. "half-node 12 at t=0.0362"
    """

    def __init__(self, message, pivot_index=None, system_index=None, context=None):
        if context:
            message = f"{message} ({context})"
        super().__init__(message)
        self.pivot_index = pivot_index
        self.system_index = system_index
        self.context = context


class PositivityError(MsdiffError):
    """A species number density became negative; the run must abort.

    Attributes record where and when: time, node_index, species_index, value.
    """

    def __init__(self, time, node_index, species_index, value):
        super().__init__(
            f"negative number density n[{species_index}]={value:.6e} at node "
            f"{node_index}, t={time:.6g}; the explicit scheme has gone unstable"
        )
        self.time = time
        self.node_index = node_index
        self.species_index = species_index
        self.value = value


class ComparisonError(MsdiffError):
    """Two run reports cannot be compared (mismatched grid or schedule)."""
