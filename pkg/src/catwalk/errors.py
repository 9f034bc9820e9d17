"""Exception taxonomy.

Two families matter to callers: input problems (bad graph files, bad
parameters) and invariant violations (a run left the catalyst dirty,
metering went unbalanced, a structural size formula broke).  The service
maps the former to HTTP 422 and the latter to HTTP 500, and the CLI maps
those to exit codes 2 and 3.
"""


class CatwalkError(Exception):
    """Base class for all errors raised by this package."""


class InputError(CatwalkError):
    """The caller supplied something malformed or out of range."""


class GraphFormatError(InputError):
    """A graph file or edge list violates the expected format."""


class ConfigError(InputError):
    """A run configuration parameter is invalid (range, primality, ...)."""


class InvariantViolation(CatwalkError):
    """An internal guarantee failed; results cannot be trusted."""


class RestorationError(InvariantViolation):
    """The catalytic tape did not return to its initial contents."""


class MeterImbalanceError(InvariantViolation):
    """Workspace charges and releases did not cancel by the end of a run."""


class SpaceFormulaError(InvariantViolation):
    """A measured space figure disagrees with its structural formula."""
