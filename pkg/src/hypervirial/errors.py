"""Exception hierarchy shared by the engine, the oracle and the CLI."""


class HypervirialError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(HypervirialError, ValueError):
    """An argument lies outside the domain of the operation."""


class InternalConsistencyError(HypervirialError, RuntimeError):
    """A computed quantity violated an invariant that the algorithm guarantees."""


class OracleFailure(HypervirialError, RuntimeError):
    """The perturbation-theory oracle left a nonzero residual."""


class UnsupportedStateError(HypervirialError, ValueError):
    """The requested state is outside what the oracle ansatz can represent."""


class DegenerateSeriesError(HypervirialError, ValueError):
    """A coefficient needed as a divisor is zero."""


class FitUnreliableError(HypervirialError, RuntimeError):
    """The growth-law fit could not be trusted; carries partial diagnostics."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics


class BracketError(HypervirialError, RuntimeError):
    """No energy bracket containing the requested eigenvalue was found."""


class ConvergenceError(HypervirialError, RuntimeError):
    """An iterative solver hit its iteration cap."""
