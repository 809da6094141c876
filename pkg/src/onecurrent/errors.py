"""Exception hierarchy.

ValidationError covers malformed inputs (bad JSON, broken invariants on
load); SpaceError covers operations applied in a space where they are not
defined; NoTraceError signals a lifted loop that never meets the base
hyperplane; SolverError is raised defensively if the transport solver fails
to terminate (it cannot on finite inputs).
"""


class OneCurrentError(Exception):
    pass


class ValidationError(OneCurrentError, ValueError):
    pass


class SpaceError(OneCurrentError, ValueError):
    pass


class NoTraceError(OneCurrentError):
    pass


class SolverError(OneCurrentError, RuntimeError):
    pass


class CheckFailure(OneCurrentError):
    """A --check postcondition suite failed (CLI exit code 2)."""

