"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: semantic violations exit 1, capacity
overruns exit 2, I/O and schema problems exit 3.
"""


class TwistcohError(Exception):
    """Base class for all library errors."""


class InvalidParameterError(TwistcohError):
    """An argument violates a documented precondition or invariant."""


class CocycleError(InvalidParameterError):
    """A table fails the 2-cocycle identity; carries the violating triple."""

    def __init__(self, message, triple=None):
        super().__init__(message)
        self.triple = triple


class CapacityError(TwistcohError):
    """A computation exceeds a configured size bound."""

    def __init__(self, message, bound_name=None, bound=None, actual=None):
        super().__init__(message)
        self.bound_name = bound_name
        self.bound = bound
        self.actual = actual


class UnsupportedModeError(TwistcohError):
    """A classification mode the library deliberately does not guess at."""


class RegistryError(InvalidParameterError):
    """Unknown structure-group name; lists registered names."""

    def __init__(self, name, known):
        super().__init__(
            f"unknown structure group {name!r}; registered names: {sorted(known)}"
        )
        self.name = name
        self.known = sorted(known)


class SchemaError(TwistcohError):
    """Malformed or shape-incompatible JSON input."""
