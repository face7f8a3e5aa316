"""Exception hierarchy; each family maps to a CLI exit code."""

from __future__ import annotations


class NormaError(Exception):
    exit_code = 1


class InputParseError(NormaError):
    exit_code = 2


class ValidationError(NormaError):
    """Data that violates a structural invariant (bad constants, non-linear maps, failed identities)."""

    exit_code = 3


class ShapeError(ValidationError):
    pass


class DomainMismatchError(ValidationError):
    pass


class PreconditionError(NormaError):
    """A computation was asked for outside the setting where it is defined."""

    exit_code = 4


class UnsupportedDomainError(PreconditionError):
    pass
