"""Exception hierarchy shared across the package."""
from __future__ import annotations


class SupcalcError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatchError(SupcalcError):
    """Operands live in different ambient spaces."""


class CapacityError(SupcalcError):
    """A representation conversion exceeds the configured dimension cap."""


class EmptySetError(SupcalcError):
    """Operation undefined on an empty polyhedron."""


class ImproperFunctionError(SupcalcError):
    """Operation requires a proper function (nonempty effective domain)."""


class ExtendedArithmeticError(SupcalcError):
    """Undefined extended-value operation, e.g. (+oo) + (-oo)."""


class InvalidParameterError(SupcalcError):
    """Parameter outside its documented range (negative eps, bad grid, ...)."""


class SchemaError(SupcalcError):
    """Input document failed schema validation."""

    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.reason = message


class GenerationError(SupcalcError):
    """Instance generator could not satisfy its flags within the retry bound."""


class HypothesesNotMet(SupcalcError):
    """An identity checker could not verify its hypotheses.

    Raised internally and converted into a ``hypotheses-not-met`` report;
    never a test failure by itself.
    """


class IdentityFalsified(SupcalcError):
    """An identity check found an exact counterexample.

    The ``certificate`` payload is a JSON-serializable object pinpointing
    the violated inequality or the offending point/direction.
    """

    def __init__(self, message: str, certificate: object = None):
        super().__init__(message)
        self.certificate = certificate


class LPInternalError(SupcalcError):
    """Simplex produced a certificate that failed exact re-verification."""
