"""Exception hierarchy.

Every error carries an optional ``witness`` so reports can name the offending
arrows, elements or triples.  ``InvalidInput`` subclasses map to CLI exit code 2.
"""


class GfrobError(Exception):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class InvalidInput(GfrobError):
    pass


class UnknownName(InvalidInput):
    pass


class UnknownObject(UnknownName):
    pass


class UnknownArrow(UnknownName):
    pass


class ParseError(InvalidInput):
    def __init__(self, message, line=None, column=None):
        super().__init__(message, witness={"line": line, "column": column})
        self.line = line
        self.column = column


class ValidationError(InvalidInput):
    """A component of a bundle failed its validator; wraps the original error."""

    def __init__(self, component, cause):
        super().__init__(f"{component}: {cause}", witness=getattr(cause, "witness", None))
        self.component = component
        self.cause = cause


class InvalidParams(InvalidInput):
    pass


# groupoid axioms
class MissingComposite(InvalidInput):
    pass


class AssociativityViolation(InvalidInput):
    pass


class UnitViolation(InvalidInput):
    pass


class NoInverse(InvalidInput):
    pass


# morphisms
class SourceTargetMismatch(InvalidInput):
    pass


class IdentityNotPreserved(InvalidInput):
    pass


class CompositionNotPreserved(InvalidInput):
    pass


class NotNormal(InvalidInput):
    pass


class KernelTooSmall(InvalidInput):
    pass


# actions
class StructureMapViolation(InvalidInput):
    pass


class CompatibilityViolation(InvalidInput):
    pass


class GroupoidMismatch(InvalidInput):
    pass


# linear algebra / representations
class FieldMismatch(InvalidInput):
    pass


class ShapeMismatch(InvalidInput):
    pass


class FunctorialityViolation(InvalidInput):
    pass


class IdentityViolation(InvalidInput):
    pass


class NotTrivialOnN(InvalidInput):
    pass


class NotApplicable(GfrobError):
    """Raised when a construction's hypotheses (faithful, injective on objects) fail."""
