"""Exception types raised across the engine."""

from __future__ import annotations


class AsmSynthError(Exception):
    """Base class for all engine errors."""


class SchemaViolation(AsmSynthError):
    """A document does not match the expected JSON shape."""


class DuplicateName(AsmSynthError):
    """A taxonomy node name already exists in its hierarchy."""


class UnknownParent(AsmSynthError):
    """A referenced parent node does not exist."""


class UnknownNode(AsmSynthError):
    """A referenced taxonomy node does not exist."""


class WouldCreateCycle(AsmSynthError):
    """The edit would make a hierarchy cyclic."""


class UnknownAtom(AsmSynthError):
    """A type references an atom absent from the taxonomies."""


class UnknownPart(AsmSynthError):
    """A part id is not present in the catalog."""


class UnknownJointOrigin(AsmSynthError):
    """No joint origin with the given uuid exists in the catalog."""


class DuplicateUuid(AsmSynthError):
    """A joint-origin uuid occurs more than once in the catalog."""


class NegativeCost(AsmSynthError):
    """Unit costs must be non-negative."""


class InvalidPart(AsmSynthError):
    """A part failed validation; carries the error diagnostics."""

    def __init__(self, message: str, diagnostics=()):
        super().__init__(message)
        self.diagnostics = tuple(diagnostics)


class InvalidRequest(AsmSynthError):
    """A synthesis request violates its constraints."""


class UnknownAtomInRequest(InvalidRequest):
    """A request references an atom absent from the taxonomies."""


class IllTypedTerm(AsmSynthError):
    """A term failed re-typing; carries the path to the offending node."""

    def __init__(self, message: str, path: tuple[int, ...] = ()):
        super().__init__(f"{message} (at path {'/'.join(map(str, path)) or 'root'})")
        self.path = path


class NonUnitQuaternion(AsmSynthError):
    """A rotation quaternion is not unit length."""


class AngleCountMismatch(AsmSynthError):
    """The joint-angle vector length does not match the assembly's DoF."""


class InvalidProgram(AsmSynthError):
    """An assembly program failed replay validation."""
