"""Exception hierarchy.

CLI exit codes hang off the two base classes: ``InputError`` maps to 2 and
``StructuralError`` to 3.
"""


class NZError(Exception):
    pass


class InputError(NZError):
    pass


class MalformedInput(InputError):
    pass


class BadGluing(InputError):
    pass


class StructuralError(NZError):
    pass


class NotTorusBoundary(StructuralError):
    pass


class NotOrientable(StructuralError):
    pass


class NotOrdered(StructuralError):
    pass


class NotOrderable(StructuralError):
    pass


class RankDeficient(NZError):
    """The abelianization has rank > 1; an explicit alpha must be supplied."""


class NoKernel(NZError):
    pass


class NotSquare(NZError):
    pass


class Indivisible(NZError):
    pass


class NotARepresentation(InputError):
    pass


class NotSL(NotARepresentation):
    pass


class InternalDivisionFailure(NZError):
    """Exact division predicted by the determinant formula failed."""
