"""Exception hierarchy shared by every stage of the pipeline.

Exit-code contract of the CLI: InputError maps to exit status 2, every
InvariantError (including the theorem-violation subclasses) to exit 1.
"""

from __future__ import annotations


class DimerError(Exception):
    """Base class for all errors raised by this package."""

    def details(self) -> dict:
        return {"type": type(self).__name__, "message": str(self)}


class InputError(DimerError):
    """Malformed input: bad schema, unresolved ids, unreadable file."""


class InvariantError(DimerError):
    """A structural requirement on otherwise well-formed data failed."""


class TheoremError(InvariantError):
    """A fact guaranteed by the underlying theory failed to hold.

    Seeing this on a consistent model means the implementation (or the
    input transcription) is wrong, never the theory.
    """


class DegenerateModelError(InvariantError):
    """The model admits no perfect matching."""


class RayMultiplicityError(InvariantError):
    """A lattice point carries zero or several stable matchings."""


class TilingError(InvariantError):
    """The accepted triangles do not tile the polygon exactly."""

    def __init__(self, message: str, witnesses: dict | None = None):
        super().__init__(message)
        self.witnesses = witnesses or {}

    def details(self) -> dict:
        d = super().details()
        d["witnesses"] = self.witnesses
        return d


class CoverageError(DimerError):
    """A lift was requested over a subquiver that does not reach every vertex."""
