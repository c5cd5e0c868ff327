"""Exception hierarchy.

Every domain error carries a stable ``code`` (the class name) and an optional
``detail`` payload so the command line front end can report it as JSON.
"""

from __future__ import annotations

from typing import Any


class HahnError(ValueError):
    """Base class for all domain errors raised by :mod:`hahn`."""

    def __init__(self, message: str = "", **detail: Any):
        super().__init__(message or self.__class__.__name__)
        self.detail = detail

    @property
    def code(self) -> str:
        return type(self).__name__

    def to_json(self) -> dict:
        body: dict[str, Any] = {"message": str(self)}
        body.update(self.detail)
        return {"error": self.code, "detail": body}


class ParseError(HahnError):
    pass


class InvalidChain(HahnError):
    pass


class EmptyTagList(HahnError):
    pass


class LengthMismatch(HahnError):
    pass


class NotAnAutomorphism(HahnError):
    pass


class TagPatternBroken(HahnError):
    pass


class InadmissibleHom(HahnError):
    pass


class SkeletonMismatch(HahnError):
    pass


class InfiniteConcat(HahnError):
    pass


class FiniteChainRequired(HahnError):
    pass


class PositionOutOfRange(HahnError):
    pass


class NotTriangular(HahnError):
    pass


class NotInvertible(HahnError):
    pass


class NotInU(HahnError):
    pass


class IncoherentFamily(HahnError):
    pass


class MissingBlock(HahnError):
    pass


class ChainTooLarge(HahnError):
    pass
