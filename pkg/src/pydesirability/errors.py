"""
errors.py – exception hierarchy for pydesirability
==================================================

Checkers report failed axioms as ``Verdict`` values; the exceptions below are
raised only when an operation is called outside its preconditions.
"""
from __future__ import annotations

from typing import TYPE_CHECKING, Optional

if TYPE_CHECKING:  # pragma: no cover
    from .verdicts import Verdict


class DesirabilityError(Exception):
    """Root of every error raised by this package."""


class ConfigurationError(DesirabilityError, ValueError):
    """Invalid engine setting or override."""


# ────────────────────────────────────────────────────────────────
# 1.  Model documents
# ────────────────────────────────────────────────────────────────
class DocumentError(DesirabilityError, ValueError):
    """A model document could not be turned into a model."""


class MalformedDocument(DocumentError):
    """Syntax error or missing/ill-typed key."""


class UnknownThing(DocumentError, KeyError):
    """A thing id is referenced but never declared."""

    def __init__(self, thing_id: str):
        super().__init__(f"unknown thing {thing_id!r}")
        self.thing_id = thing_id

    def __str__(self) -> str:  # KeyError quotes its argument otherwise
        return str(self.args[0])


class PayloadMismatch(DocumentError):
    """Payload arity or option set violated."""


# ────────────────────────────────────────────────────────────────
# 2.  Preconditions of library operations
# ────────────────────────────────────────────────────────────────
class UniverseTooLarge(DesirabilityError):
    def __init__(self, size: int, cap: int, what: str = "universe"):
        super().__init__(f"{what} needs |T| <= {cap}, got {size}")
        self.size = size
        self.cap = cap


class LawsUnverified(DesirabilityError):
    """The closure operator has not passed ``check_laws``."""


class DimensionMismatch(DesirabilityError, ValueError):
    pass


class WrongPayload(DesirabilityError, TypeError):
    pass


class WrongUniverse(DesirabilityError, ValueError):
    pass


class EmptyRepresenterSet(DesirabilityError, ValueError):
    pass


class NotCoherent(DesirabilityError):
    """Raised by ``represent`` when its input fails full coherence."""

    def __init__(self, verdict: "Verdict", message: Optional[str] = None):
        super().__init__(message or f"family is not coherent: {verdict.summary()}")
        self.verdict = verdict


class CoherenceUndecided(DesirabilityError):
    """Raised by ``represent`` when the coherence check ran out of budget."""

    def __init__(self, verdict: "Verdict"):
        super().__init__(f"coherence undecided: {verdict.budget_note or verdict.summary()}")
        self.verdict = verdict


class UnknownClaim(DesirabilityError, KeyError):
    def __init__(self, claim_id: str):
        super().__init__(f"unknown claim {claim_id!r}")
        self.claim_id = claim_id

    def __str__(self) -> str:
        return str(self.args[0])


__all__ = [
    "DesirabilityError",
    "ConfigurationError",
    "DocumentError",
    "MalformedDocument",
    "UnknownThing",
    "PayloadMismatch",
    "UniverseTooLarge",
    "LawsUnverified",
    "DimensionMismatch",
    "WrongPayload",
    "WrongUniverse",
    "EmptyRepresenterSet",
    "NotCoherent",
    "CoherenceUndecided",
    "UnknownClaim",
]
