"""
verdicts.py – uniform checker results and their certificates
============================================================

Every checker answers with a ``Verdict``:

    Verified                      nothing found, search was exhaustive
    Violated(certificate)         replayable witness of the failed axiom / law
    Inconclusive(budget_note)     search budget ran out first
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple, Union

from .things import Universe, canonical_masks


class Status(str, enum.Enum):
    VERIFIED = "Verified"
    VIOLATED = "Violated"
    INCONCLUSIVE = "Inconclusive"


# assignment entry: (index label, chosen thing)
#   K5 / K5fin / K5*   label = (selection mask,)
#   K5bin              label = (a, b)    thing indices
#   K5un               label = (a,)
Assignment = Tuple[Tuple[Tuple[int, ...], int], ...]


@dataclass(frozen=True)
class Certificate:
    """Witness for a failed axiom, claim or catalog check."""

    axiom: str
    universe: Universe = field(repr=False, compare=False)
    sets: Tuple[int, ...] = ()
    family: Tuple[int, ...] = ()
    produced: Optional[int] = None
    assignment: Assignment = ()
    thing: Optional[int] = None
    detail: str = ""

    def to_dict(self) -> Dict[str, Any]:
        u = self.universe
        out: Dict[str, Any] = {"axiom": self.axiom}
        if self.sets:
            out["sets"] = [u.ids_of(m) for m in self.sets]
        if self.family:
            out["family"] = [u.ids_of(m) for m in canonical_masks(self.family)]
        if self.produced is not None:
            out["produced"] = u.ids_of(self.produced)
        if self.assignment:
            out["assignment"] = [
                {"index": _label(u, self.axiom, label), "thing": u.things[t]}
                for label, t in self.assignment
            ]
        if self.thing is not None:
            out["thing"] = u.things[self.thing]
        if self.detail:
            out["detail"] = self.detail
        return out


def _label(universe: Universe, axiom: str, label: Tuple[int, ...]) -> List[str]:
    if axiom in ("K5bin", "K5un"):
        return [universe.things[i] for i in label]
    return universe.ids_of(label[0])


@dataclass(frozen=True)
class LawViolation:
    """A breach of cl1 (extensive), cl2 (monotone), cl3 (idempotent) or cl4 (empty)."""

    law: str
    universe: Universe = field(repr=False, compare=False)
    witness: Tuple[int, ...] = ()
    detail: str = ""

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "law": self.law,
            "witness": [self.universe.ids_of(m) for m in self.witness],
        }
        if self.detail:
            out["detail"] = self.detail
        return out


Witness = Union[Certificate, LawViolation]


@dataclass(frozen=True)
class Verdict:
    status: Status
    certificate: Optional[Witness] = None
    budget_note: Optional[str] = None
    note: str = ""

    # ── constructors ─────────────────────────────────────────────
    @classmethod
    def verified(cls, note: str = "") -> "Verdict":
        return cls(Status.VERIFIED, note=note)

    @classmethod
    def violated(cls, certificate: Witness, note: str = "") -> "Verdict":
        return cls(Status.VIOLATED, certificate=certificate, note=note)

    @classmethod
    def inconclusive(cls, budget_note: str, note: str = "") -> "Verdict":
        return cls(Status.INCONCLUSIVE, budget_note=budget_note, note=note)

    # ── queries ──────────────────────────────────────────────────
    @property
    def is_verified(self) -> bool:
        return self.status is Status.VERIFIED

    @property
    def is_violated(self) -> bool:
        return self.status is Status.VIOLATED

    @property
    def is_inconclusive(self) -> bool:
        return self.status is Status.INCONCLUSIVE

    @property
    def axiom(self) -> Optional[str]:
        if isinstance(self.certificate, Certificate):
            return self.certificate.axiom
        if isinstance(self.certificate, LawViolation):
            return self.certificate.law
        return None

    def summary(self) -> str:
        if self.is_violated:
            return f"Violated({self.axiom})"
        if self.is_inconclusive:
            return f"Inconclusive({self.budget_note})"
        return "Verified"

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"status": self.status.value}
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_dict()
        if self.budget_note:
            out["budget_note"] = self.budget_note
        if self.note:
            out["note"] = self.note
        return out


def first_failure(verdicts: List[Verdict]) -> Verdict:
    """First Violated, else first Inconclusive, else Verified."""
    for v in verdicts:
        if v.is_violated:
            return v
    for v in verdicts:
        if v.is_inconclusive:
            return v
    return Verdict.verified()


__all__ = [
    "Status",
    "Certificate",
    "LawViolation",
    "Witness",
    "Verdict",
    "first_failure",
]
