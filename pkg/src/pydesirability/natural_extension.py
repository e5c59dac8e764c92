"""
natural_extension.py – least coherent models containing an assessment
=====================================================================

    sdt_natural_extension   D* = cl(base ∪ A_des), rejected when it meets A_not
    sds_natural_extension   least fixpoint of the production rules K2–K5
                            started from base ∪ {{t} : t ∈ A_des}

Modes of the SDS fixpoint:

    full_rules     K5 over every nonempty 𝒜 ⊆ K
    binary_rules   K5bin over every ordered pair A, B ∈ K

Each round applies K3, then K5 (or K5bin), then K2.  ∅ in the fixpoint
means no coherent extension exists.
"""
from __future__ import annotations

import dataclasses
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Set, Tuple

from .closure_operators import ClosureOperator, ensure_lawful
from .coherence_checker import (
    hitting_family,
    k5_instance,
    minimal_units,
    realizable_images,
)
from .config import DEFAULT_SETTINGS, EngineSettings
from .things import (
    Assessment,
    Family,
    ThingSet,
    Universe,
    bits,
    canonical_masks,
    lowest,
    minimal_masks,
    nonempty_subfamilies,
    up_closure,
)
from .verdicts import Certificate

logger = logging.getLogger(__name__)

MODES: Tuple[str, ...] = ("full_rules", "binary_rules")

EXTENDED, INCOHERENT, INCONCLUSIVE = "Extended", "Incoherent", "Inconclusive"


@dataclass(frozen=True)
class ExtensionResult:
    outcome: str
    mode: str
    model: Optional[Any] = None  # ThingSet for "sdt", Family otherwise
    witness: Optional[Certificate] = None
    budget_note: Optional[str] = None
    rounds: int = 0
    notes: Tuple[str, ...] = ()

    @property
    def is_extended(self) -> bool:
        return self.outcome == EXTENDED

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"outcome": self.outcome, "mode": self.mode}
        if isinstance(self.model, ThingSet):
            out["model"] = self.model.ids()
        elif isinstance(self.model, Family):
            out["model"] = self.model.as_lists()
        if self.witness is not None:
            out["witness"] = self.witness.to_dict()
        if self.budget_note:
            out["budget_note"] = self.budget_note
        if self.rounds:
            out["rounds"] = self.rounds
        if self.notes:
            out["notes"] = list(self.notes)
        return out


# ────────────────────────────────────────────────────────────────
# 1.  SDT
# ────────────────────────────────────────────────────────────────
def sdt_natural_extension(base: ThingSet, assessment: Assessment, cl: ClosureOperator) -> ExtensionResult:
    ensure_lawful(cl)
    universe = cl.universe
    closed = cl.image(base.mask | assessment.des_mask)
    clash = closed & assessment.not_mask
    if clash:
        cert = Certificate("D1", universe, sets=(closed,), thing=lowest(clash))
        return ExtensionResult(INCOHERENT, "sdt", ThingSet(universe, closed), witness=cert)
    return ExtensionResult(EXTENDED, "sdt", ThingSet(universe, closed))


# ────────────────────────────────────────────────────────────────
# 2.  SDS
# ────────────────────────────────────────────────────────────────
class _BudgetExhausted(Exception):
    def __init__(self, note: str):
        super().__init__(note)
        self.note = note


def _k5_products_shortcut(k: Set[int], cl: ClosureOperator, axiom: str) -> Set[int]:
    """Every set meeting all closures of some minimal premise (K5 + K2 in one step)."""
    n = cl.universe.size
    known = 0
    for m in k:
        known |= 1 << m
    found: Set[int] = set()
    for unit in minimal_units(axiom, minimal_masks(k)):
        hits = hitting_family(n, k5_instance(axiom, unit, cl).closures) & ~known
        found.update(bits(hits))
    return found


def _k5_products_general(k: Set[int], cl: ClosureOperator, axiom: str, settings: EngineSettings) -> Set[int]:
    members = canonical_masks(k)
    m = len(members)
    if axiom == "K5bin":
        total = m * m
        units = ((a, b) for a in members for b in members)
    else:
        total = (1 << m) - 1
        units = nonempty_subfamilies(members)
    if total > settings.k5_budget:
        raise _BudgetExhausted(f"{axiom}: {total} premises exceed k5_budget={settings.k5_budget}")
    found: Set[int] = set()
    seen = set()
    for unit in units:
        closures = k5_instance(axiom, unit, cl).closures
        key = tuple(sorted(closures))
        if key in seen:
            continue
        seen.add(key)
        found.update(c for c, _ in realizable_images(closures, lambda c: c not in k))
    return found


def sds_natural_extension(
    base: Family,
    assessment: Assessment,
    cl: ClosureOperator,
    mode: str = "full_rules",
    settings: EngineSettings = DEFAULT_SETTINGS,
) -> ExtensionResult:
    ensure_lawful(cl)
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    universe = cl.universe
    universe.check_size(settings.universe_cap)
    full = universe.full_mask
    axiom = "K5bin" if mode == "binary_rules" else "K5"
    not_mask = assessment.not_mask

    k: Set[int] = set(base.masks)
    k.update(1 << t for t in bits(assessment.des_mask))  # K4
    rounds = 0
    while True:
        rounds += 1
        if rounds > settings.fixpoint_rounds:
            note = f"no fixpoint within {settings.fixpoint_rounds} rounds"
            return ExtensionResult(
                INCONCLUSIVE, mode, Family(universe, frozenset(k)), budget_note=note, rounds=rounds - 1
            )
        before = len(k)
        k.update({a & ~not_mask for a in k})  # K3
        if 0 in k:
            return _incoherent(base, k, not_mask, universe, mode, rounds)
        try:
            if settings.use_shortcuts:
                produced = _k5_products_shortcut(k, cl, axiom)
            else:
                produced = _k5_products_general(k, cl, axiom, settings)
        except _BudgetExhausted as exc:
            logger.warning("sds_natural_extension: %s", exc.note)
            return ExtensionResult(
                INCONCLUSIVE, mode, Family(universe, frozenset(k)), budget_note=exc.note, rounds=rounds
            )
        k |= produced
        k = set(up_closure(k, full))  # K2
        logger.debug("round %d: %d -> %d sets", rounds, before, len(k))
        if len(k) == before:
            break
    return ExtensionResult(EXTENDED, mode, Family(universe, frozenset(k)), rounds=rounds)


def _incoherent(
    base: Family, k: Set[int], not_mask: int, universe: Universe, mode: str, rounds: int
) -> ExtensionResult:
    if 0 in base.masks:
        detail = "∅ is in the base"
    else:
        culprit = next(a for a in canonical_masks(k) if a and not a & ~not_mask)
        detail = f"{universe.ids_of(culprit)} lies inside A_not"
    cert = Certificate("K1", universe, sets=(0,), detail=detail)
    return ExtensionResult(INCOHERENT, mode, Family(universe, frozenset(k)), witness=cert, rounds=rounds)


def cross_check_modes(
    base: Family,
    assessment: Assessment,
    cl: ClosureOperator,
    settings: EngineSettings = DEFAULT_SETTINGS,
) -> Tuple[ExtensionResult, ExtensionResult]:
    """Both fixpoints; a disagreement is attached to both results as a note."""
    full = sds_natural_extension(base, assessment, cl, "full_rules", settings)
    binary = sds_natural_extension(base, assessment, cl, "binary_rules", settings)
    if full.outcome == binary.outcome == EXTENDED and full.model != binary.model:
        extra = sorted(full.model.masks ^ binary.model.masks)
        note = (
            "binary_rules and full_rules fixpoints disagree on "
            f"{[cl.universe.ids_of(m) for m in canonical_masks(extra)]}"
        )
        logger.warning(note)
        full = dataclasses.replace(full, notes=full.notes + (note,))
        binary = dataclasses.replace(binary, notes=binary.notes + (note,))
    elif full.outcome != binary.outcome:
        note = f"binary_rules gives {binary.outcome}, full_rules gives {full.outcome}"
        logger.warning(note)
        full = dataclasses.replace(full, notes=full.notes + (note,))
        binary = dataclasses.replace(binary, notes=binary.notes + (note,))
    return full, binary


def intersection_oracle_sdt(base: ThingSet, coherent: List[ThingSet]) -> Optional[ThingSet]:
    """∩{D coherent : base ⊆ D}; ``None`` when no coherent superset exists."""
    supersets = [d.mask for d in coherent if base.mask & d.mask == base.mask]
    if not supersets:
        return None
    out = base.universe.full_mask
    for d in supersets:
        out &= d
    return ThingSet(base.universe, out)


def intersection_oracle_sds(base: Family, coherent: List[Family]) -> Optional[Family]:
    """∩{K coherent : base ⊆ K}; ``None`` when no coherent superset exists."""
    supersets = [k.masks for k in coherent if base.masks <= k.masks]
    if not supersets:
        return None
    return Family(base.universe, frozenset.intersection(*supersets))


__all__ = [
    "MODES",
    "EXTENDED",
    "INCOHERENT",
    "INCONCLUSIVE",
    "ExtensionResult",
    "sdt_natural_extension",
    "sds_natural_extension",
    "cross_check_modes",
    "intersection_oracle_sdt",
    "intersection_oracle_sds",
]
