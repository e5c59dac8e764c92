"""
representation.py – sets of desirable sets as intersections of K_D
==================================================================

    K_D           {A : A ∩ D ≠ ∅}
    K_𝒟           ∩_{D∈𝒟} K_D
    𝒟_𝒜           {cl(S ∪ A_des) : S ∈ 𝒮_𝒜, cl(S ∪ A_des) ∩ A_not = ∅}
    𝐃(K)          {D ∈ 𝐃 : K ⊆ K_D}
    fin(K)        supersets of the members of K ∩ Q

A coherent K equals both K_{𝒟_K} and K_{𝐃(K)}; ``represent`` computes the two
representers and cross-checks the equalities.  The preference-pair helpers at
the end recover strict total orders from 2-coherent families of preferences.
"""
from __future__ import annotations

import dataclasses
import itertools
import logging
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Optional, Tuple

from .closure_operators import ClosureOperator, ensure_lawful, transitive_operator
from .coherence_checker import FULL, Variant, check_sds, coherent_sdt_masks
from .config import DEFAULT_SETTINGS, EngineSettings
from .errors import CoherenceUndecided, EmptyRepresenterSet, NotCoherent, WrongUniverse
from .things import (
    Assessment,
    Family,
    QDomain,
    ThingSet,
    Universe,
    all_bitmap,
    bits,
    canonical_masks,
    hitting_bitmap,
    selection_masks,
    submasks,
    up_closure,
)
from .verdicts import Certificate, Verdict

logger = logging.getLogger(__name__)


def _family_of(universe: Universe, bitmap: int) -> Family:
    return Family(universe, frozenset(bits(bitmap)))


def _bitmap_of(k: Family) -> int:
    out = 0
    for m in k.masks:
        out |= 1 << m
    return out


# ────────────────────────────────────────────────────────────────
# 1.  K_D, K_𝒟, 𝒟_𝒜
# ────────────────────────────────────────────────────────────────
def k_from_d(d: ThingSet) -> Family:
    """K_D: every subset meeting *d*."""
    return _family_of(d.universe, hitting_bitmap(d.universe.size, d.mask))


def _k_bitmap(universe: Universe, ds: Iterable[int]) -> int:
    out = all_bitmap(universe.size)
    for d in ds:
        out &= hitting_bitmap(universe.size, d)
    return out


def k_from_ds(ds: Iterable[ThingSet]) -> Family:
    """K_𝒟 = ∩ K_D; the representer must be nonempty."""
    ds = list(ds)
    if not ds:
        raise EmptyRepresenterSet("K_𝒟 needs a nonempty set of SDTs")
    universe = ds[0].universe
    return _family_of(universe, _k_bitmap(universe, (d.mask for d in ds)))


def k_fin_from_ds(ds: Iterable[ThingSet], q: QDomain) -> Family:
    """K_𝒟 restricted to *q*."""
    k = k_from_ds(ds)
    return Family(k.universe, frozenset(m for m in k.masks if q.contains(m)))


def d_family_mask(members: Iterable[int], assessment: Assessment, cl: ClosureOperator) -> List[int]:
    des, forbidden = assessment.des_mask, assessment.not_mask
    out = set()
    for s in selection_masks(members):
        d = cl.image(s | des)
        if not d & forbidden:
            out.add(d)
    return canonical_masks(out)


def d_family_from(family: Family, assessment: Assessment, cl: ClosureOperator) -> List[ThingSet]:
    """𝒟_𝒜 in canonical order."""
    ensure_lawful(cl)
    return [ThingSet(cl.universe, d) for d in d_family_mask(family.masks, assessment, cl)]


def largest_representing(
    k: Family,
    assessment: Assessment,
    cl: ClosureOperator,
    settings: EngineSettings = DEFAULT_SETTINGS,
) -> List[ThingSet]:
    """𝐃(K): the coherent SDTs D with K ⊆ K_D."""
    members = list(k.masks)
    return [
        ThingSet(cl.universe, d)
        for d in coherent_sdt_masks(assessment, cl, settings)
        if all(a & d for a in members)
    ]


@dataclass(frozen=True)
class Representation:
    d_k: Tuple[ThingSet, ...]
    largest: Tuple[ThingSet, ...]
    verified: bool
    notes: Tuple[str, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "d_k": [d.ids() for d in self.d_k],
            "largest": [d.ids() for d in self.largest],
            "verified": self.verified,
        }
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def represent(
    k: Family,
    assessment: Assessment,
    cl: ClosureOperator,
    settings: EngineSettings = DEFAULT_SETTINGS,
) -> Representation:
    """𝒟_K and 𝐃(K) for a coherent K, with K = K_{𝒟_K} = K_{𝐃(K)} checked."""
    verdict = check_sds(k, assessment, cl, FULL, settings)
    if verdict.is_violated:
        raise NotCoherent(verdict)
    if verdict.is_inconclusive:
        raise CoherenceUndecided(verdict)
    d_k = d_family_mask(k.masks, assessment, cl)
    largest = [d.mask for d in largest_representing(k, assessment, cl, settings)]
    universe = cl.universe
    target = _bitmap_of(k)
    notes = []
    if not d_k or _k_bitmap(universe, d_k) != target:
        notes.append("K differs from K_{𝒟_K}")
    if not largest or _k_bitmap(universe, largest) != target:
        notes.append("K differs from K_{𝐃(K)}")
    if not set(d_k) <= set(largest):
        notes.append("𝒟_K is not contained in 𝐃(K)")
    for note in notes:
        logger.warning("represent: %s", note)
    return Representation(
        tuple(ThingSet(universe, d) for d in d_k),
        tuple(ThingSet(universe, d) for d in largest),
        verified=not notes,
        notes=tuple(notes),
    )


# ────────────────────────────────────────────────────────────────
# 2.  fin(K) and finitary families
# ────────────────────────────────────────────────────────────────
def fin_of(k: Family, q: Optional[QDomain] = None) -> Family:
    """Supersets of the members of K ∩ Q (Q = finite sets, i.e. full, by default)."""
    q = q or QDomain.full()
    generators = [m for m in k.masks if q.contains(m)]
    return Family(k.universe, up_closure(generators, k.universe.full_mask))


def is_finitary(k: Family, q: Optional[QDomain] = None) -> bool:
    """A ∈ K iff some B ⊆ A lies in K ∩ Q, for every A ⊆ 𝒯."""
    q = q or QDomain.full()
    members = k.masks
    for a in k.universe.all_sets():
        witnessed = any(b in members and q.contains(b) for b in submasks(a))
        if witnessed != (a in members):
            return False
    return True


def representable_in(
    k: Family,
    assessment: Assessment,
    cl: ClosureOperator,
    q: Optional[QDomain] = None,
    settings: EngineSettings = DEFAULT_SETTINGS,
) -> Tuple[bool, List[ThingSet]]:
    """Is K = K_𝒟 ∩ Q for some nonempty 𝒟 ⊆ 𝐃?  Returns the canonical 𝒟 too.

    The canonical candidate is 𝐃_Q(K) = {D ∈ 𝐃 : K ⊆ K_D}; any other witness
    is contained in it.
    """
    q = q or QDomain.full()
    candidates = largest_representing(k, assessment, cl, settings)
    if not candidates:
        return False, []
    restricted = k_fin_from_ds(candidates, q)
    return restricted.masks == k.masks, candidates


# ────────────────────────────────────────────────────────────────
# 3.  Strict total orders over preference pairs
# ────────────────────────────────────────────────────────────────
def strict_total_orders(universe: Universe) -> List[ThingSet]:
    """Every ranking of the options whose pairs all lie in *universe*."""
    if universe.payload_kind != "preference_pair":
        raise WrongUniverse("strict total orders live on preference pairs")
    out = set()
    for ranking in itertools.permutations(universe.options):
        mask = 0
        for i, j in itertools.combinations(range(len(ranking)), 2):
            idx = universe.index_of_pair((ranking[i], ranking[j]))
            if idx is None:
                break
            mask |= 1 << idx
        else:
            out.add(mask)
    return [ThingSet(universe, m) for m in canonical_masks(out)]


def is_connected(d: ThingSet) -> bool:
    """Every two distinct options are compared one way or the other."""
    held = {d.universe.pair(i) for i in bits(d.mask)}
    options = d.universe.options
    return all(
        (a, b) in held or (b, a) in held for a, b in itertools.combinations(options, 2)
    )


def total_order_setting(universe: Universe) -> Tuple[Assessment, ClosureOperator]:
    """trans with A_des = ∅ and A_not = the reflexive pairs."""
    if universe.payload_kind != "preference_pair":
        raise WrongUniverse("needs a universe of preference pairs")
    expected = {(a, b) for a in universe.options for b in universe.options}
    if set(universe.payloads) != expected:
        raise WrongUniverse("needs every ordered pair over the option set")
    reflexive = 0
    for i, (a, b) in enumerate(universe.payloads):
        if a == b:
            reflexive |= 1 << i
    assessment = Assessment(ThingSet(universe, reflexive), ThingSet(universe, 0))
    return assessment, transitive_operator(universe)


def _aligned(universe: Universe, assessment: Assessment, cl: ClosureOperator) -> None:
    expected, _ = total_order_setting(universe)
    if cl.kind != "transitive" or cl.universe != universe:
        raise WrongUniverse("total orders need the transitive closure on the same universe")
    if assessment.not_mask != expected.not_mask or assessment.des_mask:
        raise WrongUniverse("total orders need A_des = ∅ and A_not = the reflexive pairs")


def comparison_sets(universe: Universe) -> List[int]:
    """𝒜_tot: {(o1,o2), (o2,o1)} for every two distinct options."""
    out = []
    for a, b in itertools.combinations(universe.options, 2):
        out.append(1 << universe.index_of_pair((a, b)) | 1 << universe.index_of_pair((b, a)))
    return canonical_masks(out)


def represent_total_orders(
    k: Family,
    assessment: Optional[Assessment] = None,
    cl: Optional[ClosureOperator] = None,
    settings: EngineSettings = DEFAULT_SETTINGS,
) -> Tuple[Verdict, List[ThingSet]]:
    """2-coherence plus 𝒜_tot ⊆ K, and the connected members of 𝐃(K)."""
    universe = k.universe
    default_assessment, default_cl = total_order_setting(universe)
    assessment = assessment or default_assessment
    cl = cl or default_cl
    _aligned(universe, assessment, cl)
    verdict = check_sds(k, assessment, cl, Variant("two", QDomain.full()), settings)
    if verdict.is_verified:
        for a in comparison_sets(universe):
            if a not in k.masks:
                verdict = Verdict.violated(Certificate("A_tot", universe, sets=(a,)))
                break
    wide = dataclasses.replace(settings, sdt_enumeration_cap=max(settings.sdt_enumeration_cap, universe.size))
    orders = [d for d in largest_representing(k, assessment, cl, wide) if is_connected(d)]
    logger.debug("represent_total_orders: %s, %d orders", verdict.summary(), len(orders))
    return verdict, orders


__all__ = [
    "k_from_d",
    "k_from_ds",
    "k_fin_from_ds",
    "d_family_mask",
    "d_family_from",
    "largest_representing",
    "Representation",
    "represent",
    "fin_of",
    "is_finitary",
    "representable_in",
    "strict_total_orders",
    "is_connected",
    "total_order_setting",
    "comparison_sets",
    "represent_total_orders",
]
