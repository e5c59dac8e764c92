"""
coherence_checker.py – coherence of desirable things and desirable sets
=======================================================================

Sets of desirable things (SDT)          D1  A_not ∩ D = ∅
                                        D2  A_des ⊆ D
                                        D3  cl(D) = D

Sets of desirable sets (SDS), in Q      K1  ∅ ∉ K
                                        K2  A ⊆ B ∈ Q, A ∈ K∩Q  ⇒  B ∈ K
                                        K3  A ∈ K∩Q, A∖A_not ∈ Q  ⇒  A∖A_not ∈ K
                                        K4  {t} ∈ K for t ∈ A_des with {t} ∈ Q
                                        K5 / K5fin / K5bin / K5un   (by strength)

Axioms run cheapest first: K1, K4, K3, K2, then the K5 member chosen by the
variant's strength.

K5 never enumerates choice functions.  For a fixed index family (the
selections 𝒮_𝒜, the pairs a×b, or the singletons of A) with closures
cl_1 … cl_m, a set C is the image of an admissible choice iff every cl_i meets
C and a bipartite matching saturates C (c is joined to i when c ∈ cl_i).  When Q is
subset-closed, ∅ ∉ K and K2 holds, the *monotone shortcut* only looks at the
minimal members of K∩Q: a violation exists iff some M ∈ Q∖K meets every
closure of their index family.
"""
from __future__ import annotations

import logging
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import networkx as nx
from networkx.algorithms import bipartite

from .closure_operators import ClosureOperator, ensure_lawful, replay_law
from .config import DEFAULT_SETTINGS, EngineSettings
from .things import (
    Assessment,
    Family,
    QDomain,
    ThingSet,
    all_bitmap,
    bits,
    canonical_key,
    canonical_masks,
    family_bitmap,
    hitting_bitmap,
    is_subset_closed,
    lowest,
    minimal_masks,
    nonempty_subfamilies,
    selection_masks,
    submasks,
    supermasks,
    up_closure,
)
from .verdicts import Certificate, LawViolation, Verdict, Witness

logger = logging.getLogger(__name__)

STRENGTH_AXIOMS: Dict[str, str] = {
    "full": "K5",
    "finite": "K5fin",
    "two": "K5bin",
    "one": "K5un",
}
K5_AXIOMS: Tuple[str, ...] = ("K5", "K5fin", "K5bin", "K5un")
AXIOM_ORDER: Tuple[str, ...] = ("K1", "K4", "K3", "K2")

Masks = FrozenSet[int]
FamilyLike = Union[Family, Iterable[int]]


@dataclass(frozen=True)
class Variant:
    strength: str = "full"
    q: QDomain = QDomain()

    def __post_init__(self) -> None:
        if self.strength not in STRENGTH_AXIOMS:
            raise ValueError(f"unknown strength {self.strength!r}; expected one of {sorted(STRENGTH_AXIOMS)}")

    @property
    def axiom(self) -> str:
        return STRENGTH_AXIOMS[self.strength]

    def describe(self) -> str:
        return f"{self.strength} in {self.q.describe()}"


FULL = Variant()


def _masks(k: FamilyLike) -> Masks:
    return k.masks if isinstance(k, Family) else frozenset(k)


# ────────────────────────────────────────────────────────────────
# 0.  Realizability of produced sets
# ────────────────────────────────────────────────────────────────
def _saturating_choice(closures: Sequence[int], produced: int) -> Optional[Tuple[int, ...]]:
    """A choice t_i ∈ closures[i] whose image is exactly *produced*, if any."""
    for c in closures:
        if not c & produced:
            return None
    if produced.bit_count() == 1:
        t = lowest(produced)
        return tuple(t for _ in closures)
    if produced.bit_count() > len(closures):
        return None
    things = [("t", i) for i in bits(produced)]
    graph = nx.Graph()
    graph.add_nodes_from(things)
    graph.add_nodes_from(("s", j) for j in range(len(closures)))
    graph.add_edges_from(
        (("t", i), ("s", j)) for j, c in enumerate(closures) for i in bits(c & produced)
    )
    matching = bipartite.hopcroft_karp_matching(graph, top_nodes=things)
    if not all(node in matching for node in things):
        return None
    choice = []
    for j, c in enumerate(closures):
        partner = matching.get(("s", j))
        choice.append(partner[1] if partner is not None else lowest(c & produced))
    return tuple(choice)


def realizable_images(
    closures: Sequence[int], accept: Callable[[int], bool] = lambda c: True
) -> Iterator[Tuple[int, Tuple[int, ...]]]:
    """Every accepted image of a choice from *closures*, with one realizing choice.

    Images are produced in increasing mask order.  An empty index family has the
    single image ∅; an empty closure admits no choice at all.
    """
    if not closures:
        if accept(0):
            yield 0, ()
        return
    union = 0
    for c in closures:
        if c == 0:
            return
        union |= c
    for produced in submasks(union):
        if produced == 0 or not accept(produced):
            continue
        choice = _saturating_choice(closures, produced)
        if choice is not None:
            yield produced, choice


# ────────────────────────────────────────────────────────────────
# 1.  Evaluation context
# ────────────────────────────────────────────────────────────────
@dataclass
class _Context:
    k: Masks
    cl: ClosureOperator
    not_mask: int
    des_mask: int
    q: QDomain
    settings: EngineSettings

    @property
    def n(self) -> int:
        return self.cl.universe.size

    @property
    def full(self) -> int:
        return self.cl.universe.full_mask

    def in_q(self, mask: int) -> bool:
        return self.q.contains(mask)

    def q_bitmap(self) -> int:
        if self.q.kind == "full":
            return all_bitmap(self.n)
        return family_bitmap(self.q.masks(self.n))

    def cert(self, axiom: str, **fields) -> Certificate:
        return Certificate(axiom, self.cl.universe, **fields)


def _context(
    k: FamilyLike,
    assessment: Optional[Assessment],
    cl: ClosureOperator,
    q: Optional[QDomain],
    settings: EngineSettings,
) -> _Context:
    not_mask = assessment.not_mask if assessment is not None else 0
    des_mask = assessment.des_mask if assessment is not None else 0
    return _Context(_masks(k), cl, not_mask, des_mask, q or QDomain.full(), settings)


# ────────────────────────────────────────────────────────────────
# 2.  SDT coherence
# ────────────────────────────────────────────────────────────────
def check_sdt(d: ThingSet, assessment: Assessment, cl: ClosureOperator) -> Verdict:
    """D1, D2, D3 in that order; the first failure carries the offending thing."""
    ensure_lawful(cl)
    return _check_sdt_mask(d.mask, assessment.not_mask, assessment.des_mask, cl)


def _check_sdt_mask(d: int, not_mask: int, des_mask: int, cl: ClosureOperator) -> Verdict:
    universe = cl.universe
    clash = d & not_mask
    if clash:
        return Verdict.violated(Certificate("D1", universe, sets=(d,), thing=lowest(clash)))
    missing = des_mask & ~d
    if missing:
        return Verdict.violated(Certificate("D2", universe, sets=(d,), thing=lowest(missing)))
    closed = cl.image(d)
    if closed != d:
        return Verdict.violated(
            Certificate("D3", universe, sets=(d,), produced=closed, thing=lowest(closed & ~d))
        )
    return Verdict.verified()


def coherence_possible(assessment: Assessment, cl: ClosureOperator) -> bool:
    """cl(A_des) ∩ A_not = ∅."""
    ensure_lawful(cl)
    return not cl.image(assessment.des_mask) & assessment.not_mask


def coherent_sdt_masks(
    assessment: Assessment, cl: ClosureOperator, settings: EngineSettings = DEFAULT_SETTINGS
) -> List[int]:
    ensure_lawful(cl)
    cl.universe.check_size(settings.sdt_enumeration_cap, "enumerate_coherent_sdts")
    not_mask, des_mask = assessment.not_mask, assessment.des_mask
    out = [
        d
        for d in cl.universe.all_sets()
        if _check_sdt_mask(d, not_mask, des_mask, cl).is_verified
    ]
    return canonical_masks(out)


def enumerate_coherent_sdts(
    assessment: Assessment, cl: ClosureOperator, settings: EngineSettings = DEFAULT_SETTINGS
) -> List[ThingSet]:
    """𝐃: every coherent SDT, in canonical order."""
    return [ThingSet(cl.universe, d) for d in coherent_sdt_masks(assessment, cl, settings)]


# ────────────────────────────────────────────────────────────────
# 3.  K1 – K4
# ────────────────────────────────────────────────────────────────
def _k1(ctx: _Context) -> Verdict:
    if 0 in ctx.k:
        return Verdict.violated(ctx.cert("K1", sets=(0,)))
    return Verdict.verified()


def _k4(ctx: _Context) -> Verdict:
    for t in bits(ctx.des_mask):
        single = 1 << t
        if ctx.in_q(single) and single not in ctx.k:
            return Verdict.violated(ctx.cert("K4", sets=(single,), thing=t))
    return Verdict.verified()


def _k3(ctx: _Context) -> Verdict:
    for a in canonical_masks(ctx.k):
        if not ctx.in_q(a):
            continue
        rest = a & ~ctx.not_mask
        if ctx.in_q(rest) and rest not in ctx.k:
            return Verdict.violated(ctx.cert("K3", sets=(a, rest)))
    return Verdict.verified()


def _k2(ctx: _Context) -> Verdict:
    for a in canonical_masks(ctx.k):
        if not ctx.in_q(a):
            continue
        for b in supermasks(a, ctx.full):
            if ctx.in_q(b) and b not in ctx.k:
                return Verdict.violated(ctx.cert("K2", sets=(a, b)))
    return Verdict.verified()


# ────────────────────────────────────────────────────────────────
# 4.  K5 family
# ────────────────────────────────────────────────────────────────
@dataclass(frozen=True)
class K5Instance:
    """Index family of one K5 premise: labels with their closures."""

    unit: Tuple[int, ...]
    labels: Tuple[Tuple[int, ...], ...]
    closures: Tuple[int, ...]


def k5_instance(axiom: str, unit: Tuple[int, ...], cl: ClosureOperator, des_mask: int = 0) -> K5Instance:
    """K5/K5fin/K5*: unit is the family 𝒜; K5bin: (A, B); K5un: (A,)."""
    if axiom == "K5bin":
        a, b = unit
        labels = tuple((x, y) for x in bits(a) for y in bits(b))
        closures = tuple(cl.image(1 << x | 1 << y) for x, y in labels)
    elif axiom == "K5un":
        (a,) = unit
        labels = tuple((x,) for x in bits(a))
        closures = tuple(cl.image(1 << x) for (x,) in labels)
    else:
        sel = canonical_masks(selection_masks(unit))
        labels = tuple((s,) for s in sel)
        closures = tuple(cl.image(s | des_mask) for s in sel)
    return K5Instance(unit, labels, closures)


def _k5_units(
    axiom: str, members: Sequence[int], settings: EngineSettings
) -> Tuple[Iterable[Tuple[int, ...]], Optional[str]]:
    m = len(members)
    if axiom == "K5bin":
        total = m * m
        exhaustive: Iterable[Tuple[int, ...]] = ((a, b) for a in members for b in members)
    elif axiom == "K5un":
        total = m
        exhaustive = ((a,) for a in members)
    elif axiom == "K5*":
        total = 1 << m
        exhaustive = _with_empty(members)
    else:
        total = (1 << m) - 1
        exhaustive = nonempty_subfamilies(members)
    if total <= settings.k5_budget:
        logger.debug("%s: %d premises, exhaustive", axiom, total)
        return exhaustive, None
    logger.warning("%s: %d premises exceed k5_budget=%d; sampling", axiom, total, settings.k5_budget)
    note = f"{axiom}: sampled {settings.k5_budget} of {total} premises (seed {settings.seed})"
    return _sampled_units(axiom, list(members), settings), note


def _with_empty(members: Sequence[int]) -> Iterator[Tuple[int, ...]]:
    yield ()
    yield from nonempty_subfamilies(members)


def _sampled_units(axiom: str, members: List[int], settings: EngineSettings) -> Iterator[Tuple[int, ...]]:
    rng = random.Random(settings.seed)
    for _ in range(settings.k5_budget):
        if axiom == "K5bin":
            yield rng.choice(members), rng.choice(members)
        elif axiom == "K5un":
            yield (rng.choice(members),)
        else:
            pick = rng.getrandbits(len(members))
            if pick == 0 and axiom != "K5*":
                continue
            yield tuple(members[i] for i in bits(pick))


def _k5_certificate(
    ctx: _Context, axiom: str, inst: K5Instance, produced: int, choice: Tuple[int, ...]
) -> Certificate:
    assignment = tuple(zip(inst.labels, choice))
    if axiom in ("K5bin", "K5un"):
        return ctx.cert(axiom, sets=inst.unit, produced=produced, assignment=assignment)
    return ctx.cert(axiom, family=inst.unit, produced=produced, assignment=assignment)


def _k5_general(ctx: _Context, axiom: str) -> Verdict:
    strengthened = axiom == "K5*"
    members = canonical_masks(ctx.k if strengthened else (m for m in ctx.k if ctx.in_q(m)))
    units, note = _k5_units(axiom, members, ctx.settings)
    des = ctx.des_mask if strengthened else 0

    def outside(c: int) -> bool:
        return c not in ctx.k and (strengthened or ctx.in_q(c))

    clean = set()
    for unit in units:
        inst = k5_instance(axiom, unit, ctx.cl, des)
        key = tuple(sorted(inst.closures))
        if key in clean:
            continue
        for produced, choice in realizable_images(inst.closures, outside):
            return Verdict.violated(_k5_certificate(ctx, axiom, inst, produced, choice))
        clean.add(key)
    if note:
        return Verdict.inconclusive(note)
    return Verdict.verified()


def _shortcut_applies(ctx: _Context) -> bool:
    return (
        ctx.settings.use_shortcuts
        and 0 not in ctx.k
        and is_subset_closed(ctx.q)
        and _k2(ctx).is_verified
    )


def minimal_units(axiom: str, minimal: Sequence[int]) -> List[Tuple[int, ...]]:
    if axiom == "K5bin":
        return [(a, b) for a in minimal for b in minimal]
    if axiom == "K5un":
        return [(a,) for a in minimal]
    return [tuple(minimal)] if minimal else []


def hitting_family(size: int, closures: Iterable[int]) -> int:
    """Bitmap of the sets meeting every one of *closures*."""
    hits = all_bitmap(size)
    for c in closures:
        hits &= hitting_bitmap(size, c)
    return hits


def _k5_shortcut(ctx: _Context, axiom: str) -> Verdict:
    minimal = minimal_masks(m for m in ctx.k if ctx.in_q(m))
    outside = ctx.q_bitmap() & ~family_bitmap(ctx.k)
    for unit in minimal_units(axiom, minimal):
        inst = k5_instance(axiom, unit, ctx.cl)
        hits = outside & hitting_family(ctx.n, inst.closures)
        if hits:
            witness = min(bits(hits), key=canonical_key)
            choice = tuple(lowest(c & witness) for c in inst.closures)
            produced = 0
            for t in choice:
                produced |= 1 << t
            return Verdict.violated(_k5_certificate(ctx, axiom, inst, produced, choice))
    return Verdict.verified(note="monotone shortcut")


def _k5(ctx: _Context, axiom: str) -> Verdict:
    if _shortcut_applies(ctx):
        logger.debug("%s: monotone shortcut", axiom)
        return _k5_shortcut(ctx, axiom)
    return _k5_general(ctx, axiom)


_AXIOMS: Dict[str, Callable[[_Context], Verdict]] = {
    "K1": _k1,
    "K2": _k2,
    "K3": _k3,
    "K4": _k4,
    "K5": lambda ctx: _k5(ctx, "K5"),
    "K5fin": lambda ctx: _k5(ctx, "K5fin"),
    "K5bin": lambda ctx: _k5(ctx, "K5bin"),
    "K5un": lambda ctx: _k5(ctx, "K5un"),
}


# ────────────────────────────────────────────────────────────────
# 5.  Public SDS entry points
# ────────────────────────────────────────────────────────────────
def check_axiom(
    k: FamilyLike,
    assessment: Optional[Assessment],
    cl: ClosureOperator,
    axiom: str,
    q: Optional[QDomain] = None,
    settings: EngineSettings = DEFAULT_SETTINGS,
) -> Verdict:
    """Evaluate one of K1 … K5un (relativised to *q*)."""
    ensure_lawful(cl)
    try:
        run = _AXIOMS[axiom]
    except KeyError:
        raise ValueError(f"unknown axiom {axiom!r}; expected one of {sorted(_AXIOMS)}") from None
    return run(_context(k, assessment, cl, q, settings))


def check_sds(
    k: FamilyLike,
    assessment: Optional[Assessment],
    cl: ClosureOperator,
    variant: Variant = FULL,
    settings: EngineSettings = DEFAULT_SETTINGS,
) -> Verdict:
    """K1, K4, K3, K2, then the K5 member of *variant*; first non-Verified wins."""
    ensure_lawful(cl)
    cl.universe.check_size(settings.universe_cap)
    ctx = _context(k, assessment, cl, variant.q, settings)
    for axiom in AXIOM_ORDER + (variant.axiom,):
        verdict = _AXIOMS[axiom](ctx)
        if not verdict.is_verified:
            logger.debug("check_sds(%s): %s", variant.describe(), verdict.summary())
            return verdict
    return Verdict.verified()


def check_strengthened_k5(
    k: FamilyLike,
    assessment: Optional[Assessment],
    cl: ClosureOperator,
    settings: EngineSettings = DEFAULT_SETTINGS,
) -> Verdict:
    """Every 𝒜 ⊆ K, ∅ included, with choices t_S ∈ cl(S ∪ A_des) produces a member of K."""
    ensure_lawful(cl)
    return _k5_general(_context(k, assessment, cl, None, settings), "K5*")


def _antichains(pool: Sequence[int], start: int = 0, chosen: Tuple[int, ...] = ()) -> Iterator[Tuple[int, ...]]:
    yield chosen
    for i in range(start, len(pool)):
        m = pool[i]
        if all(c & m != c and c & m != m for c in chosen):
            yield from _antichains(pool, i + 1, chosen + (m,))


def _candidate_families(size: int, q: QDomain) -> Iterator[Masks]:
    nonempty = canonical_masks(range(1, 1 << size))
    if q.is_full_for(size):
        # K1 and K2 leave only up-closures of antichains of nonempty sets
        full = (1 << size) - 1
        for antichain in _antichains(nonempty):
            yield up_closure(antichain, full)
        return
    for pick in range(1 << len(nonempty)):
        yield frozenset(nonempty[i] for i in bits(pick))


def _family_order(k: Masks) -> Tuple[int, List[Tuple[int, Tuple[int, ...]]]]:
    return (len(k), [canonical_key(m) for m in canonical_masks(k)])


def enumerate_coherent_sds(
    assessment: Assessment,
    cl: ClosureOperator,
    variant: Variant = FULL,
    settings: EngineSettings = DEFAULT_SETTINGS,
) -> List[Family]:
    """𝐊 under *variant*: every passing family over 𝒫(𝒯), smallest first."""
    ensure_lawful(cl)
    universe = cl.universe
    cap = settings.sds_full_cap if variant.strength in ("full", "finite") else settings.sds_weak_cap
    universe.check_size(cap, "enumerate_coherent_sds")
    candidates = list(_candidate_families(universe.size, variant.q))

    def verdict_of(k: Masks) -> Verdict:
        return check_sds(k, assessment, cl, variant, settings)

    if settings.threads > 1:
        with ThreadPoolExecutor(max_workers=settings.threads) as pool:
            verdicts = list(pool.map(verdict_of, candidates))
    else:
        verdicts = [verdict_of(k) for k in candidates]
    inconclusive = sum(v.is_inconclusive for v in verdicts)
    if inconclusive:
        logger.warning("enumerate_coherent_sds: %d candidate families inconclusive", inconclusive)
    found = sorted((k for k, v in zip(candidates, verdicts) if v.is_verified), key=_family_order)
    return [Family(universe, k) for k in found]


# ────────────────────────────────────────────────────────────────
# 6.  Certificate replay
# ────────────────────────────────────────────────────────────────
def _replay_k5(cert: Certificate, ctx: _Context) -> bool:
    axiom = cert.axiom
    strengthened = axiom == "K5*"
    unit = cert.sets if axiom in ("K5bin", "K5un") else cert.family
    if any(m not in ctx.k for m in unit):
        return False
    if not strengthened and (not unit or any(not ctx.in_q(m) for m in unit)):
        return False
    inst = k5_instance(axiom, unit, ctx.cl, ctx.des_mask if strengthened else 0)
    chosen = dict(cert.assignment)
    if set(chosen) != set(inst.labels) or len(cert.assignment) != len(inst.labels):
        return False
    image = 0
    for label, closure in zip(inst.labels, inst.closures):
        t = chosen[label]
        if not closure >> t & 1:
            return False
        image |= 1 << t
    if image != cert.produced:
        return False
    return image not in ctx.k and (strengthened or ctx.in_q(image))


def replay(
    certificate: Witness,
    *,
    k: Optional[FamilyLike] = None,
    d: Optional[ThingSet] = None,
    assessment: Optional[Assessment] = None,
    cl: Optional[ClosureOperator] = None,
    q: Optional[QDomain] = None,
) -> bool:
    """True iff the cited axiom, law or catalog check still fails on the witness."""
    if isinstance(certificate, LawViolation):
        if cl is None:
            raise ValueError("replaying a law violation needs the operator")
        return replay_law(certificate, cl)
    axiom = certificate.axiom
    if axiom == "horse_lottery":
        from .vector_hulls import validate_horse_lottery

        verdict = validate_horse_lottery(certificate.universe)
        return verdict.is_violated and verdict.certificate.thing == certificate.thing
    not_mask = assessment.not_mask if assessment is not None else 0
    des_mask = assessment.des_mask if assessment is not None else 0
    if axiom in ("D1", "D2", "D3"):
        mask = d.mask if d is not None else certificate.sets[0]
        t = certificate.thing
        if axiom == "D1":
            return bool((mask & not_mask) >> t & 1)
        if axiom == "D2":
            return bool((des_mask & ~mask) >> t & 1)
        if cl is None:
            raise ValueError("replaying D3 needs the operator")
        return bool((cl.image(mask) & ~mask) >> t & 1)
    if k is None:
        raise ValueError(f"replaying {axiom} needs the family")
    if axiom == "A_tot":
        (a,) = certificate.sets
        return a not in _masks(k)
    if cl is None:
        raise ValueError(f"replaying {axiom} needs the operator")
    ctx = _context(k, assessment, cl, q, DEFAULT_SETTINGS)
    if axiom == "K1":
        return 0 in ctx.k
    if axiom == "K2":
        a, b = certificate.sets
        return a & b == a and a in ctx.k and ctx.in_q(a) and ctx.in_q(b) and b not in ctx.k
    if axiom == "K3":
        a, rest = certificate.sets
        return (
            a in ctx.k
            and ctx.in_q(a)
            and rest == a & ~not_mask
            and ctx.in_q(rest)
            and rest not in ctx.k
        )
    if axiom == "K4":
        t = certificate.thing
        return bool(des_mask >> t & 1) and ctx.in_q(1 << t) and (1 << t) not in ctx.k
    if axiom in K5_AXIOMS or axiom == "K5*":
        return _replay_k5(certificate, ctx)
    raise ValueError(f"no replay rule for {axiom!r}")


__all__ = [
    "STRENGTH_AXIOMS",
    "K5_AXIOMS",
    "AXIOM_ORDER",
    "Variant",
    "FULL",
    "realizable_images",
    "check_sdt",
    "coherence_possible",
    "coherent_sdt_masks",
    "enumerate_coherent_sdts",
    "K5Instance",
    "k5_instance",
    "minimal_units",
    "hitting_family",
    "check_axiom",
    "check_sds",
    "check_strengthened_k5",
    "enumerate_coherent_sds",
    "replay",
]
