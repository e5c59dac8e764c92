"""
claims_harness.py – exhaustive verification of the desirability claims
======================================================================

Every claim in ``CLAIMS`` is a quantified statement that can be decided on a
finite instance space: a handful of seeded closure operators over a small
universe, all (or seeded) assessments, and every family of sets.  A claim
answers with a ``Verdict``; a Violated verdict carries the counterexample.

Operator seeds (``InstanceConfig.operators``):

    identity     cl = iden over t1 … tn
    lift         unitary lift t1 → t2, t3 → t4, …
    moore        seeded random Moore family over t1 … tn
    transitive   trans traced onto the pairs (o1,o2), (o2,o3), (o1,o3), …
    posi         positive hull traced onto (1,0), (0,1), (1,1), …
    chull        convex hull traced onto (0,0), (2,0), (1,0), (0,2), …

Claims whose hypothesis needs a structural property (unitary, incremental)
skip operators whose probe says otherwise and say so in the verdict note.
"""
from __future__ import annotations

import itertools
import logging
import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

from .closure_operators import (
    YES,
    ClosureOperator,
    certify,
    identity_operator,
    random_moore_operator,
    trace_operator,
    transitive_operator,
    unitary_lift,
)
from .coherence_checker import (
    FULL,
    Variant,
    check_axiom,
    check_sds,
    check_sdt,
    check_strengthened_k5,
    coherence_possible,
    coherent_sdt_masks,
    enumerate_coherent_sds,
)
from .config import DEFAULT_SETTINGS, EngineSettings
from .errors import UnknownClaim
from .natural_extension import sds_natural_extension
from .representation import (
    comparison_sets,
    d_family_mask,
    fin_of,
    is_finitary,
    k_from_d,
    represent,
    represent_total_orders,
    strict_total_orders,
    total_order_setting,
)
from .things import (
    Assessment,
    Family,
    QDomain,
    ThingSet,
    Universe,
    all_bitmap,
    bits,
    canonical_masks,
    gamble_universe,
    generic_universe,
    hitting_bitmap,
    nonempty_subfamilies,
    preference_universe,
    selection_masks,
)
from .verdicts import Certificate, Verdict

logger = logging.getLogger(__name__)

Masks = FrozenSet[int]

# ────────────────────────────────────────────────────────────────
# 0.  Instance space
# ────────────────────────────────────────────────────────────────
_PAIR_SEQUENCE = [
    ("o1", "o2"), ("o2", "o3"), ("o1", "o3"), ("o3", "o4"),
    ("o2", "o4"), ("o1", "o4"), ("o2", "o1"), ("o3", "o2"),
]
_POSI_SEQUENCE = [(1, 0), (0, 1), (1, 1), (-1, 0), (1, -1), (0, -1), (2, 1), (-1, -1)]
_CHULL_SEQUENCE = [(0, 0), (2, 0), (1, 0), (0, 2), (1, 1), (2, 2), (0, 1), (3, 1)]


def _lift_operator(size: int, seed: int, settings: EngineSettings) -> ClosureOperator:
    universe = generic_universe(size)
    lift = {f"t{i}": [f"t{i + 1}"] for i in range(1, size, 2)}
    return unitary_lift(universe, lift, settings=settings)


def _transitive(size: int, seed: int, settings: EngineSettings) -> ClosureOperator:
    pairs = _PAIR_SEQUENCE[:size]
    options = sorted({o for p in pairs for o in p})
    return transitive_operator(preference_universe(options, pairs=pairs, settings=settings), settings=settings)


def _hull(ambient: str, catalog: Sequence[Tuple[int, int]]) -> Callable[[int, int, EngineSettings], ClosureOperator]:
    def build(size: int, seed: int, settings: EngineSettings) -> ClosureOperator:
        return trace_operator(gamble_universe(catalog[:size], settings=settings), ambient, settings=settings)

    return build


OPERATOR_SEEDS: Dict[str, Callable[[int, int, EngineSettings], ClosureOperator]] = {
    "identity": lambda n, seed, cfg: identity_operator(generic_universe(n), settings=cfg),
    "lift": _lift_operator,
    "moore": lambda n, seed, cfg: random_moore_operator(generic_universe(n), seed, settings=cfg),
    "transitive": _transitive,
    "posi": _hull("posi", _POSI_SEQUENCE),
    "chull": _hull("chull", _CHULL_SEQUENCE),
}


@dataclass(frozen=True)
class InstanceConfig:
    size: int = 2
    operators: Tuple[str, ...] = tuple(OPERATOR_SEEDS)
    assessments: Optional[int] = None  # None: all 4^n at n ≤ 2, else 20 seeded
    seed: int = 0
    settings: EngineSettings = DEFAULT_SETTINGS

    def __post_init__(self) -> None:
        unknown = sorted(set(self.operators) - set(OPERATOR_SEEDS))
        if unknown:
            raise ValueError(f"unknown operator seed(s): {unknown}")
        if not 1 <= self.size <= len(_PAIR_SEQUENCE):
            raise ValueError(f"size must lie in 1..{len(_PAIR_SEQUENCE)}, got {self.size}")


@dataclass
class Instance:
    name: str
    cl: ClosureOperator

    @property
    def universe(self) -> Universe:
        return self.cl.universe


def build_instances(config: InstanceConfig) -> List[Instance]:
    out = []
    for name in config.operators:
        cl = OPERATOR_SEEDS[name](config.size, config.seed, config.settings)
        out.append(Instance(name, certify(cl, config.settings)))
    return out


def assessments_for(universe: Universe, config: InstanceConfig) -> List[Assessment]:
    """All 4^n assessments at n ≤ 2 (unless a count is given), else seeded ones."""
    n = universe.size
    if config.assessments is None and n <= 2:
        out = []
        for code in range(4 ** n):
            not_mask = des_mask = 0
            for i in range(n):
                digit = code // 4 ** i % 4
                if digit & 1:
                    not_mask |= 1 << i
                if digit & 2:
                    des_mask |= 1 << i
            out.append(Assessment(ThingSet(universe, not_mask), ThingSet(universe, des_mask)))
        return out
    count = 20 if config.assessments is None else config.assessments
    rng = random.Random(config.seed)
    out = [Assessment.empty(universe)]
    while len(out) < count:
        out.append(
            Assessment(ThingSet(universe, rng.getrandbits(n)), ThingSet(universe, rng.getrandbits(n)))
        )
    return out[:max(count, 1)]


def all_families(universe: Universe, settings: EngineSettings, nonempty: bool = False) -> Iterator[Masks]:
    """Every family over 𝒫(𝒯), or over the nonempty sets only."""
    universe.check_size(settings.sds_full_cap, "claim families")
    pool = canonical_masks(range(1 if nonempty else 0, 1 << universe.size))
    for pick in range(1 << len(pool)):
        yield frozenset(pool[i] for i in bits(pick))


def q_domains(size: int, proper: bool = True) -> List[QDomain]:
    """Q = full, plus a proper card_bound standing in for the finite sets."""
    out = [QDomain.full()]
    if proper and size >= 2:
        out.append(QDomain.card_bound(size - 1))
    return out


# ────────────────────────────────────────────────────────────────
# 1.  Scan bookkeeping
# ────────────────────────────────────────────────────────────────
@dataclass
class _Scan:
    claim: str
    inst: Instance
    cases: int = 0
    budget_notes: List[str] = field(default_factory=list)

    def fail(self, detail: str, sets: Sequence[int] = (), family: Sequence[int] = ()) -> Verdict:
        cert = Certificate(
            self.claim,
            self.inst.universe,
            sets=tuple(sets),
            family=tuple(family),
            detail=f"{self.inst.name}: {detail}",
        )
        return Verdict.violated(cert)

    def settled(self, *verdicts: Verdict) -> bool:
        """False (and noted) when any verdict ran out of budget."""
        for v in verdicts:
            if v.is_inconclusive:
                self.budget_notes.append(v.budget_note or "inconclusive")
                return False
        return True

    def result(self) -> Verdict:
        if self.budget_notes:
            return Verdict.inconclusive(
                f"{self.inst.name}: {len(self.budget_notes)} inconclusive case(s); first: {self.budget_notes[0]}"
            )
        return Verdict.verified(note=f"{self.inst.name}: {self.cases} cases")


def _ids(universe: Universe, masks) -> List[List[str]]:
    return [universe.ids_of(m) for m in canonical_masks(masks)]


def _kd_bitmap(size: int, ds: Sequence[int]) -> int:
    out = all_bitmap(size)
    for d in ds:
        out &= hitting_bitmap(size, d)
    return out


def _bitmap(k: Masks) -> int:
    out = 0
    for m in k:
        out |= 1 << m
    return out


def _representable(k: Masks, sdts: Sequence[int], q: QDomain, size: int) -> bool:
    candidates = [d for d in sdts if all(a & d for a in k)]
    if not candidates:
        return False
    restricted = {m for m in bits(_kd_bitmap(size, candidates)) if q.contains(m)}
    return restricted == set(k)


def _coherent_families(inst: Instance, a: Assessment, cfg: EngineSettings) -> List[Masks]:
    return [k.masks for k in enumerate_coherent_sds(a, inst.cl, FULL, cfg)]


# ────────────────────────────────────────────────────────────────
# 2.  Claims
# ────────────────────────────────────────────────────────────────
def _identity_k2_suffices(inst: Instance, config: InstanceConfig) -> Verdict:
    """Under iden, K2 alone forces K5 (checked without the monotone shortcut)."""
    scan = _Scan("identity_k2_suffices", inst)
    general = config.settings.with_overrides(use_shortcuts=False)
    for k in all_families(inst.universe, config.settings, nonempty=True):
        if not check_axiom(k, None, inst.cl, "K2").is_verified:
            continue
        scan.cases += 1
        v = check_axiom(k, None, inst.cl, "K5", settings=general)
        if v.is_violated:
            return scan.fail(f"K2 holds but K5 fails on {_ids(inst.universe, k)}", family=k)
        scan.settled(v)
    return scan.result()


def _consistency(inst: Instance, config: InstanceConfig) -> Verdict:
    scan = _Scan("consistency", inst)
    cfg = config.settings
    for a in assessments_for(inst.universe, config):
        scan.cases += 1
        possible = coherence_possible(a, inst.cl)
        some_sdt = bool(coherent_sdt_masks(a, inst.cl, cfg))
        some_sds = bool(enumerate_coherent_sds(a, inst.cl, FULL, cfg))
        if not possible == some_sdt == some_sds:
            return scan.fail(
                f"A_not={a.a_not.ids()} A_des={a.a_des.ids()}: possible={possible}, "
                f"𝐃 nonempty={some_sdt}, 𝐊 nonempty={some_sds}"
            )
    return scan.result()


def _sdt_sds_bridge(inst: Instance, config: InstanceConfig) -> Verdict:
    scan = _Scan("sdt_sds_bridge", inst)
    u = inst.universe
    for a in assessments_for(u, config):
        for d in u.all_sets():
            scan.cases += 1
            as_sdt = check_sdt(ThingSet(u, d), a, inst.cl)
            as_sds = check_sds(k_from_d(ThingSet(u, d)), a, inst.cl, FULL, config.settings)
            if not scan.settled(as_sds):
                continue
            if as_sdt.is_verified != as_sds.is_verified:
                return scan.fail(
                    f"D={u.ids_of(d)}: check_sdt {as_sdt.summary()} but K_D {as_sds.summary()}", sets=(d,)
                )
    return scan.result()


def _intersections(inst: Instance, config: InstanceConfig) -> Verdict:
    scan = _Scan("intersections", inst)
    cfg = config.settings
    u = inst.universe
    for a in assessments_for(u, config):
        sdts = coherent_sdt_masks(a, inst.cl, cfg)
        for r in (2, 3):
            for combo in itertools.combinations(sdts, r):
                scan.cases += 1
                meet = u.full_mask
                for d in combo:
                    meet &= d
                if not check_sdt(ThingSet(u, meet), a, inst.cl).is_verified:
                    return scan.fail(f"∩ of coherent SDTs {_ids(u, combo)} is not coherent", sets=combo)
        families = _coherent_families(inst, a, cfg)
        for r in (2, 3):
            for combo in itertools.combinations(families, r):
                scan.cases += 1
                meet = frozenset.intersection(*combo)
                v = check_sds(meet, a, inst.cl, FULL, cfg)
                if v.is_violated:
                    return scan.fail(f"∩ of coherent families is not coherent: {v.summary()}", family=meet)
                scan.settled(v)
    return scan.result()


def _strengthened_k5(inst: Instance, config: InstanceConfig) -> Verdict:
    scan = _Scan("strengthened_k5", inst)
    for a in assessments_for(inst.universe, config):
        for k in _coherent_families(inst, a, config.settings):
            scan.cases += 1
            v = check_strengthened_k5(k, a, inst.cl, config.settings)
            if v.is_violated:
                return scan.fail(f"strengthened K5 fails on a coherent family: {v.summary()}", family=k)
            scan.settled(v)
    return scan.result()


def _constructive_sandwich(inst: Instance, config: InstanceConfig) -> Verdict:
    """𝒟_𝒜 ⊆ 𝐃 is nonempty and 𝒜 ⊆ K_{𝒟_𝒜} ⊆ K for every 𝒜 ⊆ K."""
    scan = _Scan("constructive_sandwich", inst)
    cfg = config.settings
    u = inst.universe
    for a in assessments_for(u, config):
        for k in _coherent_families(inst, a, cfg):
            members = canonical_masks(k)
            if 1 << len(members) > cfg.k5_budget:
                scan.budget_notes.append(f"{len(members)} members exceed k5_budget")
                continue
            kb = _bitmap(k)
            for r in range(len(members) + 1):
                for sub in itertools.combinations(members, r):
                    scan.cases += 1
                    ds = d_family_mask(sub, a, inst.cl)
                    if not ds:
                        return scan.fail("𝒟_𝒜 is empty", family=sub)
                    for d in ds:
                        if not check_sdt(ThingSet(u, d), a, inst.cl).is_verified:
                            return scan.fail(f"{u.ids_of(d)} ∈ 𝒟_𝒜 is not coherent", sets=(d,), family=sub)
                    kd = _kd_bitmap(u.size, ds)
                    if _bitmap(frozenset(sub)) & ~kd or kd & ~kb:
                        return scan.fail("𝒜 ⊆ K_{𝒟_𝒜} ⊆ K fails", family=sub)
    return scan.result()


def _representation(inst: Instance, config: InstanceConfig) -> Verdict:
    scan = _Scan("representation", inst)
    cfg = config.settings
    u = inst.universe
    for a in assessments_for(u, config):
        sdts = coherent_sdt_masks(a, inst.cl, cfg)
        families = _coherent_families(inst, a, cfg)
        coherent = {_bitmap(k) for k in families}
        by_k: Dict[int, List[Tuple[int, ...]]] = {}
        for r in range(1, len(sdts) + 1):
            for ds in itertools.combinations(sdts, r):
                kd = _kd_bitmap(u.size, ds)
                if kd not in coherent:
                    return scan.fail("K_𝒟 of coherent SDTs is not coherent", sets=ds)
                by_k.setdefault(kd, []).append(ds)
        for k in families:
            scan.cases += 1
            rep = represent(Family(u, k), a, inst.cl, cfg)
            if not rep.verified:
                return scan.fail(f"representation failed: {list(rep.notes)}", family=k)
            largest = {d.mask for d in rep.largest}
            for ds in by_k.get(_bitmap(k), []):
                if not set(ds) <= largest:
                    return scan.fail("a representer escapes 𝐃(K)", sets=ds, family=k)
    return scan.result()


def _finite_gives_binary(inst: Instance, config: InstanceConfig) -> Verdict:
    """Subset-closed Q: K5fin^Q and K2^Q give K5bin^Q."""
    scan = _Scan("finite_gives_binary", inst)
    cfg = config.settings
    for q in q_domains(inst.universe.size):
        for k in all_families(inst.universe, cfg):
            fin = check_axiom(k, None, inst.cl, "K5fin", q, cfg)
            if not scan.settled(fin) or not fin.is_verified:
                continue
            if not check_axiom(k, None, inst.cl, "K2", q, cfg).is_verified:
                continue
            scan.cases += 1
            v = check_axiom(k, None, inst.cl, "K5bin", q, cfg)
            if v.is_violated:
                return scan.fail(f"K5bin fails in {q.describe()}", family=k)
            scan.settled(v)
    return scan.result()


def _strengths_agree(
    scan: _Scan, k: Masks, cl: ClosureOperator, axioms: Sequence[str], q: QDomain, cfg: EngineSettings
) -> Optional[Verdict]:
    verdicts = [check_axiom(k, None, cl, ax, q, cfg) for ax in axioms]
    if not scan.settled(*verdicts):
        return None
    outcomes = {v.is_verified for v in verdicts}
    if len(outcomes) > 1:
        detail = ", ".join(f"{ax}={v.summary()}" for ax, v in zip(axioms, verdicts))
        return scan.fail(f"strengths disagree in {q.describe()}: {detail}", family=k)
    return None


def _unitary_strengths_agree(inst: Instance, config: InstanceConfig) -> Verdict:
    """Unitary cl: K5, K5fin, K5bin and K5un agree on families satisfying K2^Q."""
    scan = _Scan("unitary_strengths_agree", inst)
    cfg = config.settings
    for q in q_domains(inst.universe.size):
        for k in all_families(inst.universe, cfg):
            if not check_axiom(k, None, inst.cl, "K2", q, cfg).is_verified:
                continue
            scan.cases += 1
            failed = _strengths_agree(scan, k, inst.cl, ("K5", "K5fin", "K5bin", "K5un"), q, cfg)
            if failed:
                return failed
    return scan.result()


def _finitary_full_is_finite(inst: Instance, config: InstanceConfig) -> Verdict:
    """Finitary cl: K5 ⇔ K5fin; also the shortcut agrees with the general path."""
    scan = _Scan("finitary_full_is_finite", inst)
    cfg = config.settings.with_overrides(use_shortcuts=True)
    general = config.settings.with_overrides(use_shortcuts=False)
    for k in all_families(inst.universe, cfg):
        scan.cases += 1
        failed = _strengths_agree(scan, k, inst.cl, ("K5", "K5fin"), QDomain.full(), cfg)
        if failed:
            return failed
        fast = check_axiom(k, None, inst.cl, "K5", None, cfg)
        slow = check_axiom(k, None, inst.cl, "K5", None, general)
        if scan.settled(fast, slow) and fast.is_verified != slow.is_verified:
            return scan.fail(f"shortcut {fast.summary()} vs general {slow.summary()}", family=k)
    return scan.result()


def _incremental_binary_is_finite(inst: Instance, config: InstanceConfig) -> Verdict:
    scan = _Scan("incremental_binary_is_finite", inst)
    cfg = config.settings
    for k in all_families(inst.universe, cfg):
        two = check_axiom(k, None, inst.cl, "K5bin", None, cfg)
        if not scan.settled(two) or not two.is_verified:
            continue
        if not check_axiom(k, None, inst.cl, "K2", None, cfg).is_verified:
            continue
        scan.cases += 1
        v = check_axiom(k, None, inst.cl, "K5fin", None, cfg)
        if v.is_violated:
            return scan.fail("K5bin and K2 hold but K5fin fails", family=k)
        scan.settled(v)
    return scan.result()


def _finitary_incremental_agree(inst: Instance, config: InstanceConfig) -> Verdict:
    """Finitary, incremental cl and finitary K: full, finite and 2-coherence agree."""
    scan = _Scan("finitary_incremental_agree", inst)
    cfg = config.settings
    u = inst.universe
    for a in assessments_for(u, config):
        for k in all_families(u, cfg):
            if not is_finitary(Family(u, k)):
                continue
            scan.cases += 1
            verdicts = [check_sds(k, a, inst.cl, Variant(s), cfg) for s in ("full", "finite", "two")]
            if not scan.settled(*verdicts):
                continue
            if len({v.is_verified for v in verdicts}) > 1:
                detail = ", ".join(v.summary() for v in verdicts)
                return scan.fail(f"coherence notions disagree: {detail}", family=k)
    return scan.result()


def _fin_is_finitary(inst: Instance, config: InstanceConfig) -> Verdict:
    scan = _Scan("fin_is_finitary", inst)
    u = inst.universe
    for q in q_domains(u.size):
        for k in all_families(u, config.settings):
            scan.cases += 1
            if not is_finitary(fin_of(Family(u, k), q), q):
                return scan.fail(f"fin(K) is not finitary in {q.describe()}", family=k)
    return scan.result()


def _finitary_iff_fixed(inst: Instance, config: InstanceConfig) -> Verdict:
    scan = _Scan("finitary_iff_fixed", inst)
    u = inst.universe
    for q in q_domains(u.size):
        for k in all_families(u, config.settings):
            scan.cases += 1
            family = Family(u, k)
            if is_finitary(family, q) != (fin_of(family, q).masks == k):
                return scan.fail(f"finitary ⇔ K = fin(K) fails in {q.describe()}", family=k)
    return scan.result()


# label → (premise axiom on K in Q, conclusion axiom on fin(K) in full, any Q)
_FIN_ITEMS: Tuple[Tuple[str, Optional[str], Optional[str], bool], ...] = (
    ("K1 carries over", "K1", "K1", True),
    ("fin(K) is up-closed", None, "K2", True),
    ("K ∩ Q kept", "K2", None, True),
    ("K3 carries over", "K3", "K3", True),
    ("K4 carries over", "K4", "K4", True),
    ("K5un carries over", "K5un", "K5un", True),
    ("K5bin carries over", "K5bin", "K5bin", False),
    ("K5fin carries over", "K5fin", "K5fin", False),
    ("K5fin gives K5", "K5fin", "K5", False),
)


def _fin_transfer(inst: Instance, config: InstanceConfig) -> Verdict:
    """Axioms that pass from K in Q to fin(K); the K5bin and K5fin rows only for Q = full."""
    scan = _Scan("fin_transfer", inst)
    cfg = config.settings
    u = inst.universe
    for a in assessments_for(u, config):
        for q in q_domains(u.size):
            for k in all_families(u, cfg):
                fk = fin_of(Family(u, k), q).masks
                for label, premise, conclusion, any_q in _FIN_ITEMS:
                    if not any_q and q.kind != "full":
                        continue
                    if premise is not None:
                        held = check_axiom(k, a, inst.cl, premise, q, cfg)
                        if not scan.settled(held) or not held.is_verified:
                            continue
                    scan.cases += 1
                    if conclusion is None:
                        if {m for m in fk if q.contains(m)} != {m for m in k if q.contains(m)}:
                            return scan.fail(f"{label}: fin(K) ∩ Q differs from K ∩ Q", family=k)
                        continue
                    v = check_axiom(fk, a, inst.cl, conclusion, None, cfg)
                    if v.is_violated:
                        return scan.fail(
                            f"{label} in {q.describe()}: fin(K) fails {conclusion}", family=k
                        )
                    scan.settled(v)
    return scan.result()


def _fin_selections_refine(inst: Instance, config: InstanceConfig) -> Verdict:
    """Every nonempty 𝒜 ⊆ fin(K) has a nonempty ℬ ⊆ K ∩ Q with 𝒮_ℬ ⊆ 𝒮_𝒜."""
    scan = _Scan("fin_selections_refine", inst)
    cfg = config.settings
    u = inst.universe
    for q in q_domains(u.size):
        for k in all_families(u, cfg):
            generators = canonical_masks(m for m in k if q.contains(m))
            fk = canonical_masks(fin_of(Family(u, k), q).masks)
            if (1 << len(fk)) - 1 > cfg.k5_budget:
                scan.budget_notes.append(f"{len(fk)} members of fin(K) exceed k5_budget")
                continue
            for sub in nonempty_subfamilies(fk):
                scan.cases += 1
                below = tuple(next(g for g in generators if g & a == g) for a in sub)
                if not selection_masks(below) <= selection_masks(sub):
                    return scan.fail("𝒮_ℬ is not contained in 𝒮_𝒜", family=sub)
    return scan.result()


def _finitary_q_agreement(inst: Instance, config: InstanceConfig) -> Verdict:
    """Finitary K: each coherence notion agrees with its counterpart in Q."""
    scan = _Scan("finitary_q_agreement", inst)
    cfg = config.settings
    u = inst.universe
    for a in assessments_for(u, config):
        for q in q_domains(u.size):
            strengths = ("full", "finite", "two", "one") if q.kind == "full" else ("one",)
            for k in all_families(u, cfg):
                if not is_finitary(Family(u, k), q):
                    continue
                for s in strengths:
                    scan.cases += 1
                    outer = check_sds(k, a, inst.cl, Variant(s), cfg)
                    inner = check_sds(k, a, inst.cl, Variant(s, q), cfg)
                    if scan.settled(outer, inner) and outer.is_verified != inner.is_verified:
                        return scan.fail(
                            f"{s}-coherence {outer.summary()} but in {q.describe()} {inner.summary()}",
                            family=k,
                        )
    return scan.result()


def _representation_claim(claim: str, strength: str, proper_q: bool) -> Callable[[Instance, InstanceConfig], Verdict]:
    """K ⊆ Q has the given coherence in Q iff K = K_𝒟 ∩ Q for a nonempty 𝒟 ⊆ 𝐃."""

    def run(inst: Instance, config: InstanceConfig) -> Verdict:
        scan = _Scan(claim, inst)
        cfg = config.settings
        u = inst.universe
        for a in assessments_for(u, config):
            sdts = coherent_sdt_masks(a, inst.cl, cfg)
            for q in q_domains(u.size, proper=proper_q):
                for k in all_families(u, cfg):
                    if not all(q.contains(m) for m in k):
                        continue
                    scan.cases += 1
                    v = check_sds(k, a, inst.cl, Variant(strength, q), cfg)
                    if not scan.settled(v):
                        continue
                    if v.is_verified != _representable(k, sdts, q, u.size):
                        return scan.fail(
                            f"{strength}-coherence in {q.describe()} is {v.summary()} "
                            "but representability disagrees",
                            family=k,
                        )
        return scan.result()

    return run


def _total_orders(inst: Instance, config: InstanceConfig) -> Verdict:
    scan = _Scan("total_orders", inst)
    cfg = config.settings
    u = inst.universe
    assessment, cl = total_order_setting(u)
    base = Family(u, frozenset(comparison_sets(u)))
    ext = sds_natural_extension(base, assessment, cl, "binary_rules", cfg)
    if not ext.is_extended:
        return scan.fail(f"binary natural extension of 𝒜_tot is {ext.outcome}")
    k = ext.model
    verdict, orders = represent_total_orders(k, assessment, cl, cfg)
    scan.cases += 1
    if not verdict.is_verified:
        return scan.fail(f"extension of 𝒜_tot is {verdict.summary()}")
    expected = {d.mask for d in strict_total_orders(u)}
    if {d.mask for d in orders} != expected or len(expected) != math.factorial(len(u.options)):
        return scan.fail(f"found {len(orders)} orders, expected {math.factorial(len(u.options))}")
    for a in comparison_sets(u):
        scan.cases += 1
        v, _ = represent_total_orders(Family(u, k.masks - {a}), assessment, cl, cfg)
        if not v.is_violated:
            return scan.fail(f"dropping {u.ids_of(a)} still gives {v.summary()}", sets=(a,))
    return scan.result()


def _total_order_instances(config: InstanceConfig) -> List[Instance]:
    options = [f"o{i + 1}" for i in range(min(max(config.size, 2), 3))]
    universe = preference_universe(options, settings=config.settings)
    _, cl = total_order_setting(universe)
    return [Instance("transitive", certify(cl, config.settings))]


# ────────────────────────────────────────────────────────────────
# 3.  Registry
# ────────────────────────────────────────────────────────────────
@dataclass(frozen=True)
class Claim:
    claim_id: str
    summary: str
    check: Callable[[Instance, InstanceConfig], Verdict]
    requires: Tuple[str, ...] = ()  # property flags that must be "yes"
    only: Tuple[str, ...] = ()  # operator seeds the claim is about
    per_universe: bool = False  # operator-independent: first instance only
    instances: Callable[[InstanceConfig], List[Instance]] = build_instances


def _claims(*claims: Claim) -> Dict[str, Claim]:
    return {c.claim_id: c for c in claims}


CLAIMS: Dict[str, Claim] = _claims(
    Claim("identity_k2_suffices", "iden: K2 implies K5", _identity_k2_suffices, only=("identity",)),
    Claim("consistency", "coherence possible ⇔ 𝐃 ≠ ∅ ⇔ 𝐊 ≠ ∅", _consistency),
    Claim("sdt_sds_bridge", "D coherent ⇔ K_D coherent", _sdt_sds_bridge),
    Claim("intersections", "intersections of coherent models are coherent", _intersections),
    Claim("strengthened_k5", "coherent K satisfies the strengthened K5", _strengthened_k5),
    Claim("constructive_sandwich", "𝒟_𝒜 ⊆ 𝐃 nonempty and 𝒜 ⊆ K_{𝒟_𝒜} ⊆ K", _constructive_sandwich),
    Claim("representation", "coherent K = K_{𝒟_K} = K_{𝐃(K)}", _representation),
    Claim("finite_gives_binary", "subset-closed Q: finite coherence gives 2-coherence", _finite_gives_binary),
    Claim("unitary_strengths_agree", "unitary cl: all strengths agree", _unitary_strengths_agree, requires=("unitary",)),
    Claim("finitary_full_is_finite", "finitary cl: coherence ⇔ finite coherence", _finitary_full_is_finite, requires=("finitary",)),
    Claim("incremental_binary_is_finite", "incremental cl: 2-coherence gives finite coherence", _incremental_binary_is_finite, requires=("incremental",)),
    Claim(
        "finitary_incremental_agree",
        "finitary incremental cl, finitary K: coherence ⇔ 2-coherence ⇔ finite coherence",
        _finitary_incremental_agree,
        requires=("finitary", "incremental"),
    ),
    Claim("fin_is_finitary", "fin(K) is finitary", _fin_is_finitary, per_universe=True),
    Claim("finitary_iff_fixed", "K finitary ⇔ K = fin(K)", _finitary_iff_fixed, per_universe=True),
    Claim("fin_transfer", "coherence axioms transfer from K in Q to fin(K)", _fin_transfer),
    Claim("fin_selections_refine", "selections of fin(K) refine selections of K", _fin_selections_refine, per_universe=True),
    Claim("finitary_q_agreement", "finitary K: coherence ⇔ coherence in Q", _finitary_q_agreement),
    Claim("unitary_representation", "unitary cl: 1-coherent ⇔ K = K_𝒟", _representation_claim("unitary_representation", "one", False), requires=("unitary",)),
    Claim("finite_representation_in_q", "finitary cl: finitely coherent in Q ⇔ K = K_𝒟 ∩ Q", _representation_claim("finite_representation_in_q", "finite", False), requires=("finitary",)),
    Claim(
        "binary_representation_in_q",
        "finitary incremental cl: 2-coherent in Q ⇔ K = K_𝒟 ∩ Q",
        _representation_claim("binary_representation_in_q", "two", False),
        requires=("finitary", "incremental"),
    ),
    Claim("unitary_representation_in_q", "unitary cl: 1-coherent in Q ⇔ K = K_𝒟 ∩ Q", _representation_claim("unitary_representation_in_q", "one", True), requires=("unitary",)),
    Claim("total_orders", "strict total orders represent the 2-coherent extension of 𝒜_tot", _total_orders, instances=_total_order_instances),
)


def _skip_reason(claim: Claim, inst: Instance) -> Optional[str]:
    if claim.only and inst.name not in claim.only:
        return f"{inst.name}: outside the claim"
    for flag in claim.requires:
        if getattr(inst.cl.flags, flag) != YES:
            return f"{inst.name}: not {flag}"
    return None


def verify_claim(claim_id: str, config: InstanceConfig = InstanceConfig()) -> Verdict:
    """Decide one claim over the instance space of *config*."""
    try:
        claim = CLAIMS[claim_id]
    except KeyError:
        raise UnknownClaim(claim_id) from None
    instances = claim.instances(config)
    skipped = []
    runnable = []
    for inst in instances:
        reason = _skip_reason(claim, inst)
        if reason:
            skipped.append(reason)
        else:
            runnable.append(inst)
    if claim.per_universe:
        runnable = runnable[:1]
    logger.debug("verify_claim(%s): %d instances, %d skipped", claim_id, len(runnable), len(skipped))

    def run(inst: Instance) -> Verdict:
        return claim.check(inst, config)

    if config.settings.threads > 1 and len(runnable) > 1:
        with ThreadPoolExecutor(max_workers=config.settings.threads) as pool:
            verdicts = list(pool.map(run, runnable))
    else:
        verdicts = []
        for inst in runnable:
            verdicts.append(run(inst))
            if verdicts[-1].is_violated:
                break
    notes = [v.note for v in verdicts if v.note]
    if skipped:
        notes.append("skipped " + "; ".join(skipped))
    note = " | ".join(notes)
    for v in verdicts:
        if v.is_violated:
            return Verdict.violated(v.certificate, note=note)
    for v in verdicts:
        if v.is_inconclusive:
            return Verdict.inconclusive(v.budget_note or "inconclusive", note=note)
    if not runnable:
        return Verdict.verified(note=note or "no instance meets the hypothesis")
    return Verdict.verified(note=note)


__all__ = [
    "OPERATOR_SEEDS",
    "InstanceConfig",
    "Instance",
    "build_instances",
    "assessments_for",
    "all_families",
    "q_domains",
    "Claim",
    "CLAIMS",
    "verify_claim",
]
