"""
closure_operators.py – closure operators, their laws and structural probes
=========================================================================

A ``ClosureOperator`` is a total map 𝒫(𝒯) → 𝒫(𝒯) over one universe.  Built-in
kinds:

    identity       cl(A) = A
    unitary_lift   cl(A) = ∪ reach(t), reach from a per-thing map t ↦ set
    table          explicit image per subset (missing entries map to themselves)
    moore          smallest closed superset in an intersection-closed family
    transitive     transitive closure of preference pairs, traced onto 𝒯
    posi / chull   positive / convex hull of rational vectors, traced onto 𝒯

Laws (cl1 extensive, cl2 monotone, cl3 idempotent, cl4 empty) are decided by
``check_laws``; ``probe_properties`` then decides unitary / finitary /
incremental by exhaustive quantification.  The results live on the operator as
``PropertyFlags`` and are only ever written by these two functions.
"""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

import networkx as nx

from .config import DEFAULT_SETTINGS, EngineSettings
from .errors import LawsUnverified, MalformedDocument, WrongPayload
from .things import Pair, ThingSet, Universe, bits
from .vector_hulls import trace_hull
from .verdicts import LawViolation, Verdict

logger = logging.getLogger(__name__)

YES, NO, UNCHECKED = "yes", "no", "unchecked"

LAWS: Tuple[str, ...] = ("empty", "extensive", "idempotent", "monotone")

# ────────────────────────────────────────────────────────────────
# 0.  Operator type
# ────────────────────────────────────────────────────────────────
@dataclass
class PropertyFlags:
    laws: str = UNCHECKED
    unitary: str = UNCHECKED
    finitary: str = UNCHECKED
    incremental: str = UNCHECKED
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "laws": self.laws,
            "unitary": self.unitary,
            "finitary": self.finitary,
            "incremental": self.incremental,
        }
        if self.notes:
            out["notes"] = list(self.notes)
        return out


class ClosureOperator:
    """Total map on the subsets of *universe*, memoised per mask."""

    def __init__(
        self,
        universe: Universe,
        kind: str,
        image: Callable[[int], int],
        params: Optional[Mapping[str, Any]] = None,
    ):
        self.universe = universe
        self.kind = kind
        self.params: Dict[str, Any] = dict(params or {})
        self.flags = PropertyFlags()
        self.laws_verdict: Optional[Verdict] = None
        self._image = image
        self._cache: Dict[int, int] = {}

    def image(self, mask: int) -> int:
        try:
            return self._cache[mask]
        except KeyError:
            out = self._image(mask)
            self._cache[mask] = out
            return out

    def apply(self, a: ThingSet) -> ThingSet:
        return ThingSet(self.universe, self.image(a.mask))

    def describe(self) -> str:
        return f"{self.kind} over {self.universe.size} things"

    def __repr__(self) -> str:
        return f"ClosureOperator({self.kind!r}, size={self.universe.size}, laws={self.flags.laws})"


def apply(cl: ClosureOperator, a: ThingSet) -> ThingSet:
    return cl.apply(a)


def ensure_lawful(cl: ClosureOperator) -> None:
    if cl.flags.laws != YES:
        raise LawsUnverified(f"{cl.describe()}: laws are {cl.flags.laws}, run check_laws first")


# ────────────────────────────────────────────────────────────────
# 1.  Built-in operators
# ────────────────────────────────────────────────────────────────
def _finish(cl: ClosureOperator, verify: bool, settings: EngineSettings) -> ClosureOperator:
    if verify:
        check_laws(cl, settings)
    return cl


def identity_operator(
    universe: Universe, *, verify: bool = True, settings: EngineSettings = DEFAULT_SETTINGS
) -> ClosureOperator:
    return _finish(ClosureOperator(universe, "identity", lambda m: m), verify, settings)


def unitary_lift(
    universe: Universe,
    lift: Mapping[str, Iterable[str]],
    *,
    verify: bool = True,
    settings: EngineSettings = DEFAULT_SETTINGS,
) -> ClosureOperator:
    """cl({t}) = everything reachable from t along the lift map."""
    graph = nx.DiGraph()
    graph.add_nodes_from(range(universe.size))
    params: Dict[str, List[str]] = {}
    for src, targets in lift.items():
        i = universe.index(src)
        targets = list(targets)
        params[src] = targets
        graph.add_edges_from((i, universe.index(t)) for t in targets)
    reach = []
    for i in range(universe.size):
        mask = 1 << i
        for j in nx.descendants(graph, i):
            mask |= 1 << j
        reach.append(mask)

    def image(mask: int) -> int:
        out = 0
        for i in bits(mask):
            out |= reach[i]
        return out

    cl = ClosureOperator(universe, "unitary_lift", image, {"lift": params})
    return _finish(cl, verify, settings)


def thick_crust_lift(universe: Universe) -> Dict[str, List[str]]:
    """Lift every ``x`` to ``x-thick`` when the menu lists both."""
    return {t: [f"{t}-thick"] for t in universe.things if f"{t}-thick" in universe.things}


def table_operator(
    universe: Universe,
    table: Mapping[int, int],
    *,
    verify: bool = True,
    settings: EngineSettings = DEFAULT_SETTINGS,
) -> ClosureOperator:
    """Explicit images per subset mask; invalid tables are built but flagged."""
    entries = {int(k): int(v) for k, v in table.items()}
    full = universe.full_mask
    for k, v in entries.items():
        if k & ~full or v & ~full:
            raise ValueError(f"table entry {k:#x} -> {v:#x} leaves the universe")
    cl = ClosureOperator(universe, "table", lambda m: entries.get(m, m), {"table": entries})
    return _finish(cl, verify, settings)


def moore_family(universe: Universe, closed_sets: Iterable[int]) -> FrozenSet[int]:
    """Intersection-closure of *closed_sets* together with ∅ and 𝒯."""
    family = {0, universe.full_mask}
    frontier = set(closed_sets) - family
    while frontier:
        family |= frontier
        frontier = {a & b for a in family for b in family} - family
    return frozenset(family)


def moore_operator(
    universe: Universe,
    closed_sets: Iterable[int],
    *,
    verify: bool = True,
    settings: EngineSettings = DEFAULT_SETTINGS,
) -> ClosureOperator:
    closed = sorted(moore_family(universe, closed_sets))
    full = universe.full_mask

    def image(mask: int) -> int:
        out = full
        for c in closed:
            if c & mask == mask:
                out &= c
        return out

    cl = ClosureOperator(universe, "moore", image, {"closed": closed})
    return _finish(cl, verify, settings)


def random_moore_operator(
    universe: Universe,
    seed: int,
    count: Optional[int] = None,
    *,
    settings: EngineSettings = DEFAULT_SETTINGS,
) -> ClosureOperator:
    rng = random.Random(seed)
    count = universe.size if count is None else count
    generators = [rng.getrandbits(universe.size) for _ in range(count)] if universe.size else []
    return moore_operator(universe, generators, settings=settings)


# ── transitive closure over preference pairs ───────────────────
def _require_pairs(universe: Universe) -> None:
    if universe.payload_kind != "preference_pair":
        raise WrongPayload(f"needs preference_pair things, got {universe.payload_kind}")


def _trans_edges(pairs: Iterable[Pair]) -> List[Pair]:
    graph = nx.DiGraph()
    graph.add_edges_from(pairs)
    # reflexive=False: self-loops only for options on a cycle
    return list(nx.transitive_closure(graph, reflexive=False).edges())


def _trans_mask(universe: Universe, mask: int) -> int:
    if mask == 0:
        return 0
    out = mask
    for pair in _trans_edges(universe.pair(i) for i in bits(mask)):
        j = universe.index_of_pair(pair)
        if j is not None:
            out |= 1 << j
    return out


def trans_closure(a: ThingSet) -> ThingSet:
    """Smallest chain-closed superset of *a*, intersected with its universe."""
    _require_pairs(a.universe)
    return ThingSet(a.universe, _trans_mask(a.universe, a.mask))


def trans_pair(a: Pair, b: Pair) -> FrozenSet[Pair]:
    """trans({a, b}) by the four-case formula on the endpoints."""
    a1, a2 = a
    b1, b2 = b
    out = {tuple(a), tuple(b)}
    if a2 == b1 and a1 == b2:
        out |= {(a1, a1), (a2, a2)}
    elif a2 == b1:
        out.add((a1, b2))
    elif a1 == b2:
        out.add((b1, a2))
    return frozenset(out)


def transitive_operator(
    universe: Universe, *, verify: bool = True, settings: EngineSettings = DEFAULT_SETTINGS
) -> ClosureOperator:
    _require_pairs(universe)
    cl = ClosureOperator(universe, "transitive", lambda m: _trans_mask(universe, m))
    return _finish(cl, verify, settings)


# ── traced hull operators over rational vectors ────────────────
def trace_operator(
    universe: Universe,
    ambient: str,
    *,
    verify: bool = True,
    settings: EngineSettings = DEFAULT_SETTINGS,
) -> ClosureOperator:
    if universe.payload_kind != "rational_vector":
        raise WrongPayload(f"{ambient} needs rational_vector things, got {universe.payload_kind}")
    if ambient not in ("posi", "chull"):
        raise ValueError(f"unknown ambient hull {ambient!r}")
    cl = ClosureOperator(universe, ambient, lambda m: trace_hull(universe, m, ambient))
    return _finish(cl, verify, settings)


def _from_lift(universe: Universe, spec: Mapping[str, Any], settings: EngineSettings) -> ClosureOperator:
    lift = spec.get("lift")
    if not isinstance(lift, Mapping):
        raise MalformedDocument("unitary closure needs a 'lift' object")
    return unitary_lift(universe, lift, settings=settings)


def _from_table(universe: Universe, spec: Mapping[str, Any], settings: EngineSettings) -> ClosureOperator:
    rows = spec.get("table")
    if not isinstance(rows, list):
        raise MalformedDocument("table closure needs a 'table' list")
    table: Dict[int, int] = {}
    for row in rows:
        if not isinstance(row, Mapping) or "from" not in row or "to" not in row:
            raise MalformedDocument("table rows look like {'from': [...], 'to': [...]}")
        table[universe.mask_of(row["from"])] = universe.mask_of(row["to"])
    return table_operator(universe, table, settings=settings)


OPERATOR_FACTORIES: Dict[str, Callable[[Universe, Mapping[str, Any], EngineSettings], ClosureOperator]] = {
    "identity": lambda u, s, cfg: identity_operator(u, settings=cfg),
    "unitary": _from_lift,
    "table": _from_table,
    "transitive": lambda u, s, cfg: transitive_operator(u, settings=cfg),
    "posi": lambda u, s, cfg: trace_operator(u, "posi", settings=cfg),
    "chull": lambda u, s, cfg: trace_operator(u, "chull", settings=cfg),
}


def operator_from_spec(
    universe: Universe, spec: Mapping[str, Any], settings: EngineSettings = DEFAULT_SETTINGS
) -> ClosureOperator:
    """Build the operator a document's ``"closure"`` block describes."""
    kind = spec.get("kind")
    try:
        factory = OPERATOR_FACTORIES[kind]
    except (KeyError, TypeError):
        raise MalformedDocument(
            f"unknown closure kind {kind!r}; expected one of {sorted(OPERATOR_FACTORIES)}"
        ) from None
    return factory(universe, spec, settings)


# ────────────────────────────────────────────────────────────────
# 2.  Laws
# ────────────────────────────────────────────────────────────────
def _law_at(cl: ClosureOperator, law: str, witness: Sequence[int]) -> Optional[str]:
    """Detail string when *law* fails on *witness*, else ``None``."""
    if law == "empty":
        img = cl.image(0)
        return None if img == 0 else "cl(∅) is not empty"
    if law == "extensive":
        (a,) = witness
        return None if cl.image(a) & a == a else "A is not contained in cl(A)"
    if law == "idempotent":
        (a,) = witness
        img = cl.image(a)
        return None if cl.image(img) == img else "cl(cl(A)) differs from cl(A)"
    if law == "monotone":
        a, b = witness
        if a & b != a:
            raise ValueError("monotone witness needs A ⊆ B")
        return None if cl.image(a) & cl.image(b) == cl.image(a) else "cl(A) is not contained in cl(B)"
    raise ValueError(f"unknown law {law!r}")


def _violation(cl: ClosureOperator, law: str, witness: Tuple[int, ...]) -> Optional[Verdict]:
    detail = _law_at(cl, law, witness)
    if detail is None:
        return None
    return Verdict.violated(LawViolation(law, cl.universe, witness, detail))


def _sampled_pairs(size: int, budget: int, seed: int) -> Iterable[Tuple[int, int]]:
    rng = random.Random(seed)
    full = (1 << size) - 1
    for _ in range(budget):
        a = rng.getrandbits(size)
        if a == full:
            continue
        missing = [i for i in range(size) if not a >> i & 1]
        yield a, a | 1 << rng.choice(missing)


def check_laws(cl: ClosureOperator, settings: EngineSettings = DEFAULT_SETTINGS) -> Verdict:
    """cl4, then cl1 & cl3 per subset, then cl2 over covering pairs A ⊂ A∪{t}."""
    universe = cl.universe
    universe.check_size(settings.universe_cap)
    n = universe.size
    verdict = _check_laws(cl, n, settings)
    cl.laws_verdict = verdict
    cl.flags.laws = YES if verdict.is_verified else NO if verdict.is_violated else UNCHECKED
    logger.debug("laws of %s: %s", cl.describe(), verdict.summary())
    return verdict


def _check_laws(cl: ClosureOperator, n: int, settings: EngineSettings) -> Verdict:
    found = _violation(cl, "empty", (0,))
    if found:
        return found
    for a in range(1 << n):
        found = _violation(cl, "extensive", (a,)) or _violation(cl, "idempotent", (a,))
        if found:
            return found
    total = n << (n - 1) if n else 0
    if total <= settings.law_budget:
        for a in range(1 << n):
            for i in range(n):
                if not a >> i & 1:
                    found = _violation(cl, "monotone", (a, a | 1 << i))
                    if found:
                        return found
        return Verdict.verified()
    logger.warning(
        "cl2: %d covering pairs exceed law_budget=%d; sampling", total, settings.law_budget
    )
    for a, b in _sampled_pairs(n, settings.law_budget, settings.seed):
        found = _violation(cl, "monotone", (a, b))
        if found:
            return found
    return Verdict.inconclusive(f"cl2 sampled {settings.law_budget} of {total} covering pairs")


def replay_law(violation: LawViolation, cl: ClosureOperator) -> bool:
    """True iff the cited law still fails on the witness."""
    return _law_at(cl, violation.law, violation.witness) is not None


# ────────────────────────────────────────────────────────────────
# 3.  Structural probes
# ────────────────────────────────────────────────────────────────
def _probe_unitary(cl: ClosureOperator, n: int) -> Tuple[str, Optional[str]]:
    singles = [cl.image(1 << i) for i in range(n)]
    for a in range(1 << n):
        union = 0
        for i in bits(a):
            union |= singles[i]
        if union != cl.image(a):
            return NO, f"not unitary at {cl.universe.ids_of(a)}"
    return YES, None


def _probe_incremental(cl: ClosureOperator, n: int) -> Tuple[str, Optional[str]]:
    # reachable[a][u] = cl({u, a})
    reachable = [[cl.image(1 << u | 1 << a) for u in range(n)] for a in range(n)]
    for s in range(1, 1 << n):
        base = cl.image(s)
        for a in range(n):
            if s >> a & 1:
                continue
            needed = cl.image(s | 1 << a)
            covered = 0
            for u in bits(base):
                covered |= reachable[a][u]
            if needed & ~covered:
                t = (needed & ~covered).bit_length() - 1
                ids = cl.universe.ids_of
                return NO, (
                    f"not incremental: A={ids(s)}, a={cl.universe.things[a]}, "
                    f"t={cl.universe.things[t]}"
                )
    return YES, None


def probe_properties(cl: ClosureOperator, settings: EngineSettings = DEFAULT_SETTINGS) -> PropertyFlags:
    """Decide unitary / finitary / incremental on the operator's finite universe."""
    ensure_lawful(cl)
    cl.universe.check_size(settings.universe_cap)
    n = cl.universe.size
    flags = cl.flags
    flags.notes = []
    flags.unitary, note = _probe_unitary(cl, n)
    if note:
        flags.notes.append(note)
    flags.finitary = YES
    flags.notes.append("finitary: trivially finite universe")
    flags.incremental, note = _probe_incremental(cl, n)
    if note:
        flags.notes.append(note)
    logger.debug("probes of %s: %s", cl.describe(), flags.to_dict())
    return flags


def certify(cl: ClosureOperator, settings: EngineSettings = DEFAULT_SETTINGS) -> ClosureOperator:
    """check_laws (if not yet run) and probe_properties; raises LawsUnverified on failure."""
    if cl.flags.laws == UNCHECKED:
        check_laws(cl, settings)
    probe_properties(cl, settings)
    return cl


__all__ = [
    "YES",
    "NO",
    "UNCHECKED",
    "LAWS",
    "PropertyFlags",
    "ClosureOperator",
    "apply",
    "ensure_lawful",
    "identity_operator",
    "unitary_lift",
    "thick_crust_lift",
    "table_operator",
    "moore_family",
    "moore_operator",
    "random_moore_operator",
    "trans_closure",
    "trans_pair",
    "transitive_operator",
    "trace_operator",
    "OPERATOR_FACTORIES",
    "operator_from_spec",
    "check_laws",
    "replay_law",
    "probe_properties",
    "certify",
]
