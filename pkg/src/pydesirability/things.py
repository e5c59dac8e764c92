"""
things.py – finite universes, thing sets, families and Q-domains
================================================================

Things are addressed by their index in the universe's ordered catalog, a set
of things is an ``int`` bit-mask, and a family of sets is a frozenset of such
masks.  ``ThingSet`` and ``Family`` wrap the raw masks together with their
universe for the public API; the algorithms in the other modules work on the
masks directly.

    Universe      ordered catalog + optional payloads (pairs / rational vectors)
    ThingSet      canonical subset of a universe
    Family        canonical set of ThingSets
    Assessment    (A_not, A_des)
    QDomain       full | card_bound(c) | explicit(family)
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import (
    Any,
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Optional,
    Sequence,
    Tuple,
    Union,
)

from .config import DEFAULT_SETTINGS, EngineSettings
from .errors import PayloadMismatch, UniverseTooLarge, UnknownThing

PAYLOAD_KINDS: Tuple[str, ...] = ("opaque", "preference_pair", "rational_vector")

Pair = Tuple[str, str]
Vector = Tuple[Fraction, ...]

# ────────────────────────────────────────────────────────────────
# 0.  Bit-mask helpers
# ────────────────────────────────────────────────────────────────
def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of *mask*, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def lowest(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def submasks(mask: int) -> Iterator[int]:
    """Every submask of *mask* in increasing numeric order, ∅ first."""
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        sub = (sub - mask) & mask


def supermasks(mask: int, full: int) -> Iterator[int]:
    """Every superset of *mask* inside *full*, *mask* itself first."""
    for extra in submasks(full & ~mask):
        yield mask | extra


def canonical_key(mask: int) -> Tuple[int, Tuple[int, ...]]:
    """Sort key: smaller sets first, then lexicographic by thing index."""
    return (mask.bit_count(), tuple(bits(mask)))


def canonical_masks(masks: Iterable[int]) -> List[int]:
    return sorted(set(masks), key=canonical_key)


def minimal_masks(masks: Iterable[int]) -> List[int]:
    """Members with no proper subset in the collection."""
    pool = canonical_masks(masks)
    out: List[int] = []
    for m in pool:  # canonical order lists subsets before supersets
        if not any(k & m == k for k in out):
            out.append(m)
    return out


def up_closure(masks: Iterable[int], full: int) -> FrozenSet[int]:
    out = set()
    for m in minimal_masks(masks):
        out.update(supermasks(m, full))
    return frozenset(out)


@functools.lru_cache(maxsize=None)
def _submask_bitmap(mask: int) -> int:
    bitmap = 0
    for sub in submasks(mask):
        bitmap |= 1 << sub
    return bitmap


def all_bitmap(size: int) -> int:
    """Bitmap over 𝒫(𝒯): bit ``m`` stands for the set with mask ``m``."""
    return (1 << (1 << size)) - 1


@functools.lru_cache(maxsize=None)
def hitting_bitmap(size: int, mask: int) -> int:
    """Bitmap of every set over a universe of *size* things that meets *mask*."""
    full = (1 << size) - 1
    return all_bitmap(size) ^ _submask_bitmap(full & ~mask)


def family_bitmap(masks: Iterable[int]) -> int:
    bitmap = 0
    for m in masks:
        bitmap |= 1 << m
    return bitmap


def parse_rational(value: Any) -> Fraction:
    """``"p/q"``, integer strings and ints only: floats are rejected."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise PayloadMismatch(f"rationals must be exact, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise PayloadMismatch(f"not a rational: {value!r}") from exc
    raise PayloadMismatch(f"not a rational: {value!r}")


def format_rational(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


# ────────────────────────────────────────────────────────────────
# 1.  Universe
# ────────────────────────────────────────────────────────────────
@dataclass(frozen=True)
class Universe:
    """Finite ordered catalog of things.

    ``payloads`` is empty for opaque things, a tuple of ``(o1, o2)`` pairs over
    ``options`` for preference pairs, and a tuple of equal-length ``Fraction``
    tuples aligned with ``coordinates`` for rational vectors.  A horse-lottery
    catalog additionally declares ``grid = (states, prizes)`` and lays out each
    vector state-major.
    """

    things: Tuple[str, ...]
    payload_kind: str = "opaque"
    payloads: Tuple[Any, ...] = ()
    options: Tuple[str, ...] = ()
    coordinates: Tuple[str, ...] = ()
    grid: Optional[Tuple[Tuple[str, ...], Tuple[str, ...]]] = None
    _index: Dict[str, int] = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "things", tuple(self.things))
        object.__setattr__(self, "payloads", tuple(self.payloads))
        object.__setattr__(self, "options", tuple(self.options))
        object.__setattr__(self, "coordinates", tuple(self.coordinates))
        index = {t: i for i, t in enumerate(self.things)}
        if len(index) != len(self.things):
            dupes = sorted({t for t in self.things if self.things.count(t) > 1})
            raise PayloadMismatch(f"duplicate thing ids: {dupes}")
        object.__setattr__(self, "_index", index)
        if self.payload_kind not in PAYLOAD_KINDS:
            raise PayloadMismatch(f"unknown payload_kind {self.payload_kind!r}")
        if self.payload_kind == "opaque":
            if self.payloads:
                raise PayloadMismatch("opaque things carry no payload")
            return
        if len(self.payloads) != len(self.things):
            raise PayloadMismatch(
                f"{len(self.things)} things but {len(self.payloads)} payloads"
            )
        if self.payload_kind == "preference_pair":
            self._check_pairs()
        else:
            self._check_vectors()

    def _check_pairs(self) -> None:
        if len(set(self.options)) != len(self.options):
            raise PayloadMismatch("duplicate options")
        declared = set(self.options)
        pairs = []
        for thing, pair in zip(self.things, self.payloads):
            if len(pair) != 2:
                raise PayloadMismatch(f"{thing}: a preference pair has two options")
            o1, o2 = pair
            if o1 not in declared or o2 not in declared:
                raise PayloadMismatch(f"{thing}: pair {pair} leaves the option set")
            pairs.append((o1, o2))
        if len(set(pairs)) != len(pairs):
            raise PayloadMismatch("two things carry the same preference pair")
        object.__setattr__(self, "payloads", tuple(pairs))

    def _check_vectors(self) -> None:
        width = len(self.coordinates)
        if self.grid is not None:
            states, prizes = (tuple(self.grid[0]), tuple(self.grid[1]))
            object.__setattr__(self, "grid", (states, prizes))
            if width and width != len(states) * len(prizes):
                raise PayloadMismatch("grid does not match the coordinate list")
            if not width:
                width = len(states) * len(prizes)
                labels = tuple(f"{x}|{r}" for x in states for r in prizes)
                object.__setattr__(self, "coordinates", labels)
        vectors = []
        for thing, payload in zip(self.things, self.payloads):
            vec = tuple(parse_rational(v) for v in payload)
            if width and len(vec) != width:
                raise PayloadMismatch(f"{thing}: expected {width} coordinates, got {len(vec)}")
            width = width or len(vec)
            vectors.append(vec)
        if not self.coordinates:
            object.__setattr__(self, "coordinates", tuple(f"x{i + 1}" for i in range(width)))
        object.__setattr__(self, "payloads", tuple(vectors))

    # ── sizes & lookup ────────────────────────────────────────────
    @property
    def size(self) -> int:
        return len(self.things)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.things)) - 1

    def check_size(self, cap: int, what: str = "universe") -> None:
        if self.size > cap:
            raise UniverseTooLarge(self.size, cap, what)

    def index(self, thing_id: str) -> int:
        try:
            return self._index[thing_id]
        except KeyError:
            raise UnknownThing(thing_id) from None

    def mask_of(self, thing_ids: Iterable[str]) -> int:
        mask = 0
        for t in thing_ids:
            mask |= 1 << self.index(t)
        return mask

    def ids_of(self, mask: int) -> List[str]:
        return [self.things[i] for i in bits(mask)]

    # ── payload views ─────────────────────────────────────────────
    def pair(self, i: int) -> Pair:
        return self.payloads[i]

    def vector(self, i: int) -> Vector:
        return self.payloads[i]

    def index_of_pair(self, pair: Pair) -> Optional[int]:
        try:
            return self.payloads.index(tuple(pair))
        except ValueError:
            return None

    # ── constructors for public wrappers ─────────────────────────
    def thing_set(self, thing_ids: Iterable[str] = ()) -> "ThingSet":
        return ThingSet(self, self.mask_of(thing_ids))

    def family(self, sets: Iterable[Iterable[str]] = ()) -> "Family":
        return Family(self, frozenset(self.mask_of(s) for s in sets))

    def all_sets(self) -> range:
        return range(1 << self.size)


# ────────────────────────────────────────────────────────────────
# 2.  ThingSet / Family
# ────────────────────────────────────────────────────────────────
@dataclass(frozen=True, order=False)
class ThingSet:
    """Subset of a universe; equality and hashing are extensional."""

    universe: Universe = field(compare=False, repr=False)
    mask: int = 0

    def __post_init__(self) -> None:
        if self.mask < 0 or self.mask > self.universe.full_mask:
            raise ValueError(f"mask {self.mask:#x} lies outside the universe")

    def __iter__(self) -> Iterator[str]:
        return iter(self.universe.ids_of(self.mask))

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, thing_id: object) -> bool:
        if not isinstance(thing_id, str) or thing_id not in self.universe._index:
            return False
        return bool(self.mask >> self.universe._index[thing_id] & 1)

    def __or__(self, other: "ThingSet") -> "ThingSet":
        return ThingSet(self.universe, self.mask | other.mask)

    def __and__(self, other: "ThingSet") -> "ThingSet":
        return ThingSet(self.universe, self.mask & other.mask)

    def __sub__(self, other: "ThingSet") -> "ThingSet":
        return ThingSet(self.universe, self.mask & ~other.mask)

    def issubset(self, other: "ThingSet") -> bool:
        return self.mask & other.mask == self.mask

    def ids(self) -> List[str]:
        return self.universe.ids_of(self.mask)

    def __repr__(self) -> str:
        return "{" + ", ".join(self.ids()) + "}"


@dataclass(frozen=True)
class Family:
    """Canonical set of ThingSets over one universe."""

    universe: Universe = field(compare=False, repr=False)
    masks: FrozenSet[int] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "masks", frozenset(self.masks))

    @classmethod
    def of(cls, universe: Universe, sets: Iterable[Union["ThingSet", int]]) -> "Family":
        return cls(universe, frozenset(s.mask if isinstance(s, ThingSet) else s for s in sets))

    def sorted_masks(self) -> List[int]:
        return canonical_masks(self.masks)

    def __iter__(self) -> Iterator[ThingSet]:
        return (ThingSet(self.universe, m) for m in self.sorted_masks())

    def __len__(self) -> int:
        return len(self.masks)

    def __contains__(self, item: object) -> bool:
        if isinstance(item, ThingSet):
            return item.mask in self.masks
        return item in self.masks

    def __le__(self, other: "Family") -> bool:
        return self.masks <= other.masks

    def __and__(self, other: "Family") -> "Family":
        return Family(self.universe, self.masks & other.masks)

    def __or__(self, other: "Family") -> "Family":
        return Family(self.universe, self.masks | other.masks)

    def as_lists(self) -> List[List[str]]:
        return [self.universe.ids_of(m) for m in self.sorted_masks()]

    def __repr__(self) -> str:
        return "{" + ", ".join(repr(s) for s in self) + "}"


@dataclass(frozen=True)
class Assessment:
    """Things that must not / must be desirable (rules R_not and R_des)."""

    a_not: ThingSet
    a_des: ThingSet

    @classmethod
    def empty(cls, universe: Universe) -> "Assessment":
        return cls(ThingSet(universe, 0), ThingSet(universe, 0))

    @classmethod
    def of(cls, universe: Universe, not_ids: Iterable[str] = (), des_ids: Iterable[str] = ()) -> "Assessment":
        return cls(universe.thing_set(not_ids), universe.thing_set(des_ids))

    @property
    def not_mask(self) -> int:
        return self.a_not.mask

    @property
    def des_mask(self) -> int:
        return self.a_des.mask


# ────────────────────────────────────────────────────────────────
# 3.  Q-domains
# ────────────────────────────────────────────────────────────────
@dataclass(frozen=True)
class QDomain:
    kind: str = "full"
    bound: int = 0
    members: FrozenSet[int] = frozenset()

    def __post_init__(self) -> None:
        if self.kind not in ("full", "card_bound", "explicit"):
            raise ValueError(f"unknown Q kind {self.kind!r}")
        if self.kind == "card_bound" and self.bound < 0:
            raise ValueError("card_bound needs a nonnegative bound")

    @classmethod
    def full(cls) -> "QDomain":
        return cls("full")

    @classmethod
    def card_bound(cls, c: int) -> "QDomain":
        return cls("card_bound", bound=c)

    @classmethod
    def explicit(cls, family: Union[Family, Iterable[int]]) -> "QDomain":
        masks = family.masks if isinstance(family, Family) else frozenset(family)
        return cls("explicit", members=frozenset(masks))

    def contains(self, mask: int) -> bool:
        if self.kind == "full":
            return True
        if self.kind == "card_bound":
            return mask.bit_count() <= self.bound
        return mask in self.members

    def is_full_for(self, size: int) -> bool:
        if self.kind == "full":
            return True
        if self.kind == "card_bound":
            return self.bound >= size
        return len(self.members) == 1 << size

    def masks(self, size: int) -> Iterator[int]:
        if self.kind == "explicit":
            yield from canonical_masks(self.members)
            return
        for m in range(1 << size):
            if self.contains(m):
                yield m

    def describe(self) -> str:
        if self.kind == "card_bound":
            return f"card_bound({self.bound})"
        if self.kind == "explicit":
            return f"explicit({len(self.members)} sets)"
        return "full"


def is_subset_closed(q: QDomain) -> bool:
    """Closed under taking subsets; full and card_bound answer without enumeration."""
    if q.kind != "explicit":
        return True
    members = q.members
    for m in members:
        for i in bits(m):
            if m & ~(1 << i) not in members:
                return False
    return True


# ────────────────────────────────────────────────────────────────
# 4.  Selections
# ────────────────────────────────────────────────────────────────
def selection_masks(members: Iterable[int]) -> FrozenSet[int]:
    """Images {t_A : A ∈ 𝒜} of every choice map, as masks.

    Folds over the members keeping the set of partial images, so distinct
    choice maps with the same image collapse as soon as they meet.
    """
    images = {0}
    for a in members:
        if a == 0:
            return frozenset()
        choices = [1 << i for i in bits(a)]
        images = {img | c for img in images for c in choices}
    return frozenset(images)


def selections(family: Family) -> Family:
    """𝒮_𝒜 for a family 𝒜; {∅} for the empty family, ∅ when ∅ ∈ 𝒜."""
    return Family(family.universe, selection_masks(family.sorted_masks()))


def nonempty_subfamilies(members: Sequence[int]) -> Iterator[Tuple[int, ...]]:
    """All nonempty subfamilies, smallest first."""
    for r in range(1, len(members) + 1):
        yield from itertools.combinations(members, r)


# ────────────────────────────────────────────────────────────────
# 5.  Catalog builders
# ────────────────────────────────────────────────────────────────
def opaque_universe(things: Iterable[str], settings: EngineSettings = DEFAULT_SETTINGS) -> Universe:
    universe = Universe(tuple(things))
    universe.check_size(settings.universe_cap)
    return universe


def generic_universe(size: int) -> Universe:
    return Universe(tuple(f"t{i + 1}" for i in range(size)))


def pizza_universe() -> Universe:
    """A small menu: every base pizza plus its thick-crust variant."""
    bases = ("margherita", "peperoni", "meatballs", "hawai")
    things = []
    for b in bases:
        things.extend((b, f"{b}-thick"))
    return Universe(tuple(things))


def preference_universe(
    options: Sequence[str],
    *,
    reflexive: bool = True,
    pairs: Optional[Sequence[Pair]] = None,
    settings: EngineSettings = DEFAULT_SETTINGS,
) -> Universe:
    """Ordered pairs over *options*; ids look like ``"o1>o2"``."""
    if pairs is None:
        pairs = [(a, b) for a in options for b in options if reflexive or a != b]
    universe = Universe(
        tuple(f"{a}>{b}" for a, b in pairs),
        payload_kind="preference_pair",
        payloads=tuple(tuple(p) for p in pairs),
        options=tuple(options),
    )
    universe.check_size(settings.universe_cap)
    return universe


def gamble_universe(
    catalog: Sequence[Sequence[Any]],
    states: Sequence[str] = ("a", "b"),
    ids: Optional[Sequence[str]] = None,
    settings: EngineSettings = DEFAULT_SETTINGS,
) -> Universe:
    vectors = [tuple(parse_rational(v) for v in g) for g in catalog]
    if ids is None:
        ids = ["(" + ",".join(format_rational(v) for v in g) + ")" for g in vectors]
    universe = Universe(
        tuple(ids), payload_kind="rational_vector", payloads=tuple(vectors), coordinates=tuple(states)
    )
    universe.check_size(settings.universe_cap)
    return universe


def lottery_universe(
    prizes: Sequence[str],
    lotteries: Dict[str, Sequence[Any]],
    settings: EngineSettings = DEFAULT_SETTINGS,
) -> Universe:
    """Probability mass functions over *prizes* (a one-state horse lottery)."""
    universe = Universe(
        tuple(lotteries),
        payload_kind="rational_vector",
        payloads=tuple(tuple(v) for v in lotteries.values()),
        grid=(("*",), tuple(prizes)),
    )
    universe.check_size(settings.universe_cap)
    return universe


def horse_lottery_universe(
    states: Sequence[str],
    prizes: Sequence[str],
    lotteries: Dict[str, Sequence[Sequence[Any]]],
    settings: EngineSettings = DEFAULT_SETTINGS,
) -> Universe:
    """Horse lotteries h(x, r); each value is a list of per-state rows."""
    flat = {k: tuple(v for row in rows for v in row) for k, rows in lotteries.items()}
    universe = Universe(
        tuple(flat),
        payload_kind="rational_vector",
        payloads=tuple(flat.values()),
        grid=(tuple(states), tuple(prizes)),
    )
    universe.check_size(settings.universe_cap)
    return universe


__all__ = [
    "PAYLOAD_KINDS",
    "bits",
    "lowest",
    "submasks",
    "supermasks",
    "canonical_key",
    "canonical_masks",
    "minimal_masks",
    "up_closure",
    "all_bitmap",
    "hitting_bitmap",
    "family_bitmap",
    "parse_rational",
    "format_rational",
    "Universe",
    "ThingSet",
    "Family",
    "Assessment",
    "QDomain",
    "is_subset_closed",
    "selection_masks",
    "selections",
    "nonempty_subfamilies",
    "opaque_universe",
    "generic_universe",
    "pizza_universe",
    "preference_universe",
    "gamble_universe",
    "lottery_universe",
    "horse_lottery_universe",
]
