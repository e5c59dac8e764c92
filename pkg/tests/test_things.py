"""Unit tests for pydesirability.things (universes, masks, selections, Q-domains).

Run with::

    pytest -q tests/test_things.py
"""
from __future__ import annotations

from fractions import Fraction

import hypothesis
import hypothesis.strategies as strat
import pytest

from pydesirability.config import EngineSettings
from pydesirability.errors import PayloadMismatch, UniverseTooLarge, UnknownThing
from pydesirability.things import (
    Family,
    QDomain,
    ThingSet,
    Universe,
    bits,
    canonical_masks,
    gamble_universe,
    generic_universe,
    hitting_bitmap,
    horse_lottery_universe,
    is_subset_closed,
    minimal_masks,
    nonempty_subfamilies,
    opaque_universe,
    parse_rational,
    pizza_universe,
    preference_universe,
    selection_masks,
    selections,
    submasks,
    up_closure,
)


@pytest.fixture(scope="module")
def menu() -> Universe:
    return opaque_universe(["margherita", "peperoni", "meatballs", "hawai", "cheese"])


# ──────────────────────────────────────────────────────────
# Bit-mask helpers
# ──────────────────────────────────────────────────────────

def test_bits_ascending():
    assert list(bits(0b10110)) == [1, 2, 4]
    assert list(bits(0)) == []


def test_submasks_cover_every_subset_once():
    subs = list(submasks(0b1011))
    assert len(subs) == 8
    assert len(set(subs)) == 8
    assert subs[0] == 0 and subs[-1] == 0b1011
    assert all(s & 0b1011 == s for s in subs)


def test_canonical_order_is_size_then_indices():
    assert canonical_masks([0b110, 0b001, 0b011, 0b100, 0b000]) == [0b000, 0b001, 0b100, 0b011, 0b110]


def test_minimal_and_up_closure():
    assert minimal_masks([0b011, 0b001, 0b110, 0b111]) == [0b001, 0b110]
    assert up_closure([0b01], 0b11) == frozenset({0b01, 0b11})
    assert up_closure([], 0b11) == frozenset()


def test_hitting_bitmap_two_things():
    # sets meeting {t1} over {t1, t2}: {t1} and {t1, t2}
    assert hitting_bitmap(2, 0b01) == (1 << 0b01) | (1 << 0b11)
    assert hitting_bitmap(2, 0) == 0


@hypothesis.given(strat.integers(min_value=0, max_value=(1 << 10) - 1))
def test_submask_count_matches_popcount(mask):
    assert sum(1 for _ in submasks(mask)) == 1 << mask.bit_count()


# ──────────────────────────────────────────────────────────
# Universe & payload validation
# ──────────────────────────────────────────────────────────

@pytest.mark.parametrize(
    "factory, test_id",
    [
        (lambda: Universe(("a", "a")), "duplicate ids"),
        (lambda: Universe(("a",), payload_kind="widget", payloads=(1,)), "unknown kind"),
        (lambda: Universe(("a",), payloads=((1,),)), "opaque with payload"),
        (
            lambda: preference_universe(["o1", "o2"], pairs=[("o1", "o3")]),
            "pair outside option set",
        ),
        (
            lambda: preference_universe(["o1", "o2"], pairs=[("o1", "o2"), ("o1", "o2")]),
            "repeated pair",
        ),
        (lambda: gamble_universe([(1, 0), (1, 0, 0)], ids=["f", "g"]), "unequal vector lengths"),
        (lambda: gamble_universe([(0.5, 1)]), "float coordinate"),
        (
            lambda: horse_lottery_universe(["a", "b"], ["w", "l"], {"h": [[1, 0]]}),
            "grid arity",
        ),
    ],
)
def test_payload_mismatch(factory, test_id):
    with pytest.raises(PayloadMismatch):
        factory()


def test_unknown_thing(menu):
    with pytest.raises(UnknownThing) as excinfo:
        menu.thing_set(["calzone"])
    assert excinfo.value.thing_id == "calzone"
    assert "calzone" in str(excinfo.value)


def test_universe_cap():
    with pytest.raises(UniverseTooLarge):
        opaque_universe([f"t{i}" for i in range(5)], settings=EngineSettings(universe_cap=4))


def test_parse_rational_forms():
    assert parse_rational("1/2") == Fraction(1, 2)
    assert parse_rational(3) == Fraction(3)
    assert parse_rational(" -2 ") == Fraction(-2)
    with pytest.raises(PayloadMismatch):
        parse_rational(True)
    with pytest.raises(PayloadMismatch):
        parse_rational("half")


def test_preference_universe_ids_and_lookup():
    u = preference_universe(["o1", "o2"], reflexive=False)
    assert u.things == ("o1>o2", "o2>o1")
    assert u.index_of_pair(("o2", "o1")) == 1
    assert u.index_of_pair(("o1", "o1")) is None


def test_horse_lottery_coordinates_are_state_major():
    u = horse_lottery_universe(["a", "b"], ["w", "l"], {"h": [[1, 0], ["1/2", "1/2"]]})
    assert u.coordinates == ("a|w", "a|l", "b|w", "b|l")
    assert u.vector(0) == (1, 0, Fraction(1, 2), Fraction(1, 2))


def test_pizza_universe_has_thick_variants():
    u = pizza_universe()
    assert u.size == 8
    assert "hawai-thick" in u.things


# ──────────────────────────────────────────────────────────
# ThingSet / Family
# ──────────────────────────────────────────────────────────

def test_thing_set_is_extensional(menu):
    a = menu.thing_set(["peperoni", "margherita"])
    b = menu.thing_set(["margherita", "peperoni"])
    assert a == b and hash(a) == hash(b)
    assert a.ids() == ["margherita", "peperoni"]
    assert "peperoni" in a and "cheese" not in a and 7 not in a
    assert len(a | menu.thing_set(["cheese"])) == 3
    assert (a - menu.thing_set(["peperoni"])).ids() == ["margherita"]


def test_thing_set_outside_universe(menu):
    with pytest.raises(ValueError):
        ThingSet(menu, 1 << menu.size)


def test_family_lists_canonically(menu):
    fam = menu.family([["cheese", "peperoni"], ["hawai"], ["margherita"]])
    assert fam.as_lists() == [["margherita"], ["hawai"], ["peperoni", "cheese"]]
    assert menu.thing_set(["hawai"]) in fam
    assert Family.of(menu, [menu.thing_set(["hawai"])]) <= fam


# ──────────────────────────────────────────────────────────
# Selections
# ──────────────────────────────────────────────────────────

def test_selections_of_two_member_family(menu):
    # 𝒜 = {{peperoni, meatballs}, {cheese}}: every choice picks cheese
    fam = menu.family([["peperoni", "meatballs"], ["cheese"]])
    got = selections(fam).as_lists()
    assert got == [["peperoni", "cheese"], ["meatballs", "cheese"]]


@pytest.mark.parametrize(
    "members, expected, test_id",
    [
        ([], frozenset({0}), "empty family has the empty selection"),
        ([0b01, 0], frozenset(), "family containing the empty set"),
        ([0b11], frozenset({0b01, 0b10}), "singleton family"),
        ([0b01, 0b01], frozenset({0b01}), "repeated member"),
        ([0b011, 0b110], frozenset({0b010, 0b011, 0b110, 0b101}), "overlapping members"),
    ],
)
def test_selection_masks(members, expected, test_id):
    assert selection_masks(members) == expected, f"selection failed for ID: {test_id}"


@hypothesis.given(strat.lists(strat.integers(min_value=1, max_value=(1 << 5) - 1), max_size=4))
def test_selection_images_meet_every_member(members):
    union = 0
    for a in members:
        union |= a
    for image in selection_masks(members):
        assert image & union == image
        assert image.bit_count() <= len(members)
        assert all(image & a for a in members)


def test_nonempty_subfamilies_smallest_first():
    subs = list(nonempty_subfamilies([1, 2, 4]))
    assert len(subs) == 7
    assert [len(s) for s in subs] == [1, 1, 1, 2, 2, 2, 3]


# ──────────────────────────────────────────────────────────
# Q-domains
# ──────────────────────────────────────────────────────────

@pytest.mark.parametrize(
    "q, mask, expected, test_id",
    [
        (QDomain.full(), 0b1111, True, "full"),
        (QDomain.card_bound(1), 0b0100, True, "singleton under bound"),
        (QDomain.card_bound(1), 0b0101, False, "pair over bound"),
        (QDomain.explicit([0b01, 0b11]), 0b11, True, "explicit member"),
        (QDomain.explicit([0b01, 0b11]), 0b10, False, "explicit non-member"),
    ],
)
def test_q_contains(q, mask, expected, test_id):
    assert q.contains(mask) is expected, f"contains failed for ID: {test_id}"


def test_q_subset_closed():
    assert is_subset_closed(QDomain.card_bound(2))
    assert is_subset_closed(QDomain.explicit([0, 0b01, 0b10, 0b11]))
    assert not is_subset_closed(QDomain.explicit([0, 0b01, 0b11]))


def test_q_describe_and_fullness():
    assert QDomain.card_bound(2).describe() == "card_bound(2)"
    assert QDomain.card_bound(3).is_full_for(3)
    assert not QDomain.card_bound(2).is_full_for(3)
    assert list(QDomain.card_bound(1).masks(2)) == [0, 1, 2]
    with pytest.raises(ValueError):
        QDomain("cofinite")


def test_generic_universe_names():
    assert generic_universe(3).things == ("t1", "t2", "t3")
