"""Unit tests for pydesirability.coherence_checker (SDT / SDS axioms, K5 variants).

Run with::

    pytest -q tests/test_coherence_checker.py
"""
from __future__ import annotations

import hypothesis
import hypothesis.strategies as strat
import pytest

from pydesirability.closure_operators import (
    identity_operator,
    random_moore_operator,
    transitive_operator,
    unitary_lift,
)
from pydesirability.coherence_checker import (
    FULL,
    Variant,
    check_axiom,
    check_sds,
    check_sdt,
    check_strengthened_k5,
    coherence_possible,
    enumerate_coherent_sds,
    enumerate_coherent_sdts,
    realizable_images,
    replay,
)
from pydesirability.config import EngineSettings
from pydesirability.things import (
    Assessment,
    QDomain,
    generic_universe,
    preference_universe,
    up_closure,
)

NO_SHORTCUTS = EngineSettings(use_shortcuts=False)


@pytest.fixture(scope="module")
def orders():
    return preference_universe(["o1", "o2", "o3"], reflexive=False)


@pytest.fixture(scope="module")
def trans(orders):
    return transitive_operator(orders)


@pytest.fixture(scope="module")
def lift():
    u = generic_universe(2)
    return unitary_lift(u, {"t1": ["t2"]})


def _up(universe, *sets):
    return up_closure([universe.mask_of(s) for s in sets], universe.full_mask)


# ──────────────────────────────────────────────────────────
# Realizable images
# ──────────────────────────────────────────────────────────

def test_realizable_images_two_closures():
    images = [c for c, _ in realizable_images([0b011, 0b110])]
    assert images == [0b010, 0b011, 0b101, 0b110]


def test_realizable_images_choice_lands_in_closures():
    closures = [0b011, 0b110]
    for produced, choice in realizable_images(closures):
        assert all(c >> t & 1 for c, t in zip(closures, choice))
        image = 0
        for t in choice:
            image |= 1 << t
        assert image == produced


def test_realizable_images_degenerate():
    assert list(realizable_images([])) == [(0, ())]
    assert list(realizable_images([0b01, 0])) == []


# ──────────────────────────────────────────────────────────
# Sets of desirable things
# ──────────────────────────────────────────────────────────

@pytest.mark.parametrize(
    "d_ids, not_ids, des_ids, axiom, thing, test_id",
    [
        (["o1>o2", "o2>o3"], [], [], "D3", "o1>o3", "chain misses its shortcut"),
        (["o1>o2"], ["o1>o2"], [], "D1", "o1>o2", "forbidden pair"),
        (["o1>o2"], [], ["o3>o1"], "D2", "o3>o1", "missing desirable pair"),
        (["o1>o2", "o1>o3", "o2>o3"], [], [], None, None, "total order"),
    ],
)
def test_check_sdt(orders, trans, d_ids, not_ids, des_ids, axiom, thing, test_id):
    assessment = Assessment.of(orders, not_ids, des_ids)
    d = orders.thing_set(d_ids)
    verdict = check_sdt(d, assessment, trans)
    if axiom is None:
        assert verdict.is_verified, f"expected Verified for ID: {test_id}"
        return
    assert verdict.axiom == axiom, f"wrong axiom for ID: {test_id}"
    assert orders.things[verdict.certificate.thing] == thing
    assert replay(verdict.certificate, d=d, assessment=assessment, cl=trans)


def test_enumerate_coherent_sdts(lift):
    empty = Assessment.empty(lift.universe)
    # closed sets of t1 -> t2: ∅, {t2}, {t1, t2}
    assert [d.ids() for d in enumerate_coherent_sdts(empty, lift)] == [[], ["t2"], ["t1", "t2"]]
    forbid = Assessment.of(lift.universe, not_ids=["t2"])
    assert [d.ids() for d in enumerate_coherent_sdts(forbid, lift)] == [[]]


def test_coherence_possible(lift):
    u = lift.universe
    assert coherence_possible(Assessment.of(u, des_ids=["t1"]), lift)
    assert not coherence_possible(Assessment.of(u, not_ids=["t2"], des_ids=["t1"]), lift)


# ──────────────────────────────────────────────────────────
# K1 - K4
# ──────────────────────────────────────────────────────────

@pytest.mark.parametrize(
    "family, not_ids, des_ids, axiom, test_id",
    [
        ([[]], [], [], "K1", "empty set is desirable"),
        ([["t2"], ["t1", "t2"]], [], ["t1"], "K4", "desirable thing missing"),
        ([["t1", "t2"]], ["t1"], [], "K3", "forbidden part not removed"),
        ([["t1"]], [], [], "K2", "superset missing"),
    ],
)
def test_basic_axioms(family, not_ids, des_ids, axiom, test_id):
    u = generic_universe(2)
    cl = identity_operator(u)
    k = u.family(family)
    assessment = Assessment.of(u, not_ids, des_ids)
    verdict = check_sds(k, assessment, cl)
    assert verdict.is_violated and verdict.axiom == axiom, f"wrong verdict for ID: {test_id}"
    assert replay(verdict.certificate, k=k, assessment=assessment, cl=cl)


def test_k2_relative_to_q():
    u = generic_universe(2)
    cl = identity_operator(u)
    k = u.family([["t1"]])
    assert check_sds(k, None, cl).axiom == "K2"
    assert check_sds(k, None, cl, Variant("full", QDomain.card_bound(1))).is_verified


def test_unknown_axiom_and_strength(lift):
    with pytest.raises(ValueError):
        check_axiom([], None, lift, "K9")
    with pytest.raises(ValueError):
        Variant("three")


# ──────────────────────────────────────────────────────────
# K5 and its variants
# ──────────────────────────────────────────────────────────

@pytest.mark.parametrize("settings", [EngineSettings(), NO_SHORTCUTS], ids=["shortcut", "general"])
def test_lift_breaks_k5(lift, settings):
    u = lift.universe
    k = _up(u, ["t1"])
    verdict = check_sds(k, None, lift, FULL, settings)
    assert verdict.axiom == "K5"
    assert verdict.certificate.produced == u.mask_of(["t2"])
    assert replay(verdict.certificate, k=k, cl=lift)


@pytest.mark.parametrize(
    "strength, violated",
    [("full", True), ("finite", True), ("two", True), ("one", False)],
)
@pytest.mark.parametrize("settings", [EngineSettings(), NO_SHORTCUTS], ids=["shortcut", "general"])
def test_strengths_on_two_chained_pairs(strength, violated, settings):
    # either o1>o2 or o2>o3 is desirable; o1>o3 alone is not, yet it is forced
    orders = preference_universe(["o1", "o2", "o3"], pairs=[("o1", "o2"), ("o2", "o3"), ("o1", "o3")])
    trans = transitive_operator(orders)
    k = _up(orders, ["o1>o2"], ["o2>o3"])
    verdict = check_sds(k, None, trans, Variant(strength), settings)
    assert verdict.is_violated is violated
    if violated:
        assert orders.ids_of(verdict.certificate.produced) == ["o1>o3"]
        assert replay(verdict.certificate, k=k, cl=trans)


def test_shortcut_note(lift):
    verdict = check_axiom(_up(lift.universe, ["t2"]), None, lift, "K5")
    assert verdict.is_verified and verdict.note == "monotone shortcut"


def test_k5_budget_makes_general_path_inconclusive():
    u = generic_universe(4)
    cl = identity_operator(u)
    k = _up(u, ["t1"])
    settings = EngineSettings(k5_budget=10, use_shortcuts=False)
    verdict = check_axiom(k, None, cl, "K5", settings=settings)
    assert verdict.is_inconclusive
    assert "sampled 10" in verdict.budget_note


@pytest.mark.parametrize(
    "family, des_ids, verified, test_id",
    [
        ([["t1"]], ["t1"], True, "desirable thing already desirable"),
        ([["t2"]], ["t1"], False, "empty premise forces {t1}"),
        ([], [], True, "empty family without desirable things"),
    ],
)
def test_strengthened_k5(family, des_ids, verified, test_id):
    u = generic_universe(2)
    cl = identity_operator(u)
    k = _up(u, *family)
    assessment = Assessment.of(u, des_ids=des_ids)
    verdict = check_strengthened_k5(k, assessment, cl)
    assert verdict.is_verified is verified, f"wrong verdict for ID: {test_id}"
    if not verified:
        assert verdict.axiom == "K5*"
        assert replay(verdict.certificate, k=k, assessment=assessment, cl=cl)


# ──────────────────────────────────────────────────────────
# Enumeration
# ──────────────────────────────────────────────────────────

@pytest.mark.parametrize("size, expected", [(1, 2), (2, 5)])
@pytest.mark.parametrize("settings", [EngineSettings(), NO_SHORTCUTS], ids=["shortcut", "general"])
def test_identity_counts(size, expected, settings):
    u = generic_universe(size)
    found = enumerate_coherent_sds(Assessment.empty(u), identity_operator(u), FULL, settings)
    assert len(found) == expected


def test_enumeration_is_ordered_and_threaded():
    u = generic_universe(2)
    cl = identity_operator(u)
    serial = enumerate_coherent_sds(Assessment.empty(u), cl)
    threaded = enumerate_coherent_sds(Assessment.empty(u), cl, settings=EngineSettings(threads=3))
    assert serial == threaded
    assert [len(k) for k in serial] == [0, 1, 2, 2, 3]


def test_lift_enumeration_excludes_broken_family(lift):
    u = lift.universe
    found = {k.masks for k in enumerate_coherent_sds(Assessment.empty(u), lift)}
    assert _up(u, ["t1"]) not in found
    assert _up(u, ["t2"]) in found


# ──────────────────────────────────────────────────────────
# Shortcut and general paths agree
# ──────────────────────────────────────────────────────────

@hypothesis.settings(max_examples=40, deadline=None)
@hypothesis.given(
    strat.lists(strat.integers(min_value=1, max_value=7), max_size=3),
    strat.integers(min_value=0, max_value=50),
    strat.sampled_from(["full", "two", "one"]),
)
def test_shortcut_matches_general(generators, seed, strength):
    u = generic_universe(3)
    cl = random_moore_operator(u, seed)
    k = up_closure(generators, u.full_mask)
    fast = check_sds(k, None, cl, Variant(strength))
    slow = check_sds(k, None, cl, Variant(strength), NO_SHORTCUTS)
    assert fast.status == slow.status
    for verdict in (fast, slow):
        if verdict.is_violated:
            assert replay(verdict.certificate, k=k, cl=cl)
