"""Unit tests for pydesirability.representation (K_D, 𝒟_K, 𝐃(K), total orders).

Run with::

    pytest -q tests/test_representation.py
"""
from __future__ import annotations

import pytest

from pydesirability.closure_operators import identity_operator, unitary_lift
from pydesirability.coherence_checker import FULL, enumerate_coherent_sds, replay
from pydesirability.config import EngineSettings
from pydesirability.errors import CoherenceUndecided, EmptyRepresenterSet, NotCoherent, WrongUniverse
from pydesirability.natural_extension import sds_natural_extension
from pydesirability.representation import (
    comparison_sets,
    d_family_from,
    fin_of,
    is_connected,
    is_finitary,
    k_fin_from_ds,
    k_from_d,
    k_from_ds,
    largest_representing,
    represent,
    represent_total_orders,
    representable_in,
    strict_total_orders,
    total_order_setting,
)
from pydesirability.things import Assessment, Family, QDomain, generic_universe, preference_universe


@pytest.fixture(scope="module")
def two():
    return generic_universe(2)


@pytest.fixture(scope="module")
def identity(two):
    return identity_operator(two)


@pytest.fixture(scope="module")
def options():
    return preference_universe(["o1", "o2", "o3"])


@pytest.fixture(scope="module")
def total_orders_k(options):
    assessment, cl = total_order_setting(options)
    base = Family(options, frozenset(comparison_sets(options)))
    result = sds_natural_extension(base, assessment, cl, "binary_rules")
    assert result.is_extended
    return result.model


# ──────────────────────────────────────────────────────────
# K_D and K_𝒟
# ──────────────────────────────────────────────────────────

def test_k_from_d(two):
    assert k_from_d(two.thing_set(["t1"])).as_lists() == [["t1"], ["t1", "t2"]]
    assert k_from_d(two.thing_set()).as_lists() == []


def test_k_from_ds(two):
    ds = [two.thing_set(["t1"]), two.thing_set(["t2"])]
    assert k_from_ds(ds).as_lists() == [["t1", "t2"]]
    assert k_fin_from_ds(ds, QDomain.card_bound(1)).as_lists() == []
    with pytest.raises(EmptyRepresenterSet):
        k_from_ds([])


def test_d_family_of_lift(two):
    lift = unitary_lift(two, {"t1": ["t2"]})
    k = two.family([["t1"], ["t2"], ["t1", "t2"]])
    # the only selection is {t1, t2}
    assert [d.ids() for d in d_family_from(k, Assessment.empty(two), lift)] == [["t1", "t2"]]
    forbid = Assessment.of(two, not_ids=["t2"])
    assert d_family_from(two.family([["t1"]]), forbid, lift) == []


# ──────────────────────────────────────────────────────────
# represent
# ──────────────────────────────────────────────────────────

@pytest.mark.parametrize(
    "family, d_k, largest, test_id",
    [
        ([["t1"], ["t2"], ["t1", "t2"]], [["t1", "t2"]], [["t1", "t2"]], "every nonempty set"),
        ([["t1"], ["t1", "t2"]], [["t1"], ["t1", "t2"]], [["t1"], ["t1", "t2"]], "up-closure of t1"),
        ([["t1", "t2"]], [["t1"], ["t2"]], [["t1"], ["t2"], ["t1", "t2"]], "only the full set"),
        ([], [[]], [[], ["t1"], ["t2"], ["t1", "t2"]], "empty family"),
    ],
)
def test_represent_identity(two, identity, family, d_k, largest, test_id):
    rep = represent(two.family(family), Assessment.empty(two), identity)
    assert rep.verified, f"representation failed for ID: {test_id}: {rep.notes}"
    assert [d.ids() for d in rep.d_k] == d_k
    assert [d.ids() for d in rep.largest] == largest


def test_every_coherent_family_is_represented(two):
    lift = unitary_lift(two, {"t1": ["t2"]})
    empty = Assessment.empty(two)
    for k in enumerate_coherent_sds(empty, lift, FULL):
        rep = represent(k, empty, lift)
        assert rep.verified, f"not represented: {k.as_lists()}"
        assert set(rep.d_k) <= set(rep.largest)


def test_represent_rejects_incoherent(two, identity):
    k = two.family([["t1"]])
    with pytest.raises(NotCoherent) as excinfo:
        represent(k, Assessment.empty(two), identity)
    verdict = excinfo.value.verdict
    assert verdict.axiom == "K2"
    assert replay(verdict.certificate, k=k, cl=identity)


def test_represent_stops_on_an_undecided_check(two, identity):
    k = two.family([["t1"], ["t1", "t2"]])
    settings = EngineSettings(k5_budget=1, use_shortcuts=False)
    with pytest.raises(CoherenceUndecided) as excinfo:
        represent(k, Assessment.empty(two), identity, settings)
    assert excinfo.value.verdict.is_inconclusive
    assert not excinfo.value.verdict.is_violated


def test_largest_representing_respects_assessment(two, identity):
    k = two.family([["t1"], ["t1", "t2"]])
    got = largest_representing(k, Assessment.of(two, not_ids=["t2"]), identity)
    assert [d.ids() for d in got] == [["t1"]]


# ──────────────────────────────────────────────────────────
# fin(K) and Q-representability
# ──────────────────────────────────────────────────────────

def test_fin_and_finitary(two):
    lonely = two.family([["t1"]])
    assert fin_of(lonely).as_lists() == [["t1"], ["t1", "t2"]]
    assert not is_finitary(lonely)
    assert is_finitary(fin_of(lonely))
    top = two.family([["t1", "t2"]])
    assert fin_of(top, QDomain.card_bound(1)).as_lists() == []
    assert not is_finitary(top, QDomain.card_bound(1))


@pytest.mark.parametrize(
    "family, q, expected, test_id",
    [
        ([["t1"], ["t1", "t2"]], QDomain.full(), True, "up-closed"),
        ([["t1"]], QDomain.card_bound(1), True, "singleton in small Q"),
        ([["t1"]], QDomain.full(), False, "singleton in full Q"),
    ],
)
def test_representable_in(two, identity, family, q, expected, test_id):
    ok, ds = representable_in(two.family(family), Assessment.empty(two), identity, q)
    assert ok is expected, f"representable_in failed for ID: {test_id}"
    assert [d.ids() for d in ds] == [["t1"], ["t1", "t2"]]


# ──────────────────────────────────────────────────────────
# Strict total orders
# ──────────────────────────────────────────────────────────

def test_strict_total_orders(options):
    orders = strict_total_orders(options)
    assert len(orders) == 6
    assert all(len(d) == 3 and is_connected(d) for d in orders)
    assert not is_connected(options.thing_set(["o1>o2"]))


def test_total_order_setting(options):
    assessment, cl = total_order_setting(options)
    assert assessment.a_not.ids() == ["o1>o1", "o2>o2", "o3>o3"]
    assert assessment.des_mask == 0
    assert cl.kind == "transitive"
    assert len(comparison_sets(options)) == 3


@pytest.mark.parametrize(
    "factory, test_id",
    [
        (lambda: generic_universe(3), "opaque things"),
        (lambda: preference_universe(["o1", "o2"], reflexive=False), "reflexive pairs missing"),
    ],
)
def test_total_order_setting_needs_every_pair(factory, test_id):
    with pytest.raises(WrongUniverse):
        total_order_setting(factory())


def test_represent_total_orders(options, total_orders_k):
    verdict, orders = represent_total_orders(total_orders_k)
    assert verdict.is_verified
    assert sorted(d.mask for d in orders) == sorted(d.mask for d in strict_total_orders(options))


def test_dropping_a_comparison_breaks_it(options, total_orders_k):
    dropped = comparison_sets(options)[0]
    k = Family(options, total_orders_k.masks - {dropped})
    assessment, cl = total_order_setting(options)
    verdict, _ = represent_total_orders(k, assessment, cl)
    assert verdict.is_violated
    assert replay(verdict.certificate, k=k, assessment=assessment, cl=cl)


def test_represent_total_orders_needs_transitive_closure(options, total_orders_k):
    assessment, _ = total_order_setting(options)
    with pytest.raises(WrongUniverse):
        represent_total_orders(total_orders_k, assessment, identity_operator(options))
