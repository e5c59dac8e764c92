"""Unit tests for pydesirability.natural_extension (least coherent extensions).

Run with::

    pytest -q tests/test_natural_extension.py
"""
from __future__ import annotations

import hypothesis
import hypothesis.strategies as strat
import pytest

from pydesirability.closure_operators import identity_operator, transitive_operator, unitary_lift
from pydesirability.coherence_checker import FULL, Variant, enumerate_coherent_sds, enumerate_coherent_sdts, replay
from pydesirability.config import EngineSettings
from pydesirability.natural_extension import (
    EXTENDED,
    INCOHERENT,
    INCONCLUSIVE,
    cross_check_modes,
    intersection_oracle_sds,
    intersection_oracle_sdt,
    sdt_natural_extension,
    sds_natural_extension,
)
from pydesirability.things import Assessment, Family, ThingSet, generic_universe, preference_universe

WIDE = EngineSettings(sdt_enumeration_cap=6)


@pytest.fixture(scope="module")
def orders():
    return preference_universe(["o1", "o2", "o3"], reflexive=False)


@pytest.fixture(scope="module")
def trans(orders):
    return transitive_operator(orders)


@pytest.fixture(scope="module")
def two():
    return generic_universe(2)


@pytest.fixture(scope="module")
def operators(two):
    return {
        "identity": identity_operator(two),
        "lift": unitary_lift(two, {"t1": ["t2"]}),
    }


# ──────────────────────────────────────────────────────────
# SDT
# ──────────────────────────────────────────────────────────

def test_sdt_extension_closes_the_chain(orders, trans):
    base = orders.thing_set(["o1>o2", "o2>o3"])
    result = sdt_natural_extension(base, Assessment.empty(orders), trans)
    assert result.outcome == EXTENDED
    assert result.model.ids() == ["o1>o2", "o1>o3", "o2>o3"]
    coherent = enumerate_coherent_sdts(Assessment.empty(orders), trans, WIDE)
    assert intersection_oracle_sdt(base, coherent) == result.model


def test_sdt_extension_adds_desirable_things(orders, trans):
    assessment = Assessment.of(orders, des_ids=["o3>o1"])
    result = sdt_natural_extension(orders.thing_set(["o1>o2"]), assessment, trans)
    assert result.model.ids() == ["o1>o2", "o3>o1", "o3>o2"]


def test_sdt_extension_incoherent(orders, trans):
    assessment = Assessment.of(orders, not_ids=["o1>o3"])
    base = orders.thing_set(["o1>o2", "o2>o3"])
    result = sdt_natural_extension(base, assessment, trans)
    assert result.outcome == INCOHERENT
    assert result.witness.axiom == "D1"
    assert orders.things[result.witness.thing] == "o1>o3"
    assert replay(result.witness, d=result.model, assessment=assessment)
    coherent = enumerate_coherent_sdts(assessment, trans, WIDE)
    assert intersection_oracle_sdt(base, coherent) is None


# ──────────────────────────────────────────────────────────
# SDS
# ──────────────────────────────────────────────────────────

@pytest.mark.parametrize("mode", ["full_rules", "binary_rules"])
@pytest.mark.parametrize("settings", [EngineSettings(), EngineSettings(use_shortcuts=False)], ids=["shortcut", "general"])
def test_lift_forces_the_lifted_thing(two, operators, mode, settings):
    result = sds_natural_extension(two.family([["t1"]]), Assessment.empty(two), operators["lift"], mode, settings)
    assert result.outcome == EXTENDED
    assert result.model.as_lists() == [["t1"], ["t2"], ["t1", "t2"]]
    assert result.rounds >= 2


def test_desirable_things_seed_the_fixpoint(two, operators):
    result = sds_natural_extension(Family(two), Assessment.of(two, des_ids=["t1"]), operators["identity"])
    assert result.model.as_lists() == [["t1"], ["t1", "t2"]]


@pytest.mark.parametrize(
    "base, not_ids, detail, test_id",
    [
        ([["t1"]], ["t1"], "['t1'] lies inside A_not", "base inside A_not"),
        ([[]], [], "∅ is in the base", "empty set in base"),
    ],
)
def test_incoherent_extension(two, operators, base, not_ids, detail, test_id):
    result = sds_natural_extension(two.family(base), Assessment.of(two, not_ids=not_ids), operators["identity"])
    assert result.outcome == INCOHERENT, f"expected Incoherent for ID: {test_id}"
    assert result.witness.axiom == "K1"
    assert result.witness.detail == detail


def test_round_limit_is_inconclusive(two, operators):
    settings = EngineSettings(fixpoint_rounds=1)
    result = sds_natural_extension(two.family([["t1"]]), Assessment.empty(two), operators["lift"], settings=settings)
    assert result.outcome == INCONCLUSIVE
    assert result.budget_note == "no fixpoint within 1 rounds"


def test_k5_budget_is_inconclusive(two, operators):
    settings = EngineSettings(k5_budget=1, use_shortcuts=False)
    base = two.family([["t1"], ["t2"]])
    result = sds_natural_extension(base, Assessment.empty(two), operators["identity"], settings=settings)
    assert result.outcome == INCONCLUSIVE
    assert "k5_budget=1" in result.budget_note


def test_unknown_mode(two, operators):
    with pytest.raises(ValueError):
        sds_natural_extension(Family(two), Assessment.empty(two), operators["identity"], "all_rules")


def test_cross_check_agreeing_modes(two, operators):
    full, binary = cross_check_modes(two.family([["t1"]]), Assessment.empty(two), operators["lift"])
    assert full.model == binary.model
    assert full.notes == () and binary.notes == ()
    assert full.to_dict()["mode"] == "full_rules"


# ──────────────────────────────────────────────────────────
# Fixpoint equals the intersection of coherent supersets
# ──────────────────────────────────────────────────────────

MODE_VARIANTS = {"full_rules": FULL, "binary_rules": Variant("two")}


@hypothesis.settings(max_examples=40, deadline=None)
@hypothesis.given(
    strat.sets(strat.integers(min_value=1, max_value=3), max_size=3),
    strat.integers(min_value=0, max_value=3),
    strat.integers(min_value=0, max_value=3),
    strat.sampled_from(["identity", "lift"]),
    strat.sampled_from(sorted(MODE_VARIANTS)),
)
def test_fixpoint_matches_oracle(operators, base_masks, not_mask, des_mask, name, mode):
    hypothesis.assume(not not_mask & des_mask)
    cl = operators[name]
    u = cl.universe
    base = Family(u, frozenset(base_masks))
    assessment = Assessment(ThingSet(u, not_mask), ThingSet(u, des_mask))
    result = sds_natural_extension(base, assessment, cl, mode)
    coherent = enumerate_coherent_sds(assessment, cl, MODE_VARIANTS[mode])
    oracle = intersection_oracle_sds(base, coherent)
    if oracle is None:
        assert result.outcome == INCOHERENT
    else:
        assert result.outcome == EXTENDED
        assert result.model == oracle
