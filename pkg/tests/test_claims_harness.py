"""Unit tests for pydesirability.claims_harness (exhaustive claim verification).

Run with::

    pytest -q tests/test_claims_harness.py
"""
from __future__ import annotations

import pytest

from pydesirability.claims_harness import (
    CLAIMS,
    OPERATOR_SEEDS,
    InstanceConfig,
    all_families,
    assessments_for,
    build_instances,
    q_domains,
    verify_claim,
)
from pydesirability.config import DEFAULT_SETTINGS, EngineSettings
from pydesirability.errors import UnknownClaim
from pydesirability.things import generic_universe

SMALL = InstanceConfig(size=2, operators=("identity", "lift"))


# ──────────────────────────────────────────────────────────
# Instance space
# ──────────────────────────────────────────────────────────

def test_every_seed_builds_a_certified_operator():
    for inst in build_instances(InstanceConfig(size=2)):
        assert inst.cl.flags.laws == "yes", f"{inst.name} is not lawful"
    assert [i.name for i in build_instances(InstanceConfig(size=2))] == list(OPERATOR_SEEDS)


@pytest.mark.parametrize(
    "kwargs, test_id",
    [
        ({"operators": ("magic",)}, "unknown operator"),
        ({"size": 0}, "size too small"),
        ({"size": 9}, "size too large"),
    ],
)
def test_instance_config_validation(kwargs, test_id):
    with pytest.raises(ValueError):
        InstanceConfig(**kwargs)


def test_assessments_are_exhaustive_for_two_things():
    u = generic_universe(2)
    found = assessments_for(u, InstanceConfig(size=2))
    assert len(found) == 16
    assert len({(a.not_mask, a.des_mask) for a in found}) == 16


def test_assessments_are_seeded_beyond_two_things():
    u = generic_universe(3)
    first = assessments_for(u, InstanceConfig(size=3, seed=5))
    again = assessments_for(u, InstanceConfig(size=3, seed=5))
    assert len(first) == 20
    assert (first[0].not_mask, first[0].des_mask) == (0, 0)
    assert [(a.not_mask, a.des_mask) for a in first] == [(a.not_mask, a.des_mask) for a in again]


def test_all_families_and_q_domains():
    u = generic_universe(2)
    assert sum(1 for _ in all_families(u, DEFAULT_SETTINGS)) == 16
    assert sum(1 for _ in all_families(u, DEFAULT_SETTINGS, nonempty=True)) == 8
    assert [q.kind for q in q_domains(1)] == ["full"]
    assert [q.kind for q in q_domains(3)] == ["full", "card_bound"]


# ──────────────────────────────────────────────────────────
# verify_claim
# ──────────────────────────────────────────────────────────

@pytest.mark.parametrize(
    "claim_id, config",
    [
        ("representation", InstanceConfig(size=2, operators=("identity",))),
        ("identity_k2_suffices", InstanceConfig(size=2, operators=("identity",))),
        ("sdt_sds_bridge", InstanceConfig(size=2)),
        ("consistency", SMALL),
        ("intersections", SMALL),
        ("strengthened_k5", SMALL),
        ("fin_is_finitary", SMALL),
        ("finitary_iff_fixed", SMALL),
        ("total_orders", InstanceConfig(size=3)),
    ],
)
def test_claims_hold(claim_id, config):
    verdict = verify_claim(claim_id, config)
    assert verdict.is_verified, f"{claim_id}: {verdict.summary()} {verdict.note}"


def test_representation_counts_cases():
    verdict = verify_claim("representation", InstanceConfig(size=2, operators=("identity",)))
    assert verdict.note.startswith("identity: ")
    assert "cases" in verdict.note


def test_claim_outside_its_operator_is_skipped():
    verdict = verify_claim("identity_k2_suffices", InstanceConfig(size=2, operators=("lift",)))
    assert verdict.is_verified
    assert verdict.note == "skipped lift: outside the claim"


def test_claim_needing_a_flag_is_skipped():
    # transitive closure over (o1,o2), (o2,o3), (o1,o3) is not unitary
    verdict = verify_claim("unitary_strengths_agree", InstanceConfig(size=3, operators=("transitive",)))
    assert verdict.is_verified
    assert "skipped transitive: not unitary" in verdict.note


def test_threads_do_not_change_the_verdict():
    serial = verify_claim("consistency", SMALL)
    threaded = verify_claim(
        "consistency",
        InstanceConfig(size=2, operators=("identity", "lift"), settings=EngineSettings(threads=2)),
    )
    assert serial.status == threaded.status


def test_unknown_claim():
    with pytest.raises(UnknownClaim):
        verify_claim("no_such_claim")


def test_claim_ids_are_their_registry_keys():
    assert all(claim.claim_id == key for key, claim in CLAIMS.items())
    assert "total_orders" in CLAIMS
