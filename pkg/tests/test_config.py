"""Unit tests for pydesirability.config (settings layers).

Run with::

    pytest -q tests/test_config.py
"""
from __future__ import annotations

import argparse

import pytest

from pydesirability import config
from pydesirability.config import DEFAULT_SETTINGS, EngineSettings, apply_cli_overrides, settings_from_options
from pydesirability.errors import ConfigurationError


def test_defaults():
    s = EngineSettings()
    assert (s.universe_cap, s.sdt_enumeration_cap, s.sds_full_cap, s.sds_weak_cap) == (16, 4, 3, 4)
    assert (s.law_budget, s.k5_budget, s.fixpoint_rounds) == (1_000_000, 4096, 64)
    assert (s.threads, s.use_shortcuts) == (1, True)


@pytest.mark.parametrize(
    "kwargs, test_id",
    [
        ({"k5_budget": 0}, "zero budget"),
        ({"threads": -1}, "negative threads"),
        ({"universe_cap": 17}, "cap above the hard limit"),
        ({"fixpoint_rounds": True}, "bool is not a count"),
        ({"seed": "7"}, "string seed"),
    ],
)
def test_invalid_settings(kwargs, test_id):
    with pytest.raises(ConfigurationError):
        EngineSettings(**kwargs)


def test_with_overrides():
    s = EngineSettings()
    assert s.with_overrides(k5_budget=None) is s
    assert s.with_overrides(k5_budget=12).k5_budget == 12
    with pytest.raises(ConfigurationError):
        s.with_overrides(speed=3)


def test_layers_apply_lowest_first():
    doc = settings_from_options({"budget": 100, "rounds": 5, "variant": "two"}, DEFAULT_SETTINGS)
    assert (doc.k5_budget, doc.fixpoint_rounds) == (100, 5)
    args = argparse.Namespace(budget=7, threads=None, seed=3, cap=None)
    cli = apply_cli_overrides(doc, args)
    assert (cli.k5_budget, cli.fixpoint_rounds, cli.seed) == (7, 5, 3)
    assert settings_from_options(None, doc) is doc


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv("PYDESIRABILITY_SEED", "42")
    assert config._default_settings().seed == 42
    monkeypatch.setenv("PYDESIRABILITY_SEED", "forty-two")
    with pytest.raises(ConfigurationError):
        config._default_settings()
    monkeypatch.delenv("PYDESIRABILITY_SEED")
    assert config._default_settings() == EngineSettings()
