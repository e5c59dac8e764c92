"""
config.py – engine settings (caps, budgets, seed, shortcuts)
============================================================

One frozen ``EngineSettings`` value is threaded through every operation that
enumerates or searches.  Layers are applied lowest first:

    defaults  →  document ``"options"``  →  command-line flags
"""
from __future__ import annotations

import dataclasses
import logging
import os
from dataclasses import dataclass
from typing import Any, Mapping, Optional

from .errors import ConfigurationError

logger = logging.getLogger(__name__)

HARD_UNIVERSE_CAP = 16  # masks of 2^|T| families must stay addressable


@dataclass(frozen=True, slots=True)
class EngineSettings:
    universe_cap: int = HARD_UNIVERSE_CAP
    sdt_enumeration_cap: int = 4      # enumerate_coherent_sdts
    sds_full_cap: int = 3             # enumerate_coherent_sds, strengths full/finite
    sds_weak_cap: int = 4             # enumerate_coherent_sds, strengths two/one
    law_budget: int = 1_000_000       # cl2 covering pairs
    k5_budget: int = 4096             # subfamilies examined by the general K5 path
    fixpoint_rounds: int = 64
    seed: int = 0
    threads: int = 1
    use_shortcuts: bool = True

    def __post_init__(self) -> None:
        for name in (
            "universe_cap",
            "sdt_enumeration_cap",
            "sds_full_cap",
            "sds_weak_cap",
            "law_budget",
            "k5_budget",
            "fixpoint_rounds",
            "threads",
        ):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise ConfigurationError(f"{name} must be a positive integer, got {value!r}")
        if self.universe_cap > HARD_UNIVERSE_CAP:
            raise ConfigurationError(
                f"universe_cap may not exceed {HARD_UNIVERSE_CAP}, got {self.universe_cap}"
            )
        if not isinstance(self.seed, int) or isinstance(self.seed, bool):
            raise ConfigurationError(f"seed must be an integer, got {self.seed!r}")

    def with_overrides(self, **overrides: Any) -> "EngineSettings":
        known = {f.name for f in dataclasses.fields(self)}
        unknown = sorted(set(overrides) - known)
        if unknown:
            raise ConfigurationError(f"unknown setting(s): {', '.join(unknown)}")
        changes = {k: v for k, v in overrides.items() if v is not None}
        if not changes:
            return self
        logger.debug("settings override: %s", changes)
        return dataclasses.replace(self, **changes)


def _default_settings() -> EngineSettings:
    raw = os.environ.get("PYDESIRABILITY_SEED")
    if raw is None:
        return EngineSettings()
    try:
        return EngineSettings(seed=int(raw))
    except ValueError as exc:
        raise ConfigurationError(f"PYDESIRABILITY_SEED is not an integer: {raw!r}") from exc


DEFAULT_SETTINGS: EngineSettings = _default_settings()

# document option key → settings field
_OPTION_KEYS = {
    "budget": "k5_budget",
    "cap": "sdt_enumeration_cap",
    "law_budget": "law_budget",
    "rounds": "fixpoint_rounds",
    "seed": "seed",
    "threads": "threads",
    "shortcuts": "use_shortcuts",
}


def settings_from_options(
    options: Optional[Mapping[str, Any]], base: EngineSettings = DEFAULT_SETTINGS
) -> EngineSettings:
    """Apply the tunables of a document's ``"options"`` block."""
    if not options:
        return base
    overrides = {field: options[key] for key, field in _OPTION_KEYS.items() if key in options}
    return base.with_overrides(**overrides)


def apply_cli_overrides(settings: EngineSettings, args: Any) -> EngineSettings:
    """Overlay ``--budget/--threads/--seed/--cap`` from an argparse namespace."""
    return settings.with_overrides(
        k5_budget=getattr(args, "budget", None),
        threads=getattr(args, "threads", None),
        seed=getattr(args, "seed", None),
        sdt_enumeration_cap=getattr(args, "cap", None),
    )


__all__ = [
    "HARD_UNIVERSE_CAP",
    "EngineSettings",
    "DEFAULT_SETTINGS",
    "settings_from_options",
    "apply_cli_overrides",
]
