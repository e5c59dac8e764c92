"""
model_document.py – JSON model documents and the fixture corpus
===============================================================

A document carries one problem instance::

    {
      "description": "...",
      "scenarios":  [tags from SCENARIOS],
      "universe":   {"things": [...], "payload_kind": "opaque" | "preference_pair"
                     | "rational_vector", "payloads": [...], "options": [...],
                     "coordinates": [...], "grid": {"states": [...], "prizes": [...]}},
      "closure":    {"kind": "identity" | "unitary" | "table" | "transitive"
                     | "posi" | "chull", ...},
      "assessment": {"not": [...], "des": [...]}  or  {"preset": name, ...},
      "sdt":  [ids],          "sds":  [[ids], ...],          "base": [[ids], ...],
      "options":    {"variant": ..., "q": {...}, "mode": ..., "budget": ..., "cap": ...}
    }

``serialize_model`` writes the canonical form: sets sorted by thing index,
families in canonical order, rationals as ``"p/q"`` strings, keys sorted.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from importlib import resources
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from .closure_operators import ClosureOperator, operator_from_spec
from .coherence_checker import STRENGTH_AXIOMS, Variant
from .config import DEFAULT_SETTINGS, EngineSettings, settings_from_options
from .errors import ConfigurationError, MalformedDocument, PayloadMismatch
from .natural_extension import MODES
from .things import (
    PAYLOAD_KINDS,
    Assessment,
    Family,
    QDomain,
    ThingSet,
    Universe,
    canonical_masks,
    format_rational,
)
from .vector_hulls import PRESETS, preset_assessment

logger = logging.getLogger(__name__)

_TOP_KEYS = {"description", "scenarios", "universe", "closure", "assessment", "sdt", "sds", "base", "options"}
_OPTION_KEYS = {"variant", "q", "mode", "budget", "cap", "law_budget", "rounds", "seed", "threads", "shortcuts"}

# Worked scenarios the fixture corpus reproduces; every tag is covered by some fixture.
SCENARIOS: Mapping[str, str] = {
    "pizza_tastes": "desirable pizzas, an SDT under the identity closure",
    "pizza_menu_sets": "desirable menus of pizzas, an SDS under the identity closure",
    "propositions": "sets of propositions closed under logical consequence",
    "pizza_rules": "desirability rules for pizzas as a unitary closure",
    "thick_crust": "coherent SDTs and SDSs under the pizza rules",
    "preferences": "strict preferences closed under transitivity",
    "gambles_posi": "gambles with the positive-hull closure",
    "gambles_chull": "gambles with the convex-hull closure",
    "lotteries": "lotteries over prizes under convex mixing",
    "horse_lotteries": "horse lotteries over states and prizes",
    "total_orders": "SDSs represented by strict total orders",
    "explicit_closure_table": "a closure operator given as an explicit table",
}


@dataclass(frozen=True)
class Model:
    universe: Universe
    assessment: Assessment
    closure: ClosureOperator
    closure_spec: Mapping[str, Any]
    assessment_spec: Mapping[str, Any]
    sdt: Optional[ThingSet] = None
    sds: Optional[Family] = None
    base: Optional[Family] = None
    variant: Variant = Variant()
    mode: str = "full_rules"
    options: Mapping[str, Any] = field(default_factory=dict)
    settings: EngineSettings = DEFAULT_SETTINGS
    description: str = ""
    scenarios: Tuple[str, ...] = ()


# ────────────────────────────────────────────────────────────────
# 1.  Field readers
# ────────────────────────────────────────────────────────────────
def _require(doc: Mapping[str, Any], key: str, kind: type, where: str) -> Any:
    if key not in doc:
        raise MalformedDocument(f"{where}: missing {key!r}")
    value = doc[key]
    if not isinstance(value, kind):
        raise MalformedDocument(f"{where}.{key} must be a {kind.__name__}")
    return value


def _id_list(value: Any, where: str) -> List[str]:
    if not isinstance(value, list) or not all(isinstance(t, str) for t in value):
        raise MalformedDocument(f"{where} must be a list of thing ids")
    return value


def _family(universe: Universe, value: Any, where: str) -> Family:
    if not isinstance(value, list):
        raise MalformedDocument(f"{where} must be a list of sets")
    return universe.family(_id_list(s, f"{where}[{i}]") for i, s in enumerate(value))


def _universe(doc: Mapping[str, Any], settings: EngineSettings) -> Universe:
    spec = _require(doc, "universe", dict, "document")
    things = _id_list(_require(spec, "things", list, "universe"), "universe.things")
    kind = spec.get("payload_kind", "opaque")
    if kind not in PAYLOAD_KINDS:
        raise PayloadMismatch(f"unknown payload_kind {kind!r}")
    payloads = spec.get("payloads", [])
    if not isinstance(payloads, list):
        raise MalformedDocument("universe.payloads must be a list")
    options = spec.get("options")
    if kind == "preference_pair" and options is None:
        options = []
        for pair in payloads:
            for o in pair if isinstance(pair, list) else ():
                if o not in options:
                    options.append(o)
    grid = spec.get("grid")
    if grid is not None:
        if not isinstance(grid, dict) or "states" not in grid or "prizes" not in grid:
            raise MalformedDocument("universe.grid looks like {'states': [...], 'prizes': [...]}")
        grid = (tuple(grid["states"]), tuple(grid["prizes"]))
    universe = Universe(
        tuple(things),
        payload_kind=kind,
        payloads=tuple(tuple(p) if isinstance(p, list) else p for p in payloads),
        options=tuple(options or ()),
        coordinates=tuple(spec.get("coordinates", ())),
        grid=grid,
    )
    universe.check_size(settings.universe_cap)
    return universe


def _assessment(universe: Universe, spec: Any) -> Assessment:
    if spec is None:
        return Assessment.empty(universe)
    if not isinstance(spec, dict):
        raise MalformedDocument("assessment must be an object")
    if "preset" in spec:
        preset = spec["preset"]
        if preset not in PRESETS:
            raise MalformedDocument(f"unknown preset {preset!r}; expected one of {list(PRESETS)}")
        return preset_assessment(
            universe,
            preset,
            spec.get("positive_prizes", ()),
            spec.get("negative_prizes", ()),
        )
    unknown = sorted(set(spec) - {"not", "des"})
    if unknown:
        raise MalformedDocument(f"assessment: unknown key(s) {unknown}")
    return Assessment.of(
        universe,
        _id_list(spec.get("not", []), "assessment.not"),
        _id_list(spec.get("des", []), "assessment.des"),
    )


def _q_domain(universe: Universe, spec: Any) -> QDomain:
    if spec is None:
        return QDomain.full()
    if not isinstance(spec, dict):
        raise MalformedDocument("options.q must be an object")
    kind = spec.get("kind", "full")
    if kind == "full":
        return QDomain.full()
    if kind == "card_bound":
        bound = spec.get("bound")
        if not isinstance(bound, int) or isinstance(bound, bool) or bound < 0:
            raise MalformedDocument("options.q.bound must be a nonnegative integer")
        return QDomain.card_bound(bound)
    if kind == "explicit":
        return QDomain.explicit(_family(universe, spec.get("sets"), "options.q.sets"))
    raise MalformedDocument(f"unknown Q kind {kind!r}")


def _options(universe: Universe, spec: Any, settings: EngineSettings) -> tuple:
    if spec is None:
        spec = {}
    if not isinstance(spec, dict):
        raise MalformedDocument("options must be an object")
    unknown = sorted(set(spec) - _OPTION_KEYS)
    if unknown:
        raise MalformedDocument(f"options: unknown key(s) {unknown}")
    strength = spec.get("variant", "full")
    if strength not in STRENGTH_AXIOMS:
        raise MalformedDocument(f"unknown variant {strength!r}; expected one of {sorted(STRENGTH_AXIOMS)}")
    mode = spec.get("mode", "full_rules")
    if mode not in MODES:
        raise MalformedDocument(f"unknown mode {mode!r}; expected one of {list(MODES)}")
    try:
        tuned = settings_from_options(spec, settings)
    except ConfigurationError as exc:
        raise MalformedDocument(f"options: {exc}") from exc
    return Variant(strength, _q_domain(universe, spec.get("q"))), mode, tuned


# ────────────────────────────────────────────────────────────────
# 2.  parse / serialize
# ────────────────────────────────────────────────────────────────
def parse_model(text: str, settings: EngineSettings = DEFAULT_SETTINGS) -> Model:
    """Validate a JSON document and build its model (laws checked)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"not JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise MalformedDocument("the document root must be an object")
    unknown = sorted(set(doc) - _TOP_KEYS)
    if unknown:
        raise MalformedDocument(f"unknown top-level key(s) {unknown}")

    universe = _universe(doc, settings)
    variant, mode, tuned = _options(universe, doc.get("options"), settings)
    closure_spec = _require(doc, "closure", dict, "document")
    closure = operator_from_spec(universe, closure_spec, tuned)
    assessment_spec = doc.get("assessment") or {}
    assessment = _assessment(universe, assessment_spec)

    sdt = universe.thing_set(_id_list(doc["sdt"], "sdt")) if "sdt" in doc else None
    sds = _family(universe, doc["sds"], "sds") if "sds" in doc else None
    base = _family(universe, doc["base"], "base") if "base" in doc else None
    description = doc.get("description", "")
    if not isinstance(description, str):
        raise MalformedDocument("description must be a string")
    scenarios = _scenarios(doc.get("scenarios", []))
    logger.debug(
        "parsed model: |T|=%d closure=%s variant=%s", universe.size, closure.describe(), variant.describe()
    )
    return Model(
        universe=universe,
        assessment=assessment,
        closure=closure,
        closure_spec=dict(closure_spec),
        assessment_spec=dict(assessment_spec),
        sdt=sdt,
        sds=sds,
        base=base,
        variant=variant,
        mode=mode,
        options=dict(doc.get("options") or {}),
        settings=tuned,
        description=description,
        scenarios=scenarios,
    )


def _scenarios(raw: Any) -> Tuple[str, ...]:
    if not isinstance(raw, list) or not all(isinstance(s, str) for s in raw):
        raise MalformedDocument("scenarios must be a list of strings")
    unknown = sorted(set(raw) - set(SCENARIOS))
    if unknown:
        raise MalformedDocument(f"unknown scenario(s) {unknown}; known: {sorted(SCENARIOS)}")
    return tuple(sorted(set(raw)))


def _sorted_ids(universe: Universe, ids: Sequence[str]) -> List[str]:
    return universe.ids_of(universe.mask_of(ids))


def _family_lists(family: Family) -> List[List[str]]:
    u = family.universe
    return [u.ids_of(m) for m in canonical_masks(family.masks)]


def _canonical_closure(universe: Universe, spec: Mapping[str, Any]) -> Dict[str, Any]:
    out = dict(spec)
    if spec.get("kind") == "unitary":
        out["lift"] = {
            src: _sorted_ids(universe, spec["lift"][src])
            for src in _sorted_ids(universe, list(spec["lift"]))
        }
    elif spec.get("kind") == "table":
        rows = {universe.mask_of(r["from"]): universe.mask_of(r["to"]) for r in spec["table"]}
        out["table"] = [
            {"from": universe.ids_of(k), "to": universe.ids_of(rows[k])} for k in canonical_masks(rows)
        ]
    return out


def _canonical_universe(universe: Universe) -> Dict[str, Any]:
    out: Dict[str, Any] = {"things": list(universe.things), "payload_kind": universe.payload_kind}
    if universe.payload_kind == "preference_pair":
        out["payloads"] = [list(p) for p in universe.payloads]
        out["options"] = list(universe.options)
    elif universe.payload_kind == "rational_vector":
        out["payloads"] = [[format_rational(v) for v in vec] for vec in universe.payloads]
        if universe.grid is not None:
            states, prizes = universe.grid
            out["grid"] = {"states": list(states), "prizes": list(prizes)}
        else:
            out["coordinates"] = list(universe.coordinates)
    return out


def _canonical_q(q: QDomain, universe: Universe) -> Dict[str, Any]:
    if q.kind == "card_bound":
        return {"kind": "card_bound", "bound": q.bound}
    if q.kind == "explicit":
        return {"kind": "explicit", "sets": [universe.ids_of(m) for m in canonical_masks(q.members)]}
    return {"kind": "full"}


def model_to_document(model: Model) -> Dict[str, Any]:
    u = model.universe
    doc: Dict[str, Any] = {
        "universe": _canonical_universe(u),
        "closure": _canonical_closure(u, model.closure_spec),
    }
    if model.description:
        doc["description"] = model.description
    if model.scenarios:
        doc["scenarios"] = list(model.scenarios)
    spec = model.assessment_spec
    if "preset" in spec:
        doc["assessment"] = dict(spec)
    else:
        doc["assessment"] = {"not": model.assessment.a_not.ids(), "des": model.assessment.a_des.ids()}
    if model.sdt is not None:
        doc["sdt"] = model.sdt.ids()
    if model.sds is not None:
        doc["sds"] = _family_lists(model.sds)
    if model.base is not None:
        doc["base"] = _family_lists(model.base)
    if model.options:
        options = dict(model.options)
        if "q" in options:
            options["q"] = _canonical_q(model.variant.q, u)
        doc["options"] = options
    return doc


def serialize_model(model: Model) -> str:
    """Canonical JSON text; parsing it back gives the same text again."""
    return json.dumps(model_to_document(model), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# ────────────────────────────────────────────────────────────────
# 3.  Fixture corpus
# ────────────────────────────────────────────────────────────────
def _fixture_dir():
    return resources.files(__package__).joinpath("fixtures")


def list_fixtures() -> List[str]:
    return sorted(p.name[:-5] for p in _fixture_dir().iterdir() if p.name.endswith(".json"))


def fixture_text(name: str) -> str:
    path = _fixture_dir().joinpath(f"{name}.json")
    if not path.is_file():
        raise MalformedDocument(f"no fixture named {name!r}; available: {list_fixtures()}")
    return path.read_text(encoding="utf-8")


def load_fixture(name: str, settings: EngineSettings = DEFAULT_SETTINGS) -> Model:
    return parse_model(fixture_text(name), settings)


__all__ = [
    "SCENARIOS",
    "Model",
    "parse_model",
    "model_to_document",
    "serialize_model",
    "list_fixtures",
    "fixture_text",
    "load_fixture",
]
