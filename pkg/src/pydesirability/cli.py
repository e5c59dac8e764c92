"""
cli.py – command-line front end
===============================

    pydesirability laws       DOC               closure laws and structural probes
    pydesirability check      DOC [--sdt|--sds] coherence of the document's SDT / SDS
    pydesirability extend     DOC [--sdt|--sds] natural extension
    pydesirability enumerate  DOC [--sdt|--sds] every coherent SDT / SDS
    pydesirability represent  DOC               𝒟_K and 𝐃(K) of the document's SDS
    pydesirability verify     CLAIM --size N    exhaustive claim verification
    pydesirability fixtures                     list the bundled documents

DOC is a path, ``-`` for stdin, or ``fixture:NAME``.

Exit status: 0 Verified, 1 Violated, 2 Inconclusive, 64 usage error,
65 bad document, 70 internal inconsistency.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

from .claims_harness import CLAIMS, OPERATOR_SEEDS, InstanceConfig, verify_claim
from .closure_operators import LAWS, certify, check_laws
from .coherence_checker import (
    STRENGTH_AXIOMS,
    Variant,
    check_sds,
    check_sdt,
    enumerate_coherent_sds,
    enumerate_coherent_sdts,
    replay,
)
from .config import DEFAULT_SETTINGS, EngineSettings, apply_cli_overrides
from .errors import (
    ConfigurationError,
    DocumentError,
    CoherenceUndecided,
    LawsUnverified,
    NotCoherent,
    UnknownClaim,
    UniverseTooLarge,
    WrongPayload,
    WrongUniverse,
)
from .model_document import Model, fixture_text, list_fixtures, parse_model
from .natural_extension import (
    EXTENDED,
    INCOHERENT,
    MODES,
    cross_check_modes,
    sds_natural_extension,
    sdt_natural_extension,
)
from .representation import represent, represent_total_orders
from .things import QDomain
from .vector_hulls import validate_horse_lottery
from .verdicts import Verdict, first_failure

logger = logging.getLogger(__name__)

SCHEMA_VERSION = "1"

EXIT_VERIFIED, EXIT_VIOLATED, EXIT_INCONCLUSIVE = 0, 1, 2
EXIT_USAGE, EXIT_BAD_DOCUMENT, EXIT_INTERNAL = 64, 65, 70

_BAD_INPUT = (DocumentError, UniverseTooLarge, LawsUnverified, WrongUniverse, WrongPayload)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would exit with 2
        raise UsageError(f"{self.prog}: {message}")


def _status_code(status: str) -> int:
    codes = {"Verified": EXIT_VERIFIED, "Violated": EXIT_VIOLATED, "Error": EXIT_INTERNAL}
    return codes.get(status, EXIT_INCONCLUSIVE)


# ────────────────────────────────────────────────────────────────
# 1.  Reports
# ────────────────────────────────────────────────────────────────
class Report:
    """Accumulates one command's result; rendered once at the end."""

    def __init__(self, command: str, status: str = "Verified"):
        self.command = command
        self.status = status
        self.fields: Dict[str, Any] = {}
        self.lines: List[str] = []

    def verdict(self, verdict: Verdict) -> None:
        self.status = verdict.status.value
        self.fields.update({k: v for k, v in verdict.to_dict().items() if k != "status"})
        self.lines.append(verdict.summary())
        if verdict.certificate is not None:
            self.lines.append("  certificate: " + json.dumps(verdict.certificate.to_dict(), sort_keys=True, ensure_ascii=False))
        if verdict.note:
            self.lines.append(f"  note: {verdict.note}")

    def render(self, fmt: str) -> str:
        if fmt == "structured":
            payload = {"schema_version": SCHEMA_VERSION, "command": self.command, "status": self.status}
            payload.update(self.fields)
            return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False)
        return "\n".join([f"[{self.command}] {self.status}"] + self.lines)

    @property
    def exit_code(self) -> int:
        return _status_code(self.status)


def _load(args: argparse.Namespace) -> Model:
    source = args.document
    if source.startswith("fixture:"):
        text = fixture_text(source[len("fixture:"):])
    elif source == "-":
        text = sys.stdin.read()
    else:
        try:
            text = Path(source).read_text(encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot read {source}: {exc}") from exc
    model = parse_model(text, args.settings)
    settings = apply_cli_overrides(model.settings, args)
    return model if settings is model.settings else _with_settings(model, settings)


def _with_settings(model: Model, settings: EngineSettings) -> Model:
    return dataclasses.replace(model, settings=settings)


def _variant(model: Model, args: argparse.Namespace) -> Variant:
    strength = args.variant or model.variant.strength
    q = model.variant.q if args.q_bound is None else QDomain.card_bound(args.q_bound)
    return Variant(strength, q)


def _target(model: Model, args: argparse.Namespace) -> str:
    if args.sdt:
        return "sdt"
    if args.sds:
        return "sds"
    return "sds" if model.sds is not None or model.base is not None else "sdt"


# ────────────────────────────────────────────────────────────────
# 2.  Commands
# ────────────────────────────────────────────────────────────────
def cmd_laws(args: argparse.Namespace) -> Report:
    model = _load(args)
    cl = model.closure
    verdict = cl.laws_verdict or check_laws(cl, model.settings)
    catalog = validate_horse_lottery(model.universe) if model.universe.grid is not None else Verdict.verified()
    report = Report("laws")
    report.verdict(first_failure([verdict, catalog]))
    report.fields["operator"] = cl.describe()
    report.fields["laws"] = list(LAWS)
    if model.universe.grid is not None:
        report.fields["catalog"] = catalog.to_dict()
    if verdict.is_verified:
        certify(cl, model.settings)
        report.lines.append("  " + ", ".join(f"{k}={v}" for k, v in sorted(cl.flags.to_dict().items()) if k != "notes"))
        report.lines.extend(f"  {n}" for n in cl.flags.notes)
    report.fields["flags"] = cl.flags.to_dict()
    return report


def cmd_check(args: argparse.Namespace) -> Report:
    model = _load(args)
    report = Report("check")
    target = _target(model, args)
    report.fields["target"] = target
    if target == "sdt":
        if model.sdt is None:
            raise UsageError("the document has no 'sdt' to check")
        verdict = check_sdt(model.sdt, model.assessment, model.closure)
        replayed = verdict.is_violated and replay(
            verdict.certificate, d=model.sdt, assessment=model.assessment, cl=model.closure
        )
    else:
        if model.sds is None:
            raise UsageError("the document has no 'sds' to check")
        variant = _variant(model, args)
        report.fields["variant"] = variant.describe()
        verdict = check_sds(model.sds, model.assessment, model.closure, variant, model.settings)
        replayed = verdict.is_violated and replay(
            verdict.certificate, k=model.sds, assessment=model.assessment, cl=model.closure, q=variant.q
        )
    report.verdict(verdict)
    if verdict.is_violated:
        report.fields["replayed"] = replayed
    return report


def _extension_report(report: Report, result) -> None:
    report.status = {EXTENDED: "Verified", INCOHERENT: "Violated"}.get(result.outcome, "Inconclusive")
    report.fields.update(result.to_dict())
    report.lines.append(f"{result.outcome} ({result.mode})")
    if result.model is not None:
        shown = result.model.ids() if result.mode == "sdt" else result.model.as_lists()
        report.lines.append(f"  model: {json.dumps(shown, ensure_ascii=False)}")
    if result.witness is not None:
        report.lines.append("  witness: " + json.dumps(result.witness.to_dict(), sort_keys=True, ensure_ascii=False))
    if result.budget_note:
        report.lines.append(f"  budget: {result.budget_note}")
    report.lines.extend(f"  note: {n}" for n in result.notes)


def cmd_extend(args: argparse.Namespace) -> Report:
    model = _load(args)
    report = Report("extend")
    if _target(model, args) == "sdt":
        base = model.sdt if model.sdt is not None else model.universe.thing_set()
        _extension_report(report, sdt_natural_extension(base, model.assessment, model.closure))
        return report
    base = model.base if model.base is not None else model.sds
    if base is None:
        raise UsageError("the document has neither 'base' nor 'sds' to extend")
    mode = args.mode or model.mode
    if mode == "both":
        full, binary = cross_check_modes(base, model.assessment, model.closure, model.settings)
        _extension_report(report, full)
        report.fields["binary_rules"] = binary.to_dict()
        report.lines.append(f"  binary_rules: {binary.outcome}")
        return report
    _extension_report(report, sds_natural_extension(base, model.assessment, model.closure, mode, model.settings))
    return report


def cmd_enumerate(args: argparse.Namespace) -> Report:
    model = _load(args)
    report = Report("enumerate")
    if _target(model, args) == "sdt":
        found = [d.ids() for d in enumerate_coherent_sdts(model.assessment, model.closure, model.settings)]
        report.fields["sdts"] = found
    else:
        variant = _variant(model, args)
        report.fields["variant"] = variant.describe()
        found = [k.as_lists() for k in enumerate_coherent_sds(model.assessment, model.closure, variant, model.settings)]
        report.fields["families"] = found
    report.fields["count"] = len(found)
    report.lines.append(f"{len(found)} found")
    report.lines.extend(f"  {json.dumps(x, ensure_ascii=False)}" for x in found)
    return report


def _represent_total_orders(model: Model, report: Report) -> Report:
    k = model.sds
    if k is None:
        if model.base is None:
            raise UsageError("the document has neither 'sds' nor 'base' to represent")
        ext = sds_natural_extension(model.base, model.assessment, model.closure, "binary_rules", model.settings)
        if not ext.is_extended:
            _extension_report(report, ext)
            return report
        k = ext.model
        report.fields["extended"] = k.as_lists()
    verdict, orders = represent_total_orders(k, model.assessment, model.closure, model.settings)
    report.verdict(verdict)
    report.fields["orders"] = [d.ids() for d in orders]
    report.lines.append(f"  {len(orders)} strict total orders")
    report.lines.extend(f"  {json.dumps(d.ids(), ensure_ascii=False)}" for d in orders)
    return report


def cmd_represent(args: argparse.Namespace) -> Report:
    model = _load(args)
    report = Report("represent")
    if args.total_orders:
        return _represent_total_orders(model, report)
    if model.sds is None:
        raise UsageError("the document has no 'sds' to represent")
    rep = represent(model.sds, model.assessment, model.closure, model.settings)
    shown = rep.to_dict()
    report.fields.update(shown)
    if not rep.verified:
        # coherence held, so a mismatch here is a defect in the engine
        logger.error("representation cross-check failed: %s", "; ".join(rep.notes))
        report.status = "Error"
        report.fields["error_type"] = "InternalInconsistency"
    report.lines.append(f"  𝒟_K: {json.dumps(shown['d_k'], ensure_ascii=False)}")
    report.lines.append(f"  𝐃(K): {json.dumps(shown['largest'], ensure_ascii=False)}")
    report.lines.extend(f"  note: {n}" for n in rep.notes)
    return report


def cmd_verify(args: argparse.Namespace) -> Report:
    config = InstanceConfig(
        size=args.size,
        operators=tuple(args.operators) if args.operators else tuple(OPERATOR_SEEDS),
        assessments=args.assessments,
        seed=args.settings.seed,
        settings=args.settings,
    )
    report = Report("verify")
    report.fields["claim"] = args.claim
    report.fields["size"] = args.size
    report.verdict(verify_claim(args.claim, config))
    return report


def cmd_fixtures(args: argparse.Namespace) -> Report:
    report = Report("fixtures")
    names = list_fixtures()
    report.fields["fixtures"] = names
    report.lines.extend(f"  {n}" for n in names)
    return report


# ────────────────────────────────────────────────────────────────
# 3.  Argument parsing
# ────────────────────────────────────────────────────────────────
def _common() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "structured"), default="text")
    common.add_argument("--budget", type=int, help="k5_budget: subfamilies examined by the general K5 path")
    common.add_argument("--threads", type=int, help="worker threads for enumeration")
    common.add_argument("--seed", type=int, help="seed for sampled searches")
    common.add_argument("--cap", type=int, help="sdt_enumeration_cap")
    common.add_argument("-v", "--verbose", action="count", default=0)
    return common


def _target_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--sdt", action="store_true")
    group.add_argument("--sds", action="store_true")


def _variant_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--variant", choices=sorted(STRENGTH_AXIOMS))
    parser.add_argument("--q-bound", type=int, dest="q_bound", help="relativise to card_bound(N)")


COMMANDS: Dict[str, Callable[[argparse.Namespace], Report]] = {
    "laws": cmd_laws,
    "check": cmd_check,
    "extend": cmd_extend,
    "enumerate": cmd_enumerate,
    "represent": cmd_represent,
    "verify": cmd_verify,
    "fixtures": cmd_fixtures,
}


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="pydesirability", description="Coherence engine for desirable things and sets.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    laws = sub.add_parser("laws", parents=[common], help="closure laws and property probes")
    laws.add_argument("document")

    check = sub.add_parser("check", parents=[common], help="coherence of the document's SDT or SDS")
    check.add_argument("document")
    _target_flags(check)
    _variant_flags(check)

    extend = sub.add_parser("extend", parents=[common], help="natural extension")
    extend.add_argument("document")
    _target_flags(extend)
    extend.add_argument("--mode", choices=MODES + ("both",))

    enum = sub.add_parser("enumerate", parents=[common], help="every coherent SDT or SDS")
    enum.add_argument("document")
    _target_flags(enum)
    _variant_flags(enum)

    rep = sub.add_parser("represent", parents=[common], help="representation of a coherent SDS")
    rep.add_argument("document")
    rep.add_argument("--total-orders", action="store_true", dest="total_orders", help="represent by strict total orders")

    verify = sub.add_parser("verify", parents=[common], help="exhaustively verify a claim")
    verify.add_argument("claim", choices=sorted(CLAIMS))
    verify.add_argument("--size", type=int, default=2)
    verify.add_argument("--operators", nargs="+", choices=sorted(OPERATOR_SEEDS))
    verify.add_argument("--assessments", type=int, help="seeded assessments per operator")

    sub.add_parser("fixtures", parents=[common], help="list bundled fixtures")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    try:
        args.settings = apply_cli_overrides(DEFAULT_SETTINGS, args)
        report = COMMANDS[args.command](args)
    except (NotCoherent, CoherenceUndecided) as exc:
        report = Report(args.command)
        report.verdict(exc.verdict)
        report.fields["error"] = str(exc)
        print(report.render(args.format))
        return report.exit_code
    except _BAD_INPUT as exc:
        return _fail(args, exc, EXIT_BAD_DOCUMENT)
    except (UsageError, ConfigurationError, UnknownClaim, ValueError) as exc:
        return _fail(args, exc, EXIT_USAGE)
    print(report.render(args.format))
    return report.exit_code


def _fail(args: argparse.Namespace, exc: Exception, code: int) -> int:
    logger.debug("%s failed", args.command, exc_info=True)
    if args.format == "structured":
        payload = {
            "schema_version": SCHEMA_VERSION,
            "command": args.command,
            "status": "Error",
            "error": str(exc),
            "error_type": type(exc).__name__,
        }
        print(json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False))
    else:
        print(f"[{args.command}] error: {exc}", file=sys.stderr)
    return code


__all__ = ["SCHEMA_VERSION", "COMMANDS", "Report", "UsageError", "build_parser", "main"]


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
