"""``schema`` command-line entry point.

Exit codes (stable):
    0  success, no ERROR diagnostics
    1  lint found at least one ERROR
    2  parse failure, invalid input data or bad usage
    3  I/O failure (unreadable input, unwritable output)
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from schema_forge import analytics, serialize
from schema_forge.diagnostics import Diagnostic, SchemaError, Severity
from schema_forge.emitter import EmitOptions, OrderPolicy, emit_canonical
from schema_forge.linter import default_profile, infer_tier, lint, load_profile
from schema_forge.model import Tier
from schema_forge.parser import parse_prompt
from schema_forge.router import (
    DecisionAnswers,
    Interview,
    RouterConfig,
    drift_advisories,
    drift_class,
    route,
)
from schema_forge.templates import render_template

EXIT_OK, EXIT_LINT, EXIT_PARSE, EXIT_IO = 0, 1, 2, 3

_COLORS = {Severity.ERROR: "\033[31m", Severity.WARNING: "\033[33m", Severity.NOTE: "\033[36m"}


class CliError(Exception):
    def __init__(self, message: str, code: int) -> None:
        super().__init__(message)
        self.code = code


def _read_bytes(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror or exc}", EXIT_IO) from None


def _emit_json(data) -> None:
    print(json.dumps(data, indent=2, ensure_ascii=False))


def _render(diag: Diagnostic, filename: str, color: bool) -> str:
    line = diag.render(filename)
    if color:
        return f"{_COLORS[diag.severity]}{line}\033[0m"
    return line


def _use_color(args) -> bool:
    return not args.no_color and sys.stdout.isatty() and "NO_COLOR" not in os.environ


def _parse_file(path: str):
    return parse_prompt(_read_bytes(path))


def cmd_parse(args) -> int:
    result = _parse_file(args.file)
    if args.json:
        _emit_json(serialize.parse_result_to_dict(result))
    else:
        color = _use_color(args)
        for d in result.diagnostics:
            print(_render(d, args.file, color))
        if result.spec is not None:
            for block in result.spec.blocks:
                extra = f" ({len(block.items)} items)" if block.kind.is_constraint else ""
                print(f"{block.kind.token}{extra}: line {block.span.start_line}")
            print(f"chars: {result.spec.char_count}")
    return EXIT_OK if result.ok else EXIT_PARSE


def _profile(args, spec):
    """--tier beats a ``tier`` key in the profile file, which beats inference."""
    explicit = Tier.from_name(args.tier) if args.tier else None
    profile_path = args.profile or os.environ.get("SCHEMA_PROFILE")
    if not profile_path:
        return default_profile(explicit or infer_tier(spec))
    try:
        return load_profile(profile_path, explicit, infer_tier(spec))
    except OSError as exc:
        raise CliError(f"cannot read profile {profile_path}: {exc.strerror or exc}", EXIT_IO) from None
    except ValueError as exc:
        raise CliError(f"invalid profile {profile_path}: {exc}", EXIT_PARSE) from None


def _lint_one(args, path: str) -> tuple[str, dict | None, list[Diagnostic], int]:
    try:
        result = _parse_file(path)
    except CliError as exc:
        return path, None, [], exc.code
    if result.spec is None:
        return path, None, result.diagnostics, EXIT_PARSE
    spec = result.spec
    if args.references is not None or args.reference_bytes is not None:
        changes = {}
        if args.references is not None:
            changes["reference_count"] = args.references
        if args.reference_bytes is not None:
            changes["reference_max_bytes"] = args.reference_bytes
        spec = spec.with_features(**changes)
    profile = _profile(args, spec)
    diags = result.diagnostics + lint(spec, profile)
    code = EXIT_LINT if any(d.is_error for d in diags) else EXIT_OK
    return path, {"tier": profile.tier.name}, diags, code


def cmd_lint(args) -> int:
    with ThreadPoolExecutor(max_workers=min(8, len(args.files))) as pool:
        results = list(pool.map(lambda p: _lint_one(args, p), args.files))
    color = _use_color(args)
    worst = EXIT_OK
    documents = []
    for path, meta, diags, code in results:
        worst = max(worst, code)
        if args.json:
            documents.append(
                {
                    "file": path,
                    "tier": meta["tier"] if meta else None,
                    "exit": code,
                    "diagnostics": [serialize.diagnostic_to_dict(d) for d in diags],
                }
            )
            continue
        if code == EXIT_IO:
            print(f"{path}: cannot read file", file=sys.stderr)
        for d in diags:
            print(_render(d, path, color))
    if args.json:
        _emit_json(documents[0] if len(documents) == 1 else documents)
    return worst


def cmd_compile(args) -> int:
    result = _parse_file(args.file)
    if result.spec is None:
        for d in result.diagnostics:
            print(d.render(args.file), file=sys.stderr)
        return EXIT_PARSE
    order = OrderPolicy(args.order)
    text = emit_canonical(result.spec, EmitOptions(order, args.width))
    payload = json.dumps({"prompt": text, "chars": len(text)}, ensure_ascii=False, indent=2) if args.json else text
    if args.output:
        try:
            Path(args.output).write_text(payload + "\n", encoding="utf-8")
        except OSError as exc:
            raise CliError(f"cannot write {args.output}: {exc.strerror or exc}", EXIT_IO) from None
    else:
        print(payload)
    return EXIT_OK


_TRUE = {"1", "true", "yes", "y", "t"}
_FALSE = {"0", "false", "no", "n", "f"}


def _bool(value: str) -> bool:
    v = value.strip().lower()
    if v in _TRUE:
        return True
    if v in _FALSE:
        return False
    raise ValueError(f"expected a boolean, got {value!r}")


def _answer_fields() -> dict[str, str]:
    # q1 -> q1_localized_inpainting, ...
    return {key.split("_", 1)[0]: key for key, _ in RouterConfig().questions}


def parse_answers(text: str, generation: int | None) -> DecisionAnswers:
    """Parse ``q1=false,q2=true,...``; long field names are accepted too."""
    fields = _answer_fields()
    values = {}
    for part in filter(None, (p.strip() for p in (text or "").split(","))):
        key, sep, raw = part.partition("=")
        key = key.strip()
        if not sep:
            raise ValueError(f"expected key=value, got {part!r}")
        name = fields.get(key, key)
        if name not in fields.values():
            raise ValueError(f"unknown question {key!r}")
        values[name] = int(raw) if name == "q3_generation_index" else _bool(raw)
    if generation is not None:
        values["q3_generation_index"] = generation
    return DecisionAnswers(**values)


def _route_payload(outcome, generation: int) -> dict:
    data = outcome.to_dict()
    cls = drift_class(generation)
    data["drift"] = {"generation": generation, "class": cls.name, "advisories": drift_advisories(cls)}
    return data


def _interactive(config: RouterConfig, ask=None):
    ask = ask or input
    interview = Interview(config)
    while True:
        pending = interview.pending()
        key, text = pending
        while True:
            raw = ask(f"{text} ")
            try:
                value = int(raw) if key == "q3_generation_index" else _bool(raw)
                outcome = interview.answer(key, value)
                break
            except ValueError as exc:
                print(f"  {exc}", file=sys.stderr)
        if outcome is not None:
            return outcome, interview.answers.get("q3_generation_index", 1)


def cmd_route(args) -> int:
    config = RouterConfig(motion_exit=not args.strict)
    try:
        if args.interactive:
            outcome, generation = _interactive(config)
        else:
            answers = parse_answers(args.answers, args.generation)
            outcome, generation = route(answers, config), answers.q3_generation_index
    except (ValueError, TypeError) as exc:
        raise CliError(f"invalid answers: {exc}", EXIT_PARSE) from None
    except EOFError:
        raise CliError("interactive input ended early", EXIT_PARSE) from None
    payload = _route_payload(outcome, generation)
    if args.json:
        _emit_json(payload)
    else:
        print(outcome.verdict())
        print(f"  {outcome.rationale}")
        drift = payload["drift"]
        if drift["advisories"]:
            print(f"  drift: {drift['class']} ({'; '.join(drift['advisories'])})")
    return EXIT_OK


def _load(reader, path: str):
    try:
        return reader(path)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror or exc}", EXIT_IO) from None
    except (ValueError, UnicodeDecodeError) as exc:
        raise CliError(f"{path}: {exc}", EXIT_PARSE) from None


def _fmt_rate(rate) -> str:
    return "-" if rate is None else f"{rate}%"


def cmd_corpus_stats(args) -> int:
    try:
        m = analytics.Multipliers.parse(args.multipliers or "")
    except ValueError as exc:
        raise CliError(f"invalid multipliers: {exc}", EXIT_PARSE) from None
    records = _load(analytics.read_ledger, args.ledger)
    stats, totals = analytics.aggregate(records, m)
    if args.json:
        _emit_json({"domains": [s.to_dict() for s in stats], "totals": totals.to_dict()})
        return EXIT_OK
    print(f"{'domain':<12} {'prompts':>8} {'exec':>10} {'mand':>6} {'prohib':>7} {'asym':>5} {'routed':>6}")
    for s in stats:
        asym = "-" if s.asymmetry is None else f"{s.asymmetry:+d}"
        print(
            f"{s.domain.value:<12} {s.prompt_count:>8g} {s.execution_estimate:>10g} "
            f"{_fmt_rate(s.mandatory_rate):>6} {_fmt_rate(s.prohibitions_rate):>7} {asym:>5} {s.routed_count:>6}"
        )
    print(
        f"{'Total':<12} {totals.prompt_count:>8g} {totals.execution_estimate:>10g} "
        f"{_fmt_rate(totals.weighted_mandatory):>6} {_fmt_rate(totals.weighted_prohibitions):>7} "
        f"{'':>5} {totals.routed_count:>6}"
    )
    print("weighted rates cover the five original domains; executions by source: "
          + ", ".join(f"{k}={v:g}" for k, v in totals.executions_by_source.items())
          + f" (sum {sum(totals.executions_by_source.values()):g})")
    return EXIT_OK


def cmd_corpus_failures(args) -> int:
    records = [r for r in _load(analytics.read_ledger, args.ledger) if r.domain is analytics.Domain.InfoDesign]
    breakdown = analytics.infodesign_failure_breakdown(records)
    if args.json:
        _emit_json({"records": len(records), **breakdown})
    else:
        print(f"InfoDesign records: {len(records)}")
        for key, value in breakdown.items():
            print(f"  {key}: {value:g}")
    return EXIT_OK


def cmd_consistency(args) -> int:
    verdicts = _load(analytics.read_verdicts, args.verdicts)
    report = analytics.consistency_report(verdicts)
    if args.json:
        _emit_json(report.to_dict())
        return EXIT_OK
    for v, score, diff, within in report.batches:
        flag = "" if within else "  (raters disagree by more than 1)"
        print(f"{v.batch_id:<20} {v.condition.value:<12} {score:>4.1f}/{v.batch_size}{flag}")
    for domain, row in report.domain_means.items():
        parts = [f"{k}={v:.2f}" if k != "gap" else f"gap={v:+.2f}" for k, v in row.items()]
        print(f"{domain:<12} " + " ".join(parts))
    print(f"overall gap: {report.gap:+.2f}")
    return EXIT_OK


def cmd_init(args) -> int:
    text = render_template(args.domain, Tier.from_name(args.tier))
    if args.json:
        _emit_json({"prompt": text, "chars": len(text)})
    else:
        print(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="emit one JSON document")
    common.add_argument("--no-color", action="store_true", default=argparse.SUPPRESS, help="disable ANSI colors")

    parser = argparse.ArgumentParser(prog="schema", description="SCHEMA prompt compiler, linter and analytics")
    parser.add_argument("--json", action="store_true", help="emit one JSON document")
    parser.add_argument("--no-color", action="store_true", help="disable ANSI colors")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", parents=[common], help="parse a prompt and show its blocks")
    p.add_argument("file")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("lint", parents=[common], help="lint prompts against a tier profile")
    p.add_argument("files", nargs="+", metavar="file")
    p.add_argument("--tier", choices=[t.name for t in Tier], type=str.upper)
    p.add_argument("--profile", help="key/value profile file (default: $SCHEMA_PROFILE)")
    p.add_argument("--references", type=int, help="number of reference images attached")
    p.add_argument("--reference-bytes", type=int, help="size in bytes of the largest reference image")
    p.set_defaults(func=cmd_lint)

    p = sub.add_parser("compile", parents=[common], help="emit canonical prompt text")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.add_argument("--order", choices=[o.value for o in OrderPolicy], default=OrderPolicy.CANONICAL.value)
    p.add_argument("--width", type=int, help="wrap long lines at this width")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("route", parents=[common], help="walk the routing decision tree")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--interactive", action="store_true")
    mode.add_argument("--answers", default="", help="q1=false,q2=false,...")
    p.add_argument("--generation", type=int, help="generation index of the next attempt (q3)")
    p.add_argument("--strict", action="store_true", help="disable the motion exit (three exits only)")
    p.set_defaults(func=cmd_route)

    p = sub.add_parser("corpus", help="corpus ledger analytics")
    corpus = p.add_subparsers(dest="corpus_command", required=True)
    c = corpus.add_parser("stats", parents=[common], help="per-domain counts, executions and compliance")
    c.add_argument("ledger")
    c.add_argument("--multipliers", help="variant=0.5,batch=10,micro=1.5")
    c.set_defaults(func=cmd_corpus_stats)
    c = corpus.add_parser("failures", parents=[common], help="Information Design failure breakdown")
    c.add_argument("ledger")
    c.set_defaults(func=cmd_corpus_failures)

    p = sub.add_parser("consistency", parents=[common], help="batch consistency scores and gap")
    p.add_argument("verdicts")
    p.set_defaults(func=cmd_consistency)

    p = sub.add_parser("init", parents=[common], help="print a skeleton prompt")
    p.add_argument("--domain", required=True, help=", ".join(d.value for d in analytics.Domain))
    p.add_argument("--tier", required=True, choices=[t.name for t in Tier], type=str.upper)
    p.set_defaults(func=cmd_init)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"schema: {exc}", file=sys.stderr)
        return exc.code
    except SchemaError as exc:
        print(f"schema: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
