"""JSON-ready dicts for parse results; keys mirror the dataclass field names."""
from __future__ import annotations

from schema_forge.diagnostics import Diagnostic, Severity
from schema_forge.model import (
    ConstraintItem,
    FeatureFlags,
    LabelBlock,
    LabelKind,
    Marker,
    Polarity,
    PromptSpec,
    SourceSpan,
    Tier,
)
from schema_forge.parser import ParseResult

_MARKER_ORDER = list(Marker)


def span_to_dict(span: SourceSpan | None) -> dict | None:
    if span is None:
        return None
    return {
        "start_line": span.start_line,
        "start_col": span.start_col,
        "end_line": span.end_line,
        "end_col": span.end_col,
    }


def span_from_dict(data: dict | None) -> SourceSpan | None:
    return None if data is None else SourceSpan(**data)


def item_to_dict(item: ConstraintItem) -> dict:
    return {
        "text": item.text,
        "polarity": item.polarity.value,
        "measurable_markers": [m.value for m in sorted(item.measurable_markers, key=_MARKER_ORDER.index)],
    }


def item_from_dict(data: dict) -> ConstraintItem:
    return ConstraintItem(
        data["text"],
        Polarity(data["polarity"]),
        frozenset(Marker(m) for m in data["measurable_markers"]),
    )


def block_to_dict(block: LabelBlock) -> dict:
    return {
        "kind": block.kind.token,
        "raw_text": block.raw_text,
        "items": [item_to_dict(i) for i in block.items],
        "span": span_to_dict(block.span),
    }


def block_from_dict(data: dict) -> LabelBlock:
    return LabelBlock(
        LabelKind.from_token(data["kind"]),
        data["raw_text"],
        tuple(item_from_dict(i) for i in data["items"]),
        span_from_dict(data.get("span")),
    )


def spec_to_dict(spec: PromptSpec) -> dict:
    f = spec.features
    return {
        "blocks": [block_to_dict(b) for b in spec.blocks],
        "declared_tier": spec.declared_tier.name if spec.declared_tier is not None else None,
        "features": {
            "thinking": f.thinking,
            "grounding": f.grounding,
            "reference_count": f.reference_count,
            "reference_max_bytes": f.reference_max_bytes,
        },
        "char_count": spec.char_count,
    }


def spec_from_dict(data: dict) -> PromptSpec:
    tier = data.get("declared_tier")
    return PromptSpec(
        tuple(block_from_dict(b) for b in data["blocks"]),
        Tier[tier] if tier else None,
        FeatureFlags(**data["features"]),
        data["char_count"],
    )


def diagnostic_to_dict(d: Diagnostic) -> dict:
    return {
        "rule": d.rule,
        "severity": d.severity.name,
        "message": d.message,
        "span": span_to_dict(d.span),
        "suggestion": d.suggestion,
    }


def diagnostic_from_dict(data: dict) -> Diagnostic:
    return Diagnostic(
        data["rule"],
        Severity[data["severity"]],
        data["message"],
        span_from_dict(data.get("span")),
        data.get("suggestion"),
    )


def parse_result_to_dict(result: ParseResult) -> dict:
    return {
        "spec": spec_to_dict(result.spec) if result.spec is not None else None,
        "diagnostics": [diagnostic_to_dict(d) for d in result.diagnostics],
    }


def parse_result_from_dict(data: dict) -> ParseResult:
    spec = spec_from_dict(data["spec"]) if data["spec"] is not None else None
    return ParseResult(spec, [diagnostic_from_dict(d) for d in data["diagnostics"]])
