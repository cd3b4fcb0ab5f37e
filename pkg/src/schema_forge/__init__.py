"""schema-forge: compiler, linter and analytics for SCHEMA structured prompts."""
from schema_forge.diagnostics import Diagnostic, SchemaError, Severity
from schema_forge.emitter import EmitOptions, OrderPolicy, canonicalize, char_budget, emit_canonical
from schema_forge.linter import LintProfile, default_profile, infer_tier, lint, suggest_negations
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
    detect_markers,
    polarity_of,
)
from schema_forge.parser import ParseResult, parse_prompt, split_items
from schema_forge.router import DecisionAnswers, DriftClass, RoutingOutcome, drift_class, reference_advice, route

__version__ = "0.1.0"

__all__ = [
    "ConstraintItem", "DecisionAnswers", "Diagnostic", "DriftClass", "EmitOptions", "FeatureFlags",
    "LabelBlock", "LabelKind", "LintProfile", "Marker", "OrderPolicy", "ParseResult", "Polarity",
    "PromptSpec", "RoutingOutcome", "SchemaError", "Severity", "SourceSpan", "Tier", "canonicalize",
    "char_budget", "default_profile", "detect_markers", "drift_class", "emit_canonical", "infer_tier",
    "lint", "parse_prompt", "polarity_of", "reference_advice", "route", "split_items", "suggest_negations",
]
