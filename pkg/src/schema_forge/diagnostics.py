"""Diagnostics shared by the parser, linter and router, plus the rule catalog."""
from __future__ import annotations

import enum
from dataclasses import dataclass

from schema_forge.model import SourceSpan


class Severity(enum.IntEnum):
    NOTE = 0
    WARNING = 1
    ERROR = 2


# rule code -> (severity, one-line summary).  docs/rules/README.md mirrors this table.
RULES: dict[str, tuple[Severity, str]] = {
    "E-PARSE-DUP": (Severity.ERROR, "a built-in label appears more than once"),
    "E-PARSE-EMPTY": (Severity.ERROR, "a label header has an empty body"),
    "E-PARSE-UTF8": (Severity.ERROR, "input is not valid UTF-8"),
    "N-PARSE-FREEFORM": (Severity.NOTE, "no label headers found; text parsed as one freeform block"),
    "W-PARSE-CUSTOM": (Severity.WARNING, "unknown label header parsed as a Custom block"),
    "W-PARSE-PREAMBLE": (Severity.WARNING, "text before the first label header kept as a freeform block"),
    "E-EMIT-EMPTY": (Severity.ERROR, "cannot emit a spec with zero blocks"),
    "E-MISSING-LABEL": (Severity.ERROR, "a label required by the tier profile is absent"),
    "W-MISSING-BACKGROUND": (Severity.WARNING, "Background is absent at MEDIO"),
    "E-ITEM-COUNT": (Severity.ERROR, "Mandatory/Prohibitions item count outside the profile bounds"),
    "E-KELVIN-MISSING": (Severity.ERROR, "Lighting carries no numeric Kelvin temperature"),
    "W-EVALUATIVE": (Severity.WARNING, "evaluative word inside a Mandatory/Prohibitions item"),
    "W-CHAR-BAND": (Severity.WARNING, "canonical prompt longer than the profile character band"),
    "N-CHAR-BAND-LOW": (Severity.NOTE, "canonical prompt shorter than the profile character band"),
    "W-REF-COUNT": (Severity.WARNING, "more than 3 reference images"),
    "E-REF-LIMIT": (Severity.ERROR, "more than 14 reference images"),
    "W-REF-SIZE": (Severity.WARNING, "reference image approaching 7MB will be compressed"),
    "W-GROUNDING-AESTHETIC": (Severity.WARNING, "Grounding enabled without factual content to ground"),
    "N-OUTPUT-POSITION": (Severity.NOTE, "Output block is not the last block"),
    "N-NEGATE": (Severity.NOTE, "positive Mandatory item could be reformulated as a prohibition"),
    "E-ITER-RANGE": (Severity.ERROR, "iteration index below 1"),
}

PARSE_RULES = frozenset({"E-PARSE-DUP", "E-PARSE-EMPTY", "E-PARSE-UTF8"})


@dataclass(frozen=True)
class Diagnostic:
    rule: str
    severity: Severity
    message: str
    span: SourceSpan | None = None
    suggestion: str | None = None

    @classmethod
    def make(
        cls,
        rule: str,
        message: str,
        span: SourceSpan | None = None,
        suggestion: str | None = None,
    ) -> "Diagnostic":
        """Build a diagnostic with the catalog severity for ``rule``."""
        severity, _ = RULES[rule]
        return cls(rule, severity, message, span, suggestion)

    @property
    def is_error(self) -> bool:
        return self.severity is Severity.ERROR

    def sort_key(self) -> tuple:
        span_key = self.span.key if self.span is not None else (0, 0, 0, 0)
        return (span_key, self.rule)

    def render(self, filename: str = "<input>") -> str:
        line, col = (self.span.start_line, self.span.start_col) if self.span else (1, 1)
        text = f"{filename}:{line}:{col}: {self.severity.name}[{self.rule}] {self.message}"
        if self.suggestion:
            text += f" (suggestion: {self.suggestion})"
        return text


def sort_diagnostics(diagnostics: list[Diagnostic]) -> list[Diagnostic]:
    return sorted(diagnostics, key=Diagnostic.sort_key)


class SchemaError(Exception):
    """Raised by operations whose contract includes a coded error."""

    def __init__(self, rule: str, message: str) -> None:
        super().__init__(f"{rule}: {message}")
        self.rule = rule
        self.message = message
