"""Parser for the ``Label: content`` SCHEMA prompt format.

A header is a single identifier at column 1 followed by a colon.  Known
label names are matched case-insensitively; anything else becomes a
Custom block.  Lines up to the next header are the block body and are
joined with single spaces.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from schema_forge.diagnostics import PARSE_RULES, Diagnostic, sort_diagnostics
from schema_forge.emitter import make_spec
from schema_forge.model import (
    FREEFORM,
    ConstraintItem,
    FeatureFlags,
    LabelBlock,
    LabelKind,
    PromptSpec,
    SourceSpan,
)

_HEADER = re.compile(r"([A-Za-z][A-Za-z0-9_-]*)[ \t]*:(?!//)(.*)\Z")
_SENTENCE_END = re.compile(r"\.(?=\s|\Z)")
_IMAGE_REF = re.compile(r"\bimage\s*(\d+)\b", re.IGNORECASE)
_DISABLED = re.compile(r"\s*(?:disable[d]?|off|no|none|false)\b", re.IGNORECASE)


@dataclass(frozen=True)
class ParseResult:
    spec: PromptSpec | None
    diagnostics: list[Diagnostic] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.spec is not None


@dataclass
class _RawBlock:
    kind: LabelKind
    header_line: int
    lines: list[tuple[int, str]]

    @property
    def body(self) -> str:
        return " ".join(text.strip() for _, text in self.lines if text.strip())

    def span(self) -> SourceSpan:
        filled = [(n, t) for n, t in self.lines if t.strip()]
        if not filled:
            return SourceSpan(self.header_line, 1, self.header_line, 1)
        last_line, last_text = filled[-1]
        return SourceSpan(self.header_line, 1, last_line, max(1, len(last_text.rstrip())))


def split_items(block_text: str) -> list[ConstraintItem]:
    """Split a Mandatory/Prohibitions body into atomic constraint items.

    Sentences (a period followed by whitespace or the end) are split first.
    A sentence with no remaining period is then split on commas, but only
    when every comma part has at least two words, so adjective lists such as
    ``warm, grey fabric`` stay whole.
    """
    items: list[ConstraintItem] = []
    for sentence in _SENTENCE_END.split(block_text):
        sentence = sentence.strip()
        if not sentence:
            continue
        parts = [sentence]
        if "." not in sentence and "," in sentence:
            pieces = [p.strip() for p in sentence.split(",")]
            pieces = [p for p in pieces if p]
            if len(pieces) > 1 and all(len(p.split()) >= 2 for p in pieces):
                parts = pieces
        items.extend(ConstraintItem.from_text(p) for p in parts if p.strip())
    return items


def _features(blocks: list[LabelBlock]) -> FeatureFlags:
    by_name = {b.kind.name: b for b in blocks if not b.kind.custom}
    thinking = "Thinking" in by_name and not _DISABLED.match(by_name["Thinking"].raw_text)
    grounding = "Grounding" in by_name and not _DISABLED.match(by_name["Grounding"].raw_text)
    references = 0
    if "Reference" in by_name:
        numbers = set(_IMAGE_REF.findall(by_name["Reference"].raw_text))
        references = max(1, len(numbers))
    return FeatureFlags(thinking=thinking, grounding=grounding, reference_count=references)


def _split_lines(source: str) -> list[str]:
    return source.replace("\r\n", "\n").replace("\r", "\n").split("\n")


def parse_prompt(source: str | bytes) -> ParseResult:
    """Parse SCHEMA prompt text into a ``PromptSpec``.

    ``bytes`` input is decoded as UTF-8; undecodable input yields an
    E-PARSE-UTF8 error.  Text without any header becomes one freeform block.
    """
    if isinstance(source, (bytes, bytearray)):
        try:
            source = bytes(source).decode("utf-8")
        except UnicodeDecodeError as exc:
            return ParseResult(None, [Diagnostic.make("E-PARSE-UTF8", f"invalid UTF-8 at byte {exc.start}")])
    if source.startswith("\ufeff"):
        source = source[1:]

    lines = _split_lines(source)
    diagnostics: list[Diagnostic] = []
    raw_blocks: list[_RawBlock] = []
    preamble: list[tuple[int, str]] = []

    for lineno, line in enumerate(lines, start=1):
        m = _HEADER.match(line)
        if m:
            kind = LabelKind.lookup(m.group(1))
            raw_blocks.append(_RawBlock(kind, lineno, [(lineno, m.group(2))]))
        elif raw_blocks:
            raw_blocks[-1].lines.append((lineno, line))
        else:
            preamble.append((lineno, line))

    if not raw_blocks:
        text = "\n".join(lines).strip()
        if not text:
            return ParseResult(None, [Diagnostic.make("E-PARSE-EMPTY", "document is empty")])
        filled = [(n, t) for n, t in preamble if t.strip()]
        span = SourceSpan(filled[0][0], 1, filled[-1][0], max(1, len(filled[-1][1].rstrip())))
        block = LabelBlock(FREEFORM, text, (), span)
        note = Diagnostic.make("N-PARSE-FREEFORM", "no label headers found; treating text as freeform", span)
        return ParseResult(make_spec([block]), [note])

    if any(t.strip() for _, t in preamble):
        raw_blocks.insert(0, _RawBlock(FREEFORM, preamble[0][0], preamble))
        first = next(n for n, t in preamble if t.strip())
        diagnostics.append(
            Diagnostic.make(
                "W-PARSE-PREAMBLE",
                "text before the first label header kept as a freeform block",
                SourceSpan(first, 1, first, 1),
            )
        )

    blocks: list[LabelBlock] = []
    seen: dict[LabelKind, int] = {}
    for raw in raw_blocks:
        span = raw.span()
        if raw.kind in seen and not raw.kind.custom:
            diagnostics.append(
                Diagnostic.make(
                    "E-PARSE-DUP",
                    f"duplicate label {raw.kind.name!r} (first defined on line {seen[raw.kind]})",
                    span,
                )
            )
            continue
        seen.setdefault(raw.kind, raw.header_line)
        body = raw.body
        if not body:
            diagnostics.append(Diagnostic.make("E-PARSE-EMPTY", f"label {raw.kind.name!r} has an empty body", span))
            continue
        if raw.kind.custom and raw.kind != FREEFORM:
            diagnostics.append(
                Diagnostic.make("W-PARSE-CUSTOM", f"unknown label {raw.kind.name!r} parsed as a Custom block", span)
            )
        items = tuple(split_items(body)) if raw.kind.is_constraint else ()
        blocks.append(LabelBlock(raw.kind, body, items, span))

    diagnostics = sort_diagnostics(diagnostics)
    if any(d.is_error and d.rule in PARSE_RULES for d in diagnostics):
        return ParseResult(None, diagnostics)
    return ParseResult(make_spec(blocks, None, _features(blocks)), diagnostics)
