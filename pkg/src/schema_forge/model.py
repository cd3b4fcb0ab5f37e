"""Typed domain model for SCHEMA prompts.

Everything here is an immutable value: tiers, label kinds, label blocks,
constraint items and the parsed ``PromptSpec``.  The two lexical helpers
``detect_markers`` and ``polarity_of`` classify a single constraint item
and are used by the parser and the linter alike.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field, replace


class Tier(enum.IntEnum):
    """Prompt complexity level, ordered BASE < MEDIO < AVANZATO."""

    BASE = 0
    MEDIO = 1
    AVANZATO = 2

    @classmethod
    def from_name(cls, name: str) -> "Tier":
        try:
            return cls[name.strip().upper()]
        except KeyError:
            raise ValueError(f"unknown tier {name!r} (expected BASE, MEDIO or AVANZATO)") from None


CORE_LABELS = (
    "Subject",
    "Style",
    "Lighting",
    "Background",
    "Composition",
    "Mandatory",
    "Prohibitions",
)
OPTIONAL_LABELS = ("Reference", "Thinking", "Grounding", "Output")
BUILTIN_LABELS = CORE_LABELS + OPTIONAL_LABELS
CONSTRAINT_LABELS = ("Mandatory", "Prohibitions")

_BUILTIN_BY_LOWER = {name.lower(): name for name in BUILTIN_LABELS}
_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_-]*\Z")


@dataclass(frozen=True, order=True)
class LabelKind:
    """A label name, either one of the eleven built-ins or a Custom name."""

    name: str
    custom: bool = False

    def __post_init__(self) -> None:
        if self.custom:
            if not _IDENT.match(self.name):
                raise ValueError(f"custom label name must be a short identifier, got {self.name!r}")
            if self.name.lower() in _BUILTIN_BY_LOWER:
                raise ValueError(f"custom label {self.name!r} collides with a built-in label")
        elif self.name not in BUILTIN_LABELS:
            raise ValueError(f"unknown built-in label {self.name!r}")

    @classmethod
    def lookup(cls, name: str) -> "LabelKind":
        """Resolve a header name case-insensitively; unknown names become Custom."""
        builtin = _BUILTIN_BY_LOWER.get(name.lower())
        if builtin is not None:
            return cls(builtin)
        return cls(name, custom=True)

    @classmethod
    def from_token(cls, token: str) -> "LabelKind":
        """Inverse of ``token`` (``"Style"`` or ``"Custom:name"``)."""
        if token.startswith("Custom:"):
            return cls(token[len("Custom:"):], custom=True)
        return cls(token)

    @property
    def token(self) -> str:
        return f"Custom:{self.name}" if self.custom else self.name

    @property
    def is_core(self) -> bool:
        return not self.custom and self.name in CORE_LABELS

    @property
    def is_optional(self) -> bool:
        return not self.custom and self.name in OPTIONAL_LABELS

    @property
    def is_constraint(self) -> bool:
        return not self.custom and self.name in CONSTRAINT_LABELS

    def __str__(self) -> str:
        return self.name


FREEFORM = LabelKind("freeform", custom=True)


class Polarity(enum.Enum):
    POSITIVE = "POSITIVE"
    NEGATIVE = "NEGATIVE"


class Marker(enum.Enum):
    KELVIN = "KELVIN"
    HEX = "HEX"
    RATIO = "RATIO"
    FOCAL_LENGTH = "FOCAL_LENGTH"
    ASPECT_RATIO = "ASPECT_RATIO"
    RESOLUTION = "RESOLUTION"
    PERCENT = "PERCENT"
    NONE = "NONE"


# Three or more digits keeps "4K"/"8K" (resolutions) out of KELVIN.
_KELVIN = re.compile(r"(?<![\w.])\d{3,5}K\b")
_HEX = re.compile(r"#[0-9A-Fa-f]{6}(?![0-9A-Za-z])")
_RATIO = re.compile(r"(?<![\w:])\d+:\d+(?![\w:])")
_FOCAL = re.compile(r"(?<![\w.])\d+(?:\.\d+)?(?:\s*(?:-{1,2}|\u2013|\u2014)\s*\d+(?:\.\d+)?)?\s*mm\b")
_RESOLUTION = re.compile(r"(?<![\w.])(?:[48]K|\d+px)\b")
_PERCENT = re.compile(r"(?<![\w.])\d+(?:\.\d+)?\s?%")
_ASPECT_CONTEXT = re.compile(
    r"\b(?:aspect|format|vertical|horizontal|portrait|landscape|square)\b", re.IGNORECASE
)

NEGATION_TOKENS = frozenset({"no", "not", "never", "without"})
_FIRST_WORD = re.compile(r"[^\w]*(\w+)")


def detect_markers(item_text: str) -> frozenset[Marker]:
    """Return the measurable-specificity markers found in ``item_text``.

    ``{Marker.NONE}`` is returned when no other marker matches.
    """
    found: set[Marker] = set()
    if _KELVIN.search(item_text):
        found.add(Marker.KELVIN)
    if _HEX.search(item_text):
        found.add(Marker.HEX)
    if _RATIO.search(item_text):
        found.add(Marker.RATIO)
        if _ASPECT_CONTEXT.search(item_text):
            found.add(Marker.ASPECT_RATIO)
    if _FOCAL.search(item_text):
        found.add(Marker.FOCAL_LENGTH)
    if _RESOLUTION.search(item_text):
        found.add(Marker.RESOLUTION)
    if _PERCENT.search(item_text):
        found.add(Marker.PERCENT)
    return frozenset(found) if found else frozenset({Marker.NONE})


def polarity_of(item_text: str) -> Polarity:
    """NEGATIVE iff the first word is a negation token (no/not/never/without)."""
    m = _FIRST_WORD.match(item_text.strip())
    if m and m.group(1).lower() in NEGATION_TOKENS:
        return Polarity.NEGATIVE
    return Polarity.POSITIVE


def kelvin_values(text: str) -> list[int]:
    """All Kelvin temperatures written in ``text`` (e.g. ``3000K`` -> 3000)."""
    return [int(m.group(0)[:-1]) for m in _KELVIN.finditer(text)]


@dataclass(frozen=True)
class SourceSpan:
    start_line: int
    start_col: int
    end_line: int
    end_col: int

    def __post_init__(self) -> None:
        if min(self.start_line, self.start_col, self.end_line, self.end_col) < 1:
            raise ValueError("span coordinates are 1-based")
        if (self.start_line, self.start_col) > (self.end_line, self.end_col):
            raise ValueError(f"span start after end: {self}")

    @property
    def key(self) -> tuple[int, int, int, int]:
        return (self.start_line, self.start_col, self.end_line, self.end_col)


@dataclass(frozen=True)
class ConstraintItem:
    text: str
    polarity: Polarity
    measurable_markers: frozenset[Marker]

    @classmethod
    def from_text(cls, text: str) -> "ConstraintItem":
        text = text.strip()
        if not text:
            raise ValueError("constraint item text is empty")
        return cls(text, polarity_of(text), detect_markers(text))

    @property
    def is_measurable(self) -> bool:
        return Marker.NONE not in self.measurable_markers


@dataclass(frozen=True)
class LabelBlock:
    kind: LabelKind
    raw_text: str
    items: tuple[ConstraintItem, ...] = ()
    span: SourceSpan | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if not self.raw_text.strip():
            raise ValueError(f"{self.kind} block has empty text")
        if self.items and not self.kind.is_constraint:
            raise ValueError(f"{self.kind} block cannot carry constraint items")


MAX_REFERENCES = 14


@dataclass(frozen=True)
class FeatureFlags:
    thinking: bool = False
    grounding: bool = False
    reference_count: int = 0
    reference_max_bytes: int | None = None

    def __post_init__(self) -> None:
        if self.reference_count < 0:
            raise ValueError("reference_count must be non-negative")
        if self.reference_max_bytes is not None and self.reference_max_bytes < 0:
            raise ValueError("reference_max_bytes must be non-negative")

    @property
    def within_reference_limit(self) -> bool:
        # The model hard limit; lint reports violations rather than refusing to build.
        return self.reference_count <= MAX_REFERENCES


@dataclass(frozen=True)
class PromptSpec:
    """One parsed SCHEMA prompt.

    ``char_count`` is the length of the canonical emission; build specs
    through :func:`schema_forge.emitter.make_spec` to keep it in sync.
    """

    blocks: tuple[LabelBlock, ...]
    declared_tier: Tier | None = None
    features: FeatureFlags = FeatureFlags()
    char_count: int = 0

    def __post_init__(self) -> None:
        seen: set[LabelKind] = set()
        for block in self.blocks:
            if block.kind.custom:
                continue
            if block.kind in seen:
                raise ValueError(f"duplicate label {block.kind}")
            seen.add(block.kind)
        if self.char_count < 0:
            raise ValueError("char_count must be non-negative")

    def block(self, name: str) -> LabelBlock | None:
        kind = LabelKind.lookup(name)
        for b in self.blocks:
            if b.kind == kind:
                return b
        return None

    def has(self, name: str) -> bool:
        return self.block(name) is not None

    @property
    def kinds(self) -> list[LabelKind]:
        return [b.kind for b in self.blocks]

    @property
    def core_labels(self) -> set[str]:
        return {b.kind.name for b in self.blocks if b.kind.is_core}

    @property
    def optional_labels(self) -> set[str]:
        return {b.kind.name for b in self.blocks if b.kind.is_optional}

    @property
    def is_freeform(self) -> bool:
        return not any(b.kind.is_core or b.kind.is_optional for b in self.blocks)

    def with_features(self, **changes) -> "PromptSpec":
        return replace(self, features=replace(self.features, **changes))
