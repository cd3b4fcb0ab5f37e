"""Tier profiles, tier inference and lint rules for parsed prompts."""
from __future__ import annotations

import configparser
import re
from dataclasses import dataclass, field, replace
from pathlib import Path

from schema_forge.diagnostics import Diagnostic, sort_diagnostics
from schema_forge.emitter import BudgetVerdict, char_budget
from schema_forge.model import (
    CORE_LABELS,
    ConstraintItem,
    Marker,
    Polarity,
    PromptSpec,
    Tier,
)
from schema_forge.router import reference_advice

DEFAULT_BANNED_LEXICON = frozenset(
    {"beautiful", "nice", "stunning", "amazing", "gorgeous", "great", "perfect-looking"}
)

# Informational only: these have no computable definition.
DOC_CONSTANTS = {
    Tier.BASE: {"control_pct": "~5%", "creativity_pct": "~95%", "time_hint": "< 1 minute"},
    Tier.MEDIO: {"control_pct": "~85%", "creativity_pct": "~15%", "time_hint": "~5 minutes"},
    Tier.AVANZATO: {"control_pct": "95-98%", "creativity_pct": "<=5%", "time_hint": "> 15 minutes"},
}


@dataclass(frozen=True)
class LintProfile:
    tier: Tier
    required_labels: frozenset[str] = frozenset()
    item_min: int = 3
    item_max: int = 10
    char_band: tuple[int, int] | None = None
    banned_lexicon: frozenset[str] = DEFAULT_BANNED_LEXICON
    kelvin_required_in_lighting: bool = False
    doc_constants: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self) -> None:
        if not 0 <= self.item_min <= self.item_max:
            raise ValueError(f"item bounds invalid: [{self.item_min}, {self.item_max}]")
        if self.char_band is not None and not self.char_band[0] < self.char_band[1]:
            raise ValueError(f"char_band min must be below max: {self.char_band}")


def default_profile(tier: Tier) -> LintProfile:
    if tier is Tier.BASE:
        return LintProfile(Tier.BASE, doc_constants=DOC_CONSTANTS[Tier.BASE])
    if tier is Tier.MEDIO:
        return LintProfile(
            Tier.MEDIO,
            required_labels=frozenset(CORE_LABELS),
            char_band=(1200, 1800),
            doc_constants=DOC_CONSTANTS[Tier.MEDIO],
        )
    return LintProfile(
        Tier.AVANZATO,
        required_labels=frozenset(CORE_LABELS),
        char_band=(2200, 2500),
        kelvin_required_in_lighting=True,
        doc_constants=DOC_CONSTANTS[Tier.AVANZATO],
    )


def _csv(value: str) -> list[str]:
    return [v.strip() for v in value.split(",") if v.strip()]


def parse_profile(text: str, tier: Tier | None = None, default_tier: Tier = Tier.MEDIO) -> LintProfile:
    """Read a key/value profile file on top of the default profile for its tier.

    ``tier`` wins over a ``tier`` key in the file, which wins over
    ``default_tier``.  Recognised keys:
    tier, required_labels, item_min, item_max, char_band (``min-max`` or
    ``none``), banned_lexicon, kelvin_required_in_lighting.
    """
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    if not text.lstrip().startswith("["):
        text = "[profile]\n" + text
    cp.read_string(text)
    section = cp[cp.sections()[0]] if cp.sections() else {}
    unknown = set(section) - {
        "tier",
        "required_labels",
        "item_min",
        "item_max",
        "char_band",
        "banned_lexicon",
        "kelvin_required_in_lighting",
    }
    if unknown:
        raise ValueError(f"unknown profile keys: {', '.join(sorted(unknown))}")

    if tier is None:
        tier = Tier.from_name(section["tier"]) if "tier" in section else default_tier
    profile = default_profile(tier)
    changes: dict = {}
    if "required_labels" in section:
        changes["required_labels"] = frozenset(_csv(section["required_labels"]))
    if "item_min" in section:
        changes["item_min"] = int(section["item_min"])
    if "item_max" in section:
        changes["item_max"] = int(section["item_max"])
    if "char_band" in section:
        raw = section["char_band"].strip().lower()
        if raw in ("", "none"):
            changes["char_band"] = None
        else:
            low, high = re.split(r"\s*[-,]\s*", raw)
            changes["char_band"] = (int(low), int(high))
    if "banned_lexicon" in section:
        changes["banned_lexicon"] = frozenset(w.lower() for w in _csv(section["banned_lexicon"]))
    if "kelvin_required_in_lighting" in section:
        changes["kelvin_required_in_lighting"] = section.getboolean("kelvin_required_in_lighting")
    return replace(profile, **changes)


def load_profile(path: str | Path, tier: Tier | None = None, default_tier: Tier = Tier.MEDIO) -> LintProfile:
    return parse_profile(Path(path).read_text(encoding="utf-8"), tier, default_tier)


_REFERENCE_MENTION = re.compile(r"\breference\b|\bimage\s*\d+\b", re.IGNORECASE)


def infer_tier(spec: PromptSpec) -> Tier:
    core = spec.core_labels
    if not core:
        return Tier.BASE
    if len(core) == len(CORE_LABELS):
        if spec.optional_labels:
            return Tier.AVANZATO
        lighting = [b for b in spec.blocks if b.kind.name == "Lighting" and not b.kind.custom]
        kelvin_everywhere = all(Marker.KELVIN in ConstraintItem.from_text(b.raw_text).measurable_markers for b in lighting)
        mandatory = spec.block("Mandatory")
        measurable = mandatory is not None and bool(mandatory.items) and all(
            item.is_measurable or _REFERENCE_MENTION.search(item.text) for item in mandatory.items
        )
        if kelvin_everywhere and measurable:
            return Tier.AVANZATO
        return Tier.MEDIO
    if len(core) >= 5:
        return Tier.MEDIO
    return Tier.BASE


# adjective -> failure mode it guards against
_ANTONYMS = {
    "sharp": "blurred",
    "straight": "converging",
    "accurate": "distorted",
    "realistic": "unrealistic",
    "consistent": "inconsistent",
    "clean": "cluttered",
    "visible": "hidden",
    "focused": "out-of-focus",
    "centered": "off-center",
    "symmetrical": "asymmetrical",
    "aligned": "misaligned",
    "level": "tilted",
    "legible": "illegible",
    "even": "uneven",
    "uniform": "patchy",
    "correct": "incorrect",
}
_INTENSIFIERS = frozenset(
    {"all", "every", "perfectly", "fully", "completely", "always", "very", "highly",
     "totally", "entirely", "exactly", "strictly", "clearly", "individually", "must", "be", "are", "is"}
)


def suggest_negations(items) -> list[tuple[ConstraintItem, str]]:
    """Propose prohibitions for positive adjective-enforcement items.

    Negative items and items carrying measurable markers are left alone.
    """
    out = []
    for item in items:
        if item.polarity is Polarity.NEGATIVE or item.is_measurable:
            continue
        words = item.text.rstrip(".").split()
        keys = [w.lower().strip(",;") for w in words]
        pos = next((i for i, k in enumerate(keys) if k in _ANTONYMS), None)
        if pos is None:
            continue
        rest = [w for i, w in enumerate(words) if i != pos and keys[i] not in _INTENSIFIERS]
        if not rest:
            continue
        if rest[0][:1].isupper() and rest[0][1:].islower():
            rest[0] = rest[0].lower()
        out.append((item, f"NO {_ANTONYMS[keys[pos]]} {' '.join(rest)}"))
    return out


_FACTUAL = re.compile(
    r"\b(?:data|dataset|statistics?|facts?|factual|charts?|graphs?|infographics?|news|current|"
    r"real-time|live|dates?|maps?|weather|prices?|figures|numbers|verified|search|historical|landmarks?)\b",
    re.IGNORECASE,
)


def _word_pattern(word: str) -> re.Pattern:
    return re.compile(rf"(?<![\w-]){re.escape(word)}(?![\w-])", re.IGNORECASE)


def lint(spec: PromptSpec, profile: LintProfile) -> list[Diagnostic]:
    """Check ``spec`` against ``profile``; never raises, only reports."""
    diags: list[Diagnostic] = []

    for label in sorted(profile.required_labels):
        if spec.has(label):
            continue
        if label == "Background" and profile.tier is Tier.MEDIO:
            diags.append(
                Diagnostic.make(
                    "W-MISSING-BACKGROUND",
                    "Background label is absent",
                    suggestion="add a Background line with setting, surfaces and depth of field",
                )
            )
        else:
            diags.append(Diagnostic.make("E-MISSING-LABEL", f"required label {label!r} is absent"))

    for block in spec.blocks:
        if not block.kind.is_constraint:
            continue
        n = len(block.items)
        if not profile.item_min <= n <= profile.item_max:
            diags.append(
                Diagnostic.make(
                    "E-ITEM-COUNT",
                    f"{block.kind.name} has {n} items; expected {profile.item_min}-{profile.item_max}",
                    block.span,
                )
            )
        for item in block.items:
            hits = sorted(w for w in profile.banned_lexicon if _word_pattern(w).search(item.text))
            if hits:
                diags.append(
                    Diagnostic.make(
                        "W-EVALUATIVE",
                        f"evaluative term {', '.join(repr(h) for h in hits)} in {block.kind.name} item {item.text!r}",
                        block.span,
                        suggestion="replace with a measurable value (HEX, Kelvin, ratio, focal length)",
                    )
                )

    lighting = spec.block("Lighting")
    if profile.kelvin_required_in_lighting and lighting is not None:
        if Marker.KELVIN not in ConstraintItem.from_text(lighting.raw_text).measurable_markers:
            diags.append(
                Diagnostic.make(
                    "E-KELVIN-MISSING",
                    "Lighting has no numeric Kelvin temperature",
                    lighting.span,
                    suggestion="state the color temperature, e.g. 3000K",
                )
            )

    if spec.blocks:
        count, verdict = char_budget(spec, profile)
        if verdict is BudgetVerdict.ABOVE:
            diags.append(
                Diagnostic.make("W-CHAR-BAND", f"prompt is {count} characters; band is {profile.char_band[0]}-{profile.char_band[1]}")
            )
        elif verdict is BudgetVerdict.BELOW:
            diags.append(
                Diagnostic.make("N-CHAR-BAND-LOW", f"prompt is {count} characters; band is {profile.char_band[0]}-{profile.char_band[1]}")
            )

    reference = spec.block("Reference")
    diags.extend(
        reference_advice(
            spec.features.reference_count,
            spec.features.reference_max_bytes,
            reference.span if reference is not None else None,
        )
    )

    if spec.features.grounding and not any(_FACTUAL.search(b.raw_text) for b in spec.blocks):
        grounding = spec.block("Grounding")
        diags.append(
            Diagnostic.make(
                "W-GROUNDING-AESTHETIC",
                "Grounding is enabled but no block asks for factual content",
                grounding.span if grounding is not None else None,
                suggestion="disable Grounding for purely aesthetic tasks",
            )
        )

    if spec.blocks and any(b.kind.name == "Output" and not b.kind.custom for b in spec.blocks[:-1]):
        output = spec.block("Output")
        diags.append(Diagnostic.make("N-OUTPUT-POSITION", "Output is not the closing block", output.span))

    mandatory = spec.block("Mandatory")
    if mandatory is not None:
        for item, suggestion in suggest_negations(mandatory.items):
            diags.append(
                Diagnostic.make(
                    "N-NEGATE",
                    f"consider prohibiting the failure mode of {item.text!r}",
                    mandatory.span,
                    suggestion=suggestion,
                )
            )

    return sort_diagnostics(diags)
