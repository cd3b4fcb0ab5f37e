"""Canonical SCHEMA text emission and character budgets."""
from __future__ import annotations

import enum
import textwrap
from dataclasses import dataclass, replace

from schema_forge.diagnostics import SchemaError
from schema_forge.model import (
    FREEFORM,
    ConstraintItem,
    FeatureFlags,
    LabelBlock,
    PromptSpec,
    Tier,
)


class OrderPolicy(enum.Enum):
    AS_PARSED = "as-parsed"
    CANONICAL = "canonical"


CANONICAL_ORDER = (
    "Style",
    "Composition",
    "Subject",
    "Lighting",
    "Background",
    "Reference",
    "Thinking",
    "Grounding",
    "Mandatory",
    "Prohibitions",
)


@dataclass(frozen=True)
class EmitOptions:
    order_policy: OrderPolicy = OrderPolicy.CANONICAL
    line_width: int | None = None

    def __post_init__(self) -> None:
        if self.line_width is not None and self.line_width < 20:
            raise ValueError("line_width must be at least 20")


class BudgetVerdict(enum.Enum):
    BELOW = "BELOW"
    WITHIN = "WITHIN"
    ABOVE = "ABOVE"
    NO_BAND = "NO_BAND"


def _sort_key(block: LabelBlock) -> int:
    if block.kind.custom:
        return len(CANONICAL_ORDER)
    if block.kind.name == "Output":
        return len(CANONICAL_ORDER) + 1
    return CANONICAL_ORDER.index(block.kind.name)


def ordered_blocks(spec: PromptSpec, policy: OrderPolicy) -> list[LabelBlock]:
    if policy is OrderPolicy.AS_PARSED:
        return list(spec.blocks)
    # sorted() is stable, so Custom blocks keep their relative order
    return sorted(spec.blocks, key=_sort_key)


def _comma_safe(item: ConstraintItem) -> bool:
    # The parser only re-splits a comma list when every segment has two words.
    return "," not in item.text and "." not in item.text and len(item.text.split()) >= 2


def join_items(items: tuple[ConstraintItem, ...] | list[ConstraintItem]) -> str:
    """Render constraint items so that ``split_items`` recovers them."""
    texts = [item.text for item in items]
    if all(_comma_safe(item) for item in items):
        body = ", ".join(texts)
    else:
        body = ". ".join(t.rstrip(".") for t in texts)
    return body + "."


def render_body(block: LabelBlock) -> str:
    if block.items:
        return join_items(block.items)
    if block.kind == FREEFORM:
        return block.raw_text.strip()
    return " ".join(block.raw_text.split())


def _render_block(block: LabelBlock, width: int | None) -> str:
    line = f"{block.kind.name}: {render_body(block)}"
    if width is None or len(line) <= width:
        return line
    return textwrap.fill(
        line,
        width=width,
        subsequent_indent="  ",
        break_long_words=False,
        break_on_hyphens=False,
    )


def emit_canonical(spec: PromptSpec, opts: EmitOptions = EmitOptions()) -> str:
    """Serialize ``spec`` to SCHEMA text.

    Blocks are written as ``Label: body`` separated by one blank line.  Under
    the CANONICAL policy Output always closes the prompt.  A spec made of a
    single freeform block is emitted verbatim, without a header.
    """
    if not spec.blocks:
        raise SchemaError("E-EMIT-EMPTY", "spec has zero blocks")
    if len(spec.blocks) == 1 and spec.blocks[0].kind == FREEFORM:
        return render_body(spec.blocks[0])
    blocks = ordered_blocks(spec, opts.order_policy)
    return "\n\n".join(_render_block(b, opts.line_width) for b in blocks)


def make_spec(
    blocks,
    declared_tier: Tier | None = None,
    features: FeatureFlags | None = None,
) -> PromptSpec:
    """Build a ``PromptSpec`` with ``char_count`` synced to its canonical emission."""
    spec = PromptSpec(tuple(blocks), declared_tier, features or FeatureFlags(), 0)
    if not spec.blocks:
        return spec
    return replace(spec, char_count=len(emit_canonical(spec)))


def canonicalize(spec: PromptSpec) -> PromptSpec:
    """The normal form a spec takes after one emit/parse cycle.

    Blocks move to canonical order, body whitespace is collapsed and
    constraint items are re-split from their rendered text.
    """
    from schema_forge.parser import split_items

    blocks = []
    for block in ordered_blocks(spec, OrderPolicy.CANONICAL):
        body = render_body(block)
        items = tuple(split_items(body)) if block.kind.is_constraint else ()
        blocks.append(LabelBlock(block.kind, body, items, block.span))
    return make_spec(blocks, spec.declared_tier, spec.features)


def char_budget(spec: PromptSpec, profile) -> tuple[int, BudgetVerdict]:
    """Canonical character count of ``spec`` and where it falls in ``profile.char_band``."""
    count = len(emit_canonical(spec, EmitOptions(OrderPolicy.CANONICAL))) if spec.blocks else 0
    band = profile.char_band
    if band is None:
        return count, BudgetVerdict.NO_BAND
    low, high = band
    if count < low:
        return count, BudgetVerdict.BELOW
    if count > high:
        return count, BudgetVerdict.ABOVE
    return count, BudgetVerdict.WITHIN
