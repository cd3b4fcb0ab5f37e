import pytest
from hypothesis import HealthCheck, given, settings

from schema_forge.diagnostics import SchemaError
from schema_forge.emitter import (
    BudgetVerdict,
    EmitOptions,
    OrderPolicy,
    canonicalize,
    char_budget,
    emit_canonical,
    join_items,
    make_spec,
)
from schema_forge.linter import default_profile
from schema_forge.model import FREEFORM, LabelBlock, LabelKind, PromptSpec, Tier
from schema_forge.parser import parse_prompt, split_items

from strategies import specs

AS_PARSED = EmitOptions(OrderPolicy.AS_PARSED)


def test_as_parsed_reproduces_exemplar(medio_text):
    spec = parse_prompt(medio_text).spec
    assert emit_canonical(spec, AS_PARSED) == medio_text.strip()


def test_canonical_moves_output_last():
    spec = parse_prompt("Output: Aspect ratio 4:3\nStyle: editorial photography").spec
    text = emit_canonical(spec)
    assert text.startswith("Style: ")
    assert text.endswith("Output: Aspect ratio 4:3")


def test_freeform_verbatim():
    spec = parse_prompt("a cat on a sofa\nin the afternoon").spec
    assert emit_canonical(spec) == "a cat on a sofa\nin the afternoon"


def test_empty_spec_rejected():
    with pytest.raises(SchemaError) as err:
        emit_canonical(PromptSpec(()))
    assert err.value.rule == "E-EMIT-EMPTY"


def test_custom_blocks_keep_names_and_order():
    spec = parse_prompt("Mood: calm\nOutput: 4K\nPalette: muted\nStyle: x").spec
    assert emit_canonical(spec).split("\n\n") == ["Style: x", "Mood: calm", "Palette: muted", "Output: 4K"]


def test_canonical_sequence():
    names = ["Prohibitions", "Output", "Grounding", "Thinking", "Reference", "Background",
             "Lighting", "Subject", "Composition", "Style", "Mandatory"]
    source = "\n".join(f"{n}: no glare, no dust, no haze" for n in names)
    text = emit_canonical(parse_prompt(source).spec)
    order = [line.split(":")[0] for line in text.split("\n\n")]
    assert order == ["Style", "Composition", "Subject", "Lighting", "Background", "Reference",
                     "Thinking", "Grounding", "Mandatory", "Prohibitions", "Output"]


class TestJoinItems:
    def test_comma_joiner(self):
        assert join_items(split_items("no glare, no dust, no haze")) == "no glare, no dust, no haze."

    def test_period_joiner_when_item_has_comma(self):
        items = split_items("exact shape, proportions, label. Ultra-sharp focus")
        assert join_items(items) == "exact shape, proportions, label. Ultra-sharp focus."

    def test_period_joiner_for_single_word_items(self):
        # "sharp, clean frame" would not re-split on the comma
        items = split_items("sharp. clean frame")
        assert join_items(items) == "sharp. clean frame."
        assert [i.text for i in split_items(join_items(items))] == ["sharp", "clean frame"]


def test_line_width_wraps_and_reparses(avanzato_text):
    spec = parse_prompt(avanzato_text).spec
    wrapped = emit_canonical(spec, EmitOptions(line_width=60))
    assert max(len(line) for line in wrapped.splitlines()) <= 60
    assert parse_prompt(wrapped).spec.blocks == canonicalize(spec).blocks


def test_idempotent_on_exemplars(medio_text, avanzato_text):
    for text in (medio_text, avanzato_text, "a cat on a sofa", "Mood: x\nStyle: y"):
        once = emit_canonical(parse_prompt(text).spec)
        twice = emit_canonical(parse_prompt(once).spec)
        assert once == twice


@given(specs())
@settings(max_examples=200, suppress_health_check=[HealthCheck.too_slow])
def test_output_always_last_under_canonical(spec):
    blocks = emit_canonical(spec).split("\n\n")
    if spec.has("Output"):
        assert blocks[-1].startswith("Output: ")


@given(specs())
@settings(max_examples=200)
def test_emit_deterministic(spec):
    assert emit_canonical(spec) == emit_canonical(spec)


def test_make_spec_char_count():
    spec = make_spec([LabelBlock(LabelKind("Style"), "x")])
    assert spec.char_count == len("Style: x")


def test_canonicalize_reorders():
    spec = make_spec([LabelBlock(LabelKind("Output"), "4K"), LabelBlock(LabelKind("Style"), "x  y")])
    canon = canonicalize(spec)
    assert [b.kind.name for b in canon.blocks] == ["Style", "Output"]
    assert canon.blocks[0].raw_text == "x y"


class TestCharBudget:
    def _spec(self, length):
        body = "x" * (length - len("Style: "))
        return make_spec([LabelBlock(LabelKind("Style"), body)])

    def test_within(self):
        assert char_budget(self._spec(1500), default_profile(Tier.MEDIO)) == (1500, BudgetVerdict.WITHIN)

    def test_below(self):
        assert char_budget(self._spec(300), default_profile(Tier.MEDIO)) == (300, BudgetVerdict.BELOW)

    def test_above(self):
        assert char_budget(self._spec(1801), default_profile(Tier.MEDIO))[1] is BudgetVerdict.ABOVE

    def test_band_edges_inclusive(self):
        profile = default_profile(Tier.AVANZATO)
        assert char_budget(self._spec(2200), profile)[1] is BudgetVerdict.WITHIN
        assert char_budget(self._spec(2500), profile)[1] is BudgetVerdict.WITHIN

    def test_no_band(self):
        spec = make_spec([LabelBlock(FREEFORM, "a cat")])
        assert char_budget(spec, default_profile(Tier.BASE)) == (5, BudgetVerdict.NO_BAND)
