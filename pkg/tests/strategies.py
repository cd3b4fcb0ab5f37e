"""Hypothesis strategies for generated prompt specs."""
from hypothesis import strategies as st

from schema_forge.emitter import make_spec
from schema_forge.model import BUILTIN_LABELS, ConstraintItem, LabelBlock, LabelKind

WORDS = st.sampled_from(
    ["oak", "grey", "window", "soft", "light", "sofa", "wide", "frame", "edges", "glass",
     "3000K", "16mm", "4:3", "#A1B2C3", "50%", "brass", "matte", "shadow", "cells", "label"]
)


def phrase(min_words=1, max_words=5):
    return st.lists(WORDS, min_size=min_words, max_size=max_words).map(" ".join)


@st.composite
def items(draw):
    texts = draw(st.lists(phrase(), min_size=1, max_size=8))
    out = []
    for t in texts:
        if draw(st.booleans()):
            t = draw(st.sampled_from(["no", "No", "never", "NO"])) + " " + t
        out.append(ConstraintItem.from_text(t))
    return tuple(out)


@st.composite
def specs(draw, labels=BUILTIN_LABELS):
    chosen = draw(st.lists(st.sampled_from(labels), min_size=1, max_size=len(labels), unique=True))
    blocks = []
    for name in chosen:
        kind = LabelKind(name)
        if kind.is_constraint:
            its = draw(items())
            body = ", ".join(i.text for i in its)
            blocks.append(LabelBlock(kind, body, its))
        else:
            body = draw(phrase(1, 12))
            blocks.append(LabelBlock(kind, body))
    return make_spec(blocks)
