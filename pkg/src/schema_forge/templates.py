"""Skeleton prompts emitted by ``schema init``.

Placeholders are in angle brackets.  Every skeleton carries lint-passing
defaults (a numeric Kelvin value, three items per constraint list) so a
fresh template lints with zero errors at its own tier.
"""
from __future__ import annotations

from schema_forge.analytics import Domain
from schema_forge.diagnostics import SchemaError
from schema_forge.model import Tier

_HINTS = {
    Domain.RealEstate: ("architectural interior photography", "room, materials, finishes and furniture"),
    Domain.Product: ("commercial product photography", "product identity: shape, proportions, label, exact colors"),
    Domain.Editorial: ("editorial magazine photography", "single subject with materials, colors and state"),
    Domain.Storyboard: ("cinematic storyboard frame", "scene action, characters and props for this frame"),
    Domain.Campaign: ("advertising campaign photography", "hero product or talent with brand elements"),
    Domain.InfoDesign: ("editorial information design", "title text, data elements and their exact positions"),
}


def _lines(domain: Domain, tier: Tier) -> list[tuple[str, str]]:
    style, subject = _HINTS[domain]
    lines = [
        ("Style", f"Professional {style}, <quality level>, <brand or editorial reference>."),
    ]
    if tier is Tier.AVANZATO:
        lines.append(
            ("Reference", "Image 1: <identity source> - maintain 100% accuracy in <shape, proportions, colors, typography>.")
        )
    lines += [
        ("Composition", "<shot type> at <camera angle>, <focal point>, <focal length, e.g. 35mm> equivalent focal length."),
        ("Subject", f"<{subject}; precise materials, dimensions, exact colors>."),
        ("Lighting", "<light setup and angle of incidence>, <kelvin>K color temperature (default 3000K), <natural:artificial ratio>."),
        ("Background", "<spatial setting>, <surface materials>, <depth of field>."),
    ]
    if tier is Tier.AVANZATO:
        lines.append(("Thinking", "Enable: <multi-stage refinement goal>. Priority: <accuracy vs creative split>. Complexity: <level>."))
    lines += [
        ("Mandatory", "<verifiable item one with a measurable value>. <verifiable item two>. <verifiable item three>."),
        ("Prohibitions", "NO <specific technical defect>. NO <specific artifact>. NO <specific failure mode>."),
        ("Output", "Aspect ratio <W:H>, resolution 4K, <orientation> format."),
    ]
    return lines


def render_template(domain: str, tier: Tier) -> str:
    """Skeleton prompt for ``domain`` at ``tier``; BASE is a single free-text line."""
    try:
        dom = Domain(domain)
    except ValueError:
        raise SchemaError(
            "E-UNKNOWN-DOMAIN", f"unknown domain {domain!r} (expected one of {', '.join(d.value for d in Domain)})"
        ) from None
    if tier is Tier.BASE:
        return f"<Describe the {_HINTS[dom][0]} you want to explore in free natural language>"
    return "\n\n".join(f"{label}: {body}" for label, body in _lines(dom, tier))
