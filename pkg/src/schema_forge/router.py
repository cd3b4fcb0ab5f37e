"""Decision-tree routing, iteration drift classes and reference-image advice."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

from schema_forge.diagnostics import Diagnostic, SchemaError
from schema_forge.model import MAX_REFERENCES, SourceSpan, Tier

RECOMMENDED_REFERENCES = 3
REFERENCE_SIZE_LIMIT = 7_000_000
REBUILD_GENERATION = 3

INPAINT_TARGETS = ("Adobe Firefly", "Stable Diffusion inpainting", "Ideogram")
GEOMETRY_TARGETS = ("Midjourney + compositing",)
MOTION_TARGETS = ("Kling AI", "Seedance")

# Question wording is configuration, not logic: see RouterConfig.questions.
DEFAULT_QUESTIONS = (
    ("q1_localized_inpainting", "Is the task a localized edit (inpainting) of an existing image?"),
    ("q2_pixel_precise_geometry", "Does the task need pixel-precise geometric control?"),
    ("q3_generation_index", "Which generation attempt is this (1 for the first)?"),
    ("q4_multiframe_motion", "Does the task need multi-frame or motion coherence?"),
    ("q5_factual_grounding_needed", "Does the image depend on real-world factual data?"),
    ("q6_batch_deliverable", "Is this a final deliverable or a consistent batch?"),
    ("q7_exploration_only", "Is this only exploration of model defaults?"),
)


@dataclass(frozen=True)
class DecisionAnswers:
    q1_localized_inpainting: bool = False
    q2_pixel_precise_geometry: bool = False
    q3_generation_index: int = 1
    q4_multiframe_motion: bool = False
    q5_factual_grounding_needed: bool = False
    q6_batch_deliverable: bool = False
    q7_exploration_only: bool = False

    def __post_init__(self) -> None:
        if self.q3_generation_index < 1:
            raise ValueError("generation index starts at 1")


class OutcomeKind(enum.Enum):
    PROCEED = "PROCEED"
    EXIT_INPAINT = "EXIT_INPAINT"
    EXIT_GEOMETRY = "EXIT_GEOMETRY"
    EXIT_REBUILD = "EXIT_REBUILD"
    EXIT_MOTION = "EXIT_MOTION"


@dataclass(frozen=True)
class RoutingOutcome:
    kind: OutcomeKind
    rationale: str
    tier: Tier | None = None
    targets: tuple[str, ...] = ()

    @property
    def is_exit(self) -> bool:
        return self.kind is not OutcomeKind.PROCEED

    def verdict(self) -> str:
        if self.kind is OutcomeKind.PROCEED:
            return f"PROCEED({self.tier.name})"
        if self.targets:
            return f"{self.kind.value} -> {', '.join(self.targets)}"
        return self.kind.value

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "tier": self.tier.name if self.tier is not None else None,
            "targets": list(self.targets),
            "rationale": self.rationale,
        }


@dataclass(frozen=True)
class RouterConfig:
    questions: tuple[tuple[str, str], ...] = DEFAULT_QUESTIONS
    motion_exit: bool = True
    inpaint_targets: tuple[str, ...] = INPAINT_TARGETS
    geometry_targets: tuple[str, ...] = GEOMETRY_TARGETS
    motion_targets: tuple[str, ...] = MOTION_TARGETS


def route(answers: DecisionAnswers, config: RouterConfig = RouterConfig()) -> RoutingOutcome:
    """Walk the seven questions in order; the first triggered exit wins."""
    if answers.q1_localized_inpainting:
        return RoutingOutcome(
            OutcomeKind.EXIT_INPAINT,
            "localized inpainting is outside single-prompt generation; use a mask-based editor",
            targets=config.inpaint_targets,
        )
    if answers.q2_pixel_precise_geometry:
        return RoutingOutcome(
            OutcomeKind.EXIT_GEOMETRY,
            "pixel-precise geometry needs a model with geometric control plus compositing",
            targets=config.geometry_targets,
        )
    if answers.q3_generation_index >= REBUILD_GENERATION:
        return RoutingOutcome(
            OutcomeKind.EXIT_REBUILD,
            f"generation {answers.q3_generation_index} reached the iteration limit; "
            "rebuild the full prompt and restart from the original image",
        )
    if answers.q4_multiframe_motion and config.motion_exit:
        return RoutingOutcome(
            OutcomeKind.EXIT_MOTION,
            "multi-frame or motion coherence exceeds single-prompt generation",
            targets=config.motion_targets,
        )

    if answers.q7_exploration_only:
        tier, why = Tier.BASE, "exploration: free natural language exposes model defaults"
    elif answers.q6_batch_deliverable:
        tier, why = Tier.AVANZATO, "final deliverable: full label set with measurable values"
    else:
        tier, why = Tier.MEDIO, "professional draft: seven structured labels"
    if answers.q5_factual_grounding_needed:
        why += "; enable Grounding for factual content"
    else:
        why += "; keep Grounding off"
    return RoutingOutcome(OutcomeKind.PROCEED, why, tier=tier)


class DriftClass(enum.IntEnum):
    OPTIMAL = 0
    INITIAL_DEGRADATION = 1
    MODERATE_DEGRADATION = 2
    SEVERE_DEGRADATION = 3


RELOAD_ADVICE = "partially mitigable by reloading at 4K"
NOT_READY_ADVICE = "not production-ready"


def drift_class(iteration: int) -> DriftClass:
    """Quality class of the ``iteration``-th generation in a reference chain."""
    if iteration < 1:
        raise SchemaError("E-ITER-RANGE", f"iteration must be >= 1, got {iteration}")
    return DriftClass(min(iteration, 4) - 1)


def drift_advisories(cls: DriftClass) -> list[str]:
    notes = []
    if cls >= DriftClass.MODERATE_DEGRADATION:
        notes.append(RELOAD_ADVICE)
    if cls >= DriftClass.SEVERE_DEGRADATION:
        notes.append(NOT_READY_ADVICE)
    return notes


def reference_advice(
    count: int,
    max_bytes: int | None = None,
    span: SourceSpan | None = None,
) -> list[Diagnostic]:
    if count < 0:
        raise ValueError("reference count must be non-negative")
    out: list[Diagnostic] = []
    if count > MAX_REFERENCES:
        out.append(Diagnostic.make("E-REF-LIMIT", f"{count} reference images exceed the limit of {MAX_REFERENCES}", span))
    elif count > RECOMMENDED_REFERENCES:
        out.append(
            Diagnostic.make(
                "W-REF-COUNT",
                f"{count} reference images; 1-{RECOMMENDED_REFERENCES} give the most coherent results",
                span,
            )
        )
    if max_bytes is not None and max_bytes >= REFERENCE_SIZE_LIMIT:
        out.append(
            Diagnostic.make(
                "W-REF-SIZE",
                f"reference image of {max_bytes} bytes will be compressed internally",
                span,
                suggestion="export at 4K resolution and reload it as a new reference",
            )
        )
    return out


@dataclass
class Interview:
    """Sequential question state for interactive routing; stops at the first exit."""

    config: RouterConfig = field(default_factory=RouterConfig)
    answers: dict = field(default_factory=dict)

    def pending(self):
        for key, text in self.config.questions:
            if key not in self.answers:
                return key, text
        return None

    def answer(self, key: str, value) -> RoutingOutcome | None:
        self.answers[key] = value
        outcome = route(DecisionAnswers(**self.answers), self.config)
        if outcome.is_exit or self.pending() is None:
            return outcome
        return None
