"""Corpus estimation, compliance aggregation and batch consistency scoring.

All sums are accumulated exactly (integers and ``Fraction``) before any
division, so chunked or parallel aggregation gives the same answer as a
single sequential pass.
"""
from __future__ import annotations

import csv
import enum
import io
import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from statistics import mean

from schema_forge.diagnostics import SchemaError


class Domain(enum.Enum):
    RealEstate = "RealEstate"
    Product = "Product"
    Editorial = "Editorial"
    Storyboard = "Storyboard"
    Campaign = "Campaign"
    InfoDesign = "InfoDesign"


ORIGINAL_DOMAINS = (Domain.RealEstate, Domain.Product, Domain.Editorial, Domain.Storyboard, Domain.Campaign)


class Source(enum.Enum):
    CONVERSATIONAL = "CONVERSATIONAL"
    REPLICATE = "REPLICATE"
    EDITORIAL_PUBLIC = "EDITORIAL_PUBLIC"


class Event(enum.Enum):
    COMPLETE = "COMPLETE"
    VARIANT = "VARIANT"


class Failure(enum.Enum):
    NONE = "NONE"
    SPATIAL = "SPATIAL"
    TYPO = "TYPO"


class Condition(enum.Enum):
    A_NARRATIVE = "A_NARRATIVE"
    B_SCHEMA = "B_SCHEMA"


def _enum(cls, value: str):
    try:
        return cls(value)
    except ValueError:
        choices = ", ".join(m.value for m in cls)
        raise ValueError(f"invalid {cls.__name__} {value!r} (expected one of {choices})") from None


@dataclass(frozen=True)
class CorpusRecord:
    record_id: str
    domain: Domain
    source: Source
    event: Event
    mandatory_total: int = 0
    mandatory_met: int = 0
    prohibitions_total: int = 0
    prohibitions_met: int = 0
    routed_exit: str | None = None
    failure: Failure = Failure.NONE

    def __post_init__(self) -> None:
        for name in ("mandatory_total", "mandatory_met", "prohibitions_total", "prohibitions_met"):
            if getattr(self, name) < 0:
                raise ValueError(f"{self.record_id}: {name} must be non-negative")
        if self.mandatory_met > self.mandatory_total:
            raise ValueError(f"{self.record_id}: mandatory_met exceeds mandatory_total")
        if self.prohibitions_met > self.prohibitions_total:
            raise ValueError(f"{self.record_id}: prohibitions_met exceeds prohibitions_total")


@dataclass(frozen=True)
class Multipliers:
    variant_weight: float = 0.5
    replicate_batch: float = 10
    replicate_micro: float = 1.5

    def __post_init__(self) -> None:
        for name in ("variant_weight", "replicate_batch", "replicate_micro"):
            if not getattr(self, name) > 0:
                raise ValueError(f"multiplier {name} must be strictly positive")

    @classmethod
    def parse(cls, text: str) -> "Multipliers":
        """Parse ``variant=0.5,batch=10,micro=1.5`` (any subset)."""
        keys = {"variant": "variant_weight", "batch": "replicate_batch", "micro": "replicate_micro"}
        values = {}
        for part in filter(None, (p.strip() for p in text.split(","))):
            key, _, raw = part.partition("=")
            if key.strip() not in keys:
                raise ValueError(f"unknown multiplier {key!r}")
            values[keys[key.strip()]] = float(raw)
        return cls(**values)


def _exact(x: float) -> Fraction:
    # Decimal reading of the float, so 0.1 sums exactly as one tenth.
    return Fraction(repr(x))


def _weight(record: CorpusRecord, m: Multipliers) -> Fraction:
    base = Fraction(1)
    if record.source is Source.REPLICATE:
        base = _exact(m.replicate_batch) * _exact(m.replicate_micro)
    if record.event is Event.VARIANT:
        base *= _exact(m.variant_weight)
    return base


def weight_of(record: CorpusRecord, m: Multipliers = Multipliers()) -> float:
    """Presumed model executions represented by one ledger record."""
    return float(_weight(record, m))


def round_half_up(x: Fraction) -> int:
    return int((x * 2 + 1) // 2)


def pct(met: int, total: int) -> int | None:
    if total == 0:
        return None
    return round_half_up(Fraction(100 * met, total))


@dataclass
class _Acc:
    """Exact per-domain accumulator; ``merge`` is associative and commutative."""

    prompt_halves: int = 0
    executions: Fraction = Fraction(0)
    mandatory_total: int = 0
    mandatory_met: int = 0
    prohibitions_total: int = 0
    prohibitions_met: int = 0
    routed: int = 0
    records: int = 0

    def add(self, r: CorpusRecord, m: Multipliers) -> None:
        self.prompt_halves += 2 if r.event is Event.COMPLETE else 1
        self.executions += _weight(r, m)
        self.mandatory_total += r.mandatory_total
        self.mandatory_met += r.mandatory_met
        self.prohibitions_total += r.prohibitions_total
        self.prohibitions_met += r.prohibitions_met
        self.routed += r.routed_exit is not None
        self.records += 1

    def merge(self, other: "_Acc") -> "_Acc":
        return _Acc(
            self.prompt_halves + other.prompt_halves,
            self.executions + other.executions,
            self.mandatory_total + other.mandatory_total,
            self.mandatory_met + other.mandatory_met,
            self.prohibitions_total + other.prohibitions_total,
            self.prohibitions_met + other.prohibitions_met,
            self.routed + other.routed,
            self.records + other.records,
        )


@dataclass(frozen=True)
class DomainStats:
    domain: Domain
    prompt_count: float
    execution_estimate: float
    mandatory_rate: int | None
    prohibitions_rate: int | None
    routed_count: int
    mandatory_total: int = 0
    mandatory_met: int = 0
    prohibitions_total: int = 0
    prohibitions_met: int = 0

    @property
    def asymmetry(self) -> int | None:
        return asymmetry(self)

    def to_dict(self) -> dict:
        return {
            "domain": self.domain.value,
            "prompt_count": self.prompt_count,
            "execution_estimate": self.execution_estimate,
            "mandatory_rate": self.mandatory_rate,
            "prohibitions_rate": self.prohibitions_rate,
            "asymmetry": self.asymmetry,
            "routed_count": self.routed_count,
        }


@dataclass(frozen=True)
class CorpusTotals:
    prompt_count: float
    execution_estimate: float
    routed_count: int
    mandatory_rate: int | None
    prohibitions_rate: int | None
    weighted_mandatory: int | None
    weighted_prohibitions: int | None
    executions_by_source: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "prompt_count": self.prompt_count,
            "execution_estimate": self.execution_estimate,
            "routed_count": self.routed_count,
            "mandatory_rate": self.mandatory_rate,
            "prohibitions_rate": self.prohibitions_rate,
            "weighted_mandatory": self.weighted_mandatory,
            "weighted_prohibitions": self.weighted_prohibitions,
            "executions_by_source": self.executions_by_source,
        }


def _accumulate(records, m: Multipliers) -> dict:
    accs: dict = {}
    for r in records:
        for key in (r.domain, r.source):
            accs.setdefault(key, _Acc()).add(r, m)
    return accs


def _merge_maps(a: dict, b: dict) -> dict:
    out = dict(a)
    for key, acc in b.items():
        out[key] = out[key].merge(acc) if key in out else acc
    return out


def _finish(accs: dict) -> tuple[list[DomainStats], CorpusTotals]:
    stats = []
    for domain in Domain:
        acc = accs.get(domain)
        if acc is None:
            continue
        stats.append(
            DomainStats(
                domain=domain,
                prompt_count=acc.prompt_halves / 2,
                execution_estimate=float(acc.executions),
                mandatory_rate=pct(acc.mandatory_met, acc.mandatory_total),
                prohibitions_rate=pct(acc.prohibitions_met, acc.prohibitions_total),
                routed_count=acc.routed,
                mandatory_total=acc.mandatory_total,
                mandatory_met=acc.mandatory_met,
                prohibitions_total=acc.prohibitions_total,
                prohibitions_met=acc.prohibitions_met,
            )
        )
    everything = _Acc()
    for domain in Domain:
        if domain in accs:
            everything = everything.merge(accs[domain])

    originals = [s for s in stats if s.domain in ORIGINAL_DOMAINS]

    def weighted(attr: str) -> int | None:
        pairs = [(s.prompt_count, getattr(s, attr)) for s in originals if getattr(s, attr) is not None]
        return weighted_compliance(pairs) if pairs else None

    totals = CorpusTotals(
        prompt_count=everything.prompt_halves / 2,
        execution_estimate=float(everything.executions),
        routed_count=everything.routed,
        mandatory_rate=pct(everything.mandatory_met, everything.mandatory_total),
        prohibitions_rate=pct(everything.prohibitions_met, everything.prohibitions_total),
        weighted_mandatory=weighted("mandatory_rate"),
        weighted_prohibitions=weighted("prohibitions_rate"),
        executions_by_source={s.value: float(accs[s].executions) for s in Source if s in accs},
    )
    return stats, totals


def aggregate(records, m: Multipliers = Multipliers()) -> tuple[list[DomainStats], CorpusTotals]:
    """Per-domain statistics and corpus totals for a ledger.

    Prompt counts follow the counting proxy (1 per complete prompt, 0.5 per
    variant); compliance rates pool items across records and round half-up.
    """
    records = list(records)
    if not records:
        raise SchemaError("E-EMPTY-LEDGER", "ledger has no records")
    return _finish(_accumulate(records, m))


def aggregate_parallel(records, m: Multipliers = Multipliers(), workers: int = 4, chunk_size: int = 1000):
    """Map-reduce version of :func:`aggregate` over record chunks."""
    records = list(records)
    if not records:
        raise SchemaError("E-EMPTY-LEDGER", "ledger has no records")
    chunks = [records[i:i + chunk_size] for i in range(0, len(records), chunk_size)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        partials = list(pool.map(lambda c: _accumulate(c, m), chunks))
    merged: dict = {}
    for part in partials:
        merged = _merge_maps(merged, part)
    return _finish(merged)


def weighted_compliance(stats) -> int:
    """Prompt-count-weighted mean of per-domain rates, rounded half-up."""
    stats = list(stats)
    if not stats:
        raise SchemaError("E-ZERO-WEIGHT", "no domains to weight")
    weights = [_exact(float(count)) for count, _ in stats]
    if any(w <= 0 for w in weights):
        raise SchemaError("E-ZERO-WEIGHT", "prompt counts must be positive")
    num = sum(w * _exact(float(rate)) for w, (_, rate) in zip(weights, stats))
    return round_half_up(num / sum(weights))


def asymmetry(stats: DomainStats) -> int | None:
    """Prohibitions rate minus Mandatory rate, in percentage points."""
    if stats.mandatory_rate is None or stats.prohibitions_rate is None:
        return None
    return stats.prohibitions_rate - stats.mandatory_rate


class Register(enum.IntEnum):
    WARM = 0
    NEUTRAL = 1
    COOL = 2


KELVIN_MIN, KELVIN_MAX = 500, 20000
NEUTRAL_BAND = (4000, 5000)


def classify_kelvin(kelvin: int) -> Register:
    if not KELVIN_MIN <= kelvin <= KELVIN_MAX:
        raise SchemaError("E-KELVIN-RANGE", f"{kelvin}K outside {KELVIN_MIN}-{KELVIN_MAX}K")
    if kelvin < NEUTRAL_BAND[0]:
        return Register.WARM
    if kelvin <= NEUTRAL_BAND[1]:
        return Register.NEUTRAL
    return Register.COOL


@dataclass(frozen=True)
class BatchVerdict:
    batch_id: str
    condition: Condition
    rater_counts: tuple[int, ...]
    batch_size: int = 10

    @property
    def domain(self) -> str:
        """Batch ids follow ``<Domain>-<trial>``; the prefix names the domain."""
        return self.batch_id.split("-", 1)[0]


def _check_verdict(verdict: BatchVerdict) -> None:
    if len(verdict.rater_counts) < 2:
        raise SchemaError("E-RATER-COUNT", f"{verdict.batch_id}: need at least 2 raters, got {len(verdict.rater_counts)}")
    for count in verdict.rater_counts:
        if not 0 <= count <= verdict.batch_size:
            raise SchemaError("E-COUNT-RANGE", f"{verdict.batch_id}: count {count} outside [0, {verdict.batch_size}]")


def consistency_score(verdict: BatchVerdict) -> float:
    """Mean consistent-image count across raters, to one decimal."""
    _check_verdict(verdict)
    exact = Fraction(sum(verdict.rater_counts), len(verdict.rater_counts))
    return round_half_up(exact * 10) / 10


def condition_gap(a_scores, b_scores) -> float:
    if not a_scores or not b_scores:
        raise SchemaError("E-EMPTY-SCORES", "both conditions need at least one score")
    return mean(b_scores) - mean(a_scores)


def rater_agreement(verdict: BatchVerdict) -> tuple[int, bool]:
    _check_verdict(verdict)
    diff = max(abs(a - b) for a, b in itertools.combinations(verdict.rater_counts, 2))
    return diff, diff <= 1


def infodesign_failure_breakdown(records) -> dict[str, float]:
    records = list(records)
    if not records:
        raise SchemaError("E-EMPTY-LEDGER", "no Information Design records")
    n = len(records)
    spatial = 100 * sum(r.failure is Failure.SPATIAL for r in records) / n
    typo = 100 * sum(r.failure is Failure.TYPO for r in records) / n
    return {"compliant_pct": 100 - spatial - typo, "spatial_pct": spatial, "typo_pct": typo}


# -- TSV files --------------------------------------------------------------

LEDGER_COLUMNS = (
    "record_id", "domain", "source", "event", "mandatory_total", "mandatory_met",
    "prohibitions_total", "prohibitions_met", "routed", "failure",
)
VERDICT_COLUMNS = ("batch_id", "condition", "rater_id", "consistent_count", "batch_size")


def _rows(text: str, columns: tuple[str, ...]) -> list[dict]:
    reader = csv.DictReader(io.StringIO(text), delimiter="\t", quoting=csv.QUOTE_NONE)
    if tuple(reader.fieldnames or ()) != columns:
        raise ValueError(f"header must be exactly: {' '.join(columns)}")
    rows = []
    for lineno, row in enumerate(reader, start=2):
        if None in row or any(v is None for v in row.values()):
            raise ValueError(f"line {lineno}: expected {len(columns)} tab-separated fields")
        rows.append(row)
    return rows


def parse_ledger(text: str) -> list[CorpusRecord]:
    records = []
    for row in _rows(text, LEDGER_COLUMNS):
        routed = row["routed"].strip()
        failure = row["failure"].strip() or "NONE"
        records.append(
            CorpusRecord(
                record_id=row["record_id"],
                domain=_enum(Domain, row["domain"]),
                source=_enum(Source, row["source"]),
                event=_enum(Event, row["event"]),
                mandatory_total=int(row["mandatory_total"]),
                mandatory_met=int(row["mandatory_met"]),
                prohibitions_total=int(row["prohibitions_total"]),
                prohibitions_met=int(row["prohibitions_met"]),
                routed_exit=None if routed in ("", "-") else routed,
                failure=_enum(Failure, failure),
            )
        )
    return records


def format_ledger(records) -> str:
    lines = ["\t".join(LEDGER_COLUMNS)]
    for r in records:
        lines.append(
            "\t".join(
                [
                    r.record_id, r.domain.value, r.source.value, r.event.value,
                    str(r.mandatory_total), str(r.mandatory_met),
                    str(r.prohibitions_total), str(r.prohibitions_met),
                    r.routed_exit or "-", r.failure.value,
                ]
            )
        )
    return "\n".join(lines) + "\n"


def parse_verdicts(text: str) -> list[BatchVerdict]:
    """Group verdict rows by batch; rows keep rater order within a batch."""
    grouped: dict[str, dict] = {}
    for row in _rows(text, VERDICT_COLUMNS):
        batch = grouped.setdefault(
            row["batch_id"],
            {"condition": _enum(Condition, row["condition"]), "size": int(row["batch_size"]), "counts": {}},
        )
        if _enum(Condition, row["condition"]) is not batch["condition"] or int(row["batch_size"]) != batch["size"]:
            raise ValueError(f"batch {row['batch_id']}: condition and batch_size must agree across raters")
        if row["rater_id"] in batch["counts"]:
            raise ValueError(f"batch {row['batch_id']}: rater {row['rater_id']} listed twice")
        batch["counts"][row["rater_id"]] = int(row["consistent_count"])
    return [
        BatchVerdict(batch_id, b["condition"], tuple(b["counts"].values()), b["size"])
        for batch_id, b in grouped.items()
    ]


def format_verdicts(verdicts) -> str:
    lines = ["\t".join(VERDICT_COLUMNS)]
    for v in verdicts:
        for i, count in enumerate(v.rater_counts, start=1):
            lines.append("\t".join([v.batch_id, v.condition.value, f"R{i}", str(count), str(v.batch_size)]))
    return "\n".join(lines) + "\n"


def read_ledger(path: str | Path) -> list[CorpusRecord]:
    return parse_ledger(Path(path).read_text(encoding="utf-8"))


def read_verdicts(path: str | Path) -> list[BatchVerdict]:
    return parse_verdicts(Path(path).read_text(encoding="utf-8"))


@dataclass(frozen=True)
class ConsistencyReport:
    batches: list[tuple[BatchVerdict, float, int, bool]]
    domain_means: dict[str, dict[str, float]]
    gap: float

    def to_dict(self) -> dict:
        return {
            "batches": [
                {
                    "batch_id": v.batch_id,
                    "condition": v.condition.value,
                    "score": score,
                    "max_abs_diff": diff,
                    "within_one": within,
                }
                for v, score, diff, within in self.batches
            ],
            "domains": self.domain_means,
            "gap": self.gap,
        }


def consistency_report(verdicts) -> ConsistencyReport:
    """Score every batch, then average per domain and condition."""
    batches = []
    by_domain: dict[str, dict[Condition, list[float]]] = {}
    for v in verdicts:
        score = consistency_score(v)
        diff, within = rater_agreement(v)
        batches.append((v, score, diff, within))
        by_domain.setdefault(v.domain, {}).setdefault(v.condition, []).append(score)
    domain_means = {}
    a_means, b_means = [], []
    for domain, conds in by_domain.items():
        row = {}
        if Condition.A_NARRATIVE in conds:
            row["A"] = mean(conds[Condition.A_NARRATIVE])
            a_means.append(row["A"])
        if Condition.B_SCHEMA in conds:
            row["B"] = mean(conds[Condition.B_SCHEMA])
            b_means.append(row["B"])
        if "A" in row and "B" in row:
            row["gap"] = condition_gap([row["A"]], [row["B"]])
        domain_means[domain] = row
    gap = condition_gap(a_means, b_means)
    return ConsistencyReport(batches, domain_means, gap)
