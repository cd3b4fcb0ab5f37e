"""Regenerate the shipped TSV fixtures under src/schema_forge/fixtures/.

The golden ledger reproduces the per-domain prompt counts, pooled compliance
rates and failure-routing counts of the published corpus table.  Execution
estimates are whatever the record-level multipliers give; they are not
fitted to the table.

    python tools/make_fixtures.py
"""
from __future__ import annotations

from pathlib import Path

from schema_forge.analytics import (
    BatchVerdict,
    Condition,
    CorpusRecord,
    Domain,
    Event,
    Failure,
    Source,
    format_ledger,
    format_verdicts,
    pct,
)

OUT = Path(__file__).resolve().parents[1] / "src" / "schema_forge" / "fixtures"

# domain: (prompts, mandatory %, prohibitions %, routed, variant pairs, replicate prompts)
CORPUS = {
    Domain.RealEstate: (62, 91, 95, 2, 4, 6),
    Domain.Product: (217, 91, 95, 7, 10, 22),
    Domain.Editorial: (149, 92, 95, 4, 8, 12),
    Domain.Storyboard: (41, 89, 91, 2, 2, 4),
    Domain.Campaign: (77, 90, 92, 4, 5, 13),
    Domain.InfoDesign: (75, 97, 98, 0, 0, 0),
}
ITEM_PATTERN = (4, 5, 6, 7, 8, 5, 4, 6)
EXIT_CYCLE = {
    Domain.RealEstate: ("EXIT_INPAINT", "EXIT_REBUILD"),
    Domain.Product: ("EXIT_INPAINT", "EXIT_GEOMETRY", "EXIT_REBUILD"),
    Domain.Editorial: ("EXIT_INPAINT", "EXIT_REBUILD"),
    Domain.Storyboard: ("EXIT_MOTION",),
    Domain.Campaign: ("EXIT_GEOMETRY", "EXIT_REBUILD"),
}


def _met_counts(totals: list[int], rate: int) -> list[int]:
    """Spread misses round-robin so the pooled rate rounds to ``rate``."""
    grand = sum(totals)
    met = round(grand * rate / 100)
    assert pct(met, grand) == rate, (grand, met, rate)
    misses = grand - met
    out = list(totals)
    i = 0
    while misses:
        if out[i % len(out)] > 0:
            out[i % len(out)] -= 1
            misses -= 1
        i += 1
    return out


def golden_ledger() -> list[CorpusRecord]:
    records = []
    for domain, (prompts, mand, prohib, routed, variant_pairs, replicate) in CORPUS.items():
        complete = prompts - variant_pairs
        events = [Event.COMPLETE] * complete + [Event.VARIANT] * (2 * variant_pairs)
        n = len(events)
        m_tot = [ITEM_PATTERN[i % len(ITEM_PATTERN)] for i in range(n)]
        p_tot = [ITEM_PATTERN[(i + 3) % len(ITEM_PATTERN)] for i in range(n)]
        m_met = _met_counts(m_tot, mand)
        p_met = _met_counts(p_tot, prohib)
        exits = EXIT_CYCLE.get(domain, ())
        for i, event in enumerate(events):
            if domain is Domain.InfoDesign:
                source = Source.EDITORIAL_PUBLIC
            elif i < replicate:
                source = Source.REPLICATE
            else:
                source = Source.CONVERSATIONAL
            failure = Failure.NONE
            if domain is Domain.InfoDesign:
                failure = Failure.SPATIAL if i in (10, 40) else Failure.TYPO if i == 60 else Failure.NONE
            records.append(
                CorpusRecord(
                    record_id=f"{domain.value[:3].upper()}-{i + 1:04d}",
                    domain=domain,
                    source=source,
                    event=event,
                    mandatory_total=m_tot[i],
                    mandatory_met=m_met[i],
                    prohibitions_total=p_tot[i],
                    prohibitions_met=p_met[i],
                    routed_exit=exits[i % len(exits)] if i < routed else None,
                    failure=failure,
                )
            )
    return records


# domain: trials of (A rater counts, B rater counts)
BATCHES = {
    "RealEstate": [((4, 5), (8, 9)), ((4, 5), (9, 8))],
    "Product": [((4, 4), (8, 9)), ((5, 5), (9, 8))],
    "Editorial": [((5, 5), (8, 9)), ((4, 6), (9, 8))],
    "Storyboard": [((3, 4), (8, 8)), ((4, 5), (7, 9))],
    "Campaign": [((4, 5), (8, 9)), ((5, 4), (8, 9))],
}


def verdicts() -> list[BatchVerdict]:
    out = []
    for domain, trials in BATCHES.items():
        for t, (a, b) in enumerate(trials, start=1):
            out.append(BatchVerdict(f"{domain}-T{t}-A", Condition.A_NARRATIVE, a))
            out.append(BatchVerdict(f"{domain}-T{t}-B", Condition.B_SCHEMA, b))
    return out


def infodesign_100() -> list[CorpusRecord]:
    failures = [Failure.NONE] * 96 + [Failure.SPATIAL] * 3 + [Failure.TYPO] * 1
    return [
        CorpusRecord(f"INF-{i + 1:04d}", Domain.InfoDesign, Source.EDITORIAL_PUBLIC, Event.COMPLETE,
                     6, 6 if f is Failure.NONE else 5, 4, 4, None, f)
        for i, f in enumerate(failures)
    ]


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    (OUT / "corpus_golden.tsv").write_text(format_ledger(golden_ledger()), encoding="utf-8")
    (OUT / "verdicts_golden.tsv").write_text(format_verdicts(verdicts()), encoding="utf-8")
    (OUT / "infodesign_100.tsv").write_text(format_ledger(infodesign_100()), encoding="utf-8")
    print(f"wrote fixtures to {OUT}")


if __name__ == "__main__":
    main()
