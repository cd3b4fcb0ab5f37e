from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from schema_forge.analytics import (
    BatchVerdict,
    Condition,
    CorpusRecord,
    Domain,
    Event,
    Failure,
    Multipliers,
    Register,
    Source,
    aggregate,
    aggregate_parallel,
    asymmetry,
    classify_kelvin,
    condition_gap,
    consistency_report,
    consistency_score,
    format_ledger,
    format_verdicts,
    infodesign_failure_breakdown,
    parse_ledger,
    parse_verdicts,
    read_ledger,
    read_verdicts,
    rater_agreement,
    round_half_up,
    weight_of,
    weighted_compliance,
)
from schema_forge.diagnostics import SchemaError

# Published per-domain prompt counts and rates for the five original domains.
TABLE = [
    ("RealEstate", 62, 91, 95),
    ("Product", 217, 91, 95),
    ("Editorial", 149, 92, 95),
    ("Storyboard", 41, 89, 91),
    ("Campaign", 77, 90, 92),
]


def integer_weighted(rows):
    """Independent oracle: integer numerator/denominator, half-up via 2n+d // 2d."""
    num = sum(n * r for n, r in rows)
    den = sum(n for n, _ in rows)
    return (2 * num + den) // (2 * den)


def rec(domain=Domain.Product, source=Source.CONVERSATIONAL, event=Event.COMPLETE, mt=4, mm=4, pt=4, pm=4, routed=None):
    return CorpusRecord("R", domain, source, event, mt, mm, pt, pm, routed)


class TestWeights:
    def test_complete_conversational(self):
        assert weight_of(rec()) == 1.0

    def test_variant(self):
        assert weight_of(rec(event=Event.VARIANT)) == 0.5

    def test_replicate(self):
        assert weight_of(rec(source=Source.REPLICATE)) == 15.0

    def test_replicate_variant(self):
        assert weight_of(rec(source=Source.REPLICATE, event=Event.VARIANT)) == 7.5

    @given(st.sampled_from([0.25, 0.5, 1.0, 3.0]), st.sampled_from(list(Source)), st.sampled_from(list(Event)))
    def test_doubling_batch_doubles_replicates(self, batch, source, event):
        r = rec(source=source, event=event)
        single = weight_of(r, Multipliers(replicate_batch=batch))
        double = weight_of(r, Multipliers(replicate_batch=2 * batch))
        assert double == (2 * single if source is Source.REPLICATE else single)

    def test_multipliers_parse(self):
        assert Multipliers.parse("variant=0.25, micro=2") == Multipliers(0.25, 10, 2.0)
        with pytest.raises(ValueError):
            Multipliers.parse("speed=3")
        with pytest.raises(ValueError):
            Multipliers(variant_weight=0)


class TestRecord:
    def test_met_cannot_exceed_total(self):
        with pytest.raises(ValueError):
            rec(mt=3, mm=4)

    def test_non_negative(self):
        with pytest.raises(ValueError):
            rec(pt=-1, pm=-1)


class TestAggregate:
    def test_pooled_rate(self):
        records = [rec(mt=4, mm=2), rec(mt=4, mm=4)]
        [stats], totals = aggregate(records)
        assert stats.mandatory_rate == 75
        assert totals.mandatory_rate == 75

    def test_prompt_count_proxy(self):
        records = [rec(), rec(event=Event.VARIANT), rec(event=Event.VARIANT)]
        [stats], _ = aggregate(records)
        assert stats.prompt_count == 2.0
        assert stats.execution_estimate == 2.0

    def test_zero_items_rate_is_none(self):
        [stats], _ = aggregate([rec(mt=0, mm=0)])
        assert stats.mandatory_rate is None

    def test_routed(self):
        [stats], totals = aggregate([rec(routed="EXIT_INPAINT"), rec()])
        assert stats.routed_count == 1 and totals.routed_count == 1

    def test_empty(self):
        with pytest.raises(SchemaError) as err:
            aggregate([])
        assert err.value.rule == "E-EMPTY-LEDGER"

    def test_golden_ledger(self, fixtures):
        stats, totals = aggregate(read_ledger(fixtures / "corpus_golden.tsv"))
        by = {s.domain.value: s for s in stats}
        assert [by[d].prompt_count for d, *_ in TABLE] == [62, 217, 149, 41, 77]
        assert by["InfoDesign"].prompt_count == 75
        assert totals.prompt_count == 621
        for name, _, mand, prohib in TABLE:
            assert (by[name].mandatory_rate, by[name].prohibitions_rate) == (mand, prohib)
        assert [by[d].routed_count for d in ("RealEstate", "Product", "Editorial", "Storyboard", "Campaign", "InfoDesign")] == [2, 7, 4, 2, 4, 0]
        assert totals.routed_count == 19
        assert (totals.weighted_mandatory, totals.weighted_prohibitions) == (91, 94)

    def test_parallel_matches_sequential(self, fixtures):
        records = read_ledger(fixtures / "corpus_golden.tsv")
        assert aggregate_parallel(records, workers=3, chunk_size=37) == aggregate(records)

    @given(
        st.lists(
            st.builds(
                rec,
                st.sampled_from(list(Domain)),
                st.sampled_from(list(Source)),
                st.sampled_from(list(Event)),
                st.just(5), st.integers(0, 5), st.just(3), st.integers(0, 3),
                st.sampled_from([None, "EXIT_INPAINT"]),
            ),
            min_size=1,
            max_size=60,
        ),
        st.integers(1, 7),
    )
    @settings(max_examples=100)
    def test_chunking_never_changes_result(self, records, chunk):
        assert aggregate_parallel(records, chunk_size=chunk) == aggregate(records)


class TestWeightedCompliance:
    def test_mandatory(self):
        rows = [(n, m) for _, n, m, _ in TABLE]
        assert weighted_compliance(rows) == 91 == integer_weighted(rows)
        assert Fraction(sum(n * r for n, r in rows), sum(n for n, _ in rows)) == Fraction(49676, 546)

    def test_prohibitions(self):
        rows = [(n, p) for _, n, _, p in TABLE]
        assert weighted_compliance(rows) == 94 == integer_weighted(rows)

    def test_simple(self):
        assert weighted_compliance([(1, 60), (1, 100)]) == 80
        assert weighted_compliance([(3, 70), (1, 90)]) == 75

    def test_half_up(self):
        assert weighted_compliance([(1, 90), (1, 91)]) == 91
        assert round_half_up(Fraction(-1, 2)) == 0

    def test_zero_weight(self):
        with pytest.raises(SchemaError) as err:
            weighted_compliance([(0, 50)])
        assert err.value.rule == "E-ZERO-WEIGHT"

    @given(st.lists(st.tuples(st.integers(1, 500), st.integers(0, 100)), min_size=1, max_size=8))
    def test_matches_integer_oracle(self, rows):
        assert weighted_compliance(rows) == integer_weighted(rows)


class TestAsymmetry:
    @pytest.mark.parametrize("mand, prohib, expected", [(91, 95, 4), (89, 91, 2), (90, 90, 0), (95, 90, -5)])
    def test_values(self, mand, prohib, expected):
        [stats], _ = aggregate([rec(mt=100, mm=mand, pt=100, pm=prohib)])
        assert asymmetry(stats) == stats.asymmetry == expected


class TestKelvin:
    @pytest.mark.parametrize(
        "k, register",
        [(2700, Register.WARM), (3999, Register.WARM), (4000, Register.NEUTRAL), (5000, Register.NEUTRAL),
         (5001, Register.COOL), (6500, Register.COOL)],
    )
    def test_registers(self, k, register):
        assert classify_kelvin(k) is register

    @pytest.mark.parametrize("k", [499, 20001, 0])
    def test_range(self, k):
        with pytest.raises(SchemaError) as err:
            classify_kelvin(k)
        assert err.value.rule == "E-KELVIN-RANGE"

    @given(st.integers(500, 20000), st.integers(500, 20000))
    def test_monotone(self, a, b):
        if a <= b:
            assert classify_kelvin(a) <= classify_kelvin(b)


class TestConsistency:
    def test_scores(self):
        assert consistency_score(BatchVerdict("Product-T1", Condition.B_SCHEMA, (8, 9))) == 8.5
        assert consistency_score(BatchVerdict("Product-T1", Condition.B_SCHEMA, (8, 8))) == 8.0
        assert consistency_score(BatchVerdict("X", Condition.A_NARRATIVE, (4, 4, 5))) == 4.3

    def test_gap(self):
        assert condition_gap([4.5], [8.5]) == 4.0
        assert condition_gap([5.0], [5.0]) == 0
        assert condition_gap([4.0, 4.0], [8.5, 8.5]) == 4.5
        with pytest.raises(SchemaError):
            condition_gap([], [1.0])

    def test_agreement(self):
        assert rater_agreement(BatchVerdict("X", Condition.B_SCHEMA, (8, 9))) == (1, True)
        assert rater_agreement(BatchVerdict("X", Condition.B_SCHEMA, (7, 9, 8))) == (2, False)

    def test_errors(self):
        with pytest.raises(SchemaError) as err:
            consistency_score(BatchVerdict("X", Condition.B_SCHEMA, (8,)))
        assert err.value.rule == "E-RATER-COUNT"
        with pytest.raises(SchemaError) as err:
            consistency_score(BatchVerdict("X", Condition.B_SCHEMA, (8, 11)))
        assert err.value.rule == "E-COUNT-RANGE"

    def test_golden_report(self, fixtures):
        report = consistency_report(read_verdicts(fixtures / "verdicts_golden.tsv"))
        assert round(report.gap, 2) == 3.9
        for row in report.domain_means.values():
            assert 4 <= row["A"] <= 5
            assert 8 <= row["B"] <= 9


class TestInfoDesign:
    def test_breakdown(self, fixtures):
        assert infodesign_failure_breakdown(read_ledger(fixtures / "infodesign_100.tsv")) == {
            "compliant_pct": 96.0,
            "spatial_pct": 3.0,
            "typo_pct": 1.0,
        }

    def test_empty(self):
        with pytest.raises(SchemaError):
            infodesign_failure_breakdown([])


class TestTsv:
    def test_ledger_round_trip(self, fixtures):
        text = (fixtures / "corpus_golden.tsv").read_text(encoding="utf-8")
        assert format_ledger(parse_ledger(text)) == text

    def test_verdict_round_trip(self, fixtures):
        text = (fixtures / "verdicts_golden.tsv").read_text(encoding="utf-8")
        assert format_verdicts(parse_verdicts(text)) == text

    def test_routed_dash(self):
        records = [rec(), rec(routed="EXIT_MOTION")]
        parsed = parse_ledger(format_ledger(records))
        assert [r.routed_exit for r in parsed] == [None, "EXIT_MOTION"]

    def test_bad_header(self):
        with pytest.raises(ValueError):
            parse_ledger("id\tdomain\n")

    def test_bad_domain(self):
        text = format_ledger([rec()]).replace("Product", "Fashion")
        with pytest.raises(ValueError, match="Fashion"):
            parse_ledger(text)

    def test_failure_column(self):
        r = CorpusRecord("I-1", Domain.InfoDesign, Source.EDITORIAL_PUBLIC, Event.COMPLETE, 1, 0, 1, 1, None, Failure.TYPO)
        assert parse_ledger(format_ledger([r])) == [r]
