"""Bundled reference tables: loading, comparison semantics, reproduction."""

from fractions import Fraction

import pytest

from toric_virasoro import golden
from toric_virasoro.exactalg import parse_laurent

ALL_IDS = golden.list_cases()

EXPECTED_K_STATUS = {
    # The printed rows for this case describe sheaves with invariants other
    # than the case's own (and the locus at its polarization differs), so the
    # comparison is recorded as unreliable and skipped.
    "f0-F-c2-1": "skipped",
    # Four rows in this table have one dropped minus sign in a single chart;
    # they are matched by absolute coefficient values instead and flagged.
    "f0-F-c2-2-H3F5Z": "match-with-recorded-sign-slips",
}


class TestFixtureFiles:
    def test_sixteen_cases(self):
        assert len(ALL_IDS) == 16
        assert ALL_IDS == sorted(ALL_IDS)

    def test_unknown_case_raises(self):
        with pytest.raises(KeyError):
            golden.load_case("p2-r9-c2-99")

    def test_chart_strings_roundtrip(self):
        for case_id in ALL_IDS:
            gold = golden.load_case(case_id)
            for row in gold.k_rows:
                for chart in row.charts:
                    assert parse_laurent(chart.render()) == chart

    def test_sign_slips_only_where_recorded(self):
        flagged = {
            case_id: [i for i, row in enumerate(golden.load_case(case_id).k_rows) if row.sign_corrupt]
            for case_id in ALL_IDS
        }
        flagged = {k: v for k, v in flagged.items() if v}
        assert flagged == {"f0-F-c2-2-H3F5Z": [2, 3, 10, 11]}

    def test_unreliable_rows_only_where_recorded(self):
        unreliable = [cid for cid in ALL_IDS if not golden.load_case(cid).k_rows_reliable]
        assert unreliable == ["f0-F-c2-1"]


class TestRecordedIntegrals:
    def test_triples_sum_to_zero(self):
        count = 0
        for case_id in ALL_IDS:
            gold = golden.load_case(case_id)
            for row in gold.integrals:
                assert row.r_value + row.t_value + row.s_value == 0, (case_id, row.label)
                count += 1
        assert count > 100

    def test_typo_row_keeps_both_values(self):
        gold = golden.load_case("p2-r4-c2-3")
        typo_rows = [r for r in gold.integrals if r.typo_suspected]
        assert len(typo_rows) == 1
        (row,) = typo_rows
        assert row.r_value == Fraction(-29715, 16384)
        assert ("R", "-29715/16348") in row.printed
        assert all(Fraction(val) != row.r_value for _part, val in row.printed)

    def test_every_other_row_prints_what_it_stores(self):
        for case_id in ALL_IDS:
            for row in golden.load_case(case_id).integrals:
                if not row.typo_suspected:
                    assert not row.printed


class TestRowKey:
    def test_twist_invariance(self):
        charts = [parse_laurent(t) for t in ("st + s + t", "1 + s^-1t", "t + 2")]
        shifted = [c.shift(3, -2) for c in charts]
        assert golden.canonical_row_key(charts) == golden.canonical_row_key(shifted)

    def test_distinct_rows_distinct_keys(self):
        a = [parse_laurent(t) for t in ("s + t", "1 + s")]
        b = [parse_laurent(t) for t in ("s + t", "1 + t")]
        assert golden.canonical_row_key(a) != golden.canonical_row_key(b)


class TestReproduction:
    @pytest.mark.parametrize("case_id", ALL_IDS)
    def test_engine_reproduces_case(self, case_of, case_id):
        gold, case, _ = case_of(case_id)
        report = golden.verify_case(gold, case=case)
        assert report.dim_ok
        assert report.k_status == EXPECTED_K_STATUS.get(case_id, "match"), report.k_messages
        assert not report.integral_failures, report.integral_failures
        assert report.ok, "\n".join(report.lines())
