"""Tests for term extraction, variant merging, and the master list."""

from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from madap.ingestion import FieldTaggedRecord
from madap.model import (
    AuthorProfile,
    DecisionAction,
    DecisionTarget,
    KeywordTerm,
    ReviewDecision,
    TermStatus,
)
from madap.vocabulary import (
    TermPool,
    build_master_list,
    candidate_ngrams,
    extract_terms,
    master_list_csv,
    merge_variants,
)

STOPS = frozenset("a an the of in on for with to and or is are".split())


def record(title: str, keywords: tuple[str, ...] = ()) -> FieldTaggedRecord:
    tags = {"TI": (title,)}
    if keywords:
        tags["DE"] = keywords
    return FieldTaggedRecord(tags=tags)


def kt(norm: str, ft: int = 0, fk: int = 0, fpi: int = 0,
       variants: frozenset[str] | None = None) -> KeywordTerm:
    return KeywordTerm(
        term_norm=norm,
        variants=variants or frozenset({norm}),
        freq_title=ft,
        freq_article_keyword=fk,
        freq_profile_interest=fpi,
    )


def profile(pid: str, interests: tuple[str, ...]) -> AuthorProfile:
    return AuthorProfile(
        profile_id=pid,
        display_name=pid,
        interests=interests,
        verified_domain=None,
        total_citations=0,
        h_index_reported=None,
        documents=(),
    )


class TestCandidateNgrams:
    def test_boundaries_respect_stopwords(self):
        grams = candidate_ngrams("webometrics and the academic web", STOPS)
        assert "webometrics" in grams
        assert "academic web" in grams
        assert "webometrics and the academic web" in grams
        assert "and" not in grams
        assert "the academic" not in grams
        assert "webometrics and" not in grams

    def test_interior_stopwords_allowed(self):
        grams = candidate_ngrams("quantitative studies of science and technology", STOPS)
        assert "quantitative studies of science and technology" in grams

    def test_ngram_ceiling(self):
        grams = candidate_ngrams("one two three four five six seven", frozenset())
        assert all(len(g.split()) <= 6 for g in grams)
        assert "one two three four five six" in grams
        assert "one two three four five six seven" not in grams

    def test_empty_title(self):
        assert candidate_ngrams("", STOPS) == set()


class TestExtractTerms:
    def test_frequencies_split_by_source(self):
        records = [
            record("Webometrics in action", ("link analysis",)),
            record("More webometrics studies", ("webometrics",)),
            record("A webometrics survey", ("webometrics",)),
        ]
        pool = extract_terms(records, threshold=2, stopwords=STOPS)
        term = pool.get("webometrics")
        assert term is not None
        assert term.freq_title == 3
        assert term.freq_article_keyword == 2
        assert term.status is TermStatus.CANDIDATE

    def test_repeat_inside_one_title_counts_once(self):
        pool = extract_terms([record("science of science")], threshold=1, stopwords=STOPS)
        assert pool.get("science").freq_title == 1

    def test_threshold_excludes(self):
        records = [record("citation games")] * 4
        pool = extract_terms(records, threshold=5, stopwords=STOPS)
        assert pool.get("citation games") is None
        assert extract_terms(records, threshold=4, stopwords=STOPS).get("citation games")

    def test_empty_records(self):
        assert extract_terms([], threshold=5).terms == {}

    def test_whole_keyword_values_kept(self):
        long_kw = "quantitative studies of science and technology and other things"
        pool = extract_terms([record("Anything", (long_kw,))], threshold=1, stopwords=STOPS)
        assert pool.get(long_kw) is not None

    def test_keyword_variant_spelling_preserved(self):
        pool = extract_terms([record("x", ("H-Index",))], threshold=1, stopwords=STOPS)
        assert "H-Index" in pool.get("h index").variants

    def test_threshold_must_be_positive(self):
        with pytest.raises(ValueError):
            extract_terms([], threshold=0)

    def test_worker_count_does_not_change_result(self):
        records = [
            record(f"study number {i} of citation analysis", ("citation analysis",))
            for i in range(100)
        ]
        sequential = extract_terms(records, threshold=3, stopwords=STOPS, workers=1)
        parallel = extract_terms(records, threshold=3, stopwords=STOPS, workers=4)
        assert sequential == parallel

    def test_threshold_monotonicity(self):
        records = [
            record("citation analysis now"),
            record("citation analysis then"),
            record("webometrics rising"),
        ]
        low = extract_terms(records, threshold=1, stopwords=STOPS)
        high = extract_terms(records, threshold=2, stopwords=STOPS)
        assert set(high.terms) <= set(low.terms)


class TestMergeVariants:
    def test_singular_plural_fold(self):
        pool = TermPool(
            {"bibliometric": kt("bibliometric", ft=3), "bibliometrics": kt("bibliometrics", ft=637)},
            threshold=5,
        )
        merged, reports = merge_variants(pool)
        assert reports == []
        assert set(merged.terms) == {"bibliometric"}
        term = merged.terms["bibliometric"]
        assert term.freq_title == 640
        assert "bibliometrics" in term.variants

    def test_reject_decision_marks_not_deletes(self):
        pool = TermPool({"editorial board": kt("editorial board", ft=12)}, threshold=5)
        decision = ReviewDecision(DecisionTarget.TERM, "editorial board", DecisionAction.REJECT)
        merged, _ = merge_variants(pool, [decision])
        assert merged.terms["editorial board"].status is TermStatus.REJECTED

    def test_decision_merge(self):
        pool = TermPool(
            {"science maps": kt("science maps", ft=4), "science mapping": kt("science mapping", ft=9)},
            threshold=5,
        )
        decision = ReviewDecision(
            DecisionTarget.TERM, "science maps", DecisionAction.MERGE_INTO, "science mapping"
        )
        merged, reports = merge_variants(pool, [decision])
        assert reports == []
        assert set(merged.terms) == {"science mapping"}
        assert merged.terms["science mapping"].freq_title == 13

    def test_dangling_merge_reported(self):
        pool = TermPool({"webometrics": kt("webometrics", ft=9)}, threshold=5)
        decision = ReviewDecision(
            DecisionTarget.TERM, "cybermetrics", DecisionAction.MERGE_INTO, "webometrics"
        )
        merged, reports = merge_variants(pool, [decision])
        assert len(reports) == 1
        assert "cybermetrics" in reports[0]
        assert merged.terms["webometrics"].freq_title == 9

    def test_accept_on_absent_term_deferred_silently(self):
        pool = TermPool({"webometrics": kt("webometrics", ft=9)}, threshold=5)
        decision = ReviewDecision(
            DecisionTarget.TERM, "science and technology policy", DecisionAction.ACCEPT
        )
        _, reports = merge_variants(pool, [decision])
        assert reports == []

    @given(
        st.dictionaries(
            st.sampled_from(
                ["metric", "metrics", "metricss", "map", "maps", "glass", "citation index"]
            ),
            st.tuples(st.integers(0, 50), st.integers(0, 50)),
            max_size=7,
        )
    )
    def test_frequency_conservation(self, spec):
        pool = TermPool(
            {norm: kt(norm, ft=ft, fk=fk) for norm, (ft, fk) in spec.items()}, threshold=1
        )
        merged, _ = merge_variants(pool)
        for field in ("freq_title", "freq_article_keyword"):
            before = sum(getattr(t, field) for t in pool.terms.values())
            after = sum(getattr(t, field) for t in merged.terms.values())
            assert before == after


class TestBuildMasterList:
    def test_unused_term_dropped_despite_high_frequency(self):
        pool = TermPool({"citation index": kt("citation index", ft=89)}, threshold=5)
        master, _ = build_master_list(pool, [profile("p1", ("bibliometrics",))])
        assert master == []

    def test_used_term_accepted_with_profile_count(self):
        pool = TermPool({"bibliometrics": kt("bibliometrics", ft=640, fk=20)}, threshold=5)
        profiles = [
            profile("p1", ("Bibliometrics",)),
            profile("p2", ("bibliometrics", "other things")),
            profile("p3", ("unrelated",)),
        ]
        master, reports = build_master_list(pool, profiles)
        assert reports == []
        assert len(master) == 1
        assert master[0].term_norm == "bibliometrics"
        assert master[0].freq_profile_interest == 2
        assert master[0].status is TermStatus.ACCEPTED

    def test_profile_only_term_needs_explicit_accept(self):
        pool = TermPool({}, threshold=5)
        profiles = [profile(f"p{i}", ("Science and Technology Policy",)) for i in range(72)]
        accepted, _ = build_master_list(
            pool,
            profiles,
            [ReviewDecision(DecisionTarget.TERM, "science and technology policy", DecisionAction.ACCEPT)],
        )
        assert len(accepted) == 1
        assert accepted[0].term_norm == "science and technology policy"
        assert accepted[0].freq_profile_interest == 72
        assert accepted[0].freq_title == 0

        silent, _ = build_master_list(pool, profiles)
        assert silent == []

    def test_reject_excludes(self):
        pool = TermPool({"open access": kt("open access", ft=50)}, threshold=5)
        profiles = [profile("p1", ("Open Access",))]
        decision = ReviewDecision(DecisionTarget.TERM, "open access", DecisionAction.REJECT)
        master, _ = build_master_list(pool, profiles, [decision])
        assert master == []

    def test_sorted_by_title_frequency(self):
        pool = TermPool(
            {
                "webometrics": kt("webometrics", ft=38),
                "bibliometrics": kt("bibliometrics", ft=640),
                "scientometrics": kt("scientometrics", ft=327),
            },
            threshold=5,
        )
        profiles = [profile("p1", ("webometrics", "bibliometrics", "scientometrics"))]
        master, _ = build_master_list(pool, profiles)
        assert [t.term_norm for t in master] == ["bibliometrics", "scientometrics", "webometrics"]

    def test_misspelling_merged_by_decision_counts_toward_canonical(self):
        pool = TermPool({"informetrics": kt("informetrics", ft=200)}, threshold=5)
        profiles = [profile("p1", ("Informetria",)), profile("p2", ("Informetrics",))]
        decision = ReviewDecision(
            DecisionTarget.TERM, "informetria", DecisionAction.MERGE_INTO, "informetrics"
        )
        master, reports = build_master_list(pool, profiles, [decision])
        assert reports == []
        assert len(master) == 1
        assert master[0].freq_profile_interest == 2
        assert "informetria" in master[0].variant_norms()

    def test_dangling_decision_reported(self):
        pool = TermPool({}, threshold=5)
        decision = ReviewDecision(DecisionTarget.TERM, "no such term", DecisionAction.REJECT)
        master, reports = build_master_list(pool, [], [decision])
        assert master == []
        assert len(reports) == 1
        assert "no such term" in reports[0]

    def test_master_subset_of_pool_and_seeds(self):
        pool = TermPool(
            {"bibliometrics": kt("bibliometrics", ft=640), "noise": kt("noise", ft=9)},
            threshold=5,
        )
        profiles = [profile("p1", ("bibliometrics", "Extra Interest"))]
        master, _ = build_master_list(pool, profiles)
        assert {t.term_norm for t in master} <= set(pool.terms) | {"extra interest"}
        for term in master:
            assert term.freq_profile_interest >= 1


class TestMasterCsv:
    def test_columns_and_rows(self):
        master = [kt("bibliometrics", ft=640, fk=25, fpi=382)]
        text = master_list_csv(master)
        lines = text.strip().splitlines()
        assert lines[0] == "term,freq_title,freq_article_keyword,freq_profile_interest"
        assert lines[1] == "bibliometrics,640,25,382"
