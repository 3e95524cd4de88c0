"""Tests for domain types, normalizers, and duplicate clustering."""

from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from madap.model import (
    AuthorProfile,
    DecisionAction,
    DecisionTarget,
    DocumentKind,
    DocumentRecord,
    DocumentRef,
    ReviewDecision,
    VenueKind,
    VenueRef,
    VenueTier,
    assign_clusters,
    latest_decisions,
    make_venue,
    normalize_title,
    normalize_venue,
    surname_key,
    venue_tier,
)


def make_record(
    doc_id: str,
    title: str,
    author: str = "Price, D.",
    year: int | None = 2000,
    citations: int = 0,
    kind: DocumentKind = DocumentKind.JOURNAL_ARTICLE,
    parent: str | None = None,
    venue: VenueRef | None = None,
) -> DocumentRecord:
    return DocumentRecord(
        doc_id=doc_id,
        cluster_id=doc_id,
        title_raw=title,
        title_norm=normalize_title(title),
        authors=(author,),
        author_profile_ids=(),
        year=year,
        venue=venue,
        citations=citations,
        kind=kind,
        parent_cluster_id=parent,
    )


class TestNormalizeTitle:
    def test_punctuation_and_case(self):
        assert normalize_title("Bibliometrics: An Overview ") == "bibliometrics an overview"

    def test_comma(self):
        assert normalize_title("Little science, big science") == "little science big science"

    def test_diacritics_stripped(self):
        assert normalize_title("Análisis de la investigación") == "analisis de la investigacion"

    def test_underscore_is_punctuation(self):
        assert normalize_title("web_of_science") == "web of science"

    def test_empty(self):
        assert normalize_title("") == ""
        assert normalize_title("  \t ") == ""

    @given(st.text(max_size=200))
    def test_idempotent(self, raw):
        once = normalize_title(raw)
        assert normalize_title(once) == once

    @given(st.text(max_size=200))
    def test_output_shape(self, raw):
        out = normalize_title(raw)
        assert out == out.strip()
        assert "  " not in out
        assert out == out.lower()


class TestNormalizeVenue:
    ALIASES = {
        "journal of the american society for information science and technology": "jasist",
        "proceedings of the national academy of sciences": "pnas",
    }

    def test_alias_expansion(self):
        long_name = "Journal of the American Society for Information Science and Technology"
        assert normalize_venue(long_name, self.ALIASES) == "jasist"

    def test_unknown_passes_through(self):
        assert normalize_venue("Acta Obscura", self.ALIASES) == "acta obscura"

    def test_short_form_normalizes(self):
        assert normalize_venue("PNAS ", self.ALIASES) == "pnas"

    @given(st.text(max_size=120))
    def test_idempotent(self, raw):
        once = normalize_venue(raw, self.ALIASES)
        assert normalize_venue(once, self.ALIASES) == once


class TestSurnameKey:
    def test_comma_order(self):
        assert surname_key("Price, Derek J. de Solla") == "price"

    def test_natural_order(self):
        assert surname_key("Eugene Garfield") == "garfield"

    def test_single_token(self):
        assert surname_key("Aristotle") == "aristotle"

    def test_empty(self):
        assert surname_key("") == ""


class TestInvariants:
    def test_negative_citations_rejected(self):
        with pytest.raises(ValueError):
            make_record("d1", "x", citations=-1)

    def test_chapter_requires_parent(self):
        with pytest.raises(ValueError):
            make_record("d1", "x", kind=DocumentKind.BOOK_CHAPTER, parent=None)

    def test_parent_requires_chapter_kind(self):
        with pytest.raises(ValueError):
            make_record("d1", "x", kind=DocumentKind.JOURNAL_ARTICLE, parent="c9")

    def test_title_norm_must_match(self):
        with pytest.raises(ValueError):
            DocumentRecord(
                doc_id="d1",
                cluster_id="d1",
                title_raw="Mapping Science",
                title_norm="something else",
                authors=("A",),
                author_profile_ids=(),
                year=2000,
                venue=None,
                citations=0,
                kind=DocumentKind.JOURNAL_ARTICLE,
            )

    def test_interest_cap(self):
        with pytest.raises(ValueError):
            AuthorProfile(
                profile_id="p1",
                display_name="A",
                interests=tuple("abcdef"),
                verified_domain=None,
                total_citations=0,
                h_index_reported=None,
                documents=(),
            )

    def test_docref_chapter_link(self):
        with pytest.raises(ValueError):
            DocumentRef(
                doc_id="d1",
                title_raw="t",
                authors=("A",),
                venue_raw=None,
                venue_kind=None,
                year=None,
                citations=0,
                kind=DocumentKind.BOOK_CHAPTER,
                parent_doc_id=None,
            )


class TestVenueTier:
    TIERS = {
        VenueTier.CORE: frozenset({"scientometrics"}),
        VenueTier.LIS: frozenset({"journal of documentation"}),
    }

    def test_lookup(self):
        assert venue_tier("scientometrics", self.TIERS) is VenueTier.CORE
        assert venue_tier("journal of documentation", self.TIERS) is VenueTier.LIS

    def test_unknown_is_other(self):
        assert venue_tier("acta obscura", self.TIERS) is VenueTier.OTHER

    def test_make_venue(self):
        v = make_venue("Scientometrics", VenueKind.JOURNAL, aliases={}, tiers=self.TIERS)
        assert v.name_norm == "scientometrics"
        assert v.tier is VenueTier.CORE


class TestLatestDecisions:
    def test_later_wins(self):
        d1 = ReviewDecision(DecisionTarget.TERM, "Informetrics", DecisionAction.REJECT)
        d2 = ReviewDecision(DecisionTarget.TERM, "informetrics", DecisionAction.ACCEPT)
        resolved = latest_decisions([d1, d2], DecisionTarget.TERM)
        assert resolved["informetrics"].action is DecisionAction.ACCEPT

    def test_targets_filtered(self):
        d = ReviewDecision(DecisionTarget.PROFILE, "p1", DecisionAction.MARK_FALSE_POSITIVE)
        assert latest_decisions([d], DecisionTarget.TERM) == {}


class TestAssignClusters:
    def test_adjacent_years_merge(self):
        recs = assign_clusters(
            [
                make_record("d2", "Mapping Science", year=2001),
                make_record("d1", "Mapping science!", year=2000),
            ]
        )
        assert {r.cluster_id for r in recs} == {"d1"}

    def test_year_gap_two_stays_separate(self):
        recs = assign_clusters(
            [
                make_record("d1", "Mapping Science", year=2000),
                make_record("d2", "Mapping Science", year=2002),
            ]
        )
        assert {r.cluster_id for r in recs} == {"d1", "d2"}

    def test_chain_is_transitive(self):
        recs = assign_clusters(
            [
                make_record("d1", "Mapping Science", year=1999),
                make_record("d2", "Mapping Science", year=2000),
                make_record("d3", "Mapping Science", year=2001),
            ]
        )
        assert {r.cluster_id for r in recs} == {"d1"}

    def test_different_surname_separate(self):
        recs = assign_clusters(
            [
                make_record("d1", "Mapping Science", author="Price, D."),
                make_record("d2", "Mapping Science", author="Garfield, E."),
            ]
        )
        assert {r.cluster_id for r in recs} == {"d1", "d2"}

    def test_missing_year_joins_group(self):
        recs = assign_clusters(
            [
                make_record("d1", "Mapping Science", year=2000),
                make_record("d2", "Mapping Science", year=None),
            ]
        )
        assert {r.cluster_id for r in recs} == {"d1"}

    def test_parent_links_remapped(self):
        recs = assign_clusters(
            [
                make_record("b2", "The Handbook", year=2001, kind=DocumentKind.BOOK),
                make_record("b1", "The Handbook", year=2000, kind=DocumentKind.BOOK),
                make_record(
                    "c1", "A chapter", year=2000, kind=DocumentKind.BOOK_CHAPTER, parent="b2"
                ),
            ]
        )
        chapter = next(r for r in recs if r.doc_id == "c1")
        assert chapter.parent_cluster_id == "b1"

    @settings(max_examples=200)
    @given(
        st.lists(
            st.tuples(
                st.sampled_from(["mapping science", "citation study"]),
                st.sampled_from(["Price, D.", "Garfield, E."]),
                st.one_of(st.none(), st.integers(min_value=1999, max_value=2004)),
            ),
            max_size=8,
        )
    )
    def test_matches_pairwise_closure(self, rows):
        records = [
            make_record(f"d{i}", title, author=author, year=year)
            for i, (title, author, year) in enumerate(rows)
        ]
        clustered = assign_clusters(records)

        def compatible(a: DocumentRecord, b: DocumentRecord) -> bool:
            if a.title_norm != b.title_norm:
                return False
            if a.first_author_surname() != b.first_author_surname():
                return False
            if a.year is None or b.year is None:
                return True
            return abs(a.year - b.year) <= 1

        # Brute-force transitive closure over the pairwise rule.
        n = len(records)
        comp = list(range(n))
        changed = True
        while changed:
            changed = False
            for i in range(n):
                for j in range(n):
                    if compatible(records[i], records[j]) and comp[i] != comp[j]:
                        target = min(comp[i], comp[j])
                        source = max(comp[i], comp[j])
                        comp = [target if c == source else c for c in comp]
                        changed = True

        expected_groups = {}
        for i in range(n):
            expected_groups.setdefault(comp[i], set()).add(records[i].doc_id)
        actual_groups = {}
        for rec in clustered:
            actual_groups.setdefault(rec.cluster_id, set()).add(rec.doc_id)

        assert sorted(expected_groups.values(), key=sorted) == sorted(
            actual_groups.values(), key=sorted
        )
        for cid, members in actual_groups.items():
            assert cid == min(members)
