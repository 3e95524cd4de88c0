"""Tests for h-index math, field membership, and profile labeling."""

from __future__ import annotations

import random
from decimal import Decimal

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from madap.classification import (
    ClassificationResult,
    FieldMembership,
    MembershipReason,
    classify,
    community_report,
    compute_h_index,
    field_membership,
    h_core,
)
from madap.model import (
    AuthorProfile,
    DecisionAction,
    DecisionTarget,
    DisciplineConfig,
    DocumentKind,
    DocumentRef,
    ProfileLabel,
    ReviewDecision,
    VenueKind,
    VenueRef,
    VenueTier,
    normalize_title,
)
from test_model import make_record


def oracle_h_index(citations: list[int]) -> int:
    """Check the defining inequality for every h from n down to 0."""
    for h in range(len(citations), -1, -1):
        if sum(1 for c in citations if c >= h) >= h:
            return h
    return 0


def make_ref(doc_id: str, citations: int, year: int | None = 2000, in_field_title: bool = False) -> DocumentRef:
    title = "citation analysis study" if in_field_title else "protein folding study"
    return DocumentRef(
        doc_id=doc_id,
        title_raw=title,
        authors=("A",),
        venue_raw=None,
        venue_kind=None,
        year=year,
        citations=citations,
    )


def make_profile(doc_specs: list[tuple[int, bool]], profile_id: str = "p1") -> tuple[AuthorProfile, dict[str, FieldMembership]]:
    """Profile from (citations, in_field) pairs, memberships keyed by doc_id."""
    docs = []
    memberships = {}
    for i, (citations, in_field) in enumerate(doc_specs):
        doc_id = f"{profile_id}-d{i}"
        docs.append(make_ref(doc_id, citations))
        reason = MembershipReason.TITLE_KEYWORD if in_field else MembershipReason.NONE
        memberships[doc_id] = FieldMembership(doc_id, in_field, reason)
    profile = AuthorProfile(
        profile_id=profile_id,
        display_name="Author",
        interests=(),
        verified_domain=None,
        total_citations=sum(c for c, _ in doc_specs),
        h_index_reported=None,
        documents=tuple(docs),
    )
    return profile, memberships


class TestComputeHIndex:
    def test_empty(self):
        assert compute_h_index([]) == 0

    def test_mixed(self):
        assert compute_h_index([10, 8, 5, 4, 3]) == oracle_h_index([10, 8, 5, 4, 3]) == 4

    def test_one_giant(self):
        assert compute_h_index([25, 8, 5, 3, 3]) == oracle_h_index([25, 8, 5, 3, 3]) == 3

    def test_unsorted_input(self):
        assert compute_h_index([3, 10, 4, 8, 5]) == 4

    def test_all_zero(self):
        assert compute_h_index([0, 0, 0]) == 0

    def test_random_vectors_match_oracle(self):
        rng = random.Random(20260819)
        for _ in range(10_000):
            n = rng.randrange(0, 201)
            vec = [rng.randrange(0, 10_001) for _ in range(n)]
            assert compute_h_index(vec) == oracle_h_index(vec)

    @given(st.lists(st.integers(min_value=0, max_value=500), max_size=60))
    def test_matches_oracle(self, vec):
        assert compute_h_index(vec) == oracle_h_index(vec)


class TestHCore:
    def test_all_tied(self):
        docs = [make_record(f"d{i}", f"title {i}", citations=9) for i in range(3)]
        assert sorted(h_core(docs)) == ["d0", "d1", "d2"]

    def test_tie_at_boundary(self):
        cits = [5, 4, 4, 4, 1]
        docs = [make_record(f"d{i}", f"title {i}", citations=c) for i, c in enumerate(cits)]
        core = h_core(docs)
        assert len(core) == 4
        assert set(core) == {"d0", "d1", "d2", "d3"}

    def test_empty(self):
        assert h_core([]) == []

    def test_boundary_tiebreak_year_then_id(self):
        docs = [
            make_record("d9", "a", citations=3, year=1990),
            make_record("d1", "b", citations=3, year=2010),
            make_record("d5", "c", citations=3, year=None),
            make_record("d2", "d", citations=3, year=1990),
        ]
        # h = 3: earliest years win, then lexicographic id; missing year last.
        assert h_core(docs) == ["d2", "d9", "d1"]

    @given(st.lists(st.integers(min_value=0, max_value=30), max_size=40))
    def test_size_equals_h(self, cits):
        docs = [make_record(f"d{i:02d}", f"t{i}", citations=c) for i, c in enumerate(cits)]
        assert len(h_core(docs)) == compute_h_index(cits)


CONFIG = DisciplineConfig(
    master_keywords=("bibliometrics", "citation analysis", "h index"),
    venue_tiers={
        VenueTier.CORE: frozenset({"scientometrics"}),
        VenueTier.LIS: frozenset({"journal of documentation"}),
        VenueTier.SCIENCE_STUDIES: frozenset({"social studies of science"}),
    },
)


def venue(name: str, tier: VenueTier) -> VenueRef:
    return VenueRef(name, normalize_title(name), VenueKind.JOURNAL, tier)


class TestFieldMembership:
    def test_core_venue(self):
        doc = make_record("d1", "Anything at all", venue=venue("Scientometrics", VenueTier.CORE))
        m = field_membership(doc, CONFIG)
        assert m.in_field and m.reason is MembershipReason.CORE_VENUE

    def test_science_studies_venue(self):
        doc = make_record(
            "d1", "Anything", venue=venue("Social Studies of Science", VenueTier.SCIENCE_STUDIES)
        )
        m = field_membership(doc, CONFIG)
        assert m.in_field and m.reason is MembershipReason.SCIENCE_STUDIES_VENUE

    def test_untiered_venue_and_plain_title_is_out(self):
        doc = make_record(
            "d1",
            "Evolution of the social network of scientific collaborations",
            venue=venue("Physica A", VenueTier.OTHER),
        )
        m = field_membership(doc, CONFIG)
        assert not m.in_field and m.reason is MembershipReason.NONE

    def test_title_keyword(self):
        doc = make_record("d1", "A citation analysis of everything")
        m = field_membership(doc, CONFIG)
        assert m.in_field and m.reason is MembershipReason.TITLE_KEYWORD

    def test_keyword_respects_token_boundaries(self):
        doc = make_record("d1", "The paleobibliometrics era")
        assert not field_membership(doc, CONFIG).in_field

    def test_venue_tier_beats_title(self):
        doc = make_record(
            "d1", "A citation analysis of everything", venue=venue("Scientometrics", VenueTier.CORE)
        )
        assert field_membership(doc, CONFIG).reason is MembershipReason.CORE_VENUE

    def test_membership_consistency_enforced(self):
        with pytest.raises(ValueError):
            FieldMembership("c1", True, MembershipReason.NONE)


class TestClassify:
    def test_exactly_half_is_specialist(self):
        profile, members = make_profile([(10, True), (9, True), (8, False), (7, False), (1, False)])
        result = classify(profile, members)
        assert (result.h, result.k) == (4, 2)
        assert result.label is ProfileLabel.SPECIALIST

    def test_under_half_is_occasional(self):
        profile, members = make_profile(
            [(10, True), (9, True), (8, False), (7, False), (6, False), (1, True)]
        )
        result = classify(profile, members)
        assert (result.h, result.k) == (5, 2)
        assert result.label is ProfileLabel.OCCASIONAL

    def test_false_positive_decision_wins(self):
        profile, members = make_profile([(10, True), (9, True), (8, True)])
        decision = ReviewDecision(
            DecisionTarget.PROFILE, "p1", DecisionAction.MARK_FALSE_POSITIVE
        )
        result = classify(profile, members, [decision])
        assert result.label is ProfileLabel.FALSE_POSITIVE

    def test_later_decision_overrides(self):
        profile, members = make_profile([(10, True), (9, True), (8, True)])
        decisions = [
            ReviewDecision(DecisionTarget.PROFILE, "p1", DecisionAction.MARK_FALSE_POSITIVE),
            ReviewDecision(DecisionTarget.PROFILE, "p1", DecisionAction.ACCEPT),
        ]
        assert classify(profile, members, decisions).label is ProfileLabel.SPECIALIST

    def test_h_zero_is_occasional(self):
        profile, members = make_profile([(0, True)])
        result = classify(profile, members)
        assert result.h == 0
        assert result.label is ProfileLabel.OCCASIONAL

    def test_no_in_field_anywhere_flags_candidate(self):
        profile, members = make_profile([(10, False), (9, False)])
        result = classify(profile, members)
        assert result.candidate_false_positive
        assert result.label is ProfileLabel.OCCASIONAL

    def test_in_field_outside_core_clears_flag(self):
        profile, members = make_profile([(10, False), (9, False), (1, True)])
        result = classify(profile, members)
        assert not result.candidate_false_positive

    def test_cluster_mapping_applies(self):
        profile, members = make_profile([(10, True), (9, False)])
        # Both docs collapse onto the in-field cluster.
        cluster_of = {"p1-d0": "p1-d0", "p1-d1": "p1-d0"}
        result = classify(profile, members, cluster_of=cluster_of)
        assert result.k == 2

    @given(st.permutations(range(6)), st.data())
    def test_permutation_invariant(self, order, data):
        specs = [(12, True), (9, False), (9, True), (5, False), (3, True), (1, False)]
        profile, members = make_profile(specs)
        shuffled = AuthorProfile(
            profile_id=profile.profile_id,
            display_name=profile.display_name,
            interests=profile.interests,
            verified_domain=profile.verified_domain,
            total_citations=profile.total_citations,
            h_index_reported=profile.h_index_reported,
            documents=tuple(profile.documents[i] for i in order),
        )
        assert classify(profile, members) == classify(shuffled, members)

    @settings(max_examples=150)
    @given(st.lists(st.tuples(st.integers(0, 40), st.booleans()), min_size=1, max_size=25))
    def test_low_cited_out_of_field_doc_never_flips(self, specs):
        profile, members = make_profile(specs)
        before = classify(profile, members)
        if before.label is not ProfileLabel.SPECIALIST or before.h < 1:
            return
        extra_id = "p1-extra"
        grown = AuthorProfile(
            profile_id=profile.profile_id,
            display_name=profile.display_name,
            interests=profile.interests,
            verified_domain=profile.verified_domain,
            total_citations=profile.total_citations,
            h_index_reported=profile.h_index_reported,
            documents=profile.documents + (make_ref(extra_id, before.h - 1),),
        )
        members[extra_id] = FieldMembership(extra_id, False, MembershipReason.NONE)
        after = classify(grown, members)
        assert (after.h, after.k) == (before.h, before.k)
        assert after.label is ProfileLabel.SPECIALIST


class TestCommunityReport:
    def test_two_way_split(self):
        labels = [ProfileLabel.SPECIALIST] * 396 + [ProfileLabel.OCCASIONAL] * 415
        report = community_report(labels)
        assert report["specialist"] == (396, Decimal("48.83"))
        assert report["occasional"] == (415, Decimal("51.17"))

    def test_empty(self):
        assert community_report([]) == {}

    def test_percentages_cover_total(self):
        labels = [ProfileLabel.SPECIALIST] * 2 + [ProfileLabel.FALSE_POSITIVE]
        report = community_report(labels)
        assert report["specialist"] == (2, Decimal("66.67"))
        assert report["false_positive"] == (1, Decimal("33.33"))
