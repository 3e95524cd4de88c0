"""Labels discovered profiles as specialist, occasional, or false positive.

The rule: compute each author's h-index from their ingested document
list, take the h most-cited documents (the h-core), and require at
least half of the core to fall inside the field, judged by venue tier
first and title keywords second. Manual review decisions override
everything.
"""

from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from enum import Enum
from typing import Iterable, Mapping, Optional, Sequence

from .model import (
    AuthorProfile,
    DecisionAction,
    DecisionTarget,
    DisciplineConfig,
    DocumentRecord,
    ProfileLabel,
    ReviewDecision,
    VenueTier,
    contains_term,
    latest_decisions,
    year_sort_key,
)


class MembershipReason(str, Enum):
    CORE_VENUE = "core_venue"
    LIS_VENUE = "lis_venue"
    SCIENCE_STUDIES_VENUE = "science_studies_venue"
    TITLE_KEYWORD = "title_keyword"
    NONE = "none"


_TIER_REASONS = {
    VenueTier.CORE: MembershipReason.CORE_VENUE,
    VenueTier.LIS: MembershipReason.LIS_VENUE,
    VenueTier.SCIENCE_STUDIES: MembershipReason.SCIENCE_STUDIES_VENUE,
}


@dataclass(frozen=True)
class FieldMembership:
    """Whether one document counts as inside the discipline, and why."""

    cluster_id: str
    in_field: bool
    reason: MembershipReason

    def __post_init__(self) -> None:
        if self.in_field != (self.reason is not MembershipReason.NONE):
            raise ValueError(f"{self.cluster_id}: in_field inconsistent with reason")


@dataclass(frozen=True)
class ClassificationResult:
    """Outcome of classifying one profile.

    ``candidate_false_positive`` marks profiles with no in-field
    document anywhere in their list; they keep their computed label but
    are surfaced for manual review.
    """

    profile_id: str
    label: ProfileLabel
    h: int
    k: int
    h_core_ids: tuple[str, ...]
    candidate_false_positive: bool = False


def compute_h_index(citations: Sequence[int]) -> int:
    """Largest h such that at least h entries are >= h.

    Accepts an unsorted, possibly empty list.
    """
    ranked = sorted(citations, reverse=True)
    h = 0
    for i, c in enumerate(ranked, start=1):
        if c >= i:
            h = i
        else:
            break
    return h


def _select_core(items: Sequence[tuple[int, Optional[int], str]]) -> list[str]:
    """Pick the h-core from (citations, year, id) triples.

    Exactly h ids come back: citations descending, boundary ties broken
    by earlier year first (missing years last), then id.
    """
    h = compute_h_index([c for c, _, _ in items])
    ordered = sorted(items, key=lambda t: (-t[0], year_sort_key(t[1]), t[2]))
    return [i for _, _, i in ordered[:h]]


def h_core(documents: Sequence[DocumentRecord]) -> list[str]:
    """Cluster ids of the documents that contribute to the h-index."""
    return _select_core([(d.citations, d.year, d.cluster_id) for d in documents])


def field_membership(doc: DocumentRecord, config: DisciplineConfig) -> FieldMembership:
    """Decide whether a document falls inside the discipline.

    Venue tier is checked first (core, then the two adjacent journal
    groups); only venue-untiered documents fall through to the title
    scan against the master keyword list.
    """
    if doc.venue is not None:
        reason = _TIER_REASONS.get(doc.venue.tier)
        if reason is not None:
            return FieldMembership(doc.cluster_id, True, reason)
    for term in config.master_keywords:
        if contains_term(doc.title_norm, term):
            return FieldMembership(doc.cluster_id, True, MembershipReason.TITLE_KEYWORD)
    return FieldMembership(doc.cluster_id, False, MembershipReason.NONE)


def classify(
    profile: AuthorProfile,
    memberships: Mapping[str, FieldMembership],
    decisions: Iterable[ReviewDecision] = (),
    cluster_of: Optional[Mapping[str, str]] = None,
) -> ClassificationResult:
    """Label one profile by the h-core majority rule.

    Args:
        profile: the profile with its ingested document list.
        memberships: field membership keyed by cluster id.
        decisions: review log; a mark_false_positive decision on this
            profile wins outright.
        cluster_of: optional doc_id to cluster_id mapping; identity when
            omitted (documents not yet deduplicated).

    A profile is a specialist when h > 0 and at least half of its
    h-core documents are in-field (2k >= h). Everything else is
    occasional; profiles with zero in-field documents anywhere are
    additionally flagged as candidate false positives.
    """
    mapped = cluster_of or {}

    def cid(doc_id: str) -> str:
        return mapped.get(doc_id, doc_id)

    def in_field(cluster_id: str) -> bool:
        m = memberships.get(cluster_id)
        return m.in_field if m else False

    triples = [(d.citations, d.year, cid(d.doc_id)) for d in profile.documents]
    h = compute_h_index([c for c, _, _ in triples])
    core = _select_core(triples)
    k = sum(1 for c in core if in_field(c))
    any_in_field = any(in_field(cid(d.doc_id)) for d in profile.documents)

    profile_decisions = latest_decisions(decisions, DecisionTarget.PROFILE)
    decided = profile_decisions.get(profile.profile_id)
    if decided is not None and decided.action is DecisionAction.MARK_FALSE_POSITIVE:
        label = ProfileLabel.FALSE_POSITIVE
    elif h > 0 and 2 * k >= h:
        label = ProfileLabel.SPECIALIST
    else:
        label = ProfileLabel.OCCASIONAL

    return ClassificationResult(
        profile_id=profile.profile_id,
        label=label,
        h=h,
        k=k,
        h_core_ids=tuple(core),
        candidate_false_positive=not any_in_field,
    )


LABELS_HEADER = ["profile_id", "label", "h", "k", "route"]


def labels_csv(
    results: Sequence[ClassificationResult], profiles: Sequence[AuthorProfile]
) -> str:
    """Comma-separated label assignments, one row per profile."""
    routes = {p.profile_id: p.discovery_route for p in profiles}
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(LABELS_HEADER)
    for r in sorted(results, key=lambda r: r.profile_id):
        route = routes.get(r.profile_id)
        writer.writerow([r.profile_id, r.label.value, r.h, r.k, route.value if route else ""])
    return out.getvalue()


def community_report(labels: Iterable[ProfileLabel]) -> dict[str, tuple[int, Decimal]]:
    """Count and percentage per label, percentages rounded to 2 decimals.

    Empty input yields an empty report (no division).
    """
    counts = Counter(labels)
    total = sum(counts.values())
    if total == 0:
        return {}
    report = {}
    for label in ProfileLabel:
        if counts[label]:
            pct = (Decimal(counts[label]) * 100 / Decimal(total)).quantize(
                Decimal("0.01"), rounding=ROUND_HALF_UP
            )
            report[label.value] = (counts[label], pct)
    return report
