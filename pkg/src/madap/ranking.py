"""Ranks the merged document corpus and computes the published metric tables.

Pipeline order: build the author pool (specialist top lists plus extra
ingested documents), merge duplicate versions, roll book-chapter
citations up into their parent books, select the top-N highly cited
documents, then derive the per-venue, per-publisher, and per-author
tables and the term-by-year series.
"""

from __future__ import annotations

import csv
import hashlib
import io
from collections import Counter, defaultdict
from dataclasses import dataclass, field, replace
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable, Mapping, Optional, Sequence

from .classification import compute_h_index
from .errors import EmptyClass
from .ingestion import FieldTaggedRecord
from .model import (
    AuthorProfile,
    DecisionAction,
    DecisionTarget,
    DocumentKind,
    DocumentRecord,
    ProfileLabel,
    ReviewDecision,
    VenueKind,
    VenueRef,
    VenueTier,
    assign_clusters,
    contains_term,
    latest_decisions,
    make_venue,
    normalize_title,
    year_sort_key,
)

UNKNOWN_YEAR = -1

_BOOKISH = frozenset({DocumentKind.BOOK, DocumentKind.BOOK_CHAPTER})


@dataclass(frozen=True)
class MetricRow:
    """One aggregated table row for a venue, publisher, or author."""

    entity: str
    documents: int
    citations: int
    c_per_doc: Decimal
    hcd_pct: Decimal
    citations_pct: Decimal


@dataclass(frozen=True)
class AuthorRow:
    name: str
    citations: int
    h: int


@dataclass(frozen=True)
class HcdSet:
    """The top-N highly cited documents with their class partition.

    ``members`` is rank-ordered. The two class sets partition members by
    kind: journal articles on one side, books (plus standalone chapters
    whose parent book is absent) on the other; documents of other kinds
    belong to neither class but still count toward citation totals.
    """

    members: tuple[DocumentRecord, ...]
    journal_ids: frozenset[str]
    book_ids: frozenset[str]

    def total_citations(self) -> int:
        return sum(m.citations for m in self.members)


@dataclass(frozen=True)
class PoolStats:
    specialist_records: int
    extra_records: int
    merged_records: int

    @property
    def duplicates_removed(self) -> int:
        return self.specialist_records + self.extra_records - self.merged_records


def merge_versions(
    records: Sequence[DocumentRecord],
) -> tuple[list[DocumentRecord], dict[str, tuple[str, ...]]]:
    """Collapse each cluster to its highest-cited version.

    Bibliographic fields come from the winning version (ties broken by
    earlier year, then doc_id); profile backlinks are unioned across
    versions. Returns the merged records in first-seen cluster order
    plus a provenance map listing every member doc_id of each collapsed
    multi-version cluster. Idempotent on its own output.
    """
    groups: dict[str, list[DocumentRecord]] = {}
    for r in records:
        groups.setdefault(r.cluster_id, []).append(r)

    merged = []
    provenance = {}
    for cluster_id, members in groups.items():
        winner = sorted(
            members, key=lambda r: (-r.citations, year_sort_key(r.year), r.doc_id)
        )[0]
        if len(members) > 1:
            pids = sorted({p for m in members for p in m.author_profile_ids})
            merged.append(replace(winner, author_profile_ids=tuple(pids)))
            provenance[cluster_id] = tuple(sorted(m.doc_id for m in members))
        else:
            merged.append(winner)
    return merged, provenance


def rollup_books(
    records: Sequence[DocumentRecord],
) -> tuple[list[DocumentRecord], list[str]]:
    """Fold chapter citations into their parent books.

    Book records come back with effective citations = own + sum of
    chapters; chapter records keep their own counts. A chapter whose
    parent book is missing from the pool is left to rank standalone and
    reported as a warning.
    """
    books = {r.cluster_id for r in records if r.kind is DocumentKind.BOOK}
    sums: Counter[str] = Counter()
    warnings = []
    for r in records:
        if r.kind is DocumentKind.BOOK_CHAPTER:
            if r.parent_cluster_id in books:
                sums[r.parent_cluster_id] += r.citations
            else:
                warnings.append(
                    f"orphan chapter {r.cluster_id}: parent "
                    f"{r.parent_cluster_id} not in pool, ranked standalone"
                )
    out = [
        replace(r, citations=r.citations + sums[r.cluster_id])
        if r.kind is DocumentKind.BOOK and sums[r.cluster_id]
        else r
        for r in records
    ]
    return out, warnings


def _default_venue_kind(kind: DocumentKind) -> VenueKind:
    return VenueKind.PUBLISHER if kind in _BOOKISH else VenueKind.JOURNAL


def record_from_ref(
    ref,
    profile_id: str,
    aliases: Optional[Mapping[str, str]] = None,
    tiers: Optional[Mapping[VenueTier, frozenset[str]]] = None,
) -> DocumentRecord:
    """Promote one profile-page document row to a corpus record."""
    venue = None
    if ref.venue_raw:
        venue = make_venue(
            ref.venue_raw, ref.venue_kind or _default_venue_kind(ref.kind), aliases, tiers
        )
    return DocumentRecord(
        doc_id=ref.doc_id,
        cluster_id=ref.doc_id,
        title_raw=ref.title_raw,
        title_norm=normalize_title(ref.title_raw),
        authors=ref.authors,
        author_profile_ids=(profile_id,),
        year=ref.year,
        venue=venue,
        citations=ref.citations,
        kind=ref.kind,
        parent_cluster_id=ref.parent_doc_id,
    )


def record_from_tagged(
    rec: FieldTaggedRecord,
    aliases: Optional[Mapping[str, str]] = None,
    tiers: Optional[Mapping[VenueTier, frozenset[str]]] = None,
) -> DocumentRecord:
    """Promote one field-tagged bibliographic record to a corpus record.

    Reads AU (authors), SO (journal) or PU (publisher), PY, TC
    (citations), DT (document kind, defaulting to journal article), and
    AN (record id; a digest of title/year/author fills in when absent).
    """
    title = rec.title()
    authors = rec.tags.get("AU", ())
    year = rec.year()
    ids = rec.tags.get("AN", ())
    if ids:
        doc_id = ids[0]
    else:
        seed = f"{normalize_title(title)}|{year}|{authors[0] if authors else ''}"
        doc_id = "x" + hashlib.sha1(seed.encode()).hexdigest()[:10]

    kinds = rec.tags.get("DT", ())
    try:
        kind = DocumentKind(kinds[0]) if kinds else DocumentKind.JOURNAL_ARTICLE
    except ValueError:
        kind = DocumentKind.JOURNAL_ARTICLE

    venue = None
    source = rec.source()
    publishers = rec.tags.get("PU", ())
    if source:
        venue = make_venue(source, VenueKind.JOURNAL, aliases, tiers)
    elif publishers:
        venue = make_venue(publishers[0], VenueKind.PUBLISHER, aliases, tiers)

    citations = 0
    cited = rec.tags.get("TC", ())
    if cited:
        try:
            citations = max(0, int(cited[0]))
        except ValueError:
            citations = 0

    return DocumentRecord(
        doc_id=doc_id,
        cluster_id=doc_id,
        title_raw=title,
        title_norm=normalize_title(title),
        authors=authors,
        author_profile_ids=(),
        year=year,
        venue=venue,
        citations=citations,
        kind=kind if kind is not DocumentKind.BOOK_CHAPTER else DocumentKind.OTHER,
    )


def _apply_cluster_decisions(
    records: list[DocumentRecord], decisions: Iterable[ReviewDecision]
) -> tuple[list[DocumentRecord], list[str]]:
    """Apply reviewer overrides to clustered records.

    merge_into joins two clusters, reject drops one, set_kind overrides
    a record's kind. Decisions that reference unknown ids or impossible
    kind changes are reported, not fatal.
    """
    resolved = latest_decisions(decisions, DecisionTarget.CLUSTER)
    if not resolved:
        return records, []

    reports = []
    doc_to_cluster = {r.doc_id: r.cluster_id for r in records}
    cluster_ids = {r.cluster_id for r in records}

    def resolve(raw: str) -> Optional[str]:
        if raw in cluster_ids:
            return raw
        return doc_to_cluster.get(raw)

    remap: dict[str, str] = {}
    rejected: set[str] = set()
    kind_overrides: dict[str, DocumentKind] = {}

    for target_id, decision in sorted(resolved.items()):
        cid = resolve(target_id)
        if cid is None:
            reports.append(f"cluster decision on unknown id {target_id}")
            continue
        if decision.action is DecisionAction.MERGE_INTO:
            other = resolve(decision.arg or "")
            if other is None:
                reports.append(f"cluster merge target missing: {decision.arg}")
            elif other != cid:
                joined = min(cid, other)
                remap[max(cid, other)] = joined
        elif decision.action is DecisionAction.REJECT:
            rejected.add(cid)
        elif decision.action is DecisionAction.SET_KIND:
            try:
                kind_overrides[cid] = DocumentKind(decision.arg or "")
            except ValueError:
                reports.append(f"set_kind with unknown kind {decision.arg!r} on {cid}")
        else:
            reports.append(
                f"unsupported cluster action {decision.action.value} on {target_id}"
            )

    def final(cid: str) -> str:
        seen = set()
        while cid in remap and cid not in seen:
            seen.add(cid)
            cid = remap[cid]
        return cid

    out = []
    for r in records:
        cid = final(r.cluster_id)
        if cid in rejected:
            continue
        parent = final(r.parent_cluster_id) if r.parent_cluster_id else None
        kind = kind_overrides.get(cid, r.kind)
        if kind is not r.kind:
            if kind is DocumentKind.BOOK_CHAPTER:
                reports.append(f"cannot set {cid} to book_chapter without a parent")
                kind = r.kind
            elif r.kind is DocumentKind.BOOK_CHAPTER:
                parent = None
        out.append(replace(r, cluster_id=cid, parent_cluster_id=parent, kind=kind))
    return out, reports


def author_pool(
    profiles: Sequence[AuthorProfile],
    extra_docs: Sequence[DocumentRecord] = (),
    aliases: Optional[Mapping[str, str]] = None,
    tiers: Optional[Mapping[VenueTier, frozenset[str]]] = None,
    cap: int = 100,
    decisions: Iterable[ReviewDecision] = (),
) -> tuple[list[DocumentRecord], PoolStats, list[str], dict[str, tuple[str, ...]]]:
    """Build the ranking corpus.

    Takes each specialist's top ``cap`` most-cited documents, unions
    them with the extra ingested documents, clusters duplicates, applies
    reviewer cluster decisions, and merges versions. Occasional and
    false-positive profiles contribute nothing. The last element maps
    each collapsed multi-version cluster to its member doc_ids.
    """
    specialist_records = []
    for p in profiles:
        if p.label is not ProfileLabel.SPECIALIST:
            continue
        refs = sorted(p.documents, key=lambda r: (-r.citations, r.doc_id))[:cap]
        specialist_records.extend(
            record_from_ref(ref, p.profile_id, aliases, tiers) for ref in refs
        )

    combined = specialist_records + list(extra_docs)
    clustered = assign_clusters(combined)
    clustered, reports = _apply_cluster_decisions(clustered, decisions)
    merged, provenance = merge_versions(clustered)
    stats = PoolStats(
        specialist_records=len(specialist_records),
        extra_records=len(extra_docs),
        merged_records=len(merged),
    )
    return merged, stats, reports, provenance


def select_hcd(pool: Sequence[DocumentRecord], n: int) -> HcdSet:
    """Top-n documents by effective citations.

    Chapters whose parent book is in the pool never appear as rows
    (their citations already live in the parent); boundary ties break by
    earlier year, then cluster_id. The class partition splits journal
    articles from books, counting orphan chapters with the books.
    """
    books = {r.cluster_id for r in pool if r.kind is DocumentKind.BOOK}
    eligible = [
        r
        for r in pool
        if not (
            r.kind is DocumentKind.BOOK_CHAPTER and r.parent_cluster_id in books
        )
    ]
    ranked = sorted(
        eligible, key=lambda r: (-r.citations, year_sort_key(r.year), r.cluster_id)
    )
    members = tuple(ranked[: max(n, 0)])
    return HcdSet(
        members=members,
        journal_ids=frozenset(
            m.cluster_id for m in members if m.kind is DocumentKind.JOURNAL_ARTICLE
        ),
        book_ids=frozenset(m.cluster_id for m in members if m.kind in _BOOKISH),
    )


def citations_per_article(citations: int, documents: int) -> Decimal:
    """Whole-number citations-per-article cell: the truncated quotient."""
    return Decimal(citations // documents)


def citations_per_document(citations: int, documents: int) -> Decimal:
    """Two-decimal citations-per-document cell, rounded half up."""
    return (Decimal(citations) / Decimal(documents)).quantize(
        Decimal("0.01"), rounding=ROUND_HALF_UP
    )


def share_pct(numerator: int, denominator: int) -> Decimal:
    """One-decimal percentage cell, rounded half up; 0.0 on empty sets."""
    if denominator == 0:
        return Decimal("0.0")
    return (Decimal(numerator) * 100 / Decimal(denominator)).quantize(
        Decimal("0.1"), rounding=ROUND_HALF_UP
    )



def _group_rows(
    members: Sequence[DocumentRecord],
    class_size: int,
    total_citations: int,
    per_doc: str,
) -> list[MetricRow]:
    by_venue: dict[str, list[DocumentRecord]] = defaultdict(list)
    for m in members:
        if m.venue is not None:
            by_venue[m.venue.name_norm].append(m)

    rows = []
    for _, docs in by_venue.items():
        display = min(d.venue.name_raw for d in docs)
        count = len(docs)
        citations = sum(d.citations for d in docs)
        if per_doc == "floor":
            c_per_doc = citations_per_article(citations, count)
        else:
            c_per_doc = citations_per_document(citations, count)
        rows.append(
            MetricRow(
                entity=display,
                documents=count,
                citations=citations,
                c_per_doc=c_per_doc,
                hcd_pct=share_pct(count, class_size),
                citations_pct=share_pct(citations, total_citations),
            )
        )
    rows.sort(key=lambda r: (-r.documents, -r.citations, r.entity))
    return rows


def venue_table(hcd: HcdSet) -> list[MetricRow]:
    """Per-journal aggregates over the highly cited journal articles.

    Citations per article print as whole numbers, truncated; the share
    column divides by the journal-article class size; the citation share
    divides by the citations of the entire top-N set.
    """
    members = [m for m in hcd.members if m.cluster_id in hcd.journal_ids]
    if not members:
        raise EmptyClass("no journal articles among the highly cited documents")
    return _group_rows(
        members, len(members), hcd.total_citations(), per_doc="floor"
    )


def publisher_table(hcd: HcdSet) -> list[MetricRow]:
    """Per-publisher aggregates over the highly cited books.

    Citations per document print to two decimals; the share column
    divides by the book class size.
    """
    members = [m for m in hcd.members if m.cluster_id in hcd.book_ids]
    if not members:
        raise EmptyClass("no books among the highly cited documents")
    return _group_rows(
        members, len(members), hcd.total_citations(), per_doc="decimal"
    )


def author_table(
    profiles: Sequence[AuthorProfile],
) -> tuple[list[AuthorRow], list[AuthorRow]]:
    """Specialist and occasional author rankings, one row per profile.

    Sorted by total citations, then computed h, then name. The h column
    is recomputed from the ingested document list rather than trusting
    the platform-reported value.
    """

    def rows(label: ProfileLabel) -> list[AuthorRow]:
        out = [
            AuthorRow(
                name=p.display_name,
                citations=p.total_citations,
                h=compute_h_index([d.citations for d in p.documents]),
            )
            for p in profiles
            if p.label is label
        ]
        out.sort(key=lambda r: (-r.citations, -r.h, r.name))
        return out

    return rows(ProfileLabel.SPECIALIST), rows(ProfileLabel.OCCASIONAL)


def term_year_series(
    documents: Sequence[DocumentRecord], terms: Sequence[str]
) -> dict[str, dict[int, int]]:
    """Per-term counts of title matches bucketed by publication year.

    Terms must be normalized. Documents without a year land in the
    UNKNOWN_YEAR bucket, which plots exclude.
    """
    series: dict[str, dict[int, int]] = {t: {} for t in terms}
    for doc in documents:
        year = doc.year if doc.year is not None else UNKNOWN_YEAR
        for t in terms:
            if contains_term(doc.title_norm, t):
                series[t][year] = series[t].get(year, 0) + 1
    return series


def _writer(out: io.StringIO) -> "csv.writer":
    return csv.writer(out, lineterminator="\n")


def table2_authors_csv(
    specialists: Sequence[AuthorRow],
    occasionals: Sequence[AuthorRow],
    limit: int = 25,
) -> str:
    out = io.StringIO()
    w = _writer(out)
    w.writerow(
        [
            "specialist_author",
            "specialist_citations",
            "specialist_h_index",
            "occasional_author",
            "occasional_citations",
            "occasional_h_index",
        ]
    )
    s = specialists[:limit]
    o = occasionals[:limit]
    for i in range(max(len(s), len(o))):
        left = [s[i].name, s[i].citations, s[i].h] if i < len(s) else ["", "", ""]
        right = [o[i].name, o[i].citations, o[i].h] if i < len(o) else ["", "", ""]
        w.writerow(left + right)
    return out.getvalue()


def table3_documents_csv(hcd: HcdSet, limit: int = 25) -> str:
    out = io.StringIO()
    w = _writer(out)
    w.writerow(["title", "authors", "source", "year", "citations"])
    for m in hcd.members[:limit]:
        w.writerow(
            [
                m.title_raw,
                "; ".join(m.authors),
                m.venue.name_raw if m.venue else "",
                m.year if m.year is not None else "",
                m.citations,
            ]
        )
    return out.getvalue()


def table4_journals_csv(rows: Sequence[MetricRow], limit: int = 25) -> str:
    out = io.StringIO()
    w = _writer(out)
    w.writerow(["journal", "documents", "citations", "c_per_article", "hcd_pct", "citations_pct"])
    for r in rows[:limit]:
        w.writerow([r.entity, r.documents, r.citations, r.c_per_doc, r.hcd_pct, r.citations_pct])
    return out.getvalue()


def table5_publishers_csv(rows: Sequence[MetricRow], limit: int = 20) -> str:
    out = io.StringIO()
    w = _writer(out)
    w.writerow(["publisher", "hcd", "hcd_pct", "citations", "citations_pct", "c_per_document"])
    for r in rows[:limit]:
        w.writerow([r.entity, r.documents, r.hcd_pct, r.citations, r.citations_pct, r.c_per_doc])
    return out.getvalue()


def fig1_series_csv(series: Mapping[str, Mapping[int, int]]) -> str:
    terms = sorted(series)
    years = sorted(
        {y for counts in series.values() for y in counts if y != UNKNOWN_YEAR}
    )
    out = io.StringIO()
    w = _writer(out)
    w.writerow(["year"] + terms)
    for y in years:
        w.writerow([y] + [series[t].get(y, 0) for t in terms])
    return out.getvalue()
