"""Shared domain types, identifier schemes, and normalization rules.

Every pipeline stage speaks in these types. All of them are immutable
value objects: stages never mutate a record in place, they build new
corpus snapshots (``dataclasses.replace`` is the idiom), which keeps
concurrent stage internals safe without locking.

Identifiers (``profile_id``, ``doc_id``, ``cluster_id``) are opaque
caller-supplied strings; nothing in the pipeline parses meaning out of
them.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence


class DiscoveryRoute(str, Enum):
    KEYWORD = "keyword"
    AFFILIATION = "affiliation"
    DOCUMENT_BACKLINK = "document_backlink"


class ProfileLabel(str, Enum):
    UNLABELED = "unlabeled"
    SPECIALIST = "specialist"
    OCCASIONAL = "occasional"
    FALSE_POSITIVE = "false_positive"


class DocumentKind(str, Enum):
    JOURNAL_ARTICLE = "journal_article"
    BOOK = "book"
    BOOK_CHAPTER = "book_chapter"
    OTHER = "other"


class VenueKind(str, Enum):
    JOURNAL = "journal"
    PUBLISHER = "publisher"


class VenueTier(str, Enum):
    CORE = "core"
    LIS = "lis"
    SCIENCE_STUDIES = "science_studies"
    MULTIDISCIPLINARY = "multidisciplinary"
    OTHER = "other"


class TermStatus(str, Enum):
    CANDIDATE = "candidate"
    ACCEPTED = "accepted"
    REJECTED = "rejected"


class DecisionTarget(str, Enum):
    PROFILE = "profile"
    TERM = "term"
    CLUSTER = "cluster"


class DecisionAction(str, Enum):
    MARK_FALSE_POSITIVE = "mark_false_positive"
    MERGE_INTO = "merge_into"
    ACCEPT = "accept"
    REJECT = "reject"
    SET_KIND = "set_kind"


MAX_INTERESTS = 5

_PUNCT_RE = re.compile(r"[^\w\s]|_")
_WS_RE = re.compile(r"\s+")


def normalize_title(raw: str) -> str:
    """Normalize a title for matching and deduplication.

    Lowercases, applies Unicode compatibility decomposition with
    combining marks removed, replaces punctuation with spaces, and
    collapses whitespace. Idempotent; empty input yields empty output.
    """
    text = unicodedata.normalize("NFKD", raw)
    text = "".join(c for c in text if not unicodedata.combining(c))
    text = text.lower()
    text = _PUNCT_RE.sub(" ", text)
    return _WS_RE.sub(" ", text).strip()


def normalize_venue(raw: str, aliases: Optional[Mapping[str, str]] = None) -> str:
    """Normalize a venue name, expanding configured abbreviation aliases.

    Same transform as :func:`normalize_title`, then a single lookup in
    the alias table (keys and values both normalized forms, e.g. the
    long journal name mapping to its short form). Deterministic for a
    fixed alias table.
    """
    base = normalize_title(raw)
    if aliases:
        return aliases.get(base, base)
    return base


def tokenize(normalized: str) -> list[str]:
    """Split an already-normalized string into tokens."""
    return normalized.split()


def contains_term(text_norm: str, term_norm: str) -> bool:
    """True when the term's tokens appear contiguously in the text.

    Both arguments must already be normalized. Matching respects token
    boundaries, so a term never matches inside a longer word.
    """
    term_tokens = term_norm.split()
    if not term_tokens:
        return False
    text_tokens = text_norm.split()
    n = len(term_tokens)
    return any(text_tokens[i : i + n] == term_tokens for i in range(len(text_tokens) - n + 1))


def surname_key(author: str) -> str:
    """Normalized surname of one author name string.

    Handles both "Surname, Given" and "Given Surname" orderings; for
    the latter the last token is taken.
    """
    if "," in author:
        head = author.split(",", 1)[0]
        tokens = tokenize(normalize_title(head))
        return tokens[-1] if tokens else ""
    tokens = tokenize(normalize_title(author))
    return tokens[-1] if tokens else ""


@dataclass(frozen=True)
class VenueRef:
    """A publication venue: a journal or a book publisher."""

    name_raw: str
    name_norm: str
    venue_kind: VenueKind
    tier: VenueTier = VenueTier.OTHER


@dataclass(frozen=True)
class DocumentRef:
    """One document row as listed on an author's profile page."""

    doc_id: str
    title_raw: str
    authors: tuple[str, ...]
    venue_raw: Optional[str]
    venue_kind: Optional[VenueKind]
    year: Optional[int]
    citations: int
    kind: DocumentKind = DocumentKind.JOURNAL_ARTICLE
    parent_doc_id: Optional[str] = None

    def __post_init__(self) -> None:
        if self.citations < 0:
            raise ValueError(f"negative citations on {self.doc_id}")
        if (self.kind is DocumentKind.BOOK_CHAPTER) != (self.parent_doc_id is not None):
            raise ValueError(
                f"{self.doc_id}: kind {self.kind.value} inconsistent with parent link"
            )


@dataclass(frozen=True)
class AuthorProfile:
    """One scholar-profile record.

    ``documents`` is ordered by citations descending. ``total_citations``
    comes from the profile header and may exceed the sum over the listed
    documents (document lists can be capped upstream).
    """

    profile_id: str
    display_name: str
    interests: tuple[str, ...]
    verified_domain: Optional[str]
    total_citations: int
    h_index_reported: Optional[int]
    documents: tuple[DocumentRef, ...]
    discovery_route: Optional[DiscoveryRoute] = None
    label: ProfileLabel = ProfileLabel.UNLABELED

    def __post_init__(self) -> None:
        if len(self.interests) > MAX_INTERESTS:
            raise ValueError(
                f"{self.profile_id}: {len(self.interests)} interests, max {MAX_INTERESTS}"
            )
        if self.total_citations < 0:
            raise ValueError(f"{self.profile_id}: negative citation total")

    def interest_norms(self) -> tuple[str, ...]:
        return tuple(normalize_title(i) for i in self.interests)


@dataclass(frozen=True)
class DocumentRecord:
    """One scholarly output in the corpus.

    ``doc_id`` identifies the raw record; ``cluster_id`` is the
    post-dedup identity (equal to ``doc_id`` until clusters are
    assigned). After version merging, ``citations`` is the maximum
    across the cluster's versions.
    """

    doc_id: str
    cluster_id: str
    title_raw: str
    title_norm: str
    authors: tuple[str, ...]
    author_profile_ids: tuple[str, ...]
    year: Optional[int]
    venue: Optional[VenueRef]
    citations: int
    kind: DocumentKind
    parent_cluster_id: Optional[str] = None

    def __post_init__(self) -> None:
        if self.citations < 0:
            raise ValueError(f"negative citations on {self.doc_id}")
        if self.title_norm != normalize_title(self.title_raw):
            raise ValueError(f"{self.doc_id}: title_norm does not match title_raw")
        if (self.kind is DocumentKind.BOOK_CHAPTER) != (self.parent_cluster_id is not None):
            raise ValueError(
                f"{self.doc_id}: kind {self.kind.value} inconsistent with parent link"
            )

    def first_author_surname(self) -> str:
        return surname_key(self.authors[0]) if self.authors else ""


@dataclass(frozen=True)
class KeywordTerm:
    """A normalized vocabulary term with per-source frequencies.

    ``variants`` holds the raw spellings that map to this term and is
    never empty; ``term_norm`` is the canonical member. Matching is
    always done on normalized variant forms.
    """

    term_norm: str
    variants: frozenset[str]
    freq_title: int = 0
    freq_article_keyword: int = 0
    freq_profile_interest: int = 0
    status: TermStatus = TermStatus.CANDIDATE

    def __post_init__(self) -> None:
        if not self.variants:
            raise ValueError(f"term {self.term_norm!r} has no variants")

    def variant_norms(self) -> frozenset[str]:
        return frozenset(normalize_title(v) for v in self.variants) | {self.term_norm}

    def doc_frequency(self) -> int:
        return self.freq_title + self.freq_article_keyword


@dataclass(frozen=True)
class ReviewDecision:
    """One row of the externalized manual-review log.

    Decisions are append-only; when several decisions address the same
    target, the later one wins at apply time.
    """

    target: DecisionTarget
    target_id: str
    action: DecisionAction
    arg: Optional[str] = None
    note: str = ""


def latest_decisions(
    decisions: Iterable[ReviewDecision], target: DecisionTarget
) -> dict[str, ReviewDecision]:
    """Resolve later-wins semantics for one target type.

    Keys are normalized for term targets so decision files may spell
    terms the way the reviewer saw them.
    """
    resolved: dict[str, ReviewDecision] = {}
    for d in decisions:
        if d.target is target:
            key = normalize_title(d.target_id) if target is DecisionTarget.TERM else d.target_id
            resolved[key] = d
    return resolved


@dataclass(frozen=True)
class DisciplineConfig:
    """All tunable parameters of a pipeline run.

    Defaults are the published method parameters: term frequency
    threshold 5, top 100 documents per specialist, top 1,000 documents
    overall, and the at-least-half specialist rule.
    """

    master_keywords: tuple[str, ...] = ()
    affiliation_domains: tuple[str, ...] = ()
    venue_tiers: Mapping[VenueTier, frozenset[str]] = field(default_factory=dict)
    venue_aliases: Mapping[str, str] = field(default_factory=dict)
    stopwords: frozenset[str] = frozenset()
    min_term_freq: int = 5
    top_docs_per_author: int = 100
    top_n_documents: int = 1000
    specialist_rule: Fraction = Fraction(1, 2)
    max_rounds: int = 10
    network_top_documents: int = 200
    network_top_specialists: int = 100
    binary_network_edges: bool = False
    workers: int = 1


def venue_tier(name_norm: str, tiers: Mapping[VenueTier, frozenset[str]]) -> VenueTier:
    """Tier of a normalized venue name; unknown venues get OTHER.

    Pure function of (name, configuration): tier assignment derives
    solely from the configured venue lists.
    """
    for tier, names in tiers.items():
        if name_norm in names:
            return tier
    return VenueTier.OTHER


def make_venue(
    raw: str,
    kind: VenueKind,
    aliases: Optional[Mapping[str, str]] = None,
    tiers: Optional[Mapping[VenueTier, frozenset[str]]] = None,
) -> VenueRef:
    norm = normalize_venue(raw, aliases)
    tier = venue_tier(norm, tiers) if tiers else VenueTier.OTHER
    return VenueRef(name_raw=raw.strip(), name_norm=norm, venue_kind=kind, tier=tier)


def year_sort_key(year: Optional[int]) -> tuple[int, int]:
    # Missing years sort after any real year.
    return (1, 0) if year is None else (0, year)


def assign_clusters(records: Sequence[DocumentRecord]) -> list[DocumentRecord]:
    """Group duplicate versions of the same document under one cluster_id.

    Two records share a cluster when they agree exactly on normalized
    title and first-author surname and their years differ by at most
    one; a record with no year matches any year within its title/surname
    group. Proximity is transitive (chains of ±1 years merge). The
    cluster_id is the lexicographically smallest member doc_id, and
    parent links are remapped onto cluster ids.

    Deliberately conservative: no fuzzy edit-distance matching.
    """
    by_group: dict[tuple[str, str], list[int]] = {}
    for idx, rec in enumerate(records):
        by_group.setdefault((rec.title_norm, rec.first_author_surname()), []).append(idx)

    parent = list(range(len(records)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i: int, j: int) -> None:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[rj] = ri

    for members in by_group.values():
        undated = [m for m in members if records[m].year is None]
        if undated:
            # A record with no year is compatible with every year, so it
            # transitively joins the whole group.
            for a, b in zip(members, members[1:]):
                union(a, b)
            continue
        dated = sorted(members, key=lambda m: (records[m].year, records[m].doc_id))
        for a, b in zip(dated, dated[1:]):
            if records[b].year - records[a].year <= 1:  # type: ignore[operator]
                union(a, b)

    cluster_ids: dict[int, str] = {}
    for idx in range(len(records)):
        root = find(idx)
        current = cluster_ids.get(root)
        if current is None or records[idx].doc_id < current:
            cluster_ids[root] = records[idx].doc_id

    # Parent links were written against doc ids; remap them onto the
    # cluster that now carries that document.
    doc_to_cluster = {rec.doc_id: cluster_ids[find(i)] for i, rec in enumerate(records)}
    out = []
    for idx, rec in enumerate(records):
        new_parent = rec.parent_cluster_id
        if new_parent is not None:
            new_parent = doc_to_cluster.get(new_parent, new_parent)
        out.append(
            replace(rec, cluster_id=cluster_ids[find(idx)], parent_cluster_id=new_parent)
        )
    return out
