"""Parsers for every external input the pipeline consumes.

Profile pages arrive as HTML fixture files behind a fetcher boundary
(the only shipped fetcher reads a local directory; nothing here talks
to a network). Bibliographic exports use a line-oriented field-tagged
format. Review decisions, venue tiers, and venue aliases are small
comma-separated files. Profiles and documents round-trip through
line-delimited JSON record files.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import re
from dataclasses import dataclass, field
from html.parser import HTMLParser
from importlib import resources
from pathlib import Path
from typing import IO, Iterable, Mapping, Optional, Sequence, Union

from .errors import (
    ConfigError,
    DuplicateAcrossTiers,
    MalformedPage,
    TruncatedList,
    UnknownAction,
    UnreadableStream,
)
from .model import (
    AuthorProfile,
    DecisionAction,
    DecisionTarget,
    DiscoveryRoute,
    DocumentKind,
    DocumentRecord,
    DocumentRef,
    KeywordTerm,
    ProfileLabel,
    ReviewDecision,
    TermStatus,
    VenueKind,
    VenueRef,
    VenueTier,
    normalize_title,
    normalize_venue,
)

logger = logging.getLogger(__name__)

TextSource = Union[str, Path, IO[str]]
ByteSource = Union[str, Path, IO[bytes], bytes]


@dataclass
class IngestStats:
    """Data-quality counters accumulated while parsing."""

    records_read: int = 0
    dropped_no_title: int = 0
    missing_citation_cells: int = 0
    warnings: list[str] = field(default_factory=list)

    def warn(self, message: str) -> None:
        self.warnings.append(message)
        logger.warning("%s", message)


def _read_text(source: TextSource) -> str:
    if isinstance(source, (str, Path)):
        return Path(source).read_text(encoding="utf-8")
    return source.read()


def _read_bytes(source: ByteSource) -> bytes:
    if isinstance(source, bytes):
        return source
    if isinstance(source, (str, Path)):
        return Path(source).read_bytes()
    return source.read()


# ---------------------------------------------------------------------------
# Profile-page fixtures.


@dataclass(frozen=True)
class ProfilePageFixture:
    """Raw markup of one profile page plus its paginated list pages."""

    profile_id: str
    pages: tuple[bytes, ...]


class _Element:
    __slots__ = ("tag", "attrs", "children")

    def __init__(self, tag: str, attrs: dict[str, Optional[str]]):
        self.tag = tag
        self.attrs = attrs
        self.children: list[Union[_Element, str]] = []

    def attr(self, name: str, default: str = "") -> str:
        value = self.attrs.get(name)
        return default if value is None else value

    def walk(self):
        for child in self.children:
            if isinstance(child, _Element):
                yield child
                yield from child.walk()

    def find(self, tag: Optional[str] = None, **attrs: str) -> Optional[_Element]:
        for el in self.walk():
            if tag is not None and el.tag != tag:
                continue
            if all(el.attrs.get(k) == v for k, v in attrs.items()):
                return el
        return None

    def find_all(self, tag: Optional[str] = None, **attrs: str) -> list[_Element]:
        out = []
        for el in self.walk():
            if tag is not None and el.tag != tag:
                continue
            if all(el.attrs.get(k) == v for k, v in attrs.items()):
                out.append(el)
        return out

    def text(self) -> str:
        parts: list[str] = []

        def collect(node: _Element) -> None:
            for child in node.children:
                if isinstance(child, str):
                    parts.append(child)
                else:
                    collect(child)

        collect(self)
        return re.sub(r"\s+", " ", "".join(parts)).strip()


class _TreeBuilder(HTMLParser):
    VOID = frozenset({"br", "hr", "img", "meta", "link", "input"})

    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.root = _Element("__root__", {})
        self._stack = [self.root]

    def handle_starttag(self, tag, attrs):
        el = _Element(tag, dict(attrs))
        self._stack[-1].children.append(el)
        if tag not in self.VOID:
            self._stack.append(el)

    def handle_startendtag(self, tag, attrs):
        self._stack[-1].children.append(_Element(tag, dict(attrs)))

    def handle_endtag(self, tag):
        for i in range(len(self._stack) - 1, 0, -1):
            if self._stack[i].tag == tag:
                del self._stack[i:]
                break

    def handle_data(self, data):
        if data:
            self._stack[-1].children.append(data)


def _parse_html(markup: bytes) -> _Element:
    try:
        text = markup.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise MalformedPage(f"page is not valid UTF-8: {exc}") from exc
    builder = _TreeBuilder()
    builder.feed(text)
    builder.close()
    return builder.root


def _parse_int_cell(text: str, what: str) -> int:
    cleaned = text.replace(",", "").strip()
    try:
        return int(cleaned)
    except ValueError as exc:
        raise MalformedPage(f"unparseable {what}: {text!r}") from exc


_KIND_BY_NAME = {k.value: k for k in DocumentKind}
_VENUE_KIND_BY_NAME = {k.value: k for k in VenueKind}


def _parse_doc_row(row: _Element, page_no: int, stats: IngestStats) -> DocumentRef:
    doc_id = row.attr("data-doc-id")
    if not doc_id:
        raise MalformedPage(f"document row on page {page_no} lacks data-doc-id")
    kind_name = row.attr("data-kind", DocumentKind.JOURNAL_ARTICLE.value)
    kind = _KIND_BY_NAME.get(kind_name)
    if kind is None:
        raise MalformedPage(f"{doc_id}: unknown document kind {kind_name!r}")
    parent = row.attrs.get("data-parent") or None

    def cell(name: str) -> Optional[_Element]:
        return row.find("td", **{"class": name})

    title_cell = cell("title")
    if title_cell is None or not title_cell.text():
        raise MalformedPage(f"{doc_id}: missing title cell")
    authors_cell = cell("authors")
    authors = tuple(
        a.strip() for a in (authors_cell.text() if authors_cell else "").split(";") if a.strip()
    )

    venue_raw: Optional[str] = None
    venue_kind: Optional[VenueKind] = None
    venue_cell = cell("venue")
    if venue_cell is not None and venue_cell.text():
        venue_raw = venue_cell.text()
        venue_kind = _VENUE_KIND_BY_NAME.get(venue_cell.attr("data-venue-kind", "journal"))
        if venue_kind is None:
            raise MalformedPage(f"{doc_id}: unknown venue kind")

    year_cell = cell("year")
    year_text = year_cell.text() if year_cell else ""
    year = _parse_int_cell(year_text, "year") if year_text else None

    cited_cell = cell("cited")
    cited_text = cited_cell.text() if cited_cell else ""
    if cited_text:
        citations = _parse_int_cell(cited_text, "citation count")
    else:
        citations = 0
        stats.missing_citation_cells += 1

    return DocumentRef(
        doc_id=doc_id,
        title_raw=title_cell.text(),
        authors=authors,
        venue_raw=venue_raw,
        venue_kind=venue_kind,
        year=year,
        citations=citations,
        kind=kind,
        parent_doc_id=parent,
    )


def parse_profile_page(
    fixture: ProfilePageFixture, stats: Optional[IngestStats] = None
) -> AuthorProfile:
    """Parse one profile fixture into an AuthorProfile.

    The first page must carry the header (profile id, name, citation
    total); document rows are collected across all pages and returned
    ordered by citations descending. An empty citation cell parses as 0
    and increments the data-quality counter.

    Raises:
        MalformedPage: required header parts are absent or cells are
            unparseable.
        TruncatedList: the page count declared by the pager does not
            match the pages provided.
    """
    stats = stats if stats is not None else IngestStats()
    if not fixture.pages:
        raise MalformedPage(f"{fixture.profile_id}: fixture has no pages")
    first = _parse_html(fixture.pages[0])

    header = first.find("div", id="profile")
    if header is None:
        raise MalformedPage(f"{fixture.profile_id}: no profile header block")
    profile_id = header.attr("data-profile-id")
    if not profile_id:
        raise MalformedPage(f"{fixture.profile_id}: header lacks a profile id")
    name_el = first.find("h1", id="name")
    if name_el is None or not name_el.text():
        raise MalformedPage(f"{profile_id}: no display name")

    verified_domain: Optional[str] = None
    verified_el = first.find(id="verified")
    if verified_el is not None:
        text = verified_el.text()
        marker = "verified email at "
        if text.lower().startswith(marker):
            verified_domain = text[len(marker) :].strip().lower() or None

    interests: tuple[str, ...] = ()
    interests_el = first.find("ul", id="interests")
    if interests_el is not None:
        interests = tuple(li.text() for li in interests_el.find_all("li") if li.text())

    total_citations: Optional[int] = None
    h_reported: Optional[int] = None
    stats_el = first.find("table", id="stats")
    if stats_el is not None:
        for tr in stats_el.find_all("tr"):
            heading = tr.find("th")
            value = tr.find("td")
            if heading is None or value is None:
                continue
            label = heading.text().lower()
            if label == "citations":
                total_citations = _parse_int_cell(value.text(), "citation total")
            elif label == "h-index":
                h_reported = _parse_int_cell(value.text(), "h-index")
    if total_citations is None:
        raise MalformedPage(f"{profile_id}: no citation total in header")

    declared_pages = 1
    pager = first.find(id="pager")
    if pager is not None and pager.attr("data-pages"):
        declared_pages = _parse_int_cell(pager.attr("data-pages"), "page count")
    if len(fixture.pages) != declared_pages:
        raise TruncatedList(
            f"{profile_id}: pager declares {declared_pages} page(s), "
            f"fixture has {len(fixture.pages)}"
        )

    documents: list[DocumentRef] = []
    for page_no, raw in enumerate(fixture.pages, start=1):
        tree = first if page_no == 1 else _parse_html(raw)
        for row in tree.find_all("tr", **{"class": "doc"}):
            documents.append(_parse_doc_row(row, page_no, stats))
    documents.sort(key=lambda d: -d.citations)

    return AuthorProfile(
        profile_id=profile_id,
        display_name=name_el.text(),
        interests=interests,
        verified_domain=verified_domain,
        total_citations=total_citations,
        h_index_reported=h_reported,
        documents=tuple(documents),
    )


class FixtureDirectory:
    """The shipped profile fetcher: reads page fixtures from a directory.

    Page files are named ``<profile_id>.html`` with continuation pages
    ``<profile_id>.2.html``, ``<profile_id>.3.html`` and so on.
    """

    def __init__(self, root: Union[str, Path]):
        self.root = Path(root)

    def list_profiles(self) -> list[str]:
        ids = set()
        for path in self.root.glob("*.html"):
            stem = path.name[: -len(".html")]
            base, dot, suffix = stem.rpartition(".")
            if dot and suffix.isdigit():
                ids.add(base)
            else:
                ids.add(stem)
        return sorted(ids)

    def fetch(self, profile_id: str) -> ProfilePageFixture:
        first = self.root / f"{profile_id}.html"
        if not first.is_file():
            raise MalformedPage(f"{profile_id}: no fixture page in {self.root}")
        pages = [first.read_bytes()]
        numbered = []
        for path in self.root.glob(f"{profile_id}.*.html"):
            suffix = path.name[len(profile_id) + 1 : -len(".html")]
            if suffix.isdigit():
                numbered.append((int(suffix), path))
        for _, path in sorted(numbered):
            pages.append(path.read_bytes())
        return ProfilePageFixture(profile_id=profile_id, pages=tuple(pages))

    def load_all(self, stats: Optional[IngestStats] = None) -> list[AuthorProfile]:
        return [parse_profile_page(self.fetch(pid), stats) for pid in self.list_profiles()]


# ---------------------------------------------------------------------------
# Field-tagged bibliographic exports.


@dataclass(frozen=True)
class FieldTaggedRecord:
    """One bibliographic record as a tag -> values map.

    TI is guaranteed present and non-empty; unknown tags are preserved
    but nothing downstream reads them.
    """

    tags: Mapping[str, tuple[str, ...]]

    def title(self) -> str:
        return self.tags["TI"][0]

    def keywords(self) -> tuple[str, ...]:
        return self.tags.get("DE", ())

    def year(self) -> Optional[int]:
        values = self.tags.get("PY", ())
        if not values:
            return None
        try:
            return int(values[0])
        except ValueError:
            return None

    def source(self) -> Optional[str]:
        values = self.tags.get("SO", ())
        return values[0] if values else None


_TAG_LINE = re.compile(r"^([A-Z][A-Z0-9]) (.*)$")


def parse_field_tagged(
    source: ByteSource, stats: Optional[IngestStats] = None
) -> list[FieldTaggedRecord]:
    """Parse a field-tagged export into records.

    Records are separated by an ``ER`` line; field lines are
    ``TG value`` with indented continuation lines extending the current
    value; DE values additionally split on ";". Records without a title
    are dropped with a warning, never aborting the batch.

    Raises:
        UnreadableStream: the input is not valid UTF-8.
    """
    stats = stats if stats is not None else IngestStats()
    raw = _read_bytes(source)
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise UnreadableStream(f"field-tagged input is not valid UTF-8: {exc}") from exc

    records: list[FieldTaggedRecord] = []
    tags: dict[str, list[str]] = {}
    current_tag: Optional[str] = None

    def finalize() -> None:
        nonlocal tags, current_tag
        if tags:
            stats.records_read += 1
            titles = [t for t in tags.get("TI", []) if t.strip()]
            if not titles:
                stats.dropped_no_title += 1
                stats.warn("field-tagged record without TI dropped")
            else:
                cleaned = {}
                for tag, values in tags.items():
                    if tag == "DE":
                        split = [v.strip() for raw_v in values for v in raw_v.split(";")]
                        cleaned[tag] = tuple(v for v in split if v)
                    else:
                        cleaned[tag] = tuple(values)
                records.append(FieldTaggedRecord(tags=cleaned))
        tags = {}
        current_tag = None

    for line in text.splitlines():
        if line.strip() == "ER":
            finalize()
            continue
        if not line.strip():
            continue
        if line[0] in " \t":
            if current_tag and tags.get(current_tag):
                tags[current_tag][-1] += " " + line.strip()
            continue
        match = _TAG_LINE.match(line)
        if match:
            tag, value = match.group(1), match.group(2).strip()
            tags.setdefault(tag, []).append(value)
            current_tag = tag
    finalize()
    return records


# ---------------------------------------------------------------------------
# Review decisions.

DECISION_HEADER = ["target", "target_id", "action", "arg", "note"]

_TARGET_BY_NAME = {t.value: t for t in DecisionTarget}
_ACTION_BY_NAME = {a.value: a for a in DecisionAction}


def load_review_decisions(source: TextSource) -> list[ReviewDecision]:
    """Load the manual-review log, in file order.

    Later rows on the same target override earlier ones at apply time;
    loading preserves every row.

    Raises:
        UnknownAction: a row names an action or target outside the
            recognized sets.
    """
    text = _read_text(source)
    reader = csv.DictReader(io.StringIO(text))
    decisions = []
    for row_no, row in enumerate(reader, start=2):
        target = _TARGET_BY_NAME.get((row.get("target") or "").strip())
        if target is None:
            raise UnknownAction(f"row {row_no}: unknown decision target {row.get('target')!r}")
        action = _ACTION_BY_NAME.get((row.get("action") or "").strip())
        if action is None:
            raise UnknownAction(f"row {row_no}: unknown decision action {row.get('action')!r}")
        arg = (row.get("arg") or "").strip() or None
        decisions.append(
            ReviewDecision(
                target=target,
                target_id=(row.get("target_id") or "").strip(),
                action=action,
                arg=arg,
                note=(row.get("note") or "").strip(),
            )
        )
    return decisions


def dump_review_decisions(decisions: Iterable[ReviewDecision]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(DECISION_HEADER)
    for d in decisions:
        writer.writerow([d.target.value, d.target_id, d.action.value, d.arg or "", d.note])
    return out.getvalue()


# ---------------------------------------------------------------------------
# Venue tiers, aliases, stop words.

_TIER_BY_NAME = {t.value: t for t in VenueTier}


def load_venue_tiers(
    source: TextSource, aliases: Optional[Mapping[str, str]] = None
) -> dict[VenueTier, frozenset[str]]:
    """Load tier lists as normalized venue-name sets.

    Raises:
        ConfigError: unknown tier label.
        DuplicateAcrossTiers: one venue listed under two tiers.
    """
    text = _read_text(source)
    seen: dict[str, VenueTier] = {}
    tiers: dict[VenueTier, set[str]] = {}
    for row_no, row in enumerate(csv.DictReader(io.StringIO(text)), start=2):
        tier = _TIER_BY_NAME.get((row.get("tier") or "").strip())
        if tier is None:
            raise ConfigError(f"venue tier file row {row_no}: unknown tier {row.get('tier')!r}")
        name = normalize_venue((row.get("name") or "").strip(), aliases)
        if not name:
            raise ConfigError(f"venue tier file row {row_no}: empty venue name")
        if name in seen and seen[name] is not tier:
            raise DuplicateAcrossTiers(
                f"venue {name!r} listed under both {seen[name].value} and {tier.value}"
            )
        seen[name] = tier
        tiers.setdefault(tier, set()).add(name)
    return {tier: frozenset(names) for tier, names in tiers.items()}


def load_venue_aliases(source: TextSource) -> dict[str, str]:
    """Load the venue alias table as normalized variant -> canonical.

    Raises:
        ConfigError: an alias target is itself aliased (chains are not
            allowed; every variant must map directly to its canonical
            form).
    """
    text = _read_text(source)
    aliases: dict[str, str] = {}
    for row in csv.DictReader(io.StringIO(text)):
        variant = normalize_title((row.get("variant") or "").strip())
        canonical = normalize_title((row.get("canonical") or "").strip())
        if not variant or not canonical or variant == canonical:
            continue
        aliases[variant] = canonical
    for canonical in aliases.values():
        if canonical in aliases:
            raise ConfigError(
                f"venue alias {canonical!r} chains onto {aliases[canonical]!r}"
            )
    return aliases


def load_stopwords(source: TextSource) -> frozenset[str]:
    words = set()
    for line in _read_text(source).splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(normalize_title(line))
    return frozenset(w for w in words if w)


def _data_text(name: str) -> str:
    return resources.files("madap.data").joinpath(name).read_text(encoding="utf-8")


def default_venue_aliases() -> dict[str, str]:
    return load_venue_aliases(io.StringIO(_data_text("venue_aliases.csv")))


def default_venue_tiers(aliases: Optional[Mapping[str, str]] = None) -> dict[VenueTier, frozenset[str]]:
    table = default_venue_aliases() if aliases is None else aliases
    return load_venue_tiers(io.StringIO(_data_text("venue_tiers.csv")), table)


def default_stopwords() -> frozenset[str]:
    return load_stopwords(io.StringIO(_data_text("stopwords.txt")))


# ---------------------------------------------------------------------------
# Profile / document record files (line-delimited JSON).


def _ref_to_dict(ref: DocumentRef) -> dict:
    return {
        "doc_id": ref.doc_id,
        "title_raw": ref.title_raw,
        "authors": list(ref.authors),
        "venue_raw": ref.venue_raw,
        "venue_kind": ref.venue_kind.value if ref.venue_kind else None,
        "year": ref.year,
        "citations": ref.citations,
        "kind": ref.kind.value,
        "parent_doc_id": ref.parent_doc_id,
    }


def _ref_from_dict(d: dict) -> DocumentRef:
    return DocumentRef(
        doc_id=d["doc_id"],
        title_raw=d["title_raw"],
        authors=tuple(d["authors"]),
        venue_raw=d.get("venue_raw"),
        venue_kind=VenueKind(d["venue_kind"]) if d.get("venue_kind") else None,
        year=d.get("year"),
        citations=d["citations"],
        kind=DocumentKind(d["kind"]),
        parent_doc_id=d.get("parent_doc_id"),
    )


def profile_to_dict(profile: AuthorProfile) -> dict:
    return {
        "profile_id": profile.profile_id,
        "display_name": profile.display_name,
        "interests": list(profile.interests),
        "verified_domain": profile.verified_domain,
        "total_citations": profile.total_citations,
        "h_index_reported": profile.h_index_reported,
        "documents": [_ref_to_dict(ref) for ref in profile.documents],
        "discovery_route": profile.discovery_route.value if profile.discovery_route else None,
        "label": profile.label.value,
    }


def profile_from_dict(d: dict) -> AuthorProfile:
    return AuthorProfile(
        profile_id=d["profile_id"],
        display_name=d["display_name"],
        interests=tuple(d["interests"]),
        verified_domain=d.get("verified_domain"),
        total_citations=d["total_citations"],
        h_index_reported=d.get("h_index_reported"),
        documents=tuple(_ref_from_dict(ref) for ref in d["documents"]),
        discovery_route=DiscoveryRoute(d["discovery_route"]) if d.get("discovery_route") else None,
        label=ProfileLabel(d.get("label", ProfileLabel.UNLABELED.value)),
    )


def document_to_dict(doc: DocumentRecord) -> dict:
    venue = None
    if doc.venue is not None:
        venue = {
            "name_raw": doc.venue.name_raw,
            "name_norm": doc.venue.name_norm,
            "venue_kind": doc.venue.venue_kind.value,
            "tier": doc.venue.tier.value,
        }
    return {
        "doc_id": doc.doc_id,
        "cluster_id": doc.cluster_id,
        "title_raw": doc.title_raw,
        "title_norm": doc.title_norm,
        "authors": list(doc.authors),
        "author_profile_ids": list(doc.author_profile_ids),
        "year": doc.year,
        "venue": venue,
        "citations": doc.citations,
        "kind": doc.kind.value,
        "parent_cluster_id": doc.parent_cluster_id,
    }


def document_from_dict(d: dict) -> DocumentRecord:
    venue = None
    if d.get("venue"):
        v = d["venue"]
        venue = VenueRef(
            name_raw=v["name_raw"],
            name_norm=v["name_norm"],
            venue_kind=VenueKind(v["venue_kind"]),
            tier=VenueTier(v.get("tier", VenueTier.OTHER.value)),
        )
    return DocumentRecord(
        doc_id=d["doc_id"],
        cluster_id=d["cluster_id"],
        title_raw=d["title_raw"],
        title_norm=d["title_norm"],
        authors=tuple(d["authors"]),
        author_profile_ids=tuple(d["author_profile_ids"]),
        year=d.get("year"),
        venue=venue,
        citations=d["citations"],
        kind=DocumentKind(d["kind"]),
        parent_cluster_id=d.get("parent_cluster_id"),
    )


def _dump_jsonl(dicts: Iterable[dict]) -> str:
    lines = [json.dumps(d, sort_keys=True, ensure_ascii=False, separators=(",", ":")) for d in dicts]
    return "\n".join(lines) + ("\n" if lines else "")


def dump_profiles(profiles: Sequence[AuthorProfile]) -> str:
    return _dump_jsonl(profile_to_dict(p) for p in profiles)


def load_profiles(source: TextSource) -> list[AuthorProfile]:
    text = _read_text(source)
    return [profile_from_dict(json.loads(line)) for line in text.splitlines() if line.strip()]


def dump_documents(documents: Sequence[DocumentRecord]) -> str:
    return _dump_jsonl(document_to_dict(d) for d in documents)


def load_documents(source: TextSource) -> list[DocumentRecord]:
    text = _read_text(source)
    return [document_from_dict(json.loads(line)) for line in text.splitlines() if line.strip()]


def term_to_dict(term: KeywordTerm) -> dict:
    return {
        "term_norm": term.term_norm,
        "variants": sorted(term.variants),
        "freq_title": term.freq_title,
        "freq_article_keyword": term.freq_article_keyword,
        "freq_profile_interest": term.freq_profile_interest,
        "status": term.status.value,
    }


def term_from_dict(d: dict) -> KeywordTerm:
    return KeywordTerm(
        term_norm=d["term_norm"],
        variants=frozenset(d["variants"]),
        freq_title=d.get("freq_title", 0),
        freq_article_keyword=d.get("freq_article_keyword", 0),
        freq_profile_interest=d.get("freq_profile_interest", 0),
        status=TermStatus(d.get("status", TermStatus.CANDIDATE.value)),
    )


def dump_terms(terms: Sequence[KeywordTerm]) -> str:
    return _dump_jsonl(term_to_dict(t) for t in terms)


def load_terms(source: TextSource) -> list[KeywordTerm]:
    text = _read_text(source)
    return [term_from_dict(json.loads(line)) for line in text.splitlines() if line.strip()]


def dump_tagged_records(records: Sequence[FieldTaggedRecord]) -> str:
    return _dump_jsonl({"tags": {t: list(v) for t, v in sorted(r.tags.items())}} for r in records)


def load_tagged_records(source: TextSource) -> list[FieldTaggedRecord]:
    text = _read_text(source)
    return [
        FieldTaggedRecord(tags={t: tuple(v) for t, v in json.loads(line)["tags"].items()})
        for line in text.splitlines()
        if line.strip()
    ]
