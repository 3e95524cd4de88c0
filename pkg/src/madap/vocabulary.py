"""Builds the discipline keyword vocabulary and the master list.

Candidate terms come from document titles (word n-grams that neither
start nor end with a stop word, up to six tokens) and from whole
author-keyword values. Variant merging folds singular/plural pairs
automatically and applies reviewer merge decisions; the master list
keeps terms that real profiles actually use, plus explicitly accepted
additions.
"""

from __future__ import annotations

import csv
import io
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Iterable, Mapping, Optional, Sequence

from .ingestion import FieldTaggedRecord
from .model import (
    AuthorProfile,
    DecisionAction,
    DecisionTarget,
    KeywordTerm,
    ReviewDecision,
    TermStatus,
    latest_decisions,
    normalize_title,
)

MAX_NGRAM = 6


@dataclass(frozen=True)
class TermPool:
    """Candidate vocabulary keyed by normalized term."""

    terms: Mapping[str, KeywordTerm]
    threshold: int

    def get(self, term_norm: str) -> Optional[KeywordTerm]:
        return self.terms.get(term_norm)


def candidate_ngrams(title_norm: str, stopwords: frozenset[str]) -> set[str]:
    """Candidate terms of one normalized title.

    Every n-gram (n <= 6) whose first and last token are content words;
    interior stop words are allowed so multi-word phrases that contain
    connectives survive intact.
    """
    tokens = title_norm.split()
    out = set()
    for n in range(1, min(MAX_NGRAM, len(tokens)) + 1):
        for i in range(len(tokens) - n + 1):
            if tokens[i] in stopwords or tokens[i + n - 1] in stopwords:
                continue
            out.add(" ".join(tokens[i : i + n]))
    return out


def _count_chunk(
    records: Sequence[FieldTaggedRecord], stopwords: frozenset[str]
) -> tuple[Counter, Counter, dict[str, set[str]]]:
    title_freq: Counter = Counter()
    keyword_freq: Counter = Counter()
    variants: dict[str, set[str]] = {}
    for record in records:
        for term in candidate_ngrams(normalize_title(record.title()), stopwords):
            title_freq[term] += 1
            variants.setdefault(term, set()).add(term)
        keyword_terms = {}
        for raw in record.keywords():
            norm = normalize_title(raw)
            if norm:
                keyword_terms.setdefault(norm, raw)
        for norm, raw in keyword_terms.items():
            keyword_freq[norm] += 1
            variants.setdefault(norm, set()).add(raw)
    return title_freq, keyword_freq, variants


def extract_terms(
    records: Sequence[FieldTaggedRecord],
    threshold: int,
    stopwords: frozenset[str] = frozenset(),
    workers: int = 1,
) -> TermPool:
    """Tally candidate terms over the corpus and apply the threshold.

    Frequencies are document frequencies: a term counts once per title
    and once per record's keyword field no matter how often it repeats
    inside them. Terms whose combined document frequency falls below
    ``threshold`` are excluded. Counting is associative, so the result
    is independent of how records are chunked across workers.
    """
    if threshold < 1:
        raise ValueError(f"threshold must be >= 1, got {threshold}")
    chunks: list[Sequence[FieldTaggedRecord]]
    if workers > 1 and len(records) > 64:
        size = max(1, (len(records) + workers - 1) // workers)
        chunks = [records[i : i + size] for i in range(0, len(records), size)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda c: _count_chunk(c, stopwords), chunks))
    else:
        parts = [_count_chunk(records, stopwords)]

    title_freq: Counter = Counter()
    keyword_freq: Counter = Counter()
    variants: dict[str, set[str]] = {}
    for tf, kf, vs in parts:
        title_freq.update(tf)
        keyword_freq.update(kf)
        for norm, raws in vs.items():
            variants.setdefault(norm, set()).update(raws)

    terms = {}
    for norm in sorted(set(title_freq) | set(keyword_freq)):
        ft, fk = title_freq[norm], keyword_freq[norm]
        if ft + fk >= threshold:
            terms[norm] = KeywordTerm(
                term_norm=norm,
                variants=frozenset(variants[norm]),
                freq_title=ft,
                freq_article_keyword=fk,
            )
    return TermPool(terms=terms, threshold=threshold)


def _merge_pair(target: KeywordTerm, source: KeywordTerm) -> KeywordTerm:
    return replace(
        target,
        variants=target.variants | source.variants | {source.term_norm},
        freq_title=target.freq_title + source.freq_title,
        freq_article_keyword=target.freq_article_keyword + source.freq_article_keyword,
        freq_profile_interest=target.freq_profile_interest + source.freq_profile_interest,
    )


def _singular_root(term: str, terms: Mapping[str, KeywordTerm]) -> str:
    # Follow trailing-"s" chains down to the shortest form present.
    root = term
    while root.endswith("s") and root[:-1] in terms:
        root = root[:-1]
    return root


def _apply_term_decisions(
    terms: dict[str, KeywordTerm], decisions: Iterable[ReviewDecision]
) -> tuple[set[str], list[str]]:
    """Apply merge/reject/accept decisions in place.

    Returns the set of decision target ids that matched a term, and
    dangling reports for merges whose source is absent. Accept and
    reject decisions on absent terms are deferred silently: their
    targets may enter the pool later from profile interests.
    """
    matched: set[str] = set()
    reports: list[str] = []
    resolved = latest_decisions(decisions, DecisionTarget.TERM)
    for key in sorted(resolved):
        decision = resolved[key]
        if decision.action is DecisionAction.MERGE_INTO:
            target_norm = normalize_title(decision.arg or "")
            if key not in terms:
                reports.append(f"merge of {key!r}: term not in pool")
                continue
            if not target_norm:
                reports.append(f"merge of {key!r}: no merge target given")
                continue
            matched.add(key)
            source = terms.pop(key)
            target = terms.get(target_norm)
            if target is None:
                target = KeywordTerm(term_norm=target_norm, variants=frozenset({target_norm}))
            terms[target_norm] = _merge_pair(target, source)
        elif decision.action is DecisionAction.REJECT:
            if key in terms:
                matched.add(key)
                terms[key] = replace(terms[key], status=TermStatus.REJECTED)
        elif decision.action is DecisionAction.ACCEPT:
            if key in terms:
                matched.add(key)
                terms[key] = replace(terms[key], status=TermStatus.ACCEPTED)
    return matched, reports


def merge_variants(
    pool: TermPool, decisions: Iterable[ReviewDecision] = ()
) -> tuple[TermPool, list[str]]:
    """Fold term variants together.

    Automatic merges first: singular/plural pairs differing by a
    trailing "s" collapse onto the shortest form (case and diacritic
    folding already happened during normalization). Reviewer decisions
    then merge or reject terms by name; merges whose source term is
    absent are reported, not fatal.
    """
    terms: dict[str, KeywordTerm] = {}
    for norm in sorted(pool.terms, key=lambda t: (len(t), t)):
        root = _singular_root(norm, pool.terms)
        term = pool.terms[norm]
        if root == norm:
            terms[norm] = _merge_pair(terms[norm], term) if norm in terms else term
        else:
            terms[root] = _merge_pair(terms[root], term)
    _, reports = _apply_term_decisions(terms, decisions)
    return TermPool(terms=terms, threshold=pool.threshold), reports


def build_master_list(
    pool: TermPool,
    profiles: Sequence[AuthorProfile],
    decisions: Iterable[ReviewDecision] = (),
) -> tuple[list[KeywordTerm], list[str]]:
    """Produce the accepted master list from the merged pool.

    Profile interests seed terms that documents alone never met (with
    zero document frequency), then reviewer decisions are applied and
    profile usage is counted per term over all variants. A term is
    accepted when it is not rejected and either carries an explicit
    accept decision or is used by at least one profile while meeting
    the document-frequency threshold. Returns the master list sorted by
    title frequency descending, plus dangling-decision reports.
    """
    terms = dict(pool.terms)
    known_variants = {
        v for term in terms.values() for v in term.variant_norms()
    }
    for profile in sorted(profiles, key=lambda p: p.profile_id):
        for raw in profile.interests:
            norm = normalize_title(raw)
            if not norm or norm in known_variants:
                continue
            terms[norm] = KeywordTerm(term_norm=norm, variants=frozenset({raw, norm}))
            known_variants.add(norm)

    matched, reports = _apply_term_decisions(terms, decisions)
    resolved = latest_decisions(decisions, DecisionTarget.TERM)
    for key in sorted(resolved):
        if key not in matched and key not in terms:
            reports.append(f"decision on term {key!r}: no such term")

    master = []
    for norm in sorted(terms):
        term = terms[norm]
        variant_norms = term.variant_norms()
        fpi = sum(
            1 for p in profiles if any(i in variant_norms for i in p.interest_norms())
        )
        decision = resolved.get(norm)
        if decision is not None and decision.action is DecisionAction.REJECT:
            continue
        explicit_accept = decision is not None and decision.action is DecisionAction.ACCEPT
        meets_threshold = term.doc_frequency() >= pool.threshold
        if explicit_accept or (fpi >= 1 and meets_threshold):
            master.append(
                replace(term, freq_profile_interest=fpi, status=TermStatus.ACCEPTED)
            )
    master.sort(key=lambda t: (-t.freq_title, t.term_norm))
    return master, reports


MASTER_HEADER = ["term", "freq_title", "freq_article_keyword", "freq_profile_interest"]


def master_list_csv(master: Sequence[KeywordTerm]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(MASTER_HEADER)
    for term in master:
        writer.writerow(
            [term.term_norm, term.freq_title, term.freq_article_keyword, term.freq_profile_interest]
        )
    return out.getvalue()
