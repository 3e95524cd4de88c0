"""Finds the author community by keyword, affiliation, and document routes.

The snowball loop alternates keyword discovery with harvesting new
interest terms from the profiles just found. Harvested terms enter the
search vocabulary only through explicit reviewer accept decisions, so
the vocabulary never grows on its own; the loop stops when neither the
found set nor the vocabulary changes.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, replace
from typing import Iterable, Mapping, Optional, Sequence

from .errors import NonTermination
from .model import (
    AuthorProfile,
    DecisionAction,
    DecisionTarget,
    DiscoveryRoute,
    DocumentRecord,
    KeywordTerm,
    ReviewDecision,
    TermStatus,
    VenueTier,
    contains_term,
    latest_decisions,
    normalize_title,
)


@dataclass(frozen=True)
class DiscoveryState:
    """Snowball outcome: who was found, how, and when.

    ``found`` maps profile_id to (route, round). ``frontier_terms`` is
    the search vocabulary in effect at termination. ``rounds`` counts
    executed rounds and is at least 1.
    """

    found: Mapping[str, tuple[DiscoveryRoute, int]]
    frontier_terms: frozenset[str]
    rounds: int


def _variant_index(master: Sequence[KeywordTerm]) -> frozenset[str]:
    out = set()
    for term in master:
        out |= term.variant_norms()
    return frozenset(out)


def discover_by_keyword(
    profiles: Sequence[AuthorProfile], master: Sequence[KeywordTerm]
) -> set[str]:
    """Profiles whose interests intersect the master list.

    Matching is on normalized strings and covers every accepted variant
    of each master term.
    """
    variants = _variant_index(master)
    return {
        p.profile_id
        for p in profiles
        if any(i in variants for i in p.interest_norms())
    }


def discover_by_affiliation(
    profiles: Sequence[AuthorProfile], domains: Sequence[str]
) -> set[str]:
    """Profiles verified at a configured domain or a subdomain of one.

    The match ignores interests entirely; a profile with no verified
    domain never matches.
    """
    normalized = [d.lower().lstrip(".") for d in domains if d.strip()]

    def matches(domain: str) -> bool:
        return any(domain == d or domain.endswith("." + d) for d in normalized)

    return {
        p.profile_id
        for p in profiles
        if p.verified_domain is not None and matches(p.verified_domain.lower())
    }


def discover_by_documents(
    documents: Sequence[DocumentRecord],
    profiles: Sequence[AuthorProfile],
    master: Sequence[KeywordTerm],
) -> set[str]:
    """Profiles linked from in-field documents.

    A document qualifies when its title contains a master term or its
    venue is tier core; every profile id it links to is returned
    (restricted to profiles that exist in the corpus).
    """
    known = {p.profile_id for p in profiles}
    variants = _variant_index(master)
    found = set()
    for doc in documents:
        if not doc.author_profile_ids:
            continue
        in_core_venue = doc.venue is not None and doc.venue.tier is VenueTier.CORE
        if in_core_venue or any(contains_term(doc.title_norm, v) for v in variants):
            found.update(pid for pid in doc.author_profile_ids if pid in known)
    return found


def _harvest(
    found_profiles: Iterable[AuthorProfile],
    master: list[KeywordTerm],
    decisions: Iterable[ReviewDecision],
    all_profiles: Sequence[AuthorProfile],
) -> bool:
    """Extend the master list from found profiles' interests.

    New terms require an explicit accept decision; merge decisions may
    attach a harvested spelling to an existing master term as a
    variant. Returns True when the master list changed.
    """
    resolved = latest_decisions(decisions, DecisionTarget.TERM)
    variants = set(_variant_index(master))
    by_norm = {t.term_norm: i for i, t in enumerate(master)}

    candidates: dict[str, set[str]] = {}
    for p in found_profiles:
        for raw in p.interests:
            norm = normalize_title(raw)
            if norm and norm not in variants:
                candidates.setdefault(norm, set()).add(raw)

    changed = False
    for norm in sorted(candidates):
        decision = resolved.get(norm)
        if decision is None:
            continue
        if decision.action is DecisionAction.ACCEPT:
            fpi = sum(
                1
                for p in all_profiles
                if norm in p.interest_norms()
            )
            master.append(
                KeywordTerm(
                    term_norm=norm,
                    variants=frozenset(candidates[norm] | {norm}),
                    freq_profile_interest=fpi,
                    status=TermStatus.ACCEPTED,
                )
            )
            by_norm[norm] = len(master) - 1
            variants |= {norm}
            changed = True
        elif decision.action is DecisionAction.MERGE_INTO:
            target = normalize_title(decision.arg or "")
            if target in by_norm:
                i = by_norm[target]
                master[i] = replace(
                    master[i], variants=master[i].variants | candidates[norm]
                )
                variants |= {norm}
                changed = True
    return changed


def snowball(
    profiles: Sequence[AuthorProfile],
    documents: Sequence[DocumentRecord],
    master: Sequence[KeywordTerm],
    decisions: Iterable[ReviewDecision] = (),
    affiliation_domains: Sequence[str] = (),
    max_rounds: int = 10,
) -> tuple[DiscoveryState, list[KeywordTerm]]:
    """Iterate discovery until the found set and vocabulary stabilize.

    The keyword route runs every round; affiliation and document routes
    run in round 1 only, except that the document title scan re-runs
    whenever the vocabulary grew. When several routes find a profile in
    the same round, attribution precedence is keyword, then
    affiliation, then document backlink. Returns the final state and
    the (possibly extended) master list.

    Raises:
        NonTermination: no fixpoint within ``max_rounds`` rounds.
    """
    decisions = list(decisions)
    current = list(master)
    by_id = {p.profile_id: p for p in profiles}
    found: dict[str, tuple[DiscoveryRoute, int]] = {}

    rounds = 0
    while True:
        if rounds >= max_rounds:
            raise NonTermination(
                f"discovery did not stabilize within {max_rounds} rounds "
                f"({len(found)} profiles, {len(current)} terms so far)"
            )
        rounds += 1
        before_found = set(found)
        before_terms = len(current)

        routed = [(DiscoveryRoute.KEYWORD, discover_by_keyword(profiles, current))]
        if rounds == 1:
            routed.append(
                (DiscoveryRoute.AFFILIATION, discover_by_affiliation(profiles, affiliation_domains))
            )
        # The document title scan depends on the vocabulary, so it
        # re-runs on every round; backlinks are stable but cheap.
        routed.append(
            (DiscoveryRoute.DOCUMENT_BACKLINK, discover_by_documents(documents, profiles, current))
        )
        for route, ids in routed:
            for pid in sorted(ids):
                found.setdefault(pid, (route, rounds))

        found_profiles = [by_id[pid] for pid in sorted(found)]
        grew = _harvest(found_profiles, current, decisions, profiles)

        if set(found) == before_found and not grew and len(current) == before_terms:
            break

    return (
        DiscoveryState(
            found=dict(sorted(found.items())),
            frontier_terms=frozenset(t.term_norm for t in current),
            rounds=rounds,
        ),
        current,
    )


def apply_routes(
    profiles: Sequence[AuthorProfile], state: DiscoveryState
) -> list[AuthorProfile]:
    """Stamp discovery routes onto the found profiles, dropping the rest."""
    out = []
    for p in profiles:
        hit = state.found.get(p.profile_id)
        if hit is not None:
            out.append(replace(p, discovery_route=hit[0]))
    return out


DISCOVERY_HEADER = ["profile_id", "name", "route", "round"]


def discovery_report_csv(state: DiscoveryState, profiles: Sequence[AuthorProfile]) -> str:
    names = {p.profile_id: p.display_name for p in profiles}
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(DISCOVERY_HEADER)
    for pid in sorted(state.found):
        route, round_no = state.found[pid]
        writer.writerow([pid, names.get(pid, ""), route.value, round_no])
    return out.getvalue()
