"""End-to-end pipeline: configuration, run manifest, and the seven stages.

A run is keyed by a manifest id derived from the effective parameters
and the digests of every input file, so identical inputs always land in
the same directory and produce byte-identical artifacts. Layout:

    <out>/<manifest_id>/
        manifest.json          timings, counters, digests (metadata)
        diagnostics.txt        written when a stage hits a data error
        ingest/ vocab/ discover/ classify/ rank/ network/ report/

Each stage writes only its own subdirectory, so re-running a stage
never mutates prior-stage artifacts. Human-facing artifacts carry the
manifest id in a leading comment; machine artifacts (jsonl) reference
it through the directory they live in. Worker count is excluded from
the manifest id: it must not change any artifact.
"""

from __future__ import annotations

import configparser
import csv
import hashlib
import io
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Mapping, Optional, Sequence, TypeVar

from . import __version__
from .classification import (
    ClassificationResult,
    classify,
    community_report,
    field_membership,
    labels_csv,
)
from .discovery import apply_routes, discovery_report_csv, snowball
from .errors import ConfigError, DataError, MissingArtifact
from .ingestion import (
    FixtureDirectory,
    IngestStats,
    default_stopwords,
    default_venue_aliases,
    default_venue_tiers,
    dump_documents,
    dump_profiles,
    dump_tagged_records,
    dump_terms,
    load_documents,
    load_profiles,
    load_review_decisions,
    load_stopwords,
    load_tagged_records,
    load_terms,
    load_venue_aliases,
    load_venue_tiers,
    parse_field_tagged,
)
from .model import (
    AuthorProfile,
    DecisionAction,
    DecisionTarget,
    DisciplineConfig,
    KeywordTerm,
    ProfileLabel,
    ReviewDecision,
    TermStatus,
    latest_decisions,
    normalize_title,
)
from .network import (
    build_author_keyword_graph,
    build_author_source_graph,
    eigenvector_centrality,
    export_graph,
)
from .ranking import (
    HcdSet,
    author_pool,
    author_table,
    fig1_series_csv,
    publisher_table,
    record_from_ref,
    record_from_tagged,
    rollup_books,
    select_hcd,
    table2_authors_csv,
    table3_documents_csv,
    table4_journals_csv,
    table5_publishers_csv,
    term_year_series,
    venue_table,
)
from .vocabulary import build_master_list, extract_terms, master_list_csv, merge_variants

T = TypeVar("T")
R = TypeVar("R")

STAGES = ("ingest", "vocab", "discover", "classify", "rank", "network", "report")

_INPUT_ROLES = (
    "tagged_records",
    "extra_documents",
    "decisions",
    "venue_tiers",
    "venue_aliases",
    "stopwords",
)

_DISCIPLINE_KEYS = {
    "master_keywords",
    "affiliation_domains",
    "min_term_freq",
    "top_docs_per_author",
    "top_n_documents",
    "specialist_rule",
    "max_rounds",
    "network_top_documents",
    "network_top_specialists",
    "binary_network_edges",
    "workers",
}


@dataclass(frozen=True)
class PipelineConfig:
    """Everything one run needs: parameters, inputs, output root."""

    discipline: DisciplineConfig
    fixtures: Path
    out: Path
    decisions: tuple[ReviewDecision, ...] = ()
    input_files: Mapping[str, Path] = field(default_factory=dict)


# ---------------------------------------------------------------------------
# Configuration file.


def _split_list(raw: str) -> tuple[str, ...]:
    items = [piece.strip() for line in raw.splitlines() for piece in line.split(",")]
    return tuple(item for item in items if item)


def _parse_int(section: str, key: str, raw: str, minimum: int = 1) -> int:
    try:
        value = int(raw.strip())
    except ValueError:
        raise ConfigError(f"[{section}] {key}: expected an integer, got {raw!r}")
    if value < minimum:
        raise ConfigError(f"[{section}] {key}: must be >= {minimum}, got {value}")
    return value


_TRUE = {"true", "yes", "on", "1"}
_FALSE = {"false", "no", "off", "0"}


def _parse_bool(section: str, key: str, raw: str) -> bool:
    word = raw.strip().lower()
    if word in _TRUE:
        return True
    if word in _FALSE:
        return False
    raise ConfigError(f"[{section}] {key}: expected true/false, got {raw!r}")


def _parse_fraction(section: str, key: str, raw: str) -> Fraction:
    try:
        value = Fraction(raw.strip())
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"[{section}] {key}: expected a fraction like 1/2, got {raw!r}")
    if not 0 < value <= 1:
        raise ConfigError(f"[{section}] {key}: must be in (0, 1], got {raw!r}")
    return value


def _resolve(base: Path, raw: str) -> Path:
    path = Path(raw.strip())
    return path if path.is_absolute() else base / path


def load_run_config(
    config_path: Optional[Path] = None,
    fixtures: Optional[Path] = None,
    out: Optional[Path] = None,
    top_n: Optional[int] = None,
    top_docs_per_author: Optional[int] = None,
    binary: Optional[bool] = None,
    max_rounds: Optional[int] = None,
    workers: Optional[int] = None,
) -> PipelineConfig:
    """Read the INI config file and apply command-line overrides.

    Sections: [discipline] for parameters, [inputs] for file paths
    (fixtures required, the rest optional with packaged defaults),
    [output] for the output root. Relative paths resolve against the
    config file's directory; override paths resolve against the
    working directory. Unknown sections, unknown keys, and malformed
    values are configuration errors.
    """
    parser = configparser.ConfigParser(interpolation=None)
    sections: dict[str, dict[str, str]] = {"discipline": {}, "inputs": {}, "output": {}}
    base = Path.cwd()
    if config_path is not None:
        config_path = Path(config_path)
        if not config_path.is_file():
            raise ConfigError(f"config file {config_path} does not exist")
        base = config_path.parent
        try:
            parser.read_string(config_path.read_text(encoding="utf-8"))
        except configparser.Error as exc:
            raise ConfigError(f"config file {config_path}: {exc}")
        for section in parser.sections():
            if section not in sections:
                raise ConfigError(f"config file {config_path}: unknown section [{section}]")
            sections[section] = dict(parser.items(section))

    known = {"discipline": _DISCIPLINE_KEYS, "inputs": set(_INPUT_ROLES) | {"fixtures"}, "output": {"out"}}
    for section, values in sections.items():
        for key in values:
            if key not in known[section]:
                raise ConfigError(f"config file: unknown key {key!r} in [{section}]")

    d = sections["discipline"]
    params: dict[str, object] = {}
    if "master_keywords" in d:
        params["master_keywords"] = _split_list(d["master_keywords"])
    if "affiliation_domains" in d:
        params["affiliation_domains"] = _split_list(d["affiliation_domains"])
    for key in ("min_term_freq", "top_docs_per_author", "top_n_documents", "max_rounds",
                "network_top_documents", "network_top_specialists", "workers"):
        if key in d:
            params[key] = _parse_int("discipline", key, d[key])
    if "specialist_rule" in d:
        params["specialist_rule"] = _parse_fraction("discipline", "specialist_rule", d["specialist_rule"])
    if "binary_network_edges" in d:
        params["binary_network_edges"] = _parse_bool("discipline", "binary_network_edges", d["binary_network_edges"])

    if top_n is not None:
        params["top_n_documents"] = top_n
    if top_docs_per_author is not None:
        params["top_docs_per_author"] = top_docs_per_author
    if binary is not None:
        params["binary_network_edges"] = binary
    if max_rounds is not None:
        params["max_rounds"] = max_rounds
    if workers is not None:
        params["workers"] = workers
    for key in ("top_n_documents", "top_docs_per_author", "max_rounds", "workers"):
        if key in params and params[key] < 1:  # type: ignore[operator]
            raise ConfigError(f"{key} must be >= 1, got {params[key]}")

    input_files: dict[str, Path] = {}
    for role in _INPUT_ROLES:
        if role in sections["inputs"]:
            input_files[role] = _resolve(base, sections["inputs"][role])

    fixtures_path: Optional[Path] = None
    if "fixtures" in sections["inputs"]:
        fixtures_path = _resolve(base, sections["inputs"]["fixtures"])
    if fixtures is not None:
        fixtures_path = Path(fixtures)
    if fixtures_path is None:
        raise ConfigError("fixtures directory is required ([inputs] fixtures or --fixtures)")

    out_path = Path("out")
    if "out" in sections["output"]:
        out_path = _resolve(base, sections["output"]["out"])
    if out is not None:
        out_path = Path(out)

    aliases_path = input_files.get("venue_aliases")
    aliases = load_venue_aliases(aliases_path) if aliases_path else default_venue_aliases()
    tiers_path = input_files.get("venue_tiers")
    tiers = load_venue_tiers(tiers_path, aliases) if tiers_path else default_venue_tiers(aliases)
    stop_path = input_files.get("stopwords")
    stopwords = load_stopwords(stop_path) if stop_path else default_stopwords()
    decisions_path = input_files.get("decisions")
    decisions = tuple(load_review_decisions(decisions_path)) if decisions_path else ()

    for role, path in input_files.items():
        if not path.is_file():
            raise ConfigError(f"[inputs] {role}: file {path} does not exist")

    discipline = DisciplineConfig(
        venue_tiers=tiers, venue_aliases=aliases, stopwords=stopwords, **params
    )
    return PipelineConfig(
        discipline=discipline,
        fixtures=fixtures_path,
        out=out_path,
        decisions=decisions,
        input_files=input_files,
    )


# ---------------------------------------------------------------------------
# Run manifest.


@dataclass
class RunManifest:
    """Audit record of one run: what went in and what each stage did."""

    manifest_id: str
    tool_version: str
    config_digest: str
    input_digests: dict[str, str]
    stage_timings: dict[str, float] = field(default_factory=dict)
    counters: dict[str, int] = field(default_factory=dict)
    stages_completed: list[str] = field(default_factory=list)

    def save(self, run_dir: Path) -> None:
        payload = {
            "manifest_id": self.manifest_id,
            "tool_version": self.tool_version,
            "config_digest": self.config_digest,
            "input_digests": self.input_digests,
            "stage_timings": self.stage_timings,
            "counters": self.counters,
            "stages_completed": self.stages_completed,
        }
        _write_text(run_dir / "manifest.json", json.dumps(payload, sort_keys=True, indent=2) + "\n")


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def compute_input_digests(cfg: PipelineConfig) -> dict[str, str]:
    """Digest every input file; fixture pages keyed by relative path."""
    if not cfg.fixtures.is_dir():
        raise ConfigError(f"fixtures directory {cfg.fixtures} does not exist")
    digests = {}
    for path in sorted(cfg.fixtures.rglob("*")):
        if path.is_file():
            key = f"fixtures/{path.relative_to(cfg.fixtures).as_posix()}"
            digests[key] = _sha256(path.read_bytes())
    for role in sorted(cfg.input_files):
        path = cfg.input_files[role]
        if not path.is_file():
            raise ConfigError(f"input file {path} ({role}) does not exist")
        digests[role] = _sha256(path.read_bytes())
    return digests


def config_digest(cfg: PipelineConfig) -> str:
    """Digest of the parameters that can change artifacts.

    Worker count is deliberately excluded: results are independent of
    parallelism, so it must not fork the run directory.
    """
    d = cfg.discipline
    payload = {
        "master_keywords": list(d.master_keywords),
        "affiliation_domains": list(d.affiliation_domains),
        "min_term_freq": d.min_term_freq,
        "top_docs_per_author": d.top_docs_per_author,
        "top_n_documents": d.top_n_documents,
        "specialist_rule": str(d.specialist_rule),
        "max_rounds": d.max_rounds,
        "network_top_documents": d.network_top_documents,
        "network_top_specialists": d.network_top_specialists,
        "binary_network_edges": d.binary_network_edges,
    }
    return _sha256(json.dumps(payload, sort_keys=True).encode("utf-8"))


def open_manifest(cfg: PipelineConfig) -> RunManifest:
    """Compute the run identity and merge any persisted stage history."""
    digests = compute_input_digests(cfg)
    conf = config_digest(cfg)
    seed = json.dumps(
        {"config": conf, "inputs": digests, "version": __version__}, sort_keys=True
    )
    manifest_id = _sha256(seed.encode("utf-8"))[:12]
    manifest = RunManifest(
        manifest_id=manifest_id,
        tool_version=__version__,
        config_digest=conf,
        input_digests=digests,
    )
    path = cfg.out / manifest_id / "manifest.json"
    if path.is_file():
        stored = json.loads(path.read_text(encoding="utf-8"))
        manifest.stage_timings = dict(stored.get("stage_timings", {}))
        manifest.counters = dict(stored.get("counters", {}))
        manifest.stages_completed = list(stored.get("stages_completed", []))
    return manifest


# ---------------------------------------------------------------------------
# Shared helpers.


def _write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _write_bytes(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(data)


def _stamp(manifest_id: str, text: str, comment: str = "#") -> str:
    return f"{comment} manifest: {manifest_id}\n{text}"


def _stamp_xml(manifest_id: str, data: bytes) -> bytes:
    head, sep, rest = data.partition(b"\n")
    note = f"<!-- manifest: {manifest_id} -->\n".encode("utf-8")
    return head + sep + note + rest


def _report_text(manifest_id: str, lines: Sequence[str]) -> str:
    body = "\n".join(lines) + ("\n" if lines else "")
    return _stamp(manifest_id, body)


def _json_text(manifest_id: str, payload: dict) -> str:
    return json.dumps({"manifest_id": manifest_id, **payload}, sort_keys=True, indent=2) + "\n"


def _require(path: Path, producer: str) -> Path:
    if not path.exists():
        raise MissingArtifact(f"missing artifact {path}; run the {producer!r} stage first")
    return path


def parallel_map(
    fn: Callable[[T], R], items: Sequence[T], workers: int
) -> list[R]:
    """Order-preserving map, threaded when workers > 1."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _write_diagnostics(run_dir: Path, stage: str, exc: DataError) -> None:
    text = f"stage: {stage}\nerror: {type(exc).__name__}\ndetail: {exc}\n"
    _write_text(run_dir / "diagnostics.txt", text)


# ---------------------------------------------------------------------------
# Stages.


def _stage_ingest(cfg: PipelineConfig, manifest: RunManifest, run_dir: Path) -> dict[str, int]:
    stage_dir = run_dir / "ingest"
    stats = IngestStats()
    profiles = FixtureDirectory(cfg.fixtures).load_all(stats)

    tagged = []
    tagged_path = cfg.input_files.get("tagged_records")
    if tagged_path is not None:
        tagged = parse_field_tagged(tagged_path, stats)
    documents = [
        record_from_tagged(rec, cfg.discipline.venue_aliases, cfg.discipline.venue_tiers)
        for rec in tagged
    ]
    extra_path = cfg.input_files.get("extra_documents")
    if extra_path is not None:
        documents.extend(load_documents(extra_path))

    _write_text(stage_dir / "profiles.jsonl", dump_profiles(profiles))
    _write_text(stage_dir / "tagged_records.jsonl", dump_tagged_records(tagged))
    _write_text(stage_dir / "documents.jsonl", dump_documents(documents))
    _write_text(
        stage_dir / "stats.json",
        _json_text(
            manifest.manifest_id,
            {
                "records_read": stats.records_read,
                "dropped_no_title": stats.dropped_no_title,
                "missing_citation_cells": stats.missing_citation_cells,
                "warnings": stats.warnings,
            },
        ),
    )
    return {
        "profiles": len(profiles),
        "tagged_records": len(tagged),
        "documents": len(documents),
        "warnings": len(stats.warnings),
    }


def _seed_master(
    master: Sequence[KeywordTerm],
    seeds: Sequence[str],
    pool_terms: Mapping[str, KeywordTerm],
    profiles: Sequence[AuthorProfile],
    decisions: Iterable[ReviewDecision],
) -> list[KeywordTerm]:
    """Accept the configured discipline keywords outright.

    A seed absent from the built list joins it with whatever corpus
    counts exist for it; an explicit reject decision still wins.
    """
    known = {v for term in master for v in term.variant_norms()}
    resolved = latest_decisions(decisions, DecisionTarget.TERM)
    out = list(master)
    for raw in seeds:
        norm = normalize_title(raw)
        if not norm or norm in known:
            continue
        decided = resolved.get(norm)
        if decided is not None and decided.action is DecisionAction.REJECT:
            continue
        counted = pool_terms.get(norm)
        term = KeywordTerm(
            term_norm=norm,
            variants=(counted.variants if counted else frozenset()) | {raw, norm},
            freq_title=counted.freq_title if counted else 0,
            freq_article_keyword=counted.freq_article_keyword if counted else 0,
            status=TermStatus.ACCEPTED,
        )
        fpi = sum(
            1
            for p in profiles
            if any(i in term.variant_norms() for i in p.interest_norms())
        )
        out.append(replace(term, freq_profile_interest=fpi))
        known |= term.variant_norms()
    out.sort(key=lambda t: (-t.freq_title, t.term_norm))
    return out


def _stage_vocab(cfg: PipelineConfig, manifest: RunManifest, run_dir: Path) -> dict[str, int]:
    stage_dir = run_dir / "vocab"
    tagged = load_tagged_records(_require(run_dir / "ingest" / "tagged_records.jsonl", "ingest"))
    profiles = load_profiles(_require(run_dir / "ingest" / "profiles.jsonl", "ingest"))

    pool = extract_terms(
        tagged, cfg.discipline.min_term_freq, cfg.discipline.stopwords, cfg.discipline.workers
    )
    # Review decisions feed the discover, classify, and rank stages; the
    # vocabulary build itself runs decision-free so that term decisions
    # take effect where harvested candidates are adjudicated.
    pool, merge_reports = merge_variants(pool, ())
    master, list_reports = build_master_list(pool, profiles, ())
    master = _seed_master(master, cfg.discipline.master_keywords, pool.terms, profiles, ())

    _write_text(stage_dir / "master_terms.jsonl", dump_terms(master))
    _write_text(stage_dir / "master_terms.csv", _stamp(manifest.manifest_id, master_list_csv(master)))
    _write_text(stage_dir / "reports.txt", _report_text(manifest.manifest_id, merge_reports + list_reports))
    return {"candidate_terms": len(pool.terms), "master_terms": len(master)}


def _stage_discover(cfg: PipelineConfig, manifest: RunManifest, run_dir: Path) -> dict[str, int]:
    stage_dir = run_dir / "discover"
    profiles = load_profiles(_require(run_dir / "ingest" / "profiles.jsonl", "ingest"))
    documents = load_documents(_require(run_dir / "ingest" / "documents.jsonl", "ingest"))
    master = load_terms(_require(run_dir / "vocab" / "master_terms.jsonl", "vocab"))

    state, extended = snowball(
        profiles,
        documents,
        master,
        cfg.decisions,
        cfg.discipline.affiliation_domains,
        cfg.discipline.max_rounds,
    )
    found = apply_routes(profiles, state)

    _write_text(stage_dir / "found_profiles.jsonl", dump_profiles(found))
    _write_text(stage_dir / "master_terms.jsonl", dump_terms(extended))
    _write_text(stage_dir / "master_terms.csv", _stamp(manifest.manifest_id, master_list_csv(extended)))
    _write_text(
        stage_dir / "discovery.csv",
        _stamp(manifest.manifest_id, discovery_report_csv(state, profiles)),
    )
    return {
        "profiles_found": len(state.found),
        "rounds": state.rounds,
        "master_terms": len(extended),
    }


def _apply_rule(result: ClassificationResult, rule: Fraction) -> ClassificationResult:
    """Re-threshold the in-field share when the rule is not one half."""
    if rule == Fraction(1, 2) or result.label is ProfileLabel.FALSE_POSITIVE:
        return result
    specialist = result.h > 0 and Fraction(result.k, result.h) >= rule
    label = ProfileLabel.SPECIALIST if specialist else ProfileLabel.OCCASIONAL
    return replace(result, label=label)


def _community_csv(labels: Iterable[ProfileLabel]) -> str:
    report = community_report(labels)
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["label", "count", "pct"])
    for label in ProfileLabel:
        if label.value in report:
            count, pct = report[label.value]
            writer.writerow([label.value, count, pct])
    return out.getvalue()


def _stage_classify(cfg: PipelineConfig, manifest: RunManifest, run_dir: Path) -> dict[str, int]:
    stage_dir = run_dir / "classify"
    profiles = load_profiles(_require(run_dir / "discover" / "found_profiles.jsonl", "discover"))
    master = load_terms(_require(run_dir / "discover" / "master_terms.jsonl", "discover"))

    variants = sorted({v for term in master for v in term.variant_norms()})
    membership_config = replace(cfg.discipline, master_keywords=tuple(variants))

    def one(profile: AuthorProfile) -> ClassificationResult:
        records = [
            record_from_ref(ref, profile.profile_id, cfg.discipline.venue_aliases, cfg.discipline.venue_tiers)
            for ref in profile.documents
        ]
        memberships = {r.cluster_id: field_membership(r, membership_config) for r in records}
        result = classify(profile, memberships, cfg.decisions)
        return _apply_rule(result, cfg.discipline.specialist_rule)

    results = parallel_map(one, profiles, cfg.discipline.workers)
    labeled = [replace(p, label=r.label) for p, r in zip(profiles, results)]
    reports = [
        f"profile {r.profile_id}: candidate false positive (no in-field documents)"
        for r in sorted(results, key=lambda r: r.profile_id)
        if r.candidate_false_positive and r.label is not ProfileLabel.FALSE_POSITIVE
    ]

    _write_text(stage_dir / "labels.csv", _stamp(manifest.manifest_id, labels_csv(results, labeled)))
    _write_text(
        stage_dir / "community_summary.csv",
        _stamp(manifest.manifest_id, _community_csv([p.label for p in labeled])),
    )
    _write_text(stage_dir / "profiles.jsonl", dump_profiles(labeled))
    _write_text(stage_dir / "reports.txt", _report_text(manifest.manifest_id, reports))
    counts = {label: 0 for label in ProfileLabel}
    for p in labeled:
        counts[p.label] += 1
    return {
        "specialists": counts[ProfileLabel.SPECIALIST],
        "occasionals": counts[ProfileLabel.OCCASIONAL],
        "false_positives": counts[ProfileLabel.FALSE_POSITIVE],
        "candidate_false_positives": len(reports),
    }


def _stage_rank(cfg: PipelineConfig, manifest: RunManifest, run_dir: Path) -> dict[str, int]:
    stage_dir = run_dir / "rank"
    profiles = load_profiles(_require(run_dir / "classify" / "profiles.jsonl", "classify"))
    extra = load_documents(_require(run_dir / "ingest" / "documents.jsonl", "ingest"))

    pool, stats, reports, provenance = author_pool(
        profiles,
        extra,
        cfg.discipline.venue_aliases,
        cfg.discipline.venue_tiers,
        cap=cfg.discipline.top_docs_per_author,
        decisions=cfg.decisions,
    )
    pool, rollup_warnings = rollup_books(pool)
    hcd = select_hcd(pool, cfg.discipline.top_n_documents)

    _write_text(stage_dir / "pool.jsonl", dump_documents(pool))
    _write_text(stage_dir / "hcd.jsonl", dump_documents(hcd.members))
    _write_text(
        stage_dir / "hcd_classes.json",
        _json_text(
            manifest.manifest_id,
            {"journal": sorted(hcd.journal_ids), "book": sorted(hcd.book_ids)},
        ),
    )
    _write_text(
        stage_dir / "pool_stats.json",
        _json_text(
            manifest.manifest_id,
            {
                "specialist_records": stats.specialist_records,
                "extra_records": stats.extra_records,
                "merged_records": stats.merged_records,
                "duplicates_removed": stats.duplicates_removed,
            },
        ),
    )
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["cluster_id", "members"])
    for cluster_id in sorted(provenance):
        writer.writerow([cluster_id, "|".join(provenance[cluster_id])])
    _write_text(stage_dir / "merge_provenance.csv", _stamp(manifest.manifest_id, out.getvalue()))
    _write_text(stage_dir / "reports.txt", _report_text(manifest.manifest_id, list(reports) + rollup_warnings))
    return {
        "pool_size": len(pool),
        "hcd_size": len(hcd.members),
        "duplicates_removed": stats.duplicates_removed,
    }


def _stage_network(cfg: PipelineConfig, manifest: RunManifest, run_dir: Path) -> dict[str, int]:
    stage_dir = run_dir / "network"
    profiles = load_profiles(_require(run_dir / "classify" / "profiles.jsonl", "classify"))
    members = load_documents(_require(run_dir / "rank" / "hcd.jsonl", "rank"))
    master = load_terms(_require(run_dir / "discover" / "master_terms.jsonl", "discover"))

    hcd_top = members[: cfg.discipline.network_top_documents]
    graphs = {
        "author_source": build_author_source_graph(
            hcd_top, profiles, cfg.decisions, cfg.discipline.binary_network_edges
        ),
        "author_keyword": build_author_keyword_graph(
            profiles, master, cfg.discipline.network_top_specialists
        ),
    }

    warnings: list[str] = []
    counters: dict[str, int] = {}
    for name, graph in graphs.items():
        scores = eigenvector_centrality(graph)
        warnings.extend(f"{name}: {w}" for w in scores.warnings)
        if not scores.converged:
            warnings.append(
                f"{name}: centrality stopped at {scores.iterations} iterations "
                f"(residual {scores.residual:.3e})"
            )
        _write_bytes(
            stage_dir / f"{name}.gexf",
            _stamp_xml(manifest.manifest_id, export_graph(graph, scores, "gexf")),
        )
        counters[f"{name}_nodes"] = len(graph.nodes)
        counters[f"{name}_edges"] = len(graph.edges)

    edge_csv = export_graph(graphs["author_source"], None, "edge_csv").decode("utf-8")
    _write_text(stage_dir / "author_source_edges.csv", _stamp(manifest.manifest_id, edge_csv))
    _write_text(stage_dir / "warnings.txt", _report_text(manifest.manifest_id, warnings))
    return counters


def _stage_report(cfg: PipelineConfig, manifest: RunManifest, run_dir: Path) -> dict[str, int]:
    stage_dir = run_dir / "report"
    mid = manifest.manifest_id
    master = load_terms(_require(run_dir / "discover" / "master_terms.jsonl", "discover"))
    profiles = load_profiles(_require(run_dir / "classify" / "profiles.jsonl", "classify"))
    members = load_documents(_require(run_dir / "rank" / "hcd.jsonl", "rank"))
    classes = json.loads(
        _require(run_dir / "rank" / "hcd_classes.json", "rank").read_text(encoding="utf-8")
    )
    pool = load_documents(_require(run_dir / "rank" / "pool.jsonl", "rank"))
    hcd = HcdSet(
        members=tuple(members),
        journal_ids=frozenset(classes["journal"]),
        book_ids=frozenset(classes["book"]),
    )

    specialists, occasionals = author_table(profiles)
    seeds = [normalize_title(k) for k in cfg.discipline.master_keywords]
    terms = list(dict.fromkeys(s for s in seeds if s)) or [t.term_norm for t in master]
    series = term_year_series(pool, terms)

    _write_text(stage_dir / "table1_keywords.csv", _stamp(mid, master_list_csv(master)))
    _write_text(
        stage_dir / "table2_authors.csv",
        _stamp(mid, table2_authors_csv(specialists, occasionals, limit=25)),
    )
    _write_text(stage_dir / "table3_documents.csv", _stamp(mid, table3_documents_csv(hcd, limit=25)))
    _write_text(
        stage_dir / "table4_journals.csv",
        _stamp(mid, table4_journals_csv(venue_table(hcd), limit=25)),
    )
    _write_text(
        stage_dir / "table5_publishers.csv",
        _stamp(mid, table5_publishers_csv(publisher_table(hcd), limit=20)),
    )
    _write_text(stage_dir / "fig1_series.csv", _stamp(mid, fig1_series_csv(series)))

    copies = {
        "community_summary.csv": run_dir / "classify" / "community_summary.csv",
        "author_source.gexf": run_dir / "network" / "author_source.gexf",
        "author_keyword.gexf": run_dir / "network" / "author_keyword.gexf",
        "author_source_edges.csv": run_dir / "network" / "author_source_edges.csv",
    }
    for name, source in copies.items():
        producer = "classify" if source.parent.name == "classify" else "network"
        _write_bytes(stage_dir / name, _require(source, producer).read_bytes())
    return {"files": 6 + len(copies)}


_STAGE_FUNCS: dict[str, Callable[[PipelineConfig, RunManifest, Path], dict[str, int]]] = {
    "ingest": _stage_ingest,
    "vocab": _stage_vocab,
    "discover": _stage_discover,
    "classify": _stage_classify,
    "rank": _stage_rank,
    "network": _stage_network,
    "report": _stage_report,
}


def run_stage(
    stage: str, cfg: PipelineConfig, manifest: Optional[RunManifest] = None
) -> Path:
    """Run one stage and persist the manifest; returns the run directory.

    Raises:
        ConfigError: unknown stage name or invalid inputs.
        MissingArtifact: a prior-stage artifact is absent.
        DataError: stage failure; diagnostics.txt records the detail.
    """
    func = _STAGE_FUNCS.get(stage)
    if func is None:
        raise ConfigError(f"unknown stage {stage!r}; expected one of {', '.join(STAGES)}")
    if manifest is None:
        manifest = open_manifest(cfg)
    run_dir = cfg.out / manifest.manifest_id
    run_dir.mkdir(parents=True, exist_ok=True)
    started = time.perf_counter()
    try:
        counters = func(cfg, manifest, run_dir)
    except DataError as exc:
        _write_diagnostics(run_dir, stage, exc)
        manifest.save(run_dir)
        raise
    manifest.stage_timings[stage] = round(time.perf_counter() - started, 6)
    for key, value in counters.items():
        manifest.counters[f"{stage}.{key}"] = value
    if stage not in manifest.stages_completed:
        manifest.stages_completed.append(stage)
    manifest.save(run_dir)
    return run_dir


def run_all(
    cfg: PipelineConfig, progress: Optional[Callable[[str], None]] = None
) -> Path:
    """Run every stage in order under a single manifest."""
    manifest = open_manifest(cfg)
    run_dir = cfg.out / manifest.manifest_id
    for stage in STAGES:
        run_dir = run_stage(stage, cfg, manifest)
        if progress is not None:
            progress(stage)
    return run_dir
