"""Tests for run configuration, manifests, and stage orchestration."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import pytest

from madap.classification import ClassificationResult
from madap.errors import ConfigError, DataError, MissingArtifact
from madap.model import (
    AuthorProfile,
    KeywordTerm,
    ProfileLabel,
    TermStatus,
)
from madap.pipeline import (
    STAGES,
    PipelineConfig,
    _apply_rule,
    _community_csv,
    _seed_master,
    _stamp,
    _stamp_xml,
    config_digest,
    load_run_config,
    open_manifest,
    parallel_map,
    run_all,
    run_stage,
)

REPO = Path(__file__).resolve().parent.parent
DEMO = REPO / "demo"

REPORT_FILES = [
    "table1_keywords.csv",
    "table2_authors.csv",
    "table3_documents.csv",
    "table4_journals.csv",
    "table5_publishers.csv",
    "fig1_series.csv",
    "community_summary.csv",
    "author_source.gexf",
    "author_keyword.gexf",
    "author_source_edges.csv",
]


def write_config(tmp_path: Path, body: str) -> Path:
    path = tmp_path / "config.ini"
    path.write_text(body, encoding="utf-8")
    return path


def demo_config(tmp_path: Path, **overrides) -> PipelineConfig:
    out = overrides.pop("out", tmp_path / "out")
    return load_run_config(DEMO / "config.ini", out=out, **overrides)


@pytest.fixture(scope="module")
def demo_run(tmp_path_factory) -> Path:
    """One full pipeline run over the bundled demo corpus."""
    out = tmp_path_factory.mktemp("demo_run")
    cfg = load_run_config(DEMO / "config.ini", out=out)
    return run_all(cfg)


def make_result(**kwargs) -> ClassificationResult:
    base = dict(
        profile_id="p", label=ProfileLabel.OCCASIONAL, h=5, k=0,
        h_core_ids=(), candidate_false_positive=False,
    )
    base.update(kwargs)
    return ClassificationResult(**base)


def make_profile(pid: str, interests: tuple[str, ...]) -> AuthorProfile:
    return AuthorProfile(
        profile_id=pid,
        display_name=pid.upper(),
        interests=interests,
        verified_domain=None,
        total_citations=0,
        h_index_reported=None,
        documents=(),
    )


class TestLoadRunConfig:
    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_run_config(tmp_path / "absent.ini")

    def test_unknown_section(self, tmp_path):
        path = write_config(tmp_path, "[surprise]\nx = 1\n")
        with pytest.raises(ConfigError):
            load_run_config(path, fixtures=DEMO / "fixtures")

    def test_unknown_key(self, tmp_path):
        path = write_config(tmp_path, "[discipline]\ncolour = blue\n")
        with pytest.raises(ConfigError):
            load_run_config(path, fixtures=DEMO / "fixtures")

    def test_bad_integer(self, tmp_path):
        path = write_config(tmp_path, "[discipline]\nmin_term_freq = soon\n")
        with pytest.raises(ConfigError):
            load_run_config(path, fixtures=DEMO / "fixtures")

    def test_integer_below_minimum(self, tmp_path):
        path = write_config(tmp_path, "[discipline]\nworkers = 0\n")
        with pytest.raises(ConfigError):
            load_run_config(path, fixtures=DEMO / "fixtures")

    def test_bad_fraction(self, tmp_path):
        path = write_config(tmp_path, "[discipline]\nspecialist_rule = 3/2\n")
        with pytest.raises(ConfigError):
            load_run_config(path, fixtures=DEMO / "fixtures")

    def test_fractions_and_booleans_parse(self, tmp_path):
        path = write_config(
            tmp_path,
            "[discipline]\nspecialist_rule = 2/3\nbinary_network_edges = yes\n",
        )
        cfg = load_run_config(path, fixtures=DEMO / "fixtures")
        assert cfg.discipline.specialist_rule == Fraction(2, 3)
        assert cfg.discipline.binary_network_edges is True

    def test_fixtures_required(self, tmp_path):
        path = write_config(tmp_path, "[discipline]\nworkers = 1\n")
        with pytest.raises(ConfigError):
            load_run_config(path)

    def test_missing_input_file(self, tmp_path):
        path = write_config(
            tmp_path,
            "[inputs]\nfixtures = fixtures\ntagged_records = absent.txt\n",
        )
        (tmp_path / "fixtures").mkdir()
        with pytest.raises(ConfigError):
            load_run_config(path)

    def test_relative_paths_resolve_against_config_dir(self, tmp_path):
        cfg = load_run_config(DEMO / "config.ini", out=tmp_path)
        assert cfg.fixtures == DEMO / "fixtures"
        assert cfg.input_files["tagged_records"] == DEMO / "records.txt"

    def test_overrides_beat_file_values(self, tmp_path):
        cfg = demo_config(tmp_path, top_n=7, workers=3, max_rounds=2)
        assert cfg.discipline.top_n_documents == 7
        assert cfg.discipline.workers == 3
        assert cfg.discipline.max_rounds == 2

    def test_packaged_defaults_fill_reference_tables(self, tmp_path):
        cfg = demo_config(tmp_path)
        tier_names = {n for names in cfg.discipline.venue_tiers.values() for n in names}
        assert "scientometrics" in tier_names
        assert cfg.discipline.venue_aliases  # alias table nonempty
        assert "the" in cfg.discipline.stopwords

    def test_demo_decisions_loaded(self, tmp_path):
        cfg = demo_config(tmp_path)
        assert len(cfg.decisions) == 5


class TestManifest:
    def test_workers_do_not_change_identity(self, tmp_path):
        one = demo_config(tmp_path, workers=1)
        eight = demo_config(tmp_path, workers=8)
        assert config_digest(one) == config_digest(eight)
        assert open_manifest(one).manifest_id == open_manifest(eight).manifest_id

    def test_parameters_change_identity(self, tmp_path):
        base = demo_config(tmp_path)
        trimmed = demo_config(tmp_path, top_n=5)
        assert open_manifest(base).manifest_id != open_manifest(trimmed).manifest_id

    def test_input_digests_cover_fixture_files(self, tmp_path):
        manifest = open_manifest(demo_config(tmp_path))
        keys = set(manifest.input_digests)
        assert "fixtures/p01.html" in keys
        assert "fixtures/p01.2.html" in keys
        assert "tagged_records" in keys
        assert "decisions" in keys

    def test_reopen_preserves_recorded_progress(self, tmp_path):
        cfg = demo_config(tmp_path)
        manifest = open_manifest(cfg)
        manifest.stage_timings["ingest"] = 1.5
        manifest.stages_completed.append("ingest")
        manifest.save(cfg.out / manifest.manifest_id)
        again = open_manifest(cfg)
        assert again.stages_completed == ["ingest"]
        assert again.stage_timings["ingest"] == 1.5


class TestHelpers:
    def test_stamp_prefixes_manifest_line(self):
        stamped = _stamp("abc123", "col\n1\n")
        assert stamped.splitlines()[0] == "# manifest: abc123"
        assert stamped.endswith("col\n1\n")

    def test_stamp_xml_keeps_declaration_first(self):
        data = b"<?xml version='1.0'?>\n<gexf></gexf>\n"
        stamped = _stamp_xml("abc123", data)
        lines = stamped.splitlines()
        assert lines[0].startswith(b"<?xml")
        assert b"manifest: abc123" in lines[1]

    def test_parallel_map_preserves_order(self):
        items = list(range(100))
        assert parallel_map(lambda x: x * x, items, workers=4) == [x * x for x in items]
        assert parallel_map(lambda x: x + 1, items, workers=1) == [x + 1 for x in items]

    def test_apply_rule_half_is_identity(self):
        result = make_result(candidate_false_positive=True)
        assert _apply_rule(result, Fraction(1, 2)) is result

    def test_apply_rule_rethresholds(self):
        relaxed = _apply_rule(make_result(k=2), Fraction(1, 3))
        assert relaxed.label is ProfileLabel.SPECIALIST

    def test_apply_rule_never_overrides_false_positive(self):
        result = make_result(k=5, label=ProfileLabel.FALSE_POSITIVE)
        assert _apply_rule(result, Fraction(1, 3)).label is ProfileLabel.FALSE_POSITIVE

    def test_community_csv_orders_labels_and_skips_empty(self):
        labels = [ProfileLabel.OCCASIONAL] * 3 + [ProfileLabel.SPECIALIST]
        text = _community_csv(labels)
        assert text.splitlines() == [
            "label,count,pct",
            "specialist,1,25.00",
            "occasional,3,75.00",
        ]

    def test_seed_master_adds_missing_seed_with_pool_counts(self):
        pool = {
            "webometrics": KeywordTerm(
                term_norm="webometrics",
                variants=frozenset({"Webometrics"}),
                freq_title=4,
                freq_article_keyword=1,
            )
        }
        profiles = [make_profile("p1", ("Webometrics",)), make_profile("p2", ("x",))]
        seeded = _seed_master([], ["webometrics"], pool, profiles, ())
        assert [t.term_norm for t in seeded] == ["webometrics"]
        assert seeded[0].freq_title == 4
        assert seeded[0].freq_profile_interest == 1
        assert seeded[0].status is TermStatus.ACCEPTED

    def test_seed_master_skips_known_variants(self):
        master = [
            KeywordTerm(
                term_norm="bibliometrics",
                variants=frozenset({"Bibliometrics"}),
                status=TermStatus.ACCEPTED,
            )
        ]
        seeded = _seed_master(master, ["Bibliometrics"], {}, [], ())
        assert seeded == master


class TestStageOrchestration:
    def test_unknown_stage_rejected(self, tmp_path):
        with pytest.raises(ConfigError):
            run_stage("polish", demo_config(tmp_path))

    def test_stage_before_its_inputs(self, tmp_path):
        with pytest.raises(MissingArtifact):
            run_stage("vocab", demo_config(tmp_path))

    def test_run_all_produces_every_stage_directory(self, demo_run):
        for stage in STAGES:
            assert (demo_run / stage).is_dir(), stage
        manifest = json.loads((demo_run / "manifest.json").read_text())
        assert manifest["stages_completed"] == list(STAGES)
        assert manifest["counters"]["discover.profiles_found"] == 46
        assert manifest["counters"]["rank.hcd_size"] == 30

    def test_report_bundle_complete_and_stamped(self, demo_run):
        manifest_id = demo_run.name
        for name in REPORT_FILES:
            path = demo_run / "report" / name
            assert path.is_file(), name
            if name.endswith(".gexf"):
                assert f"manifest: {manifest_id}".encode() in path.read_bytes()
            else:
                first = path.read_text(encoding="utf-8").splitlines()[0]
                assert first == f"# manifest: {manifest_id}", name

    def test_rerunning_a_stage_never_mutates_earlier_artifacts(self, tmp_path):
        cfg = demo_config(tmp_path)
        run_dir = cfg.out / open_manifest(cfg).manifest_id
        for stage in ("ingest", "vocab", "discover", "classify", "rank"):
            run_stage(stage, cfg)
        before = {
            p: p.read_bytes()
            for p in (run_dir / "ingest").iterdir()
        }
        run_stage("rank", cfg)
        after = {p: p.read_bytes() for p in (run_dir / "ingest").iterdir()}
        assert before == after

    def test_jsonl_artifacts_live_under_manifest_directory(self, demo_run):
        # Machine-readable artifacts carry their run identity by path.
        assert (demo_run / "ingest" / "profiles.jsonl").is_file()
        assert (demo_run / "rank" / "hcd.jsonl").is_file()
        first = (demo_run / "rank" / "merge_provenance.csv").read_text().splitlines()[0]
        assert first == f"# manifest: {demo_run.name}"

    def test_data_error_writes_diagnostics(self, tmp_path):
        fixtures = tmp_path / "fixtures"
        fixtures.mkdir()
        (fixtures / "bad.html").write_text(
            '<div id="profile" data-profile-id="bad"></div>', encoding="utf-8"
        )
        path = write_config(
            tmp_path,
            "[inputs]\nfixtures = fixtures\n[output]\nout = out\n",
        )
        cfg = load_run_config(path)
        with pytest.raises(DataError):
            run_stage("ingest", cfg)
        run_dirs = list((tmp_path / "out").iterdir())
        assert len(run_dirs) == 1
        diagnostics = run_dirs[0] / "diagnostics.txt"
        assert diagnostics.is_file()
        assert "ingest" in diagnostics.read_text()


class TestDemoReports:
    """The shipped corpus reproduces its checked-in expected tables."""

    @pytest.mark.parametrize(
        "name",
        [
            "table1_keywords.csv",
            "table2_authors.csv",
            "table3_documents.csv",
            "table4_journals.csv",
            "table5_publishers.csv",
            "fig1_series.csv",
            "community_summary.csv",
        ],
    )
    def test_report_matches_expected(self, demo_run, name):
        produced = (demo_run / "report" / name).read_text(encoding="utf-8")
        body = "".join(
            line for line in produced.splitlines(True) if not line.startswith("# manifest:")
        )
        expected = (DEMO / "expected" / name).read_text(encoding="utf-8")
        assert body == expected

    def test_meta_counts_match(self, demo_run):
        meta = json.loads((DEMO / "expected" / "meta.json").read_text())
        manifest = json.loads((demo_run / "manifest.json").read_text())
        counters = manifest["counters"]
        assert counters["ingest.profiles"] == meta["profiles_total"]
        assert counters["ingest.tagged_records"] == meta["tagged_records"]
        assert counters["discover.profiles_found"] == meta["profiles_found"]
        assert counters["classify.specialists"] == meta["specialists"]
        assert counters["classify.occasionals"] == meta["occasionals"]
        assert counters["classify.false_positives"] == meta["false_positives"]
        assert counters["rank.hcd_size"] == meta["hcd_size"]
        assert counters["rank.duplicates_removed"] == meta["duplicates_removed"]
        assert counters["discover.master_terms"] == meta["master_terms"]

    def test_hcd_classes_match_meta(self, demo_run):
        meta = json.loads((DEMO / "expected" / "meta.json").read_text())
        classes = json.loads((demo_run / "rank" / "hcd_classes.json").read_text())
        assert len(classes["journal"]) == meta["journal_class"]
        assert len(classes["book"]) == meta["book_class"]

    def test_orphan_chapter_warned(self, demo_run):
        reports = (demo_run / "rank" / "reports.txt").read_text()
        assert "orphan chapter p08d2" in reports
