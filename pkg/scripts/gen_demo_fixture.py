#!/usr/bin/env python3
"""Generate the bundled demo corpus and its expected report tables.

Everything under demo/ derives from the PLAN tables in this script:
profile page fixtures, the field-tagged export, the extra document
file, the review decision log, the run config, and the expected report
CSVs. The expectations are recomputed here with small standalone
reimplementations of the scoring rules (kept independent of the
package on purpose), and a battery of audits fails the build when the
plan violates one of its own constraints.

Run from the repository root:

    python3 scripts/gen_demo_fixture.py
"""

from __future__ import annotations

import csv
import html
import io
import json
import re
import sys
import unicodedata
from collections import Counter, defaultdict
from decimal import Decimal, ROUND_HALF_UP
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
DEMO = ROOT / "demo"
DATA = ROOT / "src" / "madap" / "data"

SEEDS = ("bibliometrics", "scientometrics", "informetrics")
AFFILIATION_DOMAIN = "cwts.example.edu"
THRESHOLD = 5
TOP_N = 30

# ---------------------------------------------------------------------------
# Standalone versions of the matching rules.

_PUNCT = re.compile(r"[^\w\s]|_")
_WS = re.compile(r"\s+")


def norm(raw: str) -> str:
    text = unicodedata.normalize("NFKD", raw)
    text = "".join(c for c in text if not unicodedata.combining(c))
    text = _PUNCT.sub(" ", text.lower())
    return _WS.sub(" ", text).strip()


def contains(text_norm: str, term_norm: str) -> bool:
    term = term_norm.split()
    toks = text_norm.split()
    n = len(term)
    return n > 0 and any(toks[i : i + n] == term for i in range(len(toks) - n + 1))


def surname(author: str) -> str:
    head = author.split(",", 1)[0] if "," in author else author
    toks = norm(head).split()
    return toks[-1] if toks else ""


def h_index(citations: list[int]) -> int:
    ranked = sorted(citations, reverse=True)
    h = 0
    for i, c in enumerate(ranked, start=1):
        if c >= i:
            h = i
    return h


def pct1(num: int, den: int) -> str:
    if den == 0:
        return "0.0"
    return str((Decimal(num) * 100 / Decimal(den)).quantize(Decimal("0.1"), ROUND_HALF_UP))


def pct2(num: int, den: int) -> str:
    return str((Decimal(num) * 100 / Decimal(den)).quantize(Decimal("0.01"), ROUND_HALF_UP))


def per_doc_2dp(citations: int, docs: int) -> str:
    return str((Decimal(citations) / Decimal(docs)).quantize(Decimal("0.01"), ROUND_HALF_UP))


def load_tiers() -> dict[str, str]:
    tiers = {}
    with open(DATA / "venue_tiers.csv", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            tiers[norm(row["name"])] = row["tier"]
    return tiers


def load_aliases() -> dict[str, str]:
    aliases = {}
    with open(DATA / "venue_aliases.csv", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            aliases[norm(row["variant"])] = norm(row["canonical"])
    return aliases


ALIASES = load_aliases()
TIERS = load_tiers()
IN_FIELD_TIERS = {"core", "lis", "science_studies"}


def venue_norm(raw: str) -> str:
    base = norm(raw)
    return ALIASES.get(base, base)


def venue_tier(raw: str) -> str:
    return TIERS.get(venue_norm(raw), "other")


# ---------------------------------------------------------------------------
# PLAN: author profiles.
#
# Doc rows: (suffix, title, venue, venue_kind, year, citations, kind,
# parent_suffix, co_authors). kind "a" journal_article, "b" book,
# "c" book_chapter. Expected label/route/round are audited, never fed
# forward silently.

A = "journal_article"
B = "book"
C = "book_chapter"


def d(sfx, title, venue, year, cites, kind=A, vkind="journal", parent=None, co=()):
    return dict(
        sfx=sfx, title=title, venue=venue, vkind=vkind, year=year,
        cites=cites, kind=kind, parent=parent, co=list(co),
    )


PROFILES = [
    dict(
        pid="p01", name="Nerea Olazabal", dom="ehu-metrics.example.edu",
        interests=["bibliometrics", "citation analysis"], pages=2,
        label="specialist", route="keyword", rnd=1,
        docs=[
            d("d1", "Mapping science through academic profiles", "Scientometrics", 2014, 980, co=["Tomas Vela"]),
            d("d2", "Academic search engines as data sources", "Journal of Informetrics", 2015, 620),
            d("d3", "Digital repositories usage statistics", "Online Information Review", 2010, 55),
            d("d4", "Scholarly blogs as citation sources", "Information Research", 2012, 30),
        ],
    ),
    dict(
        pid="p02", name="Tomas Kettler", dom="infosci.example.edu",
        interests=["bibliometrics", "H-index"],
        label="specialist", route="keyword", rnd=1,
        docs=[
            d("d1", "The h index revisited", "JASIST", 2008, 940),
            d("d2", "Ranking universities by research output", "Scientometrics", 2015, 380),
            d("d3", "Library usage data at scale", "Journal of Documentation", 2011, 62),
            d("d4", "Survey methods in information science", "Libri", 2006, 20),
        ],
    ),
    dict(
        pid="p03", name="Ingrid Vossberg", dom="icm.example.edu",
        interests=["citation analysis", "bibliometrics"],
        label="specialist", route="keyword", rnd=1,
        docs=[
            d("d1", "Citation analysis of collaborative networks", "Journal of Informetrics", 2011, 905, co=["Priya Raghunath"]),
            d("d2", "Coauthorship inflation over decades", "Scientometrics", 2015, 88),
            d("d3", "Workshop proceedings indexing quality", "Scire", 2009, 35),
        ],
    ),
    dict(
        pid="p04", name="Mateo Quiroga", dom="ugr-eval.example.edu",
        interests=["scientometrics"],
        label="specialist", route="keyword", rnd=1,
        docs=[
            d("d1", "Handbook of scientometric indicators", "Springer", 2009, 810, kind=B, vkind="publisher", co=["Livia Brandt"]),
            d("d2", "Indicator standards and data sources", "Springer", 2009, 35, kind=C, vkind="publisher", parent="d1"),
            d("d3", "National evaluation systems compared", "Springer", 2009, 25, kind=C, vkind="publisher", parent="d1"),
            d("d4", "Evaluating research with citation analysis", "Springer", 2011, 500, kind=B, vkind="publisher"),
            d("d5", "University rankings methodology critique", "Scientometrics", 2013, 45),
            d("d6", "Grant peer review outcomes", "Research Evaluation", 2008, 38),
        ],
    ),
    dict(
        pid="p05", name="Livia Brandt", dom="unileiden.example.edu",
        interests=["bibliometrics", "Altmetrics"],
        label="specialist", route="keyword", rnd=1,
        docs=[
            d("d1", "Bibliometrics and research evaluation systems", "Scientometrics", 2010, 835),
            d("d2", "A century of measuring science", "MIT Press", 1999, 290, kind=B, vkind="publisher"),
            d("d3", "Societal impact metrics reviewed", "Research Evaluation", 2015, 50),
        ],
    ),
    dict(
        pid="p06", name="Oskar Lindqvist", dom="kb-stockholm.example.edu",
        interests=["bibliometrics", "Informetría"],
        label="specialist", route="keyword", rnd=1,
        docs=[
            d("d1", "Informetrics: theory and practice", "Wiley", 2005, 800, kind=B, vkind="publisher"),
            d("d2", "Scientific productivity and age: a longitudinal study", None, 2007, 185),
            d("d3", "Informetric laws revisited", "Journal of Informetrics", 2014, 58),
        ],
    ),
    dict(
        pid="p07", name="Carmen Ituarte", dom="ucm.example.edu",
        interests=["webometrics", "bibliometrics"],
        label="specialist", route="keyword", rnd=1,
        docs=[
            d("d1", "Measuring scholarly impact on the web", "Journal of Documentation", 2006, 760),
            d("d2", "Link analysis of university webs", "Cybermetrics", 2009, 72),
            d("d3", "Navigation patterns of catalogue users", "Library Hi Tech", 2003, 25),
        ],
    ),
    dict(
        pid="p08", name="Dario Festa", dom="polimi.example.edu",
        interests=["bibliometrics", "scientometrics"],
        label="specialist", route="keyword", rnd=1,
        docs=[
            d("d1", "The invisible college of information science", "MIT Press", 2001, 720, kind=B, vkind="publisher"),
            d("d2", "Indicators for the social sciences", "De Gruyter", 2011, 160, kind=C, vkind="publisher", parent="x9"),
            d("d3", "Half life of cited literature", "Scientometrics", 2012, 90),
            d("d4", "Obsolescence in digital archives", "JASIST", 2013, 66),
            d("d5", "Citation context tools for reviewers", "Journal of Informetrics", 2015, 40),
        ],
    ),
    dict(
        pid="p09", name="Helena Marek", dom="ifq-berlin.example.edu",
        interests=["scientometrics", "informetrics"],
        label="specialist", route="keyword", rnd=1,
        docs=[
            d("d1", "Scientometrics for science policy", "Research Policy", 2012, 690),
            d("d2", "Patent citations and technology transfer", "Research Policy", 2010, 52),
            d("d3", "Interview methods in innovation studies", "Prometheus", 2008, 21),
        ],
    ),
    dict(
        pid="p10", name="Anton Silbers", dom="uva-score.example.edu",
        interests=["bibliometrics"],
        label="specialist", route="keyword", rnd=1,
        docs=[
            d("d1", "Citation networks and knowledge flows", "Scientometrics", 2013, 655),
            d("d2", "Field normalization of indicators", "JASIST", 2011, 47),
            d("d3", "Build systems for research software", "Software Practice Notes", 2007, 19),
        ],
    ),
    dict(
        pid="p11", name="Priya Raghunath", dom="iisc-sci.example.edu",
        interests=["bibliometrics", "open access"],
        label="specialist", route="keyword", rnd=1,
        docs=[
            d("d1", "Bibliometrics of open access publishing", "PLOS ONE", 2013, 590),
            d("d2", "Citation analysis of collaborative networks", "Journal of Informetrics", 2012, 900,
              co=["__first__Ingrid Vossberg"]),
            d("d3", "Altmetric scores and news coverage", "Journalism Quarterly", 2015, 33),
        ],
    ),
    dict(
        pid="p12", name="Yusuf Demirel", dom="metu.example.edu",
        interests=["scientometrics"],
        label="specialist", route="keyword", rnd=1,
        docs=[
            d("d1", "Indicators of international collaboration", "Scientometrics", 2009, 560),
            d("d2", "Affiliation disambiguation at scale", "Journal of Informetrics", 2012, 44),
            d("d3", "Text mining for survey research", "Quality and Quantity", 2014, 18),
        ],
    ),
    dict(
        pid="p13", name="Greta Holm", dom="oslomet.example.edu",
        interests=["webometrics", "bibliometrics"],
        label="specialist", route="keyword", rnd=1,
        docs=[
            d("d1", "Webometrics and the structure of the web", "Cybermetrics", 2004, 530),
            d("d2", "Search engine coverage of the academic web", "JASIST", 2006, 41),
            d("d3", "Web archiving practices in Europe", "Archival Science", 2010, 16),
        ],
    ),
    dict(
        pid="p14", name="Bram Verlinden", dom="ugent-ec.example.edu",
        interests=["bibliometrics"],
        label="specialist", route="keyword", rnd=1,
        docs=[
            d("d1", "The scholarly communication life cycle", "Wiley", 2010, 470, kind=B, vkind="publisher"),
            d("d2", "Preprint citation advantage measured", "Scientometrics", 2014, 77),
            d("d3", "Reading patterns of researchers", "Journal of Documentation", 2012, 49),
            d("d4", "Subscription costs of serials", "Learned Publishing", 2015, 22),
        ],
    ),
    dict(
        pid="p15", name="Aiko Tanabe", dom="nistep.example.edu",
        interests=["h index", "bibliometrics"],
        label="specialist", route="keyword", rnd=1,
        docs=[
            d("d1", "Peer review and bibliometric indicators", "Research Policy", 2014, 440),
            d("d2", "The h index of research groups", "Scientometrics", 2011, 37),
            d("d3", "Assessment rubrics in higher education", "Assessment in Education", 2009, 14),
        ],
    ),
    dict(
        pid="p16", name="Janos Keleti", dom="elte.example.edu",
        interests=["informetrics", "science mapping"],
        label="specialist", route="keyword", rnd=1,
        docs=[
            d("d1", "Mapping interdisciplinary research fields", "Journal of Informetrics", 2014, 410),
            d("d2", "Journal classification schemes compared", "JASIST", 2010, 31),
            d("d3", "Facet analysis in classification", "Knowledge Organization", 2008, 12),
        ],
    ),
    dict(
        pid="p17", name="Noor El-Amin", dom="aucegypt.example.edu",
        interests=["bibliometrics"],
        label="specialist", route="keyword", rnd=1,
        docs=[
            d("d1", "The geography of scientific collaboration", "Journal of Documentation", 2009, 355),
            d("d2", "City level analysis of science", "Scientometrics", 2007, 28),
            d("d3", "Urban research clusters surveyed", "GeoJournal", 2005, 11),
        ],
    ),
    dict(
        pid="p18", name="Sofia Petrakis", dom="auth-lib.example.edu",
        interests=["citation analysis"],
        label="specialist", route="keyword", rnd=1,
        docs=[
            d("d1", "Gender differences in citation practices", "PLOS ONE", 2012, 330),
            d("d2", "Female first authorship trends", "Scientometrics", 2014, 26),
            d("d3", "Editorial board composition surveyed", "Learned Societies Review", 2010, 2),
        ],
    ),
    dict(
        pid="p19", name="Edda Kristjans", dom=AFFILIATION_DOMAIN,
        interests=["science mapping", "research networks"],
        label="specialist", route="affiliation", rnd=1,
        docs=[
            d("d1", "Co-word maps of emerging technologies", "Research Evaluation", 2013, 270),
            d("d2", "Overlay maps of science", "Scientometrics", 2012, 24),
            d("d3", "Conference networks of economists", "Social Networks Review", 2009, 8),
        ],
    ),
    dict(
        pid="p20", name="Ruben Castells", dom=AFFILIATION_DOMAIN,
        interests=["research policy", "innovation studies"],
        label="specialist", route="affiliation", rnd=1,
        docs=[
            d("d1", "Funding acknowledgement analysis", "Research Evaluation", 2014, 250),
            d("d2", "Mission oriented funding programs", "Research Policy", 2011, 23),
            d("d3", "Scenario planning for research agencies", "Futures", 2013, 7),
        ],
    ),
    dict(
        pid="p21", name="Hanne Skov", dom="sub." + AFFILIATION_DOMAIN,
        interests=["digital humanities"],
        label="occasional", route="affiliation", rnd=1,
        docs=[
            d("d1", "Topic models for medieval texts", "Digital Scholarship Review", 2014, 64),
            d("d2", "Crowdsourcing transcription projects", "Manuscript Studies Forum", 2012, 38),
            d("d3", "Text reuse detection in historical corpora", "Scientometrics", 2015, 4),
        ],
    ),
    dict(
        pid="p22", name="Marco Benetti", dom=AFFILIATION_DOMAIN,
        interests=["semantic web"],
        label="occasional", route="affiliation", rnd=1,
        docs=[
            d("d1", "Ontology alignment benchmarks", "Semantic Web Journal", 2013, 58),
            d("d2", "Linked data for library catalogues", "Knowledge Organization", 2011, 34),
            d("d3", "Linked data for citation graphs", "Journal of Informetrics", 2014, 4),
        ],
    ),
    dict(
        pid="p23", name="Bernd Uhlmann", dom=AFFILIATION_DOMAIN,
        interests=["metallurgy", "alloy design"],
        label="false_positive", route="affiliation", rnd=1,
        docs=[
            d("d1", "Fatigue in aluminium alloys", "Acta Materialia Notes", 2012, 88),
            d("d2", "Grain boundary engineering methods", "Metals Research Letters", 2010, 54),
            d("d3", "Corrosion resistance of coatings", "Surface Engineering Reports", 2008, 21),
        ],
    ),
    dict(
        pid="p24", name="Irina Melnik", dom=AFFILIATION_DOMAIN,
        interests=["crystallography"],
        label="false_positive", route="affiliation", rnd=1,
        docs=[
            d("d1", "Phase transitions in perovskites", "Crystal Growth Bulletin", 2013, 76),
            d("d2", "Neutron diffraction of thin films", "Materials Characterization Notes", 2011, 48),
            d("d3", "Twinning defects in quartz", "Mineralogy Letters", 2009, 17),
        ],
    ),
    dict(
        pid="p25", name="Mira Chowdhury", dom="nii-tokyo.example.edu",
        interests=["data curation"],
        label="specialist", route="document_backlink", rnd=1,
        docs=[
            d("d1", "Reference lists as data", "Scientometrics", 2015, 92),
            d("d2", "Cited reference accuracy", "Journal of Informetrics", 2013, 59),
            d("d3", "Metadata quality in repositories", "Database Journal", 2011, 13),
        ],
    ),
    dict(
        pid="p26", name="Sandor Gal", dom=None,
        interests=["history of science"],
        label="occasional", route="document_backlink", rnd=1,
        docs=[
            d("d1", "The republic of letters quantified", "History of Science Quarterly", 2008, 55),
            d("d2", "Scientific societies in the enlightenment", "Annals of Intellectual History", 2005, 31),
            d("d3", "Early citation practices in natural philosophy", "Journal of Documentation", 2013, 4),
        ],
    ),
    dict(
        pid="p27", name="Nuria Balcells", dom="ub-docs.example.edu",
        interests=["research management"],
        label="occasional", route="document_backlink", rnd=1,
        docs=[
            d("d1", "Performance agreements in universities", "European Policy Review", 2014, 52),
            d("d2", "Administrative data for strategy", "Management Studies Forum", 2012, 29),
            d("d3", "Benchmarking research offices", "Research Evaluation", 2015, 3),
        ],
    ),
    dict(
        pid="p28", name="Felix Oberndorf", dom="tib-hannover.example.edu",
        interests=["Altmetrics", "science communication"],
        label="specialist", route="keyword", rnd=2,
        docs=[
            d("d1", "Altmetrics and social media mentions", "Nature", 2014, 230, co=["Nina Crane"]),
            d("d2", "Tweets and later citations", "Journal of Informetrics", 2015, 36),
            d("d3", "Press releases and science news", "Science Communication Studies", 2013, 10),
        ],
    ),
    dict(
        pid="p29", name="Salma Idrissi", dom="um5-rabat.example.edu",
        interests=["altmetrics"],
        label="specialist", route="keyword", rnd=2,
        docs=[
            d("d1", "Altmetric indicators for funders", "JASIST", 2015, 71),
            d("d2", "Mendeley readership analysis", "Scientometrics", 2014, 43),
            d("d3", "Blog coverage of clinical trials", "Online Review of Medicine", 2012, 6),
        ],
    ),
    dict(
        pid="p30", name="Imre Farkas", dom="bme.example.edu",
        interests=["Altmetrics", "social media"],
        label="occasional", route="keyword", rnd=2,
        docs=[
            d("d1", "Viral spread of science news stories", "New Media Studies", 2013, 49),
            d("d2", "Engagement metrics for video platforms", "Media Metrics Review", 2014, 27),
            d("d3", "Altmetric data quality issues", "Journal of Informetrics", 2015, 3),
        ],
    ),
    dict(
        pid="p31", name="Teresa Abellan", dom="csic-cchs.example.edu",
        interests=["Informetría"],
        label="specialist", route="keyword", rnd=2,
        docs=[
            d("d1", "Informetria aplicada a la gestion cientifica", "Scientometrics", 2013, 85),
            d("d2", "Produccion cientifica iberoamericana", "Revista Española de Documentación Científica", 2011, 39),
            d("d3", "Repositorios institucionales en America Latina", "Anales de Documentacion", 2009, 5),
        ],
    ),
    dict(
        pid="p32", name="Piotr Zelenko", dom="amu-poznan.example.edu",
        interests=["open science"],
        label="occasional", route="document_backlink", rnd=2,
        docs=[
            d("d1", "Reproducibility checklists in practice", "Open Research Forum", 2015, 46),
            d("d2", "Data availability statements audited", "Research Integrity Notes", 2014, 25),
            d("d3", "Preregistration uptake in psychology", "Scientometrics", 2015, 3),
        ],
    ),
]

_OCCASIONAL_TAIL = [
    ("p33", "Lea Morvan", ["bibliometrics"],
     ("Irrigation scheduling with sensors", "Agricultural Water Notes", 2012, 86),
     ("Soil moisture mapping at field scale", "Agronomy Reports", 2010, 50),
     ("Note on citation coverage of agronomy", "Scientometrics", 2014, 4)),
    ("p34", "Dries Hamers", ["bibliometrics"],
     ("Freight corridors and modal shift", "Transport Studies Forum", 2011, 78),
     ("Bicycle infrastructure investments", "Urban Mobility Papers", 2013, 44),
     ("Research output of transport institutes", "Journal of Informetrics", 2015, 4)),
    ("p35", "Yuki Sonoda", ["bibliometrics"],
     ("Sleep patterns of shift workers", "Occupational Health Letters", 2009, 82),
     ("Fatigue scales validated", "Ergonomics Notes", 2012, 47),
     ("Publication trends in sleep research", "Scientometrics", 2015, 3)),
    ("p36", "Malik Toure", ["bibliometrics"],
     ("Solar microgrids for rural clinics", "Energy Access Review", 2013, 74),
     ("Battery storage sizing heuristics", "Power Systems Notes", 2011, 41),
     ("Mapping energy research output", "Journal of Informetrics", 2014, 4)),
    ("p37", "Olga Brezina", ["bibliometrics"],
     ("Glacier retreat photogrammetry", "Alpine Geography Letters", 2010, 70),
     ("Permafrost monitoring networks", "Cold Regions Notes", 2012, 39),
     ("Output indicators for polar science", "Scientometrics", 2013, 4)),
    ("p38", "Tomo Radic", ["bibliometrics"],
     ("Adriatic fish stock assessments", "Marine Resources Forum", 2011, 68),
     ("Bycatch reduction devices tested", "Fisheries Technology Notes", 2013, 37),
     ("Counting marine science publications", "Journal of Informetrics", 2015, 3)),
    ("p39", "Elif San", ["bibliometrics"],
     ("Earthquake retrofit costs surveyed", "Structural Safety Notes", 2012, 62),
     ("Masonry wall testing protocols", "Construction Materials Forum", 2010, 35),
     ("Seismology research indicators", "Scientometrics", 2014, 4)),
    ("p40", "Ivo Petricek", ["bibliometrics"],
     ("Vineyard disease forecasting models", "Viticulture Notes", 2013, 58),
     ("Drone imaging of crop stress", "Precision Farming Letters", 2014, 33),
     ("Agricultural research rankings note", "Journal of Informetrics", 2015, 4)),
    ("p41", "Rosa Quint", ["citation analysis"],
     ("School meal programs evaluated", "Nutrition Policy Forum", 2011, 54),
     ("Cafeteria waste audits", "Food Systems Notes", 2013, 31),
     ("Citing behaviour in nutrition science", "Scientometrics", 2015, 3)),
    ("p42", "Diego Lara", ["citation analysis"],
     ("Minimum wage effects reexamined", "Labour Economics Letters", 2012, 50),
     ("Informal employment measurement", "Development Statistics Notes", 2010, 28),
     ("Reference patterns of economists", "Journal of Informetrics", 2014, 4)),
    ("p43", "Jonas Vik", ["citation analysis"],
     ("Avalanche risk communication", "Mountain Safety Review", 2013, 47),
     ("Ski patrol response times", "Winter Sports Notes", 2011, 26),
     ("Citation habits in hazards research", "Scientometrics", 2013, 3)),
    ("p44", "Petra Molnar", ["h index"],
     ("Classroom robotics pilots", "Education Technology Forum", 2012, 45),
     ("Teacher training cohorts tracked", "Pedagogy Notes", 2014, 24),
     ("Indexing teacher research output", "Journal of Informetrics", 2015, 3)),
    ("p45", "Samir Wael", ["scientometrics"],
     ("Desalination membrane fouling", "Water Treatment Letters", 2011, 42),
     ("Brine disposal options compared", "Coastal Engineering Notes", 2013, 22),
     ("Output study of desalination research", "Scientometrics", 2015, 3)),
    ("p46", "Maren Holst", ["bibliometrics", "informetrics"],
     ("Wind farm noise complaints", "Acoustics and Planning Forum", 2012, 40),
     ("Turbine blade inspection drones", "Renewable Maintenance Notes", 2014, 21),
     ("Publication counts for wind energy", "Journal of Informetrics", 2015, 3)),
]

for pid, name, interests, out1, out2, small in _OCCASIONAL_TAIL:
    PROFILES.append(
        dict(
            pid=pid, name=name, dom=f"{pid}-inst.example.edu", interests=interests,
            label="occasional", route="keyword", rnd=1,
            docs=[
                d("d1", out1[0], out1[1], out1[2], out1[3]),
                d("d2", out2[0], out2[1], out2[2], out2[3]),
                d("d3", small[0], small[1], small[2], small[3]),
            ],
        )
    )

_UNFOUND = [
    ("p47", "Victor Roca", "unizar-chem.example.edu", ["organic chemistry"],
     ("Ligand binding kinetics measured", "Chemical Kinetics Letters", 2012, 44),
     ("Catalyst recycling pathways", "Green Chemistry Notes", 2014, 28)),
    ("p48", "Lin Mei", None, ["polymer synthesis"],
     ("Block copolymer self assembly", "Polymer Science Forum", 2013, 39),
     ("Monomer purity effects", "Macromolecule Notes", 2011, 23)),
    ("p49", "Abel Santos", "ufmg-bio.example.edu", ["enzyme kinetics"],
     ("Substrate channeling in enzymes", "Biocatalysis Letters", 2012, 36),
     ("Thermostable enzyme variants", "Protein Engineering Notes", 2014, 20)),
    ("p50", "Dana Vogel", "mps-astro.example.edu", ["telescope instrumentation"],
     ("Adaptive optics calibration", "Instrumentation Review", 2013, 33),
     ("Detector noise characterization", "Observatory Technical Notes", 2011, 18)),
]

for pid, name, dom, interests, doc1, doc2 in _UNFOUND:
    PROFILES.append(
        dict(
            pid=pid, name=name, dom=dom, interests=interests,
            label=None, route=None, rnd=None,
            docs=[
                d("d1", doc1[0], doc1[1], doc1[2], doc1[3]),
                d("d2", doc2[0], doc2[1], doc2[2], doc2[3]),
            ],
        )
    )


def doc_id(pid: str, sfx: str) -> str:
    return f"{pid}{sfx}"


def doc_authors(profile, doc) -> list[str]:
    """Author display strings for a profile doc row.

    A co-author prefixed "__first__" is listed ahead of the profile
    owner (shared papers must show the same first author on both
    owners' pages).
    """
    authors = [profile["name"]]
    for co in doc["co"]:
        if co.startswith("__first__"):
            authors.insert(0, co[len("__first__"):])
        else:
            authors.append(co)
    return authors


# ---------------------------------------------------------------------------
# PLAN: field-tagged corpus.

CI_FIELDS = [
    "astronomy", "geology", "botany", "zoology", "linguistics", "archaeology",
    "meteorology", "oceanography", "agronomy", "virology", "pedagogy", "economics",
]
CI_AU = [
    "Aalto, R", "Brank, J", "Cusk, E", "Dorn, W", "Eames, L", "Foxe, A",
    "Grieg, M", "Hahnel, S", "Ister, P", "Juhl, D", "Kovar, T", "Lassen, O",
    "Mero, V", "Nissen, F", "Oberg, C", "Pauls, H", "Ravel, G",
]
CI_SO = ["Annals of Library Science", "Library Quarterly", "Information Research"]

FILLER_AU = [
    "Vandroux, P", "Kemmler, S", "Osei, D", "Brandauer, L", "Nystrom, E",
    "Pirelli, G", "Tamura, H", "Weiss, V", "Okafor, C", "Lindell, M",
    "Sarpong, K", "Ferrand, J", "Oduya, R", "Maklakov, A", "Soriano, T",
    "Eriksen, B",
]
FILLER_SO = [
    "Library Quarterly", "Information Research", "Annals of Library Science",
    "Research Trends Quarterly", "Knowledge Organization",
]

BIB_TITLES = [
    "Bibliometrics of genomics literature",
    "Bibliometrics in clinical medicine reviews",
    "National research profiles through bibliometrics",
    "Bibliometrics and grant allocation outcomes",
    "Evaluative bibliometrics for universities",
    "Bibliometrics of nanotechnology patents",
    "Teaching bibliometrics to librarians",
    "Bibliometrics and the serials crisis",
    "Hospital research output studied with bibliometrics",
    "Bibliometrics of climate research",
    "Comparative bibliometrics of two physics institutes",
    "Bibliometrics for collection management",
    "Bibliometrics of software engineering venues",
    "Trends in agricultural science bibliometrics",
    "Bibliometrics and national science budgets",
    "Bibliometrics of neuroscience journals",
    "Applied bibliometrics in technology foresight",
    "Bibliometrics of mathematics preprints",
    "Library services assessed through bibliometrics",
    "Bibliometrics of economics working papers",
]
SCI_TITLES = [
    "Scientometrics of emerging technologies",
    "Scientometrics and research portfolio analysis",
    "A scientometrics approach to lab productivity",
    "Scientometrics of international coauthorship",
    "Regional innovation measured by scientometrics",
    "Scientometrics for funding agencies",
    "Scientometrics of doctoral training programs",
    "Scientometrics and journal pricing",
    "Scientometrics of retracted publications",
]
INF_TITLES = [
    "Informetrics of collaboration networks",
    "Informetrics and electronic publishing",
    "Foundations of informetrics revisited",
    "Informetrics of patent families",
    "Informetrics for digital libraries",
]
CA_TITLES = [
    "Citation analysis of sociology monographs",
    "Citation analysis and journal selection",
    "Citation analysis of engineering standards",
    "A citation analysis of legal scholarship",
    "Citation analysis for tenure review",
    "Citation analysis of data repositories",
    "Citation analysis in the humanities",
]
HIDX_TITLES = [
    "The h-index of chemistry departments",
    "Variants of the h-index compared",
    "The h-index and career age",
    "Predicting the h-index from early output",
    "The h-index of research groups in biology",
]
WEB_TITLES = [
    "Webometrics of university domains",
    "Webometrics and hyperlink topology",
    "Academic webometrics surveyed",
]
ALT_TITLES = [
    "Altmetrics of policy documents",
    "Altmetrics coverage across platforms",
    "Do altmetrics predict citations",
]
MAP_TITLES = [
    "Science mapping of chemistry subfields",
    "Science mapping with overlay techniques",
]
SINGULAR_TITLES = [
    "A bibliometric study of dentistry journals",
    "Bibliometric indicators under the microscope",
    "Scientometric profiles of nobel laureates",
    "A scientometric look at conference series",
]
NEUTRAL_TITLES = [
    "Collaboration in big science facilities",
    "The economics of journal publishing",
    "Research careers after postdoc appointments",
    "Laboratory notebooks in the digital age",
    "University industry linkages in biotech",
    "Science museums and public engagement",
    "Grant writing workloads surveyed",
    "The geography of conference travel",
    "Mentoring networks in academia",
    "Speed of editorial decisions",
    "Replication studies in psychology",
    "Software citation practices emerging",
    "Laboratory robots in routine assays",
]


def build_tagged() -> list[dict]:
    records = []

    def add(rid, ti, au, py, tc, so=None, pu=None, de=None, dt=None):
        records.append(dict(rid=rid, ti=ti, au=au, py=py, tc=tc, so=so, pu=pu,
                            de=de or [], dt=dt))

    for i in range(1, 90):
        add(
            f"r{i:03d}",
            f"The citation index coverage of {CI_FIELDS[i % len(CI_FIELDS)]} research, part {i}",
            CI_AU[i % len(CI_AU)],
            1985 + (i * 3) % 30,
            (i * 7) % 10,
            so=CI_SO[i % len(CI_SO)],
            de=["Indexing services"] if i % 4 == 0 else [],
        )

    groups = [
        (BIB_TITLES, ["Bibliometrics", "Research evaluation"], 2),
        (SCI_TITLES, ["Scientometrics"], 2),
        (INF_TITLES, ["Informetrics"], 2),
        (CA_TITLES, ["Citation analysis"], 2),
        (HIDX_TITLES, ["H-index"], 2),
        (WEB_TITLES, ["Webometrics"], 3),
        (ALT_TITLES, None, 1),
        (MAP_TITLES, None, 1),
        (SINGULAR_TITLES, None, 1),
        (NEUTRAL_TITLES, ["Science policy"], 5),
    ]
    n = 90
    for titles, de, stride in groups:
        for j, title in enumerate(titles):
            add(
                f"r{n:03d}",
                title,
                FILLER_AU[(n + j) % len(FILLER_AU)],
                1995 + (n * 7) % 21,
                5 + (n * 13) % 70,
                so=FILLER_SO[n % len(FILLER_SO)],
                de=list(de) if de and j % stride == 0 else [],
            )
            n += 1

    # Duplicate versions of profile-page papers and a tagged-only pair.
    add("r201", "Mapping Science Through Academic Profiles", "Olazabal, Nerea", 2014, 930, so="Scientometrics")
    add("r202", "The h index revisited", "Kettler, T", 2008, 915,
        so="Journal of the American Society for Information Science and Technology")
    add("r203", "Research portfolios of national laboratories", "Vandermeer, K", 2009, 55,
        so="Research Trends Quarterly")
    add("r204", "Research portfolios of national laboratories", "Vandermeer, K", 2010, 50,
        so="Research Trends Quarterly")

    # Tagged-only members of the highly cited set.
    add("r210", "Foundations of impact indicators", "Quiros, M", 2003, 310,
        so="Journal of the American Society for Information Science and Technology")
    add("r230", "The altmetrics handbook", "Harmaan, J", 2015, 210, pu="Wiley",
        dt="journal_article")
    add("r240", "Measuring science: a national indicators report", "Estrella, P", 2015, 130,
        dt="other")
    return records


TAGGED = build_tagged()

EXTRA_DOCS = [
    dict(
        doc_id="x01", title="Half a century of scientometrics reviewed",
        authors=["Mira Chowdhury", "Sandor Gal"], backlinks=["p25", "p26"],
        year=1988, citations=90, venue=("Scientometrics", "journal"), kind=A,
    ),
    dict(
        doc_id="x02", title="Bibliometrics for research managers",
        authors=["Nuria Balcells"], backlinks=["p27"],
        year=2012, citations=70, venue=("Research Trends Quarterly", "journal"), kind=A,
    ),
    dict(
        doc_id="x03", title="Altmetrics for software impact",
        authors=["Piotr Zelenko"], backlinks=["p32"],
        year=2015, citations=40, venue=("Journal of Open Research Software", "journal"), kind=A,
    ),
]

DECISIONS = [
    ("term", "altmetrics", "accept", "", "platform mention metrics, reviewer approved"),
    ("term", "informetria", "merge_into", "informetrics", "spelling variant"),
    ("profile", "p23", "mark_false_positive", "", "materials scientist"),
    ("profile", "p24", "mark_false_positive", "", "crystallographer"),
    ("cluster", "r230", "set_kind", "book", "publisher export miscodes edited volumes"),
]

EXPECTED_MASTER = ["bibliometrics", "scientometrics", "informetrics", "citation analysis", "h index"]
HARVESTED = ["altmetrics"]


# ---------------------------------------------------------------------------
# Fixture writers.


def profile_pages(p) -> list[str]:
    def row(doc):
        bits = [
            f'<tr class="doc" data-doc-id="{doc_id(p["pid"], doc["sfx"])}" data-kind="{doc["kind"]}"'
            + (f' data-parent="{p["pid"]}{doc["parent"]}"' if doc["parent"] else "")
            + ">",
            f'  <td class="title">{html.escape(doc["title"])}</td>',
            f'  <td class="authors">{html.escape("; ".join(doc_authors(p, doc)))}</td>',
        ]
        if doc["venue"] is not None:
            bits.append(
                f'  <td class="venue" data-venue-kind="{doc["vkind"]}">{html.escape(doc["venue"])}</td>'
            )
        bits.append(f'  <td class="year">{doc["year"]}</td>')
        bits.append(f'  <td class="cited">{doc["cites"]}</td>')
        bits.append("</tr>")
        return "\n".join(bits)

    pages = p.get("pages", 1)
    per_page = (len(p["docs"]) + pages - 1) // pages
    total = sum(doc["cites"] for doc in p["docs"])
    h = h_index([doc["cites"] for doc in p["docs"]])

    out = []
    for page_no in range(pages):
        docs = p["docs"][page_no * per_page : (page_no + 1) * per_page]
        head = [f'<div id="profile" data-profile-id="{p["pid"]}">']
        if page_no == 0:
            head.append(f'<h1 id="name">{html.escape(p["name"])}</h1>')
            if p["dom"]:
                head.append(f'<div id="verified">Verified email at {p["dom"]}</div>')
            head.append("<ul id=\"interests\">")
            head.extend(f"<li>{html.escape(i)}</li>" for i in p["interests"])
            head.append("</ul>")
            head.append('<table id="stats">')
            head.append(f"<tr><th>Citations</th><td>{total}</td></tr>")
            head.append(f"<tr><th>h-index</th><td>{h}</td></tr>")
            head.append("</table>")
            if pages > 1:
                head.append(f'<div id="pager" data-pages="{pages}"></div>')
        head.append('<table id="docs">')
        head.extend(row(doc) for doc in docs)
        head.append("</table>")
        head.append("</div>")
        out.append("\n".join(head) + "\n")
    return out


def write_fixtures():
    fixtures = DEMO / "fixtures"
    fixtures.mkdir(parents=True, exist_ok=True)
    for stale in fixtures.glob("*.html"):
        stale.unlink()
    for p in PROFILES:
        pages = profile_pages(p)
        (fixtures / f'{p["pid"]}.html').write_text(pages[0], encoding="utf-8")
        for i, page in enumerate(pages[1:], start=2):
            (fixtures / f'{p["pid"]}.{i}.html').write_text(page, encoding="utf-8")


def write_records():
    lines = []
    for r in TAGGED:
        lines.append(f"TI {r['ti']}")
        lines.append(f"AU {r['au']}")
        if r["so"]:
            lines.append(f"SO {r['so']}")
        if r["pu"]:
            lines.append(f"PU {r['pu']}")
        if r["dt"]:
            lines.append(f"DT {r['dt']}")
        lines.append(f"PY {r['py']}")
        lines.append(f"TC {r['tc']}")
        if r["de"]:
            lines.append(f"DE {'; '.join(r['de'])}")
        lines.append(f"AN {r['rid']}")
        lines.append("ER")
        lines.append("")
    (DEMO / "records.txt").write_text("\n".join(lines), encoding="utf-8")


def write_extras():
    rows = []
    for x in EXTRA_DOCS:
        name, vkind = x["venue"]
        rows.append(
            {
                "doc_id": x["doc_id"],
                "cluster_id": x["doc_id"],
                "title_raw": x["title"],
                "title_norm": norm(x["title"]),
                "authors": x["authors"],
                "author_profile_ids": x["backlinks"],
                "year": x["year"],
                "venue": {
                    "name_raw": name,
                    "name_norm": venue_norm(name),
                    "venue_kind": vkind,
                    "tier": venue_tier(name),
                },
                "citations": x["citations"],
                "kind": x["kind"],
                "parent_cluster_id": None,
            }
        )
    text = "\n".join(json.dumps(r, sort_keys=True, separators=(",", ":")) for r in rows)
    (DEMO / "extra_documents.jsonl").write_text(text + "\n", encoding="utf-8")


def write_decisions():
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["target", "target_id", "action", "arg", "note"])
    w.writerows(DECISIONS)
    (DEMO / "decisions.csv").write_text(out.getvalue(), encoding="utf-8")


def write_config():
    text = "\n".join(
        [
            "[discipline]",
            "master_keywords = bibliometrics, scientometrics, informetrics",
            f"affiliation_domains = {AFFILIATION_DOMAIN}",
            f"min_term_freq = {THRESHOLD}",
            "top_docs_per_author = 25",
            f"top_n_documents = {TOP_N}",
            "network_top_documents = 30",
            "network_top_specialists = 10",
            "workers = 1",
            "",
            "[inputs]",
            "fixtures = fixtures",
            "tagged_records = records.txt",
            "extra_documents = extra_documents.jsonl",
            "decisions = decisions.csv",
            "",
            "[output]",
            "out = out",
            "",
        ]
    )
    (DEMO / "config.ini").write_text(text, encoding="utf-8")


# ---------------------------------------------------------------------------
# Simulation: recompute what the pipeline must report.


def term_doc_freqs() -> tuple[Counter, Counter]:
    ft: Counter = Counter()
    fk: Counter = Counter()
    interest_universe = {norm(i) for p in PROFILES for i in p["interests"]}
    watched = set(EXPECTED_MASTER + HARVESTED) | interest_universe | {
        "citation index", "webometrics", "science mapping",
        "bibliometric", "scientometric", "informetric", "altmetric",
        "research evaluation",
    }
    for r in TAGGED:
        t = norm(r["ti"])
        for term in watched:
            if contains(t, term):
                ft[term] += 1
        for kw in {norm(x) for x in r["de"]}:
            if kw in watched:
                fk[kw] += 1
    return ft, fk


def simulate_vocab(ft: Counter, fk: Counter):
    """Master list before discovery: organic terms used by profiles."""
    interest_norms = {norm(i) for p in PROFILES for i in p["interests"]}
    rows = []
    for term in sorted(interest_norms):
        if ft[term] + fk[term] >= THRESHOLD:
            fpi = sum(
                1 for p in PROFILES if term in {norm(i) for i in p["interests"]}
            )
            rows.append((term, ft[term], fk[term], fpi))
    rows.sort(key=lambda r: (-r[1], r[0]))
    return rows


def simulate_discovery(master_terms: list[str]):
    """Replicate route and round attribution."""
    by_pid = {p["pid"]: p for p in PROFILES}
    variant_sets = {t: {t} for t in master_terms}

    def keyword_hits(variants):
        flat = set().union(*variant_sets.values()) if variant_sets else set()
        return {
            p["pid"] for p in PROFILES
            if any(norm(i) in flat for i in p["interests"])
        }

    def doc_hits(variants):
        flat = set().union(*variant_sets.values())
        out = set()
        for x in EXTRA_DOCS:
            name = x["venue"][0]
            core = venue_tier(name) == "core"
            if core or any(contains(norm(x["title"]), v) for v in flat):
                out.update(pid for pid in x["backlinks"] if pid in by_pid)
        return out

    found: dict[str, tuple[str, int]] = {}
    decisions = {t_id: (action, arg) for target, t_id, action, arg, _ in DECISIONS if target == "term"}

    rnd = 0
    while True:
        rnd += 1
        new = {}
        for pid in keyword_hits(variant_sets):
            if pid not in found:
                new[pid] = ("keyword", rnd)
        if rnd == 1:
            for p in PROFILES:
                if p["pid"] in found or p["pid"] in new or not p["dom"]:
                    continue
                dom = p["dom"].lower()
                if dom == AFFILIATION_DOMAIN or dom.endswith("." + AFFILIATION_DOMAIN):
                    new[p["pid"]] = ("affiliation", rnd)
        for pid in doc_hits(variant_sets):
            if pid not in found and pid not in new:
                new[pid] = ("document_backlink", rnd)
        found.update(new)

        grew = False
        for pid in found:
            for raw in by_pid[pid]["interests"]:
                cand = norm(raw)
                if any(cand in vs for vs in variant_sets.values()):
                    continue
                action_arg = decisions.get(cand)
                if action_arg is None:
                    continue
                action, arg = action_arg
                if action == "accept":
                    variant_sets[cand] = {cand}
                    grew = True
                elif action == "merge_into" and norm(arg) in variant_sets:
                    variant_sets[norm(arg)].add(cand)
                    grew = True
        if not new and not grew:
            break
        if rnd > 10:
            raise AssertionError("discovery did not stabilize")

    all_variants = set().union(*variant_sets.values())
    return found, all_variants


def in_field(doc, variants) -> bool:
    if doc["venue"] is not None and doc["vkind"] == "journal":
        if venue_tier(doc["venue"]) in IN_FIELD_TIERS:
            return True
    return any(contains(norm(doc["title"]), v) for v in variants)


def simulate_labels(found, variants):
    fp_decided = {t_id for target, t_id, action, _, _ in DECISIONS
                  if target == "profile" and action == "mark_false_positive"}
    labels = {}
    for p in PROFILES:
        if p["pid"] not in found:
            continue
        if p["pid"] in fp_decided:
            labels[p["pid"]] = "false_positive"
            continue
        cites = [doc["cites"] for doc in p["docs"]]
        h = h_index(cites)
        core = sorted(p["docs"], key=lambda doc: -doc["cites"])[:h]
        k = sum(1 for doc in core if in_field(doc, variants))
        labels[p["pid"]] = "specialist" if h > 0 and 2 * k >= h else "occasional"
    return labels


def tagged_to_pool_doc(r) -> dict:
    kind = {"book": B, "other": "other", "book_chapter": "other"}.get(r["dt"] or "", A)
    venue = r["so"] or r["pu"]
    vkind = "journal" if r["so"] else ("publisher" if r["pu"] else None)
    return dict(
        doc_id=r["rid"], title=r["ti"], authors=[r["au"]], year=r["py"],
        cites=r["tc"], kind=kind, venue=venue, vkind=vkind, parent=None, owners=[],
    )


def simulate_pool(labels):
    docs = []
    for p in PROFILES:
        if labels.get(p["pid"]) != "specialist":
            continue
        for doc in p["docs"]:
            docs.append(
                dict(
                    doc_id=doc_id(p["pid"], doc["sfx"]),
                    title=doc["title"], authors=doc_authors(p, doc),
                    year=doc["year"], cites=doc["cites"], kind=doc["kind"],
                    venue=doc["venue"], vkind=doc["vkind"] if doc["venue"] else None,
                    parent=f'{p["pid"]}{doc["parent"]}' if doc["parent"] else None,
                    owners=[p["pid"]],
                )
            )
    docs.extend(tagged_to_pool_doc(r) for r in TAGGED)
    for x in EXTRA_DOCS:
        docs.append(
            dict(
                doc_id=x["doc_id"], title=x["title"], authors=x["authors"],
                year=x["year"], cites=x["citations"], kind=x["kind"],
                venue=x["venue"][0], vkind=x["venue"][1], parent=None,
                owners=list(x["backlinks"]),
            )
        )

    groups: dict[tuple[str, str], list[dict]] = defaultdict(list)
    for doc in docs:
        groups[(norm(doc["title"]), surname(doc["authors"][0]))].append(doc)

    clusters = []
    for gdocs in groups.values():
        gdocs = sorted(gdocs, key=lambda doc: doc["year"])
        current = [gdocs[0]]
        for doc in gdocs[1:]:
            if doc["year"] - current[-1]["year"] <= 1:
                current.append(doc)
            else:
                clusters.append(current)
                current = [doc]
        clusters.append(current)

    pool = []
    provenance = {}
    for members in clusters:
        cites = [m["cites"] for m in members]
        assert len(set(cites)) == len(cites), f"tied versions in {sorted(m['doc_id'] for m in members)}"
        winner = dict(max(members, key=lambda m: m["cites"]))
        cid = min(m["doc_id"] for m in members)
        winner["cluster_id"] = cid
        winner["owners"] = sorted({o for m in members for o in m["owners"]})
        if len(members) > 1:
            provenance[cid] = tuple(sorted(m["doc_id"] for m in members))
        pool.append(winner)

    for target, t_id, action, arg, _ in DECISIONS:
        if target == "cluster" and action == "set_kind":
            for doc in pool:
                if doc["cluster_id"] == t_id or doc["doc_id"] == t_id:
                    doc["kind"] = arg

    # Parent links follow their chapter's final cluster ids.
    id_to_cluster = {doc["doc_id"]: doc["cluster_id"] for doc in pool}

    book_ids = {doc["cluster_id"] for doc in pool if doc["kind"] == B}
    chapter_sums: Counter = Counter()
    orphans = []
    for doc in pool:
        if doc["kind"] == C:
            parent = id_to_cluster.get(doc["parent"], doc["parent"])
            if parent in book_ids:
                chapter_sums[parent] += doc["cites"]
            else:
                orphans.append(doc["cluster_id"])
    rolled = []
    for doc in pool:
        eff = doc["cites"] + (chapter_sums[doc["cluster_id"]] if doc["kind"] == B else 0)
        rolled.append(dict(doc, effective=eff))

    eligible = [
        doc for doc in rolled
        if not (doc["kind"] == C and id_to_cluster.get(doc["parent"], doc["parent"]) in book_ids)
    ]
    eligible.sort(key=lambda doc: (-doc["effective"], doc["year"], doc["cluster_id"]))
    hcd = eligible[:TOP_N]
    duplicates_removed = len(docs) - len(pool)
    return rolled, hcd, provenance, orphans, duplicates_removed, eligible


def csv_text(header, rows) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return out.getvalue()


def expected_tables(ft, fk, labels, rolled, hcd):
    files = {}

    vocab_rows = simulate_vocab(ft, fk)
    master_rows = list(vocab_rows)
    for term in HARVESTED:
        fpi = sum(1 for p in PROFILES if term in {norm(i) for i in p["interests"]})
        master_rows.append((term, 0, 0, fpi))
    files["table1_keywords.csv"] = csv_text(
        ["term", "freq_title", "freq_article_keyword", "freq_profile_interest"],
        master_rows,
    )

    def author_rows(label):
        rows = []
        for p in PROFILES:
            if labels.get(p["pid"]) != label:
                continue
            total = sum(doc["cites"] for doc in p["docs"])
            rows.append((p["name"], total, h_index([doc["cites"] for doc in p["docs"]])))
        rows.sort(key=lambda r: (-r[1], -r[2], r[0]))
        return rows

    spec_rows = author_rows("specialist")
    occ_rows = author_rows("occasional")
    t2 = []
    for i in range(min(25, max(len(spec_rows), len(occ_rows)))):
        left = list(spec_rows[i]) if i < len(spec_rows) else ["", "", ""]
        right = list(occ_rows[i]) if i < len(occ_rows) else ["", "", ""]
        t2.append(left + right)
    files["table2_authors.csv"] = csv_text(
        ["specialist_author", "specialist_citations", "specialist_h_index",
         "occasional_author", "occasional_citations", "occasional_h_index"],
        t2,
    )

    files["table3_documents.csv"] = csv_text(
        ["title", "authors", "source", "year", "citations"],
        [
            (doc["title"], "; ".join(doc["authors"]), doc["venue"] or "", doc["year"], doc["effective"])
            for doc in hcd[:25]
        ],
    )

    total_cites = sum(doc["effective"] for doc in hcd)
    journal_class = [doc for doc in hcd if doc["kind"] == A]
    book_class = [doc for doc in hcd if doc["kind"] in (B, C)]

    def group(members, class_size, floor):
        by_venue = defaultdict(list)
        for doc in members:
            if doc["venue"]:
                by_venue[venue_norm(doc["venue"])].append(doc)
        rows = []
        for docs in by_venue.values():
            display = min(doc["venue"] for doc in docs)
            count = len(docs)
            cites = sum(doc["effective"] for doc in docs)
            per = str(Decimal(cites // count)) if floor else per_doc_2dp(cites, count)
            rows.append((display, count, cites, per, pct1(count, class_size), pct1(cites, total_cites)))
        rows.sort(key=lambda r: (-r[1], -r[2], r[0]))
        return rows

    t4 = group(journal_class, len(journal_class), floor=True)
    files["table4_journals.csv"] = csv_text(
        ["journal", "documents", "citations", "c_per_article", "hcd_pct", "citations_pct"],
        [(r[0], r[1], r[2], r[3], r[4], r[5]) for r in t4],
    )
    t5 = group(book_class, len(book_class), floor=False)
    files["table5_publishers.csv"] = csv_text(
        ["publisher", "hcd", "hcd_pct", "citations", "citations_pct", "c_per_document"],
        [(r[0], r[1], r[4], r[2], r[5], r[3]) for r in t5],
    )

    label_counts = Counter(labels.values())
    total = sum(label_counts.values())
    files["community_summary.csv"] = csv_text(
        ["label", "count", "pct"],
        [
            (label, label_counts[label], pct2(label_counts[label], total))
            for label in ("specialist", "occasional", "false_positive")
            if label_counts[label]
        ],
    )

    series = {t: Counter() for t in SEEDS}
    for doc in rolled:
        t = norm(doc["title"])
        for term in SEEDS:
            if contains(t, term):
                series[term][doc["year"]] += 1
    years = sorted({y for c in series.values() for y in c})
    terms = sorted(SEEDS)
    files["fig1_series.csv"] = csv_text(
        ["year"] + terms,
        [[y] + [series[t].get(y, 0) for t in terms] for y in years],
    )

    return files, dict(
        journal_class=len(journal_class), book_class=len(book_class),
        hcd_total_citations=total_cites,
    )


# ---------------------------------------------------------------------------
# Audits.


def audit(ft, fk, labels, found, rolled, hcd, provenance, orphans, dup_removed, eligible):
    errors = []

    def check(cond, msg):
        if not cond:
            errors.append(msg)

    # The dropped-term stories.
    check(ft["citation index"] == 89, f"citation index title freq {ft['citation index']} != 89")
    check(fk["citation index"] == 0, "citation index must not appear as an article keyword")
    check(
        all("citation index" not in {norm(i) for i in p["interests"]} for p in PROFILES),
        "no profile may list citation index",
    )
    for term in ("webometrics", "altmetrics"):
        check(ft[term] + fk[term] < THRESHOLD, f"{term} doc freq must stay below {THRESHOLD}")
    for term in ("bibliometric", "scientometric", "informetric", "altmetric"):
        check(ft[term] + fk[term] < THRESHOLD, f"singular {term} must stay below {THRESHOLD}")

    # Master list has exactly the planned organic terms.
    vocab_terms = [r[0] for r in simulate_vocab(ft, fk)]
    check(
        sorted(vocab_terms) == sorted(EXPECTED_MASTER),
        f"organic master mismatch: {vocab_terms}",
    )
    interest_norms = {norm(i) for p in PROFILES for i in p["interests"]}
    for term in interest_norms - set(EXPECTED_MASTER) - set(HARVESTED) - {"informetria"}:
        check(ft[term] + fk[term] < THRESHOLD, f"interest {term!r} must stay below threshold")

    # Discovery and labels match the plan.
    for p in PROFILES:
        got = found.get(p["pid"])
        if p["route"] is None:
            check(got is None, f"{p['pid']} must stay unfound, got {got}")
        else:
            check(got == (p["route"], p["rnd"]), f"{p['pid']}: {got} != {(p['route'], p['rnd'])}")
        want = p["label"]
        check(labels.get(p["pid"]) == want, f"{p['pid']} label {labels.get(p['pid'])} != {want}")

    label_counts = Counter(labels.values())
    check(len(found) == 46, f"found {len(found)} profiles, expected 46")
    check(label_counts["specialist"] == 24, f"{label_counts['specialist']} specialists != 24")
    check(label_counts["occasional"] == 20, f"{label_counts['occasional']} occasionals != 20")
    check(label_counts["false_positive"] == 2, f"{label_counts['false_positive']} fps != 2")

    # Pool and highly cited set.
    check(dup_removed == 4, f"duplicates removed {dup_removed} != 4")
    check(
        provenance == {
            "p01d1": ("p01d1", "r201"),
            "p02d1": ("p02d1", "r202"),
            "p03d1": ("p03d1", "p11d2"),
            "r203": ("r203", "r204"),
        },
        f"provenance mismatch: {provenance}",
    )
    check(orphans == ["p08d2"], f"orphans {orphans} != ['p08d2']")
    check(len(hcd) == TOP_N, f"hcd size {len(hcd)} != {TOP_N}")
    effs = [doc["effective"] for doc in hcd]
    check(len(set(effs)) == len(effs), "hcd effective citations must be distinct")
    check(min(effs) >= 100, f"hcd floor {min(effs)} < 100")
    check(
        all(doc["effective"] < 100 for doc in eligible[TOP_N:]),
        "documents outside the top set must stay under 100 citations",
    )
    check(hcd[0]["cluster_id"] == "p01d1" and hcd[0]["effective"] == 980, "top document wrong")
    rolled_by_id = {doc["cluster_id"]: doc for doc in rolled}
    check(rolled_by_id["p04d1"]["effective"] == 870, "chapter rollup must yield 870")
    check(rolled_by_id["r230"]["kind"] == B, "set_kind decision must reclass r230")

    # Profile totals distinct per label column (stable table 2 order).
    for label in ("specialist", "occasional"):
        totals = [
            sum(doc["cites"] for doc in p["docs"])
            for p in PROFILES
            if labels.get(p["pid"]) == label
        ]
        check(len(set(totals)) == len(totals), f"{label} citation totals must be distinct")

    # Fixture hygiene.
    ids = [p["pid"] for p in PROFILES]
    check(len(set(ids)) == len(ids), "duplicate profile ids")
    check(len(ids) == 50, f"{len(ids)} profiles != 50")
    for p in PROFILES:
        check(len(p["interests"]) <= 5, f"{p['pid']}: too many interests")
        cites = [doc["cites"] for doc in p["docs"]]
        check(len(set(cites)) == len(cites), f"{p['pid']}: tied citation counts")
    rids = [r["rid"] for r in TAGGED]
    check(len(set(rids)) == len(rids), "duplicate tagged record ids")

    if errors:
        for e in errors:
            print(f"AUDIT FAIL: {e}", file=sys.stderr)
        raise SystemExit(1)


def main():
    DEMO.mkdir(exist_ok=True)
    write_fixtures()
    write_records()
    write_extras()
    write_decisions()
    write_config()

    ft, fk = term_doc_freqs()
    master_terms = [r[0] for r in simulate_vocab(ft, fk)]
    found, variants = simulate_discovery(master_terms)
    labels = simulate_labels(found, variants)
    rolled, hcd, provenance, orphans, dup_removed, eligible = simulate_pool(labels)
    audit(ft, fk, labels, found, rolled, hcd, provenance, orphans, dup_removed, eligible)

    files, stats = expected_tables(ft, fk, labels, rolled, hcd)
    expected = DEMO / "expected"
    expected.mkdir(exist_ok=True)
    for name, text in files.items():
        (expected / name).write_text(text, encoding="utf-8")

    meta = dict(
        profiles_total=len(PROFILES),
        profiles_found=len(found),
        specialists=sum(1 for v in labels.values() if v == "specialist"),
        occasionals=sum(1 for v in labels.values() if v == "occasional"),
        false_positives=sum(1 for v in labels.values() if v == "false_positive"),
        tagged_records=len(TAGGED),
        master_terms=len(master_terms) + len(HARVESTED),
        hcd_size=len(hcd),
        duplicates_removed=dup_removed,
        orphan_chapters=len(orphans),
        provenance_clusters=len(provenance),
        **stats,
    )
    (expected / "meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8")

    print(f"demo written to {DEMO}")
    for k, v in sorted(meta.items()):
        print(f"  {k}: {v}")


if __name__ == "__main__":
    main()
