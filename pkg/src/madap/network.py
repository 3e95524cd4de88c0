"""Bipartite author-source and author-keyword graphs with centrality.

Graphs are undirected and weighted. Node ids are namespaced by class
("author:", "source:", "term:") so authors can never collide with the
entities they link to. Exports are byte-deterministic: nodes and edges
are always emitted in sorted order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Optional, Sequence
from xml.sax.saxutils import escape, quoteattr

from .errors import EmptyGraph, UnknownFormat
from .model import (
    AuthorProfile,
    DecisionAction,
    DecisionTarget,
    DocumentRecord,
    KeywordTerm,
    ProfileLabel,
    ReviewDecision,
    latest_decisions,
    normalize_title,
)


class NodeClass(str, Enum):
    CORE_AUTHOR = "core_author"
    RELATED_AUTHOR = "related_author"
    SOURCE = "source"
    KEYWORD = "keyword"


_AUTHOR_CLASSES = frozenset({NodeClass.CORE_AUTHOR, NodeClass.RELATED_AUTHOR})


@dataclass(frozen=True)
class GraphNode:
    node_id: str
    node_class: NodeClass
    display_name: str


@dataclass(frozen=True)
class GraphEdge:
    """Undirected edge; endpoints kept in sorted order."""

    node_a: str
    node_b: str
    weight: int

    def __post_init__(self) -> None:
        if self.node_a == self.node_b:
            raise ValueError(f"self-loop on {self.node_a}")
        if self.weight < 1:
            raise ValueError(f"edge {self.node_a}--{self.node_b}: weight {self.weight} < 1")
        if self.node_a > self.node_b:
            a, b = self.node_a, self.node_b
            object.__setattr__(self, "node_a", b)
            object.__setattr__(self, "node_b", a)

    def key(self) -> tuple[str, str]:
        return (self.node_a, self.node_b)


@dataclass(frozen=True)
class DisciplineGraph:
    """A validated bipartite graph of authors against sources or keywords."""

    nodes: tuple[GraphNode, ...]
    edges: tuple[GraphEdge, ...]

    def __post_init__(self) -> None:
        classes = {n.node_id: n.node_class for n in self.nodes}
        if len(classes) != len(self.nodes):
            raise ValueError("duplicate node ids")
        seen = set()
        for e in self.edges:
            if e.key() in seen:
                raise ValueError(f"duplicate edge {e.node_a}--{e.node_b}")
            seen.add(e.key())
            for end in e.key():
                if end not in classes:
                    raise ValueError(f"edge endpoint {end} has no node")
            a_is_author = classes[e.node_a] in _AUTHOR_CLASSES
            b_is_author = classes[e.node_b] in _AUTHOR_CLASSES
            if a_is_author == b_is_author:
                raise ValueError(
                    f"edge {e.node_a}--{e.node_b} violates the author/entity bipartition"
                )

    def node_ids(self) -> list[str]:
        return sorted(n.node_id for n in self.nodes)

    def class_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for n in self.nodes:
            counts[n.node_class.value] = counts.get(n.node_class.value, 0) + 1
        return counts


@dataclass(frozen=True)
class CentralityScores:
    """Eigenvector centrality per node, with iteration metadata.

    ``residual`` is the successive-iterate L2 distance at the last
    step. ``warnings`` names connected components whose entire score
    mass fell below 1e-6 (centrality on a disconnected graph
    concentrates on the dominant component).
    """

    scores: Mapping[str, float]
    iterations: int
    residual: float
    converged: bool
    warnings: tuple[str, ...] = ()


def author_node_id(key: str) -> str:
    return f"author:{key}"


def source_node_id(name_norm: str) -> str:
    return f"source:{name_norm}"


def term_node_id(term_norm: str) -> str:
    return f"term:{term_norm}"


def _discarded_ids(decisions: Iterable[ReviewDecision]) -> frozenset[str]:
    resolved = latest_decisions(decisions, DecisionTarget.PROFILE)
    return frozenset(
        pid
        for pid, d in resolved.items()
        if d.action is DecisionAction.MARK_FALSE_POSITIVE
    )


def build_author_source_graph(
    hcd_top: Sequence[DocumentRecord],
    profiles: Sequence[AuthorProfile],
    decisions: Iterable[ReviewDecision] = (),
    binary: bool = False,
) -> DisciplineGraph:
    """Link every author of the top documents to each document's source.

    Authors are matched to profiles by exact normalized display name.
    A matched specialist becomes a core_author node; occasional
    profiles and unmatched co-authors become related_author nodes;
    false positives (labeled or decided, by profile id or by
    normalized name) are dropped. Edge weight counts linking documents
    unless ``binary`` flattens weights to 1.
    """
    discarded = _discarded_ids(decisions)
    by_name: dict[str, AuthorProfile] = {}
    for p in sorted(profiles, key=lambda p: p.profile_id):
        by_name.setdefault(normalize_title(p.display_name), p)

    nodes: dict[str, GraphNode] = {}
    weights: dict[tuple[str, str], int] = {}
    source_display: dict[str, str] = {}

    for doc in sorted(hcd_top, key=lambda d: d.cluster_id):
        if doc.venue is None:
            continue
        src_id = source_node_id(doc.venue.name_norm)
        display = source_display.get(src_id)
        if display is None or doc.venue.name_raw < display:
            source_display[src_id] = doc.venue.name_raw
        author_ids = set()
        for author in doc.authors:
            key = normalize_title(author)
            if not key:
                continue
            profile = by_name.get(key)
            if profile is not None:
                if profile.profile_id in discarded or profile.label is ProfileLabel.FALSE_POSITIVE:
                    continue
                node_class = (
                    NodeClass.CORE_AUTHOR
                    if profile.label is ProfileLabel.SPECIALIST
                    else NodeClass.RELATED_AUTHOR
                )
                node_id = author_node_id(profile.profile_id)
                nodes.setdefault(node_id, GraphNode(node_id, node_class, profile.display_name))
            else:
                if key in discarded:
                    continue
                node_id = author_node_id(key)
                nodes.setdefault(node_id, GraphNode(node_id, NodeClass.RELATED_AUTHOR, author))
            author_ids.add(node_id)
        for node_id in author_ids:
            weights[(node_id, src_id)] = weights.get((node_id, src_id), 0) + 1

    for src_id, display in source_display.items():
        if any(b == src_id for _, b in weights):
            nodes[src_id] = GraphNode(src_id, NodeClass.SOURCE, display)

    edges = tuple(
        GraphEdge(a, b, 1 if binary else w)
        for (a, b), w in sorted(weights.items())
    )
    ordered_nodes = tuple(nodes[i] for i in sorted(nodes))
    return DisciplineGraph(ordered_nodes, edges)


def build_author_keyword_graph(
    profiles: Sequence[AuthorProfile],
    master_terms: Sequence[KeywordTerm],
    top_specialists: int = 100,
) -> DisciplineGraph:
    """Link the most-cited specialists to their recognized interests.

    Takes the ``top_specialists`` specialist profiles by total
    citations (ties by profile id; fewer kept when fewer exist). Each
    listed interest that matches a master-list variant adds weight 1 to
    the author-term edge; authors with no recognized interest stay in
    the graph as isolated nodes.
    """
    specialists = sorted(
        (p for p in profiles if p.label is ProfileLabel.SPECIALIST),
        key=lambda p: (-p.total_citations, p.profile_id),
    )[:top_specialists]

    variant_to_term: dict[str, str] = {}
    for term in sorted(master_terms, key=lambda t: t.term_norm):
        for v in term.variant_norms():
            variant_to_term.setdefault(v, term.term_norm)

    nodes: dict[str, GraphNode] = {}
    weights: dict[tuple[str, str], int] = {}
    for p in specialists:
        a_id = author_node_id(p.profile_id)
        nodes[a_id] = GraphNode(a_id, NodeClass.CORE_AUTHOR, p.display_name)
        for interest in p.interests:
            term_norm = variant_to_term.get(normalize_title(interest))
            if term_norm is None:
                continue
            t_id = term_node_id(term_norm)
            nodes.setdefault(t_id, GraphNode(t_id, NodeClass.KEYWORD, term_norm))
            weights[(a_id, t_id)] = weights.get((a_id, t_id), 0) + 1

    edges = tuple(GraphEdge(a, b, w) for (a, b), w in sorted(weights.items()))
    ordered_nodes = tuple(nodes[i] for i in sorted(nodes))
    return DisciplineGraph(ordered_nodes, edges)


def _components(order: Sequence[str], adjacency: Mapping[str, list[tuple[int, int]]]) -> list[list[int]]:
    seen = [False] * len(order)
    components = []
    for start in range(len(order)):
        if seen[start]:
            continue
        queue = [start]
        seen[start] = True
        members = []
        while queue:
            i = queue.pop()
            members.append(i)
            for j, _ in adjacency[order[i]]:
                if not seen[j]:
                    seen[j] = True
                    queue.append(j)
        components.append(sorted(members))
    return components


def eigenvector_centrality(
    graph: DisciplineGraph, tol: float = 1e-10, max_iter: int = 1000
) -> CentralityScores:
    """Power iteration for the dominant eigenvector of the adjacency.

    Starts from a uniform positive vector and renormalizes to unit L2
    each step; converged when the successive-iterate distance drops
    below ``tol``. Hitting ``max_iter`` returns the last iterate
    flagged as non-converged rather than raising.

    Raises:
        EmptyGraph: the graph has no nodes.
    """
    if not graph.nodes:
        raise EmptyGraph("cannot compute centrality of an empty graph")

    order = graph.node_ids()
    index = {nid: i for i, nid in enumerate(order)}
    adjacency: dict[str, list[tuple[int, int]]] = {nid: [] for nid in order}
    for e in graph.edges:
        adjacency[e.node_a].append((index[e.node_b], e.weight))
        adjacency[e.node_b].append((index[e.node_a], e.weight))
    rows = [sorted(adjacency[nid]) for nid in order]

    n = len(order)
    v = [1.0 / math.sqrt(n)] * n
    iterations = 0
    residual = math.inf
    converged = False
    # The bipartite adjacency has a symmetric spectrum (+/- the same
    # magnitudes), so plain iteration can oscillate between two
    # half-vectors forever. Iterating on A+I shifts every eigenvalue
    # up by one without changing eigenvectors, making the dominant
    # eigenvalue strictly largest in magnitude.
    for iterations in range(1, max_iter + 1):
        nxt = [v[i] + sum(w * v[j] for j, w in rows[i]) for i in range(n)]
        norm = math.sqrt(sum(x * x for x in nxt))
        nxt = [x / norm for x in nxt]
        residual = math.sqrt(sum((nxt[i] - v[i]) ** 2 for i in range(n)))
        v = nxt
        if residual < tol:
            converged = True
            break

    warnings = []
    for comp in _components(order, adjacency):
        if max(v[i] for i in comp) < 1e-6:
            warnings.append(
                f"component of {len(comp)} node(s) starting at {order[comp[0]]}: "
                "centrality mass below 1e-6"
            )

    scores = {order[i]: v[i] for i in range(n)}
    return CentralityScores(
        scores=scores,
        iterations=iterations,
        residual=residual,
        converged=converged,
        warnings=tuple(warnings),
    )


_DOT_STYLE = {
    NodeClass.CORE_AUTHOR: 'color="blue", shape="ellipse"',
    NodeClass.RELATED_AUTHOR: 'color="red", shape="ellipse"',
    NodeClass.SOURCE: 'color="green", shape="box"',
    NodeClass.KEYWORD: 'color="red", shape="box"',
}


def _gexf(graph: DisciplineGraph, scores: Optional[CentralityScores]) -> str:
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<gexf xmlns="http://www.gexf.net/1.2draft" version="1.2">',
        '  <graph defaultedgetype="undirected">',
        '    <attributes class="node">',
        '      <attribute id="0" title="node_class" type="string"/>',
        '      <attribute id="1" title="centrality" type="double"/>',
        "    </attributes>",
        "    <nodes>",
    ]
    by_id = {n.node_id: n for n in graph.nodes}
    for nid in graph.node_ids():
        node = by_id[nid]
        lines.append(f"      <node id={quoteattr(nid)} label={quoteattr(node.display_name)}>")
        lines.append("        <attvalues>")
        lines.append(f'          <attvalue for="0" value={quoteattr(node.node_class.value)}/>')
        if scores is not None:
            lines.append(
                f'          <attvalue for="1" value="{scores.scores[nid]:.10f}"/>'
            )
        lines.append("        </attvalues>")
        lines.append("      </node>")
    lines.append("    </nodes>")
    lines.append("    <edges>")
    for i, e in enumerate(sorted(graph.edges, key=GraphEdge.key)):
        lines.append(
            f'      <edge id="{i}" source={quoteattr(e.node_a)} '
            f'target={quoteattr(e.node_b)} weight="{e.weight}"/>'
        )
    lines.append("    </edges>")
    lines.append("  </graph>")
    lines.append("</gexf>")
    return "\n".join(lines) + "\n"


def _dot(graph: DisciplineGraph, scores: Optional[CentralityScores]) -> str:
    def quote(s: str) -> str:
        return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'

    lines = ["graph discipline {"]
    by_id = {n.node_id: n for n in graph.nodes}
    for nid in graph.node_ids():
        node = by_id[nid]
        attrs = [f"label={quote(node.display_name)}", _DOT_STYLE[node.node_class]]
        if scores is not None:
            attrs.append(f'tooltip="{scores.scores[nid]:.10f}"')
        lines.append(f"  {quote(nid)} [{', '.join(attrs)}];")
    for e in sorted(graph.edges, key=GraphEdge.key):
        lines.append(f"  {quote(e.node_a)} -- {quote(e.node_b)} [weight={e.weight}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _edge_csv(graph: DisciplineGraph) -> str:
    lines = ["node_a,node_b,weight"]
    for e in sorted(graph.edges, key=GraphEdge.key):
        lines.append(f"{e.node_a},{e.node_b},{e.weight}")
    return "\n".join(lines) + "\n"


def export_graph(
    graph: DisciplineGraph,
    scores: Optional[CentralityScores] = None,
    fmt: str = "gexf",
) -> bytes:
    """Serialize a graph for external layout tools.

    Formats: gexf (1.2-draft with node_class and centrality
    attributes), dot (class-based styling), edge_csv. Output is
    byte-identical across runs for identical inputs.

    Raises:
        UnknownFormat: fmt is not one of the three formats.
    """
    if fmt == "gexf":
        text = _gexf(graph, scores)
    elif fmt == "dot":
        text = _dot(graph, scores)
    elif fmt == "edge_csv":
        text = _edge_csv(graph)
    else:
        raise UnknownFormat(f"unknown graph format {fmt!r}")
    return text.encode("utf-8")
