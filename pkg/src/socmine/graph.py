"""Thresholded weighted tag co-occurrence network: build, cluster, export.

Exports are byte-deterministic (nodes and edges emitted in sorted order)
and round-trip through parse_graph.
"""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple
from xml.sax.saxutils import escape, quoteattr

from .errors import DataError
from .ngrams import CountTable, TagPair

FORMATS = ("dot", "graphml")


@dataclass(frozen=True)
class CooccurrenceGraph:
    """Weighted undirected graph of tags; edge weight = co-occurrence count."""

    nodes: frozenset[str]
    edges: Mapping[TagPair, int]
    threshold: int

    def __post_init__(self) -> None:
        for pair, weight in self.edges.items():
            if weight < self.threshold:
                raise ValueError(f"edge {pair} weight {weight} below threshold")
            if pair.a not in self.nodes or pair.b not in self.nodes:
                raise ValueError(f"edge {pair} has an endpoint outside the node set")

    def __len__(self) -> int:
        return len(self.nodes)


class DyadRow(NamedTuple):
    pair: TagPair
    weight: int
    ratio: float


def build_graph(
    pairs: CountTable,
    threshold: int,
    node_whitelist: Iterable[str] | None = None,
    retain_isolates: bool = False,
) -> CooccurrenceGraph:
    """Keep pairs with count >= threshold as edges.

    With a whitelist, both endpoints must be whitelisted. Nodes are the
    endpoints of surviving edges; whitelisted nodes without edges are
    retained only when retain_isolates is set.
    """
    if threshold < 1:
        raise ValueError(f"threshold must be >= 1, got {threshold}")
    whitelist = set(node_whitelist) if node_whitelist is not None else None

    edges: dict[TagPair, int] = {}
    for key, count in pairs.entries.items():
        pair = key if isinstance(key, TagPair) else TagPair.of(*key)
        if count < threshold:
            continue
        if whitelist is not None and (pair.a not in whitelist or pair.b not in whitelist):
            continue
        edges[pair] = count

    nodes: set[str] = set()
    for pair in edges:
        nodes.add(pair.a)
        nodes.add(pair.b)
    if retain_isolates and whitelist is not None:
        nodes |= whitelist
    return CooccurrenceGraph(nodes=frozenset(nodes), edges=edges, threshold=threshold)


def components(graph: CooccurrenceGraph) -> list[set[str]]:
    """Connected components, ordered by their lexicographically smallest member."""
    adjacency: dict[str, set[str]] = {node: set() for node in graph.nodes}
    for pair in graph.edges:
        adjacency[pair.a].add(pair.b)
        adjacency[pair.b].add(pair.a)

    seen: set[str] = set()
    result: list[set[str]] = []
    for start in sorted(graph.nodes):
        if start in seen:
            continue
        component = {start}
        frontier = [start]
        while frontier:
            node = frontier.pop()
            for neighbor in adjacency[node]:
                if neighbor not in component:
                    component.add(neighbor)
                    frontier.append(neighbor)
        seen |= component
        result.append(component)
    return result


def dyad_report(graph: CooccurrenceGraph, k: int) -> list[DyadRow]:
    """Top-k edges by weight with each edge's weight ratio to the maximum edge."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if not graph.edges:
        return []
    ordered = sorted(graph.edges.items(), key=lambda kv: (-kv[1], kv[0]))
    max_weight = ordered[0][1]
    return [DyadRow(pair, weight, weight / max_weight) for pair, weight in ordered[:k]]


def _render_width(weight: int, cap: int | None) -> int:
    return min(weight, cap) if cap is not None else weight


def _dot_quote(name: str) -> str:
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_graph(
    graph: CooccurrenceGraph,
    fmt: str = "dot",
    cap: int | None = None,
) -> str:
    """Emit the graph as DOT or GraphML text.

    The drawn edge width is capped at `cap` (the true weight is always
    carried as a data attribute), mirroring plots that thin their dominant
    edges so the rest of the network stays visible.
    """
    if fmt == "dot":
        return _export_dot(graph, cap)
    if fmt == "graphml":
        return _export_graphml(graph, cap)
    raise ValueError(f"unsupported graph format: {fmt!r}")


def _export_dot(graph: CooccurrenceGraph, cap: int | None) -> str:
    lines = ["graph cooccurrence {", f"  graph [threshold={graph.threshold}];"]
    for node in sorted(graph.nodes):
        lines.append(f"  {_dot_quote(node)};")
    for pair in sorted(graph.edges):
        weight = graph.edges[pair]
        width = _render_width(weight, cap)
        lines.append(
            f"  {_dot_quote(pair.a)} -- {_dot_quote(pair.b)} "
            f"[weight={weight}, penwidth={width}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def _export_graphml(graph: CooccurrenceGraph, cap: int | None) -> str:
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<graphml xmlns="http://graphml.graphdrawing.org/xmlns">',
        '  <key id="weight" for="edge" attr.name="weight" attr.type="int"/>',
        '  <key id="render_width" for="edge" attr.name="render_width" attr.type="double"/>',
        '  <key id="threshold" for="graph" attr.name="threshold" attr.type="int"/>',
        '  <graph id="cooccurrence" edgedefault="undirected">',
        f'    <data key="threshold">{graph.threshold}</data>',
    ]
    for node in sorted(graph.nodes):
        lines.append(f"    <node id={quoteattr(node)}/>")
    for pair in sorted(graph.edges):
        weight = graph.edges[pair]
        width = _render_width(weight, cap)
        lines.append(f"    <edge source={quoteattr(pair.a)} target={quoteattr(pair.b)}>")
        lines.append(f'      <data key="weight">{weight}</data>')
        lines.append(f'      <data key="render_width">{width}</data>')
        lines.append("    </edge>")
    lines.append("  </graph>")
    lines.append("</graphml>")
    return "\n".join(lines) + "\n"


_DOT_GRAPH_RE = re.compile(r"graph \[threshold=(\d+)\];")
_DOT_NODE_RE = re.compile(r'^"((?:[^"\\]|\\.)*)";$')
_DOT_EDGE_RE = re.compile(
    r'^"((?:[^"\\]|\\.)*)" -- "((?:[^"\\]|\\.)*)" \[weight=(\d+), penwidth=(\d+)\];$'
)


def _dot_unquote(inner: str) -> str:
    return inner.replace('\\"', '"').replace("\\\\", "\\")


def parse_graph(text: str, fmt: str = "dot") -> CooccurrenceGraph:
    """Parse a graph previously produced by export_graph."""
    if fmt == "dot":
        return _parse_dot(text)
    if fmt == "graphml":
        return _parse_graphml(text)
    raise ValueError(f"unsupported graph format: {fmt!r}")


def _parse_dot(text: str) -> CooccurrenceGraph:
    threshold = 1
    nodes: set[str] = set()
    edges: dict[TagPair, int] = {}
    for raw in text.splitlines():
        line = raw.strip()
        match = _DOT_GRAPH_RE.fullmatch(line)
        if match:
            threshold = int(match.group(1))
            continue
        match = _DOT_NODE_RE.fullmatch(line)
        if match:
            nodes.add(_dot_unquote(match.group(1)))
            continue
        match = _DOT_EDGE_RE.fullmatch(line)
        if match:
            pair = TagPair.of(_dot_unquote(match.group(1)), _dot_unquote(match.group(2)))
            edges[pair] = int(match.group(3))
    if not nodes and not edges and "graph cooccurrence {" not in text:
        raise DataError("not a recognized DOT co-occurrence graph")
    return CooccurrenceGraph(nodes=frozenset(nodes), edges=edges, threshold=threshold)


def _parse_graphml(text: str) -> CooccurrenceGraph:
    ns = {"g": "http://graphml.graphdrawing.org/xmlns"}
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise DataError(f"invalid GraphML: {exc}") from exc
    graph_el = root.find("g:graph", ns)
    if graph_el is None:
        raise DataError("GraphML file has no <graph> element")
    threshold = 1
    threshold_el = graph_el.find("g:data[@key='threshold']", ns)
    if threshold_el is not None and threshold_el.text:
        threshold = int(threshold_el.text)
    nodes = {el.attrib["id"] for el in graph_el.findall("g:node", ns)}
    edges: dict[TagPair, int] = {}
    for el in graph_el.findall("g:edge", ns):
        pair = TagPair.of(el.attrib["source"], el.attrib["target"])
        weight_el = el.find("g:data[@key='weight']", ns)
        if weight_el is None or weight_el.text is None:
            raise DataError(f"edge {pair} is missing its weight attribute")
        edges[pair] = int(weight_el.text)
    return CooccurrenceGraph(nodes=frozenset(nodes), edges=edges, threshold=threshold)
