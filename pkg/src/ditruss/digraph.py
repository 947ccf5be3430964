"""Simple directed graph core: immutable graph type, edge-list I/O, connectivity.

Nodes are dense integer indices ``0..n-1``; every node carries a string label
(by default the token it had in the input edge list).  Edges are stored in a
fixed order and the position of an edge in ``DirectedGraph.edges`` is its edge
id, which all per-edge arrays in the other modules are indexed by.
"""
from __future__ import annotations

import io
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Sequence, Union

TextSource = Union[str, Path, IO[str]]

COMMENT_CHARS = ("#", "%")


class ParseError(Exception):
    """Malformed edge-list input.  Carries the offending 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass(frozen=True)
class IngestReport:
    """Accounting of one edge-list ingestion.

    ``nodes_read`` is the number of distinct nodes in the resulting graph
    (tokens appearing only on dropped lines are not materialized as nodes).
    ``edges_kept + self_loops_dropped + duplicates_dropped`` equals the number
    of non-comment, non-blank lines parsed.
    """

    nodes_read: int
    edges_kept: int
    self_loops_dropped: int
    duplicates_dropped: int


class DirectedGraph:
    """Immutable simple directed graph.

    Invariants enforced at construction: no self-loops, at most one edge per
    ordered pair (the reverse edge may coexist), all endpoints in range.
    ``out_neighbors`` / ``in_neighbors`` are sorted tuples per node, kept
    exactly consistent with ``edges``.

    Instances are safe to share across threads and processes; all algorithmic
    modules treat the graph as read-only.
    """

    __slots__ = (
        "node_count",
        "edges",
        "labels",
        "out_neighbors",
        "in_neighbors",
        "_edge_ids",
        "source_edge_ids",
        "source_node_ids",
    )

    def __init__(
        self,
        node_count: int,
        edges: Iterable[tuple[int, int]],
        labels: Sequence[str] | None = None,
        source_edge_ids: Sequence[int] | None = None,
        source_node_ids: Sequence[int] | None = None,
    ):
        node_count = int(node_count)
        if node_count < 0:
            raise ValueError("node_count must be nonnegative")
        edge_tuple = tuple((int(s), int(t)) for s, t in edges)
        edge_ids: dict[tuple[int, int], int] = {}
        outs: list[list[int]] = [[] for _ in range(node_count)]
        ins: list[list[int]] = [[] for _ in range(node_count)]
        for eid, (s, t) in enumerate(edge_tuple):
            if not (0 <= s < node_count and 0 <= t < node_count):
                raise ValueError(f"edge ({s}, {t}) out of range for {node_count} nodes")
            if s == t:
                raise ValueError(f"self-loop ({s}, {t}) is not allowed")
            if (s, t) in edge_ids:
                raise ValueError(f"duplicate edge ({s}, {t})")
            edge_ids[(s, t)] = eid
            outs[s].append(t)
            ins[t].append(s)
        if labels is None:
            label_tuple = tuple(str(v) for v in range(node_count))
        else:
            label_tuple = tuple(str(x) for x in labels)
            if len(label_tuple) != node_count:
                raise ValueError("labels must have one entry per node")
        object.__setattr__  # noqa: B018  (plain class; __slots__ assignment below)
        self.node_count = node_count
        self.edges = edge_tuple
        self.labels = label_tuple
        self.out_neighbors = tuple(tuple(sorted(a)) for a in outs)
        self.in_neighbors = tuple(tuple(sorted(a)) for a in ins)
        self._edge_ids = edge_ids
        self.source_edge_ids = (
            tuple(int(x) for x in source_edge_ids) if source_edge_ids is not None else None
        )
        self.source_node_ids = (
            tuple(int(x) for x in source_node_ids) if source_node_ids is not None else None
        )

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def has_edge(self, source: int, target: int) -> bool:
        return (source, target) in self._edge_ids

    def edge_id(self, source: int, target: int) -> int:
        return self._edge_ids[(source, target)]

    def edge_id_map(self) -> dict[tuple[int, int], int]:
        """Mapping (source, target) -> edge id.  Treat as read-only."""
        return self._edge_ids

    def out_degree(self, v: int) -> int:
        return len(self.out_neighbors[v])

    def in_degree(self, v: int) -> int:
        return len(self.in_neighbors[v])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DirectedGraph):
            return NotImplemented
        return (
            self.node_count == other.node_count
            and self.edges == other.edges
            and self.labels == other.labels
        )

    def __hash__(self) -> int:
        return hash((self.node_count, self.edges))

    def __repr__(self) -> str:
        return f"DirectedGraph(nodes={self.node_count}, edges={self.edge_count})"

    def __reduce__(self):
        return (
            DirectedGraph,
            (self.node_count, self.edges, self.labels, self.source_edge_ids, self.source_node_ids),
        )


def _open_source(source: TextSource):
    """Return (stream, should_close) for a path or an already-open stream."""
    if hasattr(source, "read"):
        return source, False
    return open(source, "r", encoding="utf-8"), True


def _read_label_map(source: TextSource) -> dict[str, str]:
    """Parse a label-map file of lines ``token<TAB>label``."""
    stream, close = _open_source(source)
    try:
        mapping: dict[str, str] = {}
        for line_no, raw in enumerate(stream, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip()[0] in COMMENT_CHARS:
                continue
            if "\t" not in line:
                raise ParseError(line_no, "label map line must be 'token<TAB>label'")
            token, label = line.split("\t", 1)
            mapping[token.strip()] = label.strip()
        return mapping
    finally:
        if close:
            stream.close()


def load_edge_list(
    source: TextSource, label_map: TextSource | None = None
) -> tuple[DirectedGraph, IngestReport]:
    """Read a whitespace-separated ``source target`` edge list.

    Tokens may be arbitrary strings; they are mapped to dense indices in
    first-seen order over the kept lines.  Lines starting with ``#`` or ``%``
    and blank lines are skipped.  Self-loops and duplicate ordered pairs are
    dropped and counted in the report; dropped lines never create nodes.
    A third token (e.g. a weight) is ignored, with one warning per load.

    When ``label_map`` is given, node labels are looked up by input token;
    tokens missing from the map keep the token itself as label.
    """
    stream, close = _open_source(source)
    try:
        token_ids: dict[str, int] = {}
        edges: list[tuple[int, int]] = []
        pairs: set[tuple[int, int]] = set()
        self_loops = 0
        duplicates = 0
        warned_extra = False
        for line_no, raw in enumerate(stream, start=1):
            line = raw.strip()
            if not line or line[0] in COMMENT_CHARS:
                continue
            tokens = line.split()
            if len(tokens) < 2:
                raise ParseError(line_no, f"expected 'source target', got {line!r}")
            if len(tokens) > 2 and not warned_extra:
                warnings.warn(
                    f"line {line_no}: extra tokens on edge lines are ignored "
                    "(graphs are unweighted)",
                    stacklevel=2,
                )
                warned_extra = True
            a, b = tokens[0], tokens[1]
            if a == b:
                self_loops += 1
                continue
            ia = token_ids.setdefault(a, len(token_ids))
            ib = token_ids.setdefault(b, len(token_ids))
            if (ia, ib) in pairs:
                duplicates += 1
                continue
            pairs.add((ia, ib))
            edges.append((ia, ib))
    finally:
        if close:
            stream.close()

    labels: list[str] = list(token_ids)
    if label_map is not None:
        mapping = _read_label_map(label_map)
        labels = [mapping.get(token, token) for token in labels]
    graph = DirectedGraph(len(token_ids), edges, labels=labels)
    report = IngestReport(
        nodes_read=graph.node_count,
        edges_kept=len(edges),
        self_loops_dropped=self_loops,
        duplicates_dropped=duplicates,
    )
    return graph, report


def _safe_token(label: str) -> str:
    """Make a label usable as an edge-list token (no whitespace, not a comment)."""
    token = "_".join(label.split()) or "_"
    if token[0] in COMMENT_CHARS:
        token = "_" + token[1:]
    return token


def write_edge_list(graph: DirectedGraph, sink: TextSource) -> None:
    """Serialize back to the edge-list format, sorted by (source, target) label.

    Labels are sanitized to single tokens (whitespace collapsed to ``_``), so
    a written file always re-ingests; for graphs whose labels are already
    plain tokens the write -> load -> write round trip is byte-exact.
    """
    if hasattr(sink, "write"):
        stream, close = sink, False
    else:
        stream, close = open(sink, "w", encoding="utf-8"), True
    try:
        rows = sorted(
            (_safe_token(graph.labels[s]), _safe_token(graph.labels[t]))
            for s, t in graph.edges
        )
        for a, b in rows:
            stream.write(f"{a} {b}\n")
    finally:
        if close:
            stream.close()


def edge_list_text(graph: DirectedGraph) -> str:
    buf = io.StringIO()
    write_edge_list(graph, buf)
    return buf.getvalue()


def degree_sequences(graph: DirectedGraph) -> tuple[list[int], list[int]]:
    """Per-node (out-degree, in-degree) lists; each sums to the edge count."""
    out_degrees = [len(a) for a in graph.out_neighbors]
    in_degrees = [len(a) for a in graph.in_neighbors]
    return out_degrees, in_degrees


@dataclass(frozen=True)
class WeakComponent:
    """One weakly connected component: its nodes and the edges they induce."""

    nodes: frozenset[int]
    edges: frozenset[int]


def weakly_connected_components(graph: DirectedGraph) -> list[WeakComponent]:
    """Connected components after discarding edge direction.

    Every node lands in exactly one component (isolated nodes form singleton
    components with empty edge sets); every edge is assigned to the component
    of its endpoints.  Components are ordered by smallest contained node.
    """
    n = graph.node_count
    parent = list(range(n))

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for s, t in graph.edges:
        rs, rt = find(s), find(t)
        if rs != rt:
            parent[rt] = rs

    node_groups: dict[int, list[int]] = {}
    for v in range(n):
        node_groups.setdefault(find(v), []).append(v)
    edge_groups: dict[int, list[int]] = {root: [] for root in node_groups}
    for eid, (s, _) in enumerate(graph.edges):
        edge_groups[find(s)].append(eid)

    components = [
        WeakComponent(nodes=frozenset(nodes), edges=frozenset(edge_groups[root]))
        for root, nodes in node_groups.items()
    ]
    components.sort(key=lambda c: min(c.nodes))
    return components


def strongly_connected_components(graph: DirectedGraph) -> list[frozenset[int]]:
    """Tarjan's algorithm, iteratively (safe for deep graphs).

    Two nodes share a component iff directed paths exist both ways.
    Components are ordered by smallest contained node.
    """
    n = graph.node_count
    index = [-1] * n
    low = [0] * n
    on_stack = bytearray(n)
    stack: list[int] = []
    components: list[frozenset[int]] = []
    counter = 0

    for root in range(n):
        if index[root] != -1:
            continue
        # Each work frame is [node, next-neighbor-position].
        work: list[list[int]] = [[root, 0]]
        while work:
            frame = work[-1]
            v, pos = frame
            if pos == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = 1
            descended = False
            neighbors = graph.out_neighbors[v]
            while pos < len(neighbors):
                w = neighbors[pos]
                pos += 1
                if index[w] == -1:
                    frame[1] = pos
                    work.append([w, 0])
                    descended = True
                    break
                if on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
            if descended:
                continue
            work.pop()
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = 0
                    comp.append(w)
                    if w == v:
                        break
                components.append(frozenset(comp))
            if work:
                u = work[-1][0]
                if low[v] < low[u]:
                    low[u] = low[v]
    components.sort(key=min)
    return components


def induced_subgraph(graph: DirectedGraph, edge_subset: Iterable[int]) -> DirectedGraph:
    """Subgraph with exactly the given edges and their endpoint nodes.

    Node indices are re-densified in ascending order of the original index;
    labels are preserved.  The original edge and node indices are recorded on
    the result (``source_edge_ids`` / ``source_node_ids``).  Edges keep their
    relative order from the parent graph.
    """
    edge_ids = sorted(set(int(e) for e in edge_subset))
    m = graph.edge_count
    for e in edge_ids:
        if not (0 <= e < m):
            raise ValueError(f"edge index {e} out of range for {m} edges")
    nodes = sorted({v for e in edge_ids for v in graph.edges[e]})
    remap = {v: i for i, v in enumerate(nodes)}
    new_edges = [(remap[s], remap[t]) for s, t in (graph.edges[e] for e in edge_ids)]
    return DirectedGraph(
        len(nodes),
        new_edges,
        labels=[graph.labels[v] for v in nodes],
        source_edge_ids=edge_ids,
        source_node_ids=nodes,
    )
