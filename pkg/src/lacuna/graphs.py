"""Sinked-graph representation, constructors, validation, and basic statistics.

A graph here is always finite, undirected, loop-free, simple, and connected,
with one distinguished sink vertex.  Edges carry stable indices assigned at
construction; orientations and flow networks downstream refer to edges by
index, never by endpoint pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

Configuration = tuple[int, ...]
"""Grain counts on the non-sink vertices, in increasing vertex order."""


class GraphError(ValueError):
    """Base class for graph construction/validation failures."""


class LoopEdgeError(GraphError):
    """An edge joins a vertex to itself."""


class DuplicateEdgeError(GraphError):
    """The same unordered vertex pair appears twice."""


class DisconnectedGraphError(GraphError):
    """The edge set does not connect all vertices."""


class InvalidSinkError(GraphError):
    """The sink index is not a valid vertex."""


class InvalidVertexError(GraphError):
    """An edge endpoint or vertex argument is out of range."""


class InvalidSpecError(GraphError):
    """A bipartite spec has an empty part."""


@dataclass(frozen=True)
class BipartiteSpec:
    """Complete bipartite graph K_{m,n}.

    Vertices 0..m-1 form the first part (vertex 0 is the sink), vertices
    m..m+n-1 the second part.
    """

    m: int
    n: int

    def __post_init__(self) -> None:
        if self.m < 1 or self.n < 1:
            raise InvalidSpecError(
                f"both part sizes must be >= 1, got m={self.m}, n={self.n}"
            )

    @property
    def vertex_count(self) -> int:
        return self.m + self.n

    def label(self) -> str:
        return f"K_{{{self.m},{self.n}}}"


@dataclass(frozen=True)
class Graph:
    """Undirected, loop-free, simple, connected graph with a sink vertex.

    ``edges`` is an ordered tuple of normalized (low, high) vertex pairs; the
    position of a pair in the tuple is its edge index.
    """

    vertex_count: int
    edges: tuple[tuple[int, int], ...]
    sink: int

    def __post_init__(self) -> None:
        n = self.vertex_count
        if n < 1:
            raise InvalidVertexError(f"vertex_count must be >= 1, got {n}")
        if not 0 <= self.sink < n:
            raise InvalidSinkError(f"sink {self.sink} not in 0..{n - 1}")
        normalized = []
        seen: set[tuple[int, int]] = set()
        for u, v in self.edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidVertexError(f"edge ({u}, {v}) leaves 0..{n - 1}")
            if u == v:
                raise LoopEdgeError(f"loop edge at vertex {u}")
            pair = (u, v) if u < v else (v, u)
            if pair in seen:
                raise DuplicateEdgeError(f"duplicate edge {pair}")
            seen.add(pair)
            normalized.append(pair)
        object.__setattr__(self, "edges", tuple(normalized))
        self._check_connected()

    def _check_connected(self) -> None:
        n = self.vertex_count
        if n == 1:
            return
        adjacency: list[list[int]] = [[] for _ in range(n)]
        for u, v in self.edges:
            adjacency[u].append(v)
            adjacency[v].append(u)
        seen = bytearray(n)
        stack = [0]
        seen[0] = 1
        reached = 1
        while stack:
            for w in adjacency[stack.pop()]:
                if not seen[w]:
                    seen[w] = 1
                    reached += 1
                    stack.append(w)
        if reached != n:
            raise DisconnectedGraphError(
                f"graph is disconnected ({reached} of {n} vertices reachable)"
            )

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        d = [0] * self.vertex_count
        for u, v in self.edges:
            d[u] += 1
            d[v] += 1
        return tuple(d)

    def degree(self, v: int) -> int:
        if not 0 <= v < self.vertex_count:
            raise InvalidVertexError(f"vertex {v} not in 0..{self.vertex_count - 1}")
        return self.degrees[v]

    @cached_property
    def non_sink_vertices(self) -> tuple[int, ...]:
        return tuple(v for v in range(self.vertex_count) if v != self.sink)

    def cycle_rank(self) -> int:
        """|E| - |V| + 1 for a connected graph."""
        return len(self.edges) - self.vertex_count + 1

    def max_stable(self) -> Configuration:
        """The maximal stable configuration: degree - 1 on every non-sink vertex."""
        return tuple(self.degrees[v] - 1 for v in self.non_sink_vertices)

    def total_lacking_bound(self) -> int:
        """Largest possible total lacking number, sum of (degree - 1) off the sink."""
        return sum(self.degrees[v] - 1 for v in self.non_sink_vertices)

    def to_edge_list_text(self) -> str:
        lines = [f"{self.vertex_count} {len(self.edges)} {self.sink}"]
        lines.extend(f"{u} {v}" for u, v in self.edges)
        return "\n".join(lines) + "\n"


def make_complete_bipartite(spec: BipartiteSpec) -> Graph:
    """Build K_{m,n} with sink 0; edges in row-major order over (first, second) parts."""
    edges = [
        (i, j)
        for i in range(spec.m)
        for j in range(spec.m, spec.m + spec.n)
    ]
    return Graph(vertex_count=spec.m + spec.n, edges=tuple(edges), sink=0)


def from_edge_list(
    vertex_count: int, pairs: list[tuple[int, int]], sink: int
) -> Graph:
    """Validated graph from raw pairs; raises a specific GraphError subclass on failure."""
    return Graph(vertex_count=vertex_count, edges=tuple(pairs), sink=sink)


def parse_edge_list_text(text: str) -> Graph:
    """Parse the edge-list text format: "V E S" header, then E lines "u v".

    Malformed content raises GraphError mentioning the 1-based line number.
    """
    lines = text.splitlines()
    if not lines or not lines[0].split():
        raise GraphError("line 1: missing 'V E S' header")
    header = lines[0].split()
    if len(header) != 3:
        raise GraphError("line 1: header must be 'V E S'")
    try:
        vertex_count, edge_count, sink = (int(x) for x in header)
    except ValueError as exc:
        raise GraphError(f"line 1: non-integer header field ({exc})") from exc
    pairs: list[tuple[int, int]] = []
    lineno = 1
    for raw in lines[1:]:
        if not raw.strip():
            lineno += 1
            continue
        lineno += 1
        parts = raw.split()
        if len(parts) != 2:
            raise GraphError(f"line {lineno}: expected 'u v', got {raw!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise GraphError(f"line {lineno}: non-integer endpoint ({exc})") from exc
        pairs.append((u, v))
    if len(pairs) != edge_count:
        raise GraphError(
            f"header announced {edge_count} edges but {len(pairs)} were given"
        )
    return from_edge_list(vertex_count, pairs, sink)


def is_stable(g: Graph, c: Configuration) -> bool:
    """Every non-sink vertex holds strictly fewer grains than its degree."""
    non_sink = g.non_sink_vertices
    if len(c) != len(non_sink):
        return False
    degrees = g.degrees
    return all(0 <= c[i] < degrees[v] for i, v in enumerate(non_sink))
