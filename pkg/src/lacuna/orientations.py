"""Brute-force orientation oracle.

Sweeps all 2^|E| orientations of a sinked graph, collects the box of stable
configurations compatible with each one, and unions the boxes into the exact
set of stochastically recurrent states.  This is the slow, trusted ground
truth against which the fast engines are checked.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .errors import BudgetExceededError, UnstableConfigurationError
from .graphs import Configuration, Graph, is_stable

DEFAULT_ORACLE_EDGE_CAP = 24


@dataclass(frozen=True)
class Orientation:
    """Direction assignment for every edge, packed into an integer.

    Bit e is 0 when edge e points from its lower-indexed endpoint to the
    higher one, 1 for the reverse.
    """

    bits: int
    width: int

    def __post_init__(self) -> None:
        if self.width < 0 or not 0 <= self.bits < (1 << self.width):
            raise ValueError(f"bits {self.bits} does not fit width {self.width}")

    def direction(self, edge_index: int) -> int:
        return (self.bits >> edge_index) & 1

    def reversed(self) -> "Orientation":
        """The complement orientation: every edge direction flipped."""
        return Orientation(bits=self.bits ^ ((1 << self.width) - 1), width=self.width)


@dataclass(frozen=True)
class CompBox:
    """Axis-aligned box of stable configurations compatible with one orientation.

    ``lower`` is the per-non-sink-vertex out-degree, ``upper`` the exclusive
    per-vertex degree bound.  lower <= upper is not guaranteed; an empty box
    simply contributes nothing to the union.
    """

    lower: tuple[int, ...]
    upper: tuple[int, ...]

    def is_empty(self) -> bool:
        return any(lo >= up for lo, up in zip(self.lower, self.upper))

    def __contains__(self, c: Configuration) -> bool:
        if len(c) != len(self.lower):
            return False
        return all(lo <= x < up for x, lo, up in zip(c, self.lower, self.upper))

    def size(self) -> int:
        total = 1
        for lo, up in zip(self.lower, self.upper):
            if up <= lo:
                return 0
            total *= up - lo
        return total

    def configurations(self) -> Iterator[Configuration]:
        """All member configurations in lexicographic order."""
        if self.is_empty():
            return
        k = len(self.lower)
        cur = list(self.lower)
        while True:
            yield tuple(cur)
            i = k - 1
            while i >= 0:
                cur[i] += 1
                if cur[i] < self.upper[i]:
                    break
                cur[i] = self.lower[i]
                i -= 1
            if i < 0:
                return


def all_orientations(g: Graph) -> Iterator[Orientation]:
    width = len(g.edges)
    for bits in range(1 << width):
        yield Orientation(bits=bits, width=width)


def out_degrees(g: Graph, o: Orientation) -> tuple[int, ...]:
    """Out-degree of every vertex (sink included) under the orientation."""
    if o.width != len(g.edges):
        raise ValueError(
            f"orientation width {o.width} != edge count {len(g.edges)}"
        )
    out = [0] * g.vertex_count
    bits = o.bits
    for e, (u, v) in enumerate(g.edges):
        if (bits >> e) & 1:
            out[v] += 1
        else:
            out[u] += 1
    return tuple(out)


def is_compatible(g: Graph, o: Orientation, c: Configuration) -> bool:
    """True iff every non-sink vertex has in-degree >= degree - grains."""
    if not is_stable(g, c):
        raise UnstableConfigurationError(f"configuration {c} is not stable on this graph")
    out = out_degrees(g, o)
    degrees = g.degrees
    # in(v) >= d(v) - c(v)  <=>  out(v) <= c(v)
    return all(out[v] <= c[i] for i, v in enumerate(g.non_sink_vertices))


def comp_box(g: Graph, o: Orientation) -> CompBox:
    """The box of stable configurations compatible with the orientation."""
    out = out_degrees(g, o)
    non_sink = g.non_sink_vertices
    return CompBox(
        lower=tuple(out[v] for v in non_sink),
        upper=tuple(g.degrees[v] for v in non_sink),
    )


def _config_places(radices: tuple[int, ...]) -> tuple[int, ...]:
    """Mixed-radix place values, last digit least significant."""
    places = [1] * len(radices)
    for i in range(len(radices) - 2, -1, -1):
        places[i] = places[i + 1] * radices[i + 1]
    return tuple(places)


def _sweep_score_keys(g: Graph, lo: int, hi: int) -> set[int]:
    """Distinct non-sink out-degree vectors over orientations gray(lo..hi-1).

    Each vector is packed into an integer key with per-vertex radix degree+1
    (placing the sink at weight 0), updated in O(1) per single-bit Gray flip.
    """
    edges = g.edges
    degrees = g.degrees
    sink = g.sink
    non_sink = g.non_sink_vertices
    score_places = _config_places(tuple(degrees[v] + 1 for v in non_sink))
    places_by_vertex = [0] * g.vertex_count
    for i, v in enumerate(non_sink):
        places_by_vertex[v] = score_places[i]
    deltas = [places_by_vertex[v] - places_by_vertex[u] for u, v in edges]

    bits = lo ^ (lo >> 1)
    out = [0] * g.vertex_count
    for e, (u, v) in enumerate(edges):
        out[v if (bits >> e) & 1 else u] += 1
    key = sum(out[v] * places_by_vertex[v] for v in range(g.vertex_count) if v != sink)
    state = [(bits >> e) & 1 for e in range(len(edges))]

    keys: set[int] = set()
    add = keys.add
    for j in range(lo + 1, hi):
        add(key)
        b = (j & -j).bit_length() - 1
        if state[b]:
            key -= deltas[b]
            state[b] = 0
        else:
            key += deltas[b]
            state[b] = 1
    add(key)
    return keys


def _union_from_score_keys(g: Graph, keys: set[int]) -> list[Configuration]:
    """OR the boxes of the distinct out-degree vectors into one sorted config list.

    The union lives in the mixed-radix config space (radix degree per vertex);
    it is materialized as a bitmap, one bit per stable configuration code.
    """
    non_sink = g.non_sink_vertices
    k = len(non_sink)
    config_radices = tuple(g.degrees[v] for v in non_sink)
    score_radices = tuple(d + 1 for d in config_radices)
    config_places = _config_places(config_radices)
    score_places = _config_places(score_radices)
    total = 1
    for d in config_radices:
        total *= d

    # mask[i][t]: bitmap over config codes with digit i >= t
    masks: list[list[int]] = []
    for i, d in enumerate(config_radices):
        place = config_places[i]
        period = place * d
        repeat = total // period
        repunit = ((1 << (period * repeat)) - 1) // ((1 << period) - 1)
        per_threshold = []
        for t in range(d + 1):
            segment = ((1 << ((d - t) * place)) - 1) << (t * place)
            per_threshold.append(segment * repunit)
        masks.append(per_threshold)

    union = 0
    full = (1 << total) - 1
    for key in keys:
        box = full
        rest = key
        for i in range(k):
            digit = rest // score_places[i]
            rest -= digit * score_places[i]
            if digit >= config_radices[i]:
                box = 0
                break
            if digit:
                box &= masks[i][digit]
                if not box:
                    break
        union |= box

    # decode set bits (ascending code = lexicographic config order)
    configs: list[Configuration] = []
    data = union.to_bytes((total + 7) // 8, "little")
    for byte_index, byte in enumerate(data):
        while byte:
            low = byte & -byte
            code = byte_index * 8 + low.bit_length() - 1
            byte ^= low
            digits = []
            for place in config_places:
                digit, code = divmod(code, place)
                digits.append(digit)
            configs.append(tuple(digits))
    return configs


def sto_by_union(
    g: Graph, *, max_edges: int = DEFAULT_ORACLE_EDGE_CAP, workers: int = 1
) -> list[Configuration]:
    """Exact set of stochastically recurrent states as a sorted list.

    Unions comp_box over every orientation.  Refuses graphs above the edge
    cap, since the sweep is 2^|E|.
    """
    edge_count = len(g.edges)
    if edge_count > max_edges:
        raise BudgetExceededError(
            f"{edge_count} edges exceeds the orientation sweep cap of {max_edges}"
        )
    if not g.non_sink_vertices:
        return [()]
    count = 1 << edge_count
    if workers > 1 and count >= 4096:
        keys = _parallel_score_keys(g, count, workers)
    else:
        keys = _sweep_score_keys(g, 0, count)
    return _union_from_score_keys(g, keys)


def _score_key_chunk(args: tuple[Graph, int, int]) -> set[int]:
    g, lo, hi = args
    return _sweep_score_keys(g, lo, hi)


def _parallel_score_keys(g: Graph, count: int, workers: int) -> set[int]:
    from concurrent.futures import ProcessPoolExecutor
    import multiprocessing

    bounds = [count * i // workers for i in range(workers + 1)]
    chunks = [
        (g, bounds[i], bounds[i + 1])
        for i in range(workers)
        if bounds[i] < bounds[i + 1]
    ]
    context = multiprocessing.get_context("fork")
    keys: set[int] = set()
    with ProcessPoolExecutor(max_workers=len(chunks), mp_context=context) as pool:
        for part in pool.map(_score_key_chunk, chunks):
            keys |= part
    return keys
