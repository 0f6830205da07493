"""Fast membership and enumeration engines for stochastically recurrent states.

A stable configuration c is stochastically recurrent iff some orientation has
out-degree at most c(v) at every non-sink vertex.  That existence question is
decided here by max-flow feasibility on a small assignment network; sweeps
over the stable space (plain mixed-radix, or symmetry-reduced for complete
bipartite graphs) aggregate the results into a level histogram.
"""

from __future__ import annotations

import math
import time
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Iterator

from .errors import BudgetExceededError, UnstableConfigurationError
from .graphs import BipartiteSpec, Configuration, Graph, is_stable

HALL_VERTEX_CAP = 20


@dataclass(frozen=True)
class LevelHistogram:
    """Exact counts of recurrent configurations indexed by total lacking number.

    Trailing zero levels are trimmed; counts sum to |Sto(G)|.
    """

    counts: tuple[int, ...]

    def total(self) -> int:
        return sum(self.counts)

    def merged(self, other: "LevelHistogram") -> "LevelHistogram":
        a, b = self.counts, other.counts
        if len(a) < len(b):
            a, b = b, a
        merged = list(a)
        for i, x in enumerate(b):
            merged[i] += x
        return LevelHistogram(counts=_trim(merged))


@dataclass(frozen=True)
class SideMultiset:
    """One side of K_{m,n} up to permutation: weakly decreasing grain values.

    ``weight`` is the orbit size, the multinomial coefficient of the value
    multiplicities.
    """

    values: tuple[int, ...]
    weight: int


def _trim(counts: list[int]) -> tuple[int, ...]:
    end = len(counts)
    while end > 1 and counts[end - 1] == 0:
        end -= 1
    return tuple(counts[:end])


def enumerate_stable(g: Graph) -> Iterator[Configuration]:
    """Every stable configuration exactly once, in mixed-radix lexicographic order."""
    radices = [g.degrees[v] for v in g.non_sink_vertices]
    k = len(radices)
    if k == 0:
        yield ()
        return
    cur = [0] * k
    while True:
        yield tuple(cur)
        i = k - 1
        while i >= 0:
            cur[i] += 1
            if cur[i] < radices[i]:
                break
            cur[i] = 0
            i -= 1
        if i < 0:
            return


class _OrientationFlow:
    """Reusable max-flow network deciding orientation feasibility for one graph.

    One unit-supply node per edge, connected to both endpoint nodes; each
    non-sink endpoint drains into the flow sink with capacity equal to its
    grain count, the graph sink with effectively unbounded capacity.  The
    orientation exists iff the max flow saturates all |E| units.
    """

    def __init__(self, g: Graph) -> None:
        self.graph = g
        edge_count = len(g.edges)
        vertex_count = g.vertex_count
        self.edge_count = edge_count
        self.source = 0
        self.sink_node = 1 + edge_count + vertex_count
        node_count = self.sink_node + 1

        arc_to: list[int] = []
        arc_cap: list[int] = []
        adjacency: list[list[int]] = [[] for _ in range(node_count)]

        def add_arc(a: int, b: int, cap: int) -> int:
            index = len(arc_to)
            arc_to.append(b)
            arc_cap.append(cap)
            adjacency[a].append(index)
            arc_to.append(a)
            arc_cap.append(0)
            adjacency[b].append(index + 1)
            return index

        for e, (u, v) in enumerate(g.edges):
            node = 1 + e
            add_arc(self.source, node, 1)
            add_arc(node, 1 + edge_count + u, 1)
            add_arc(node, 1 + edge_count + v, 1)
        self.vertex_arc = [-1] * vertex_count
        for v in range(vertex_count):
            cap = edge_count if v == g.sink else 0
            self.vertex_arc[v] = add_arc(1 + edge_count + v, self.sink_node, cap)

        self.arc_to = arc_to
        self.template_cap = arc_cap
        self.adjacency = adjacency
        self.non_sink = g.non_sink_vertices
        # flow can only reach |E| if the non-sink caps cover the edges the
        # sink vertex cannot absorb
        self.min_grain_total = edge_count - g.degrees[g.sink]

    def feasible(self, c: Configuration) -> bool:
        if sum(c) < self.min_grain_total:
            return False
        cap = self.template_cap.copy()
        for i, v in enumerate(self.non_sink):
            cap[self.vertex_arc[v]] = c[i]

        adjacency = self.adjacency
        arc_to = self.arc_to
        source = self.source
        sink_node = self.sink_node
        need = self.edge_count
        total = 0
        level = [0] * (sink_node + 1)
        iters = [0] * (sink_node + 1)

        while True:
            # BFS level graph
            for i in range(len(level)):
                level[i] = -1
            level[source] = 0
            queue = [source]
            for node in queue:
                for a in adjacency[node]:
                    if cap[a] > 0 and level[arc_to[a]] < 0:
                        level[arc_to[a]] = level[node] + 1
                        queue.append(arc_to[a])
            if level[sink_node] < 0:
                return total == need
            for i in range(len(iters)):
                iters[i] = 0
            # DFS blocking flow with unit pushes (all source arcs have cap 1)
            while True:
                pushed = self._push(source, sink_node, cap, level, iters)
                if not pushed:
                    break
                total += pushed
                if total == need:
                    return True

    def _push(self, node: int, sink_node: int, cap, level, iters) -> int:
        if node == sink_node:
            return 1
        adjacency = self.adjacency
        arc_to = self.arc_to
        arcs = adjacency[node]
        i = iters[node]
        while i < len(arcs):
            a = arcs[i]
            to = arc_to[a]
            if cap[a] > 0 and level[to] == level[node] + 1:
                if self._push(to, sink_node, cap, level, iters):
                    cap[a] -= 1
                    cap[a ^ 1] += 1
                    if cap[a] == 0:
                        iters[node] = i + 1
                    return 1
            i += 1
            iters[node] = i
        return 0


@lru_cache(maxsize=32)
def _flow_for(g: Graph) -> _OrientationFlow:
    return _OrientationFlow(g)


def is_stochastically_recurrent(g: Graph, c: Configuration) -> bool:
    """Flow-feasibility membership test for Sto(G)."""
    if not is_stable(g, c):
        raise UnstableConfigurationError(f"configuration {c} is not stable on this graph")
    return _flow_for(g).feasible(c)


@lru_cache(maxsize=32)
def _subset_edge_counts(g: Graph) -> list[int]:
    """Edges inside each subset of non-sink vertices, indexed by bitmask."""
    non_sink = g.non_sink_vertices
    position = {v: i for i, v in enumerate(non_sink)}
    neighbor_mask = [0] * len(non_sink)
    for u, v in g.edges:
        if u != g.sink and v != g.sink:
            neighbor_mask[position[u]] |= 1 << position[v]
            neighbor_mask[position[v]] |= 1 << position[u]
    counts = [0] * (1 << len(non_sink))
    for mask in range(1, len(counts)):
        low = mask & -mask
        rest = mask ^ low
        i = low.bit_length() - 1
        counts[mask] = counts[rest] + (neighbor_mask[i] & rest).bit_count()
    return counts


def hall_condition_check(g: Graph, c: Configuration) -> bool:
    """Exponential reference decider: every non-sink subset S has at most
    grain(S) internal edges."""
    if g.vertex_count > HALL_VERTEX_CAP:
        raise BudgetExceededError(
            f"{g.vertex_count} vertices exceeds the subset check cap of {HALL_VERTEX_CAP}"
        )
    if not is_stable(g, c):
        raise UnstableConfigurationError(f"configuration {c} is not stable on this graph")
    edge_counts = _subset_edge_counts(g)
    k = len(g.non_sink_vertices)
    grain_sum = [0] * (1 << k)
    for mask in range(1, 1 << k):
        low = mask & -mask
        rest = mask ^ low
        grain_sum[mask] = grain_sum[rest] + c[low.bit_length() - 1]
        if edge_counts[mask] > grain_sum[mask]:
            return False
    return True


def _sweep_range(
    g: Graph, prefix_lo: int, prefix_hi: int, collect: bool
) -> tuple[list[int], list[Configuration]]:
    """Flow sweep over a contiguous block of stable-configuration prefixes.

    The last coordinate is resolved by binary search: acceptance is monotone
    in each grain count, so the accepted values for a fixed prefix form a top
    interval.
    """
    non_sink = g.non_sink_vertices
    radices = [g.degrees[v] for v in non_sink]
    level_total = g.total_lacking_bound()
    counts = [0] * (level_total + 1)
    configs: list[Configuration] = []
    flow = _OrientationFlow(g)
    feasible = flow.feasible

    if not radices:
        if prefix_lo == 0 and feasible(()):
            counts[0] += 1
            if collect:
                configs.append(())
        return counts, configs

    last_radix = radices[-1]
    prefix_radices = radices[:-1]

    # decode prefix_lo into the odometer
    prefix = []
    rest = prefix_lo
    for place in _places(prefix_radices):
        digit, rest = divmod(rest, place)
        prefix.append(digit)
    prefix_sum = sum(prefix)

    k = len(prefix_radices)
    for _ in range(prefix_lo, prefix_hi):
        c = tuple(prefix)

        def accepted(t: int) -> bool:
            return feasible(c + (t,))

        top = last_radix - 1
        if accepted(top):
            lo, hi = 0, top
            while lo < hi:
                mid = (lo + hi) // 2
                if accepted(mid):
                    hi = mid
                else:
                    lo = mid + 1
            base = level_total - prefix_sum
            for t in range(lo, last_radix):
                counts[base - t] += 1
            if collect:
                configs.extend(c + (t,) for t in range(lo, last_radix))

        i = k - 1
        while i >= 0:
            prefix[i] += 1
            prefix_sum += 1
            if prefix[i] < prefix_radices[i]:
                break
            prefix_sum -= prefix[i]
            prefix[i] = 0
            i -= 1
    return counts, configs


def _places(radices: list[int]) -> list[int]:
    places = [1] * len(radices)
    for i in range(len(radices) - 2, -1, -1):
        places[i] = places[i + 1] * radices[i + 1]
    return places


def _sweep_chunk(args) -> tuple[list[int], list[Configuration]]:
    g, lo, hi, collect = args
    return _sweep_range(g, lo, hi, collect)


def sto_fast(
    g: Graph, *, workers: int = 1, collect: bool = False
) -> LevelHistogram | tuple[LevelHistogram, list[Configuration]]:
    """Level histogram of Sto(G) via the flow decider.

    With ``collect=True`` also returns the accepted configurations in
    mixed-radix lexicographic order.
    """
    radices = [g.degrees[v] for v in g.non_sink_vertices]
    prefix_total = 1
    for d in radices[:-1]:
        prefix_total *= d
    if not radices:
        prefix_total = 1

    if workers > 1 and prefix_total >= 64:
        from concurrent.futures import ProcessPoolExecutor
        import multiprocessing

        bounds = [prefix_total * i // workers for i in range(workers + 1)]
        chunks = [
            (g, bounds[i], bounds[i + 1], collect)
            for i in range(workers)
            if bounds[i] < bounds[i + 1]
        ]
        context = multiprocessing.get_context("fork")
        counts: list[int] = [0] * (g.total_lacking_bound() + 1)
        configs: list[Configuration] = []
        with ProcessPoolExecutor(max_workers=len(chunks), mp_context=context) as pool:
            for part_counts, part_configs in pool.map(_sweep_chunk, chunks):
                for i, x in enumerate(part_counts):
                    counts[i] += x
                configs.extend(part_configs)
    else:
        counts, configs = _sweep_range(g, 0, prefix_total, collect)

    histogram = LevelHistogram(counts=_trim(counts))
    if collect:
        return histogram, configs
    return histogram


def enumerate_side_multisets(slots: int, radix: int) -> Iterator[SideMultiset]:
    """Weakly decreasing value vectors of the given length over 0..radix-1,
    each with its orbit size under slot permutations."""
    if slots == 0:
        yield SideMultiset(values=(), weight=1)
        return
    factorial = math.factorial
    slot_factorial = factorial(slots)
    for ascending in combinations_with_replacement(range(radix), slots):
        weight = slot_factorial
        for mult in Counter(ascending).values():
            weight //= factorial(mult)
        yield SideMultiset(values=tuple(reversed(ascending)), weight=weight)


def _bipartite_feasibility_data(values_descending: tuple[int, ...]) -> list[int]:
    """Prefix sums of the sorted grain values, smallest first."""
    prefix = [0]
    for x in reversed(values_descending):
        prefix.append(prefix[-1] + x)
    return prefix


def sto_bipartite_symmetric(
    spec: BipartiteSpec,
    *,
    workers: int = 1,
    deadline: float | None = None,
) -> LevelHistogram:
    """Level histogram of Sto(K_{m,n}) by orbit enumeration.

    Both sides of the bipartition are interchangeable away from the sink, so
    only one representative per pair of side multisets is tested; accepted
    orbits contribute their exact multinomial size.

    Membership uses the subset feasibility criterion specialized to complete
    bipartite graphs: an orientation with out-degrees below the grain counts
    exists iff a*b <= (sum of a smallest first-side grains) + (sum of b
    smallest second-side grains) for all a, b.
    """
    m, n = spec.m, spec.n
    if workers > 1:
        return _symmetric_parallel(spec, workers, deadline)

    side_a = list(enumerate_side_multisets(m - 1, n))
    level_total = (m - 1) * (n - 1) + n * (m - 1)
    counts = [0] * (level_total + 1)

    a_data = []
    for rep in side_a:
        prefix = _bipartite_feasibility_data(rep.values)
        level = (m - 1) * (n - 1) - sum(rep.values)
        a_data.append((prefix, rep.weight, level))

    checked = 0
    for rep_b in enumerate_side_multisets(n, m):
        if deadline is not None:
            checked += 1
            if checked % 256 == 0 and time.monotonic() > deadline:
                raise BudgetExceededError("orbit sweep exceeded its time budget")
        prefix_b = _bipartite_feasibility_data(rep_b.values)
        level_b = n * (m - 1) - sum(rep_b.values)
        weight_b = rep_b.weight
        # worst subset deficit a*b - prefix_b[b], maximized over b, per a
        max_deficit = [0] * m
        for a in range(1, m):
            worst = 0
            for b in range(n + 1):
                deficit = a * b - prefix_b[b]
                if deficit > worst:
                    worst = deficit
            max_deficit[a] = worst
        for prefix_a, weight_a, level_a in a_data:
            feasible = True
            for a in range(1, m):
                if max_deficit[a] > prefix_a[a]:
                    feasible = False
                    break
            if feasible:
                counts[level_a + level_b] += weight_a * weight_b
    return LevelHistogram(counts=_trim(counts))


def _symmetric_chunk(args) -> list[int]:
    spec, b_lo, b_hi = args
    m, n = spec.m, spec.n
    side_a = list(enumerate_side_multisets(m - 1, n))
    a_data = []
    for rep in side_a:
        prefix = _bipartite_feasibility_data(rep.values)
        level = (m - 1) * (n - 1) - sum(rep.values)
        a_data.append((prefix, rep.weight, level))
    level_total = (m - 1) * (n - 1) + n * (m - 1)
    counts = [0] * (level_total + 1)
    for index, rep_b in enumerate(enumerate_side_multisets(n, m)):
        if not b_lo <= index < b_hi:
            continue
        prefix_b = _bipartite_feasibility_data(rep_b.values)
        level_b = n * (m - 1) - sum(rep_b.values)
        max_deficit = [0] * m
        for a in range(1, m):
            worst = 0
            for b in range(n + 1):
                deficit = a * b - prefix_b[b]
                if deficit > worst:
                    worst = deficit
            max_deficit[a] = worst
        for prefix_a, weight_a, level_a in a_data:
            feasible = True
            for a in range(1, m):
                if max_deficit[a] > prefix_a[a]:
                    feasible = False
                    break
            if feasible:
                counts[level_a + level_b] += weight_a * rep_b.weight
    return counts


def _symmetric_parallel(
    spec: BipartiteSpec, workers: int, deadline: float | None
) -> LevelHistogram:
    from concurrent.futures import ProcessPoolExecutor
    import multiprocessing

    b_count = math.comb(spec.n + spec.m - 1, spec.n)
    bounds = [b_count * i // workers for i in range(workers + 1)]
    chunks = [
        (spec, bounds[i], bounds[i + 1])
        for i in range(workers)
        if bounds[i] < bounds[i + 1]
    ]
    context = multiprocessing.get_context("fork")
    counts = [0] * ((spec.m - 1) * (spec.n - 1) + spec.n * (spec.m - 1) + 1)
    with ProcessPoolExecutor(max_workers=len(chunks), mp_context=context) as pool:
        for part in pool.map(_symmetric_chunk, chunks):
            for i, x in enumerate(part):
                counts[i] += x
    if deadline is not None and time.monotonic() > deadline:
        raise BudgetExceededError("orbit sweep exceeded its time budget")
    return LevelHistogram(counts=_trim(counts))


def sto_count_bipartite(spec: BipartiteSpec, *, workers: int = 1) -> int:
    """|Sto(K_{m,n})| via the symmetry-reduced engine."""
    return sto_bipartite_symmetric(spec, workers=workers).total()


def stable_count(g: Graph) -> int:
    total = 1
    for v in g.non_sink_vertices:
        total *= g.degrees[v]
    return total
