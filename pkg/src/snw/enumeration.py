"""Test universes: every labeled oriented graph, filtered families, and
seeded random (m-free) digraphs.

Labeled oriented graphs on ``n`` vertices are indexed by base-3 integers in
``[0, 3^C(n,2))``. Pair ``(i, j)``, ``i < j``, at lexicographic position
``k`` carries the digit of weight ``3^k``: 0 = no edge, 1 = ``i -> j``,
2 = ``j -> i``.

Randomness comes only from NumPy's PCG64 bit generator, read through
``random_raw`` (its 64-bit output stream is fixed by the algorithm, unlike
the ``Generator`` convenience methods). Each pair consumes exactly two raw
words, in lexicographic pair order: the first decides presence
(``(w >> 11) * 2**-53 < p``), the top bit of the second decides direction
(0 = ``i -> j``).
"""

from __future__ import annotations

import json
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import permutations
from math import comb
from pathlib import Path
from typing import Callable, Iterator, Mapping

import numpy as np

from snw.digraph import (
    UNREACHABLE,
    Digraph,
    distances,
    is_strongly_connected,
    iter_bits,
    girth,
    write_dg,
)
from snw.errors import IndexOutOfRange, TooLargeForCanonical, UniverseTooLarge

FILTERS = ("tournament", "in_regular", "strongly_connected", "m_free")

# Exhaustive limits: full sweep to n = 6, structurally pruned families to n = 8.
MAX_ALL_N = 6
MAX_PRUNED_N = 8
MAX_CANONICAL_N = 8


def pairs(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def universe_size(n: int) -> int:
    return 3 ** comb(n, 2)


def decode(n: int, index: int) -> Digraph:
    if not 0 <= index < universe_size(n):
        raise IndexOutOfRange(f"index {index} outside [0, 3^{comb(n, 2)})")
    out = [0] * n
    for i, j in pairs(n):
        index, digit = divmod(index, 3)
        if digit == 1:
            out[i] |= 1 << j
        elif digit == 2:
            out[j] |= 1 << i
    return Digraph(n, tuple(out))


def encode(D: Digraph) -> int:
    index = 0
    weight = 1
    for i, j in pairs(D.n):
        if D.out[i] >> j & 1:
            index += weight
        elif D.out[j] >> i & 1:
            index += 2 * weight
        weight *= 3
    return index


def is_tournament(D: Digraph) -> bool:
    return D.edge_count == comb(D.n, 2)


def relabel(D: Digraph, perm: tuple[int, ...]) -> Digraph:
    """Move vertex ``v`` to ``perm[v]``."""
    out = [0] * D.n
    for u, v in D.edges():
        out[perm[u]] |= 1 << perm[v]
    return Digraph(D.n, tuple(out))


def canonical_form(D: Digraph) -> int:
    """Least index over all ``n!`` relabelings; equal iff isomorphic."""
    n = D.n
    if n > MAX_CANONICAL_N:
        raise TooLargeForCanonical(f"canonical form limited to n <= {MAX_CANONICAL_N}, got {n}")
    weight = {}
    for k, (i, j) in enumerate(pairs(n)):
        weight[i, j] = 3**k
        weight[j, i] = 2 * 3**k
    edges = D.edges()
    best = None
    for perm in permutations(range(n)):
        index = 0
        for u, v in edges:
            index += weight[perm[u], perm[v]]
        if best is None or index < best:
            best = index
    return best


# --- filtered exhaustive enumeration --------------------------------------------


@dataclass(frozen=True)
class GeneratorConfig:
    n: int
    p: float = 0.5
    m: int | None = None
    seed: int = 0
    filters: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"edge probability {self.p} outside [0, 1]")
        if self.m is not None and self.m < 2:
            raise ValueError(f"m must be >= 2, got {self.m}")
        unknown = set(self.filters) - set(FILTERS)
        if unknown:
            raise ValueError(f"unknown filters {sorted(unknown)}")
        if "m_free" in self.filters and self.m is None:
            raise ValueError("m_free filter requires m")
        object.__setattr__(self, "filters", frozenset(self.filters))


def check_universe(config: GeneratorConfig) -> int:
    """Size of the raw index range a sweep must cover; raises if out of reach."""
    n = config.n
    size = universe_size(n)
    pruned = config.filters & {"tournament", "in_regular"}
    limit = MAX_PRUNED_N if pruned else MAX_ALL_N
    if n < 1 or n > limit:
        raise UniverseTooLarge(
            f"n={n} exceeds the exhaustive limit {limit} for filters {sorted(config.filters) or ['all']}",
            required=size,
        )
    return size


def iter_graphs(config: GeneratorConfig, lo: int = 0, hi: int | None = None) -> Iterator[tuple[int, Digraph]]:
    """Yield ``(index, D)`` for graphs in ``[lo, hi)`` that pass the filters,
    in ascending index order.

    Tournament and in-regular constraints prune the search tree; the other
    filters are applied at the leaves.
    """
    n = config.n
    size = universe_size(n)
    hi = size if hi is None else min(hi, size)
    if lo >= hi:
        return
    plist = pairs(n)
    npairs = len(plist)
    tournament = "tournament" in config.filters
    in_regular = "in_regular" in config.filters
    strong = "strongly_connected" in config.filters
    m = config.m if "m_free" in config.filters else None
    digits = (1, 2) if tournament else (0, 1, 2)
    max_in = (n - 1) // 2

    # remaining[k][v]: pairs at positions < k that touch v (still unassigned
    # when position k - 1 is next, since assignment runs from the top pair down)
    remaining = [[0] * n for _ in range(npairs + 1)]
    for k in range(1, npairs + 1):
        i, j = plist[k - 1]
        row = remaining[k - 1][:]
        row[i] += 1
        row[j] += 1
        remaining[k] = row

    out = [0] * n
    inn = [0] * n
    weights = [3**k for k in range(npairs + 1)]

    def leaf(index: int) -> Digraph | None:
        if in_regular and len({m_.bit_count() for m_ in inn}) != 1:
            return None
        D = Digraph._unchecked(n, tuple(out), tuple(inn))
        if strong and not is_strongly_connected(D):
            return None
        if m is not None and girth(D) <= m:
            return None
        return D

    def rec(k: int, base: int) -> Iterator[tuple[int, Digraph]]:
        # pairs at positions >= k are fixed; base is their contribution
        if k == 0:
            D = leaf(base)
            if D is not None:
                yield base, D
            return
        pos = k - 1
        i, j = plist[pos]
        w = weights[pos]
        span = weights[pos]
        for d in digits:
            start = base + d * w
            if start + span <= lo or start >= hi:
                continue
            if d == 1:
                out[i] |= 1 << j
                inn[j] |= 1 << i
            elif d == 2:
                out[j] |= 1 << i
                inn[i] |= 1 << j
            if not in_regular or _in_regular_feasible(inn, remaining[pos], max_in):
                yield from rec(pos, start)
            if d == 1:
                out[i] &= ~(1 << j)
                inn[j] &= ~(1 << i)
            elif d == 2:
                out[j] &= ~(1 << i)
                inn[i] &= ~(1 << j)

    yield from rec(npairs, 0)


def _in_regular_feasible(inn: list[int], remaining: list[int], max_in: int) -> bool:
    degrees = [m.bit_count() for m in inn]
    top = max(degrees)
    if top > max_in:
        return False
    for d, r in zip(degrees, remaining):
        if d + r < top:
            return False
    return True


@dataclass
class EnumerationStats:
    universe: int
    visited: int = 0
    passed: int = 0
    tallies: Counter = field(default_factory=Counter)
    elapsed_ms: int = 0

    def merge(self, other: EnumerationStats) -> None:
        self.visited += other.visited
        self.passed += other.passed
        self.tallies.update(other.tallies)

    def to_json(self) -> dict:
        return {
            "universe": self.universe,
            "visited": self.visited,
            "passed": self.passed,
            "elapsed_ms": self.elapsed_ms,
        }


Visitor = Callable[[int, Digraph], "Mapping[str, int] | None"]


def chunk_bounds(size: int, chunks: int) -> list[tuple[int, int]]:
    chunks = max(1, min(chunks, size))
    step = -(-size // chunks)
    return [(lo, min(lo + step, size)) for lo in range(0, size, step)]


def _run_chunk(config: GeneratorConfig, visitor: Visitor, lo: int, hi: int) -> EnumerationStats:
    stats = EnumerationStats(universe=universe_size(config.n))
    for index, D in iter_graphs(config, lo, hi):
        stats.passed += 1
        tally = visitor(index, D)
        if tally:
            stats.tallies.update(tally)
    # pruned families never materialize the rest, so "visited" counts leaves reached
    stats.visited = stats.passed if config.filters & {"tournament", "in_regular"} else _unpruned_visited(config, lo, hi)
    return stats


def _unpruned_visited(config: GeneratorConfig, lo: int, hi: int) -> int:
    return max(0, min(hi, universe_size(config.n)) - lo)


def enumerate_graphs(
    config: GeneratorConfig,
    visitor: Visitor,
    jobs: int = 1,
    chunks: int | None = None,
) -> EnumerationStats:
    """Visit every labeled graph passing ``config.filters`` exactly once.

    The index range is cut into contiguous chunks; with ``jobs > 1`` chunks
    run in worker processes, so ``visitor`` must be picklable. Tallies merge
    by addition and do not depend on ``jobs``.
    """
    size = check_universe(config)
    start = time.perf_counter()
    bounds = chunk_bounds(size, chunks or max(1, jobs * 4))
    total = EnumerationStats(universe=size)
    if jobs <= 1:
        results = [_run_chunk(config, visitor, lo, hi) for lo, hi in bounds]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(
                pool.map(_run_chunk, *zip(*[(config, visitor, lo, hi) for lo, hi in bounds]))
            )
    for r in results:
        total.merge(r)
    total.elapsed_ms = round((time.perf_counter() - start) * 1000)
    return total


def write_batch(directory: str | Path, graphs: Iterator[tuple[int, Digraph]]) -> list[Path]:
    """Write each graph as ``<n>-<index>.dg``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for index, D in graphs:
        path = directory / f"{D.n}-{index}.dg"
        write_dg(path, D)
        written.append(path)
    return written


def stats_json(stats: EnumerationStats) -> str:
    return json.dumps(stats.to_json()) + "\n"


# --- seeded random digraphs ---------------------------------------------------


def _bitgen(seed: int) -> np.random.PCG64:
    return np.random.PCG64(seed)


def _draw_oriented(bg: np.random.PCG64, n: int, p: float) -> Digraph:
    plist = pairs(n)
    words = bg.random_raw(2 * len(plist)).tolist() if plist else []
    out = [0] * n
    for k, (i, j) in enumerate(plist):
        if (words[2 * k] >> 11) * 2.0**-53 < p:
            if words[2 * k + 1] >> 63:
                out[j] |= 1 << i
            else:
                out[i] |= 1 << j
    return Digraph(n, tuple(out))


def random_oriented(n: int, p: float, seed: int) -> Digraph:
    """Each pair independently absent with probability ``1 - p``, otherwise
    oriented uniformly. Deterministic in ``seed``."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability {p} outside [0, 1]")
    return _draw_oriented(_bitgen(seed), n, p)


def shortest_cycle(D: Digraph) -> list[tuple[int, int]] | None:
    """Edges of a shortest cycle through the least vertex attaining the girth.

    The path back is read from a BFS tree that scans neighbors in ascending
    order, closing through the least eligible predecessor.
    """
    M = distances(D)
    g = girth(D, M)
    if g >= UNREACHABLE:
        return None
    v = next(u for u in range(D.n) if M.dist[u][u] == g)
    parent = {v: None}
    frontier = [v]
    while frontier:
        nxt = []
        for x in frontier:
            for y in iter_bits(D.out[x]):
                if y not in parent:
                    parent[y] = x
                    nxt.append(y)
        frontier = nxt
    w = next(u for u in iter_bits(D.inn[v]) if M.dist[v][u] == g - 1)
    path = [w]
    while path[-1] != v:
        path.append(parent[path[-1]])
    path.reverse()
    return list(zip(path, path[1:])) + [(w, v)]


@dataclass(frozen=True)
class MFreeSample:
    graph: Digraph
    repairs: int


def random_m_free_sample(n: int, p: float, m: int, seed: int) -> MFreeSample:
    """Random oriented graph made m-free by repeatedly deleting a uniformly
    chosen edge of a shortest cycle. Not uniform over m-free graphs."""
    if m < 2:
        raise ValueError(f"m must be >= 2, got {m}")
    bg = _bitgen(seed)
    D = _draw_oriented(bg, n, p)
    repairs = 0
    while True:
        cycle = shortest_cycle(D)
        if cycle is None or len(cycle) > m:
            return MFreeSample(D, repairs)
        # modulo bias is at most len(cycle) / 2**64
        u, v = cycle[int(bg.random_raw()) % len(cycle)]
        D = D.without_edge(u, v)
        repairs += 1


def random_m_free(n: int, p: float, m: int, seed: int) -> Digraph:
    return random_m_free_sample(n, p, m, seed).graph
