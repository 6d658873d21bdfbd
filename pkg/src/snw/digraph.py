"""Oriented simple digraphs on at most 64 vertices, stored as bit masks.

Distances follow one non-standard convention: ``d(v, v)`` is the length of
the shortest directed cycle through ``v`` (never zero), or ``UNREACHABLE``
when ``v`` lies on no cycle. As a consequence ``v`` can belong to its own
k-th out-neighborhood, and a vertex set ``S`` can intersect its own
neighborhoods.

Vertex sets are plain ``int`` bit masks internally; the public neighborhood
functions accept any iterable of vertices and return ``frozenset``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from snw.errors import (
    DGParseError,
    DuplicateEdge,
    EmptySet,
    LoopEdge,
    TwoCycle,
    VertexOutOfRange,
)

MAX_VERTICES = 64

# Strictly larger than any finite distance, so ``min`` needs no special case.
UNREACHABLE = 1 << 62

DG_MAGIC = "DG 1"


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def to_set(mask: int) -> frozenset[int]:
    return frozenset(iter_bits(mask))


@dataclass(frozen=True)
class Digraph:
    """Labeled oriented simple digraph.

    ``out[v]`` is the bit mask of out-neighbors of ``v``; ``inn`` is its
    transpose and is always derived, never supplied. Equality is labeled
    equality of the masks.
    """

    n: int
    out: tuple[int, ...]
    inn: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not 1 <= self.n <= MAX_VERTICES:
            raise VertexOutOfRange(f"vertex count {self.n} outside [1, {MAX_VERTICES}]")
        if len(self.out) != self.n:
            raise VertexOutOfRange(f"expected {self.n} adjacency masks, got {len(self.out)}")
        full = (1 << self.n) - 1
        inn = [0] * self.n
        for v, mask in enumerate(self.out):
            if mask & ~full:
                raise VertexOutOfRange(f"out-neighbors of {v} exceed vertex range")
            if mask >> v & 1:
                raise LoopEdge(f"loop at vertex {v}")
            for u in iter_bits(mask):
                inn[u] |= 1 << v
        for v in range(self.n):
            if self.out[v] & inn[v]:
                u = (self.out[v] & inn[v]).bit_length() - 1
                raise TwoCycle(f"edges {v}->{u} and {u}->{v} both present")
        object.__setattr__(self, "inn", tuple(inn))

    @classmethod
    def empty(cls, n: int) -> Digraph:
        return cls(n, (0,) * n)

    @classmethod
    def _unchecked(cls, n: int, out: tuple[int, ...], inn: tuple[int, ...]) -> Digraph:
        # enumeration hot path: caller guarantees a valid oriented graph
        D = object.__new__(cls)
        object.__setattr__(D, "n", n)
        object.__setattr__(D, "out", out)
        object.__setattr__(D, "inn", inn)
        return D

    @property
    def edge_count(self) -> int:
        return sum(m.bit_count() for m in self.out)

    def edges(self) -> list[tuple[int, int]]:
        """All edges in ascending lexicographic order."""
        return [(u, v) for u in range(self.n) for v in iter_bits(self.out[u])]

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.out[u] >> v & 1)

    def out_degree(self, v: int) -> int:
        return self.out[v].bit_count()

    def in_degree(self, v: int) -> int:
        return self.inn[v].bit_count()

    def reverse(self) -> Digraph:
        return Digraph(self.n, self.inn)

    def without_edge(self, u: int, v: int) -> Digraph:
        out = list(self.out)
        out[u] &= ~(1 << v)
        return Digraph(self.n, tuple(out))


def from_edges(n: int, edges: Iterable[tuple[int, int]]) -> Digraph:
    """Build a digraph from ordered pairs, rejecting anything non-oriented."""
    if not 1 <= n <= MAX_VERTICES:
        raise VertexOutOfRange(f"vertex count {n} outside [1, {MAX_VERTICES}]")
    out = [0] * n
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise VertexOutOfRange(f"edge ({u}, {v}) outside [0, {n})")
        if u == v:
            raise LoopEdge(f"loop at vertex {u}")
        if out[u] >> v & 1:
            raise DuplicateEdge(f"edge ({u}, {v}) given twice")
        if out[v] >> u & 1:
            raise TwoCycle(f"edges {u}->{v} and {v}->{u} both present")
        out[u] |= 1 << v
    return Digraph(n, tuple(out))


@dataclass(frozen=True)
class DistanceMatrix:
    """All-pairs directed distances; the diagonal holds shortest cycle lengths."""

    n: int
    dist: tuple[tuple[int, ...], ...]

    def __getitem__(self, key: tuple[int, int]) -> int:
        u, v = key
        return self.dist[u][v]


def walk_layers(D: Digraph, start: int) -> list[int]:
    """Breadth-first layers of the set ``start`` under the min-distance rule.

    Layer ``k - 1`` of the result is the mask of vertices whose minimum
    distance from the set is exactly ``k``. Members of ``start`` are not
    pre-marked as visited, so they reappear at their cycle distance.
    """
    out = D.out
    frontier = 0
    for s in iter_bits(start):
        frontier |= out[s]
    seen = frontier
    layers = []
    while frontier:
        layers.append(frontier)
        nxt = 0
        for w in iter_bits(frontier):
            nxt |= out[w]
        frontier = nxt & ~seen
        seen |= frontier
    return layers


def out_profile(D: Digraph, start: int) -> list[int]:
    """Sizes ``d_1^+, d_2^+, ...`` of the set ``start`` up to the last nonzero."""
    return [layer.bit_count() for layer in walk_layers(D, start)]


def first_two(D: Digraph, v: int) -> tuple[int, int]:
    """``(d_1^+(v), d_2^+(v))`` without a full BFS."""
    out = D.out
    first = out[v]
    reach = 0
    for w in iter_bits(first):
        reach |= out[w]
    # v itself can only return at distance >= 3 in an oriented graph
    return first.bit_count(), (reach & ~first).bit_count()


def set_first_two(D: Digraph, start: int) -> tuple[int, int]:
    """``(d_1^+(S), d_2^+(S))`` for the vertex set mask ``start``."""
    out = D.out
    first = 0
    for s in iter_bits(start):
        first |= out[s]
    reach = 0
    for w in iter_bits(first):
        reach |= out[w]
    return first.bit_count(), (reach & ~first).bit_count()


def distances(D: Digraph) -> DistanceMatrix:
    n = D.n
    rows = []
    for s in range(n):
        row = [UNREACHABLE] * n
        for k, layer in enumerate(walk_layers(D, 1 << s), start=1):
            for u in iter_bits(layer):
                row[u] = k
        rows.append(tuple(row))
    return DistanceMatrix(n, tuple(rows))


def _check_vertex(D: Digraph, v: int) -> None:
    if not 0 <= v < D.n:
        raise VertexOutOfRange(f"vertex {v} outside [0, {D.n})")


def kth_out_neighborhood(D: Digraph, M: DistanceMatrix, v: int, k: int) -> frozenset[int]:
    _check_vertex(D, v)
    return frozenset(u for u in range(D.n) if M.dist[v][u] == k)


def kth_in_neighborhood(D: Digraph, M: DistanceMatrix, v: int, k: int) -> frozenset[int]:
    _check_vertex(D, v)
    return frozenset(u for u in range(D.n) if M.dist[u][v] == k)


def set_kth_out_neighborhood(
    D: Digraph, M: DistanceMatrix, S: Iterable[int], k: int
) -> frozenset[int]:
    """Vertices whose minimum distance from a member of ``S`` is exactly ``k``.

    Members of ``S`` are candidates too, since ``d(s, s)`` is a cycle length.
    """
    members = sorted(set(S))
    if not members:
        raise EmptySet("vertex set must be non-empty")
    for s in members:
        _check_vertex(D, s)
    return frozenset(
        u for u in range(D.n) if min(M.dist[s][u] for s in members) == k
    )


def girth(D: Digraph, M: DistanceMatrix | None = None) -> int:
    """Length of the shortest directed cycle, ``UNREACHABLE`` if acyclic."""
    if M is None:
        M = distances(D)
    return min(M.dist[v][v] for v in range(D.n))


def is_m_free(D: Digraph, m: int) -> bool:
    return girth(D) > m


def strongly_connected_components(D: Digraph) -> list[tuple[int, ...]]:
    """Tarjan's algorithm, iterative.

    Components come out in reverse topological order of the condensation
    (sink components first). Roots and neighbors are visited in ascending
    order, so the result is deterministic; each component is sorted.
    """
    n = D.n
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[tuple[int, ...]] = []
    counter = 0

    for root in range(n):
        if index[root] != -1:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        work = [(root, iter_bits(D.out[root]))]
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, iter_bits(D.out[w])))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(tuple(sorted(comp)))
    return comps


def is_strongly_connected(D: Digraph) -> bool:
    return len(strongly_connected_components(D)) == 1


def induced_subgraph(D: Digraph, S: Iterable[int]) -> Digraph:
    """Subgraph induced by ``S``, relabeled by ascending original index."""
    members = sorted(set(S))
    if not members:
        raise EmptySet("vertex set must be non-empty")
    for s in members:
        _check_vertex(D, s)
    pos = {v: i for i, v in enumerate(members)}
    keep = to_mask(members)
    out = []
    for v in members:
        mask = 0
        for u in iter_bits(D.out[v] & keep):
            mask |= 1 << pos[u]
        out.append(mask)
    return Digraph(len(members), tuple(out))


# --- DG text format ---------------------------------------------------------


def to_dg(D: Digraph) -> str:
    edges = D.edges()
    lines = [DG_MAGIC, f"{D.n} {len(edges)}"]
    lines.extend(f"{u} {v}" for u, v in edges)
    return "\n".join(lines) + "\n"


def parse_dg(text: str) -> Digraph:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0] != DG_MAGIC:
        raise DGParseError(f"missing {DG_MAGIC!r} header")
    try:
        n, count = (int(x) for x in lines[1].split(" "))
    except (IndexError, ValueError) as exc:
        raise DGParseError("bad size line") from exc
    body = lines[2:]
    if len(body) != count:
        raise DGParseError(f"expected {count} edge lines, found {len(body)}")
    edges = []
    for line in body:
        parts = line.split(" ")
        if len(parts) != 2:
            raise DGParseError(f"bad edge line {line!r}")
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError as exc:
            raise DGParseError(f"bad edge line {line!r}") from exc
    return from_edges(n, edges)


def read_dg(path: str | Path) -> Digraph:
    return parse_dg(Path(path).read_text())


def write_dg(path: str | Path, D: Digraph) -> None:
    Path(path).write_text(to_dg(D), newline="\n")
