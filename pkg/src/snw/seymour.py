"""Seymour vertices, lambda-counterexamples, subset witnesses and reductions.

All predicates compare exact rationals: ``d2 < lam * d1`` is evaluated as
``d2 * lam.denominator < lam.numerator * d1`` on integers. Seymour vertices
and subset witnesses use the non-strict ``d1 <= d2``; lambda-counterexamples
use the strict ``d2 < lam * d1``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Literal, Union

from snw.digraph import (
    UNREACHABLE,
    Digraph,
    distances,
    first_two,
    girth,
    induced_subgraph,
    iter_bits,
    out_profile,
    set_first_two,
    set_kth_out_neighborhood,
    strongly_connected_components,
    to_mask,
    to_set,
)
from snw.errors import (
    EmptyFirstNeighborhood,
    NoCounterexampleComponent,
    NonPositiveLambda,
    NotACounterexample,
    TooLargeForExact,
)

# best_lambda of a digraph with a sink. Compares above every Fraction.
UNBOUNDED = math.inf

EXACT_LIMIT = 24

Rational = Union[Fraction, int, str]
Mode = Literal["exact", "greedy"]


def as_lambda(lam: Rational) -> Fraction:
    """Coerce ``lam`` to a positive exact rational ("3/2", 2, Fraction(3, 2))."""
    if isinstance(lam, float):
        raise TypeError("lambda must be exact; pass a Fraction, int or 'p/q' string")
    value = Fraction(lam)
    if value <= 0:
        raise NonPositiveLambda(f"lambda must be positive, got {value}")
    return value


def _below(d2: int, d1: int, lam: Fraction) -> bool:
    """``d2 < lam * d1`` in integers."""
    return d2 * lam.denominator < lam.numerator * d1


# --- profiles ---------------------------------------------------------------


@dataclass(frozen=True)
class NeighborhoodProfile:
    """Sizes of successive out- and in-neighborhoods, truncated at the last nonzero."""

    subject: frozenset[int]
    out_sizes: tuple[int, ...]
    in_sizes: tuple[int, ...]

    def d(self, k: int) -> int:
        return self.out_sizes[k - 1] if 0 < k <= len(self.out_sizes) else 0


def neighborhood_profile(D: Digraph, S: int | Iterable[int]) -> NeighborhoodProfile:
    """Profile of a vertex (``int``) or a vertex set (iterable)."""
    mask = 1 << S if isinstance(S, int) else to_mask(S)
    return NeighborhoodProfile(
        subject=to_set(mask),
        out_sizes=tuple(out_profile(D, mask)),
        in_sizes=tuple(out_profile(D.reverse(), mask)),
    )


# --- single-vertex predicates ------------------------------------------------


def seymour_vertices(D: Digraph) -> frozenset[int]:
    result = []
    for v in range(D.n):
        d1, d2 = first_two(D, v)
        if d1 <= d2:
            result.append(v)
    return frozenset(result)


def has_seymour_vertex(D: Digraph) -> bool:
    for v in range(D.n):
        d1, d2 = first_two(D, v)
        if d1 <= d2:
            return True
    return False


def best_lambda(D: Digraph) -> Fraction | float:
    """Largest ``d2/d1`` over vertices; ``UNBOUNDED`` when some vertex is a sink."""
    best = None
    for v in range(D.n):
        d1, d2 = first_two(D, v)
        if d1 == 0:
            return UNBOUNDED
        r = Fraction(d2, d1)
        if best is None or r > best:
            best = r
    return best


def is_lambda_counterexample(D: Digraph, lam: Rational) -> bool:
    lam = as_lambda(lam)
    return _is_cex(D, lam)


def _is_cex(D: Digraph, lam: Fraction) -> bool:
    for v in range(D.n):
        d1, d2 = first_two(D, v)
        if not _below(d2, d1, lam):
            return False
    return True


# --- subset searches ---------------------------------------------------------


def _subsets_by_size(n: int, sizes: Iterable[int]):
    for r in sizes:
        for combo in combinations(range(n), r):
            mask = 0
            for v in combo:
                mask |= 1 << v
            yield mask


def subset_seymour_search(D: Digraph, mode: Mode = "exact") -> frozenset[int] | None:
    """Find a non-empty proper ``S`` with ``d_1^+(S) <= d_2^+(S)``.

    ``exact`` sweeps all subsets by (size, lexicographic) and returns the
    first hit, or ``None`` if no subset qualifies. ``greedy`` grows sets from
    each singleton and returns ``None`` when inconclusive; anything it
    returns has been checked exactly.
    """
    n = D.n
    if n < 2:
        raise ValueError("subset search needs at least 2 vertices")
    if mode == "exact":
        if n > EXACT_LIMIT:
            raise TooLargeForExact(f"exact subset sweep limited to n <= {EXACT_LIMIT}, got {n}")
        for mask in _subsets_by_size(n, range(1, n)):
            d1, d2 = set_first_two(D, mask)
            if d1 <= d2:
                return to_set(mask)
        return None
    if mode == "greedy":
        return _greedy_subset(D)
    raise ValueError(f"unknown mode {mode!r}")


def _greedy_subset(D: Digraph) -> frozenset[int] | None:
    n = D.n
    full = (1 << n) - 1
    for s in range(n):
        mask = 1 << s
        while True:
            d1, d2 = set_first_two(D, mask)
            if d1 <= d2:
                # independent re-verification before reporting
                assert 0 < mask < full and _verify_subset_witness(D, mask)
                return to_set(mask)
            if mask.bit_count() >= n - 1:
                break
            best_gain, best_v = None, None
            for v in iter_bits(full & ~mask):
                e1, e2 = set_first_two(D, mask | 1 << v)
                if best_gain is None or e2 - e1 > best_gain:
                    best_gain, best_v = e2 - e1, v
            mask |= 1 << best_v
    return None


def _verify_subset_witness(D: Digraph, mask: int) -> bool:
    M = distances(D)
    members = to_set(mask)
    return len(set_kth_out_neighborhood(D, M, members, 1)) <= len(
        set_kth_out_neighborhood(D, M, members, 2)
    )


def subset_inequality_check(D: Digraph, lam: Rational) -> frozenset[int] | None:
    """Return ``None`` (PASS) if every ``S`` with ``N_1^+(S)`` non-empty has
    ``d_2^+(S) < lam * d_1^+(S)``; otherwise the first violating ``S``.

    The whole vertex set is part of the sweep.
    """
    lam = as_lambda(lam)
    n = D.n
    if n > EXACT_LIMIT:
        raise TooLargeForExact(f"subset sweep limited to n <= {EXACT_LIMIT}, got {n}")
    for mask in _subsets_by_size(n, range(1, n + 1)):
        d1, d2 = set_first_two(D, mask)
        if d1 and not _below(d2, d1, lam):
            return to_set(mask)
    return None


def lemma_T_witness(D: Digraph, S: Iterable[int], lam: Rational) -> frozenset[int] | None:
    """Largest ``T`` inside ``N_1^+(S)`` with ``lam*|T| > |N_1^+(T) \\ S|``.

    Maximality is by cardinality, ties broken lexicographically. Returns
    ``None`` when no non-empty ``T`` qualifies.
    """
    lam = as_lambda(lam)
    s_mask = to_mask(S)
    first = 0
    for s in iter_bits(s_mask):
        first |= D.out[s]
    if not first:
        raise EmptyFirstNeighborhood("N_1^+(S) is empty")
    members = list(iter_bits(first))
    if len(members) > EXACT_LIMIT:
        raise TooLargeForExact(f"|N_1^+(S)| = {len(members)} exceeds {EXACT_LIMIT}")
    for r in range(len(members), 0, -1):
        for combo in combinations(members, r):
            reach = 0
            for t in combo:
                reach |= D.out[t]
            if _below((reach & ~s_mask).bit_count(), r, lam):
                return frozenset(combo)
    return None


# --- reductions --------------------------------------------------------------


@dataclass(frozen=True)
class ReductionStep:
    kind: Literal["EdgeRemoval", "VertexRestriction"]
    # EdgeRemoval: the removed (u, v); VertexRestriction: kept vertices,
    # in the labels of the graph before the step.
    detail: tuple[int, ...]
    graph: Digraph


@dataclass
class ReductionTrace:
    lam: Fraction
    initial: Digraph
    final: Digraph | None = None
    steps: list[ReductionStep] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "lambda": {"num": self.lam.numerator, "den": self.lam.denominator},
            "initial": {"n": self.initial.n, "edges": self.initial.edges()},
            "final": {"n": self.final.n, "edges": self.final.edges()} if self.final else None,
            "steps": [{"kind": s.kind, "detail": list(s.detail)} for s in self.steps],
        }


def _edge_minimal(D: Digraph, lam: Fraction, trace: ReductionTrace) -> Digraph:
    restart = True
    while restart:
        restart = False
        for u, v in D.edges():
            candidate = D.without_edge(u, v)
            if _is_cex(candidate, lam):
                D = candidate
                trace.steps.append(ReductionStep("EdgeRemoval", (u, v), D))
                restart = True
                break
    return D


def edge_minimal_reduce(D: Digraph, lam: Rational) -> tuple[Digraph, ReductionTrace]:
    """Delete edges, first qualifying edge in ascending order with a restart
    after each deletion, until no single deletion keeps ``D`` a
    lambda-counterexample."""
    lam = as_lambda(lam)
    if not _is_cex(D, lam):
        raise NotACounterexample(f"digraph is not a {lam}-counterexample")
    trace = ReductionTrace(lam, D)
    trace.final = _edge_minimal(D, lam, trace)
    return trace.final, trace


def minimal_reduce(D: Digraph, lam: Rational) -> tuple[Digraph, ReductionTrace]:
    """Alternate edge-minimal reduction with restriction to a strongly
    connected component that is still a lambda-counterexample.

    The smallest such component wins, ties broken by the lexicographically
    least vertex tuple. Ends strongly connected and edge-minimal.
    """
    lam = as_lambda(lam)
    if not _is_cex(D, lam):
        raise NotACounterexample(f"digraph is not a {lam}-counterexample")
    trace = ReductionTrace(lam, D)
    while True:
        D = _edge_minimal(D, lam, trace)
        comps = strongly_connected_components(D)
        if len(comps) == 1:
            break
        candidates = []
        for comp in comps:
            sub = induced_subgraph(D, comp)
            if _is_cex(sub, lam):
                candidates.append((len(comp), comp, sub))
        if not candidates:
            raise NoCounterexampleComponent(
                f"no strongly connected component of a {lam}-counterexample is one itself"
            )
        _, comp, D = min(candidates, key=lambda c: (c[0], c[1]))
        trace.steps.append(ReductionStep("VertexRestriction", comp, D))
    trace.final = D
    return D, trace


# --- corollary and in-regular machinery ---------------------------------------


@dataclass(frozen=True)
class ShrinkageResult:
    profile: NeighborhoodProfile
    holds: bool
    union_size: int
    min_out_degree: int
    # only evaluated for lam == 1
    within_triangular_bound: bool | None


def shrinkage_profile(D: Digraph, v: int, lam: Rational) -> ShrinkageResult:
    """Check ``d_{k+1}^+(v) < lam * d_k^+(v)`` along the whole out-profile of ``v``."""
    lam = as_lambda(lam)
    prof = neighborhood_profile(D, v)
    sizes = prof.out_sizes
    holds = all(_below(prof.d(k + 1), sizes[k - 1], lam) for k in range(1, len(sizes) + 1))
    union = sum(sizes)
    delta = min(D.out_degree(u) for u in range(D.n))
    bound = union <= delta * (delta + 1) // 2 if lam == 1 else None
    return ShrinkageResult(prof, holds, union, delta, bound)


def in_regular_check(D: Digraph) -> int | None:
    degrees = {D.in_degree(v) for v in range(D.n)}
    return degrees.pop() if len(degrees) == 1 else None


def deficient_in_vertices(D: Digraph) -> frozenset[int]:
    """Vertices whose first in-neighborhood is larger than their second."""
    R = D.reverse()
    result = []
    for v in range(D.n):
        d1, d2 = first_two(R, v)
        if d1 > d2:
            result.append(v)
    return frozenset(result)


# --- reports -----------------------------------------------------------------


@dataclass(frozen=True)
class SeymourReport:
    n: int
    girth: int
    seymour_vertices: frozenset[int]
    # (v, d1, d2); the ratio is d2/d1, undefined (a sink) when d1 == 0
    ratios: tuple[tuple[int, int, int], ...]
    best_lambda: Fraction | float
    subset_witness: frozenset[int] | None

    def to_json(self) -> dict:
        if self.best_lambda == UNBOUNDED:
            best = "unbounded"
        else:
            best = {"num": self.best_lambda.numerator, "den": self.best_lambda.denominator}
        return {
            "n": self.n,
            "girth": "inf" if self.girth >= UNREACHABLE else self.girth,
            "seymour_vertices": sorted(self.seymour_vertices),
            "ratios": [{"v": v, "d1": d1, "d2": d2} for v, d1, d2 in self.ratios],
            "best_lambda": best,
            "subset_witness": None if self.subset_witness is None else sorted(self.subset_witness),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2) + "\n"


def analyze(D: Digraph) -> SeymourReport:
    ratios = tuple((v, *first_two(D, v)) for v in range(D.n))
    if D.n < 2:
        witness = None
    elif D.n <= EXACT_LIMIT:
        witness = subset_seymour_search(D, "exact")
    else:
        witness = subset_seymour_search(D, "greedy")
    return SeymourReport(
        n=D.n,
        girth=girth(D),
        seymour_vertices=seymour_vertices(D),
        ratios=ratios,
        best_lambda=best_lambda(D),
        subset_witness=witness,
    )
