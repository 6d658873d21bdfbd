"""Verification campaigns over exhaustive and sampled digraph pools.

A campaign is split into work units (index ranges of an exhaustive sweep,
or ranges of sample numbers). Units are independent, run serially or in a
process pool, and merge in unit order, so the report does not depend on the
degree of parallelism. Sample ``i`` of a campaign seeded with ``seed`` uses
PCG64 seed ``seed + i``.
"""

from __future__ import annotations

import json
import logging
import os
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Iterable, Iterator

from snw.bounds import snc_bound_root
from snw.digraph import (
    Digraph,
    distances,
    first_two,
    is_strongly_connected,
    set_kth_out_neighborhood,
    write_dg,
)
from snw.enumeration import (
    GeneratorConfig,
    canonical_form,
    chunk_bounds,
    check_universe,
    encode,
    iter_graphs,
    random_m_free_sample,
    random_oriented,
)
from snw.errors import UniverseTooLarge
from snw.seymour import (
    _is_cex,
    as_lambda,
    edge_minimal_reduce,
    has_seymour_vertex,
    minimal_reduce,
    seymour_vertices,
    shrinkage_profile,
    subset_inequality_check,
    subset_seymour_search,
)

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_WITNESS = 2

GUARD_BAND = 1e-9
FULL_TIER_MAX_N = 5
SAMPLE_TIER_MAX_N = 10
LEMMA_SAMPLE_ATTEMPTS = 1000
LEMMA_DENSITIES = (0.6, 0.8, 1.0)


def default_jobs() -> int:
    return max(1, int(os.environ.get("SNW_JOBS", "1")))


@dataclass
class CampaignReport:
    command: str
    config: dict
    universe: str
    counts: Counter = field(default_factory=Counter)
    witnesses: list[dict] = field(default_factory=list)
    incomplete: bool = False
    elapsed_ms: int = 0

    @property
    def failures(self) -> int:
        return sum(v for k, v in self.counts.items() if k.endswith(("failures", "violations")))

    @property
    def exit_code(self) -> int:
        return EXIT_WITNESS if self.failures else EXIT_OK

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "config": self.config,
            "universe": self.universe,
            "counts": dict(sorted(self.counts.items())),
            "witnesses": self.witnesses,
            "incomplete": self.incomplete,
            "elapsed_ms": self.elapsed_ms,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2) + "\n"


@dataclass
class UnitResult:
    counts: Counter = field(default_factory=Counter)
    # (kind, n, index, graph)
    witnesses: list[tuple[str, int, int, Digraph]] = field(default_factory=list)


# --- per-graph checks ---------------------------------------------------------


def check_snc(D: Digraph, res: UnitResult, index: int, lam=None) -> None:
    res.counts["graphs_checked"] += 1
    if not has_seymour_vertex(D):
        res.counts["seymour_failures"] += 1
        res.witnesses.append(("snc", D.n, index, D))


def check_subset(D: Digraph, res: UnitResult, index: int, lam=None) -> None:
    res.counts["graphs_checked"] += 1
    if D.n < 2:
        return
    witness = subset_seymour_search(D, "exact")
    if witness is None:
        res.counts["subset_failures"] += 1
        res.witnesses.append(("subset", D.n, index, D))
        return
    sv = seymour_vertices(D)
    if not sv:
        return
    res.counts["graphs_with_seymour_vertex"] += 1
    # a Seymour vertex must give a singleton witness; verify it through the
    # distance-matrix definitions rather than the mask fast path
    v = min(sv)
    M = distances(D)
    d1 = len(set_kth_out_neighborhood(D, M, [v], 1))
    d2 = len(set_kth_out_neighborhood(D, M, [v], 2))
    if not (d1 <= d2 and len(witness) == 1):
        res.counts["singleton_crosscheck_failures"] += 1
        res.witnesses.append(("singleton", D.n, index, D))
    else:
        res.counts["singleton_witnesses"] += 1


def check_mfree(D: Digraph, res: UnitResult, index: int, lam: Fraction) -> None:
    res.counts["graphs_checked"] += 1
    for v in range(D.n):
        d1, d2 = first_two(D, v)
        if d2 >= lam * d1:
            return
    res.counts["bound_violations"] += 1
    res.witnesses.append(("mfree", D.n, index, D))


def check_lemma(D: Digraph, res: UnitResult, index: int, lam: Fraction) -> None:
    """Reduce a lambda-counterexample and test the subset inequality and the
    shrinking chain on the result. Non-counterexamples are skipped."""
    res.counts["graphs_seen"] += 1
    if not _is_cex(D, lam):
        return
    res.counts["counterexamples"] += 1
    R, trace = minimal_reduce(D, lam)
    ok = (
        is_strongly_connected(R)
        and _is_cex(R, lam)
        and edge_minimal_reduce(R, lam)[0] == R
        and all(_is_cex(step.graph, lam) for step in trace.steps)
    )
    if not ok:
        res.counts["reduction_violations"] += 1
        res.witnesses.append(("reduction", D.n, index, D))
        return
    res.counts[f"reduced_n{R.n}"] += 1
    if subset_inequality_check(R, lam) is not None:
        res.counts["lemma_violations"] += 1
        res.witnesses.append(("lemma", R.n, encode(R) if R.n <= 8 else index, R))
    if not all(shrinkage_profile(R, v, lam).holds for v in range(R.n)):
        res.counts["corollary_violations"] += 1
        res.witnesses.append(("corollary", R.n, encode(R) if R.n <= 8 else index, R))


def check_inregular(D: Digraph, res: UnitResult, index: int, lam=None) -> None:
    res.counts["graphs_checked"] += 1
    if D.n >= 2 and subset_seymour_search(D, "exact") is None:
        res.counts["subset_failures"] += 1
        res.witnesses.append(("inregular", D.n, index, D))


# --- work units -----------------------------------------------------------------


@dataclass(frozen=True)
class Unit:
    """One independent slice of a campaign.

    ``kind`` is ``"sweep"`` (graphs of ``config`` with index in ``[lo, hi)``)
    or ``"sample"`` (sample numbers ``lo .. hi - 1``).
    """

    check: str
    kind: str
    lo: int
    hi: int
    config: GeneratorConfig | None = None
    params: tuple = ()
    lam: Fraction | None = None


def _sample_graphs(unit: Unit) -> Iterator[tuple[int, Digraph]]:
    if unit.check == "lemma":
        yield from _lemma_samples(unit)
        return
    generator, n, p, m, seed = unit.params
    for i in range(unit.lo, unit.hi):
        if generator == "m_free":
            yield i, random_m_free_sample(n, p, m, seed + i).graph
        else:
            yield i, random_oriented(n, p, seed + i)


def _lemma_samples(unit: Unit) -> Iterator[tuple[int, Digraph]]:
    # sample i: n cycles through 3..n_max, p steps through LEMMA_DENSITIES
    # once per full cycle of sizes; the
    # first lambda-counterexample among seeds seed + i*ATTEMPTS + t is used
    n_max, seed = unit.params
    lam = unit.lam
    sizes = list(range(3, n_max + 1))
    for i in range(unit.lo, unit.hi):
        n = sizes[i % len(sizes)]
        p = LEMMA_DENSITIES[(i // len(sizes)) % len(LEMMA_DENSITIES)]
        for t in range(LEMMA_SAMPLE_ATTEMPTS):
            D = random_oriented(n, p, seed + i * LEMMA_SAMPLE_ATTEMPTS + t)
            if _is_cex(D, lam):
                yield i, D
                break


def run_unit(unit: Unit) -> UnitResult:
    res = UnitResult()
    if unit.kind == "sweep":
        graphs: Iterable[tuple[int, Digraph]] = iter_graphs(unit.config, unit.lo, unit.hi)
    else:
        graphs = _sample_graphs(unit)
    check = CHECKS[unit.check]
    for index, D in graphs:
        check(D, res, index, unit.lam)
    if unit.check == "lemma" and unit.kind == "sample":
        res.counts["samples_without_counterexample"] += (unit.hi - unit.lo) - res.counts["graphs_seen"]
    return res


CHECKS: dict[str, Callable[..., None]] = {
    "snc": check_snc,
    "subset": check_subset,
    "mfree": check_mfree,
    "lemma": check_lemma,
    "inregular": check_inregular,
}


def execute(units: list[Unit], jobs: int = 1) -> tuple[UnitResult, bool]:
    """Run units and merge in order. Returns ``(merged, incomplete)``;
    an interrupt keeps whatever finished."""
    merged = UnitResult()
    incomplete = False
    try:
        if jobs <= 1:
            for unit in units:
                _merge(merged, run_unit(unit))
        else:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                for r in pool.map(run_unit, units):
                    _merge(merged, r)
    except KeyboardInterrupt:
        incomplete = True
    return merged, incomplete


def _merge(total: UnitResult, part: UnitResult) -> None:
    total.counts.update(part.counts)
    total.witnesses.extend(part.witnesses)


def _sweep_units(check: str, config: GeneratorConfig, jobs: int, lam: Fraction | None = None) -> list[Unit]:
    size = check_universe(config)
    return [
        Unit(check, "sweep", lo, hi, config, lam=lam)
        for lo, hi in chunk_bounds(size, max(4, jobs * 4))
    ]


def _sample_units(check: str, samples: int, jobs: int, params: tuple, lam: Fraction | None = None) -> list[Unit]:
    if samples <= 0:
        return []
    return [Unit(check, "sample", lo, hi, None, params, lam) for lo, hi in chunk_bounds(samples, max(4, jobs * 4))]


def _finish(
    command: str,
    config: dict,
    universe: str,
    units: list[Unit],
    jobs: int,
    out_dir: str | Path | None,
) -> CampaignReport:
    start = time.perf_counter()
    merged, incomplete = execute(units, jobs)
    report = CampaignReport(command, config, universe, merged.counts, incomplete=incomplete)
    report.witnesses = record_witnesses(merged.witnesses, out_dir)
    report.elapsed_ms = round((time.perf_counter() - start) * 1000)
    return report


def record_witnesses(
    witnesses: list[tuple[str, int, int, Digraph]], out_dir: str | Path | None
) -> list[dict]:
    """Deduplicate witnesses up to isomorphism (n <= 8) and write DG files."""
    seen = set()
    result = []
    for kind, n, index, D in sorted(witnesses, key=lambda w: (w[0], w[1], w[2])):
        key = (kind, n, canonical_form(D) if n <= 8 else index)
        if key in seen:
            continue
        seen.add(key)
        entry = {"kind": kind, "n": n, "index": index, "canonical": key[2], "file": None}
        if out_dir is not None:
            path = Path(out_dir) / f"{kind}-{n}-{key[2]}.dg"
            path.parent.mkdir(parents=True, exist_ok=True)
            write_dg(path, D)
            entry["file"] = str(path)
        result.append(entry)
    return result


# --- campaigns -----------------------------------------------------------------


def _exhaustive_config(n: int, tier: str) -> GeneratorConfig:
    if tier == "full" and n > FULL_TIER_MAX_N:
        raise UniverseTooLarge(f"tier 'full' covers n <= {FULL_TIER_MAX_N}; use 'extended' for n = 6", 3 ** (n * (n - 1) // 2))
    if tier == "extended" and n != 6:
        raise UniverseTooLarge("tier 'extended' is n = 6 only", 3 ** (n * (n - 1) // 2))
    return GeneratorConfig(n)


def _units_for_tier(check: str, n: int, tier: str, samples: int, seed: int, p: float, jobs: int) -> tuple[list[Unit], str]:
    if tier == "sample":
        if n > SAMPLE_TIER_MAX_N:
            raise UniverseTooLarge(f"tier 'sample' covers n <= {SAMPLE_TIER_MAX_N}", 3 ** (n * (n - 1) // 2))
        units = _sample_units(check, samples, jobs, ("oriented", n, p, None, seed))
        return units, f"{samples} random oriented graphs, n={n}, p={p}, seed={seed}"
    config = _exhaustive_config(n, tier)
    return _sweep_units(check, config, jobs), f"all 3^{n * (n - 1) // 2} labeled oriented graphs on {n} vertices"


def verify_snc(
    n: int,
    tier: str = "full",
    samples: int = 0,
    seed: int = 0,
    p: float = 0.5,
    jobs: int = 1,
    out_dir: str | Path | None = None,
) -> CampaignReport:
    units, universe = _units_for_tier("snc", n, tier, samples, seed, p, jobs)
    config = {"n": n, "tier": tier, "samples": samples, "seed": seed, "p": p}
    return _finish("verify-snc", config, universe, units, jobs, out_dir)


def verify_subset(
    n: int,
    tier: str = "full",
    samples: int = 0,
    seed: int = 0,
    p: float = 0.5,
    jobs: int = 1,
    out_dir: str | Path | None = None,
) -> CampaignReport:
    units, universe = _units_for_tier("subset", n, tier, samples, seed, p, jobs)
    config = {"n": n, "tier": tier, "samples": samples, "seed": seed, "p": p}
    return _finish("verify-subset", config, universe, units, jobs, out_dir)


def verify_mfree(
    m: int,
    n: int,
    samples: int = 0,
    seed: int = 0,
    p: float = 0.3,
    exhaustive_max: int = FULL_TIER_MAX_N,
    jobs: int = 1,
    out_dir: str | Path | None = None,
) -> CampaignReport:
    """Every m-free graph on up to ``min(n, exhaustive_max)`` vertices, plus
    ``samples`` random m-free graphs on ``n`` vertices, must have a vertex
    with ``d2 >= (root_m - GUARD_BAND) * d1``."""
    root = snc_bound_root(m)
    lam = Fraction(root - GUARD_BAND)
    units: list[Unit] = []
    top = min(n, exhaustive_max)
    for k in range(1, top + 1):
        units += _sweep_units("mfree", GeneratorConfig(k, m=m, filters={"m_free"}), jobs, lam)
    units += _sample_units("mfree", samples, jobs, ("m_free", n, p, m, seed), lam)
    universe = f"all {m}-free labeled graphs on <= {top} vertices; {samples} random {m}-free graphs, n={n}, p={p}, seed={seed}"
    config = {"m": m, "n": n, "samples": samples, "seed": seed, "p": p, "bound": root, "guard": GUARD_BAND}
    return _finish("verify-mfree", config, universe, units, jobs, out_dir)


def verify_lemma(
    lam,
    n_exhaustive: int = FULL_TIER_MAX_N,
    samples: int = 1000,
    n_sample_max: int = 8,
    seed: int = 0,
    jobs: int = 1,
    out_dir: str | Path | None = None,
) -> CampaignReport:
    """Reduce every lambda-counterexample in the pools and check the subset
    inequality and the shrinking chain on each reduct."""
    lam = as_lambda(lam)
    units: list[Unit] = []
    for k in range(1, n_exhaustive + 1):
        units += _sweep_units("lemma", GeneratorConfig(k), jobs, lam)
    units += _sample_units("lemma", samples, jobs, (n_sample_max, seed), lam)
    universe = (
        f"all labeled oriented graphs on <= {n_exhaustive} vertices; "
        f"{samples} random {lam}-counterexamples on 3..{n_sample_max} vertices, seed={seed}"
    )
    config = {"lambda": str(lam), "n": n_exhaustive, "samples": samples, "n_sample_max": n_sample_max, "seed": seed}
    return _finish("verify-lemma", config, universe, units, jobs, out_dir)


def verify_inregular(
    n_max: int = 6,
    jobs: int = 1,
    out_dir: str | Path | None = None,
) -> CampaignReport:
    units: list[Unit] = []
    for k in range(2, n_max + 1):
        units += _sweep_units("inregular", GeneratorConfig(k, filters={"in_regular"}), jobs)
    universe = f"all in-regular labeled oriented graphs on 2..{n_max} vertices"
    return _finish("verify-inregular", {"n": n_max}, universe, units, jobs, out_dir)


def strip_timing(doc: dict[str, Any]) -> dict[str, Any]:
    return {k: v for k, v in doc.items() if k != "elapsed_ms"}
