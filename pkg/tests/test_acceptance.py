"""Acceptance criteria 1-9. Each test records one PASS/FAIL line that is
printed in the terminal summary."""

import json
import random
from fractions import Fraction

import pytest

from conftest import ACCEPTANCE_LINES, GOLDEN
from snw.bounds import csy_root, liang_xu_root, snc_bound_root
from snw.campaigns import (
    strip_timing,
    verify_inregular,
    verify_lemma,
    verify_mfree,
    verify_snc,
    verify_subset,
)
from snw.digraph import from_edges, read_dg, to_dg
from snw.enumeration import decode, encode, random_m_free, random_oriented, universe_size
from snw.seymour import analyze

LAMBDAS = (Fraction(3, 2), Fraction(2), Fraction(3))
_lemma_runs: dict = {}


def record(number, ok, detail):
    ACCEPTANCE_LINES.append(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
    return ok


def lemma_run(lam):
    if lam not in _lemma_runs:
        _lemma_runs[lam] = verify_lemma(lam, n_exhaustive=5, samples=1000, n_sample_max=8, seed=0)
    return _lemma_runs[lam]


def test_criterion_1_bound_reproduction():
    targets = [
        ("snc(2)", snc_bound_root(2), 0.6180),
        ("snc(3)", snc_bound_root(3), 0.7548),
        ("snc(4)", snc_bound_root(4), 0.8191),
        ("lx(3)", liang_xu_root(3), 0.6823),
        ("lx(4)", liang_xu_root(4), 0.7007),
        ("csy", csy_root(), 0.6573),
    ]
    misses = [f"{name}={got:.6f} vs {want} (|diff|={abs(got - want):.1e})"
              for name, got, want in targets if abs(got - want) > 5e-5]
    detail = "all six within 5e-5" if not misses else "outside 5e-5: " + "; ".join(misses)
    assert record(1, not misses, detail), detail


def test_criterion_2_dominance():
    bad = [m for m in range(3, 1001) if not snc_bound_root(m) > liang_xu_root(m)]
    below_csy = snc_bound_root(2) < csy_root()
    ok = not bad and below_csy
    assert record(2, ok, f"m in 3..1000 failures={bad[:5]}, snc(2) < csy: {below_csy}")


def test_criterion_3_exhaustive_snc():
    reports = [verify_snc(n, tier="full") for n in range(2, 6)]
    checked = sum(r.counts["graphs_checked"] for r in reports)
    failures = sum(r.failures for r in reports)
    ok = checked == 3 + 27 + 729 + 59049 and failures == 0 and all(r.exit_code == 0 for r in reports)
    assert record(3, ok, f"{checked} graphs, {failures} without a Seymour vertex")


def test_criterion_4_subset_equivalence():
    reports = [verify_subset(n, tier="full") for n in range(2, 6)]
    total = lambda key: sum(r.counts[key] for r in reports)  # noqa: E731
    ok = (
        total("graphs_checked") == 59808
        and total("subset_failures") == 0
        and total("singleton_crosscheck_failures") == 0
        and total("singleton_witnesses") == total("graphs_with_seymour_vertex") > 0
    )
    assert record(
        4, ok,
        f"{total('graphs_checked')} graphs, {total('subset_failures')} without witness, "
        f"{total('singleton_witnesses')}/{total('graphs_with_seymour_vertex')} singleton re-checks",
    )


@pytest.mark.slow
def test_criterion_5_lemma():
    parts, ok = [], True
    for lam in LAMBDAS:
        r = lemma_run(lam)
        c = r.counts
        bad = c["reduction_violations"] + c["lemma_violations"]
        ok &= bad == 0 and c["counterexamples"] > 0
        parts.append(
            f"lam={lam}: {c['counterexamples']} reduced, {bad} violations, "
            f"{c['samples_without_counterexample']}/1000 samples drew no counterexample"
        )
    assert record(5, ok, "; ".join(parts))


@pytest.mark.slow
def test_criterion_6_corollary_chain():
    parts, ok = [], True
    for lam in LAMBDAS:
        c = lemma_run(lam).counts
        ok &= c["corollary_violations"] == 0 and c["counterexamples"] > 0
        parts.append(f"lam={lam}: {c['corollary_violations']} violations")
    assert record(6, ok, "; ".join(parts))


def test_criterion_7_in_regular():
    r = verify_inregular(n_max=6)
    ok = r.failures == 0 and r.counts["graphs_checked"] > 0
    assert record(7, ok, f"{r.counts['graphs_checked']} in-regular graphs, {r.failures} without witness")


@pytest.mark.slow
def test_criterion_8_m_free():
    parts, ok = [], True
    for m in (3, 4, 5):
        r = verify_mfree(m, n=12, samples=10_000, seed=0, exhaustive_max=5)
        ok &= r.failures == 0
        parts.append(f"m={m}: {r.counts['graphs_checked']} graphs, {r.failures} violations")
    assert record(8, ok, "; ".join(parts))


def test_criterion_9_determinism(tmp_path):
    problems = []
    rng = random.Random(9)
    for n in range(1, 7):
        for _ in range(10_000):
            x = rng.randrange(universe_size(n))
            if encode(decode(n, x)) != x:
                problems.append(f"roundtrip n={n} x={x}")
                break

    for n in range(2, 6):
        serial = strip_timing(verify_snc(n, jobs=1).to_json())
        parallel = strip_timing(verify_snc(n, jobs=4).to_json())
        if serial != parallel:
            problems.append(f"jobs 1 vs 4 differ at n={n}")

    c3 = from_edges(3, [(0, 1), (1, 2), (2, 0)])
    t3 = from_edges(3, [(0, 1), (0, 2), (1, 2)])
    goldens = [
        ("c3_report.json", lambda: analyze(c3).dumps()),
        ("t3_report.json", lambda: analyze(t3).dumps()),
        ("random_oriented_n8_p0.5_s42.dg", lambda: to_dg(random_oriented(8, 0.5, 42))),
        ("random_m_free_n10_p0.4_m3_s7.dg", lambda: to_dg(random_m_free(10, 0.4, 3, 7))),
    ]
    for name, make in goldens:
        expected = (GOLDEN / name).read_text()
        if not (make() == make() == expected):
            problems.append(f"golden {name} unstable")
    json.loads((GOLDEN / "c3_report.json").read_text())
    read_dg(GOLDEN / "random_oriented_n8_p0.5_s42.dg")

    assert record(9, not problems, "; ".join(problems) or "roundtrips, jobs 1 == 4, goldens stable"), problems
