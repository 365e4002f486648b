"""Acceptance suite: one test per criterion, one pass/fail line per criterion.

Run with `pytest -v tests/test_acceptance.py` to get the per-criterion lines.
Two criteria are expected to fail honestly, and their assertion messages
carry the analysis:

* criterion 1 — the recomputed height-zero row of the p = 3 small-weight
  table disagrees with the published row in exactly one cell (weight 13:
  computed 729, printed 648).  The computed value is the digit product
  k(9,1) * k(27,1) = 9 * 81; no product of the available slot counts gives
  648, so the reproduction stands and the mismatch is reported, not patched.
* criterion 3 — the certified bound checks find one failure outside the
  declared exception band: the uniform decay bound at (b, w) = (6, 5), where
  the slot count k(6,5) = 918 exceeds b^(w - 0.47 w / ln b) ~ 741.8.  The
  declared band stops at b = 5, so (6, 5) is surfaced as a finding.

Everything else must pass, inside the stated time budgets.
"""

from __future__ import annotations

import time

from blockaudit.audit import SweepConfig, report_json, report_ok, sweep
from blockaudit.certify import LEMMA_IDS, failures_outside_exceptions, verify_bounds
from blockaudit.counts import block_character_count
from blockaudit.exceptional import root_height_count, small_rank_invariants
from blockaudit.oracle import oracle_report
from blockaudit.reductive import sl_invariants
from blockaudit.symmetric import TABLE_P3_REFERENCE, reproduce_table_p3
from blockaudit.wreath import (
    DetKernelDefect,
    WreathTower,
    defect_class_count,
    wreath_class_count,
)

_SWEEP_CACHE: dict[str, object] = {}


def _default_sweep_runs():
    """Two full default sweeps, cached so criteria 4 and 5 share the work."""
    if not _SWEEP_CACHE:
        config = SweepConfig.default()
        start = time.perf_counter()
        first = sweep(config)
        _SWEEP_CACHE["seconds"] = time.perf_counter() - start
        _SWEEP_CACHE["first"] = report_json(first)
        _SWEEP_CACHE["summary"] = first["summary"]
        _SWEEP_CACHE["second"] = report_json(sweep(config))
    return _SWEEP_CACHE


def _timed(fn):
    start = time.perf_counter()
    value = fn()
    return value, time.perf_counter() - start


def _sl_triple():
    inv = sl_invariants(5, 5, 1, 1)
    return (inv.k.value, inv.k0.value, inv.l.value)


def _small_rank_pair():
    inv, k_defect, _ = small_rank_invariants("2F4-l3", 1)
    return (inv.k.value, k_defect.value)


def test_criterion_1_golden_values():
    """Golden values: closed forms reproduce every pinned number exactly."""
    goldens = [
        ("block count at (5,1,2,5)", lambda: block_character_count(5, 1, 2, 5), 254),
        ("block count at (5,1,1,5)", lambda: block_character_count(5, 1, 1, 5), 510),
        ("determinant-one triple at n=ell=5", _sl_triple, (126, 10, 11)),
        ("determinant-one count at n=ell=7",
         lambda: sl_invariants(7, 7, 1, 1).k.value, 1821),
        ("wreath class count (7,7)", lambda: wreath_class_count(7, 7), 117697),
        (
            "det-kernel class count (m=5, ell=5)",
            lambda: oracle_report("detkernel:5,5,1")["class_count"],
            149,
        ),
        ("rank-2 twisted family at a=1", _small_rank_pair, (14, 11)),
    ]
    for label, fn, want in goldens:
        got, seconds = _timed(fn)
        assert got == want, f"golden value {label}: got {got}, pinned {want}"
        assert seconds < 1.0, f"golden value {label} took {seconds:.2f}s (budget 1s)"

    rows, seconds = _timed(reproduce_table_p3)
    assert seconds < 1.0, f"small-weight table took {seconds:.2f}s (budget 1s)"
    computed_k0 = tuple(r.k0 for r in rows)
    published_k0 = TABLE_P3_REFERENCE["k0"]
    ok = computed_k0 == published_k0
    print(f"[{'PASS' if ok else 'FAIL'}] criterion 1: closed-form goldens all "
          f"exact; published height-zero row "
          f"{'matches' if ok else 'differs at weight 13 (computed 729, printed 648)'}")
    # Expected honest failure: one cell of the published height-zero row.
    assert ok, (
        "height-zero row differs from the published table in "
        f"{sum(1 for a, b in zip(computed_k0, published_k0) if a != b)} cell(s): "
        f"computed {computed_k0}, published {published_k0}.  The digits of 13 "
        "in base 3 are (1, 1, 1), so the digit formula gives "
        "k(3,1) * k(9,1) * k(27,1) = 3 * 9 * 27 = 729 against a printed 648; "
        "648 is not a product of the available slot counts (it would need a "
        "factor of 8 or 24 where the counts are 3, 9, 27), so the "
        "recomputation stands and the published cell appears to be a typo.  "
        "Every other cell of all three rows is bit-exact, including the "
        "same-shaped products at weights 4 and 17."
    )


def test_criterion_2_oracle_equivalence():
    """Brute-force enumeration agrees with every closed form it can reach."""
    start = time.perf_counter()
    # Closed-form class counts vs enumeration, all orders <= 200000.
    tower_points = [(2, 2, 1), (2, 2, 2), (3, 3, 1), (5, 5, 1)]
    for m, ell, levels in tower_points:
        tower = WreathTower(m, ell, levels)
        report = oracle_report(f"tower:{m},{ell},{levels}")
        assert report["order"] <= 200000
        assert tower.class_count() == report["class_count"], (
            f"tower({m},{ell},{levels}): closed form {tower.class_count()} "
            f"vs enumerated {report['class_count']}"
        )
        derived = tower.derived_class_count(cap=200000)
        assert derived.value <= report["derived_class_count"], (
            f"tower({m},{ell},{levels}): derived bound {derived} exceeds "
            f"enumerated {report['derived_class_count']}"
        )
    kernel_points = [(3, 3, 1, 11), (9, 3, 2, 35), (5, 5, 1, 149)]
    for m, ell, e, want in kernel_points:
        model = DetKernelDefect(WreathTower(m, ell, 1), e)
        closed = defect_class_count(model, cap=None)
        report = oracle_report(f"detkernel:{m},{ell},{e}")
        assert report["order"] <= 200000
        assert closed.value == report["class_count"] == want, (
            f"detkernel({m},{ell},{e}): closed form {closed.value}, "
            f"enumerated {report['class_count']}, pinned {want}"
        )
    seconds = time.perf_counter() - start
    instances = len(tower_points) + len(kernel_points)
    assert instances >= 6
    assert seconds < 60, f"oracle suite took {seconds:.1f}s (budget 60s)"
    print(f"[PASS] criterion 2: oracle equivalence on {instances} instances "
          f"({seconds:.1f}s)")


def test_criterion_3_certified_bound_suites():
    """Certified checks: every suite runs, failures are the declared ones."""
    start = time.perf_counter()
    all_results = {lemma: verify_bounds(lemma) for lemma in LEMMA_IDS}
    seconds = time.perf_counter() - start
    assert seconds < 120, f"bound suites took {seconds:.1f}s (budget 120s)"

    for lemma, results in all_results.items():
        undecided = [r for r in results if r.holds is None]
        assert not undecided, f"{lemma}: {len(undecided)} undecided points"

    # The one genuine failure the block-count decay bound is known to have.
    block_fails = [r for r in all_results["L5.4"] if r.holds is False]
    assert [dict(r.point) for r in block_fails] == [
        {"ell": 5, "a": 1, "d": 1, "w": 5}
    ], f"block-count decay failures changed: {[dict(r.point) for r in block_fails]}"
    assert block_fails[0].exception

    outside = {
        lemma: failures_outside_exceptions(results)
        for lemma, results in all_results.items()
        if failures_outside_exceptions(results)
    }
    ok = outside == {}
    print(f"[{'PASS' if ok else 'FAIL'}] criterion 3: suites ran clean in "
          f"{seconds:.1f}s; "
          + ("all failures inside declared exception sets" if ok else
             "one certified failure OUTSIDE the declared exception sets"))
    # Expected honest failure: one point outside the declared exception band.
    assert ok, (
        "certified failures outside the declared exception sets: "
        f"{ {lemma: [dict(r.point) for r in rows] for lemma, rows in outside.items()} }. "
        "The uniform decay bound's declared exceptions stop at b = 5 (the two "
        "families b=4, w<=10 and b=5, w<=7), but at (b, w) = (6, 5) the slot "
        "count k(6,5) = 918 exceeds the decayed budget "
        "6^(5 - 0.47*5/ln 6) ~ 741.8.  The failure is certified by integer "
        "arithmetic (918^100 * e_lo^235 > 6^500 with a rational enclosure of "
        "e) and the count 918 itself is confirmed by explicit enumeration of "
        "6-tuples of partitions with total size 5, so the exception band as "
        "stated is too narrow: b = 6 clears the bound only from w = 6 on."
    )


def test_criterion_4_sweeps_no_violations():
    """Full default audit grid: no violated case, no impossible count."""
    runs = _default_sweep_runs()
    summary = runs["summary"]
    seconds = runs["seconds"]
    assert seconds < 300, f"default sweep took {seconds:.1f}s (budget 300s)"
    assert summary["violations"] == 0, f"violations in default sweep: {summary}"
    assert summary["brauer-flags"] == 0, f"impossible counts flagged: {summary}"
    assert summary["cases"] == 8196
    print(f"[PASS] criterion 4: {summary['cases']} cases, zero violations "
          f"({seconds:.1f}s)")


def test_criterion_5_determinism():
    """Two identical sweep runs serialize to byte-identical JSON."""
    runs = _default_sweep_runs()
    first, second = runs["first"], runs["second"]
    assert isinstance(first, str) and first == second, (
        "default sweep is not deterministic: reports differ "
        f"(lengths {len(first)} vs {len(second)})"
    )
    print(f"[PASS] criterion 5: byte-identical reports ({len(first)} bytes)")


def test_criterion_6_root_height_counts():
    """Height-2..3 root counts reach the 2r - 3 floor on every series."""
    start = time.perf_counter()
    checked = 0
    for series, ranks in [
        ("A", range(2, 13)),
        ("B", range(2, 13)),
        ("C", range(2, 13)),
        ("D", range(3, 13)),
        ("E", range(6, 9)),
        ("F", [4]),
        ("G", [2]),
    ]:
        for rank in ranks:
            count = root_height_count(series, rank)
            assert count >= 2 * rank - 3, (
                f"{series}{rank}: height-window count {count} < {2 * rank - 3}"
            )
            checked += 1
    seconds = time.perf_counter() - start
    assert seconds < 1.0, f"root counts took {seconds:.2f}s (budget 1s)"
    print(f"[PASS] criterion 6: {checked} rank/series points ({seconds:.2f}s)")
