"""Acceptance suite: one test per exit criterion, each printing a
[PASS]/[FAIL] line with the measured statistic and its threshold.

Heavy runs share module-scoped fixtures. Every tolerance is pinned here;
the base seed 20240801 was fixed before any acceptance run was executed.
Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines.
"""

import math
import time

import numpy as np
import pytest

from conftest import brute_force_isomorphic

from alignlab.automorphisms import (
    EdgePartition,
    build_automorphism,
    generate_family,
    verify_family,
)
from alignlab.components import decompose, small_tree_cutoff
from alignlab.experiments import ExperimentConfig, run_experiment
from alignlab.graphs import intersect, relabel
from alignlab.model import ModelParams, sample_instance
from alignlab.serialize import replicates_csv_text
from alignlab.theory import giant_fraction
from alignlab.trees import all_labeled_trees, build_census, canonical_tree_code

BASE_SEED = 20240801


def report_line(ok: bool, label: str, detail: str) -> bool:
    print(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
    return ok


# ---------------------------------------------------------------------------
# shared heavy runs


@pytest.fixture(scope="module")
def poisson_run():
    cfg = ExperimentConfig(
        experiment="poisson-delta", n=100_000, lam=0.8, s=0.5,
        replicates=2500, base_seed=BASE_SEED, p=2,
    )
    t0 = time.perf_counter()
    report = run_experiment(cfg)
    return report, time.perf_counter() - t0


@pytest.fixture(scope="module")
def fix_runs():
    out = {}
    t0 = time.perf_counter()
    for label, lam, s in (("subcritical", 0.8, 0.5), ("supercritical", 4.0, 0.5)):
        cfg = ExperimentConfig(
            experiment="fix-concentration", n=100_000, lam=lam, s=s,
            replicates=50, base_seed=BASE_SEED, p=4,
        )
        out[label] = run_experiment(cfg)
    return out, time.perf_counter() - t0


@pytest.fixture(scope="module")
def census_runs():
    out = {}
    for mu in (0.5, 1.0):
        cfg = ExperimentConfig(
            experiment="census-concentration", n=100_000, lam=mu, s=1.0,
            replicates=100, base_seed=BASE_SEED,
        )
        out[mu] = run_experiment(cfg)
    return out


@pytest.fixture(scope="module")
def coverage_run():
    cfg = ExperimentConfig(
        experiment="small-tree-coverage", n=100_000, lam=2.0, s=1.0,
        replicates=100, base_seed=BASE_SEED,
    )
    return run_experiment(cfg)


@pytest.fixture(scope="module")
def common_fixed_run():
    cfg = ExperimentConfig(
        experiment="common-fixed-bounds", n=100_000, lam=0.4, s=1.0,
        replicates=100, base_seed=BASE_SEED, p=6,
    )
    return run_experiment(cfg)


@pytest.fixture(scope="module")
def map_runs():
    t0 = time.perf_counter()
    flat = run_experiment(
        ExperimentConfig(
            experiment="map-oracle", n=8, lam=0.8, s=0.5,
            replicates=500, base_seed=BASE_SEED,
        )
    )
    control = run_experiment(
        ExperimentConfig(
            experiment="map-oracle", n=8, lam=2.0, s=1.0,
            replicates=200, base_seed=BASE_SEED, condition="connected-asymmetric",
        )
    )
    return flat, control, time.perf_counter() - t0


# ---------------------------------------------------------------------------
# criteria


def test_giant_fraction_solver():
    grid = [1.1, 1.5, 2.0, 3.0, 5.0]
    giant_fraction(2.0)  # warm up
    best = math.inf
    for _ in range(3):
        t0 = time.perf_counter()
        values = [giant_fraction(mu) for mu in grid]
        best = min(best, time.perf_counter() - t0)
    residual = max(abs(math.exp(-mu * c) - (1.0 - c)) for mu, c in zip(grid, values))
    monotone = all(a < b for a, b in zip(values, values[1:]))
    zero_below = all(giant_fraction(mu) == 0.0 for mu in (0.4, 1.0))
    ok = report_line(
        residual <= 1e-12 and monotone and zero_below and best < 1e-3,
        "giant-fraction solver",
        f"max residual {residual:.2e} (tol 1e-12), monotone {monotone}, "
        f"zero at mu<=1 {zero_below}, {best * 1e3:.3f} ms for 5 solves (< 1 ms)",
    )
    assert ok


def test_tree_code_oracle():
    t0 = time.perf_counter()
    expected_counts = {1: 1, 2: 1, 3: 1, 4: 2, 5: 3, 6: 6, 7: 11}
    counts_ok = True
    equivalence_ok = True
    by_k = {}
    for k in range(1, 8):
        coded = [
            (canonical_tree_code(range(k), edges)[0], edges)
            for edges in all_labeled_trees(k)
        ]
        by_k[k] = coded
        counts_ok &= len({code for code, _ in coded}) == expected_counts[k]
    # small sizes: every pair checked directly against the brute-force oracle
    for k in (1, 2, 3, 4, 5):
        coded = by_k[k]
        for i in range(len(coded)):
            for j in range(i + 1, len(coded)):
                same = coded[i][0] == coded[j][0]
                iso = brute_force_isomorphic(coded[i][1], coded[j][1], k)
                equivalence_ok &= same == iso
    # larger sizes: isomorphism is transitive, so checking every member
    # against its class representative plus all cross-representative pairs
    # covers every pair
    for k in (6, 7):
        reps = {}
        for code, edges in by_k[k]:
            if code in reps:
                equivalence_ok &= brute_force_isomorphic(edges, reps[code], k)
            else:
                reps[code] = edges
        rep_list = list(reps.values())
        for i in range(len(rep_list)):
            for j in range(i + 1, len(rep_list)):
                equivalence_ok &= not brute_force_isomorphic(rep_list[i], rep_list[j], k)
    elapsed = time.perf_counter() - t0
    ok = report_line(
        counts_ok and equivalence_ok and elapsed < 10.0,
        "tree-code oracle",
        f"distinct codes per size 1..7 = 1,1,1,2,3,6,11: {counts_ok}; "
        f"code equality == brute-force isomorphism: {equivalence_ok}; "
        f"{elapsed:.1f} s (< 10 s)",
    )
    assert ok


def test_automorphism_exactness():
    t0 = time.perf_counter()
    n = 10_000
    cutoff = small_tree_cutoff(n)
    failures = 0
    for lam in (0.8, 4.0):
        params = ModelParams(n=n, lam=lam, s=0.5)
        for i in range(100):
            inst = sample_instance(params, BASE_SEED + i + int(lam * 1000))
            part = decompose(inst.intersection, cutoff)
            census = build_census(part, inst.intersection)
            block = build_automorphism(census, BASE_SEED + 7 * i)
            if relabel(inst.intersection, block.sigma) != inst.intersection:
                failures += 1
                continue
            fixed = np.flatnonzero(part.fixed_mask)
            if not np.array_equal(block.sigma.forward[fixed], fixed):
                failures += 1
    elapsed = time.perf_counter() - t0
    ok = report_line(
        failures == 0 and elapsed < 30.0,
        "automorphism exactness",
        f"200 instances at n=10000, lam in {{0.8, 4}}: {failures} violations; "
        f"{elapsed:.1f} s (< 30 s)",
    )
    assert ok


def test_family_edge_preservation():
    inst = sample_instance(ModelParams(n=100_000, lam=0.8, s=0.5), BASE_SEED)
    family = generate_family(inst, 6, BASE_SEED + 1)
    base = inst.intersection.num_edges
    recomputed = [
        intersect(relabel(inst.blue_graph, b.sigma), inst.red_graph).num_edges
        for b in family
    ]
    exact = all(e == base for e in recomputed)
    report = verify_family(family, inst, slack=0.05)
    ok = report_line(
        exact and all(report.edges_preserved),
        "family shared-edge preservation",
        f"6 accepted members, shared edges {base}, recomputed {recomputed} (zero tolerance)",
    )
    assert ok


def test_extra_double_edge_poisson_calibration(poisson_run):
    report, elapsed = poisson_run
    agg = report.aggregates
    mean_ok = report.test("mean_delta_rel_err").passed
    gof_ok = report.test("gof_chi_square").passed
    corr_ok = report.test("max_abs_pair_corr").passed
    ok = report_line(
        mean_ok and gof_ok and corr_ok and elapsed < 600.0,
        "extra-double-edge calibration",
        f"5000 draws: mean {agg['mean_delta']:.4f} vs rate {agg['rate_predicted']:.4f} "
        f"(tol 20%); chi-square {agg['gof_stat']:.2f} < {agg['gof_threshold']:.2f}; "
        f"|corr| {agg['max_abs_pair_corr']:.4f} <= 0.05; {elapsed:.0f} s (< 600 s)",
    )
    assert ok


def test_family_acceptance_rate(poisson_run):
    report, _ = poisson_run
    agg = report.aggregates
    stat = abs(agg["zero_rate"] - agg["zero_rate_predicted"])
    bound = 3.0 * agg["zero_rate_se"]
    ok = report_line(
        report.test("zero_rate_abs_err").passed,
        "family acceptance rate",
        f"P(no extra double edge) {agg['zero_rate']:.4f} vs {agg['zero_rate_predicted']:.4f}, "
        f"|diff| {stat:.4f} <= 3 SE = {bound:.4f} over {agg['draws']} draws",
    )
    assert ok


def test_pairwise_fix_concentration(fix_runs):
    runs, elapsed = fix_runs
    legs = []
    for label, report in runs.items():
        agg = report.aggregates
        passed = report.test("fix_frac_max_abs_dev").passed
        legs.append(
            report_line(
                passed,
                f"pairwise fix concentration ({label})",
                f"max |Fix/n - {agg['target_fraction']:.5f}| = {agg['max_abs_dev']:.5f} "
                f"(tol 0.05) over {agg['pairs']} pairs",
            )
        )
    legs.append(report_line(elapsed < 900.0, "pairwise fix runtime",
                            f"{elapsed:.0f} s (< 900 s)"))
    assert all(legs)


def test_census_concentration(census_runs):
    legs = []
    for mu, report in census_runs.items():
        for cls in report.aggregates["classes"]:
            label = f"mu={mu} k={cls['k']}"
            floor_ok = report.test(f"{cls['column']}_floor_min_ratio").passed
            mean_ok = report.test(f"{cls['column']}_mean_rel_err").passed
            var_ok = report.test(f"{cls['column']}_var_rel_err").passed
            legs.append(
                report_line(
                    floor_ok and mean_ok and var_ok,
                    f"census concentration ({label})",
                    f"min/floor {cls['min_x'] / cls['floor']:.3f} (>= 0.9); "
                    f"mean/alpha {cls['mean_x'] / cls['alpha']:.3f}, "
                    f"var/alpha {cls['var_x'] / cls['alpha']:.3f} (each within 20%)",
                )
            )
    assert all(legs)


def test_vertex_coverage(coverage_run):
    report = coverage_run
    agg = report.aggregates
    c = agg["target_fraction"]
    giant_ok = report.test("giant_frac_abs_err").passed
    oversize_ok = report.test("oversize_frac").passed
    small_ok = report.test("small_tree_frac_abs_err").passed
    ok = report_line(
        giant_ok and oversize_ok and small_ok,
        "vertex coverage",
        f"giant {agg['mean_giant_frac']:.4f} vs {c:.4f} (tol 0.02); "
        f"oversize {agg['mean_oversize_frac']:.4f} (<= 0.02); "
        f"small-tree {agg['mean_small_tree_frac']:.4f} vs {1 - c:.4f} (tol 0.03)",
    )
    assert ok


def test_common_fixed_edge_bounds(common_fixed_run):
    report = common_fixed_run
    agg = report.aggregates
    quad_ok = report.test("quad_common_fixed_max").passed
    triple_ok = report.test("triple_common_fixed_max").passed
    pair_ok = report.test("pair_common_fixed_max").passed
    ok = report_line(
        quad_ok and triple_ok and pair_ok,
        "common fixed edge bounds",
        f"max quad {agg['max_quad']:.0f} (= 0); max triple {agg['max_triple']:.0f} "
        f"(<= n^0.2 = {agg['triple_bound']:.0f}); max pair {agg['max_pair']:.0f} "
        f"(<= n^1.2 = {agg['pair_bound']:.0f})",
    )
    assert ok


def test_matching_oracle_flatness(map_runs):
    flat, control, elapsed = map_runs
    agg = flat.aggregates
    flat_ok = flat.test("mean_overlap").passed and flat.test("multi_frac").passed
    ctl = control.aggregates
    control_ok = (
        control.test("noiseless_min_overlap").passed
        and control.test("noiseless_max_multiplicity").passed
    )
    legs = [
        report_line(
            flat_ok,
            "matching oracle flatness",
            f"mean overlap {agg['mean_overlap']:.3f} (<= 3); ties in "
            f"{agg['multi_frac'] * 100:.0f}% of replicates (>= 60%)",
        ),
        report_line(
            control_ok,
            "matching oracle noiseless control",
            f"min overlap {ctl['min_overlap']:.0f} (= 8); max multiplicity "
            f"{ctl['max_multiplicity']:.0f} (= 1)",
        ),
        report_line(elapsed < 300.0, "matching oracle runtime", f"{elapsed:.0f} s (< 300 s)"),
    ]
    assert all(legs)


def test_output_determinism():
    outputs = []
    for name, kw in (
        ("poisson-delta", {"p": 2, "replicates": 60, "n": 2000}),
        ("small-tree-coverage", {"replicates": 20, "n": 2000}),
    ):
        cfg = ExperimentConfig(
            experiment=name, lam=0.8, s=0.5, base_seed=BASE_SEED, **kw
        )
        first = replicates_csv_text(run_experiment(cfg)).encode()
        second = replicates_csv_text(run_experiment(cfg)).encode()
        outputs.append(first == second)
    ok = report_line(
        all(outputs),
        "replicate table determinism",
        "two runs of each experiment produced byte-identical replicate tables",
    )
    assert ok
