"""Exit criteria. Each test prints one ``[PASS]``/``[FAIL]`` line.

Run alone with ``pytest tests/test_acceptance.py -v -s``.
"""

import math
import time
from contextlib import contextmanager

import numpy as np
import pytest

from kldesign import Design, Objective, OptimizerConfig, SeededRng, exchange_run
from kldesign.bench import run_bench
from kldesign.criteria import discrepancy_centered_l2, discrepancy_l2, coverage, minimum_spanning_tree, mst_stats
from kldesign.entropy import (
    bandwidth,
    entropy_mc,
    entropy_nn,
    epanechnikov_alpha,
    kernel_support_probability,
    update_after_exchange,
)
from conftest import grid_5x5
from test_criteria import brute_force_mst_weight, centered_l2_mc, l2_star_mc

# kernel-support probability table, d = 1..10, as printed (two significant digits)
SUPPORT_TABLE = [3.3e-2, 1.5e-2, 1.1e-2, 8.3e-3, 7.0e-3, 6.1e-3, 5.5e-3, 5.0e-3, 4.6e-3, 4.3e-3]
BENCH_SEED = 2024


@contextmanager
def criterion(capsys, label, limit_s=None):
    start = time.perf_counter()
    ok = False
    try:
        yield
        elapsed = time.perf_counter() - start
        if limit_s is not None:
            assert elapsed < limit_s, f"runtime {elapsed:.1f}s exceeds {limit_s}s"
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {label} ({elapsed:.2f}s)")


def test_c01a_bandwidth_values(capsys):
    with criterion(capsys, "C1a bandwidth(30,3)=0.177573 and bandwidth(100,10)=0.207760 within 1e-6", 1):
        assert abs(bandwidth(30, 3) - 0.177573) <= 1e-6, bandwidth(30, 3)
        assert abs(bandwidth(100, 10) - 0.207760) <= 1e-6, bandwidth(100, 10)


def test_c01b_alpha_exact(capsys):
    with criterion(capsys, "C1b alpha(1..3) = 3/4, 2/pi, 15/(8 pi) exactly", 1):
        assert epanechnikov_alpha(1) == 3 / 4
        assert epanechnikov_alpha(2) == 2 / math.pi
        assert epanechnikov_alpha(3) == 15 / (8 * math.pi)


def test_c01c_support_table(capsys):
    with criterion(capsys, "C1c kernel-support probability table d=1..10 at displayed precision", 1):
        for d, shown in enumerate(SUPPORT_TABLE, start=1):
            assert float(f"{kernel_support_probability(d):.1e}") == shown, d


def test_c02_alpha_monte_carlo(capsys):
    with criterion(capsys, "C2 alpha(4) in 0.61+-0.02, alpha(10) in 2.38+-0.10", 30):
        assert abs(epanechnikov_alpha(4, SeededRng(4)) - 0.61) <= 0.02
        assert abs(epanechnikov_alpha(10, SeededRng(10)) - 2.38) <= 0.10


def test_c03_estimator_oracles(capsys):
    with criterion(capsys, "C3 NN hand values and incremental == rebuild within 1e-9", 5):
        assert abs(entropy_nn(Design([[0.0], [1.0]]))[0] - 1.270363) <= 1e-6
        assert abs(entropy_nn(Design([[0.0], [0.25], [1.0]]))[0] - 0.943420) <= 1e-6
        base = Design(SeededRng(3).generator().random((30, 3)))
        for build, rebuild in ((lambda d: entropy_mc(d)[1], lambda d: entropy_mc(d)[0]),
                               (lambda d: entropy_nn(d)[1], lambda d: entropy_nn(d)[0])):
            design, state = base, build(base)
            gen = SeededRng(30).generator()
            for _ in range(100):
                i, y = int(gen.integers(30)), gen.random(3)
                state, value = update_after_exchange(state, design, i, y)
                design = design.replace(i, y)
                assert abs(value - rebuild(design)) <= 1e-9


def test_c04_nn_unbiasedness(capsys):
    with criterion(capsys, "C4 NN mean entropy, d=1 n=1000, 100 reps in 0+-0.05; |mean| shrinks from n=50", 30):
        def mean_entropy(n):
            return np.mean([entropy_nn(Design(SeededRng(s, (n,)).generator().random((n, 1))))[0]
                            for s in range(100)])
        big, small = mean_entropy(1000), mean_entropy(50)
        assert abs(big) <= 0.05, big
        assert abs(big) < abs(small), (big, small)


def test_c05_kde_bias_trend(capsys):
    with criterion(capsys, "C5 KDE-MC mean entropy, d=3, negative and nondecreasing in n=30,100,300", 60):
        means = []
        for n in (30, 100, 300):
            means.append(np.mean([entropy_mc(Design(SeededRng(s, (n,)).generator().random((n, 3))))[0]
                                  for s in range(50)]))
        assert all(m < 0 for m in means), means
        assert means[0] <= means[1] <= means[2], means


def test_c06_discrepancy_oracles(capsys):
    with criterion(capsys, "C6 discrepancies: {0.5} gives 1/12; closed forms within 3 SE of 1e6-sample MC", 60):
        p = Design([[0.5]])
        assert abs(discrepancy_l2(p) ** 2 - 1 / 12) <= 1e-12
        assert abs(discrepancy_centered_l2(p) ** 2 - 1 / 12) <= 1e-12
        for seed in range(5):
            pts = SeededRng(seed, (6,)).generator().random((10, 2))
            samples = SeededRng(seed, (60,)).generator().random((1_000_000, 2))
            mean, se = l2_star_mc(pts, samples)
            assert abs(discrepancy_l2(Design(pts)) ** 2 - mean) <= 3 * se
            mean, se = centered_l2_mc(pts, samples)
            assert abs(discrepancy_centered_l2(Design(pts)) ** 2 - mean) <= 3 * se


def test_c07_coverage_grid(capsys):
    with criterion(capsys, "C7 cov(5x5 grid) <= 1e-12"):
        assert coverage(grid_5x5()) <= 1e-12


def test_c08_mst_oracle(capsys):
    with criterion(capsys, "C8 MST weight == exhaustive minimum (20 designs, n<=6); {0,0.5,1} -> (0.5, 0)"):
        for seed in range(20):
            gen = SeededRng(seed, (8,)).generator()
            n, d = int(gen.integers(2, 7)), int(gen.integers(1, 4))
            pts = gen.random((n, d))
            weight = sum(w for *_, w in minimum_spanning_tree(pts))
            assert math.isclose(weight, brute_force_mst_weight(pts), rel_tol=1e-12)
        assert mst_stats(Design([[0.0], [0.5], [1.0]])) == (0.5, 0.0)


def test_c09_optimizer_contract(capsys):
    with criterion(capsys, "C9 traces strictly increasing on accepts, bit-reproducible, <= 1000 d proposals"):
        for kind in ("entropy-mc-gauss", "entropy-nn", "mindist"):
            for d in (1, 2, 3, 5):
                n = 10 * d
                for seed in range(3):
                    initial = Design(SeededRng(seed, (d,)).generator().random((n, d)))
                    cfg = OptimizerConfig(seed=SeededRng(seed, (9, d)))
                    design, trace = exchange_run(initial, Objective(kind), cfg)
                    again, trace2 = exchange_run(initial, Objective(kind), cfg)
                    assert design == again and trace == trace2
                    assert trace.proposals <= 1000 * d
                    prev = trace.initial_objective
                    for acc, value in zip(trace.accepted, trace.objective):
                        assert (value > prev) if acc else (value == prev)
                        prev = value


def _timed_bench(*args):
    start = time.perf_counter()
    report = run_bench(*args)
    return report, time.perf_counter() - start


@pytest.fixture(scope="module")
def bench_d3():
    return _timed_bench(["random", "lhs", "mcgauss", "ppv", "maximin"], 30, 3, 20, BENCH_SEED)


@pytest.fixture(scope="module")
def bench_d10():
    return _timed_bench(["mcgauss", "ppv", "maximin"], 100, 10, 5, BENCH_SEED)


def test_c10_headline_comparison(capsys, bench_d3):
    bench_d3, elapsed = bench_d3
    with criterion(capsys, f"C10 d=3: cov and mindist of mcgauss and ppv beat random and lhs (bench {elapsed:.1f}s)"):
        assert elapsed < 600
        assert len(bench_d3.rows) == 100 and all(r.error is None for r in bench_d3.rows)
        m = bench_d3.mean
        for kl in ("mcgauss", "ppv"):
            for base in ("random", "lhs"):
                assert m(kl, "cov") < m(base, "cov"), (kl, base)
                assert m(kl, "mindist") > m(base, "mindist"), (kl, base)


def test_c11_mst_direction(capsys, bench_d3):
    bench_d3, _ = bench_d3
    with criterion(capsys, "C11 d=3: mst_mean(mcgauss) > random and mst_std(mcgauss) < random"):
        m = bench_d3.mean
        assert m("mcgauss", "mst_mean") > m("random", "mst_mean")
        assert m("mcgauss", "mst_std") < m("random", "mst_std")


def test_c12_dimension_ten(capsys, bench_d10):
    bench_d10, elapsed = bench_d10
    with criterion(capsys, f"C12 d=10 n=100: mindist(mcgauss or ppv) >= 0.9 mindist(maximin) (bench {elapsed:.1f}s)"):
        assert elapsed < 1800
        m = bench_d10.mean
        best_kl = max(m("mcgauss", "mindist"), m("ppv", "mindist"))
        assert best_kl >= 0.9 * m("maximin", "mindist")
