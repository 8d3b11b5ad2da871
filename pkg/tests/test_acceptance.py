"""Acceptance gate: every advertised guarantee at its stated tolerance.

Each test runs one criterion end to end via the shared verification suites
and prints a single PASS/FAIL line (run with ``pytest -s`` to see them all).
"""

import math
import time

import numpy as np
import pytest

from robandit.harness.verify import SUITES, binomial_slack

SEED = 20250808


def run_suite(name, budget_s, criterion):
    start = time.time()
    result = SUITES[name](np.random.default_rng(SEED))
    elapsed = time.time() - start
    status = "PASS" if result.passed else "FAIL"
    print(f"ACCEPTANCE {criterion}: {status} ({name}, {elapsed:.1f}s) {result.detail()}")
    assert result.passed, result.detail()
    assert elapsed < budget_s, f"{name} exceeded its {budget_s}s runtime budget"
    return result


def test_01_estimator_oracle_equivalence():
    """Empirical median/MAD match a brute-force sort oracle on 10^4 arrays."""
    run_suite("moment-oracle", 5.0, 1)


def test_02_tail_shift_tightness():
    """Uniform tail shift moves the observable median by exactly the bias."""
    result = run_suite("tail-shift", 5.0, 2)
    assert result.stats["defect"] <= 0.005 * 2.0


def test_03_median_coverage():
    """Failure rate of the median interval stays within delta plus slack."""
    result = run_suite("coverage-median", 120.0, 3)
    assert result.stats["n"] == 2397


def test_04_malicious_tightness():
    """The coupled attack defeats tighter radii at the critical sample size."""
    result = run_suite("malicious-tightness", 60.0, 4)
    assert result.stats["n"] == math.ceil(0.5 * 0.1**-2 * math.log(10.0))


def test_05_mad_coverage():
    """Failure rate of the MAD interval stays within delta plus slack."""
    run_suite("coverage-mad", 180.0, 5)


def test_06_uniform_exploration_pac():
    """Uniform exploration is (alpha, delta)-PAC with deterministic pulls."""
    result = run_suite("pac-simple", 120.0, 6)
    assert result.stats["pulls_deterministic"]
    assert result.stats["total_pulls"] == 9828


@pytest.mark.slow
def test_07_racing_pac_and_scaling():
    """Racing run is PAC at both gaps; halving the gap roughly quadruples pulls."""
    result = run_suite("pac-succelim", 300.0, 7)
    assert 3.0 <= result.stats["ratio"] <= 6.0


def test_08_confidence_budget_identity():
    """Round confidence shares sum back to delta within the tail bound."""
    run_suite("delta-budget", 1.0, 8)


def test_09_lifting_identity():
    """Liftings reproduce their observable laws, gaps and flag marginals."""
    result = run_suite("lifting-identity", 30.0, 9)
    assert result.stats["cdf_sup"] <= 1e-12
    assert result.stats["gap_defect"] <= 1e-12


def test_10_kl_formula():
    """Smoothed-Bernoulli KL: reference value, identity and nonnegativity."""
    result = run_suite("kl", 1.0, 10)
    assert abs(result.stats["kl_05_025"] - 0.0719205) <= 1e-6


def test_11_quality_guarantee():
    """Fresh draws from the selected arm clear certified thresholds."""
    run_suite("quality", 180.0, 11)


def test_12_structural_invariants():
    """Second-order MAD bound, sandwich, shift-Lipschitz, family closures."""
    start = time.time()
    names = ["m4-bound", "sandwich", "lipschitz", "family-closure", "quantile-galois"]
    results = [SUITES[name](np.random.default_rng(SEED + i)) for i, name in enumerate(names)]
    elapsed = time.time() - start
    ok = all(r.passed for r in results)
    print(f"ACCEPTANCE 12: {'PASS' if ok else 'FAIL'} ({'+'.join(names)}, {elapsed:.1f}s)")
    for r in results:
        assert r.passed, f"{r.name}: {r.detail()}"
    assert elapsed < 30.0


def test_13_reproducibility():
    """Identical config and seed give byte-identical CSVs at parallelism 1 and 8."""
    run_suite("reproducibility", 60.0, 13)


def test_slack_helper_sane():
    assert binomial_slack(0.1, 1000) == pytest.approx(3 * math.sqrt(0.09 / 1000))
