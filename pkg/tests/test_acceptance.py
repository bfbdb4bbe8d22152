"""Acceptance gate: pinned configurations, one printed PASS/FAIL line each.

Every test pins its seeds and tolerances, times itself against its
wall-clock budget, and prints a single summary line to the real stdout
(bypassing capture) before asserting.  Two configurations are far too
expensive for their budgets on desk hardware (the fast-exclusion speed
cell and the gamma = 4 anomalous cell); those tests run the exact
configuration under a short cap, measure the per-replica cost, and fail
on the projected total.  The projections are conservative lower bounds,
so the failures are conclusive, not flaky.
"""

import math
import subprocess
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from rwre.estimators import classify_exponent, estimate_scaling, estimate_speed
from rwre.oracles import RegimeLabel, classify_regime, leaf_boundaries, reliable_steps
from rwre.params import ModelParams
from rwre.simulator import run
from rwre.sweep import MIN_SLICE_M, GridSpec, collect_slices, run_speed_sweep


def _report(num: int, ok: bool, detail: str) -> None:
    line = f"[criterion {num:02d}] {'PASS' if ok else 'FAIL'}  {detail}"
    print(line, file=sys.__stdout__, flush=True)


def _joint_se(a, b) -> float:
    return math.hypot(a.stderr, b.stderr)


def test_criterion_01_static_ballistic_speed():
    budget, target = 60.0, 0.105263
    t0 = time.monotonic()
    est = estimate_speed(run(ModelParams(p=0.7, rho=0.8, env="static"),
                             1 << 16, 2000, seed=1001))
    elapsed = time.monotonic() - t0
    tol = max(0.005, 4 * est.stderr)
    ok = abs(est.v_n - target) <= tol and elapsed < budget
    _report(1, ok, f"static (0.7,0.8): v={est.v_n:.6f} target={target} "
                   f"tol={tol:.4f} [{elapsed:.1f}s/{budget:.0f}s]")
    assert ok


def test_criterion_02_static_zero_speed_band():
    budget = 60.0
    t0 = time.monotonic()
    est = estimate_speed(run(ModelParams(p=0.9, rho=0.6, env="static"),
                             1 << 16, 2000, seed=1002))
    elapsed = time.monotonic() - t0
    ok = abs(est.v_n) <= 0.01 and elapsed < budget
    _report(2, ok, f"static (0.9,0.6): |v|={abs(est.v_n):.6f} <= 0.01 "
                   f"[{elapsed:.1f}s/{budget:.0f}s]")
    assert ok


def test_criterion_03_averaged_medium_limit():
    budget, target, cap = 600.0, 0.36, 120.0
    t0 = time.monotonic()
    isf = estimate_speed(run(ModelParams(p=0.8, rho=0.8, gamma=100.0, env="isf"),
                             1 << 12, 1000, seed=1003))
    isf_ok = abs(isf.v_n - target) <= 0.02
    sse_params = ModelParams(p=0.8, rho=0.8, gamma=100.0, env="sse")
    t1 = time.monotonic()
    chunks, done, aborted = collect_slices(sse_params, (12,), 1000, 1013, cap)
    probe = time.monotonic() - t1
    if aborted:
        per = probe / done[0]
        projection = 1000 * per
        sse_ok = False
        sse_note = (f"exclusion projects {projection / 3600:.1f}h for M=1000 "
                    f"({per:.1f}s/replica, {done[0]} done in {probe:.0f}s cap)")
    else:
        sse = estimate_speed(chunks[0])
        sse_ok = abs(sse.v_n - target) <= 0.02
        sse_note = f"exclusion v={sse.v_n:.4f}"
    elapsed = time.monotonic() - t0
    ok = isf_ok and sse_ok and elapsed < budget
    _report(3, ok, f"(0.8,0.8,g=100) n=2^12: spin-flip v={isf.v_n:.4f} "
                   f"(target {target}+-0.02); {sse_note} "
                   f"[{elapsed:.0f}s/{budget:.0f}s]")
    assert ok


#: 20-point validation grid, every point > 0.03 from both leaf boundaries.
VALIDATION_GRID = (
    (0.52, 0.70), (0.52, 0.80), (0.54, 0.85), (0.56, 0.90), (0.60, 0.95),
    (0.65, 0.62), (0.70, 0.65), (0.70, 0.75), (0.80, 0.75), (0.80, 0.85),
    (0.90, 0.85), (0.90, 0.95),
    (0.70, 0.55), (0.80, 0.55), (0.90, 0.55), (0.90, 0.65),
    (0.80, 0.50), (0.85, 0.50), (0.90, 0.50), (0.95, 0.50),
)

EXPECTED_SYMBOL = {
    RegimeLabel.DIFFUSIVE: "cross",
    RegimeLabel.SUPER_DIFFUSIVE: "dot",
    RegimeLabel.SUB_DIFFUSIVE: "square",
    RegimeLabel.SINAI_RECURRENT: "square",
}


def _distance_to_leaf_boundaries(p: float, rho: float) -> float:
    d = math.inf
    for k in range(2001):
        pp = 0.5 + (k / 2000) * 0.4999
        b = leaf_boundaries(pp)
        d = min(d, math.hypot(pp - p, b.rho_s2 - rho),
                math.hypot(pp - p, b.rho_s_half - rho))
    return d


def test_criterion_04_static_exponent_classification():
    budget = 1200.0
    t0 = time.monotonic()
    for p, rho in VALIDATION_GRID:
        assert _distance_to_leaf_boundaries(p, rho) > 0.03, (p, rho)
    hits, misses = 0, []
    for i, (p, rho) in enumerate(VALIDATION_GRID):
        params = ModelParams(p=p, rho=rho, env="static")
        chunks, done, _ = collect_slices(params, (10, 12, 14, 16), 1000,
                                         104_000 + i, 3600.0)
        est = estimate_scaling([c for c, d in zip(chunks, done)
                                if d >= MIN_SLICE_M])
        want = EXPECTED_SYMBOL[classify_regime(p, rho).label]
        got = classify_exponent(est.alpha_star)
        if got == want:
            hits += 1
        else:
            misses.append(f"({p},{rho}):{got}!={want}")
    elapsed = time.monotonic() - t0
    ok = hits >= 18 and elapsed < budget
    _report(4, ok, f"exponent classification {hits}/20 (need >= 18)"
                   f"{'; misses ' + ' '.join(misses) if misses else ''} "
                   f"[{elapsed:.0f}s/{budget:.0f}s]")
    assert ok


def test_criterion_05_spin_flip_diffusivity():
    budget = 300.0
    t0 = time.monotonic()
    params = ModelParams(p=0.7, rho=0.7, gamma=1.0, env="isf")
    chunks, done, _ = collect_slices(params, (10, 12, 14, 16), 1000, 1005, 3600.0)
    est = estimate_scaling([c for c, d in zip(chunks, done) if d >= MIN_SLICE_M])
    elapsed = time.monotonic() - t0
    ok = 0.45 <= est.alpha_star <= 0.55 and elapsed < budget
    _report(5, ok, f"spin-flip (0.7,0.7,g=1): alpha*={est.alpha_star:.4f} "
                   f"in [0.45,0.55] [{elapsed:.1f}s/{budget:.0f}s]")
    assert ok


def test_criterion_06_exclusion_anomalous_regimes():
    budget, cap = 1800.0, 150.0
    t0 = time.monotonic()
    # (a) gamma = 4 super-diffusive point: probe the dominant N=16 slice
    pa = ModelParams(p=0.8, rho=0.5, gamma=4.0, env="sse")
    t1 = time.monotonic()
    chunks_a, done_a, aborted_a = collect_slices(pa, (16,), 2, 1006, cap)
    probe = time.monotonic() - t1
    if aborted_a or probe > cap / 2:
        per = probe / max(done_a[0], 1)
        projection = 1000 * per  # N=16 slice alone, ignoring N in {10,12,14}
        a_ok = projection < budget
        a_note = (f"(0.8,0.5,4) N=16 slice alone projects "
                  f"{projection / 3600:.1f}h for M=1000 ({per:.0f}s/replica)")
    else:
        chunks_a, done_a, aborted_a = collect_slices(pa, (10, 12, 14, 16),
                                                     1000, 1006, budget)
        est_a = estimate_scaling([c for c, d in zip(chunks_a, done_a)
                                  if d >= MIN_SLICE_M])
        a_ok = not aborted_a and est_a.alpha_star > 0.55
        a_note = f"(0.8,0.5,4): alpha*={est_a.alpha_star:.4f} > 0.55"
    # (b) gamma = 0.01 sub-diffusive point: full configuration
    pb = ModelParams(p=0.76, rho=0.5, gamma=0.01, env="sse")
    chunks_b, done_b, aborted_b = collect_slices(pb, (10, 12, 14, 16), 1000,
                                                 1016, 1500.0)
    est_b = estimate_scaling([c for c, d in zip(chunks_b, done_b)
                              if d >= MIN_SLICE_M])
    b_ok = not aborted_b and est_b.alpha_star < 0.45
    elapsed = time.monotonic() - t0
    ok = a_ok and b_ok and elapsed < budget
    _report(6, ok, f"{a_note}; (0.76,0.5,0.01): alpha*={est_b.alpha_star:.4f} "
                   f"< 0.45 [{elapsed:.0f}s/{budget:.0f}s]")
    assert ok


def test_criterion_07_speed_monotonicity():
    budget = 900.0
    t0 = time.monotonic()
    rho_grid = GridSpec(p=(0.8,), rho=(0.5, 0.6, 0.7, 0.8, 0.9, 0.95),
                        gamma=(1.0,), env_kind="sse", n=1 << 10, M=1000,
                        master_seed=1007, budget_seconds=3600.0)
    rho_cells = run_speed_sweep(rho_grid, threads=4)
    gamma_grid = GridSpec(p=(0.8,), rho=(0.8,), gamma=(0.1, 1.0, 10.0, 100.0),
                          env_kind="sse", n=1 << 9, M=1000,
                          master_seed=1008, budget_seconds=3600.0)
    gamma_cells = run_speed_sweep(gamma_grid, threads=4)
    violations = []
    for name, cells in (("rho", rho_cells), ("gamma", gamma_cells)):
        ests = [c.estimate for c in cells]
        for a, b in zip(ests, ests[1:]):
            if b.v_n - a.v_n < -2 * _joint_se(a, b):
                violations.append(f"{name}: {a.v_n:.4f} -> {b.v_n:.4f}")
    elapsed = time.monotonic() - t0
    ok = not violations and elapsed < budget
    _report(7, ok, f"v non-decreasing along rho (6 pts) and gamma (4 pts)"
                   f"{'; violations ' + '; '.join(violations) if violations else ''} "
                   f"[{elapsed:.0f}s/{budget:.0f}s]")
    assert ok


def test_criterion_08_reflection_antisymmetry():
    budget = 300.0
    t0 = time.monotonic()
    n = 1 << 12
    lo = ModelParams(p=0.7, rho=0.2, gamma=1.0, env="sse")
    hi = ModelParams(p=0.7, rho=0.8, gamma=1.0, env="sse")
    with ThreadPoolExecutor(2) as pool:
        fa = pool.submit(run, lo, n, 2000, 1009)
        fb = pool.submit(run, hi, n, 2000, 1009)
        ea, eb = estimate_speed(fa.result()), estimate_speed(fb.result())
    mean_lo, mean_hi = ea.v_n * n, eb.v_n * n
    allow = 3 * n * _joint_se(ea, eb)
    elapsed = time.monotonic() - t0
    ok = abs(mean_lo + mean_hi) <= allow and elapsed < budget
    _report(8, ok, f"exclusion mirror means {mean_lo:.1f} vs {mean_hi:.1f}: "
                   f"|sum|={abs(mean_lo + mean_hi):.2f} <= {allow:.2f} "
                   f"[{elapsed:.0f}s/{budget:.0f}s]")
    assert ok


def test_criterion_09_reliability_horizon():
    t0 = time.monotonic()
    rs = reliable_steps(0.56, 0.9, 0.001)
    elapsed = time.monotonic() - t0
    ok = rs.log2_nbar is not None and abs(rs.log2_nbar - 305.5) <= 3 and elapsed < 1.0
    _report(9, ok, f"log2 nbar(0.56,0.9,0.001)={rs.log2_nbar:.1f} "
                   f"target 305.5+-3 [{elapsed * 1000:.0f}ms]")
    assert ok


def test_criterion_10_property_suites():
    budget = 600.0
    t0 = time.monotonic()
    root = Path(__file__).resolve().parents[1]
    res = subprocess.run(
        [sys.executable, "-m", "pytest", "tests", "-q",
         "--ignore=tests/test_acceptance.py", "-p", "no:cacheprovider"],
        cwd=root, capture_output=True, text=True, timeout=budget)
    elapsed = time.monotonic() - t0
    tail = res.stdout.strip().splitlines()[-1] if res.stdout.strip() else "no output"
    ok = res.returncode == 0 and elapsed < budget
    _report(10, ok, f"unit and property suites: {tail} "
                    f"[{elapsed:.0f}s/{budget:.0f}s]")
    assert ok
