"""Acceptance criteria, one test per criterion.

Each test records a ``[criterion X] PASS/FAIL`` line with the measured
values; the lines are echoed in the terminal summary of every pytest run.
"""

import argparse
import io
import itertools
import math
import statistics
import time

import numpy as np
import pytest

from hiercoord.baselines import (
    equilibrium_check,
    exhaustive_optimum,
    ladder_gains,
    max_utilities,
    prop2_certificate,
)
from hiercoord.cli import cmd_gamma_star, main
from hiercoord.coordination import (
    delta_mcsc,
    delta_ocsc,
    ordering_search,
    outcome_from_assignment,
    pi_csc,
    quality_ratios,
    random_coordination,
)
from hiercoord.game import EfficiencyModel, best_response, compute_sinr, compute_utilities, solve_gamma_star
from hiercoord.montecarlo import ScenarioSpec, generate_channels, run_scenario, sweep

from conftest import ACCEPTANCE_LINES, grid_best_single_carrier, make_config, random_instances

pytestmark = pytest.mark.slow

MODEL = EfficiencyModel(100)
DELTA = 1e-3


def record(tag, ok, detail):
    ACCEPTANCE_LINES.append(f"[criterion {tag}] {'PASS' if ok else 'FAIL'}  {detail}")
    return ok


def utility_ratios(cfg, gains, outcome):
    utils = compute_utilities(cfg, gains, outcome.allocation, MODEL).utilities
    return utils / max_utilities(cfg, gains, MODEL)


def property_instances():
    """The 500 shared instances of the property suite: N = K in 2..6."""
    return list(random_instances(500, [2, 3, 4, 5, 6], seed=5005))


# --- 1, 2 -------------------------------------------------------------------------------


def test_criterion_1_gamma_star():
    out = io.StringIO()
    assert main(["gamma-star", "--order", "100"], out=out) == 0
    fields = dict(line.split() for line in out.getvalue().splitlines())
    gamma, gamma_db = float(fields["gamma_star"]), float(fields["gamma_star_db"])

    timings = []
    for _ in range(200):
        solve_gamma_star.cache_clear()
        start = time.perf_counter()
        cmd_gamma_star(argparse.Namespace(order=100), io.StringIO())
        timings.append(time.perf_counter() - start)
    runtime = statistics.median(timings)

    ok = abs(gamma - 6.47) <= 0.005 and abs(gamma_db - 8.1) <= 0.05 and runtime < 1e-3
    detail = f"gamma*={gamma:.6f} ({gamma_db:.4f} dB), median uncached runtime {runtime * 1e3:.4f} ms"
    assert record("1", ok, detail), detail


def test_criterion_2_threshold():
    threshold = 1.0 / (1.0 + MODEL.gamma_star)
    ok = abs(threshold - 0.13) <= 0.005 and threshold == MODEL.equilibrium_threshold
    detail = f"1/(1+gamma*)={threshold:.6f}"
    assert record("2", ok, detail), detail


# --- 3, 4 ---------------------------------------------------------------------------------


def test_criterion_3_spectral_efficiency():
    target = 2.90
    rng = np.random.default_rng(3003)
    worst = 0.0
    outcomes = 0
    for trial in range(1000):
        n = int(rng.integers(1, 9))
        cfg = make_config(n, n)
        gains = generate_channels(n, n, rng.integers(2**63), fading="rayleigh")
        runs = [
            delta_ocsc(cfg, gains, MODEL),
            delta_mcsc(cfg, gains, MODEL)[0],
            random_coordination(cfg, gains, MODEL, trial),
        ]
        if n <= 6:
            opt = exhaustive_optimum(cfg, gains, MODEL)
            runs.append(outcome_from_assignment(cfg, gains, opt.best_assignment, MODEL, "exhaustive"))
        for outcome in runs:
            sinr = compute_sinr(cfg, gains, outcome.allocation).sinr
            per_user = np.log2(1.0 + sinr).sum(axis=1)
            worst = max(worst, float(np.abs(per_user - target).max()))
            outcomes += 1
    ok = worst <= 0.01
    detail = f"{outcomes} coordinated outcomes, max |SE - 2.90| = {worst:.5f} bits/s/Hz"
    assert record("3", ok, detail), detail


def test_criterion_4_exact_equilibrium_rate():
    start = time.perf_counter()
    rates = {}
    for n in (5, 10, 20):
        spec = ScenarioSpec(n, trials=2000, seed=4004, algorithms=("ocsc",))
        trials = run_scenario(spec)
        exact = [t.results["ocsc"].exact_equilibrium for t in trials]
        above = [t.results["ocsc"].alpha_star >= MODEL.equilibrium_threshold for t in trials]
        rates[n] = (sum(exact) / len(exact), sum(above) / len(above))
    elapsed = time.perf_counter() - start
    # reference only: the same protocol with exponential power gains
    reference = {}
    for n in (5, 10, 20):
        spec = ScenarioSpec(n, trials=2000, seed=4004, algorithms=("ocsc",), fading="exponential")
        trials = run_scenario(spec)
        reference[n] = sum(t.results["ocsc"].exact_equilibrium for t in trials) / len(trials)
    ok = all(r >= 0.96 for r, _ in rates.values()) and elapsed < 120
    detail = f"default fading={ScenarioSpec(5).fading}: "
    detail += ", ".join(f"N={n}: exact {r:.4f} (alpha>=thr {a:.4f})" for n, (r, a) in rates.items())
    detail += f"; {elapsed:.1f} s; reference with exponential gains: "
    detail += ", ".join(f"N={n}: {r:.4f}" for n, r in reference.items())
    assert record("4", ok, detail), detail


# --- 5: property suite ----------------------------------------------------------------------


def test_criterion_5a_ratio_guarantee():
    rng = np.random.default_rng(51)
    checks = violations = 0
    for cfg, gains in property_instances():
        ratios = quality_ratios(gains)
        n = cfg.n_players
        orderings = {tuple(range(n)), tuple(reversed(range(n))), delta_ocsc(cfg, gains, MODEL).ordering}
        orderings.update(tuple(int(p) for p in rng.permutation(n)) for _ in range(3))
        for perm in orderings:
            bound = prop2_certificate(ratios, perm)
            got = utility_ratios(cfg, gains, pi_csc(cfg, gains, perm, MODEL))
            checks += n
            violations += int(np.count_nonzero(got < bound * (1 - 1e-9)))
    ok = violations == 0
    detail = f"{checks} player checks over 500 instances, {violations} below prop2_certificate"
    assert record("5a", ok, detail), detail


def test_criterion_5b_welfare_bound():
    worst_margin = math.inf
    violations = 0
    for cfg, gains in property_instances():
        best = exhaustive_optimum(cfg, gains, MODEL).best_welfare
        out = delta_ocsc(cfg, gains, MODEL)
        welfare = compute_utilities(cfg, gains, out.allocation, MODEL).welfare
        worst_margin = min(worst_margin, welfare / best - out.alpha_star)
        violations += welfare < out.alpha_star * best * (1 - 1e-12)
    ok = violations == 0
    detail = f"500 instances, min(welfare/optimum - alpha*) = {worst_margin:.4f}, {violations} violations"
    assert record("5b", ok, detail), detail


def test_criterion_5c_threshold_implies_exact():
    instances = property_instances() + list(random_instances(500, [8, 12, 20], seed=5053))
    covered = violations = 0
    for cfg, gains in instances:
        out = delta_ocsc(cfg, gains, MODEL)
        if out.alpha_star > MODEL.equilibrium_threshold:
            covered += 1
            violations += not equilibrium_check(cfg, gains, out, MODEL).is_exact
    ok = violations == 0 and covered > 0
    detail = f"{covered} instances with alpha* > 1/(1+gamma*), {violations} not exact"
    assert record("5c", ok, detail), detail


def test_criterion_5d_termination():
    bounds = {d: math.ceil(math.log2(1 / d)) + 1 for d in (0.1, 1e-2, DELTA, 1e-6)}
    worst = {d: 0 for d in bounds}
    instances = property_instances() + list(random_instances(200, [1, 8, 15, 30], seed=5054, carriers_extra=4))
    for _, gains in instances:
        ratios = quality_ratios(gains)
        for d in bounds:
            for early in (False, True):
                worst[d] = max(worst[d], ordering_search(ratios, d, MODEL.gamma_star, early_stop=early).iterations)
    ok = all(worst[d] <= bounds[d] for d in bounds)
    detail = ", ".join(f"delta={d:g}: max {worst[d]} <= {bounds[d]}" for d in bounds)
    assert record("5d", ok, detail), detail


def test_criterion_5e_ordering_optimality():
    perms = {n: np.array(list(itertools.permutations(range(n)))) for n in range(1, 7)}
    violations = 0
    gap = 0.0
    instances = property_instances() + list(random_instances(200, [1, 2, 3, 4, 5, 6], seed=5055, carriers_extra=3))
    for cfg, gains in instances:
        ratios = quality_ratios(gains)
        n = cfg.n_players
        alpha = delta_ocsc(cfg, gains, MODEL).alpha_star
        best = ratios.rho_sorted[perms[n], np.arange(n)].min(axis=1).max()
        gap = max(gap, best - alpha)
        violations += best >= alpha + DELTA
    ok = violations == 0
    detail = f"{len(instances)} instances, max(brute force - alpha*) = {gap:.2e} < delta={DELTA:g}"
    assert record("5e", ok, detail), detail


def test_criterion_5f_ladder_trap():
    eps = 0.01
    lines = []
    ok = True
    for n in (3, 5):
        cfg = make_config(n, n)
        gains = ladder_gains(n, n, eps)
        good = utility_ratios(cfg, gains, delta_ocsc(cfg, gains, MODEL)).min()
        worst = pi_csc(cfg, gains, tuple(reversed(range(n))), MODEL, allow_idle=True)
        bad = utility_ratios(cfg, gains, worst).min()
        ok &= good >= 1 - n * eps and bad <= n * eps
        lines.append(f"N=K={n}: ocsc min ratio {good:.4f} >= {1 - n * eps:.2f}, reversed min ratio {bad:.4f} <= {n * eps:.2f}")
    detail = "; ".join(lines)
    assert record("5f", ok, detail), detail


def test_criterion_5g_mcsc_consistency():
    worst = 0.0
    for cfg, gains in random_instances(200, [2, 3, 5, 8, 12], seed=5057, carriers_extra=4):
        _, trace = delta_mcsc(cfg, gains, MODEL)
        worst = max(worst, abs(trace[0] - delta_ocsc(cfg, gains, MODEL).alpha_star))
    ok = worst <= DELTA
    detail = f"200 instances, max |trace[0] - ocsc alpha*| = {worst:.2e}"
    assert record("5g", ok, detail), detail


# --- 6, 7 ------------------------------------------------------------------------------------


def test_criterion_6_user_trend():
    start = time.perf_counter()
    users = list(range(2, 17, 2))
    template = ScenarioSpec(2, trials=500, seed=6006, algorithms=("ocsc", "mcsc", "random", "pooling"))
    rows = sweep(template, "users", users)
    table = {(r.axis_value, r.algorithm): r for r in rows}
    elapsed = time.perf_counter() - start

    failures = []
    for alg in ("ocsc", "mcsc"):
        for a, b in zip(users, users[1:]):
            lo, hi = table[a, alg], table[b, alg]
            if hi.mean_ee < lo.mean_ee - math.hypot(lo.se_ee, hi.se_ee):
                failures.append(f"{alg} drops from N={a} to N={b}")
    for n in users:
        rnd = table[n, "random"].mean_ee
        for alg in ("ocsc", "mcsc"):
            if not table[n, alg].mean_ee > rnd:
                failures.append(f"{alg} <= random at N={n}")
        if n >= 4 and not table[n, "pooling"].mean_ee < min(table[n, "ocsc"].mean_ee, table[n, "mcsc"].mean_ee):
            failures.append(f"pooling not below at N={n}")
    ok = not failures and elapsed < 300
    ee = lambda alg: ", ".join(f"{table[n, alg].mean_ee / 1e6:.3f}" for n in users)
    detail = (
        f"N={users}; EE [Mbit/J] ocsc [{ee('ocsc')}], mcsc [{ee('mcsc')}], random [{ee('random')}], "
        f"pooling [{ee('pooling')}]; {elapsed:.1f} s"
    )
    if failures:
        detail += "; " + "; ".join(failures)
    assert record("6", ok, detail), detail


def test_criterion_7_low_snr():
    template = ScenarioSpec(5, trials=500, seed=7007, algorithms=("ocsc", "mcsc", "random", "pooling"))
    rows = sweep(template, "snr", [-10.0, 0.0, 10.0])
    table = {(r.axis_value, r.algorithm): r.mean_ee for r in rows}
    shares = {alg: table[-10.0, alg] / table[10.0, alg] for alg in template.algorithms}
    ok = all(s < 0.05 for s in shares.values())
    detail = "EE(-10 dB)/EE(10 dB): " + ", ".join(f"{a} {s:.4f}" for a, s in shares.items())
    assert record("7", ok, detail), detail


# --- 8, 9 --------------------------------------------------------------------------------------


def test_criterion_8_best_response_grid():
    rng = np.random.default_rng(8008)
    mismatches = 0
    worst_power = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 4))
        k = int(rng.integers(n, n + 3))
        cfg = make_config(n, k)
        gains = rng.standard_exponential((n, k))
        powers = np.zeros((n, k))
        for player in range(n):
            carrier, row = best_response(cfg, gains, powers, player, MODEL)
            u_grid, k_grid, p_grid, step = grid_best_single_carrier(cfg, gains, powers, player, MODEL, 10_000)
            trial = powers.copy()
            trial[player] = row
            u_br = compute_utilities(cfg, gains, trial, MODEL).utilities[player]
            off = abs(p_grid - row[carrier]) / step
            worst_power = max(worst_power, off)
            mismatches += k_grid != carrier or off > 1.0 or u_br < u_grid * (1 - 1e-12)
            powers[player] = row
    ok = mismatches == 0
    detail = f"100 instances, {mismatches} mismatches, max power offset {worst_power:.3f} grid steps"
    assert record("8", ok, detail), detail


def test_criterion_9_determinism(tmp_path):
    path = tmp_path / "run.csv"
    blobs = []
    for workers in (1, 1, 2, 3):
        argv = ["run", "-N", "6", "--trials", "40", "--seed", "9009", "--workers", str(workers), "--output", str(path)]
        assert main(argv, out=io.StringIO()) == 0
        blobs.append(path.read_bytes())
    sweep_path = tmp_path / "sweep.csv"
    sweeps = []
    for workers in (1, 2):
        argv = ["sweep", "--axis", "users", "--values", "2,5", "--trials", "20", "--workers", str(workers), "--output", str(sweep_path)]
        assert main(argv, out=io.StringIO()) == 0
        sweeps.append(sweep_path.read_bytes())
    ok = len(set(blobs)) == 1 and len(set(sweeps)) == 1
    detail = f"run: {len(set(blobs))} distinct file(s) over workers 1,1,2,3; sweep: {len(set(sweeps))} over workers 1,2"
    assert record("9", ok, detail), detail
