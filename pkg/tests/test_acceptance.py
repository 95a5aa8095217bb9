"""Acceptance criteria 1-11, one test each.

Every test records a ``CRITERION k PASS|FAIL ...`` line in ``LINES``; conftest
prints them in the terminal summary.  Run directly with ``python tests/test_acceptance.py``.
"""
import functools
import sys
import time

import numpy as np
import pytest
from scipy.special import erf

from choquard import energy as en
from choquard.grid import Field, GridSpec
from choquard.potentials import Periodic, bump_on_top
from choquard.reference import fiber_argmax, reference_level_p2_n3
from choquard.riesz import DROP, apply
from choquard.solver import SolverConfig, default_init, ground_state, nehari_project, symmetric_init
from choquard.verify import (
    brezis_lieb_defects,
    gradient_fd_error,
    random_pair,
    solve_comparison,
    solve_shifted,
)

LINES = {}

# first measured value of the p != q asymmetry, kept as a regression pin
ASYM_PIN = 0.12389990702412623


def record(k, ok, text, seconds=None):
    tail = f" [{seconds:.1f}s]" if seconds is not None else ""
    LINES[k] = f"CRITERION {k:2d} {'PASS' if ok else 'FAIL'}  {text}{tail}"
    print(LINES[k])
    return ok


# (N, alpha) pairs with 0 < alpha < N, and a small grid per dimension
COMBOS = [(N, a) for N in (1, 2, 3) for a in (0.5, 1.0, 2.0) if a < N and (a != 2.0 or N == 3)]
GRIDS = {1: GridSpec(1, 64, 20.0), 2: GridSpec(2, 32, 16.0), 3: GridSpec(3, 16, 12.0)}


def _exponents(rng, N, alpha):
    lo, hi = en.exponent_window(N, alpha)
    hi = min(hi, lo + 3.0)
    return rng.uniform(lo + 0.02, hi - 0.02, size=2)


# ------------------------------------------------------------------ shared solves


@functools.cache
def run_reference():
    prob = en.make_problem(GridSpec(3, 64, 16.0), 2.0, 2.0, 2.0)
    t0 = time.perf_counter()
    res = ground_state(prob, init=symmetric_init(prob.grid, 1.5))
    return prob, res, time.perf_counter() - t0


@functools.cache
def run_comparison():
    grid = GridSpec(1, 256, 40.0)
    low = en.make_problem(grid, 0.5, 2.0, 2.5)
    high = low.with_potentials(potA=bump_on_top(low.potA, 1.0))
    t0 = time.perf_counter()
    rep, a, b = solve_comparison(low, high, SolverConfig())
    return rep, a, b, time.perf_counter() - t0


@functools.cache
def run_periodic():
    grid = GridSpec(1, 256, 40.0)
    prob = en.make_problem(
        grid, 0.5, 2.0, 2.5, potA=Periodic(1.0, 1.0, (10.0,)), potB=Periodic(1.0, 0.5, (10.0,))
    )
    t0 = time.perf_counter()
    rep, a, b = solve_shifted(prob, SolverConfig(), default_init(grid), k=4)
    return prob, rep, a, b, time.perf_counter() - t0


@functools.cache
def run_asym():
    prob = en.make_problem(GridSpec(1, 256, 40.0), 0.5, 2.0, 2.5)
    return prob, ground_state(prob)


def all_runs():
    prob5, r5, _ = run_reference()
    _, low, high, _ = run_comparison()
    prob8, _, a, b, _ = run_periodic()
    prob9, r9 = run_asym()
    grid = GridSpec(1, 256, 40.0)
    pl = en.make_problem(grid, 0.5, 2.0, 2.5)
    ph = pl.with_potentials(potA=bump_on_top(pl.potA, 1.0))
    return [("reference", prob5, r5), ("A=1", pl, low), ("A=1+bump", ph, high),
            ("periodic", prob8, a), ("periodic shifted", prob8, b), ("p!=q", prob9, r9)]


# ------------------------------------------------------------------ criteria


def test_c01_nehari_projection():
    rng = np.random.default_rng(101)
    t0 = time.perf_counter()
    worst_p = worst_t = 0.0
    for i in range(200):
        N, alpha = COMBOS[i % len(COMBOS)]
        p, q = _exponents(rng, N, alpha)
        prob = en.make_problem(GRIDS[N], alpha, p, q)
        pair = random_pair(prob.grid, rng)
        t, proj = nehari_project(prob, pair)
        rep = en.action(prob, proj)
        worst_p = max(worst_p, abs(rep.nehari) / rep.normSq)
        th1, th2 = en.fiber_coefficients(prob, en.action(prob, pair))
        t_gs = fiber_argmax(th1, th2, p + q)
        worst_t = max(worst_t, abs(t - t_gs) / t_gs)
    dt = time.perf_counter() - t0
    ok = worst_p <= 1e-10 and worst_t <= 1e-8 and dt < 30
    record(1, ok, f"max |P|/norm^2={worst_p:.2e} (<=1e-10), max t-bar vs golden-section={worst_t:.2e} (<=1e-8)", dt)
    assert ok


def test_c02_semigroup():
    rng = np.random.default_rng(202)
    t0 = time.perf_counter()
    worst = 0.0
    for i in range(100):
        N, alpha = COMBOS[i % len(COMBOS)]
        p, q = _exponents(rng, N, alpha)
        prob = en.make_problem(GRIDS[N], alpha, p, q, policy=DROP)
        pair = random_pair(prob.grid, rng)
        d = en.coupling(prob, pair)
        worst = max(worst, abs(d - en.half_order_coupling(prob, pair)) / abs(d))
    dt = time.perf_counter() - t0
    ok = worst <= 1e-12 and dt < 10
    record(2, ok, f"max relative defect={worst:.2e} (<=1e-12) over 100 pairs", dt)
    assert ok


def test_c03_gradient():
    rng = np.random.default_rng(303)
    grid = GridSpec(1, 64, 20.0)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(50):
        p, q = rng.uniform(2.0, 3.0, size=2)
        prob = en.make_problem(grid, 0.5, p, q, potA=Periodic(1.0, 0.5, (5.0,)))
        worst = max(worst, gradient_fd_error(prob, random_pair(grid, rng), random_pair(grid, rng), 1e-5))
    dt = time.perf_counter() - t0
    ok = worst <= 1e-5 and dt < 30
    record(3, ok, f"max FD relative error={worst:.2e} (<=1e-5) over 50 draws", dt)
    assert ok


def test_c04_free_space_fidelity():
    t0 = time.perf_counter()
    grid = GridSpec(3, 64, 16.0)
    prob = en.make_problem(grid, 2.0, 2.0, 2.0)
    s = 0.5
    r = grid.radius()
    rho = Field(grid, np.exp(-r * r / (2 * s * s)) / (2 * np.pi * s * s) ** 1.5)
    phi = apply(prob.riesz, rho).values
    mask = r < grid.L / 4
    rr = r[mask]
    with np.errstate(invalid="ignore", divide="ignore"):
        exact = np.where(rr > 0, erf(rr / (np.sqrt(2) * s)) / (4 * np.pi * rr), 1 / (4 * np.pi * s) * np.sqrt(2 / np.pi))
    err = float(np.max(np.abs(phi[mask] - exact) / exact))
    dt = time.perf_counter() - t0
    ok = err < 1e-3 and dt < 60
    record(4, ok, f"max relative error vs erf(r/(sqrt2 s))/(4 pi r) for r<L/4: {err:.2e} (<1e-3)", dt)
    assert ok


def test_c05_reference_ground_state():
    prob, res, dt = run_reference()
    c_ref, _ = reference_level_p2_n3()
    rel = abs(res.c0 - c_ref) / c_ref
    sym = float(np.max(np.abs(res.pair.u.values - res.pair.v.values)) / res.pair.u.max_abs())
    ok = res.converged and res.relative_residual <= 1e-6 and sym <= 1e-12 and rel < 0.01 and dt <= 600
    record(
        5, ok,
        f"64^3: c0={res.c0:.8f} oracle={c_ref:.8f} rel={rel:.2e} (<1e-2), residual={res.relative_residual:.1e}, "
        f"|u-v|max={sym:.1e}, iters={res.iterations}",
        dt,
    )
    assert ok


def test_c06_nehari_identity_on_converged_runs():
    worst, names = 0.0, []
    for name, prob, res in all_runs():
        if not res.converged:
            continue
        rep = res.report
        worst = max(worst, abs(rep.action - prob.nehari_factor * rep.normSq) / rep.action)
        names.append(name)
    ok = worst <= 1e-8 and len(names) == 6
    record(6, ok, f"max |I - k ||.||^2|/I = {worst:.2e} (<=1e-8) on {len(names)} converged runs")
    assert ok


def test_c07_potential_comparison():
    rep, low, high, dt = run_comparison()
    strict = high.c0 - low.c0 > rep.threshold
    ok = rep.passed and strict and dt < 120
    record(7, ok, f"c0(A=1)={low.c0:.10f} <= c0(A=1+bump)={high.c0:.10f}, strict={strict}", dt)
    assert ok


def test_c08_shift_invariance():
    _, rep, a, b, dt = run_periodic()
    ok = rep.passed and not rep.skipped and dt < 120
    record(8, ok, f"c0={a.c0:.12f} shifted={b.c0:.12f} rel={rep.measured:.1e} (<=1e-8), {rep.details.split()[-1]}", dt)
    assert ok


def test_c09_asymmetry():
    _, res = run_asym()
    asym = res.asymmetry()
    ok = res.converged and asym > 1e-3 and asym == pytest.approx(ASYM_PIN, rel=1e-6)
    record(9, ok, f"(p,q)=(2,2.5): asym={asym:.10f} (>1e-3, pinned {ASYM_PIN:.10f})")
    assert ok


def test_c10_brezis_lieb():
    t0 = time.perf_counter()
    grid = GridSpec(3, 64, 32.0)
    prob = en.make_problem(grid, 2.0, 2.0, 2.0)
    d = 3.5
    defects = brezis_lieb_defects(prob, grid.L / 20, (d, 2 * d, 4 * d))
    ratio = defects[2] / defects[1]
    target = 2.0 ** (prob.alpha - prob.dim)
    dt = time.perf_counter() - t0
    ok = defects[0] > defects[1] > defects[2] and abs(ratio / target - 1) <= 0.2 and dt < 60
    record(
        10, ok,
        "defects " + ", ".join(f"{x:.4e}" for x in defects) + f"; last ratio {ratio:.3f} vs 2^(a-N)={target:.3f}",
        dt,
    )
    assert ok


def test_c11_monotone_descent():
    bad, total = [], 0
    for name, _, res in all_runs():
        acts = [h[1] for h in res.history]
        total += len(acts) - 1
        if any(b > a for a, b in zip(acts, acts[1:])):
            bad.append(name)
    ok = not bad
    record(11, ok, f"{total} accepted steps over 6 runs, increases in: {bad or 'none'}")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
