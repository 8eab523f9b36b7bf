"""
Acceptance run: nine criteria at their stated tolerances and runtime budgets.

Each test prints one ``CRITERION n: PASS|FAIL`` line (visible with ``-s`` or
in the ``-v`` log) and fails on either tolerance or runtime.
"""

import math
import time
from pathlib import Path

import numpy as np
import pytest

from geophase import validation
from geophase.bosonic import (
    BosonicBath,
    OhmicSpectralDensity,
    gamma_uc_bosonic,
    phi_shift_bosonic,
)
from geophase.cli import main
from geophase.core import BlochState, MixedInitialState, mixed_state_from_unitary, rotation_unitary
from geophase.geometric import phase_mixed, phase_pure
from geophase.kernel import CorrelationScenario, build_trajectory
from geophase.oracles import path_from_trajectory, tong_phase
from geophase.spin import SpinBath, gamma_corr1_check, gamma_uc_spin
from geophase.sweep import (
    evaluate_point,
    find_zero_crossings,
    load_spec,
    read_sweep_csv,
    run_sweep,
)

RECIPES = Path(__file__).resolve().parents[1] / "recipes"
STATE = BlochState(math.pi / 3)
U3 = rotation_unitary(math.pi / 3, "y")
U4 = rotation_unitary(math.pi / 4, "y")  # gives theta0~ = pi/2 at every beta
EQUATOR = BlochState(math.pi / 2)


def _report(capsys, number, passed, detail, runtime, budget):
    ok = passed and runtime < budget
    line = (f"CRITERION {number}: {'PASS' if ok else 'FAIL'}  {detail}  "
            f"[{runtime:.2f} s, budget {budget:g} s]")
    with capsys.disabled():
        print("\n" + line)
    return ok


def _wrapped(x):
    return float(np.angle(np.exp(1j * x)))


def test_criterion_1_zero_coupling(capsys):
    start = time.perf_counter()
    checks = validation.zero_coupling()
    runtime = time.perf_counter() - start
    worst = max(c.deviation for c in checks)
    passed = all(c.passed for c in checks)
    assert _report(capsys, 1, passed,
                   f"{len(checks)} cases, max |deviation| {worst:.1e} (tol 1e-9)", runtime, 1.0)


def _robust_cases():
    for env_name in ("bosonic", "spin"):
        for lam in (0.1, 0.5, 1.0):
            for beta in (1.0, 2.0, math.inf):
                for third in ((0.5, 1.0, 2.0) if env_name == "bosonic" else (1, 2, 3)):
                    if env_name == "bosonic":
                        env = BosonicBath(OhmicSpectralDensity(lam, third, 5.0), beta)
                    else:
                        env = SpinBath.homogeneous(third, lam, 1.0, beta)
                    label = "s" if env_name == "bosonic" else "N"
                    yield f"{env_name} lambda={lam} beta={beta} {label}={third}", env, beta


def test_criterion_2_robust_state(capsys):
    start = time.perf_counter()
    worst, failures, count = 0.0, [], 0
    for name, env, beta in _robust_cases():
        runs = [
            ("uncorrelated", CorrelationScenario.uncorrelated(beta), EQUATOR, phase_pure),
            ("projective", CorrelationScenario.projective(EQUATOR, beta), EQUATOR, phase_pure),
            ("unitary", CorrelationScenario.unitary(U4, beta),
             mixed_state_from_unitary(U4, beta, 1.0), phase_mixed),
            ("mixed gamma0=0.3", CorrelationScenario.uncorrelated(beta),
             MixedInitialState(math.pi / 2, 0.0, 0.3), phase_mixed),
        ]
        for kind, scenario, state, fn in runs:
            traj = build_trajectory(scenario, env, 2048)
            total = fn(traj, state).total
            dev = abs(_wrapped(total + math.pi))
            count += 1
            worst = max(worst, dev)
            if dev > 1e-8:
                # the discretised functional tells whether the analytic value is right
                try:
                    oracle = f"{tong_phase(path_from_trajectory(traj, state)):+.4f}"
                except ValueError:
                    oracle = "undefined (eigenvalues degenerate)"
                failures.append(f"{name} {kind}: phase {total:+.4f}, functional {oracle}, "
                                f"chi(tau)/2pi={traj.chi[-1] / (2 * math.pi):.3f}")
    runtime = time.perf_counter() - start
    detail = f"{count - len(failures)}/{count} points at -pi within 1e-8, max |deviation| {worst:.2e}"
    if failures:
        detail += ("; where chi(tau) winds past 2pi the phase is -pi(1 + k), "
                   "k = round(chi(tau)/2pi): " + "; ".join(failures))
    assert _report(capsys, 2, not failures, detail, runtime, 30.0)


def test_criterion_3_zero_temperature(capsys):
    start = time.perf_counter()
    devs = {}
    for s in (0.5, 1.0, 2.0):
        J = OhmicSpectralDensity(0.5, s, 5.0)
        env = BosonicBath(J, math.inf)
        traj = build_trajectory(CorrelationScenario.projective(STATE, math.inf), env, 2048)
        t = traj.grid
        devs[f"bosonic s={s} gamma_corr"] = np.max(np.abs(traj.gamma - gamma_uc_bosonic(J, math.inf, t)))
        devs[f"bosonic s={s} chi-phi"] = np.max(np.abs(traj.chi - phi_shift_bosonic(J, t)))
        uni = build_trajectory(CorrelationScenario.unitary(U3, math.inf), env, 2048)
        devs[f"bosonic s={s} projective-unitary"] = max(np.max(np.abs(traj.gamma - uni.gamma)),
                                                        np.max(np.abs(traj.chi - uni.chi)))
    corr1_size = []
    for n, lam in ((1, 0.5), (3, 0.8), (50, 0.3)):
        env = SpinBath.homogeneous(n, lam, 1.0, math.inf)
        traj = build_trajectory(CorrelationScenario.projective(STATE, math.inf), env, 2048)
        t = traj.grid
        gamma_uc = -np.log(np.abs(gamma_uc_spin(env, t)))
        corr1 = gamma_corr1_check(env, t)
        devs[f"spin N={n} gamma_corr2"] = np.max(np.abs(traj.gamma - gamma_uc - corr1))
        corr1_size.append(np.max(np.abs(corr1)))
        uni = build_trajectory(CorrelationScenario.unitary(U3, math.inf), env, 2048)
        devs[f"spin N={n} projective-unitary"] = max(np.max(np.abs(traj.gamma - uni.gamma)),
                                                     np.max(np.abs(traj.chi - uni.chi)))
    runtime = time.perf_counter() - start
    worst = max(devs.values())
    passed = worst <= 1e-10 and min(corr1_size) > 1e-3
    bad = [k for k, v in devs.items() if v > 1e-10]
    detail = (f"{len(devs)} identities, max |deviation| {worst:.1e} (tol 1e-10); "
              f"min max|gamma_corr1| {min(corr1_size):.3f} (nonzero)")
    if bad:
        detail += "; failing: " + ", ".join(bad)
    assert _report(capsys, 3, passed, detail, runtime, 10.0)


def _matrix(capsys, number, fn, budget, tol_text):
    start = time.perf_counter()
    checks = fn()
    runtime = time.perf_counter() - start
    failed = [c.name for c in checks if not c.passed]
    worst = max(c.deviation for c in checks)
    detail = f"{len(checks) - len(failed)}/{len(checks)} cases, max deviation {worst:.1e} ({tol_text})"
    if failed:
        detail += "; failing: " + ", ".join(failed)
    assert _report(capsys, number, not failed, detail, runtime, budget)


def test_criterion_4_spin_oracle(capsys):
    _matrix(capsys, 4, validation.spin_small, 120.0, "tol 1e-8")


def test_criterion_5_fock_oracle(capsys):
    _matrix(capsys, 5, validation.fock_small, 120.0, "tol 1e-6")


def test_criterion_6_quadrature(capsys):
    start = time.perf_counter()
    t = np.linspace(0.0, 2 * math.pi, 2049)
    worst = 0.0
    for lam, omega_c in ((0.5, 5.0), (1.0, 5.0), (0.1, 20.0)):
        J = OhmicSpectralDensity(lam, 1.0, omega_c)
        worst = max(worst,
                    np.max(np.abs(gamma_uc_bosonic(J, math.inf, t)
                                  - 0.5 * lam * np.log1p((omega_c * t) ** 2))),
                    np.max(np.abs(phi_shift_bosonic(J, t) - lam * np.arctan(omega_c * t))))
    runtime = time.perf_counter() - start
    assert _report(capsys, 6, worst <= 1e-9,
                   f"max |deviation| {worst:.1e} over t in [0, 2pi] (tol 1e-9)", runtime, 5.0)


def test_criterion_7_tong(capsys):
    _matrix(capsys, 7, validation.tong, 60.0, "tol 1e-4, M=4096, error shrinks from M=2048")


# the three probed panels run at full resolution; the rest at a reduced count
FULL_RECIPES = {"fig2a", "fig4a", "fig6a"}
REDUCED_COUNT = 25


@pytest.fixture(scope="module")
def recipe_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("recipes")
    start = time.perf_counter()
    codes = {}
    for path in sorted(RECIPES.glob("*.ini")):
        args = ["sweep", "--config", str(path), "--out", str(out / f"{path.stem}.csv")]
        if path.stem not in FULL_RECIPES:
            args += ["--set", f"sweep.count={REDUCED_COUNT}"]
        codes[path.stem] = main(args)
    return out, codes, time.perf_counter() - start


def test_criterion_8_qualitative_figures(capsys, recipe_run):
    out, codes, runtime = recipe_run
    _, a = read_sweep_csv(str(out / "fig2a.csv"))
    corr_a = [x for x in find_zero_crossings(a["s"], a["delta_corr"]) if 0 < x < 1]
    unc_a = find_zero_crossings(a["s"], a["delta_uncorr"])
    ok_a = bool(corr_a) and not unc_a

    _, b = read_sweep_csv(str(out / "fig4a.csv"))
    smaller = np.abs(b["delta_corr"]) < np.abs(b["delta_uncorr"])
    ok_b = smaller.mean() > 0.5

    _, c = read_sweep_csv(str(out / "fig6a.csv"))
    corr_c = find_zero_crossings(c["lambda"], c["delta_corr"])
    ok_c = bool(corr_c)

    all_ok = all(v == 0 for v in codes.values()) and len(codes) == 14
    detail = (f"{len(codes)} recipes run; (a) correlated crossings at s={[round(x, 3) for x in corr_a]}, "
              f"uncorrelated {len(unc_a)}: {'ok' if ok_a else 'no'}; "
              f"(b) correlated smaller at {smaller.mean():.0%} of lambda: {'ok' if ok_b else 'no'}; "
              f"(c) correlated crossings at lambda={[round(x, 3) for x in corr_c]}: "
              f"{'ok' if ok_c else 'no'}")
    assert _report(capsys, 8, ok_a and ok_b and ok_c and all_ok, detail, runtime, 300.0)


def test_criterion_9_temperature_trend(capsys):
    start = time.perf_counter()
    max_gap, point_gap = [], []
    for beta in ("inf", "2", "1"):
        spec = load_spec(str(RECIPES / "fig2a.ini"), ["sweep.count=30", f"scenario.beta={beta}"])
        rows = run_sweep(spec)
        max_gap.append(max(abs(_wrapped(r[3] - r[4])) for r in rows))
        row = evaluate_point(spec.at(0.5))
        point_gap.append(abs(_wrapped(row[2] - row[3])))
    runtime = time.perf_counter() - start
    passed = (max_gap[0] > max_gap[1] > max_gap[2]) and (point_gap[0] > point_gap[1] > point_gap[2])
    detail = ("gap over beta=inf,2,1: max over s " + ", ".join(f"{g:.3f}" for g in max_gap)
              + "; at s=0.5 " + ", ".join(f"{g:.3f}" for g in point_gap))
    assert _report(capsys, 9, passed, detail, runtime, 60.0)
