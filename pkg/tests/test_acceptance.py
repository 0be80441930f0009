"""
Acceptance criteria at production scale (N = 64, up to 300 steps).

The four scenario runs are cached per session; the HE run with its
classical side to t = 300 dominates the wall time (tens of minutes on one core).
"""
import math
import time

import numpy as np
import pytest

from coupled_cats import phase_space as ps
from coupled_cats import torus_quantum as tq
from coupled_cats.checks import forward_inverse, product_cse, unitarity, wigner_identities
from coupled_cats.runner import ScenarioConfig, plateau, run_scenario, time_to_reach

pytestmark = pytest.mark.slow

LN_06N = math.log(0.6 * 64)
LYAPUNOV = math.log(2 + math.sqrt(3))
QUARTER_PI = math.pi / 4


@pytest.fixture(scope="session")
def hh():
    t0 = time.perf_counter()
    quantum = run_scenario(ScenarioConfig(case="hh", steps=50, classical_steps=0))
    quantum_seconds = time.perf_counter() - t0
    t0 = time.perf_counter()
    full = run_scenario(ScenarioConfig(case="hh", steps=300, classical_steps=10, cse_stride=1))
    return quantum, quantum_seconds, full, time.perf_counter() - t0


@pytest.fixture(scope="session")
def ee_fixed():
    return run_scenario(ScenarioConfig(case="ee", steps=20, classical_steps=3)).series


@pytest.fixture(scope="session")
def ee_quarter():
    c = (QUARTER_PI, QUARTER_PI)
    return run_scenario(ScenarioConfig(case="ee", steps=300, center1=c, center2=c,
                                       classical_steps=0)).series


@pytest.fixture(scope="session")
def he():
    return run_scenario(ScenarioConfig(case="he", steps=300, cse_dense_until=20, cse_stride=10)).series


def test_1_hh_saturation(hh, report):
    quantum, seconds, _, _ = hh
    s = quantum.series
    level = float(np.mean(s.wse_half[20:51]))
    rel = abs(level - LN_06N) / LN_06N
    t90 = time_to_reach(s, 0.9 * level)
    ok = rel <= 0.15 and 0 <= t90 <= 10 and seconds < 120
    report("1 HH saturation", ok,
           f"plateau={level:.4f} vs ln(38.4)={LN_06N:.4f} (rel {rel:.3f} <= 0.15); "
           f"t90={t90} <= 10; quantum runtime {seconds:.3f}s < 120s")
    assert ok


def test_2_hh_tracking(hh, report):
    _, _, full, seconds = hh
    s = full.series
    gaps = np.abs(s.cse_half[1:4] - s.wse_half[1:4])
    c = s.cse_half[4:11]
    drops = np.nonzero(np.diff(c) < 0)[0]
    ok = gaps.max() <= 0.35 and drops.size > 0 and seconds < 30 * 60
    report("2 HH quantum-classical tracking", ok,
           f"|cse-wse| t=1..3 = {np.round(gaps, 3).tolist()} (<= 0.35); "
           f"cse t=4..10 = {np.round(c, 3).tolist()}; run {seconds:.0f}s < 1800s")
    assert ok


def test_3_lyapunov_rate(hh, report):
    s = hh[0].series
    slope = float(np.polyfit([1, 2, 3], s.wse_half[1:4], 1)[0])
    rel = abs(slope - LYAPUNOV) / LYAPUNOV
    ok = rel <= 0.30
    report("3 Lyapunov-rate growth", ok, f"slope={slope:.4f} vs {LYAPUNOV:.4f} (rel {rel:.3f} <= 0.30)")
    assert ok


def test_4_ee_fixed_point(hh, ee_fixed, report):
    hh_level = float(np.mean(hh[0].series.wse_half[20:51]))
    peak = float(ee_fixed.wse_half.max())
    gaps = np.abs(ee_fixed.cse_half[:4] - ee_fixed.wse_half[:4])
    ok = peak < 0.3 * hh_level and gaps.max() <= 0.2
    report("4 EE fixed-point quiescence", ok,
           f"max wse={peak:.4f} < 0.3*HH={0.3 * hh_level:.4f}; |cse-wse| t<=3 = {np.round(gaps, 3).tolist()} (<= 0.2)")
    assert ok


def test_5_ee_quarter_pi(hh, ee_quarter, report):
    s = ee_quarter
    top = float(s.wse_half.max())
    at160 = float(s.wse_half[160])
    level, hh_level = plateau(s), plateau(hh[2].series)
    ok = at160 >= 0.9 * top and level < 0.9 * hh_level
    report("5 EE complex initial condition", ok,
           f"wse(160)={at160:.4f} vs max {top:.4f} at t={int(np.argmax(s.wse_half))} (>= 90%); "
           f"plateau {level:.4f} < 0.9*HH={0.9 * hh_level:.4f}")
    assert ok


def test_6_he_slow_saturation(hh, he, report):
    hh_s = hh[2].series
    level, hh_level = plateau(he), plateau(hh_s)
    rel = abs(level - hh_level) / hh_level
    t_he, t_hh = time_to_reach(he, 0.9 * level), time_to_reach(hh_s, 0.9 * hh_level)
    t, c = he.cse_points()
    peak = int(np.argmax(c))
    after = c[peak:]
    # monotone trend: nothing after the peak rises more than 0.05 above the lowest value seen so far
    rise = float(np.max(after - np.minimum.accumulate(after)))
    ok = rel <= 0.10 and t_he >= 3 * t_hh and 3 <= t[peak] <= 7 and rise <= 0.05 and c[-1] < c[peak]
    report("6 HE slow saturation", ok,
           f"plateau {level:.4f} vs HH {hh_level:.4f} (rel {rel:.3f} <= 0.10); t90 HE={t_he} >= 3*{t_hh}; "
           f"cse peak {c[peak]:.3f} at t={t[peak]} in [3,7]; max rebound {rise:.3f} <= 0.05")
    assert ok


def test_7_entropy_identity(report):
    rng = np.random.default_rng(2024)
    worst = 0.0
    t0 = time.perf_counter()
    for n in (4, 8):
        for _ in range(50):
            v = rng.normal(size=n * n) + 1j * rng.normal(size=n * n)
            psi = tq.QuantumState(v / np.linalg.norm(v), tq.TorusHilbert(n), dof=2)
            rho = np.outer(psi.amplitudes, psi.amplitudes.conj())
            a = ps.wse_pure(psi)
            b = ps.separability_entropy(ps.operator_schmidt_spectrum(rho)) / 2
            c = ps.wse_from_wigner(psi)
            worst = max(worst, abs(a - b), abs(a - c), abs(b - c))
    seconds = time.perf_counter() - t0
    ok = worst < 1e-8
    report("7 entropy-identity oracle", ok, f"max pairwise gap {worst:.2e} < 1e-8 over 100 states ({seconds:.1f}s)")
    assert ok


def test_8_structural(tmp_path, report):
    t0 = time.perf_counter()
    results = {f.__name__: f() for f in (unitarity, forward_inverse, wigner_identities, product_cse)}
    outs = []
    for name in ("a", "b"):
        cfg = ScenarioConfig(case="hh", dim=16, steps=8, out_dir=str(tmp_path / name), serial=True)
        run_scenario(cfg)
        outs.append((tmp_path / name / "entropy.csv").read_bytes())
    seconds = time.perf_counter() - t0
    failing = [k for k, (m, tol) in results.items() if not m < tol]
    ok = not failing and outs[0] == outs[1] and seconds < 60
    detail = "; ".join(f"{k}={m:.1e}<{tol:.0e}" for k, (m, tol) in results.items())
    report("8 structural suites", ok, f"{detail}; entropy.csv byte-identical={outs[0] == outs[1]}; {seconds:.1f}s < 60s")
    assert ok


def test_renormalization_factor_bounded(report):
    r = run_scenario(ScenarioConfig(case="he", steps=6, classical_steps=6, cse_stride=100))
    f = np.array(r.renorm_factors)
    ok = np.all((f >= 0.9) & (f <= 1.1))
    report("renormalization factor within [0.9, 1.1]", ok, f"range [{f.min():.4f}, {f.max():.4f}]")
    assert ok
