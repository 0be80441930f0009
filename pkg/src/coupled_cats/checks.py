"""
Self-test harness behind `coupled-cats check`.

`fast` runs the structural invariants at small N; `full` adds the N = 64
scenario checks (quantum runs plus a short classical HH run).
"""
import math

import numpy as np

from . import phase_space as ps
from . import torus_classical as tc
from . import torus_quantum as tq
from .runner import ScenarioConfig, growth_rate, plateau, run_scenario, time_to_reach


def _random_state(rng, n):
    v = rng.normal(size=n * n) + 1j * rng.normal(size=n * n)
    return tq.QuantumState(v / np.linalg.norm(v), tq.TorusHilbert(n), dof=2)


def _random_density(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def unitarity():
    worst = 0.0
    for n in range(2, 129):
        space = tq.TorusHilbert(n)
        for k in (0.0, 0.25):
            for cat in (tq.hyperbolic(k), tq.elliptic(k)):
                u = tq.build_cat_propagator(cat, space).matrix
                worst = max(worst, np.abs(u.conj().T @ u - np.eye(n)).max())
    return worst, 1e-10


def factored_vs_dense():
    rng = np.random.default_rng(1)
    space = tq.TorusHilbert(4)
    h = tq.build_cat_propagator(tq.hyperbolic(), space)
    u = tq.build_2dof_propagator(h, h, tq.build_coupling_diagonal(0.5, space))
    psi = _random_state(rng, 4).amplitudes
    return np.abs(u.apply(psi) - u.dense() @ psi).max(), 1e-12


def entropy_identity():
    rng = np.random.default_rng(2)
    worst = 0.0
    for n in (4, 8):
        for _ in range(5):
            psi = _random_state(rng, n)
            a = ps.wse_pure(psi)
            b = ps.separability_entropy(ps.operator_schmidt_spectrum(np.outer(psi.amplitudes, psi.amplitudes.conj()))) / 2
            c = ps.wse_from_wigner(psi)
            worst = max(worst, abs(a - b), abs(a - c), abs(b - c))
    return worst, 1e-8


def wigner_identities():
    rng = np.random.default_rng(3)
    worst = 0.0
    for n in (4, 8):
        rho = _random_density(rng, n)
        w = ps.wigner_transform(rho)
        worst = max(worst, np.abs(w.imag).max(), abs(w.real.sum() - 1),
                    abs(2 * n * np.sum(w.real ** 2) - np.trace(rho @ rho).real))
    return worst, 1e-10


def realignment_norm():
    rng = np.random.default_rng(4)
    worst = 0.0
    for n in (2, 3, 4):
        rho = _random_density(rng, n * n)
        spec = ps.operator_schmidt_spectrum(rho)
        worst = max(worst, abs(spec.norm ** 2 - np.trace(rho @ rho).real))
    return worst, 1e-10


def forward_inverse():
    rng = np.random.default_rng(5)
    x = rng.random((10_000, 4))
    worst = 0.0
    for m1 in (tq.hyperbolic(), tq.elliptic()):
        worst = max(worst, tc.torus_distance(tc.inverse_1dof(tc.forward_1dof(x[:, :2], m1), m1), x[:, :2]).max())
        for m2 in (tq.hyperbolic(), tq.elliptic()):
            for order in tc.ORDERS:
                cm = tc.CoupledMap(m1, m2, 0.5, order)
                y = tc.inverse_2dof(tc.forward_2dof(x, cm), cm)
                worst = max(worst, tc.torus_distance(y, x).max())
    return worst, 1e-12


def product_cse():
    rng = np.random.default_rng(6)
    f, g = rng.random((8, 8)), rng.random((8, 8))
    grid = np.einsum("ab,cd->abcd", f, g)
    return tc.cse(grid / grid.sum()), 1e-8


def liouville_mass():
    space = tq.TorusHilbert(8)
    cm = tc.CoupledMap(tq.hyperbolic(), tq.elliptic(), 0.5, "kick_last")
    grid = tc.evolve_liouville(tc.gaussian_liouville((0.3, 0.6, 0.5, 0.5), space, 8), cm, 5)
    return max(abs(grid.sum() - 1), max(0.0, -grid.min())), 1e-12


FAST = [unitarity, factored_vs_dense, entropy_identity, wigner_identities, realignment_norm,
        forward_inverse, product_cse, liouville_mass]

_cache = {}


def _quantum(case, steps):
    key = (case, steps)
    if key not in _cache:
        _cache[key] = run_scenario(ScenarioConfig(case=case, steps=steps, classical_steps=0)).series
    return _cache[key]


def hh_plateau():
    s = _quantum("hh", 50)
    level = float(np.mean(s.wse_half[20:51]))
    target = math.log(0.6 * 64)
    return abs(level - target) / target, 0.15


def hh_plateau_reached():
    s = _quantum("hh", 50)
    level = float(np.mean(s.wse_half[20:51]))
    return time_to_reach(s, 0.9 * level), 10 + 1e-9


def lyapunov_rate():
    lam = tq.hyperbolic().lyapunov()
    return abs(growth_rate(_quantum("hh", 50)) - lam) / lam, 0.30


def he_plateau():
    hh, he = _quantum("hh", 300), _quantum("he", 300)
    return abs(plateau(he) - plateau(hh)) / plateau(hh), 0.10


def he_slow():
    hh, he = _quantum("hh", 300), _quantum("he", 300)
    t_hh = time_to_reach(hh, 0.9 * plateau(hh))
    t_he = time_to_reach(he, 0.9 * plateau(he))
    # measured quantity: 3 t_hh - t_he must not be positive
    return 3 * t_hh - t_he, 1e-9


def hh_tracking():
    r = run_scenario(ScenarioConfig(case="hh", steps=3, classical_steps=3))
    s = r.series
    return float(np.max(np.abs(s.cse_half[1:4] - s.wse_half[1:4]))), 0.35


FULL = FAST + [hh_plateau, hh_plateau_reached, lyapunov_rate, he_plateau, he_slow, hh_tracking]


def run_checks(level: str = "fast", out=print) -> bool:
    ok = True
    for check in FULL if level == "full" else FAST:
        try:
            measured, tol = check()
            passed = bool(measured < tol)
            line = f"{check.__name__}: measured={float(measured):.3e} tol={tol:.3e}"
        except Exception as exc:  # report and keep going
            passed, line = False, f"{check.__name__}: raised {exc!r}"
        ok &= passed
        out(("PASS " if passed else "FAIL ") + line)
    out("ALL PASS" if ok else "SOME CHECKS FAILED")
    return ok
