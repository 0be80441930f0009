"""
Paired quantum / classical runs of the coupled cat maps.

A scenario evolves a product of coherent states with the factored
propagator and a product Gaussian Liouville density with the pull-back
scheme, recording half the Wigner separability entropy (every step) and
half the classical separability entropy (at a stride).
"""
import csv
import io
import logging
import math
import os
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Dict, Optional, Tuple

import numpy as np

from .phase_space import reduced_density, wigner_1dof, wse_pure
from .torus_classical import (ORDERS, CoupledMap, cse, gaussian_liouville, liouville_trajectory,
                              marginal_q1p1)
from .torus_quantum import (TorusHilbert, build_2dof_propagator, build_cat_propagator,
                            build_coupling_diagonal, coherent_state, elliptic, hyperbolic,
                            product_state, trajectory)

log = logging.getLogger(__name__)

MAX_DIM = 128
CASES = {
    "hh": (hyperbolic, hyperbolic),
    "ee": (elliptic, elliptic),
    "he": (hyperbolic, elliptic),
    "eh": (elliptic, hyperbolic),
}
SNAPSHOT_REDUCTION = "wigner of the dof-1 reduced density; liouville (q1,p1) marginal"


@dataclass
class ScenarioConfig:
    case: str = "hh"
    dim: int = 64
    k: float = 0.25
    kc: float = 0.5
    center1: Tuple[float, float] = (0.5, 0.5)
    center2: Tuple[float, float] = (0.5, 0.5)
    steps: int = 20
    cse_stride: int = 1
    # CSE is also taken at every step up to this time, whatever the stride
    cse_dense_until: int = 0
    # None runs the classical side for all steps, 0 disables it
    classical_steps: Optional[int] = None
    subsample: int = 2
    nc: Optional[int] = None
    order: str = "kick_last"
    snapshot_times: Tuple[int, ...] = ()
    out_dir: Optional[str] = None
    png: bool = False
    serial: bool = False

    def __post_init__(self):
        if self.case not in CASES:
            raise ValueError(f"case must be one of {sorted(CASES)}, got {self.case!r}")
        if int(self.dim) != self.dim or self.dim < 2:
            raise ValueError("dim must be an integer >= 2")
        if self.dim > MAX_DIM:
            raise ValueError(f"dim {self.dim} exceeds the memory guard of {MAX_DIM}")
        if self.steps < 0:
            raise ValueError("steps must be >= 0")
        if self.cse_stride < 1 or self.subsample < 1:
            raise ValueError("cse_stride and subsample must be >= 1")
        if self.classical_steps is not None and self.classical_steps < 0:
            raise ValueError("classical_steps must be >= 0")
        if self.nc is not None and self.nc < 2:
            raise ValueError("nc must be >= 2")
        if self.order not in ORDERS:
            raise ValueError(f"order must be one of {ORDERS}")
        if len(self.center1) != 2 or len(self.center2) != 2:
            raise ValueError("centres are (q, p) pairs")
        self.center1 = tuple(float(x) for x in self.center1)
        self.center2 = tuple(float(x) for x in self.center2)
        self.snapshot_times = tuple(sorted({int(t) for t in self.snapshot_times}))
        bad = [t for t in self.snapshot_times if not 0 <= t <= self.steps]
        if bad:
            raise ValueError(f"snapshot times {bad} outside [0, {self.steps}]")

    @property
    def cells(self) -> int:
        return self.nc or self.dim

    @property
    def last_classical(self) -> int:
        return self.steps if self.classical_steps is None else min(self.classical_steps, self.steps)

    def wants_cse(self, t: int) -> bool:
        if self.classical_steps == 0 or t > self.last_classical:
            return False
        return t <= self.cse_dense_until or t % self.cse_stride == 0

    def coupled_map(self) -> CoupledMap:
        m1, m2 = CASES[self.case]
        return CoupledMap(m1(self.k), m2(self.k), self.kc, self.order)


@dataclass
class EntropySeries:
    t: np.ndarray
    wse_half: np.ndarray
    # NaN where the classical entropy was not evaluated
    cse_half: np.ndarray

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("t,wse_half,cse_half\n")
        for t, w, c in zip(self.t, self.wse_half, self.cse_half):
            cs = "" if math.isnan(c) else "%.12e" % c
            buf.write("%d,%.12e,%s\n" % (t, w, cs))
        return buf.getvalue()

    @classmethod
    def from_csv(cls, path) -> "EntropySeries":
        with open(path, newline="") as f:
            rows = list(csv.DictReader(f))
        return cls(np.array([int(r["t"]) for r in rows]),
                   np.array([float(r["wse_half"]) for r in rows]),
                   np.array([float(r["cse_half"]) if r["cse_half"] else np.nan for r in rows]))

    def cse_points(self):
        ok = ~np.isnan(self.cse_half)
        return self.t[ok], self.cse_half[ok]


@dataclass
class ScenarioResult:
    config: ScenarioConfig
    series: EntropySeries
    wigner: Dict[int, np.ndarray] = field(default_factory=dict)
    liouville: Dict[int, np.ndarray] = field(default_factory=dict)
    renorm_factors: list = field(default_factory=list)


def _set_serial(serial: bool):
    if not serial:
        return None
    import numba
    from threadpoolctl import threadpool_limits
    numba.set_num_threads(1)
    return threadpool_limits(1)


def run_scenario(config: ScenarioConfig) -> ScenarioResult:
    limits = _set_serial(config.serial)
    try:
        result = _run(config)
    finally:
        if limits is not None:
            limits.restore_original_limits()
    if config.out_dir is not None:
        emit_outputs(result, config.out_dir)
    return result


def _run(config: ScenarioConfig) -> ScenarioResult:
    space = TorusHilbert(config.dim)
    cm = config.coupled_map()
    u = build_2dof_propagator(build_cat_propagator(cm.map1, space),
                              build_cat_propagator(cm.map2, space),
                              build_coupling_diagonal(config.kc, space))
    psi0 = product_state(coherent_state(*config.center1, space),
                         coherent_state(*config.center2, space))
    snaps = set(config.snapshot_times)
    n = config.steps + 1
    wse = np.empty(n)
    cse_half = np.full(n, np.nan)
    wigner = {}
    for t, psi in enumerate(trajectory(psi0, u, config.steps)):
        wse[t] = wse_pure(psi)
        if t in snaps:
            wigner[t] = wigner_1dof(reduced_density(psi, 1))
    log.info("%s quantum: %d steps done, final wse/2 = %.4f", config.case, config.steps, wse[-1])

    liouville = {}
    result = ScenarioResult(config, EntropySeries(np.arange(n), wse, cse_half), wigner, liouville)
    if config.classical_steps == 0:
        return result
    rho0 = gaussian_liouville(config.center1 + config.center2, space, config.cells)
    last = config.last_classical
    classical = liouville_trajectory(rho0, cm, last, config.subsample, result.renorm_factors)
    for t, grid in enumerate(classical):
        if config.wants_cse(t):
            cse_half[t] = cse(grid)
            log.info("%s t=%d wse/2=%.4f cse/2=%.4f", config.case, t, wse[t], cse_half[t])
        if t in snaps:
            liouville[t] = marginal_q1p1(grid)
    return result


def config_echo(config: ScenarioConfig) -> str:
    cm = config.coupled_map()
    lines = []
    for f in fields(config):
        v = getattr(config, f.name)
        if isinstance(v, tuple):
            v = ",".join(str(x) for x in v)
        lines.append(f"{f.name}={v}")
    lines += [
        f"hbar={TorusHilbert(config.dim).hbar!r}",
        f"cells_per_axis={config.cells}",
        f"map1={cm.map1.m11},{cm.map1.m12},{cm.map1.m21},{cm.map1.m22}",
        f"map2={cm.map2.m11},{cm.map2.m12},{cm.map2.m21},{cm.map2.m22}",
        f"classical_gaussian_sigma={math.sqrt(TorusHilbert(config.dim).hbar)!r}",
        f"snapshots={SNAPSHOT_REDUCTION}",
    ]
    return "\n".join(lines) + "\n"


def emit_outputs(result: ScenarioResult, out_dir) -> Path:
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc}") from exc
    if not os.access(out, os.W_OK):
        raise PermissionError(f"output directory {out} is not writable")
    config = result.config
    _write(out / "entropy.csv", result.series.to_csv())
    _write(out / "config_echo", config_echo(config))
    for t, w in result.wigner.items():
        _write_grid(out / f"wigner_dof1_t{t}.csv", w)
    for t, g in result.liouville.items():
        _write_grid(out / f"liouville_q1p1_t{t}.csv", g)
    if config.png:
        _render_pngs(result, out)
    return out


def _write(path: Path, text: str):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)


def _write_grid(path: Path, grid: np.ndarray):
    buf = io.StringIO()
    np.savetxt(buf, grid, fmt="%.12e", delimiter=",")
    _write(path, buf.getvalue())


def _render_pngs(result: ScenarioResult, out: Path):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    # rows index q, so transpose to put p on the vertical axis
    for t, w in result.wigner.items():
        plt.imsave(out / f"wigner_dof1_t{t}.png", w.T, cmap="gray", origin="lower")
    for t, g in result.liouville.items():
        plt.imsave(out / f"liouville_q1p1_t{t}.png", g.T, cmap="gray", origin="lower")


def plateau(series: EntropySeries, fraction: float = 0.1) -> float:
    """Mean wse/2 over the final `fraction` of the run."""
    n = max(1, int(round(len(series.t) * fraction)))
    return float(np.mean(series.wse_half[-n:]))


def time_to_reach(series: EntropySeries, level: float) -> int:
    hit = np.nonzero(series.wse_half >= level)[0]
    return int(series.t[hit[0]]) if hit.size else -1


def growth_rate(series: EntropySeries, times=(1, 2, 3)) -> float:
    """Least-squares slope of wse/2 over the given times."""
    t = np.asarray(times)
    return float(np.polyfit(t, series.wse_half[t], 1)[0])
