"""
Classical coupled perturbed cat maps and a discretized Liouville density.

Points are arrays whose last axis holds (q, p) or (q1, p1, q2, p2).
Densities are 4-D arrays of cell masses indexed [iq1, ip1, iq2, ip2] with
cell centres at (i + 1/2)/nc.
"""
import logging
from dataclasses import dataclass

import numba
import numpy as np
from scipy import linalg

from .phase_space import separability_entropy
from .torus_quantum import SymplecticMap, TorusHilbert

log = logging.getLogger(__name__)

EXACT_SVD_MAX_DIM = 1024


ORDERS = ("kick_first", "kick_last")


@dataclass(frozen=True)
class CoupledMap:
    """
    Two kicked cat maps coupled through kappa(q1, q2).

    order="kick_first" kicks the momenta and then applies M1, M2;
    order="kick_last" applies M1, M2 and then kicks, which is the classical
    limit of the position-space propagator (its kick phase sits on the row index).
    """
    map1: SymplecticMap
    map2: SymplecticMap
    kc: float = 0.0
    order: str = "kick_first"

    def __post_init__(self):
        if self.order not in ORDERS:
            raise ValueError(f"order must be one of {ORDERS}, got {self.order!r}")


def _wrap(x):
    x = np.mod(x, 1.0)
    # x mod 1 rounds up to exactly 1.0 for tiny negative x
    return np.where(x >= 1.0, 0.0, x)


def kick(q, k):
    return -k / (2 * np.pi) * np.sin(2 * np.pi * q)


def coupling_kick(q1, q2, kc):
    return -kc / (2 * np.pi) * np.sin(2 * np.pi * (q1 + q2))


def _linear(m: np.ndarray, q, p):
    return m[0, 0] * q + m[0, 1] * p, m[1, 0] * q + m[1, 1] * p


def forward_1dof(x, cat: SymplecticMap) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    q, p = x[..., 0], x[..., 1]
    q, p = _linear(cat.matrix, q, p + kick(q, cat.kick))
    return np.stack([_wrap(q), _wrap(p)], axis=-1)


def inverse_1dof(x, cat: SymplecticMap) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    u, v = _linear(cat.inverse_matrix, x[..., 0], x[..., 1])
    u = _wrap(u)
    return np.stack([u, _wrap(v - kick(u, cat.kick))], axis=-1)


def _kicks(q1, p1, q2, p2, cm: CoupledMap, sign: float):
    c = coupling_kick(q1, q2, cm.kc)
    return (p1 + sign * (kick(q1, cm.map1.kick) + c),
            p2 + sign * (kick(q2, cm.map2.kick) + c))


def forward_2dof(x, cm: CoupledMap) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    q1, p1, q2, p2 = (x[..., i] for i in range(4))
    if cm.order == "kick_first":
        p1, p2 = _kicks(q1, p1, q2, p2, cm, 1.0)
    q1, p1 = _linear(cm.map1.matrix, q1, p1)
    q2, p2 = _linear(cm.map2.matrix, q2, p2)
    q1, q2 = _wrap(q1), _wrap(q2)
    if cm.order == "kick_last":
        p1, p2 = _kicks(q1, p1, q2, p2, cm, 1.0)
    return np.stack([q1, _wrap(p1), q2, _wrap(p2)], axis=-1)


def inverse_2dof(x, cm: CoupledMap) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    q1, p1, q2, p2 = (x[..., i] for i in range(4))
    if cm.order == "kick_last":
        p1, p2 = _kicks(q1, p1, q2, p2, cm, -1.0)
    q1, p1 = _linear(cm.map1.inverse_matrix, q1, p1)
    q2, p2 = _linear(cm.map2.inverse_matrix, q2, p2)
    q1, q2 = _wrap(q1), _wrap(q2)
    if cm.order == "kick_first":
        p1, p2 = _kicks(q1, p1, q2, p2, cm, -1.0)
    return np.stack([q1, _wrap(p1), q2, _wrap(p2)], axis=-1)


def torus_distance(a, b) -> np.ndarray:
    d = np.abs(np.asarray(a) - np.asarray(b)) % 1.0
    return np.minimum(d, 1.0 - d)


def cell_centers(nc: int) -> np.ndarray:
    return (np.arange(nc) + 0.5) / nc


def gaussian_liouville(center, space: TorusHilbert, nc: int, windings: int = 2) -> np.ndarray:
    """Product of periodized Gaussians of variance hbar sampled at cell centres, total mass 1."""
    if nc < 2:
        raise ValueError("need at least 2 cells per axis")
    x = cell_centers(nc)
    w = np.arange(-windings, windings + 1)
    profiles = []
    for c in np.asarray(center, dtype=float) % 1.0:
        d = x[:, None] - c - w[None, :]
        profiles.append(np.exp(-d ** 2 / (2 * space.hbar)).sum(axis=1))
    grid = np.einsum("a,b,c,d->abcd", *profiles)
    return grid / grid.sum()


def _sample_points(nc: int, s: int):
    """q, p of the s x s sample points of every 2-D cell, shaped (nc*nc, s*s) over ((iq, ip), (m, n))."""
    offsets = (np.arange(s) + 0.5) / (s * nc)
    x = (np.arange(nc)[:, None] / nc + offsets[None, :]).reshape(-1)
    qq, pp = np.meshgrid(x, x, indexing="ij")
    shape = (nc * nc, s * s)
    qq = qq.reshape(nc, s, nc, s).transpose(0, 2, 1, 3).reshape(shape)
    pp = pp.reshape(nc, s, nc, s).transpose(0, 2, 1, 3).reshape(shape)
    return qq, pp


def _preimage_tables(cat: SymplecticMap, order: str, nc: int, s: int):
    """
    Per-DOF pull-back tables for the sample points of every 2-D cell.

    The preimage, in cell units, is (q0 + cq * k, p0 + cp * k) where k is
    minus the coupling kick, also in cells. q0 and p0 are shifted by 2 nc so
    the kernel only ever truncates positive numbers.
    """
    q, p = _sample_points(nc, s)
    inv = cat.inverse_matrix
    if order == "kick_first":
        u, v = _linear(inv, q, p)
        u = _wrap(u)
        q0, p0 = u, _wrap(v - kick(u, cat.kick))
        cq, cp = 0.0, 1.0
        at = u
    else:
        w = p - kick(q, cat.kick)
        q0, p0 = _linear(inv, q, w)
        q0, p0 = _wrap(q0), _wrap(p0)
        cq, cp = float(inv[0, 1]), float(inv[1, 1])
        at = q
    coefs = np.array([cq, cp])
    return (q0 * nc + 2 * nc, p0 * nc + 2 * nc, coefs,
            np.sin(2 * np.pi * at), np.cos(2 * np.pi * at))


@numba.njit(inline="always")
def _cell(x, nc, mask):
    # 0 < x < 4 nc by construction of the tables
    i = int(x)
    if mask >= 0:
        return i & mask
    while i >= nc:
        i -= nc
    return i


def _pullback_body(old, q1, p1, k1, s1, c1, q2, p2, k2, s2, c2, kc_cells):
    nc = old.shape[0]
    mask = nc - 1 if nc & (nc - 1) == 0 else -1
    ncell, ns = q1.shape
    out = np.empty((ncell, ncell))
    scale = 1.0 / (ns * ns)
    for a in numba.prange(ncell):
        for b in range(ncell):
            acc = 0.0
            for m in range(ns):
                qa = q1[a, m]
                pa = p1[a, m]
                sa = s1[a, m]
                ca = c1[a, m]
                for n in range(ns):
                    # minus kappa = kc/(2 pi) sin(2 pi (x1 + x2)), in cells
                    kap = kc_cells * (sa * c2[b, n] + ca * s2[b, n])
                    acc += old[_cell(qa + k1[0] * kap, nc, mask), _cell(pa + k1[1] * kap, nc, mask),
                               _cell(q2[b, n] + k2[0] * kap, nc, mask),
                               _cell(p2[b, n] + k2[1] * kap, nc, mask)]
            out[a, b] = acc * scale
    return out


# every output cell is summed in a fixed order, so both builds give identical bits
_pullback_serial = numba.njit(cache=True)(_pullback_body)
_pullback_parallel = numba.njit(parallel=True, cache=True)(_pullback_body)


def _tables_for(cm: CoupledMap, nc: int, s: int):
    t1 = _preimage_tables(cm.map1, cm.order, nc, s)
    t2 = _preimage_tables(cm.map2, cm.order, nc, s)
    reach = max(np.abs(t1[2]).max(), np.abs(t2[2]).max()) * cm.kc / (2 * np.pi)
    if reach >= 1:
        raise ValueError("coupling strength too large for the pull-back kernel")
    return t1 + t2 + (cm.kc / (2 * np.pi) * nc,)


def liouville_step(grid: np.ndarray, cm: CoupledMap, subsample: int = 2, _tables=None):
    """One pull-back step. Returns the renormalized grid and the renormalization factor."""
    nc = grid.shape[0]
    tables = _tables or _tables_for(cm, nc, subsample)
    kernel = _pullback_parallel if numba.get_num_threads() > 1 else _pullback_serial
    out = kernel(np.ascontiguousarray(grid), *tables)
    total = out.sum()
    return (out / total).reshape(grid.shape), total


def evolve_liouville(grid: np.ndarray, cm: CoupledMap, steps: int, subsample: int = 2) -> np.ndarray:
    """
    Evolve a cell-mass grid by averaging the previous density over the
    preimages of subsample^4 points per cell (nearest-cell lookup), then
    renormalizing to unit mass.
    """
    if steps < 0:
        raise ValueError("steps must be non-negative")
    if subsample < 1:
        raise ValueError("subsample must be >= 1")
    for grid in liouville_trajectory(grid, cm, steps, subsample):
        pass
    return grid


def liouville_trajectory(grid: np.ndarray, cm: CoupledMap, steps: int, subsample: int = 2,
                         factors: list = None):
    """Yield the grid at t = 0, 1, ..., steps; renormalization factors are appended to `factors`."""
    nc = grid.shape[0]
    if grid.shape != (nc,) * 4:
        raise ValueError(f"expected a hypercubic 4-D grid, got shape {grid.shape}")
    if subsample < 1:
        raise ValueError("subsample must be >= 1")
    tables = _tables_for(cm, nc, subsample)
    yield grid
    for t in range(1, steps + 1):
        grid, factor = liouville_step(grid, cm, subsample, tables)
        if factors is not None:
            factors.append(factor)
        log.debug("liouville step %d renormalization factor %.6f", t, factor)
        if not 0.9 <= factor <= 1.1:
            log.warning("liouville step %d renormalization factor %.4f outside [0.9, 1.1]", t, factor)
        yield grid


def singular_values(m: np.ndarray, method: str = "auto") -> np.ndarray:
    """
    Singular values of a real matrix. "gram" takes square roots of the
    eigenvalues of m m^T, discarding those below the rank tolerance; it is
    several times faster than a full SVD at 4096 x 4096.
    """
    if method == "auto":
        method = "svd" if min(m.shape) <= EXACT_SVD_MAX_DIM else "gram"
    if method == "svd":
        return linalg.svdvals(m)
    if method != "gram":
        raise ValueError(f"unknown method {method!r}")
    small = m if m.shape[0] <= m.shape[1] else m.T
    lam = linalg.eigvalsh(small @ small.T)[::-1]
    lam[lam < lam[0] * max(m.shape) * np.finfo(float).eps] = 0.0
    return np.sqrt(lam)


def cse(grid: np.ndarray, method: str = "auto") -> float:
    """Half the separability entropy of the density split as (q1, p1) | (q2, p2)."""
    nc = grid.shape[0]
    m = np.asarray(grid, dtype=float).reshape(nc * nc, -1)
    if not np.any(m):
        raise ValueError("classical separability entropy undefined for an all-zero grid")
    return separability_entropy(singular_values(m, method)) / 2


def marginal_q1p1(grid: np.ndarray) -> np.ndarray:
    return grid.sum(axis=(2, 3))
