"""
Quantized perturbed cat maps on the torus.

One degree of freedom lives in an N-dimensional space with hbar = 1/(2 pi N).
Two coupled degrees of freedom use the flat index j = j1*N + j2, and their
one-step propagator is kept factored as diag(C) (U1 x U2).
"""
from dataclasses import dataclass

import numpy as np

DENSE_2DOF_MAX_DIM = 8


@dataclass(frozen=True)
class TorusHilbert:
    dim: int

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 2:
            raise ValueError(f"Hilbert space dimension must be an integer >= 2, got {self.dim}")

    @property
    def hbar(self) -> float:
        return 1.0 / (2 * np.pi * self.dim)


@dataclass(frozen=True)
class SymplecticMap:
    """Integer unit-determinant torus automorphism with a sinusoidal kick of strength `kick`."""
    m11: int
    m12: int
    m21: int
    m22: int
    kick: float = 0.0

    def __post_init__(self):
        if self.m11 * self.m22 - self.m12 * self.m21 != 1:
            raise ValueError("cat map matrix must have unit determinant")

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.m11, self.m12], [self.m21, self.m22]])

    @property
    def inverse_matrix(self) -> np.ndarray:
        return np.array([[self.m22, -self.m12], [-self.m21, self.m11]])

    def lyapunov(self) -> float:
        """Largest log-modulus eigenvalue of the linear part (0 for elliptic maps)."""
        return float(np.max(np.log(np.abs(np.linalg.eigvals(self.matrix)))))


def hyperbolic(kick: float = 0.25) -> SymplecticMap:
    return SymplecticMap(2, 1, 3, 2, kick)


def elliptic(kick: float = 0.25) -> SymplecticMap:
    return SymplecticMap(0, 1, -1, 0, kick)


@dataclass(frozen=True)
class QuantumState:
    amplitudes: np.ndarray
    space: TorusHilbert
    dof: int = 1

    def __post_init__(self):
        n = self.space.dim ** self.dof
        if self.dof not in (1, 2) or self.amplitudes.shape != (n,):
            raise ValueError(f"expected {n} amplitudes for {self.dof} degree(s) of freedom, "
                             f"got shape {self.amplitudes.shape}")

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def matrix(self) -> np.ndarray:
        """Amplitudes of a 2-DOF state as an N x N array indexed [j1, j2]."""
        if self.dof != 2:
            raise ValueError("matrix form only exists for two degrees of freedom")
        n = self.space.dim
        return self.amplitudes.reshape(n, n)


def product_state(psi1: QuantumState, psi2: QuantumState) -> QuantumState:
    if psi1.space != psi2.space or psi1.dof != 1 or psi2.dof != 1:
        raise ValueError("product_state needs two 1-DOF states on the same torus")
    return QuantumState(np.kron(psi1.amplitudes, psi2.amplitudes), psi1.space, dof=2)


@dataclass(frozen=True)
class DensePropagator:
    matrix: np.ndarray
    space: TorusHilbert

    dof = 1

    def apply(self, amplitudes: np.ndarray) -> np.ndarray:
        return self.matrix @ amplitudes


@dataclass(frozen=True)
class FactoredPropagator:
    """diag(coupling) @ kron(u1, u2), never materialized at production size."""
    u1: np.ndarray
    u2: np.ndarray
    coupling: np.ndarray
    space: TorusHilbert

    dof = 2

    def apply(self, amplitudes: np.ndarray) -> np.ndarray:
        n = self.space.dim
        psi = amplitudes.reshape(n, n)
        out = (self.u1 @ psi @ self.u2.T) * self.coupling.reshape(n, n)
        return out.reshape(-1)

    def dense(self) -> np.ndarray:
        if self.space.dim > DENSE_2DOF_MAX_DIM:
            raise ValueError(f"dense 2-DOF propagator refused for N > {DENSE_2DOF_MAX_DIM}")
        return self.coupling[:, None] * np.kron(self.u1, self.u2)


def build_cat_propagator(cat: SymplecticMap, space: TorusHilbert) -> DensePropagator:
    """
    Position-representation propagator of the kicked cat map,

        U_jk = A exp[i pi/(N m12) (m11 j^2 - 2 j k + m22 k^2)] exp[i K N/(2 pi) cos(2 pi j/N)]

    with A = (1/(i N m12))^(1/2) on the principal branch.
    """
    if cat.m12 == 0:
        raise ValueError("propagator undefined for m12 = 0")
    n = space.dim
    j, k = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    prefactor = np.sqrt(1.0 / (1j * n * cat.m12))
    # integer arithmetic before the float division keeps the phases exact for large j, k
    quad = (cat.m11 * j * j - 2 * j * k + cat.m22 * k * k) % (2 * n * cat.m12)
    phase = np.pi * quad / (n * cat.m12)
    kick = cat.kick * n / (2 * np.pi) * np.cos(2 * np.pi * j / n)
    return DensePropagator(prefactor * np.exp(1j * (phase + kick)), space)


def build_coupling_diagonal(kc: float, space: TorusHilbert) -> np.ndarray:
    n = space.dim
    s = np.add.outer(np.arange(n), np.arange(n)) % n
    return np.exp(1j * n * kc / (2 * np.pi) * np.cos(2 * np.pi * s / n)).reshape(-1)


def build_2dof_propagator(u1: DensePropagator, u2: DensePropagator,
                          coupling: np.ndarray) -> FactoredPropagator:
    n = u1.space.dim
    if u2.space.dim != n or u1.matrix.shape != (n, n) or u2.matrix.shape != (n, n):
        raise ValueError("propagator dimensions do not match")
    if coupling.shape != (n * n,):
        raise ValueError(f"coupling diagonal must have length {n * n}, got {coupling.shape}")
    return FactoredPropagator(u1.matrix, u2.matrix, np.asarray(coupling), u1.space)


def coherent_state(q0: float, p0: float, space: TorusHilbert, windings: int = 2) -> QuantumState:
    """
    Periodized Gaussian centred at (q0, p0); position width sqrt(hbar/2).
    Images |w| <= windings are summed before normalizing.
    """
    n = space.dim
    q0, p0 = q0 % 1.0, p0 % 1.0
    x = np.arange(n)[:, None] / n - q0 - np.arange(-windings, windings + 1)[None, :]
    psi = np.exp(-np.pi * n * x ** 2 + 2j * np.pi * n * p0 * x).sum(axis=1)
    return QuantumState(psi / np.linalg.norm(psi), space, dof=1)


def evolve(state: QuantumState, u, steps: int) -> QuantumState:
    if steps < 0:
        raise ValueError("steps must be non-negative")
    if state.dof != u.dof or state.space.dim != u.space.dim:
        raise ValueError("state and propagator dimensions do not match")
    psi = state.amplitudes
    for _ in range(steps):
        psi = u.apply(psi)
    return QuantumState(psi, state.space, state.dof)


def trajectory(state: QuantumState, u, steps: int):
    """Yield the state at t = 0, 1, ..., steps."""
    yield state
    for _ in range(steps):
        state = evolve(state, u, 1)
        yield state
