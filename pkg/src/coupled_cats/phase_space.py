"""
Reduced density matrices, entropies, operator-Schmidt spectra and the
discrete Wigner transform on the 2N x 2N half-step torus lattice.
"""
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .torus_quantum import QuantumState

WIGNER_2DOF_MAX_DIM = 8
EIG_CLAMP = 1e-10


@dataclass(frozen=True)
class SchmidtSpectrum:
    sigmas: np.ndarray
    norm: float

    @classmethod
    def from_sigmas(cls, sigmas) -> "SchmidtSpectrum":
        s = np.sort(np.clip(np.asarray(sigmas, dtype=float), 0.0, None))[::-1]
        return cls(s, float(np.sqrt(np.sum(s ** 2))))

    @property
    def normalized(self) -> np.ndarray:
        return self.sigmas / self.norm


def check_density(rho: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got shape {rho.shape}")
    if abs(np.trace(rho) - 1) > tol:
        raise ValueError(f"density matrix trace {np.trace(rho)} differs from 1")
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise ValueError("density matrix is not Hermitian")
    return rho


def shannon(probs: np.ndarray) -> float:
    """-sum p ln p over the strictly positive entries."""
    p = probs[probs > 0]
    return float(-np.sum(p * np.log(p)))


def reduced_density(state: QuantumState, which: int) -> np.ndarray:
    if state.dof != 2:
        raise ValueError("reduced density needs a two-degree-of-freedom state")
    psi = state.matrix()
    if which == 1:
        return psi @ psi.conj().T
    if which == 2:
        return psi.T @ psi.conj()
    raise ValueError(f"subsystem must be 1 or 2, got {which}")


def von_neumann_entropy(rho: np.ndarray) -> float:
    rho = check_density(rho)
    lam = linalg.eigvalsh(rho)
    if lam.min() < -1e-8:
        raise ValueError(f"density matrix has eigenvalue {lam.min():.3e} < 0")
    lam = np.where(lam < EIG_CLAMP, 0.0, lam)
    return shannon(lam)


def realign(rho: np.ndarray) -> np.ndarray:
    """Rows (j1, k1), columns (j2, k2) for a bipartite operator with equal factors."""
    d = rho.shape[0]
    n = int(round(np.sqrt(d)))
    if rho.shape != (d, d) or n * n != d:
        raise ValueError(f"operator dimension {rho.shape} is not a square of the factor dimension")
    return rho.reshape(n, n, n, n).transpose(0, 2, 1, 3).reshape(d, d)


def operator_schmidt_spectrum(rho: np.ndarray) -> SchmidtSpectrum:
    return SchmidtSpectrum.from_sigmas(linalg.svdvals(realign(rho)))


def separability_entropy(spectrum) -> float:
    """Entropy of the normalized squared Schmidt coefficients; scale invariant."""
    s = spectrum.sigmas if isinstance(spectrum, SchmidtSpectrum) else np.asarray(spectrum, dtype=float)
    top = np.max(np.abs(s)) if s.size else 0.0
    if top == 0:
        raise ValueError("separability entropy undefined for an all-zero spectrum")
    s = s / top
    w = s ** 2
    return shannon(w / w.sum())


def wse_pure(state: QuantumState) -> float:
    """Half the Wigner separability entropy of a pure state, i.e. its entanglement entropy."""
    if abs(state.norm - 1) > 1e-8:
        raise ValueError(f"state norm {state.norm} differs from 1")
    return von_neumann_entropy(reduced_density(state, 1))


def wigner_transform(rho: np.ndarray) -> np.ndarray:
    """
    Complex chord-sum transform

        W(a, b) = 1/(2N) sum_{j+k=a} rho_jk exp(-i pi b (j-k)/N)

    on a, b in {0..2N-1}. Real for Hermitian input.
    """
    n = rho.shape[0]
    j, k = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    g = np.zeros((2 * n, 2 * n), dtype=complex)
    # (j+k, j-k) determines (j, k) uniquely, so no entries collide
    g[j + k, (j - k) % (2 * n)] = rho
    return np.fft.fft(g, axis=1) / (2 * n)


def wigner_1dof(rho: np.ndarray) -> np.ndarray:
    rho = check_density(rho)
    w = wigner_transform(rho)
    residue = np.max(np.abs(w.imag))
    if residue > 1e-10:
        raise ValueError(f"Wigner function has imaginary residue {residue:.3e}")
    return w.real


def wigner_axes(n: int) -> tuple:
    """Grid coordinates q = a/(2N), p = b/(2N)."""
    x = np.arange(2 * n) / (2 * n)
    return x, x


def _wigner_basis(n: int) -> np.ndarray:
    """Matrix taking a flattened operator (j, k) to its flattened Wigner grid (a, b)."""
    t = np.empty((4 * n * n, n * n), dtype=complex)
    e = np.zeros((n, n), dtype=complex)
    for col in range(n * n):
        e.flat[col] = 1.0
        t[:, col] = wigner_transform(e).reshape(-1)
        e.flat[col] = 0.0
    return t


def wigner_2dof(state: QuantumState) -> np.ndarray:
    """Wigner array of a pure 2-DOF state, rows (a1, b1), columns (a2, b2)."""
    n = state.space.dim
    if n > WIGNER_2DOF_MAX_DIM:
        raise ValueError(f"2-DOF Wigner array refused for N > {WIGNER_2DOF_MAX_DIM}")
    psi = state.amplitudes
    r = realign(np.outer(psi, psi.conj()))
    t = _wigner_basis(n)
    w = t @ r @ t.T
    return w.real


def wse_from_wigner(state: QuantumState) -> float:
    w = wigner_2dof(state)
    return separability_entropy(linalg.svdvals(w)) / 2
