# coding: utf-8

# # Discrete Wigner function and three routes to the same entropy

# %%

import numpy as np

from coupled_cats import (QuantumState, TorusHilbert, coherent_state, operator_schmidt_spectrum,
                          separability_entropy, wigner_1dof, wse_from_wigner, wse_pure)

n = 32
psi = coherent_state(0.3, 0.7, TorusHilbert(n)).amplitudes
w = wigner_1dof(np.outer(psi, psi.conj()))

print(w.shape, "sum", w.sum(), "purity", 2 * n * np.sum(w ** 2))

# %%
# Each quadrant of the 2N x 2N grid repeats the others up to a sign.

a = np.arange(2 * n)[:, None]
print("ghost check:", np.abs(np.roll(w, -n, axis=1) - (-1.0) ** a * w).max())

# %%
# A random two-mode state: partial trace, realignment and the Wigner SVD agree.

rng = np.random.default_rng(0)
v = rng.normal(size=16) + 1j * rng.normal(size=16)
state = QuantumState(v / np.linalg.norm(v), TorusHilbert(4), dof=2)
rho = np.outer(state.amplitudes, state.amplitudes.conj())

print(wse_pure(state))
print(separability_entropy(operator_schmidt_spectrum(rho)) / 2)
print(wse_from_wigner(state))
