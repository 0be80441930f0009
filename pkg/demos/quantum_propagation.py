# coding: utf-8

# # Quantum cat maps on the torus
#
# Build the kicked hyperbolic and elliptic propagators, couple two copies and
# watch the entanglement of an initially separable coherent-state pair grow.

# %%

import numpy as np

from coupled_cats import (TorusHilbert, build_2dof_propagator, build_cat_propagator,
                          build_coupling_diagonal, coherent_state, elliptic, hyperbolic,
                          product_state, trajectory, wse_pure)

space = TorusHilbert(64)
print("hbar =", space.hbar)

# %%
# One-step propagators are plain N x N unitaries.

uh = build_cat_propagator(hyperbolic(0.25), space)
ue = build_cat_propagator(elliptic(0.25), space)
print("unitarity error:", np.abs(uh.matrix.conj().T @ uh.matrix - np.eye(64)).max())

# %%
# The coupled step never forms the N^2 x N^2 matrix; it acts on the state reshaped to N x N.

c = build_coupling_diagonal(0.5, space)
for name, (u1, u2) in {"hh": (uh, uh), "he": (uh, ue), "ee": (ue, ue)}.items():
    u = build_2dof_propagator(u1, u2, c)
    psi = product_state(coherent_state(0.5, 0.5, space), coherent_state(0.5, 0.5, space))
    wse = [wse_pure(s) for s in trajectory(psi, u, 30)]
    print(name, " ".join(f"{abs(w):.2f}" for w in wse[::5]))

# %%
# The chaotic pair saturates near ln(0.6 N).

print("ln(0.6 N) =", np.log(0.6 * 64))
