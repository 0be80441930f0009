# coding: utf-8

# # Classical density on a 4-torus grid
#
# A Gaussian blob is pulled back through the exact inverse of the coupled map.
# Its separability entropy grows, then decays once the filaments drop below a cell.

# %%

import numpy as np

from coupled_cats import (CoupledMap, TorusHilbert, cse, gaussian_liouville, hyperbolic,
                          liouville_trajectory)

nc = 32  # 64 is the production grid; 32 keeps this quick
space = TorusHilbert(nc)
cm = CoupledMap(hyperbolic(0.25), hyperbolic(0.25), 0.5, order="kick_last")
grid = gaussian_liouville((0.5, 0.5, 0.5, 0.5), space, nc)

# %%

factors = []
for t, g in enumerate(liouville_trajectory(grid, cm, 8, factors=factors)):
    print(t, f"{cse(g):.3f}")

print("renormalization factors:", np.round(factors, 4))
