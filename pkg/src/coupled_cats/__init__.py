"""Quantum and classical separability entropies of coupled perturbed cat maps."""
from .torus_quantum import (
    TorusHilbert, SymplecticMap, QuantumState, DensePropagator, FactoredPropagator,
    hyperbolic, elliptic, product_state, build_cat_propagator, build_coupling_diagonal,
    build_2dof_propagator, coherent_state, evolve, trajectory,
)
from .phase_space import (
    SchmidtSpectrum, reduced_density, von_neumann_entropy, realign, operator_schmidt_spectrum,
    separability_entropy, wse_pure, wigner_1dof, wigner_2dof, wse_from_wigner,
)
from .torus_classical import (
    CoupledMap, forward_1dof, inverse_1dof, forward_2dof, inverse_2dof,
    gaussian_liouville, evolve_liouville, liouville_trajectory, cse,
)

__version__ = "0.1.0"
