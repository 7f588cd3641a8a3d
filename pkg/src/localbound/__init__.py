"""Two-sided eigenvalue bounds from local energies of positive test functions.

When an operator has an eigenvector that is nonnegative (ground states of
Schrodinger operators, Perron vectors of nonnegative matrices, and friends),
the pointwise ratio Re(H phi)/Re(phi) of any positive test function phi
brackets the matching eigenvalue between its infimum and supremum. The
subpackages apply this to discrete band operators (Harper model, Hofstadter
butterfly bottom), many-body Coulomb systems through a purely angular
configuration sum, and continuum Schrodinger operators including the Zeeman
Hamiltonian, each validated against built-in oracles.
"""

__version__ = "0.1.0"

from .core import (BoundsResult, LocalEnergyProfile, OptimizerConfig,
                   TestFamily, extrema, optimize_lower, optimize_upper,
                   profile_from_operator, rayleigh_quotient)

__all__ = [
    "BoundsResult", "LocalEnergyProfile", "OptimizerConfig", "TestFamily",
    "extrema", "optimize_lower", "optimize_upper", "profile_from_operator",
    "rayleigh_quotient", "__version__",
]
