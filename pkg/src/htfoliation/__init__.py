"""Exact frame calculus and numerical verification for H-type foliations.

The package constructs foliated model spaces (Heisenberg-type groups built
from Clifford representations, and complex/quaternionic Hopf fibrations under
vertical rescaling of the round metric), computes connection, torsion and
curvature tensors of the adapted metric connection by exact polynomial
calculus, and verifies the structural identities, curvature-dimension
inequality, sub-Laplacian spectra and closed-form diameter/eigenvalue bounds
that these spaces satisfy.
"""

__version__ = "0.1.0"

from . import analysis, checks, clifford, geometry, models
from .foliation import FoliationModel

__all__ = ["analysis", "checks", "clifford", "geometry", "models",
           "FoliationModel", "__version__"]
