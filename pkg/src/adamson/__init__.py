"""Exact computations for relative group cohomology, Bredon cohomology and
lower bounds for sectional category and topological complexity of finite groups."""

from .groups import FiniteGroup, Subgroup, cyclic, dihedral, direct_product, quaternion, symmetric, tc_pair
from .lattices import GLattice, permutation_lattice, regular_lattice, trivial_lattice
from .linalg import AbelianInvariants
from .resolutions import bar_resolution, dr_resolution, free_resolution, standard_relative_resolution, \
    tensor_relative_resolution
from .cochains import cohomology_groups, cup_product
from .adamson import adamson_cohomology, canonical_class, universality_check, zero_divisor_model
from .bernstein import bernstein_class, bernstein_height, secat_lower_bounds, tc_lower_bound
from .bredon import bredon_cochain_complex, rho_invariant_estimate
from .spectral import e1_page, e2_page, shapiro_check

__version__ = "0.1.0"
