"""Harmonic analysis on SO(3), S^2 and finite groups."""
from .errors import (BandwidthMismatch, DegreeOutOfRange, DomainError, DomainMismatch,
                     KernelNotEquivariant, LengthMismatch, NcharmError, NonOrthogonalInput,
                     NotASubgroup, SizeLimitExceeded, UnsupportedSize)
from .rotations import (EulerZYZ, SO3Grid, SphereGrid, SpherePoint, compose, euler_to_matrix,
                        inverse, make_so3_grid, make_sphere_grid, matrix_to_euler, random_rotation)
from .special_functions import (assoc_legendre, sph_harm, wigner_D, wigner_D_angles, wigner_d,
                                wigner_d_recurrence)
from .spectral import (SO3Signal, SO3Spectrum, SphereSignal, SphSpectrum, sht_forward, sht_inverse,
                       so3_ft_forward, so3_ft_inverse)
from .equivariant_ops import (cg_table, correlation_peak, gated_nonlinearity, so3_convolve,
                              so3_correlate, spherical_convolve, spherical_correlate, steerable_basis)
from .finite_groups import (FiniteGroup, GroupFunction, admissible_kernel_space, coset_space,
                            equivariant_map_space, generalized_convolve, induce_and_correlate,
                            make_group)

__version__ = "0.1.0"

__all__ = [
    "BandwidthMismatch", "DegreeOutOfRange", "DomainError", "DomainMismatch",
    "KernelNotEquivariant", "LengthMismatch", "NcharmError", "NonOrthogonalInput",
    "NotASubgroup", "SizeLimitExceeded", "UnsupportedSize", "EulerZYZ", "SO3Grid",
    "SphereGrid", "SpherePoint", "compose", "euler_to_matrix", "inverse", "make_so3_grid",
    "make_sphere_grid", "matrix_to_euler", "random_rotation", "assoc_legendre", "sph_harm",
    "wigner_D", "wigner_D_angles", "wigner_d", "wigner_d_recurrence", "SO3Signal",
    "SO3Spectrum", "SphereSignal", "SphSpectrum", "sht_forward", "sht_inverse",
    "so3_ft_forward", "so3_ft_inverse", "cg_table", "correlation_peak", "gated_nonlinearity",
    "so3_convolve", "so3_correlate", "spherical_convolve", "spherical_correlate",
    "steerable_basis", "FiniteGroup", "GroupFunction", "admissible_kernel_space",
    "coset_space", "equivariant_map_space", "generalized_convolve", "induce_and_correlate",
    "make_group",
]
