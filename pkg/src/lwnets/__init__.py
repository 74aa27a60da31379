"""Discrete linear Weingarten nets in space forms.

Lightcone lifts into the signature-(4,2) model of Lie sphere geometry,
mixed-area curvatures, Koenigs-dual isothermic splittings, the flat loop
of lattice connections with its trivialization (spectral deformation),
and the Lawson transformation between space forms.
"""
from .grid import EdgeField, GridDomain
from .spaceform import (CurvatureSphereData, FaceCurvatures, FamilyMember,
                        GeometryError, LegendreNet, SpaceFormFrame,
                        WeingartenCoefficients, classify_parallel_family,
                        coefficient_transform, curvature_spheres,
                        face_curvatures, family_matrix, fit_weingarten,
                        is_minimal, lift_euclidean, mixed_area, mixed_areas,
                        parallel_theta, parallel_transform, project_euclidean,
                        renormalize_frame, require_valid, swap_roles,
                        validate_legendre)
from .omega import (MoutardLifts, OmegaPair, complexify, cross_ratio,
                    edge_labelling, face_cross_ratios, koenigs_residual,
                    moutard_lifts, realify, recover_christoffel_ratio, respan,
                    respan_through, split_weingarten, validate_pair)
from .connections import (Trivialization, calapso_transform, face_holonomy,
                          gamma, gamma_g, holonomy_deviation, trivialize)
from .lawson import (TransformedComplexes, lawson_cmc, lawson_constant_gauss,
                     lawson_constant_harmonic, lawson_flat_front,
                     lawson_generic, lawson_invariants, project_pair,
                     transport_complexes)
from .generators import (HolomorphicLattice, cgc_r3_net, christoffel_dual_r3,
                         clifford_net, flat_front_net, gen_holomorphic,
                         minimal_net, pipeline, sphere_net)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
