"""Quivers, their representations, tensor products, stability and moment-map flows."""
from ._accel import BACKEND
from .quiver import (Correspondence, Edge, Path, Quiver, QuiverError, TensorQuiverMap, a_quiver,
                     clone_edge, clone_vertex, collapse_edges, collapse_vertices, delete_edge,
                     delete_vertex, enumerate_paths, euler_form, is_indivisible, jordan_quiver,
                     kronecker_quiver, opposite, tensor_quiver)
from .path_algebra import (CommutationGenerator, PathAlgebraElement, Relation, commutation_generators,
                           count_paths_mod_ideal, factored_count, normal_form)
from .representation import (Representation, StabilityData, ThinVerdict, balance_theta, direct_sum,
                             evaluate_path, satisfies_relations, slope, thin_stability)
from .tensor_rep import dual, restrict_along, tensor, tensor_theta, transported_theta
from .moment_flow import (FlowConfig, FlowReport, bracket, certify_polystable, inner_product,
                          kempf_ness_flow, moduli_tangent_dim, verify_tensor_polystability,
                          vortex_residual)
from .segre import (DiamondInvariants, diagonal_residual, diamond_invariants, in_segre_image,
                    segre_quadric_residual)
from .charvar import (SymPoly, char_poly_invariants, equivariance_check, grid_test, grid_test_r,
                      joint_spectrum, phi_substitute, phi_substitute_r, tau, tau_r)

__version__ = "0.1.0"
