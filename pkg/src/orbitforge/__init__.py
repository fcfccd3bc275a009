"""Exact classification of adjoint and coadjoint orbits of semidirect
products GL(n) x| Q^n and O(m, n) x| Q^(m+n), over the rationals."""

from .errors import (DimensionMismatch, InvariantViolation, MembershipError,
                     OrbitForgeError, UnknownSuite, UnsupportedLeaf,
                     VerificationFailure)
from .linalg import (Matrix, Subspace, annihilator, frac, image, intersect,
                     kernel, quotient_coords, signature, subspace_sum, vec)
from .qpoly import QPoly, char_poly, invariant_factors
from .groups import (AlgebraElement, DualAlgebraElement, GroupElement,
                     GroupKind, VectorClass, adjoint_act, affine,
                     coadjoint_act, full_pairing, little_algebra, mu,
                     poincare, project_to_pi, project_to_sigma,
                     vector_orbit_class)
from .flags import (Flag, QuotientForm, compute_flag, dual_flag,
                    extend_commuting, extend_isometry, flag_of_operator,
                    quotient_form)
from .classify import (CentralizerLabel, GLClass, HierarchyNode, OrbitLabel,
                       SOClass, bijection_affine, bijection_pair,
                       classify_adjoint, classify_centralizer,
                       classify_coadjoint, classify_delta, delta_to_adjoint,
                       delta_to_coadjoint, e13_table, enumerate_hierarchy,
                       gl_class, phi_map, small_so_class, so_adjoint_class)
from .verify import (ComponentCountRecord, Report, Sampler, ZigzagCertificate,
                     component_counts, run_suite, suite_names, witt_transport,
                     zigzag_certificate)

__version__ = "0.1.0"

# The affine extension algorithm is named for what it does; keep the more
# descriptive aliases for users reading the interface docs.
extend_affine = extend_commuting
extend_orthogonal = extend_isometry
