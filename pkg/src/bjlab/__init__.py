"""Exact Birkhoff-James and norm-derivative orthogonality on polyhedral normed spaces."""
from .errors import BJLabError, HypothesisViolated, InternalError, InvalidInput
from .kset import SearchConfig, equivalence_matrix, falsification_search, reproduce_counterexamples
from .operators import LinearOperator, is_scalar_isometry
from .ortho import is_bj_orthogonal, rho, rho_minus, rho_plus
from .preservation import preserves_bj_at, preserves_bj_on, preserves_rho_at
from .space import PolyhedralSpace, norm, space_from_facets, space_from_vertices
from .spaces import l1, linf, named_space

__version__ = "0.1.0"
