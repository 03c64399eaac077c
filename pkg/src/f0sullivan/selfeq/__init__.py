"""Self-equivalences of F0 models: cofactors, pivot expansions, constraints, decompositions."""
from .constraints import ConstraintSet, coefficient_formulas, derive_constraints
from .decompose import (Decomposition, DecompositionFailure, decompose_by_A,
                        decompose_by_linear_system, decompose_recursive, nonregularity_hypotheses)
from .identities import verify_identities
from .selfequiv import (EvenMap, SelfEquivalence, SelfEquivalenceError, make_selfeq,
                        triviality_check, u_decomposition, verify_prop31)
from .theta import Roles, ThetaExpansion, ThetaTable, theta_expand
