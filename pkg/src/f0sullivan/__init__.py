"""Exact computations with free graded-commutative cochain algebras and F0 models."""
from .graded_poly import (AlgebraError, Element, Generator, GradedSignature, INHOMOGENEOUS, add,
                          coeff_wrt, cohomological_degree, deg_in, format_element, mul, parse,
                          substitute)
from .ideal import (DivisionResult, GroebnerBasis, RegularityCertificate, divide_with_cofactors,
                    groebner, ideal_quotient, is_regular_sequence, prop22_check, quotient_dimension,
                    verify_witness)
from .dga import (CochainAlgebra, CylinderAlgebra, HomotopyCertificate, HomotopyFailure, Morphism,
                  apply_differential, build_cylinder, check_homotopy, cohomology_dimension, e_theta,
                  homotopy_from_primitive, identity, is_cochain_map, make_cochain_algebra,
                  solve_coboundary)
from .f0_model import F0Error, F0Model, NotRegular, build_f0, normalize, verify_f0_cohomology

__version__ = "0.1.0"
