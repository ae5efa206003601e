"""Squeezed and coherent states in time-dependent quadratic potentials.

The dynamics of ``V(x, tau) = g2 x^2 + g1 x + g0`` (hbar = m = 1) reduce to a
unit-Wronskian pair of auxiliary solutions plus two driving integrals; every
expectation value, covariance and ladder operator is built from those.
"""

from .aux_solutions import AuxiliaryBasis, BasisInitialConditions, analytic_basis, basis_for, numeric_basis
from .driving import DrivingIntegrals, driving_for, driving_integrals
from .errors import (ConstantsNotDefinedError, DomainError, DomainEscapeError, EvaluationError, IntegrationError,
                     NumericalError, ParseError, QuadratureError, RangeError, ResolutionError, SqueezeDynError,
                     ValidationError)
from .expr import CoefficientFn, parse
from .phase_space import (covariance, expect_xp_alpha_z, expect_xp_from_initial, expect_xp_z_alpha,
                          params_alpha_z, solve_alpha_given_z, transfer_matrix, uncertainty_product)
from .systems import SystemKind, SystemSpec, make_system

__version__ = "0.1.0"
