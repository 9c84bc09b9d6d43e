"""Jacobian rings of smooth hypersurfaces and checks on their multiplication maps."""

__version__ = "0.1.0"

from .fields import QQ, FieldSpec
from .linalg import RankMatrix, kernel_basis, multi_prime_rank, rank
from .poly import (
    GradedPolynomial,
    directional_derivative,
    euler_check,
    fermat,
    monomial_basis,
    multiply,
    parse_polynomial,
    partial_derivative,
)
from .ring import (
    JacobianRing,
    annihilator_quotient_dims,
    build_jacobian_ring,
    gorenstein_pairing_check,
    monomial_ci_ring,
    multiplication_operator,
    socle_generator,
)
