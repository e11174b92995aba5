"""Intersection numbers, parabolic Hecke algebras and isotropic random walks
for regular buildings of arbitrary Coxeter type."""

from .catalog import coxeter_matrix, coxeter_system, parse_type
from .coxeter import (
    CoxeterMatrixError,
    CoxeterSystem,
    GroupElement,
    NotSphericalError,
    descents,
    enumerate_parabolic,
    is_spherical,
    length,
    longest_element,
    new_system,
)
from .cosets import (
    DoubleCosetRep,
    NotReducedError,
    double_coset_elements,
    enumerate_R,
    factorize,
    m_reps,
    min_coset_rep,
    min_double_rep,
    poincare,
    stabilizer_cotype,
)
from .hecke import (
    HeckeAlgebra,
    HeckeElement,
    SpanError,
    chamber_constant_hecke,
    commutativity_check,
    idempotent,
    index_character,
    p_basis,
    p_basis_via_idempotents,
    parabolic_constant_via_firstform,
    parabolic_product,
    refinement_constant,
    to_p_basis,
)
from .pregallery import chamber_constant, enumerate_pointed, parabolic_constant, parabolic_row
from .qpoly import ParamAssignment, QPoly, canonical_string, parse_poly
from .randwalk import (
    a2_asymptotic,
    build_walk,
    n_step,
    return_probability,
    return_series,
    simple_walk,
    theta_operator,
    walk_oracle_small,
)
from .spheres import distance_sphere_size, sphere_size, sphere_size_via_cosets

__version__ = "0.1.0"
