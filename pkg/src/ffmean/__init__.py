"""Exact quadratic Dirichlet L-functions over F_q[T] and their mean values."""

from .character import QuadChar, char_sum, check_weil_bound, symbol, symbol_irreducible
from .errors import *  # noqa: F401,F403
from .experiments import (
    ExperimentConfig,
    MomentReport,
    run_mean_value,
    run_nonsquare_monitor,
    run_prop2_check,
    run_verify_suite,
)
from .field import FieldElement, FieldSpec, field_pow, is_prime, make_field, residue_symbol_fq
from .lfunction import (
    ExactRational,
    LPolynomial,
    approx_fe_value,
    class_number,
    l_coefficients_direct,
    l_coefficients_from_points,
    l_value_at_one,
    verify_functional_equation,
)
from .poly import (
    Factorization,
    Poly,
    count_irreducible,
    derivative,
    ensemble_size,
    enumerate_ensemble,
    enumerate_monic,
    euler_phi,
    factor,
    irreducibles,
    is_irreducible,
    is_squarefree,
    mobius,
    parse_poly,
    poly_divrem,
    poly_gcd,
)
from .special import (
    PROOF_ASSEMBLED,
    THEOREM_LITERAL,
    TruncatedEulerProduct,
    corollary_average,
    count_coprime_exact,
    euler_product_P,
    mobius_weighted_sum,
    prop2_main_term,
    theorem2_main_term,
    zeta_A,
)

__version__ = "0.1.0"
