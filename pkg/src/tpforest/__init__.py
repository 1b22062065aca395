"""Exact construction and total-positivity checking of forest-polynomial triangles."""

from .exactalg import (
    MultiPoly,
    NonnegVerdict,
    R,
    Rational,
    Ring,
    coeff_of,
    format_poly,
    is_coeffwise_nonneg,
    is_homogeneous,
    make_ring,
    parse_poly,
    poly_add,
    poly_mul,
    substitute,
)
from .series import PowerSeries, comp_inverse, compose, lagrange_solve, named_series, solve_autonomous_ode
from .tpcheck import TPReport, check_hankel_tp, check_toeplitz_tp, check_tp, det, tp_seq_builder
from .triangle import (
    PolyMatrix,
    AZ_from_FG,
    named_triangle,
    output_matrix,
    production_matrix,
    riordan,
    riordan_production_from_AZ,
    row_generating,
    special,
)

__version__ = "0.1.0"

__all__ = [
    "AZ_from_FG",
    "check_hankel_tp",
    "check_toeplitz_tp",
    "check_tp",
    "coeff_of",
    "comp_inverse",
    "compose",
    "det",
    "format_poly",
    "is_coeffwise_nonneg",
    "is_homogeneous",
    "lagrange_solve",
    "make_ring",
    "MultiPoly",
    "named_series",
    "named_triangle",
    "NonnegVerdict",
    "output_matrix",
    "parse_poly",
    "poly_add",
    "poly_mul",
    "PolyMatrix",
    "PowerSeries",
    "production_matrix",
    "R",
    "Rational",
    "Ring",
    "riordan",
    "riordan_production_from_AZ",
    "row_generating",
    "solve_autonomous_ode",
    "special",
    "substitute",
    "tp_seq_builder",
    "TPReport",
]
