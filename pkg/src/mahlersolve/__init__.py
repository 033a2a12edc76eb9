"""Exact computation of hypergeometric solutions of linear Mahler equations.

The package computes, over Q, all ramified rational solutions of the Riccati
equation attached to a linear Mahler operator, equivalently all monic
first-order right-hand factors M - u, through two independent algorithm
families (a Petkovsek-style divisor search and a Hermite-Pade sieve) that
cross-validate each other, plus an effective differential-transcendence test
for order-2 equations.
"""

from .exactpoly import QQ, Poly, RatFun, FactoredPoly, poly_gcd, poly_factor, graeffe
from .mahler import (
    MahlerOperator,
    NewtonPolygon,
    Edge,
    LambdaData,
    DegreeBounds,
    newton_polygon,
    admissible_data,
    transform_lambda,
    apply_operator,
    riccati_residual,
    lclm,
    annihilator_from_system,
    degree_bounds,
)
from .series import TruncatedSeries, SeriesBasis, series_basis, extend_basis
from .orderbasis import (
    ApproxSyzygyBasis,
    FilteredMatrix,
    minimal_basis,
    filtered_matrix,
    rank_ratfun,
    kernel_cramer,
)
from .gpform import GPForm, bgpf_from_rational, check_bgpf
from .blocks import SolutionBlock, dedupe_blocks
from .petkovsek import (
    riccati_bp,
    riccati_ip,
    riccati_ramified,
    forbidden_factors,
    admissible_pairs,
    poly_solutions_bounded,
)
from .arrangement import (
    MultiPoly,
    LinearComponent,
    NonLinearSignal,
    groebner,
    linear_decompose,
    parametrize,
)
from .riccati_hp import (
    riccati_hp,
    ResourceLimit,
    minor_system,
    candidate_full,
    candidate_component,
    validate_candidate,
)
from .dtrans import TranscendenceVerdict, riccati_r2_operator, independence_check

__all__ = [
    "QQ",
    "Poly",
    "RatFun",
    "FactoredPoly",
    "poly_gcd",
    "poly_factor",
    "graeffe",
    "MahlerOperator",
    "NewtonPolygon",
    "Edge",
    "LambdaData",
    "DegreeBounds",
    "newton_polygon",
    "admissible_data",
    "transform_lambda",
    "apply_operator",
    "riccati_residual",
    "lclm",
    "annihilator_from_system",
    "degree_bounds",
    "TruncatedSeries",
    "SeriesBasis",
    "series_basis",
    "extend_basis",
    "ApproxSyzygyBasis",
    "FilteredMatrix",
    "minimal_basis",
    "filtered_matrix",
    "rank_ratfun",
    "kernel_cramer",
    "GPForm",
    "bgpf_from_rational",
    "check_bgpf",
    "SolutionBlock",
    "dedupe_blocks",
    "riccati_bp",
    "riccati_ip",
    "riccati_ramified",
    "forbidden_factors",
    "admissible_pairs",
    "poly_solutions_bounded",
    "MultiPoly",
    "LinearComponent",
    "NonLinearSignal",
    "groebner",
    "linear_decompose",
    "parametrize",
    "riccati_hp",
    "ResourceLimit",
    "minor_system",
    "candidate_full",
    "candidate_component",
    "validate_candidate",
    "TranscendenceVerdict",
    "riccati_r2_operator",
    "independence_check",
]
