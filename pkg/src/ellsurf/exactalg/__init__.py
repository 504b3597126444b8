"""Exact arithmetic substrate: fields, polynomials, factorization, integer matrices."""

from .factor import (
    DEFAULT_SEED,
    NOT_A_SQUARE,
    cyclotomic,
    degree_pattern_fq,
    factor_fq,
    factor_q,
    hensel_lift,
    is_irreducible_fq,
    is_irreducible_q,
    poly_sqrt,
    roots_fq,
    squarefree_part,
)
from .fields import (
    GF,
    QQ,
    ZZ,
    FieldHom,
    FiniteField,
    IntegersMod,
    Rational,
    RationalField,
    is_prime,
    next_prime,
)
from .matrix import (
    det,
    gram_schmidt_norms,
    hnf,
    integer_kernel,
    inverse,
    is_lll_reduced,
    lattice_intersection,
    lll,
    nullspace,
    rank,
    snf,
    snf_diagonal,
    solve,
)
from .poly import Poly, RationalFunction

__all__ = [
    "DEFAULT_SEED",
    "NOT_A_SQUARE",
    "GF",
    "QQ",
    "ZZ",
    "FieldHom",
    "FiniteField",
    "IntegersMod",
    "Poly",
    "Rational",
    "RationalField",
    "RationalFunction",
    "cyclotomic",
    "degree_pattern_fq",
    "det",
    "factor_fq",
    "factor_q",
    "gram_schmidt_norms",
    "hensel_lift",
    "hnf",
    "integer_kernel",
    "inverse",
    "is_irreducible_fq",
    "is_irreducible_q",
    "is_lll_reduced",
    "is_prime",
    "lattice_intersection",
    "lll",
    "next_prime",
    "nullspace",
    "poly_sqrt",
    "rank",
    "roots_fq",
    "snf",
    "snf_diagonal",
    "solve",
    "squarefree_part",
]
