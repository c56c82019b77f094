"""Exact arithmetic substrate."""

from __future__ import annotations

from .finite_field import GF, GFp2
from .matrix import ExactMatrix, SNFResult, cofactor_det, det_exact, smith_normal_form, symmetric_signature
from .multiquad import MultiQuad, field_tag, sqrt
from .numtheory import is_prime, legendre_symbol, primes_up_to, sqrt_mod
from .poly import SparsePoly, parse_poly, parse_scalar, poly_identity_zero, resultant_univariate
from .quadform import FiniteQuadraticForm, discriminant_form, fqf_isomorphic

__all__ = [
    "ExactMatrix",
    "FiniteQuadraticForm",
    "GF",
    "GFp2",
    "MultiQuad",
    "SNFResult",
    "SparsePoly",
    "cofactor_det",
    "det_exact",
    "discriminant_form",
    "field_tag",
    "fqf_isomorphic",
    "is_prime",
    "legendre_symbol",
    "parse_poly",
    "parse_scalar",
    "poly_identity_zero",
    "primes_up_to",
    "resultant_univariate",
    "smith_normal_form",
    "sqrt",
    "sqrt_mod",
    "symmetric_signature",
]
