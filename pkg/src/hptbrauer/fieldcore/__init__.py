"""Exact arithmetic: rationals, sparse polynomials, rational functions, parsing."""
from .ground import GroundMode, is_square_constant, rational_sqrt, squarefree_kernel
from .matrix import NonSquareMatrix, determinant
from .mpoly import MPoly
from .parse import (ExpressionSyntaxError, UnknownVariable, parse_expression,
                    parse_poly, parse_ratfunc)
from .polyalg import (ZeroPolynomialError, gcd, is_square_poly, normalize,
                      polynomial_square_root, pseudo_remainder, rational_content, squarefree_decomposition,
                      squarefree_part)
from .ratfunc import (DenominatorVanishes, DivisionByZeroPolynomial, RatFunc,
                      as_ratfunc, substitute)

__all__ = [
    "GroundMode", "is_square_constant", "rational_sqrt", "squarefree_kernel",
    "NonSquareMatrix", "determinant", "MPoly",
    "ExpressionSyntaxError", "UnknownVariable", "parse_expression", "parse_poly", "parse_ratfunc",
    "ZeroPolynomialError", "gcd", "is_square_poly", "normalize", "polynomial_square_root", "pseudo_remainder",
    "rational_content", "squarefree_decomposition", "squarefree_part",
    "DenominatorVanishes", "DivisionByZeroPolynomial", "RatFunc", "as_ratfunc", "substitute",
]
