"""Exact commutative algebra for duality questions on weighted-homogeneous singular germs."""

__version__ = "0.1.0"

from .errors import ChDualityError, ParseError
from .poly import MonomialOrder, Polynomial, RingSpec, format_polynomial, parse_polynomial
from .ideal import Ideal
from .groebner import GroebnerBasis, buchberger, normal_form, syzygies
from .resolution import FreeComplex, free_resolution, koszul_complex, summarize
from .loci import LocusReport, intrinsic_loci
from .duality import DualityVerdict, TupleOnZ, VarietyContext

__all__ = [
    "ChDualityError",
    "DualityVerdict",
    "FreeComplex",
    "GroebnerBasis",
    "Ideal",
    "LocusReport",
    "MonomialOrder",
    "ParseError",
    "Polynomial",
    "RingSpec",
    "TupleOnZ",
    "VarietyContext",
    "buchberger",
    "format_polynomial",
    "free_resolution",
    "intrinsic_loci",
    "koszul_complex",
    "normal_form",
    "parse_polynomial",
    "summarize",
    "syzygies",
]
