"""Square-difference-free sets, additive energy of rationals with small
denominators, and the circle-method tools that connect them."""

__version__ = "0.1.0"

from .config import ConstantsConfig, load_constants
from .energy import energy, energy_brute, energy_conv, energy_mitm, convolution_power
from .errors import (DomainError, InvalidArgument, InvalidDenominator, PreconditionError,
                     ResourceError, ScaleError, SparseBranch, SqdiffError)
from .rationals import RationalSet, ReducedRational, enumerate_rationals, reduce
from .sdf import IntegerSet, greedy_sdf, is_sdf, planted_sdf, random_sdf

__all__ = [
    "ConstantsConfig", "load_constants",
    "energy", "energy_brute", "energy_conv", "energy_mitm", "convolution_power",
    "DomainError", "InvalidArgument", "InvalidDenominator", "PreconditionError",
    "ResourceError", "ScaleError", "SparseBranch", "SqdiffError",
    "RationalSet", "ReducedRational", "enumerate_rationals", "reduce",
    "IntegerSet", "greedy_sdf", "is_sdf", "planted_sdf", "random_sdf",
]
