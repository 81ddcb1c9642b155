"""Exact binomial cup-one algebras, cochain operations and Massey products."""

from .cochain import Cochain, bockstein, coboundary, cup, cup_one, verify_identity, zeta_cochain
from .delta import DeltaSet, build_presentation_xk, build_sphere_attach, build_torus
from .errors import CuponeError
from .intpoly import ZetaPoly, poly_mul, zeta_apply
from .massey import CohomologyContext, distinguish_xk, restricted_triple, triple_massey
from .rings import ZZ, Ring

__all__ = [
    "Cochain",
    "CohomologyContext",
    "CuponeError",
    "DeltaSet",
    "Ring",
    "ZZ",
    "ZetaPoly",
    "bockstein",
    "build_presentation_xk",
    "build_sphere_attach",
    "build_torus",
    "coboundary",
    "cup",
    "cup_one",
    "distinguish_xk",
    "poly_mul",
    "restricted_triple",
    "triple_massey",
    "verify_identity",
    "zeta_apply",
    "zeta_cochain",
]
__version__ = "0.1.0"
