"""Algebraic relations satisfied by hypergeometric series modulo a prime."""

from .errors import HypothesisViolation, NotPIntegral
from .fp import FpPoly, FpRatFn, FpSeries
from .hypergeometric import ParamSystem, PrimeContext, make_system, parse_params, series_modp
from .kernels import BACKEND
from .relation import Annihilator, build_system, construct, construct_two_term, eliminate
from .structure import admissible_set, check_p_property
from .verification import bound_audit, lucas_check, verify_relation

__all__ = [
    "BACKEND",
    "Annihilator",
    "FpPoly",
    "FpRatFn",
    "FpSeries",
    "HypothesisViolation",
    "NotPIntegral",
    "ParamSystem",
    "PrimeContext",
    "admissible_set",
    "bound_audit",
    "build_system",
    "check_p_property",
    "construct",
    "construct_two_term",
    "eliminate",
    "lucas_check",
    "make_system",
    "parse_params",
    "series_modp",
    "verify_relation",
]
