"""Numerical checks for the Wirtinger / Olech-Opial inequalities and the
optimal constant of the associated Emden-Fowler interpolation inequality."""

from .emdenfowler import ExtremalProfile, SolverError, profile_from_first_integral, shoot
from .funcspace import GridFunction, SineSeries, sample_random
from .inequalities import CheckReport, PreconditionError
from .kernels import BACKEND
from .quadrature import AccuracyError, QuadratureResult, i0, i1
from .specfun import DomainError, beta, log_gamma
from .variational import ConstantReport, closed_form_constant, maximize

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "BACKEND",
    "CheckReport",
    "ConstantReport",
    "DomainError",
    "ExtremalProfile",
    "GridFunction",
    "PreconditionError",
    "QuadratureResult",
    "SineSeries",
    "SolverError",
    "beta",
    "closed_form_constant",
    "i0",
    "i1",
    "log_gamma",
    "maximize",
    "profile_from_first_integral",
    "sample_random",
    "shoot",
]
