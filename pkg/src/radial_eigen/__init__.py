"""Radial principal eigenvalues for degenerate Pucci extremal equations.

Computes the principal eigenvalue and positive radial eigenfunction of

    |grad u|^alpha F(D^2 u) + mu u^{1+alpha} / r^gamma = 0

on the punctured unit ball (F one of the two Pucci extremal operators) via
four independent pipelines, plus the parameter sweeps, regularity fits and
closed-form checks that validate them against each other.
"""

from ._backend import BACKEND, USING_NUMBA
from .core import (
    Annulus,
    Ball,
    EigenEstimate,
    ExplicitKind,
    Method,
    Operator,
    Potential,
    PucciParams,
    RadialProblem,
    RadialProfile,
    borderline_eigenvalue,
    dimension_like_params,
    envelope_g,
    envelope_h,
    envelope_h_inv,
    explicit_solution,
    pucci_radial_value,
)
from .errors import (
    BracketError,
    ConvergenceError,
    DomainError,
    FitRejectedError,
    InvariantViolationError,
    NoZeroError,
    ParameterError,
    RadialEigenError,
    SolverError,
    StiffnessError,
    UnsupportedStartupError,
)
from .ode import (
    DirichletProblem,
    StartupExpansion,
    dirichlet_solve,
    integrate,
    make_graded_grid,
    picard_T,
    picard_fixed_point,
    picard_radius,
    rhs_wprime,
    startup,
    startup_expansion,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
