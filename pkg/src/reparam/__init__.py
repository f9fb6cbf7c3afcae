"""Conformable derivatives as classical derivatives in a reparametrized clock.

A conformable problem with weight ``psi`` becomes a classical one in
``tau = phi(t) = int_0^t ds / psi(s)``. The package solves it both ways and
contrasts the result with a genuine Caputo (memory) solver.
"""

from ._kernels import BACKEND
from .conformable import (
    ClassicalIVP,
    ConformableIVP,
    ScalarFunction,
    conf_derivative_limit,
    conf_derivative_product,
    linear_ode_ivp,
    pull_back,
    reparametrize,
    transform_linear_ode,
)
from .errors import BlowUpError, ConvergenceError, DomainError, ReparamError, StepSizeUnderflow
from .solvers import (
    CaputoIVP,
    EquivalenceReport,
    Method,
    SolverConfig,
    abm_weights,
    equivalence_report,
    integrate_caputo_abm,
    integrate_classical,
    integrate_conformable_direct,
)
from .trajectory import Trajectory
from .weights import WeightKind, WeightSpec, phi, phi_inverse, psi

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BlowUpError",
    "CaputoIVP",
    "ClassicalIVP",
    "ConformableIVP",
    "ConvergenceError",
    "DomainError",
    "EquivalenceReport",
    "Method",
    "ReparamError",
    "ScalarFunction",
    "SolverConfig",
    "StepSizeUnderflow",
    "Trajectory",
    "WeightKind",
    "WeightSpec",
    "abm_weights",
    "conf_derivative_limit",
    "conf_derivative_product",
    "equivalence_report",
    "integrate_caputo_abm",
    "integrate_classical",
    "integrate_conformable_direct",
    "linear_ode_ivp",
    "phi",
    "phi_inverse",
    "psi",
    "pull_back",
    "reparametrize",
    "transform_linear_ode",
]
