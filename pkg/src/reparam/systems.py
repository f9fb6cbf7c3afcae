"""Lorenz benchmark in classical, conformable and Caputo form.

Also fixed points, closed-form Jacobian spectra and the three-way
comparison driver behind the CLI ``lorenz`` command.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .conformable import ClassicalIVP, ConformableIVP
from .errors import DomainError
from .solvers import (
    CaputoIVP,
    EquivalenceReport,
    SolverConfig,
    equivalence_report,
    integrate_caputo_abm,
    integrate_classical,
    integrate_conformable_direct,
)
from .trajectory import Trajectory
from .weights import WeightSpec, phi, psi

__all__ = [
    "LorenzParams",
    "StabilityReport",
    "DEFAULT_IC",
    "lorenz_rhs",
    "lorenz_jacobian",
    "lorenz_fixed_points",
    "jacobian_eigenvalues",
    "cubic_roots",
    "classify",
    "stability_report",
    "complex_step_jacobian",
    "classical_lorenz",
    "conformable_lorenz",
    "caputo_lorenz",
    "ThreeWayResult",
    "run_three_way",
    "trapping_ball_distance",
]

DEFAULT_IC = (1.0, 1.0, 1.0)


@dataclass(frozen=True)
class LorenzParams:
    sigma: float = 10.0
    rho: float = 28.0
    beta: float = 8.0 / 3.0

    def __post_init__(self):
        for name in ("sigma", "rho", "beta"):
            if not getattr(self, name) > 0.0:
                raise DomainError(f"{name} must be positive")


def lorenz_rhs(p: LorenzParams, state) -> np.ndarray:
    """Lorenz vector field. Accepts complex states (used for complex-step Jacobians)."""
    x, y, z = state[0], state[1], state[2]
    return np.array([p.sigma * (y - x), p.rho * x - y - x * z, x * y - p.beta * z])


def lorenz_jacobian(p: LorenzParams, point) -> np.ndarray:
    x, y, z = (float(v) for v in point)
    return np.array([
        [-p.sigma, p.sigma, 0.0],
        [p.rho - z, -1.0, -x],
        [y, x, -p.beta],
    ])


def lorenz_fixed_points(p: LorenzParams) -> list[np.ndarray]:
    pts = [np.zeros(3)]
    if p.rho > 1.0:
        r = math.sqrt(p.beta * (p.rho - 1.0))
        pts.append(np.array([r, r, p.rho - 1.0]))
        pts.append(np.array([-r, -r, p.rho - 1.0]))
    return pts


def _cbrt(v: float) -> float:
    return math.copysign(abs(v) ** (1.0 / 3.0), v)


def cubic_roots(a2: float, a1: float, a0: float) -> list[complex]:
    """Roots of ``l^3 + a2 l^2 + a1 l + a0`` by Cardano, then one Newton step each."""
    shift = a2 / 3.0
    p = a1 - a2 * a2 / 3.0
    q = 2.0 * a2**3 / 27.0 - a2 * a1 / 3.0 + a0
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3
    if disc > 0.0:
        sq = math.sqrt(disc)
        u = _cbrt(-q / 2.0 + sq)
        v = _cbrt(-q / 2.0 - sq)
        re = -(u + v) / 2.0
        im = math.sqrt(3.0) * (u - v) / 2.0
        mus = [complex(u + v), complex(re, im), complex(re, -im)]
    elif p == 0.0:
        mus = [0j, 0j, 0j]
    else:
        r = 2.0 * math.sqrt(-p / 3.0)
        arg = 3.0 * q / (p * r)
        theta = math.acos(min(1.0, max(-1.0, arg))) / 3.0
        mus = [complex(r * math.cos(theta - 2.0 * math.pi * k / 3.0)) for k in range(3)]

    roots = []
    for mu in mus:
        lam = mu - shift
        dp = (3.0 * lam + 2.0 * a2) * lam + a1
        if dp != 0:
            lam = lam - (((lam + a2) * lam + a1) * lam + a0) / dp
        roots.append(lam)
    return roots


def _char_poly(J: np.ndarray):
    tr = J[0, 0] + J[1, 1] + J[2, 2]
    minors = (
        J[0, 0] * J[1, 1] - J[0, 1] * J[1, 0]
        + J[0, 0] * J[2, 2] - J[0, 2] * J[2, 0]
        + J[1, 1] * J[2, 2] - J[1, 2] * J[2, 1]
    )
    det = (
        J[0, 0] * (J[1, 1] * J[2, 2] - J[1, 2] * J[2, 1])
        - J[0, 1] * (J[1, 0] * J[2, 2] - J[1, 2] * J[2, 0])
        + J[0, 2] * (J[1, 0] * J[2, 1] - J[1, 1] * J[2, 0])
    )
    return -tr, minors, -det


def jacobian_eigenvalues(p: LorenzParams, point, jacobian: np.ndarray | None = None) -> list[complex]:
    """Eigenvalues of the Lorenz Jacobian at ``point``, sorted by (real, imag) descending.

    ``jacobian`` overrides the analytic matrix (e.g. one obtained numerically
    from a reparametrized field).
    """
    J = lorenz_jacobian(p, point) if jacobian is None else np.asarray(jacobian, dtype=float)
    roots = cubic_roots(*_char_poly(J))
    return sorted(roots, key=lambda z: (z.real, z.imag), reverse=True)


def classify(eigs: Sequence[complex], tol: float = 1e-10) -> str:
    re = [z.real for z in eigs]
    oscillatory = any(abs(z.imag) > tol for z in eigs)
    if any(abs(r) <= tol for r in re):
        return "non-hyperbolic"
    if all(r < 0 for r in re):
        return "stable focus" if oscillatory else "stable node"
    if all(r > 0 for r in re):
        return "unstable focus" if oscillatory else "unstable node"
    return "saddle-focus" if oscillatory else "saddle"


@dataclass(frozen=True)
class StabilityReport:
    point: tuple[float, float, float]
    eigenvalues: tuple[complex, complex, complex]
    classification: str
    max_residual: float


def stability_report(p: LorenzParams, point) -> StabilityReport:
    J = lorenz_jacobian(p, point)
    eigs = jacobian_eigenvalues(p, point, J)
    a2, a1, a0 = _char_poly(J)
    res = max(abs(((z + a2) * z + a1) * z + a0) for z in eigs)
    return StabilityReport(tuple(float(v) for v in point), tuple(eigs), classify(eigs), float(res))


def complex_step_jacobian(fn: Callable[[np.ndarray], np.ndarray], x, h: float = 1e-30) -> np.ndarray:
    """Jacobian of a real-analytic field by complex-step differentiation."""
    x = np.asarray(x, dtype=float)
    n = x.size
    J = np.empty((n, n))
    for j in range(n):
        xc = x.astype(complex)
        xc[j] += 1j * h
        J[:, j] = np.imag(np.asarray(fn(xc))) / h
    return J


def classical_lorenz(p: LorenzParams, x0=DEFAULT_IC, tau_end: float = 40.0) -> ClassicalIVP:
    return ClassicalIVP(lambda tau, y: lorenz_rhs(p, y), x0, (0.0, tau_end))


def conformable_lorenz(p: LorenzParams, weight: WeightSpec, x0=DEFAULT_IC, t_end: float = 40.0) -> ConformableIVP:
    return ConformableIVP(lambda t, x: lorenz_rhs(p, x), weight, x0, (0.0, t_end), autonomous=True)


def caputo_lorenz(p: LorenzParams, alpha: float, x0=DEFAULT_IC, t_end: float = 40.0, h: float = 1e-3) -> CaputoIVP:
    return CaputoIVP(lambda t, x: lorenz_rhs(p, x), alpha, x0, t_end, h)


def trapping_ball_distance(p: LorenzParams, states) -> np.ndarray:
    """``||(x, y, z - rho - sigma)||`` per row; compare against ``2 (rho + sigma)``."""
    s = np.asarray(states, dtype=float)
    return np.sqrt(s[:, 0] ** 2 + s[:, 1] ** 2 + (s[:, 2] - p.rho - p.sigma) ** 2)


@dataclass(frozen=True)
class ThreeWayResult:
    weight: WeightSpec
    classical: Trajectory
    conformable: Trajectory | None
    caputo: Trajectory | None
    conformable_report: EquivalenceReport | None
    caputo_report: EquivalenceReport | None


def run_three_way(
    alpha: float,
    p: LorenzParams = LorenzParams(),
    horizon: float = 5.0,
    cfg: SolverConfig = SolverConfig(),
    h_caputo: float = 1e-3,
    x0=DEFAULT_IC,
    kind: str = "power",
    tolerance: float = 1e-3,
    include_caputo: bool = True,
    include_conformable: bool = True,
) -> ThreeWayResult:
    """Classical solve in ``tau``, conformable solve in ``t`` and Caputo ABM in ``t``.

    Both the conformable and the Caputo trajectory are compared against the
    classical one pulled back to ``t``. The classical solve always runs.
    """
    if not horizon > 0.0:
        raise DomainError("horizon must be positive")
    weight = WeightSpec.from_name(kind, alpha)
    caputo_ivp = caputo_lorenz(p, alpha, x0, horizon, h_caputo)
    # the Caputo grid may overshoot the horizon by a fraction of a step
    t_cover = max(horizon, caputo_ivp.n_steps * h_caputo) if include_caputo else horizon
    classical = integrate_classical(classical_lorenz(p, x0, phi(weight, t_cover)), cfg)
    conformable = conf_rep = caputo = caputo_rep = None
    if include_conformable:
        conformable = integrate_conformable_direct(conformable_lorenz(p, weight, x0, horizon), cfg)
        conf_rep = equivalence_report(conformable, classical, weight, tolerance)
    if include_caputo:
        caputo = integrate_caputo_abm(caputo_ivp, cfg.backend)
        caputo_rep = equivalence_report(caputo, classical, weight, tolerance)
    return ThreeWayResult(weight, classical, conformable, caputo, conf_rep, caputo_rep)


def conformable_field(p: LorenzParams, weight: WeightSpec):
    """Right-hand side ``F(x) / psi(t)`` integrated by the direct conformable solver."""
    def field(t, x):
        return lorenz_rhs(p, x) / psi(weight, t)
    return field
