"""Conformable derivative operators and the conformable-to-classical transform.

For a weight ``psi`` the conformable derivative is

    D f(t) = lim_{eps -> 0} [f(t + eps psi(t)) - f(t)] / eps,

which equals ``psi(t) f'(t)`` wherever ``f`` is differentiable. In the clock
``tau = phi(t)`` it is the plain derivative ``d/dtau``, so a conformable
initial value problem in ``t`` is a classical one in ``tau``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import ConvergenceError, DomainError
from .trajectory import Trajectory
from .weights import WeightSpec, phi, phi_inverse, psi

__all__ = [
    "ScalarFunction",
    "ConformableIVP",
    "ClassicalIVP",
    "conf_derivative_limit",
    "conf_derivative_product",
    "reparametrize",
    "pull_back",
    "transform_linear_ode",
    "linear_ode_ivp",
]

_EPS0 = 1e-2
_N_HALVINGS = 10
_LIMIT_RTOL = 1e-4
_ZERO_PROBES = (1e-3, 1e-4, 1e-5)
_SNAP_RTOL = 1e-12


@dataclass(frozen=True)
class ScalarFunction:
    """Real function of time with an optional exact derivative."""

    evaluator: Callable[[float], float]
    exact_derivative: Callable[[float], float] | None = None
    name: str = ""

    def __call__(self, t):
        return self.evaluator(t)

    def derivative(self, t):
        if self.exact_derivative is None:
            raise ValueError(f"function {self.name or self.evaluator!r} has no exact derivative")
        return self.exact_derivative(t)


def _as_scalar_function(f) -> ScalarFunction:
    return f if isinstance(f, ScalarFunction) else ScalarFunction(f)


@dataclass(frozen=True)
class ConformableIVP:
    """``D x = F(t, x)`` with ``x(t_start) = x0`` under weight ``weight``.

    Set ``autonomous=True`` when ``rhs`` ignores ``t``; the reparametrized
    field then skips the inverse time map entirely.
    """

    rhs: Callable[[float, np.ndarray], np.ndarray]
    weight: WeightSpec
    x0: np.ndarray
    t_span: tuple[float, float]
    autonomous: bool = False

    def __post_init__(self):
        x0 = np.atleast_1d(np.array(self.x0, dtype=float))
        x0.setflags(write=False)
        object.__setattr__(self, "x0", x0)
        t0, t1 = (float(v) for v in self.t_span)
        if not (t0 >= 0.0 and t1 > t0):
            raise DomainError(f"t_span must satisfy 0 <= t_start < t_end, got {self.t_span!r}")
        object.__setattr__(self, "t_span", (t0, t1))
        out = np.atleast_1d(np.asarray(self.rhs(t0, x0.copy()), dtype=float))
        if out.shape != x0.shape:
            raise ValueError(f"rhs returns shape {out.shape}, state has shape {x0.shape}")

    @property
    def dimension(self) -> int:
        return self.x0.shape[0]


@dataclass(frozen=True)
class ClassicalIVP:
    """``dy/dtau = G(tau, y)`` with ``y(tau_start) = y0``."""

    rhs: Callable[[float, np.ndarray], np.ndarray]
    y0: np.ndarray
    tau_span: tuple[float, float]

    def __post_init__(self):
        y0 = np.atleast_1d(np.array(self.y0, dtype=float))
        y0.setflags(write=False)
        object.__setattr__(self, "y0", y0)
        s0, s1 = (float(v) for v in self.tau_span)
        if not s1 > s0:
            raise DomainError(f"tau_span must be increasing, got {self.tau_span!r}")
        object.__setattr__(self, "tau_span", (s0, s1))

    @property
    def dimension(self) -> int:
        return self.y0.shape[0]


def _difference_limit(f: ScalarFunction, step: float, t: float) -> float:
    ft = f(t)
    # keep the increment eps * psi(t) below eps * t so it never reaches the origin
    eps = _EPS0 * min(1.0, t / step) * 2.0 ** -np.arange(_N_HALVINGS + 1)
    quotients = np.array([(f(t + e * step) - ft) / e for e in eps])
    rich = 2.0 * quotients[1:] - quotients[:-1]
    best, prev = float(rich[-1]), float(rich[-2])
    scale = max(abs(best), abs(prev))
    if not np.isfinite(best) or abs(best - prev) > _LIMIT_RTOL * max(scale, 1e-12):
        raise ConvergenceError(
            f"difference quotient does not settle at t={t!r} "
            f"(last estimates {prev!r}, {best!r}); f is not alpha-differentiable there"
        )
    return best


def conf_derivative_limit(f, spec: WeightSpec, t: float) -> float:
    """Conformable derivative from its defining limit.

    The forward quotient is sampled at ``eps = 1e-2 * 2**-k`` for
    ``k = 0..10`` and one Richardson step is applied to the last pair. Where
    ``psi(t) > t`` the whole schedule is scaled by ``t / psi(t)``. At
    ``t = 0`` the value is the right limit, extrapolated (Aitken) from the
    estimates at ``t = 1e-3, 1e-4, 1e-5``.

    Raises
    ------
    ConvergenceError
        If the last two extrapolated estimates differ by more than 1e-4
        relative.
    """
    f = _as_scalar_function(f)
    t = float(t)
    if t < 0.0:
        raise DomainError("conformable derivative is defined for t >= 0")
    if t == 0.0:
        v1, v2, v3 = (conf_derivative_limit(f, spec, s) for s in _ZERO_PROBES)
        d1, d2 = v2 - v1, v3 - v2
        den = d2 - d1
        if den == 0.0 or abs(d2) >= abs(d1):
            return v3
        return v3 - d2 * d2 / den
    return _difference_limit(f, float(psi(spec, t)), t)


def conf_derivative_product(f, spec: WeightSpec, t):
    """``psi(t) * f'(t)`` using the exact derivative carried by ``f``."""
    f = _as_scalar_function(f)
    return psi(spec, t) * f.derivative(t)


def reparametrize(ivp: ConformableIVP) -> ClassicalIVP:
    """Classical problem in ``tau`` with ``G(tau, y) = F(phi^-1(tau), y)``."""
    spec = ivp.weight
    F = ivp.rhs
    if ivp.autonomous:
        G = F
    else:
        def G(tau, y):
            return F(phi_inverse(spec, tau), y)
    t0, t1 = ivp.t_span
    return ClassicalIVP(G, ivp.x0, (phi(spec, t0), phi(spec, t1)))


def pull_back(classical_traj: Trajectory, spec: WeightSpec, t_grid) -> Trajectory:
    """Evaluate a trajectory in ``tau`` at ``tau = phi(t)`` for each ``t`` in ``t_grid``.

    Queries that land on a solver node (to 1e-12 relative) return that node's
    state; everything else is cubic-spline interpolated on the nodes.
    """
    t_grid = np.atleast_1d(np.asarray(t_grid, dtype=float))
    taus = np.atleast_1d(phi(spec, t_grid))
    nodes = classical_traj.times
    lo, hi = nodes[0], nodes[-1]
    slack_lo = _SNAP_RTOL * max(1.0, abs(lo))
    slack_hi = _SNAP_RTOL * max(1.0, abs(hi))
    if np.any(taus < lo - slack_lo) or np.any(taus > hi + slack_hi):
        bad = t_grid[(taus < lo - slack_lo) | (taus > hi + slack_hi)][0]
        raise DomainError(
            f"t={bad!r} maps to tau={float(phi(spec, bad))!r}, outside solved range [{lo!r}, {hi!r}]"
        )
    taus = np.clip(taus, lo, hi)

    idx = np.clip(np.searchsorted(nodes, taus), 0, len(nodes) - 1)
    left = np.clip(idx - 1, 0, len(nodes) - 1)
    near = np.where(np.abs(nodes[idx] - taus) <= np.abs(nodes[left] - taus), idx, left)
    snapped = np.abs(nodes[near] - taus) <= _SNAP_RTOL * np.maximum(1.0, np.abs(nodes[near]))

    states = np.empty((t_grid.size, classical_traj.dimension))
    states[snapped] = classical_traj.states[near[snapped]]
    if not np.all(snapped):
        if len(nodes) < 2:
            raise DomainError("cannot interpolate a single-node trajectory")
        spline = CubicSpline(nodes, classical_traj.states, axis=0)
        states[~snapped] = spline(taus[~snapped])
    meta = dict(classical_traj.metadata)
    meta.update(pulled_back=True, weight=spec.summary())
    return Trajectory(t_grid, states, meta)


def transform_linear_ode(
    coeffs: Sequence[Callable[[float], float]], spec: WeightSpec, powers: str = "scaled"
) -> list[Callable[[float], float]]:
    """Coefficients in ``tau`` for ``D^n y = sum_k a_k(t) D^k y``.

    ``powers="scaled"`` treats ``D^k y`` as ``psi^k d^k y/dt^k``-type powers and
    returns ``a_k(phi^-1(tau)) * psi(phi^-1(tau))**(k - n)``.
    ``powers="iterated"`` treats ``D^k`` as k-fold application of the
    first-order operator, which is ``d^k/dtau^k`` exactly, so the
    coefficients are only composed with ``phi^-1``.
    """
    n = len(coeffs)
    if powers not in ("scaled", "iterated"):
        raise ValueError(f"powers must be 'scaled' or 'iterated', got {powers!r}")
    out = []
    for k, a in enumerate(coeffs):
        if powers == "iterated":
            def ak(tau, a=a):
                return a(phi_inverse(spec, tau))
        else:
            def ak(tau, a=a, k=k):
                t = phi_inverse(spec, tau)
                return a(t) * psi(spec, t) ** (k - n)
        out.append(ak)
    return out


def linear_ode_ivp(
    coeffs: Sequence[Callable[[float], float]],
    spec: WeightSpec,
    initial: Sequence[float],
    tau_end: float,
    powers: str = "iterated",
) -> ClassicalIVP:
    """Companion-form first-order system for the transformed linear ODE.

    ``initial`` holds ``x, x', ..., x^(n-1)`` at ``tau = 0``.
    """
    n = len(coeffs)
    if len(initial) != n:
        raise ValueError(f"need {n} initial values, got {len(initial)}")
    tilde = transform_linear_ode(coeffs, spec, powers)

    def G(tau, y):
        dy = np.empty(n)
        dy[:-1] = y[1:]
        dy[-1] = sum(tilde[k](tau) * y[k] for k in range(n))
        return dy

    return ClassicalIVP(G, np.asarray(initial, dtype=float), (0.0, float(tau_end)))
