"""Time integrators and equivalence reporting.

* ``integrate_classical``: RK4 on a fixed grid or Dormand-Prince 5(4).
* ``integrate_conformable_direct``: ``x' = F(t, x) / psi(t)`` in original
  time, started at ``t_start_offset`` and seeded from the classical problem.
* ``integrate_caputo_abm``: fractional Adams-Bashforth-Moulton PECE with the
  full memory sum.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from . import _kernels
from .conformable import ClassicalIVP, ConformableIVP, pull_back, reparametrize
from .errors import DomainError
from .special import gamma_function
from .trajectory import Trajectory
from .weights import WeightSpec, psi

__all__ = [
    "Method",
    "SolverConfig",
    "CaputoIVP",
    "EquivalenceReport",
    "integrate_classical",
    "integrate_conformable_direct",
    "abm_weights",
    "integrate_caputo_abm",
    "equivalence_report",
]

_SEED_TOL = 1e-12


class Method(enum.Enum):
    RK4 = "rk4"
    RK45 = "rk45"


@dataclass(frozen=True)
class SolverConfig:
    """Integrator settings.

    ``h`` is used by RK4, ``abs_tol``/``rel_tol`` by RK45. ``t_start_offset``
    only matters for direct conformable solves; ``0`` disables the offset,
    which is rejected later for weights singular at the origin.
    """

    method: Method = Method.RK45
    h: float = 1e-3
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    t_start_offset: float = 1e-2
    h_min: float = 1e-14
    max_steps: int = 5_000_000
    backend: str | None = None

    def __post_init__(self):
        if not isinstance(self.method, Method):
            object.__setattr__(self, "method", Method(self.method))
        for name in ("h", "abs_tol", "rel_tol", "h_min"):
            v = getattr(self, name)
            if not (v > 0.0 and math.isfinite(v)):
                raise DomainError(f"{name} must be a positive finite number, got {v!r}")
        if not (self.t_start_offset >= 0.0 and math.isfinite(self.t_start_offset)):
            raise DomainError(f"t_start_offset must be >= 0, got {self.t_start_offset!r}")

    def describe(self) -> dict:
        if self.method is Method.RK4:
            return {"solver": "rk4", "h": self.h}
        return {"solver": "rk45", "abs_tol": self.abs_tol, "rel_tol": self.rel_tol}


def _initial_step(f, t0, y0, f0, atol, rtol, order=5):
    sc = atol + rtol * np.abs(y0)
    d0 = float(np.sqrt(np.mean((y0 / sc) ** 2)))
    d1 = float(np.sqrt(np.mean((f0 / sc) ** 2)))
    h0 = 1e-6 if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
    f1 = np.asarray(f(t0 + h0, y0 + h0 * f0), dtype=float)
    d2 = float(np.sqrt(np.mean(((f1 - f0) / sc) ** 2))) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1.0 / order)
    return min(100.0 * h0, h1)


def _integrate(rhs, s0, s1, y0, cfg: SolverConfig):
    k = _kernels.kernels if cfg.backend is None else _kernels.get_backend(cfg.backend)
    y0 = np.array(y0, dtype=float)
    info = {**cfg.describe(), "backend": cfg.backend or _kernels.BACKEND}
    if cfg.method is Method.RK4:
        n = max(1, int(math.ceil((s1 - s0) / cfg.h - 1e-9)))
        times, states = k.rk4_fixed(rhs, float(s0), float(s1), y0, n)
        info["steps"] = n
    else:
        f0 = np.asarray(rhs(s0, y0.copy()), dtype=float)
        h0 = _initial_step(rhs, s0, y0, f0, cfg.abs_tol, cfg.rel_tol)
        times, states, nrej = k.dopri5(
            rhs, float(s0), float(s1), y0, cfg.abs_tol, cfg.rel_tol,
            float(h0), cfg.h_min, int(cfg.max_steps),
        )
        info["steps"] = len(times) - 1
        info["rejected"] = int(nrej)
    return times, states, info


def integrate_classical(ivp: ClassicalIVP, cfg: SolverConfig = SolverConfig()) -> Trajectory:
    """Solve ``dy/dtau = G(tau, y)`` over ``ivp.tau_span``."""
    s0, s1 = ivp.tau_span
    times, states, info = _integrate(ivp.rhs, s0, s1, ivp.y0, cfg)
    return Trajectory(times, states, {**info, "time": "tau"})


def integrate_conformable_direct(ivp: ConformableIVP, cfg: SolverConfig = SolverConfig()) -> Trajectory:
    """Integrate ``x' = F(t, x) / psi(t)`` in original time.

    The solve starts at ``max(t_start, t_start_offset)``. When that is later
    than ``t_start`` the state there is obtained from the reparametrized
    classical problem on ``[phi(t_start), phi(start)]`` at tolerance 1e-12.
    """
    spec = ivp.weight
    t0, t1 = ivp.t_span
    start = max(t0, cfg.t_start_offset)
    if start == 0.0 and spec.singular_at_zero:
        raise DomainError(
            f"{spec.summary()} is singular at t = 0; use a positive t_start_offset"
        )
    if start >= t1:
        raise DomainError(f"start time {start!r} is not before t_end={t1!r}")

    x_start = ivp.x0
    seeded = False
    if start > t0:
        head = reparametrize(replace(ivp, t_span=(t0, start)))
        seed_cfg = SolverConfig(Method.RK45, abs_tol=_SEED_TOL, rel_tol=_SEED_TOL, backend=cfg.backend)
        x_start = integrate_classical(head, seed_cfg).final_state
        seeded = True

    F = ivp.rhs

    def direct_rhs(t, x):
        return np.asarray(F(t, x), dtype=float) / psi(spec, t)

    times, states, info = _integrate(direct_rhs, start, t1, x_start, cfg)
    info.update(time="t", weight=spec.summary(), t_start_offset=cfg.t_start_offset, seeded=seeded)
    return Trajectory(times, states, info)


@dataclass(frozen=True)
class CaputoIVP:
    """Caputo problem ``D^alpha x = F(t, x)``, ``x(0) = x0`` on the grid ``t_i = i h``."""

    rhs: Callable[[float, np.ndarray], np.ndarray]
    alpha: float
    x0: np.ndarray
    t_end: float
    h: float

    def __post_init__(self):
        if not (0.0 < self.alpha <= 1.0):
            raise DomainError(f"alpha must lie in (0, 1], got {self.alpha!r}")
        if not (self.t_end > 0.0 and self.h > 0.0):
            raise DomainError("t_end and h must be positive")
        x0 = np.atleast_1d(np.array(self.x0, dtype=float))
        x0.setflags(write=False)
        object.__setattr__(self, "x0", x0)

    @property
    def dimension(self) -> int:
        return self.x0.shape[0]

    @property
    def n_steps(self) -> int:
        return max(1, int(math.ceil(self.t_end / self.h - 1e-9)))


def _forward_diff(m: np.ndarray, p: float) -> np.ndarray:
    # (m + 1)^p - m^p without cancellation
    m = np.asarray(m, dtype=float)
    out = np.ones_like(m)
    pos = m > 0
    mp = m[pos]
    out[pos] = mp**p * np.expm1(p * np.log1p(1.0 / mp))
    return out


def _abm_tables(alpha: float, N: int):
    """Unscaled weight sequences indexed by lag ``m = n - j``."""
    m = np.arange(N, dtype=float)
    p = alpha + 1.0
    cpred = _forward_diff(m, alpha)
    dcorr = _forward_diff(m + 1.0, p) - _forward_diff(m, p)
    n = m
    g = np.expm1(alpha * np.log1p(1.0 / np.where(n > 0, n, 1.0)))
    a0 = np.where(n > 0, n**alpha * (alpha * (1.0 + g) - n * g), alpha)
    return cpred, dcorr, a0


def abm_weights(alpha: float, h: float, n: int):
    """Predictor weights ``b_j`` (j = 0..n) and corrector weights ``a_j`` (j = 0..n+1).

    These are the quadrature weights for step ``n -> n + 1``; the update is
    ``x0 + sum(w_j F_j) / Gamma(alpha)``.
    """
    if not (0.0 < alpha <= 1.0):
        raise DomainError(f"alpha must lie in (0, 1], got {alpha!r}")
    if n < 0 or h <= 0.0:
        raise DomainError("need n >= 0 and h > 0")
    cpred, dcorr, a0 = _abm_tables(alpha, n + 1)
    ha = h**alpha
    b = ha / alpha * cpred[n::-1]
    a = np.empty(n + 2)
    sa = ha / (alpha * (alpha + 1.0))
    a[0] = sa * a0[n]
    if n > 0:
        a[1 : n + 1] = sa * dcorr[n - 1 :: -1]
    a[n + 1] = sa
    return b, a


def integrate_caputo_abm(ivp: CaputoIVP, backend: str | None = None) -> Trajectory:
    """Fractional Adams-Bashforth-Moulton predictor-corrector (PECE).

    Every step sums over the whole history; there is no memory truncation,
    so cost grows as ``O(N^2)`` in the number of steps.
    """
    k = _kernels.kernels if backend is None else _kernels.get_backend(backend)
    alpha, h = float(ivp.alpha), float(ivp.h)
    N = ivp.n_steps
    tgrid = h * np.arange(N + 1, dtype=float)
    cpred, dcorr, a0 = _abm_tables(alpha, N)
    ga = gamma_function(alpha)
    bscale = h**alpha / (alpha * ga)
    ascale = h**alpha / (alpha * (alpha + 1.0) * ga)
    X = k.abm_pece(ivp.rhs, np.array(ivp.x0), tgrid, cpred, dcorr, a0, bscale, ascale)
    meta = {
        "solver": "caputo-abm",
        "alpha": alpha,
        "h": h,
        "steps": N,
        "backend": backend or _kernels.BACKEND,
        "time": "t",
    }
    return Trajectory(tgrid, X, meta)


@dataclass(frozen=True)
class EquivalenceReport:
    max_abs_deviation: tuple[float, ...]
    t_at_max: float
    grid_size: int
    tolerance: float
    verdict: bool

    @property
    def max_deviation(self) -> float:
        return max(self.max_abs_deviation)

    def to_dict(self) -> dict:
        return {
            "max_dev": list(self.max_abs_deviation),
            "t_at_max": self.t_at_max,
            "grid_size": self.grid_size,
            "tolerance": self.tolerance,
            "verdict": "pass" if self.verdict else "fail",
        }


def equivalence_report(
    direct: Trajectory, classical: Trajectory, spec: WeightSpec, tolerance: float
) -> EquivalenceReport:
    """Componentwise max deviation between a trajectory in ``t`` and a classical one pulled back."""
    if direct.dimension != classical.dimension:
        raise ValueError("trajectories have different dimensions")
    pulled = pull_back(classical, spec, direct.times)
    dev = np.abs(direct.states - pulled.states)
    per_comp = dev.max(axis=0)
    worst = int(np.argmax(dev.max(axis=1)))
    m = float(per_comp.max())
    return EquivalenceReport(
        tuple(float(v) for v in per_comp),
        float(direct.times[worst]),
        len(direct),
        float(tolerance),
        bool(m <= tolerance),
    )
