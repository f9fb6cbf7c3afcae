"""Closed-form solutions used as oracles.

Each conformable problem here is solved by evaluating the classical solution
at ``tau = phi(t)``. Functions with a ``_tau`` suffix take the classical time
directly; the plain versions take original time ``t``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate

from .errors import ConvergenceError, DomainError
from .special import bessel_i0, bessel_i1_over_z, gamma_function
from .weights import WeightKind, WeightSpec, phi

__all__ = [
    "gamma_function",
    "bessel_i0",
    "InitialProfile",
    "PROFILES",
    "linear_example_solution",
    "HeatProblem",
    "heat_solution",
    "heat_solution_tau",
    "heat_kernel_mass",
    "burgers_solution",
    "burgers_solution_tau",
    "DampedWaveProblem",
    "damped_wave_solution",
    "damped_wave_solution_tau",
]

_KERNEL_WIDTH = 12.0  # multiples of sqrt(nu * tau) kept on each side
_QUAD_LIMIT = 400


@dataclass(frozen=True)
class InitialProfile:
    """Initial datum with optional antiderivative ``int_0^y f`` and kinks."""

    fn: Callable[[float], float]
    antiderivative: Callable[[float], float] | None = None
    breakpoints: tuple[float, ...] = ()
    name: str = ""

    def __call__(self, y):
        return self.fn(y)


def _box(y):
    return 1.0 if abs(y) < 1.0 else 0.0


PROFILES: dict[str, InitialProfile] = {
    "gaussian": InitialProfile(
        lambda y: math.exp(-y * y), lambda y: 0.5 * math.sqrt(math.pi) * math.erf(y), (), "gaussian"
    ),
    "sine": InitialProfile(math.sin, lambda y: 1.0 - math.cos(y), (), "sine"),
    "zero": InitialProfile(lambda y: 0.0, lambda y: 0.0, (), "zero"),
    "box": InitialProfile(_box, lambda y: min(max(y, -1.0), 1.0), (-1.0, 1.0), "box"),
}


def _profile(f) -> InitialProfile:
    return f if isinstance(f, InitialProfile) else InitialProfile(f)


def _quad(fn, a, b, rtol, points=()):
    pts = [p for p in points if a < p < b]
    val, err, *rest = integrate.quad(
        fn, a, b, epsabs=1e-14, epsrel=rtol, limit=_QUAD_LIMIT, points=pts or None, full_output=1
    )
    if not math.isfinite(val) or err > max(100.0 * rtol * abs(val), 1e-11):
        raise ConvergenceError(f"quadrature on [{a!r}, {b!r}] did not converge (err={err!r})")
    return val


def linear_example_solution(C1: float, C2: float, alpha: float, t: float) -> float:
    """``C1 exp(t^a/a) + C2 exp(2 t^a/a)``, the solution of ``D^2 y - 3 D y + 2 y = 0``."""
    if not (0.0 < alpha <= 1.0):
        raise DomainError(f"alpha must lie in (0, 1], got {alpha!r}")
    if t < 0.0:
        raise DomainError("t must be >= 0")
    tau = t**alpha / alpha
    return C1 * math.exp(tau) + C2 * math.exp(2.0 * tau)


@dataclass(frozen=True)
class HeatProblem:
    """``D_t u = nu u_xx``, ``u(x, 0) = f(x)``."""

    f: Callable[[float], float]
    nu: float = 1.0
    alpha: float = 1.0
    kind: WeightKind = WeightKind.POWER
    rtol: float = 1e-8

    def __post_init__(self):
        if not self.nu > 0.0:
            raise DomainError("diffusivity must be positive")
        object.__setattr__(self, "kind", WeightKind(self.kind))
        WeightSpec(self.kind, self.alpha)

    @property
    def weight(self) -> WeightSpec:
        return WeightSpec(self.kind, self.alpha)


def heat_kernel_mass(tau: float, nu: float = 1.0, x: float = 0.0) -> float:
    """Quadrature of the heat kernel alone over the truncated window (should be 1)."""
    s = math.sqrt(nu * tau)
    c = 1.0 / math.sqrt(4.0 * math.pi * nu * tau)
    return _quad(
        lambda y: c * math.exp(-((x - y) ** 2) / (4.0 * nu * tau)),
        x - _KERNEL_WIDTH * s, x + _KERNEL_WIDTH * s, 1e-13,
    )


def heat_solution_tau(p: HeatProblem, x: float, tau: float) -> float:
    """Gaussian-kernel convolution of ``p.f`` at classical time ``tau > 0``."""
    if not tau > 0.0:
        raise DomainError("heat solution requires tau > 0")
    prof = _profile(p.f)
    nu = p.nu
    s = math.sqrt(nu * tau)
    c = 1.0 / math.sqrt(4.0 * math.pi * nu * tau)
    four_nt = 4.0 * nu * tau

    def integrand(y):
        return prof(y) * math.exp(-((x - y) ** 2) / four_nt)

    val = _quad(integrand, x - _KERNEL_WIDTH * s, x + _KERNEL_WIDTH * s, p.rtol, prof.breakpoints)
    return c * val


def heat_solution(p: HeatProblem, x: float, t: float) -> float:
    """Conformable heat solution: the classical one at ``tau = phi(t)``."""
    if not t > 0.0:
        raise DomainError("heat solution requires t > 0")
    return heat_solution_tau(p, x, phi(p.weight, t))


def burgers_solution_tau(f, nu: float, x: float, tau: float, rtol: float = 1e-10) -> float:
    """Cole-Hopf solution of ``u_tau + u u_x = nu u_xx`` at classical time ``tau``.

    ``theta`` and ``d theta/dx`` are both computed by quadrature; the
    derivative is taken under the integral sign. The exponent is shifted by
    its value at ``y = x``, which cancels in the ratio.
    """
    if not (nu > 0.0 and tau > 0.0):
        raise DomainError("burgers solution requires nu > 0 and tau > 0")
    prof = _profile(f)
    if prof.antiderivative is not None:
        F = prof.antiderivative
    else:
        def F(y):
            return _quad(prof.fn, 0.0, y, 1e-12) if y != 0.0 else 0.0
    Fx = F(x)
    width = _KERNEL_WIDTH * math.sqrt(nu * tau)

    def pair(s):
        # weights at y = x + s and y = x - s, Gaussian written in s to avoid rounding x - y
        g = -s * s / (4.0 * nu * tau)
        return (math.exp(g - (F(x + s) - Fx) / (2.0 * nu)),
                math.exp(g - (F(x - s) - Fx) / (2.0 * nu)))

    # fold onto s in [0, width]; the odd part of d theta then cancels exactly
    kinks = tuple(abs(p - x) for p in prof.breakpoints)
    theta = _quad(lambda s: sum(pair(s)), 0.0, width, rtol, kinks)
    if not theta > 0.0:
        raise ConvergenceError(f"theta={theta!r} is not positive at x={x!r}")
    # x enters theta only through the Gaussian; the exp(F(x)/2nu) shift is a common factor
    def dtheta_integrand(s):
        wp, wm = pair(s)
        return s / (2.0 * nu * tau) * (wp - wm)

    dtheta = _quad(dtheta_integrand, 0.0, width, rtol, kinks)
    return -2.0 * nu * dtheta / theta + 0.0  # + 0.0 turns -0.0 into 0.0


def burgers_solution(f, nu: float, alpha: float, x: float, t: float,
                     kind: WeightKind | str = WeightKind.POWER) -> float:
    """Conformable Burgers solution at original time ``t > 0``."""
    if not t > 0.0:
        raise DomainError("burgers solution requires t > 0")
    return burgers_solution_tau(f, nu, x, phi(WeightSpec(WeightKind(kind), alpha), t))


@dataclass(frozen=True)
class DampedWaveProblem:
    """Telegraph problem ``u_tautau + beta u_tau = c^2 u_xx`` with ``u = f``, ``u_tau = g`` at 0."""

    f: Callable[[float], float]
    g: Callable[[float], float]
    beta: float
    c: float
    alpha: float = 1.0
    kind: WeightKind = WeightKind.POWER
    rtol: float = 1e-11
    complete: bool = field(default=True)

    def __post_init__(self):
        if not (self.beta > 0.0 and self.c > 0.0):
            raise DomainError("beta and c must be positive")
        object.__setattr__(self, "kind", WeightKind(self.kind))
        WeightSpec(self.kind, self.alpha)

    @property
    def weight(self) -> WeightSpec:
        return WeightSpec(self.kind, self.alpha)


def damped_wave_solution_tau(p: DampedWaveProblem, x: float, tau: float) -> float:
    """Classical damped-wave solution at ``tau >= 0``.

    With ``k = beta / 2`` and ``rho = sqrt(tau^2 - (y - x)^2 / c^2)``::

        u = e^{-k tau} [ (f(x + c tau) + f(x - c tau)) / 2
                         + 1/(2c) int (k f + g) I0(k rho) dy
                         + k^2 tau/(2c) int f I1(k rho)/(k rho) dy ]

    The last term is needed for ``u`` to solve the PDE when ``f != 0``;
    ``p.complete=False`` drops it and returns only the first two terms.
    """
    if tau < 0.0:
        raise DomainError("tau must be >= 0")
    f, g, c = p.f, p.g, p.c
    k = 0.5 * p.beta
    if tau == 0.0:
        return float(f(x))
    damp = math.exp(-k * tau)
    ct = c * tau
    lo, hi = x - ct, x + ct
    front = 0.5 * (f(hi) + f(lo))

    def rho(y):
        return math.sqrt(max(tau * tau - ((y - x) / c) ** 2, 0.0))

    memory = _quad(lambda y: (k * f(y) + g(y)) * bessel_i0(k * rho(y)), lo, hi, p.rtol) / (2.0 * c)
    total = front + memory
    if p.complete:
        extra = _quad(lambda y: f(y) * bessel_i1_over_z(k * rho(y)), lo, hi, p.rtol)
        total += k * k * tau / (2.0 * c) * extra
    return damp * total


def damped_wave_solution(p: DampedWaveProblem, x: float, t: float) -> float:
    """Damped-wave solution with the conformable time derivative, at original time ``t``."""
    if t < 0.0:
        raise DomainError("t must be >= 0")
    return damped_wave_solution_tau(p, x, phi(p.weight, t))
