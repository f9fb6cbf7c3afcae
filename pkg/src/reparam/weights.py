"""Weight functions psi and their time maps.

A weight ``psi`` defines the scaled derivative ``psi(t) f'(t)``. Its time map
``phi(t) = int_0^t ds / psi(s)`` is the clock in which that derivative is an
ordinary one, so ``tau = phi(t)`` is the reparametrized time throughout the
package.

Three closed-form families are built in:

========= ========================= ===============================
kind      psi(t)                    phi(t)
========= ========================= ===============================
power     t^(1-a)                   t^a / a
exp       exp((a-1) t)              (exp((1-a) t) - 1) / (1-a)
gamma     t^(1-a) / Gamma(a+1)      Gamma(a+1) t^a / a
========= ========================= ===============================

``WeightSpec.custom`` accepts any positive callable; its time map is obtained
by quadrature and inverted by bracketed root finding.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate, optimize

from .errors import ConvergenceError, DomainError
from .special import gamma_function

__all__ = ["WeightKind", "WeightSpec", "psi", "phi", "phi_inverse"]

_QUAD_RTOL = 1e-10
_SPLIT = 1.0  # custom quadrature: [0, min(t, _SPLIT)] is done after s = d * u^4
_BRACKET_CAP = 200


class WeightKind(enum.Enum):
    POWER = "power"
    EXPONENTIAL = "exp"
    GAMMA = "gamma"
    CUSTOM = "custom"


@dataclass(frozen=True)
class WeightSpec:
    """Immutable description of a weight function and its order ``alpha``.

    Use the class constructors rather than the raw initializer::

        WeightSpec.power_law(0.9)
        WeightSpec.custom(0.5, lambda t: np.sqrt(t))
    """

    kind: WeightKind
    alpha: float
    psi_fn: Callable[[float], float] | None = field(default=None, compare=False)
    phi_fn: Callable[[float], float] | None = field(default=None, compare=False)
    label: str = ""

    def __post_init__(self):
        alpha = float(self.alpha)
        if not (0.0 < alpha <= 1.0) or math.isnan(alpha):
            raise DomainError(f"alpha must lie in (0, 1], got {self.alpha!r}")
        object.__setattr__(self, "alpha", alpha)
        if not isinstance(self.kind, WeightKind):
            object.__setattr__(self, "kind", WeightKind(self.kind))
        if self.kind is WeightKind.CUSTOM and self.psi_fn is None:
            raise DomainError("custom weight requires a psi evaluator")

    @classmethod
    def power_law(cls, alpha: float) -> WeightSpec:
        return cls(WeightKind.POWER, alpha)

    @classmethod
    def exponential(cls, alpha: float) -> WeightSpec:
        return cls(WeightKind.EXPONENTIAL, alpha)

    @classmethod
    def gamma_scaled(cls, alpha: float) -> WeightSpec:
        return cls(WeightKind.GAMMA, alpha)

    @classmethod
    def custom(cls, alpha: float, psi_fn, phi_fn=None, label: str = "custom") -> WeightSpec:
        return cls(WeightKind.CUSTOM, alpha, psi_fn, phi_fn, label)

    @classmethod
    def from_name(cls, kind: str, alpha: float) -> WeightSpec:
        """Build a built-in weight from its short name (``power``, ``exp``, ``gamma``)."""
        try:
            wk = WeightKind(kind)
        except ValueError:
            raise DomainError(f"unknown weight kind {kind!r}") from None
        if wk is WeightKind.CUSTOM:
            raise DomainError("custom weights need an evaluator; use WeightSpec.custom")
        return cls(wk, alpha)

    @property
    def singular_at_zero(self) -> bool:
        """True when ``1/psi`` blows up at ``t = 0``."""
        if self.kind in (WeightKind.POWER, WeightKind.GAMMA):
            return self.alpha < 1.0
        return self.kind is WeightKind.CUSTOM

    def summary(self) -> str:
        name = self.label or self.kind.value
        return f"{name}(alpha={self.alpha:g})"

    def psi(self, t):
        return psi(self, t)

    def phi(self, t):
        return phi(self, t)

    def phi_inverse(self, tau):
        return phi_inverse(self, tau)


def _as_array(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _out(arr, scalar):
    return float(arr) if scalar else arr


def psi(spec: WeightSpec, t):
    """Evaluate the weight at ``t`` (scalar or array)."""
    if spec.kind is WeightKind.CUSTOM:
        arr, scalar = _as_array(t)
        if np.any(arr <= 0.0):
            raise DomainError("custom weights are evaluated on t > 0 only")
        vals = np.array([float(spec.psi_fn(float(s))) for s in arr.ravel()]).reshape(arr.shape)
        return _out(vals, scalar)

    arr, scalar = _as_array(t)
    a = spec.alpha
    if spec.kind is WeightKind.EXPONENTIAL:
        if np.any(arr < 0.0):
            raise DomainError("exponential weight is defined for t >= 0")
        return _out(np.exp((a - 1.0) * arr), scalar)
    if a == 1.0:
        if np.any(arr < 0.0):
            raise DomainError("weight is defined for t >= 0")
        val = np.ones_like(arr)
    else:
        if np.any(arr <= 0.0):
            raise DomainError(f"{spec.kind.value} weight with alpha < 1 requires t > 0")
        val = arr ** (1.0 - a)
    if spec.kind is WeightKind.GAMMA:
        val = val / gamma_function(a + 1.0)
    return _out(val, scalar)


def _custom_phi_scalar(spec: WeightSpec, t: float) -> float:
    if t == 0.0:
        return 0.0

    def inv(s):
        return 1.0 / spec.psi_fn(s)

    # s = d u^4 tames integrable singularities up to s^(-3/4) at the origin
    d = min(t, _SPLIT)
    with np.errstate(all="ignore"):
        head, herr = integrate.quad(
            lambda u: 4.0 * d * u**3 * inv(d * u**4) if u > 0.0 else 0.0,
            0.0, 1.0, epsabs=0.0, epsrel=_QUAD_RTOL, limit=200, full_output=False,
        )
        total = head
        err = herr
        if t > d:
            tail, terr = integrate.quad(inv, d, t, epsabs=0.0, epsrel=_QUAD_RTOL, limit=200)
            total += tail
            err += terr
    if not math.isfinite(total) or err > 1e3 * _QUAD_RTOL * max(abs(total), 1e-300):
        raise ConvergenceError(f"time-map quadrature did not converge at t={t!r}")
    return total


def phi(spec: WeightSpec, t):
    """Reparametrized time ``tau = phi(t)``; ``phi(0) = 0`` without touching ``psi(0)``."""
    arr, scalar = _as_array(t)
    if np.any(arr < 0.0):
        raise DomainError("phi is defined for t >= 0")
    a = spec.alpha
    kind = spec.kind
    if kind is WeightKind.CUSTOM:
        if spec.phi_fn is not None:
            fn = lambda s: 0.0 if s == 0.0 else float(spec.phi_fn(s))  # noqa: E731
        else:
            fn = lambda s: _custom_phi_scalar(spec, s)  # noqa: E731
        vals = np.array([fn(float(s)) for s in arr.ravel()]).reshape(arr.shape)
        return _out(vals, scalar)
    if a == 1.0:
        val = arr * 1.0
    elif kind is WeightKind.POWER:
        val = arr**a / a
    elif kind is WeightKind.GAMMA:
        val = gamma_function(a + 1.0) * arr**a / a
    else:
        val = np.expm1((1.0 - a) * arr) / (1.0 - a)
    return _out(val, scalar)


def _custom_phi_inverse_scalar(spec: WeightSpec, tau: float) -> float:
    if tau == 0.0:
        return 0.0
    f = lambda s: float(phi(spec, s)) - tau  # noqa: E731
    hi = max(tau, 1.0)
    lo = 0.0
    for _ in range(_BRACKET_CAP):
        if f(hi) >= 0.0:
            break
        lo, hi = hi, 2.0 * hi
    else:
        raise ConvergenceError(f"could not bracket phi^-1({tau!r})")
    try:
        return optimize.brentq(f, lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps, maxiter=500)
    except (RuntimeError, ValueError) as exc:
        raise ConvergenceError(f"phi^-1 root finding failed at tau={tau!r}") from exc


def phi_inverse(spec: WeightSpec, tau):
    """Original time ``t`` with ``phi(t) = tau``."""
    arr, scalar = _as_array(tau)
    if np.any(arr < 0.0):
        raise DomainError("phi_inverse is defined for tau >= 0")
    a = spec.alpha
    kind = spec.kind
    if kind is WeightKind.CUSTOM:
        vals = np.array([_custom_phi_inverse_scalar(spec, float(s)) for s in arr.ravel()])
        return _out(vals.reshape(arr.shape), scalar)
    if a == 1.0:
        val = arr * 1.0
    elif kind is WeightKind.POWER:
        val = (a * arr) ** (1.0 / a)
    elif kind is WeightKind.GAMMA:
        val = (a * arr / gamma_function(a + 1.0)) ** (1.0 / a)
    else:
        val = np.log1p((1.0 - a) * arr) / (1.0 - a)
    return _out(val, scalar)
