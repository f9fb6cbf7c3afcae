"""Invariant suites behind ``reparam verify``.

Each check measures one number and compares it to a fixed bound. Most bounds
are upper limits on a deviation; the Caputo separation checks are lower limits,
since there the point is that the two curves do *not* agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import analytic, special
from .analytic import PROFILES, HeatProblem
from .catalog import function
from .conformable import (
    ClassicalIVP,
    ScalarFunction,
    conf_derivative_limit,
    conf_derivative_product,
    linear_ode_ivp,
    reparametrize,
)
from .solvers import CaputoIVP, Method, SolverConfig, integrate_caputo_abm, integrate_classical
from .systems import (
    LorenzParams,
    complex_step_jacobian,
    conformable_field,
    conformable_lorenz,
    jacobian_eigenvalues,
    lorenz_fixed_points,
    lorenz_rhs,
    run_three_way,
    stability_report,
)
from .weights import WeightSpec, phi, phi_inverse, psi

__all__ = ["CheckResult", "SUITES", "run_suite", "run_all"]

BUILTIN_KINDS = ("power", "exp", "gamma")
ALPHAS = (0.3, 0.5, 0.9)
CAPUTO_LORENZ_MIN_DEV = 0.1


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    max_dev: float
    tolerance: float
    relation: str = "<="

    @property
    def passed(self) -> bool:
        v, tol = self.max_dev, self.tolerance
        if not math.isfinite(v):
            return False
        if self.relation == "<=":
            return v <= tol
        if self.relation == "<":
            return v < tol
        return v >= tol

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "name": self.name,
            "max_dev": self.max_dev,
            "tolerance": self.tolerance,
            "relation": self.relation,
            "verdict": "pass" if self.passed else "fail",
        }

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"{tag}  {self.suite}.{self.name}: {self.max_dev:.3e} {self.relation} {self.tolerance:.1e}"


def _weights():
    return [WeightSpec.from_name(k, a) for k in BUILTIN_KINDS for a in ALPHAS]


# -- weights -----------------------------------------------------------------

def check_reciprocal_identity() -> CheckResult:
    t = np.logspace(-2, 1, 1000)
    h = 1e-5 * t
    worst = 0.0
    for w in _weights():
        dphi = (phi(w, t + h) - phi(w, t - h)) / (2.0 * h)
        worst = max(worst, float(np.max(np.abs(psi(w, t) * dphi - 1.0))))
    return CheckResult("weights", "reciprocal_identity", worst, 1e-6)


def check_round_trip() -> CheckResult:
    t = np.logspace(-2, 1, 1000)
    worst = 0.0
    for w in _weights():
        back = phi_inverse(w, phi(w, t))
        worst = max(worst, float(np.max(np.abs(back - t) / np.maximum(1.0, t))))
    return CheckResult("weights", "round_trip", worst, 1e-9)


def check_monotonicity() -> CheckResult:
    t = np.concatenate(([0.0], np.logspace(-3, 1.5, 2000)))
    bad = 0
    for w in _weights():
        bad += int(np.count_nonzero(np.diff(phi(w, t)) <= 0.0))
    return CheckResult("weights", "monotonicity_violations", float(bad), 0.0)


def slowdown_crossover(alpha: float) -> float:
    """The ``t* > 1`` beyond which ``t^a / a < t``; below it the power map runs ahead of ``t``."""
    return alpha ** (-1.0 / (1.0 - alpha))


def check_slowdown() -> list[CheckResult]:
    t = np.linspace(1.0, 50.0, 2000)[1:]
    # the clock rate d tau/dt = 1/psi drops below 1 as soon as t > 1
    rate = max(float(np.max(1.0 / psi(WeightSpec.power_law(a), t))) for a in ALPHAS)
    ratio = 0.0
    for a in ALPHAS:
        ts = slowdown_crossover(a) * np.linspace(1.0, 20.0, 2000)[1:]
        ratio = max(ratio, float(np.max(phi(WeightSpec.power_law(a), ts) / ts)))
    exact = float(np.max(np.abs(phi(WeightSpec.power_law(1.0), t) - t)))
    return [
        CheckResult("weights", "slowdown_rate_above_1", rate, 1.0, "<"),
        CheckResult("weights", "slowdown_phi_over_t_past_crossover", ratio, 1.0, "<"),
        CheckResult("weights", "classical_limit_identity", exact, 0.0),
    ]


# -- conformable ---------------------------------------------------------------

_GRID = np.linspace(0.1, 5.0, 200)


def check_theorem1() -> CheckResult:
    worst = 0.0
    for w in _weights():
        for name in ("sin", "exp", "poly3"):
            f = function(name)
            for t in _GRID:
                ref = conf_derivative_product(f, w, t)
                lim = conf_derivative_limit(f, w, t)
                worst = max(worst, abs(lim - ref) / max(1.0, abs(ref)))
    return CheckResult("conformable", "limit_vs_product", worst, 1e-6)


def check_leibniz() -> CheckResult:
    prod = ScalarFunction(lambda t: np.sin(t) * np.exp(t),
                          lambda t: np.exp(t) * (np.sin(t) + np.cos(t)))
    f, g = function("sin"), function("exp")
    worst = 0.0
    for w in _weights():
        lhs = conf_derivative_product(prod, w, _GRID)
        rhs = f(_GRID) * conf_derivative_product(g, w, _GRID) + g(_GRID) * conf_derivative_product(f, w, _GRID)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return CheckResult("conformable", "leibniz", worst, 1e-8)


def check_linearity() -> list[CheckResult]:
    a, b = 2.0, -3.0
    f, g = function("sin"), function("exp")
    comb = ScalarFunction(lambda t: a * np.sin(t) + b * np.exp(t),
                          lambda t: a * np.cos(t) + b * np.exp(t))
    worst_p = worst_l = 0.0
    for w in _weights():
        lhs = conf_derivative_product(comb, w, _GRID)
        rhs = a * conf_derivative_product(f, w, _GRID) + b * conf_derivative_product(g, w, _GRID)
        worst_p = max(worst_p, float(np.max(np.abs(lhs - rhs))))
        for t in _GRID[::10]:
            lim = conf_derivative_limit(comb, w, t)
            ref = a * conf_derivative_limit(f, w, t) + b * conf_derivative_limit(g, w, t)
            worst_l = max(worst_l, abs(lim - ref) / max(1.0, abs(ref)))
    return [
        CheckResult("conformable", "linearity_product", worst_p, 1e-10),
        CheckResult("conformable", "linearity_limit", worst_l, 1e-6),
    ]


def check_eigenrelation() -> CheckResult:
    worst = 0.0
    for w in _weights():
        for a in (-1.0, 0.5):
            u = ScalarFunction(lambda t, a=a, w=w: np.exp(a * phi(w, t)),
                               lambda t, a=a, w=w: a * np.exp(a * phi(w, t)) / psi(w, t))
            du = conf_derivative_product(u, w, _GRID)
            au = a * u(_GRID)
            worst = max(worst, float(np.max(np.abs(du - au) / np.maximum(1.0, np.abs(au)))))
    return CheckResult("conformable", "exponential_eigenrelation", worst, 1e-9)


# -- analytic ------------------------------------------------------------------

def _ex1_residual(alpha: float, t: np.ndarray) -> float:
    w = WeightSpec.power_law(alpha)

    def y(s):
        tau = phi(w, s)
        return np.exp(tau) + np.exp(2.0 * tau)

    Y = ScalarFunction(y, lambda s: (np.exp(phi(w, s)) + 2.0 * np.exp(2.0 * phi(w, s))) / psi(w, s))
    DY = ScalarFunction(lambda s: conf_derivative_product(Y, w, s),
                        lambda s: (np.exp(phi(w, s)) + 4.0 * np.exp(2.0 * phi(w, s))) / psi(w, s))
    res = conf_derivative_product(DY, w, t) - 3.0 * conf_derivative_product(Y, w, t) + 2.0 * y(t)
    return float(np.max(np.abs(res)))


def check_ex1() -> list[CheckResult]:
    t = np.linspace(0.2, 3.0, 200)
    res = max(_ex1_residual(a, t) for a in (0.5, 0.9))

    worst = 0.0
    for a in (0.5, 0.9):
        w = WeightSpec.power_law(a)
        # D^2 x = 3 D x - 2 x; x(0) = C1 + C2, Dx(0) = C1 + 2 C2 with C1 = C2 = 1
        ivp = linear_ode_ivp([lambda t: -2.0, lambda t: 3.0], w, [2.0, 3.0], 2.0)
        traj = integrate_classical(ivp, SolverConfig(Method.RK4, h=1e-3))
        ref = np.array([analytic.linear_example_solution(1.0, 1.0, a, phi_inverse(w, s)) for s in traj.times])
        worst = max(worst, float(np.max(np.abs(traj.states[:, 0] - ref) / np.abs(ref))))
    return [
        CheckResult("analytic", "ex1_residual", res, 1e-6),
        CheckResult("analytic", "ex1_rk4_transformed", worst, 1e-6),
    ]


def heat_residual(alpha: float = 0.5, n: int = 20, h: float = 1e-3) -> float:
    """Max of ``|D_t u - u_xx|`` for Gaussian data on the ``n x n`` grid in [-2, 2] x [0.5, 2]."""
    p = HeatProblem(PROFILES["gaussian"], alpha=alpha)
    w = p.weight
    worst = 0.0
    for t in np.linspace(0.5, 2.0, n):
        for x in np.linspace(-2.0, 2.0, n):
            u0 = analytic.heat_solution(p, x, t)
            dt = (analytic.heat_solution(p, x, t + h) - analytic.heat_solution(p, x, t - h)) / (2.0 * h)
            uxx = (analytic.heat_solution(p, x + h, t) - 2.0 * u0 + analytic.heat_solution(p, x - h, t)) / (h * h)
            worst = max(worst, abs(psi(w, t) * dt - p.nu * uxx))
    return worst


def check_heat() -> list[CheckResult]:
    res = max(heat_residual(a) for a in (0.5, 0.9))
    w = WeightSpec.power_law(0.5)
    mass = max(abs(analytic.heat_kernel_mass(phi(w, t)) - 1.0) for t in np.linspace(0.5, 2.0, 20))
    return [
        CheckResult("analytic", "heat_residual", res, 1e-4),
        CheckResult("analytic", "heat_kernel_mass", mass, 1e-10),
    ]


def wave_residual(beta: float = 0.5, c: float = 1.0, h: float = 1e-3) -> float:
    """Finite-difference residual of ``u_tt + beta u_t - c^2 u_xx`` at alpha = 1, Gaussian ``f``, ``g = 0``."""
    p = analytic.DampedWaveProblem(PROFILES["gaussian"], lambda y: 0.0, beta, c)
    worst = 0.0
    for t in (0.5, 1.0, 1.5):
        for x in (-1.0, 0.0, 0.7):
            u = lambda xx, tt: analytic.damped_wave_solution(p, xx, tt)  # noqa: E731
            u0 = u(x, t)
            up, um = u(x, t + h), u(x, t - h)
            utt = (up - 2.0 * u0 + um) / (h * h)
            ut = (up - um) / (2.0 * h)
            uxx = (u(x + h, t) - 2.0 * u0 + u(x - h, t)) / (h * h)
            worst = max(worst, abs(utt + beta * ut - c * c * uxx))
    return worst


def check_wave() -> CheckResult:
    return CheckResult("analytic", "damped_wave_residual", wave_residual(), 1e-3)


def check_special() -> list[CheckResult]:
    g = special.gamma_function
    dev = max(abs(g(1.0) - 1.0), abs(g(0.5) ** 2 - math.pi), abs(g(5.0) - 24.0))
    z = np.linspace(0.0, 20.0, 401)
    i0 = np.array([special.bessel_i0(v) for v in z])
    mono_bad = float(np.count_nonzero(np.diff(i0) <= 0.0))
    zs = special.BESSEL_SWITCH
    series, asym = special.bessel_i0_series(zs), special.bessel_i0_asymptotic(zs)
    return [
        CheckResult("analytic", "gamma_identities", dev, 1e-10),
        CheckResult("analytic", "i0_at_zero", abs(special.bessel_i0(0.0) - 1.0), 0.0),
        CheckResult("analytic", "i0_monotonicity_violations", mono_bad, 0.0),
        CheckResult("analytic", "i0_branch_agreement", abs(series - asym) / series, 1e-9),
    ]


# -- systems -------------------------------------------------------------------

_SAMPLE_STATES = (
    (1.0, 1.0, 1.0),
    (-3.5, 2.0, 17.0),
    (10.0, -4.0, 30.0),
    (0.1, 0.2, 0.3),
)


def check_fixed_points() -> list[CheckResult]:
    p = LorenzParams()
    res = max(float(np.linalg.norm(lorenz_rhs(p, pt))) for pt in lorenz_fixed_points(p))
    poly = max(stability_report(p, pt).max_residual for pt in lorenz_fixed_points(p))
    return [
        CheckResult("systems", "fixed_point_residual", res, 1e-12),
        CheckResult("systems", "char_poly_residual", poly, 1e-8),
    ]


def check_origin_eigenvalues() -> CheckResult:
    p = LorenzParams()
    disc = math.sqrt(11.0**2 + 4.0 * 270.0)
    expected = sorted([(-11.0 + disc) / 2.0, -8.0 / 3.0, (-11.0 - disc) / 2.0], reverse=True)
    got = jacobian_eigenvalues(p, (0.0, 0.0, 0.0))
    dev = max(abs(g - e) for g, e in zip(got, expected))
    return CheckResult("systems", "origin_eigenvalues", dev, 1e-8)


def check_eigen_invariance() -> CheckResult:
    p = LorenzParams()
    worst = 0.0
    states = [tuple(pt) for pt in lorenz_fixed_points(p)] + list(_SAMPLE_STATES)
    for a in ALPHAS:
        w = WeightSpec.power_law(a)
        G = reparametrize(conformable_lorenz(p, w)).rhs
        for s in states:
            for tau in (0.3, 2.0):
                JG = complex_step_jacobian(lambda y: G(tau, y), s)
                JF = complex_step_jacobian(lambda y: lorenz_rhs(p, y), s)
                worst = max(worst, float(np.max(np.abs(JG - JF))))
                eg = jacobian_eigenvalues(p, s, JG)
                ef = jacobian_eigenvalues(p, s, JF)
                worst = max(worst, max(abs(x - y) for x, y in zip(eg, ef)))
    return CheckResult("systems", "eigenvalue_invariance", worst, 1e-12)


def check_fixed_point_invariance() -> list[CheckResult]:
    p = LorenzParams()
    fp_worst = 0.0
    off_min = math.inf
    for a in ALPHAS:
        field = conformable_field(p, WeightSpec.power_law(a))
        for t in (0.1, 1.0, 10.0):
            for pt in lorenz_fixed_points(p):
                fp_worst = max(fp_worst, float(np.linalg.norm(field(t, pt))))
            for s in _SAMPLE_STATES:
                off_min = min(off_min, float(np.linalg.norm(field(t, np.array(s)))))
    return [
        CheckResult("systems", "conformable_field_at_fixed_points", fp_worst, 1e-12),
        CheckResult("systems", "conformable_field_off_fixed_points", off_min, 1e-6, ">="),
    ]


# -- solvers -------------------------------------------------------------------

def caputo_relaxation(alpha: float = 0.7, h: float = 1e-3, t_end: float = 5.0):
    """ABM solution of ``D^alpha y = -y``, ``y(0) = 1``."""
    return integrate_caputo_abm(CaputoIVP(lambda t, y: -y, alpha, [1.0], t_end, h))


def check_lorenz_and_caputo() -> list[CheckResult]:
    res = run_three_way(0.9, horizon=5.0)
    return [
        CheckResult("solvers", "lorenz_conformable_vs_classical",
                    res.conformable_report.max_deviation, 1e-3),
        CheckResult("solvers", "lorenz_caputo_vs_classical",
                    res.caputo_report.max_deviation, CAPUTO_LORENZ_MIN_DEV, ">="),
    ]


def check_caputo_scalar() -> list[CheckResult]:
    traj = caputo_relaxation()
    t, y = traj.times, traj.states[:, 0]
    dev_power = float(np.max(np.abs(y - np.exp(-phi(WeightSpec.power_law(0.7), t)))))
    family = min(
        float(np.max(np.abs(y - np.exp(-phi(WeightSpec.from_name(k, 0.7), t))))) for k in BUILTIN_KINDS
    )
    return [
        CheckResult("solvers", "caputo_scalar_vs_power_map", dev_power, 0.01, ">="),
        CheckResult("solvers", "caputo_scalar_vs_all_maps", family, 0.005, ">="),
    ]


def check_abm_classical_limit() -> list[CheckResult]:
    errs = []
    for h in (0.04, 0.02, 0.01):
        tr = caputo_relaxation(alpha=1.0, h=h)
        errs.append(float(np.max(np.abs(tr.states[:, 0] - np.exp(-tr.times)))))
    # largest ratio e(h/2)/e(h); below 1 means the error shrinks at every halving
    ratio = max(errs[1] / errs[0], errs[2] / errs[1])
    return [
        CheckResult("solvers", "abm_alpha1_error_h0.01", errs[-1], 1e-3),
        CheckResult("solvers", "abm_alpha1_halving_ratio", ratio, 1.0, "<"),
    ]


def check_rk4_order() -> CheckResult:
    errs = []
    ivp = ClassicalIVP(lambda tau, y: y, [1.0], (0.0, 1.0))
    for h in (1e-2, 5e-3):
        tr = integrate_classical(ivp, SolverConfig(Method.RK4, h=h))
        errs.append(abs(tr.final_state[0] - math.e))
    return CheckResult("solvers", "rk4_halving_gain", errs[0] / errs[1], 12.0, ">=")


def _flatten(items) -> list[CheckResult]:
    out = []
    for it in items:
        out.extend(it if isinstance(it, list) else [it])
    return out


SUITES: dict[str, tuple[Callable[[], object], ...]] = {
    "weights": (check_reciprocal_identity, check_round_trip, check_monotonicity, check_slowdown),
    "conformable": (check_theorem1, check_leibniz, check_linearity, check_eigenrelation),
    "analytic": (check_ex1, check_heat, check_wave, check_special),
    "systems": (check_fixed_points, check_origin_eigenvalues, check_eigen_invariance,
                check_fixed_point_invariance),
    "solvers": (check_lorenz_and_caputo, check_caputo_scalar, check_abm_classical_limit, check_rk4_order),
}


def run_suite(name: str) -> list[CheckResult]:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    return _flatten(fn() for fn in SUITES[name])


def run_all() -> list[CheckResult]:
    return [r for name in SUITES for r in run_suite(name)]
