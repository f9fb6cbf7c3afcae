"""Acceptance criteria 1-12, one printed PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v``; the lines are written to the
terminal even when output capture is on.
"""

import csv
import json
import math
import subprocess
import sys

import mpmath
import numpy as np
import pytest

from reparam import (
    CaputoIVP,
    ClassicalIVP,
    Method,
    ScalarFunction,
    SolverConfig,
    WeightSpec,
    conf_derivative_limit,
    conf_derivative_product,
    equivalence_report,
    integrate_caputo_abm,
    integrate_classical,
    integrate_conformable_direct,
    linear_ode_ivp,
    phi,
    phi_inverse,
    psi,
    pull_back,
    reparametrize,
)
from reparam import special
from reparam.analytic import PROFILES, HeatProblem, heat_kernel_mass, heat_solution, linear_example_solution
from reparam.catalog import function
from reparam.systems import (
    DEFAULT_IC,
    LorenzParams,
    classical_lorenz,
    complex_step_jacobian,
    conformable_lorenz,
    jacobian_eigenvalues,
    lorenz_fixed_points,
    lorenz_rhs,
)

KINDS = ("power", "exp", "gamma")
ALPHAS = (0.3, 0.5, 0.9)
CAPUTO_LORENZ_MIN_DEV = 0.1  # frozen from the first verified run (observed 25.3)


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
        return ok
    return emit


@pytest.fixture(scope="module")
def lorenz_classical():
    w = WeightSpec.power_law(0.9)
    ivp = classical_lorenz(LorenzParams(), DEFAULT_IC, float(phi(w, 5.0)))
    return integrate_classical(ivp, SolverConfig(abs_tol=1e-10, rel_tol=1e-10))


def test_criterion_01_reciprocal_identity(report):
    t = np.linspace(0.01, 10.0, 1000)
    h = 1e-5 * t
    worst = 0.0
    for k in KINDS:
        for a in ALPHAS:
            w = WeightSpec.from_name(k, a)
            dphi = (phi(w, t + h) - phi(w, t - h)) / (2.0 * h)
            worst = max(worst, float(np.max(np.abs(psi(w, t) * dphi - 1.0))))
    assert report(1, worst <= 1e-6, f"max |psi*phi' - 1| = {worst:.2e} <= 1e-6")


def test_criterion_02_limit_equals_product(report):
    worst = 0.0
    for k in KINDS:
        for a in ALPHAS:
            w = WeightSpec.from_name(k, a)
            for name in ("sin", "exp", "poly3"):
                f = function(name)
                for t in np.linspace(0.1, 5.0, 200):
                    ref = conf_derivative_product(f, w, t)
                    worst = max(worst, abs(conf_derivative_limit(f, w, t) - ref) / abs(ref))
    assert report(2, worst <= 1e-6, f"max relative limit/product gap = {worst:.2e} <= 1e-6")


def test_criterion_03_leibniz(report):
    fg = ScalarFunction(lambda t: np.sin(t) * np.exp(t), lambda t: np.exp(t) * (np.sin(t) + np.cos(t)))
    f, g = function("sin"), function("exp")
    t = np.linspace(0.1, 5.0, 200)
    worst = 0.0
    for k in KINDS:
        for a in ALPHAS:
            w = WeightSpec.from_name(k, a)
            lhs = conf_derivative_product(fg, w, t)
            rhs = f(t) * conf_derivative_product(g, w, t) + g(t) * conf_derivative_product(f, w, t)
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    assert report(3, worst <= 1e-8, f"max Leibniz defect = {worst:.2e} <= 1e-8")


def test_criterion_04_linear_example(report):
    t = np.linspace(0.2, 3.0, 57)
    residual = 0.0
    rk4 = 0.0
    mpmath.mp.dps = 30
    for a in (0.5, 0.9):
        w = WeightSpec.power_law(a)
        A = mpmath.mpf(a)
        Y = lambda s: mpmath.exp(s**A / A) + mpmath.exp(2 * s**A / A)  # noqa: E731
        Psi = lambda s: s ** (1 - A)  # noqa: E731
        DY = lambda s: Psi(s) * mpmath.diff(Y, s)  # noqa: E731
        for s in t:
            s_mp = mpmath.mpf(float(s))
            y_pkg = linear_example_solution(1.0, 1.0, a, float(s))
            assert abs(y_pkg - float(Y(s_mp))) <= 1e-13 * y_pkg
            assert abs(float(psi(w, float(s))) - float(Psi(s_mp))) <= 1e-14 * float(Psi(s_mp))
            r = Psi(s_mp) * mpmath.diff(DY, s_mp) - 3 * DY(s_mp) + 2 * y_pkg
            residual = max(residual, float(abs(r)))

        ivp = linear_ode_ivp([lambda s: -2.0, lambda s: 3.0], w, [2.0, 3.0], 2.0)
        tr = integrate_classical(ivp, SolverConfig(Method.RK4, h=1e-3))
        ref = np.array([linear_example_solution(1.0, 1.0, a, float(phi_inverse(w, s))) for s in tr.times])
        rk4 = max(rk4, float(np.max(np.abs(tr.states[:, 0] - ref) / np.abs(ref))))
    ok = residual <= 1e-6 and rk4 <= 1e-6
    assert report(4, ok, f"ODE residual = {residual:.2e} <= 1e-6, RK4 relative error = {rk4:.2e} <= 1e-6")


def test_criterion_05_lorenz_equivalence(report, lorenz_classical):
    w = WeightSpec.power_law(0.9)
    direct = integrate_conformable_direct(
        conformable_lorenz(LorenzParams(), w, DEFAULT_IC, 5.0),
        SolverConfig(abs_tol=1e-10, rel_tol=1e-10, t_start_offset=1e-2),
    )
    rep = equivalence_report(direct, lorenz_classical, w, 1e-3)
    assert direct.times[0] == 1e-2 and direct.times[-1] == 5.0
    assert report(5, rep.max_deviation <= 1e-3, f"direct vs pulled-back max deviation = {rep.max_deviation:.2e} <= 1e-3")


def test_criterion_06_caputo_separation(report, lorenz_classical):
    scalar = integrate_caputo_abm(CaputoIVP(lambda t, y: -y, 0.7, [1.0], 5.0, 1e-3))
    dev_a = float(np.max(np.abs(scalar.states[:, 0] - np.exp(-phi(WeightSpec.power_law(0.7), scalar.times)))))

    w = WeightSpec.power_law(0.9)
    p = LorenzParams()
    cap = integrate_caputo_abm(CaputoIVP(lambda t, y: lorenz_rhs(p, y), 0.9, DEFAULT_IC, 5.0, 1e-3))
    keep = cap.times <= 5.0
    pulled = pull_back(lorenz_classical, w, cap.times[keep])
    dev_b = float(np.max(np.abs(cap.states[keep] - pulled.states)))
    ok = dev_a >= 0.01 and dev_b >= CAPUTO_LORENZ_MIN_DEV
    assert report(6, ok, f"(a) scalar deviation = {dev_a:.3f} >= 0.01, (b) Lorenz deviation = {dev_b:.2f} >= 0.1")


def test_criterion_07_abm_classical_limit(report):
    errs = []
    for h in (0.01, 0.005):
        tr = integrate_caputo_abm(CaputoIVP(lambda t, y: -y, 1.0, [1.0], 5.0, h))
        errs.append(float(np.max(np.abs(tr.states[:, 0] - np.exp(-tr.times)))))
    ok = errs[0] <= 1e-3 and errs[1] < errs[0]
    assert report(7, ok, f"error(h=0.01) = {errs[0]:.2e} <= 1e-3, error(h=0.005) = {errs[1]:.2e} < error(h=0.01)")


def test_criterion_08_fixed_points_and_eigenvalues(report):
    p = LorenzParams()
    pts = lorenz_fixed_points(p)
    res = max(float(np.linalg.norm(lorenz_rhs(p, pt))) for pt in pts)
    disc = math.sqrt(121.0 + 1080.0)
    closed = sorted([(-11.0 + disc) / 2.0, -8.0 / 3.0, (-11.0 - disc) / 2.0])
    got = sorted(z.real for z in jacobian_eigenvalues(p, (0.0, 0.0, 0.0)))
    origin = max(abs(g - e) for g, e in zip(got, closed))

    inv = 0.0
    states = [tuple(pt) for pt in pts] + [(1.0, 1.0, 1.0), (-3.5, 2.0, 17.0)]
    for a in ALPHAS:
        G = reparametrize(conformable_lorenz(p, WeightSpec.power_law(a))).rhs
        for s in states:
            eg = jacobian_eigenvalues(p, s, complex_step_jacobian(lambda y: G(1.0, y), s))
            ef = jacobian_eigenvalues(p, s, complex_step_jacobian(lambda y: lorenz_rhs(p, y), s))
            inv = max(inv, max(abs(x - y) for x, y in zip(eg, ef)))
    ok = res <= 1e-12 and origin <= 1e-8 and inv <= 1e-12
    assert report(8, ok, f"fixed-point residual = {res:.1e} <= 1e-12, origin eigenvalues = {origin:.1e} <= 1e-8, "
                         f"classical vs reparametrized = {inv:.1e} <= 1e-12")


def test_criterion_09_heat_residual(report):
    p = HeatProblem(PROFILES["gaussian"], alpha=0.5)
    w, h = p.weight, 1e-3
    worst = 0.0
    for t in np.linspace(0.5, 2.0, 20):
        for x in np.linspace(-2.0, 2.0, 20):
            u = heat_solution(p, x, t)
            ut = (heat_solution(p, x, t + h) - heat_solution(p, x, t - h)) / (2.0 * h)
            uxx = (heat_solution(p, x + h, t) - 2.0 * u + heat_solution(p, x - h, t)) / (h * h)
            worst = max(worst, abs(psi(w, t) * ut - uxx))
    mass = max(abs(heat_kernel_mass(tau) - 1.0) for tau in (1e-3, 0.1, 1.0, 10.0))
    ok = worst <= 1e-4 and mass <= 1e-10
    assert report(9, ok, f"PDE residual = {worst:.2e} <= 1e-4, kernel mass defect = {mass:.1e} <= 1e-10")


def test_criterion_10_special_functions(report):
    g = special.gamma_function
    gam = max(abs(g(1.0) - 1.0), abs(g(0.5) ** 2 - math.pi), abs(g(5.0) - 24.0))
    i0_zero = special.bessel_i0(0.0) == 1.0
    s, a = special.bessel_i0_series(15.0), special.bessel_i0_asymptotic(15.0)
    branch = abs(s - a) / s
    ok = gam <= 1e-10 and i0_zero and branch <= 1e-9
    assert report(10, ok, f"Gamma identities = {gam:.1e} <= 1e-10, I0(0) == 1 is {i0_zero}, "
                          f"I0 branches at z=15 = {branch:.1e} <= 1e-9")


@pytest.mark.xfail(
    strict=True,
    reason="t^a/a exceeds t on (1, a^(-1/(1-a))), e.g. 2*sqrt(2) > 2 at a=0.5; the inequality holds "
           "only past that crossover, while the clock rate 1/psi is below 1 for every t > 1",
)
def test_criterion_11_slowdown(report):
    t = np.linspace(1.0, 50.0, 5000)[1:]
    violations = {a: int(np.count_nonzero(phi(WeightSpec.power_law(a), t) >= t)) for a in ALPHAS}
    equality = float(np.max(np.abs(phi(WeightSpec.power_law(1.0), t) - t)))
    ok = all(v == 0 for v in violations.values()) and equality == 0.0
    first = {a: float(t[np.argmax(phi(WeightSpec.power_law(a), t) >= t)]) for a in ALPHAS if violations[a]}
    detail = ", ".join(f"alpha={a}: {n} of {t.size} samples with phi >= t" for a, n in violations.items())
    if first:
        a0 = min(first)
        detail += f" (alpha={a0} already at t={first[a0]:.4f})"
    detail += f"; |phi - t| at alpha=1 = {equality:.1e}"
    assert report(11, ok, detail)


def test_criterion_12_cli(report, tmp_path):
    verify = subprocess.run([sys.executable, "-m", "reparam", "verify", "--all"], capture_output=True, text=True)
    out = tmp_path / "runs"
    lorenz = subprocess.run(
        [sys.executable, "-m", "reparam", "lorenz", "--alpha", "0.9", "--mode", "all", "--horizon", "5",
         "--out", str(out)],
        capture_output=True, text=True,
    )
    csvs = sorted(p.name for p in out.glob("*.csv"))
    parsed = True
    for name in csvs:
        with open(out / name, newline="") as fh:
            rows = list(csv.reader(fh))
        parsed &= rows[0] == ["t", "tau", "x", "y", "z"] and len(rows) > 2
        parsed &= all(all(math.isfinite(float(v)) for v in r) for r in rows[1:])
    reports = list(out.glob("*.json"))
    rep = json.loads(reports[0].read_text()) if len(reports) == 1 else {}
    conf = rep.get("conformable", {}).get("verdict")
    cap = rep.get("caputo", {}).get("verdict")
    ok = (verify.returncode == 0 and lorenz.returncode == 0 and len(csvs) == 3 and parsed
          and conf == "pass" and cap == "fail")
    assert report(12, ok, f"verify --all exit {verify.returncode}; lorenz exit {lorenz.returncode}, "
                          f"{len(csvs)} CSVs parsed={parsed}, {len(reports)} JSON, "
                          f"conformable={conf}, caputo={cap}")
