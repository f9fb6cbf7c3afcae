"""Compiled and numpy kernels must agree to round-off."""

import numpy as np
import pytest

from reparam import CaputoIVP, ClassicalIVP, Method, SolverConfig, integrate_caputo_abm, integrate_classical
from reparam._kernels import BACKEND, compiled_available, get_backend
from reparam.systems import LorenzParams, lorenz_rhs

needs_compiled = pytest.mark.skipif(not compiled_available(), reason="extension not built")
P = LorenzParams()


def _lorenz(t, y):
    return lorenz_rhs(P, y)


def _oscillator(t, y):
    return np.array([y[1], -y[0] - 0.1 * y[1], -0.5 * y[2] + np.sin(t)])


def test_backend_names():
    assert BACKEND in ("compiled", "python")
    with pytest.raises(ValueError):
        get_backend("fortran")


@needs_compiled
def test_rk4_parity():
    ivp = ClassicalIVP(_oscillator, [1.0, 0.0, 0.5], (0.0, 10.0))
    out = [integrate_classical(ivp, SolverConfig(Method.RK4, h=1e-3, backend=b)) for b in ("python", "compiled")]
    assert np.array_equal(out[0].times, out[1].times)
    assert np.max(np.abs(out[0].states - out[1].states)) < 1e-12


@needs_compiled
def test_rk45_parity():
    # error norms are summed in a different order, so accepted steps differ in the last bits
    ivp = ClassicalIVP(_oscillator, [1.0, 0.0, 0.5], (0.0, 10.0))
    out = [integrate_classical(ivp, SolverConfig(backend=b)) for b in ("python", "compiled")]
    assert len(out[0]) == len(out[1])
    assert np.max(np.abs(out[0].times - out[1].times)) < 1e-8
    assert np.max(np.abs(out[0].states - out[1].states)) < 1e-9


@needs_compiled
def test_lorenz_parity_short_horizon():
    # chaotic growth amplifies last-bit differences in the step controller
    ivp = ClassicalIVP(_lorenz, [1.0, 1.0, 1.0], (0.0, 2.0))
    out = [integrate_classical(ivp, SolverConfig(backend=b)) for b in ("python", "compiled")]
    assert abs(out[0].times.size - out[1].times.size) <= 2
    assert np.max(np.abs(out[0].final_state - out[1].final_state)) < 1e-6


@needs_compiled
@pytest.mark.parametrize("alpha", [0.3, 0.5, 0.9, 1.0])
def test_abm_parity(alpha):
    ivp = CaputoIVP(_oscillator, alpha, [1.0, 0.0, 0.5], 3.0, 1e-2)
    py = integrate_caputo_abm(ivp, "python")
    c = integrate_caputo_abm(ivp, "compiled")
    assert np.max(np.abs(py.states - c.states)) < 1e-12


@needs_compiled
def test_abm_lorenz_parity():
    ivp = CaputoIVP(_lorenz, 0.9, [1.0, 1.0, 1.0], 1.0, 1e-2)
    py = integrate_caputo_abm(ivp, "python")
    c = integrate_caputo_abm(ivp, "compiled")
    assert np.max(np.abs(py.states - c.states)) < 1e-9


@needs_compiled
def test_rhs_receives_copy():
    seen = []

    def rhs(t, y):
        y[0] = 99.0  # must not leak into the integrator state
        seen.append(t)
        return np.zeros_like(y)

    for b in ("python", "compiled"):
        tr = integrate_classical(ClassicalIVP(rhs, [1.0], (0.0, 1.0)), SolverConfig(Method.RK4, h=0.25, backend=b))
        assert np.all(tr.states == 1.0)
        tr = integrate_caputo_abm(CaputoIVP(rhs, 0.5, [1.0], 1.0, 0.25), b)
        assert np.all(tr.states == 1.0)
