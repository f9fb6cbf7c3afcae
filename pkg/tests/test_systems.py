import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from reparam import DomainError, Method, SolverConfig, WeightSpec, integrate_classical, integrate_conformable_direct
from reparam.conformable import reparametrize
from reparam.systems import (
    DEFAULT_IC,
    LorenzParams,
    caputo_lorenz,
    classical_lorenz,
    classify,
    complex_step_jacobian,
    conformable_field,
    conformable_lorenz,
    cubic_roots,
    jacobian_eigenvalues,
    lorenz_fixed_points,
    lorenz_jacobian,
    lorenz_rhs,
    run_three_way,
    stability_report,
    trapping_ball_distance,
)
from reparam.solvers import integrate_caputo_abm

P = LorenzParams()
coords = st.floats(-30.0, 30.0)


def test_params_validated():
    with pytest.raises(DomainError):
        LorenzParams(sigma=0.0)


def test_rhs_values():
    assert np.array_equal(lorenz_rhs(P, (0.0, 0.0, 0.0)), np.zeros(3))
    assert lorenz_rhs(P, (1.0, 1.0, 1.0)) == pytest.approx([0.0, 26.0, -5.0 / 3.0], abs=1e-15)


@given(coords, coords, coords)
def test_z2_symmetry_of_field(x, y, z):
    r = lorenz_rhs(P, (x, y, z))
    m = lorenz_rhs(P, (-x, -y, z))
    assert m == pytest.approx([-r[0], -r[1], r[2]], abs=1e-12 * (1 + np.max(np.abs(r))))


def test_fixed_points():
    assert len(lorenz_fixed_points(LorenzParams(rho=0.5))) == 1
    pts = lorenz_fixed_points(P)
    assert pts[1] == pytest.approx([8.4852813742385703, 8.4852813742385703, 27.0], rel=1e-15)
    for pt in pts:
        assert np.linalg.norm(lorenz_rhs(P, pt)) <= 1e-12


def test_origin_eigenvalues():
    eig = jacobian_eigenvalues(P, (0, 0, 0))
    assert [z.real for z in eig] == pytest.approx([11.827723451163456, -8 / 3, -22.827723451163456], abs=1e-8)
    assert all(z.imag == 0 for z in eig)
    assert stability_report(P, (0, 0, 0)).classification == "saddle"


def test_c_plus_saddle_focus():
    rep = stability_report(P, lorenz_fixed_points(P)[1])
    eig = rep.eigenvalues
    reals = [z for z in eig if abs(z.imag) < 1e-12]
    pair = [z for z in eig if abs(z.imag) > 1e-12]
    assert len(reals) == 1 and reals[0].real < 0
    assert len(pair) == 2 and all(z.real > 0 for z in pair)
    assert rep.classification == "saddle-focus" and rep.max_residual <= 1e-8
    ref = np.sort_complex(np.linalg.eigvals(lorenz_jacobian(P, lorenz_fixed_points(P)[1])))
    assert np.sort_complex(np.array(eig)) == pytest.approx(ref, abs=1e-10)


@given(coords, coords, coords)
def test_trace_identity_and_numpy_oracle(x, y, z):
    eig = jacobian_eigenvalues(P, (x, y, z))
    assert sum(eig).real == pytest.approx(-(P.sigma + 1 + P.beta), abs=1e-9)
    ref = np.linalg.eigvals(lorenz_jacobian(P, (x, y, z)))
    scale = 1 + np.max(np.abs(ref))
    got = np.array(eig)
    for r in ref:
        assert np.min(np.abs(got - r)) <= 1e-7 * scale


def test_cubic_roots_simple():
    roots = sorted(z.real for z in cubic_roots(-6.0, 11.0, -6.0))
    assert roots == pytest.approx([1.0, 2.0, 3.0], abs=1e-13)
    assert all(abs(z) < 1e-12 for z in cubic_roots(0.0, 0.0, 0.0))


def test_classify():
    assert classify([-1, -2, -3]) == "stable node"
    assert classify([complex(-1, 2), complex(-1, -2), -3]) == "stable focus"
    assert classify([1, 2, 3]) == "unstable node"
    assert classify([0.0, -1, -2]) == "non-hyperbolic"


def test_complex_step_jacobian_exact():
    s = np.array([1.3, -0.4, 20.0])
    J = complex_step_jacobian(lambda y: lorenz_rhs(P, y), s)
    assert np.array_equal(J, lorenz_jacobian(P, s))


@pytest.mark.parametrize("alpha", [0.3, 0.9])
def test_reparametrized_jacobian_identical(alpha):
    G = reparametrize(conformable_lorenz(P, WeightSpec.power_law(alpha))).rhs
    for s in ((1.0, 2.0, 3.0), (-8.0, 4.0, 30.0)):
        JG = complex_step_jacobian(lambda y: G(1.7, y), s)
        assert np.array_equal(JG, lorenz_jacobian(P, s))


def test_fixed_point_invariance():
    field = conformable_field(P, WeightSpec.power_law(0.6))
    for t in (0.1, 1.0, 10.0):
        for pt in lorenz_fixed_points(P):
            assert np.linalg.norm(field(t, pt)) <= 1e-12
        assert np.linalg.norm(field(t, np.array([1.0, 2.0, 3.0]))) > 1.0


def test_classical_lorenz_visits_both_lobes_and_stays_bounded():
    tr = integrate_classical(classical_lorenz(P, DEFAULT_IC, 40.0), SolverConfig(abs_tol=1e-9, rel_tol=1e-9))
    x = tr.states[:, 0]
    assert np.count_nonzero(np.diff(np.sign(x))) > 10
    assert np.max(trapping_ball_distance(P, tr.states)) <= 2 * (P.rho + P.sigma)


@pytest.mark.slow
def test_all_formulations_bounded():
    w = WeightSpec.power_law(0.9)
    conf = integrate_conformable_direct(conformable_lorenz(P, w, t_end=20.0))
    cap = integrate_caputo_abm(caputo_lorenz(P, 0.9, t_end=20.0, h=5e-3))
    for tr in (conf, cap):
        assert np.max(trapping_ball_distance(P, tr.states)) <= 2 * (P.rho + P.sigma)


@pytest.mark.parametrize("solver", ["classical", "conformable"])
def test_z2_symmetry_of_trajectories(solver):
    cfg = SolverConfig(abs_tol=1e-11, rel_tol=1e-11)
    if solver == "classical":
        a = integrate_classical(classical_lorenz(P, (1, 1, 1), 5.0), cfg)
        b = integrate_classical(classical_lorenz(P, (-1, -1, 1), 5.0), cfg)
    else:
        w = WeightSpec.power_law(0.9)
        a = integrate_conformable_direct(conformable_lorenz(P, w, (1, 1, 1), 5.0), cfg)
        b = integrate_conformable_direct(conformable_lorenz(P, w, (-1, -1, 1), 5.0), cfg)
    # the mirrored field gives the mirrored step sequence
    assert np.array_equal(a.times, b.times)
    mirrored = b.states * np.array([-1.0, -1.0, 1.0])
    assert np.max(np.abs(a.states - mirrored)) <= 1e-9


@pytest.fixture(scope="module")
def run09():
    return run_three_way(0.9)


class TestThreeWay:

    def test_conformable_passes(self, run09):
        assert run09.conformable_report.verdict
        assert run09.conformable_report.max_deviation <= 1e-3

    def test_caputo_fails(self, run09):
        assert not run09.caputo_report.verdict
        assert run09.caputo_report.max_deviation >= 0.1

    def test_grids(self, run09):
        assert run09.conformable.times[0] == 1e-2 and run09.conformable.times[-1] == 5.0
        assert run09.caputo.times[-1] == pytest.approx(5.0)
        assert run09.classical.times[-1] == pytest.approx(5.0**0.9 / 0.9)

    def test_alpha_one_all_agree(self):
        res = run_three_way(1.0, tolerance=1e-2)
        assert res.conformable_report.max_deviation <= 1e-6
        assert res.caputo_report.verdict  # ABM order-1 error at h = 1e-3

    def test_optional_legs(self):
        res = run_three_way(0.9, horizon=1.0, include_caputo=False, include_conformable=False)
        assert res.caputo is None and res.conformable is None
        assert res.classical.times[-1] == pytest.approx(1.0 / 0.9)

    def test_bad_horizon(self):
        with pytest.raises(DomainError):
            run_three_way(0.9, horizon=0.0)
