import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from titeica import jets as J, pde, solutions as sol
from titeica.solutions import SolutionDomainError
from titeica.variational import random_jet


def sinh_h():
    return sol.titeica_sinh(0.0)


def liouville_h(u, v):
    return 2.0 / ((u + v) * (u + v))


@given(st.integers(0, 10_000))
def test_h_and_omega_forms_agree(seed):
    w = random_jet(np.random.default_rng(seed), 2)
    h = J.exp(w)
    for hk, wk in ((pde.LIOUVILLE_H, pde.LIOUVILLE_OMEGA), (pde.TITEICA_H, pde.TITEICA_OMEGA)):
        assert pde.residual_scalar(hk, h) == pytest.approx(pde.residual_scalar(wk, w), abs=1e-12)


def test_h_form_needs_positive_h():
    with pytest.raises(SolutionDomainError):
        pde.residual_scalar(pde.TITEICA_H, J.constant(-1.0, 0.0, 0.0, 2))


def test_general_h_matches_named_kind(rng):
    kind = pde.general_h(lambda w: J.exp(w))
    w = random_jet(rng, 2)
    assert pde.residual_scalar(kind, w) == pde.residual_scalar(pde.LIOUVILLE_OMEGA, w)


def test_nonruled_frame_integrable_on_titeica_solution(rng):
    frame = pde.nonruled_frame(sinh_h())
    for u, v in rng.uniform(0.3, 1.5, (20, 2)):
        assert np.max(np.abs(pde.residual_integrability(frame, u, v))) <= 1e-10


def test_ruled_frame_integrable_on_liouville_solution(rng):
    frame = pde.ruled_frame(liouville_h, lambda u: J.exp(u))
    for u, v in rng.uniform(0.3, 1.5, (20, 2)):
        assert np.max(np.abs(pde.residual_integrability(frame, u, v))) <= 1e-10


def test_integrability_second_relation_sign():
    # a_v + b a'' - h vanishes; the flipped sign a_v - b a'' - h does not
    frame = pde.nonruled_frame(sinh_h())
    u, v = 0.7, 0.4
    res = pde.residual_integrability(frame, u, v)
    assert abs(res[1]) <= 1e-12
    h = sinh_h()(u, v)
    assert abs(res[1] - 2.0 / (h * h)) > 0.1


def test_mismatched_frame_fails():
    frame = pde.nonruled_frame(lambda u, v: 2.0 / ((u + v) * (u + v)))
    assert np.max(np.abs(pde.residual_integrability(frame, 0.6, 0.5))) > 1e-3


def test_linear_system_on_exponential():
    frame = pde.nonruled_frame(lambda u, v: 1.0 + 0.0 * (u + v))
    theta = J.exp(J.seed_u(0.2, 0.3, 2) + J.seed_v(0.2, 0.3, 2))
    assert np.max(np.abs(pde.residual_linear_system(frame, theta))) <= 1e-14


def test_triple_product_of_exponential_surface():
    u, v = J.seed_u(0.0, 0.0, 1), J.seed_v(0.0, 0.0, 1)
    assert pde.surface_conditions(J.exp(u), J.exp(v), J.exp(-u - v)) == pytest.approx(3.0)


def test_first_integral_of_sinh_profile():
    mu = sol.sinh_profile(0.0)
    vals = [pde.mu_first_integral(*mu.eval(t, 1).coeffs) for t in (0.5, 1.0, 2.0, 4.0)]
    assert np.allclose(vals, -0.75, atol=1e-12)


def test_mu_ode_matches_closed_form():
    mu = sol.sinh_profile(0.0)
    m0 = mu.eval(1.0, 1)
    curve = pde.integrate_mu_ode(1.0, m0[0], m0[1], 1.0, 3.0)
    exact = np.array([mu(t) for t in curve.t])
    assert np.max(np.abs(curve.mu - exact)) <= 1e-8
    assert np.ptp(curve.first_integral) <= 1e-8
    j = curve.eval(2.0, 3)
    want = mu.eval(2.0, 3)
    for k in range(4):
        assert j[k] == pytest.approx(want[k], rel=1e-7)


def test_mu_ode_blowup():
    # the sinh profile has a pole at t = 0
    mu = sol.sinh_profile(0.0)
    m0 = mu.eval(1.0, 1)
    with pytest.raises(pde.BlowUpError):
        pde.integrate_mu_ode(1.0, m0[0], m0[1], 1.0, -0.5)


def test_residual_ode_g_and_w():
    w = sol.sinh_w(0.2)
    assert abs(pde.residual_ode_w(w.eval(0.8, 1))) <= 1e-14
    # g = const root of g^3 + C g^2 + 4 = 0 with g' = 0: g = -2, C = 1
    g = J.Jet1(0.0, 1, (-2.0, 0.0))
    assert pde.residual_ode_g(g, 1.0) == 0.0


def test_rk4_exponential():
    y = np.array([1.0])
    for k in range(10):
        y = pde.rk4_step(lambda t, y: y, 0.1 * k, y, 0.1)
    assert y[0] == pytest.approx(math.e, rel=1e-6)
