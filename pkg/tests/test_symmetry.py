import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from titeica import jets as J, pde, solutions as sol, symmetry as sym
from titeica.symmetry import U1, U2, U3, W1
from titeica.variational import random_jet

ZERO = sym.VectorField3("0", sym._const(0.0), sym._const(0.0), sym._const(0.0))
DW = sym.VectorField3("d/dw", sym._const(0.0), sym._const(0.0), sym._const(1.0))
SCALE = sym.VectorField3("w d/dw", sym._const(0.0), sym._const(0.0), lambda u, v, w: w)


def jet_at(u, v, wu=3.0, order=3):
    c = {mi: 0.1 * (mi[0] + 2 * mi[1] + 1) for mi in J.multi_indices(order)}
    c[(1, 0)] = wu
    return J.Jet2((u, v), order, c)


def omega_jet(h, u, v):
    return J.log(h(J.seed_u(u, v, 3), J.seed_v(u, v, 3)))


def test_characteristic_examples():
    w = jet_at(2.0, 0.5)
    assert sym.characteristic(U2, w) == -3.0
    assert sym.characteristic(W1, w) == -7.0
    assert sym.characteristic(ZERO, w) == 0.0


def test_prolongation_of_translation_and_scaling(rng):
    w = random_jet(rng, 3)
    p = sym.prolong2(U2, w)
    assert (p.au, p.av, p.auu, p.auv, p.avv) == (0.0, 0.0, 0.0, 0.0, 0.0)
    q = sym.prolong2(SCALE, w)
    assert q.au == pytest.approx(w[(1, 0)]) and q.auv == pytest.approx(w[(1, 1)])


def test_prolongation_needs_order_three():
    with pytest.raises(J.JetError):
        sym.prolong2(U1, random_jet(np.random.default_rng(0), 2))


@given(st.integers(0, 10_000))
def test_prolongation_is_linear_in_field(seed):
    w = random_jet(np.random.default_rng(seed), 3)
    a, b = sym.prolong2(U1 + W1, w), sym.prolong2(U1, w)
    c = sym.prolong2(W1, w)
    for k in ("au", "av", "auu", "auv", "avv"):
        assert getattr(a, k) == pytest.approx(getattr(b, k) + getattr(c, k), abs=1e-12)


def test_w27_identity_on_liouville_solution():
    # pr^2 W (Delta) = -(f' + g') Delta vanishes on solutions
    W = sym.liouville_field(sol.Curve(lambda t: t * t), sol.Curve(lambda t: t))
    h = sol.liouville_general(sol.curve_identity(), sol.curve_identity())
    for u, v in [(0.6, 0.9), (1.3, 0.4)]:
        assert abs(sym.invariance_defect(W, pde.LIOUVILLE_OMEGA, omega_jet(h, u, v))) <= 1e-10


def test_w27_invariance_sin_cube(rng):
    W = sym.liouville_field(sol.Curve(J.sin), sol.Curve(lambda t: t**3))
    h = sol.liouville_general(*sol.LIOUVILLE_PRESETS["exp"]())
    for u, v in rng.uniform(-1, 1, (50, 2)):
        assert abs(sym.invariance_defect(W, pde.LIOUVILLE_OMEGA, omega_jet(h, u, v))) <= 1e-10


def test_u1_invariance_on_sinh_solution(rng):
    h = sol.titeica_sinh(0.0)
    for u, v in rng.uniform(0.3, 1.5, (20, 2)):
        assert abs(sym.invariance_defect(U1, pde.TITEICA_OMEGA, omega_jet(h, u, v))) <= 1e-10


def test_dw_is_not_a_symmetry():
    w = omega_jet(sol.titeica_sinh(0.0), 0.7, 0.4)
    d = sym.invariance_defect(DW, pde.TITEICA_OMEGA, w)
    assert d == pytest.approx(-(math.exp(w.value) + 2.0 * math.exp(-2.0 * w.value)))


def test_off_solution_jet_rejected(rng):
    with pytest.raises(sym.NotOnSolutionError):
        sym.invariance_defect(U1, pde.TITEICA_OMEGA, random_jet(rng, 3))


def test_transform_solution():
    f = sol.titeica_sinh(0.0).omega()
    same = sym.transform_solution("scale", 0.0, f)
    assert same(0.7, 0.2) == f(0.7, 0.2)
    g = sym.transform_solution("scale", 0.3, f)
    for u, v in [(0.5, 0.5), (1.1, 0.3)]:
        assert abs(pde.residual_scalar(pde.TITEICA_OMEGA, g(J.seed_u(u, v, 2), J.seed_v(u, v, 2)))) <= 1e-10
    lio = sol.liouville_general(sol.curve_identity(), sol.curve_identity())
    shifted = sym.transform_solution("shift_u", 1.0, lio)
    ref = sol.liouville_general(sol.Curve(lambda t: t - 1.0, derivative=sol.Curve(lambda t: 1.0 + 0 * t)), sol.curve_identity())
    for u, v in [(1.5, 0.5), (2.0, 1.0)]:
        assert shifted(u, v) == pytest.approx(ref(u, v), abs=1e-14)
    with pytest.raises(ValueError):
        sym.transform_solution("rotate", 0.1, f)


def test_brackets():
    p = (0.3, -0.8, 1.1)
    assert np.all(sym.lie_bracket(U2, U3)(*p) == 0.0)
    assert np.allclose(sym.lie_bracket(U1, U2)(*p), -U2(*p))
    assert np.allclose(sym.lie_bracket(U1, U3)(*p), U3(*p))


@pytest.mark.parametrize("eps", [0.1, 0.5, 1.0])
def test_adjoint_table(eps):
    got = sym.adjoint_table([U1, U2, U3], eps)
    assert np.max(np.abs(got - sym.adjoint_closed_form(eps))) <= 1e-12


def test_adjoint_examples():
    B = [U1, U2, U3]
    assert sym.adjoint(1, 1.0, 2, B)[1] == pytest.approx(math.e, abs=1e-12)
    assert np.allclose(sym.adjoint(2, 0.5, 1, B), [1.0, -0.5, 0.0], atol=1e-15)
    for j in (1, 2, 3):
        assert np.array_equal(sym.adjoint(3, 0.0, j, B), np.eye(3)[j - 1])


def test_adjoint_series_cap():
    with pytest.raises(sym.SeriesDivergenceError):
        sym.adjoint(1, 30.0, 2, [U1, U2, U3], max_terms=20)


def test_decompose_rejects_outside_span():
    with pytest.raises(ValueError):
        sym.decompose(DW, [U1, U2, U3])


def test_defining_residual_20():
    mu = sol.sinh_profile(0.0)
    c1, c2 = 1.0, 2.0
    frame = pde.nonruled_frame(lambda u, v: mu(c1 * v - c2 * u + 3.0))
    res = sym.defining_residual_20(lambda u: c1 + 0 * u, lambda v: c2 + 0 * v, frame, 0.3, 0.2)
    assert np.max(np.abs(res)) <= 1e-10
    # ruled frame with h = U'V' mu(U + V): third residual vanishes
    U, V = J.exp, lambda t: t**3 + t
    dU, dV = J.exp, lambda t: 3 * t * t + 1
    h = lambda u, v: dU(u) * dV(v) * 2.0 / ((U(u) + V(v)) ** 2)  # noqa: E731
    res = sym.defining_residual_20(lambda u: 1 / dU(u), lambda v: -1 / dV(v), pde.ruled_frame(h, lambda u: 1 + 0 * u), 0.2, 0.5)
    assert abs(res[2]) <= 1e-10
    # negative control
    frame = pde.nonruled_frame(sol.titeica_sinh(0.0))
    res = sym.defining_residual_20(lambda u: u, lambda v: 0 * v, frame, 0.3, 0.2)
    assert abs(res[2]) > 1e-3


def test_defining_residual_26():
    W = sym.liouville_field(sol.Curve(J.sin), sol.Curve(lambda t: t**3))
    assert np.max(np.abs(sym.defining_residual_26(W, J.exp, 0.3, 0.2, 0.1))) <= 1e-12
    H = lambda w: J.exp(w) - J.exp(-2.0 * w)  # noqa: E731
    assert np.max(np.abs(sym.defining_residual_26(U1, H, 0.3, 0.2, 0.1))) <= 1e-12
    w = 0.1
    res = sym.defining_residual_26(SCALE, J.exp, 0.3, 0.2, w)
    assert res[7] == pytest.approx((1.0 - w) * math.exp(w))


def test_ruled_cubic_residual():
    assert sym.ruled_cubic_residual(lambda u: 2.0, lambda u: 1.0, 8.0, 0.0) == 0.0


def test_catalogs():
    ys = sym.catalog("Y18")
    assert len(ys) == 8
    assert np.array_equal(ys[0].A, np.diag([1.0, 0.0, -1.0]))
    assert all(A.trace == 0.0 for A in ys)
    assert [X.name for X in sym.catalog("U28")] == ["U_1", "U_2", "U_3"]
    assert np.array_equal(sym.catalog("W40")[2](0.4, 0.5, 0.6), [1.0, 0.0, 0.0])
    assert sym.catalog("Ybar23")[0](0.0, 0.0, 2.0)[2] == 2.0
    z = sym.catalog("Zbar24", zeta=lambda u: u, eta=lambda v: -v)[0]
    assert np.array_equal(z(1.0, 2.0, 0.0), [1.0, -2.0, 0.0])
    with pytest.raises(KeyError):
        sym.catalog("nope")


def test_xyz_invariance():
    ys = sym.catalog("Y18")
    assert sym.invariant_xyz_check(ys[0], point=(1.0, 2.0, 3.0)) == 0.0
    assert abs(sym.invariant_xyz_check(ys[1], point=(0.4, -1.2, 2.2))) <= 1e-15
    # Y_3 = y d/dx: y * (yz)
    assert sym.invariant_xyz_check(ys[2], point=(1.0, 2.0, 3.0)) == pytest.approx(12.0)


@given(st.integers(0, 10_000))
def test_scaling_invariants(seed):
    w = random_jet(np.random.default_rng(seed), 2)
    assert np.max(np.abs(sym.scaling_invariants_check(w))) <= 1e-12
