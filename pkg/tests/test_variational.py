import numpy as np
import pytest
from hypothesis import given, strategies as st

from titeica import jets as J, pde, symmetry as sym, variational as var
from titeica.variational import L1, L2, random_jet

seeds = st.integers(0, 100_000)


def coords(w):
    return pde.jet_coordinates(w)


@given(seeds)
def test_euler_lagrange_reproduces_equations(seed):
    w = random_jet(np.random.default_rng(seed), 2)
    assert var.euler_lagrange(L1, w) == pytest.approx(pde.LIOUVILLE_OMEGA.delta(*coords(w)), abs=1e-12)
    assert var.euler_lagrange(L2, w) == pytest.approx(pde.TITEICA_OMEGA.delta(*coords(w)), abs=1e-12)


def test_zero_lagrangian(rng):
    zero = lambda *a: 0.0 * a[2]  # noqa: E731
    L = var.Lagrangian("0", zero, zero, zero, zero)
    assert var.euler_lagrange(L, random_jet(rng, 2)) == 0.0


def test_helmholtz(rng):
    w = random_jet(rng, 3)
    assert np.all(var.helmholtz_residual(pde.LIOUVILLE_OMEGA, w) == 0.0)
    assert np.all(var.helmholtz_residual(pde.TITEICA_OMEGA, w) == 0.0)
    # Delta = w_u is not an Euler-Lagrange expression
    r = var.helmholtz_residual(lambda u, v, w, wu, wv, wuu, wuv, wvv: wu, w)
    assert r[0] == 1.0


def test_helmholtz_needs_order_three(rng):
    with pytest.raises(J.JetError):
        var.helmholtz_residual(pde.LIOUVILLE_OMEGA, random_jet(rng, 2))


@given(seeds)
def test_variational_symmetries(seed):
    w = random_jet(np.random.default_rng(seed), 2)
    for X in sym.catalog("W40"):
        assert abs(var.variational_defect(X, L1, w)) <= 1e-12
    for X in sym.catalog("U41"):
        assert abs(var.variational_defect(X, L2, w)) <= 1e-12


def test_non_variational_fields(rng):
    w = random_jet(rng, 2)
    dw = sym.VectorField3("d/dw", sym._const(0.0), sym._const(0.0), sym._const(1.0))
    assert var.variational_defect(dw, L1, w) == pytest.approx(-np.exp(w.value))
    # symmetry of the Liouville equation (f = u^2, g = 0) that is not variational
    X = sym.VectorField3("W", lambda u, v, w: u * u + 0 * w, sym._const(0.0), lambda u, v, w: -2.0 * u + 0 * w)
    assert var.variational_defect(X, L1, w) == pytest.approx(w[(0, 1)])
    with pytest.raises(var.NotVariationalError):
        var.noether_law(dw, L1)


def test_noether_examples(rng):
    w = random_jet(rng, 2)
    a = var._first_order_args(w)
    _, _, om, wu, wv = a
    law = var.noether_law(-sym.W3, L1)
    assert law.Q(*a) == pytest.approx(wu)
    assert law.P1(*a) == pytest.approx(-np.exp(om))
    assert law.P2(*a) == pytest.approx(0.5 * wu * wu)
    u = a[0]
    law = var.noether_law(-sym.W1, L1)
    assert law.P1(*a) == pytest.approx(0.5 * wv - u * np.exp(om))
    assert law.P2(*a) == pytest.approx(0.5 * wu * (1 + u * wu))
    law = var.noether_law(-sym.U2, L2)
    assert law.P1(*a) == pytest.approx(-np.exp(om) - 0.5 * np.exp(-2 * om))


@pytest.mark.parametrize("key", [*var.LIOUVILLE_LAWS, *var.TITEICA_LAWS])
def test_table_rows(key):
    rng = np.random.default_rng(hash(key) % 2**32)
    law = {**var.LIOUVILLE_LAWS, **var.TITEICA_LAWS}[key]
    X, L, kind = var.LAW_SOURCES[key]
    gen = var.noether_law(X, L)
    for _ in range(200):
        w = random_jet(rng, 2)
        assert abs(var.conservation_divergence_defect(law, kind, w)) <= 1e-12
        a = var._first_order_args(w)
        for f, g in ((law.P1, gen.P1), (law.P2, gen.P2), (law.Q, gen.Q)):
            assert abs(f(*a) - g(*a)) <= 1e-12


def test_perturbed_law_fails(rng):
    w = random_jet(rng, 2)
    bad = var.LIOUVILLE_LAWS["-W_3"].perturbed(0.01)
    d = var.conservation_divergence_defect(bad, pde.LIOUVILLE_OMEGA, w)
    assert d == pytest.approx(0.01 * w[(2, 0)])


@given(seeds)
def test_integrating_factor(seed):
    w = random_jet(np.random.default_rng(seed), 2)
    h = J.exp(w)
    for variant in (1, 2):
        a, b = var.integrating_factor_check(h, variant)
        assert a == pytest.approx(b, abs=1e-12)
    # and 1/h^3 times the polynomial form is Delta of the omega form over h
    a, _ = var.integrating_factor_check(h, 1)
    assert a == pytest.approx(pde.LIOUVILLE_OMEGA.delta(*coords(w)) / h.value, abs=1e-12)


def test_custom_lagrangian_checks_partials():
    fn = lambda u, v, w, wu, wv: wu * wu * w  # noqa: E731
    L = var.custom_lagrangian("c", fn, lambda u, v, w, wu, wv: wu * wu, lambda u, v, w, wu, wv: 2 * wu * w, lambda *a: 0.0)
    w = random_jet(np.random.default_rng(1), 2)
    # E = wu^2 - D_u(2 wu w) = wu^2 - 2 wuu w - 2 wu^2
    c = w.coeffs
    assert var.euler_lagrange(L, w) == pytest.approx(-c[(1, 0)] ** 2 - 2 * c[(2, 0)] * c[(0, 0)])
    with pytest.raises(ValueError):
        var.custom_lagrangian("bad", fn, lambda *a: 0.0, lambda *a: 0.0, lambda *a: 0.0)
