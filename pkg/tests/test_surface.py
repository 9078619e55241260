import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from titeica import pde, solutions as sol, surface as S, symmetry as sym
from titeica.solutions import ParametricSurface
from titeica.surface import GridSpec

FRAME_CONST = pde.nonruled_frame(S.const_h)
UNIT = GridSpec(0.0, 0.0, 51, 51, 0.02, 0.02)


def exp_error(grid):
    f = S.integrate_component(FRAME_CONST, (1.0, 1.0, 1.0), grid)
    U, V = grid.mesh()
    return float(np.max(np.abs(f.theta - np.exp(U + V))))


def test_exponential_component():
    err = exp_error(UNIT)
    # RK4 floor at du = 0.02 is ~2e-8 absolute, ~3e-9 relative to e^2
    assert err / np.exp(2.0) <= 1e-8


def test_zero_initial_data():
    f = S.integrate_component(FRAME_CONST, (0.0, 0.0, 0.0), UNIT)
    assert np.all(f.theta == 0.0)


@settings(max_examples=15)
@given(st.lists(st.floats(-2, 2), min_size=6, max_size=6), st.floats(-3, 3))
def test_linearity_in_initial_data(ab, lam):
    frame, _, _ = S.surface_preset("nonruled-sinh")
    g = GridSpec(0.5, 0.5, 11, 11, 0.05, 0.05)
    a, b = np.array(ab[:3]), np.array(ab[3:])
    both = S.integrate_component(frame, [a + lam * b, a, b], g)
    t = both.theta
    assert np.max(np.abs(t[0] - (t[1] + lam * t[2]))) <= 1e-10 * max(1.0, np.max(np.abs(t)))


def test_marching_orders_converge():
    frame, _, g = S.surface_preset("nonruled-sinh")
    d1 = S.marching_discrepancy(frame, (1.0, 0.0, 0.0), g)
    d2 = S.marching_discrepancy(frame, (1.0, 0.0, 0.0), g.refined())
    assert d1 / d2 >= 12


def test_cube_root_surface_matches_closed_form():
    s = S.integrate_surface(FRAME_CONST, S.CUBE_ROOT_ICS, UNIT)
    U, V = UNIT.mesh()
    exact = S.cube_root_surface(U, V)
    assert np.max(np.abs(s.r - exact)) <= 1e-6
    rep = S.geometry(s)
    assert rep.spread_I <= 1e-4
    assert rep.mean_I == pytest.approx(-4 / 27, rel=1e-6)
    assert max(S.asymptotic_defect(rep)) <= 1e-6


def test_triple_product_keeps_sign():
    for name in ("nonruled-const", "nonruled-sinh", "ruled-liouville"):
        frame, ics, g = S.surface_preset(name)
        f = S.integrate_surface(frame, ics, g).triple
        assert np.all(f > 0) or np.all(f < 0)


def test_dependent_initial_conditions():
    ics = np.array([[1.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    with pytest.raises(S.DependentInitialConditionsError):
        S.integrate_surface(FRAME_CONST, ics, UNIT)


def test_incompatible_frame_rejected():
    frame = pde.nonruled_frame(S.liouville_h)
    with pytest.raises(pde.FrameIncompatibleError):
        S.integrate_component(frame, (1.0, 0.0, 0.0), GridSpec(0.5, 0.5, 5, 5, 0.1, 0.1))


def test_grid_validation():
    with pytest.raises(ValueError):
        GridSpec(0, 0, 2000, 2000, 0.01, 0.01)
    with pytest.raises(ValueError):
        GridSpec(0, 0, 1, 5, 0.1, 0.1)
    with pytest.raises(ValueError):
        GridSpec(0, 0, 5, 5, -0.1, 0.1)
    g = GridSpec.window(0.0, 1.0, 0.0, 1.0, 0.02)
    assert (g.nu, g.nv) == (51, 51)
    assert g.refined().nu == 101


def test_ruled_surface_lines_are_straight():
    frame, ics, g = S.surface_preset("ruled-liouville")
    s = S.integrate_surface(frame, ics, g)
    rep = S.geometry(s)
    assert rep.max_abs_N <= 1e-6
    assert S.line_straightness(s, "v") <= 1e-10
    assert S.line_straightness(s, "u") > 1e-3
    assert rep.spread_I <= 1e-4


def test_doubly_ruled_frame():
    frame = pde.ruled_frame(S.liouville_h, lambda u: 0.0 * u)
    s = S.integrate_surface(frame, S.IDENTITY_ICS, GridSpec(0.5, 0.5, 21, 21, 0.05, 0.05))
    assert max(S.asymptotic_defect(s)) <= 1e-6
    # straight up to RK4 error at this step
    assert S.line_straightness(s, "u") <= 1e-6 and S.line_straightness(s, "v") <= 1e-6


def sphere_grid():
    return GridSpec(0.1, -0.4, 9, 9, 0.1, 0.1)


def test_sphere_invariant():
    rep = S.geometry(sol.sphere(), sphere_grid())
    assert np.allclose(rep.K, 1.0, atol=1e-12)
    assert np.allclose(rep.d, 1.0, atol=1e-12)
    assert np.allclose(rep.I, 1.0, atol=1e-12)
    L, N = S.asymptotic_defect(rep)
    assert L > 0.1 and N > 0.1


def test_hyperbolic_invariant():
    rep = S.geometry(sol.hyperbolic_surface(1.0), GridSpec(-0.5, -0.5, 51, 51, 0.02, 0.02))
    assert rep.spread_I <= 1e-10
    assert rep.mean_I == pytest.approx(1 / 27)


def test_plane_through_origin():
    plane = ParametricSurface(lambda u, v: (u, v, 0.0 * u), name="plane")
    with pytest.raises(S.DegenerateSurfaceError):
        S.geometry(plane, GridSpec(0.1, 0.1, 3, 3, 0.1, 0.1))


def test_unimodular_maps_preserve_invariant():
    s = S.integrate_surface(FRAME_CONST, S.CUBE_ROOT_ICS, GridSpec(0.0, 0.0, 11, 11, 0.1, 0.1))
    I0 = S.geometry(s).I
    for Y in sym.catalog("Y18"):
        M = Y.exp(0.3)
        assert np.linalg.det(M) == pytest.approx(1.0)
        I1 = S.geometry(S.apply_linear(s, M)).I
        assert np.max(np.abs(I1 - I0)) <= 1e-10
    # a non-unimodular map rescales I
    I2 = S.geometry(S.apply_linear(s, 2.0 * np.eye(3))).I
    assert np.allclose(I2, I0 / 2.0**6)


def small_surface():
    return S.integrate_surface(FRAME_CONST, S.CUBE_ROOT_ICS, GridSpec(0.0, 0.0, 2, 2, 0.1, 0.1))


def test_obj_export(tmp_path):
    p = S.export_mesh(small_surface(), "obj", tmp_path / "m.obj")
    lines = p.read_text().splitlines()
    assert sum(x.startswith("v ") for x in lines) == 4
    faces = [x for x in lines if x.startswith("f ")]
    assert faces == ["f 1 3 4", "f 1 4 2"]


def test_csv_export_round_trip(tmp_path):
    s = S.integrate_surface(FRAME_CONST, S.CUBE_ROOT_ICS, GridSpec(0.0, 0.0, 4, 3, 0.1, 0.1))
    p = S.export_mesh(s, "csv", tmp_path / "m.csv")
    lines = p.read_text().splitlines()
    assert lines[0] == "u,v,x,y,z,K,d,I"
    assert len(lines) == 4 * 3 + 1
    data = np.loadtxt(p, delimiter=",", skiprows=1)
    assert np.array_equal(data[:, 2:5], s.r.reshape(-1, 3))


def test_export_errors(tmp_path):
    with pytest.raises(ValueError):
        S.export_mesh(small_surface(), "stl", tmp_path / "m.stl")
    with pytest.raises(S.SurfaceError):
        S.export_mesh(small_surface(), "obj", tmp_path / "missing" / "m.obj")


def test_unknown_preset():
    with pytest.raises(KeyError):
        S.surface_preset("torus")
