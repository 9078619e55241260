"""Seeded verification batteries behind ``titeica verify``.

Each battery returns a list of :class:`Check` records.  ``ref`` strings are
short descriptions of the claim being checked; the set of them is indexed in
docs/checks.md.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from . import jets as J
from . import pde, solutions as sol, surface as surf, symmetry as sym, variational as var

TOL_IDENTITY = 1e-12
TOL_SOLUTION = 1e-10
TOL_INTEGRATION = 1e-6
TOL_SPREAD = 1e-4


@dataclass
class Check:
    name: str
    paper_ref: str
    n_samples: int
    max_defect: float
    tolerance: float
    passed: bool

    def as_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d


def make_check(name, ref, defects, tol) -> Check:
    arr = np.abs(np.asarray(defects, dtype=float)).ravel()
    worst = float(np.max(arr)) if arr.size else 0.0
    ok = bool(np.all(np.isfinite(arr)) and worst <= tol)
    return Check(name, ref, int(arr.size), worst, tol, ok)


@dataclass
class Settings:
    seed: int = 0
    n_points: int = 50
    n_jets: int = 1000
    n_fields: int = 20
    eps: float = 0.5
    tol_identity: float = TOL_IDENTITY
    tol_solution: float = TOL_SOLUTION
    tol_integration: float = TOL_INTEGRATION
    tol_spread: float = TOL_SPREAD


# -- sampling helpers --------------------------------------------------------------

# in-domain boxes for the Liouville presets (U~ + V~ bounded away from 0)
LIOUVILLE_BOXES = {"identity": (0.5, 2.0), "exp": (-1.0, 1.0), "tanh": (0.2, 1.5)}
SINH_BOX = (0.25, 1.5)


def liouville_solutions() -> dict:
    return {k: sol.liouville_general(*make()) for k, make in sol.LIOUVILLE_PRESETS.items()}


def points(rng, n, box) -> np.ndarray:
    return rng.uniform(box[0], box[1], size=(n, 2))


def omega_jet(h: sol.SolutionH, u, v, order: int = 3):
    U, V = J.seed_u(u, v, order), J.seed_v(u, v, order)
    return J.log(h(U, V))


def random_curve(rng) -> sol.Curve:
    """A random polynomial, trigonometric or exponential f(t)."""
    kind = rng.integers(3)
    c = rng.uniform(-1.0, 1.0, 4)
    if kind == 0:
        return sol.Curve(lambda t: c[0] + t * (c[1] + t * (c[2] + t * c[3])), name="cubic")
    if kind == 1:
        return sol.Curve(lambda t: c[0] * J.sin((1.0 + abs(c[1])) * t + c[2]) + c[3], name="trig")
    return sol.Curve(lambda t: c[0] * J.exp(c[1] * t) + c[2], name="exp")


# -- batteries ---------------------------------------------------------------------


def liouville_checks(cfg: Settings) -> list[Check]:
    rng = np.random.default_rng(cfg.seed)
    out = []
    for name, h in liouville_solutions().items():
        pts = points(rng, 2 * cfg.n_points, LIOUVILLE_BOXES[name])
        res = [pde.residual_scalar(pde.LIOUVILLE_H, h.eval(u, v, 2)) for u, v in pts]
        out.append(make_check(f"liouville-residual-{name}", "Liouville general solution", res, cfg.tol_solution))
    sinh, rebuilt = sol.titeica_sinh(0.0), sol.sinh_as_liouville_plus_one(0.0)
    pts = points(rng, cfg.n_points, SINH_BOX)
    out.append(
        make_check(
            "sinh-equals-liouville-plus-one",
            "sinh solution as Liouville solution plus one",
            [sinh(u, v) - rebuilt(u, v) for u, v in pts],
            cfg.tol_solution,
        )
    )
    return out


def titeica_checks(cfg: Settings) -> list[Check]:
    rng = np.random.default_rng(cfg.seed + 1)
    out = []
    const = sol.titeica_constant()
    pts = points(rng, 2 * cfg.n_points, (-1.0, 1.0))
    out.append(
        make_check(
            "titeica-residual-const",
            "constant solution h = 1",
            [pde.residual_scalar(pde.TITEICA_H, const.eval(u, v, 2)) for u, v in pts],
            cfg.tol_solution,
        )
    )
    sinh = sol.titeica_sinh(0.0)
    pts = points(rng, 2 * cfg.n_points, SINH_BOX)
    out.append(
        make_check(
            "titeica-residual-sinh",
            "sinh solution of the Titeica equation",
            [pde.residual_scalar(pde.TITEICA_H, sinh.eval(u, v, 2)) for u, v in pts],
            cfg.tol_solution,
        )
    )
    diffs = []
    for _ in range(cfg.n_jets):
        w = var.random_jet(rng, 2)
        h = J.exp(w)
        for hk, wk in ((pde.LIOUVILLE_H, pde.LIOUVILLE_OMEGA), (pde.TITEICA_H, pde.TITEICA_OMEGA)):
            diffs.append(pde.residual_scalar(hk, h) - pde.residual_scalar(wk, w))
    out.append(make_check("h-omega-form-agreement", "h-form and omega-form equivalence", diffs, cfg.tol_identity))
    out.extend(mu_ode_checks(cfg))
    return out


def mu_ode_checks(cfg: Settings, t0: float = 1.0, length: float = 2.0, step: float = 1e-3) -> list[Check]:
    mu = sol.sinh_profile(0.0)
    m0 = mu.eval(t0, 1)
    curve = pde.integrate_mu_ode(1.0, m0[0], m0[1], t0, t0 + length, step)
    exact = np.array([mu(t) for t in curve.t])
    fi = curve.first_integral
    return [
        make_check("mu-ode-vs-closed-form", "numerical profile ODE against the sinh profile", curve.mu - exact, 1e-8),
        make_check("mu-ode-first-integral-drift", "conserved combination of the profile ODE", fi - fi[0], 1e-8),
    ]


def _liouville_fields(rng, n):
    return [sym.liouville_field(random_curve(rng), random_curve(rng), f"W[{i}]") for i in range(n)]


def symmetry_checks(cfg: Settings) -> list[Check]:
    rng = np.random.default_rng(cfg.seed + 2)
    out = []
    fields = _liouville_fields(rng, cfg.n_fields)
    for name, h in liouville_solutions().items():
        defects = []
        for X in fields:
            for u, v in points(rng, cfg.n_points, LIOUVILLE_BOXES[name]):
                defects.append(sym.invariance_defect(X, pde.LIOUVILLE_OMEGA, omega_jet(h, u, v)))
        out.append(make_check(f"liouville_field-invariance-{name}", "Liouville symmetry algebra f, g", defects, cfg.tol_solution))
    tit = {"const": (sol.titeica_constant(), (-1.0, 1.0)), "sinh": (sol.titeica_sinh(0.0), SINH_BOX)}
    for name, (h, box) in tit.items():
        defects = []
        for u, v in points(rng, cfg.n_points, box):
            w = omega_jet(h, u, v)
            defects.extend(sym.invariance_defect(X, pde.TITEICA_OMEGA, w) for X in sym.catalog("U28"))
        out.append(make_check(f"u28-invariance-{name}", "Titeica symmetry algebra U_1, U_2, U_3", defects, cfg.tol_solution))
    for action in ("scale", "shift_u", "shift_v"):
        defects = []
        for name, (h, box) in tit.items():
            f = h.omega()
            for eps in (-1.0, -0.1, 0.1, 1.0):
                g = sym.transform_solution(action, eps, f)
                lo, hi = box
                inner = (lo + 1.0, hi + 1.0) if action != "scale" else box
                for u, v in points(rng, cfg.n_points // 5 or 1, inner):
                    jet = g(J.seed_u(u, v, 2), J.seed_v(u, v, 2))
                    defects.append(pde.residual_scalar(pde.TITEICA_OMEGA, jet))
        out.append(make_check(f"transformed-solution-{action}", "transformed solutions remain solutions", defects, cfg.tol_solution))
    det = []
    for X in fields[:5]:
        for u, v, w in rng.uniform(-1.0, 1.0, (10, 3)):
            det.extend(sym.defining_residual_26(X, J.exp, u, v, w))
    out.append(make_check("liouville_field-determining-system", "determining system of omega_uv = H(omega)", det, cfg.tol_identity))
    tit_H = lambda w: J.exp(w) - J.exp(-2.0 * w)  # noqa: E731
    det = [
        r
        for X in sym.catalog("U28")
        for u, v, w in rng.uniform(-1.0, 1.0, (10, 3))
        for r in sym.defining_residual_26(X, tit_H, u, v, w)
    ]
    out.append(make_check("u28-determining-system", "determining system of omega_uv = H(omega)", det, cfg.tol_identity))
    ys = sym.catalog("Y18")
    xyz = [sym.invariant_xyz_check(A, point=p) for A in ys[:2] for p in rng.uniform(-2.0, 2.0, (cfg.n_points, 3))]
    out.append(make_check("xyz-invariance", "group-invariant solutions xyz = C", xyz, cfg.tol_identity))
    out.append(make_check("unimodular-trace", "unimodular subgroup generators", [A.trace for A in ys], 0.0))
    inv = [sym.scaling_invariants_check(var.random_jet(rng, 2)) for _ in range(cfg.n_points)]
    out.append(make_check("scaling-invariants", "invariants of the Titeica symmetry group", inv, cfg.tol_identity))
    out.append(bracket_check(rng, cfg))
    return out


def bracket_check(rng, cfg: Settings) -> Check:
    B = sym.catalog("U28")
    defects = []
    for p in rng.uniform(-1.5, 1.5, (cfg.n_points, 3)):
        for X in B:
            for Y in B:
                defects.extend(sym.lie_bracket(X, Y)(*p) + sym.lie_bracket(Y, X)(*p))
        X, Y, Z = B
        jac = (
            sym.lie_bracket(X, sym.lie_bracket(Y, Z))(*p)
            + sym.lie_bracket(Y, sym.lie_bracket(Z, X))(*p)
            + sym.lie_bracket(Z, sym.lie_bracket(X, Y))(*p)
        )
        defects.extend(jac)
    return make_check("bracket-antisymmetry-jacobi", "Lie algebra of U_1, U_2, U_3", defects, cfg.tol_identity)


def adjoint_checks(cfg: Settings) -> list[Check]:
    B = sym.catalog("U28")
    ref = sym.adjoint_closed_form(cfg.eps)
    out = []
    for i in range(3):
        for j in range(3):
            got = sym.adjoint(i + 1, cfg.eps, j + 1, B)
            out.append(make_check(f"Ad(U_{i + 1})U_{j + 1}", "adjoint representation table", got - ref[i, j], cfg.tol_identity))
    return out


def variational_checks(cfg: Settings) -> list[Check]:
    rng = np.random.default_rng(cfg.seed + 3)
    jets = [var.random_jet(rng, 3) for _ in range(cfg.n_jets)]
    out = []
    for L, kind in ((var.L1, pde.LIOUVILLE_OMEGA), (var.L2, pde.TITEICA_OMEGA)):
        d = [var.euler_lagrange(L, w) - kind.delta(*pde.jet_coordinates(w)) for w in jets]
        out.append(make_check(f"euler-lagrange-{L.name}", "Euler-Lagrange form of both equations", d, cfg.tol_identity))
    for kind in (pde.LIOUVILLE_OMEGA, pde.TITEICA_OMEGA):
        d = [var.helmholtz_residual(kind, w) for w in jets[: cfg.n_points]]
        out.append(make_check(f"helmholtz-{kind.name}", "Helmholtz conditions", d, cfg.tol_identity))
    for fields, L in ((sym.catalog("W40"), var.L1), (sym.catalog("U41"), var.L2)):
        for X in fields:
            d = [var.variational_defect(X, L, w) for w in jets[: cfg.n_points * 2]]
            out.append(make_check(f"variational-{X.name}-{L.name}", "variational symmetry criterion", d, cfg.tol_identity))
    d = []
    for w in jets[: cfg.n_points * 2]:
        h = J.exp(w)
        for variant in (1, 2):
            a, b = var.integrating_factor_check(h, variant)
            d.append(a - b)
    out.append(make_check("integrating-factor", "variational integrating factor 1/h^3", d, cfg.tol_identity))
    return out


def conservation_checks(cfg: Settings) -> list[Check]:
    rng = np.random.default_rng(cfg.seed + 4)
    jets = [var.random_jet(rng, 2) for _ in range(cfg.n_jets)]
    out = []
    for key, law in {**var.LIOUVILLE_LAWS, **var.TITEICA_LAWS}.items():
        X, L, kind = var.LAW_SOURCES[key]
        gen = var.noether_law(X, L, seed=cfg.seed)
        d = []
        for w in jets:
            d.append(var.conservation_divergence_defect(law, kind, w))
            args = var._first_order_args(w)
            d.extend((gen.P1(*args) - law.P1(*args), gen.P2(*args) - law.P2(*args), gen.Q(*args) - law.Q(*args)))
        eq = "Liouville" if key.startswith("-W") else "Titeica"
        out.append(make_check(f"conservation{key}", f"{eq} conservation law for {key}", d, cfg.tol_identity))
    return out


def integrability_checks(cfg: Settings) -> list[Check]:
    rng = np.random.default_rng(cfg.seed + 5)
    out = []
    frames = {
        "nonruled-const": (pde.nonruled_frame(surf.const_h), (-1.0, 1.0)),
        "nonruled-sinh": (pde.nonruled_frame(sol.titeica_sinh(0.0)), SINH_BOX),
        "ruled-liouville": (pde.ruled_frame(surf.liouville_h, lambda u: 1.0 + 0.0 * u), (0.5, 1.5)),
        "doubly-ruled": (pde.ruled_frame(surf.liouville_h, lambda u: 0.0 * u), (0.5, 1.5)),
    }
    for name, (frame, box) in frames.items():
        p = points(rng, cfg.n_points, box)
        res = pde.residual_integrability(frame, p[:, 0], p[:, 1])
        out.append(make_check(f"integrability-{name}", "integrability conditions of the frame", res, cfg.tol_solution))
    mu = sol.sinh_profile(0.0)
    frame = frames["nonruled-sinh"][0]
    theta = sol.revolution_theta(0.5 * math.sqrt(3.0), mu, *rng.uniform(-1.0, 1.0, 3), window=(3.0, 4.0))
    res = []
    for s, t in rng.uniform(0.0, 1.0, (cfg.n_points // 5 or 1, 2)):
        alpha, beta = 3.05 + 0.9 * s, t - 0.5
        u, v = 0.5 * (alpha + beta), 0.5 * (alpha - beta)
        res.append(pde.residual_linear_system(frame, theta(J.seed_u(u, v, 2), J.seed_v(u, v, 2))))
    out.append(make_check("revolution-solution", "revolution solution of the linear system", res, cfg.tol_solution))
    out.extend(surface_checks(cfg))
    return out


def surface_checks(cfg: Settings) -> list[Check]:
    frame, ics, grid = surf.surface_preset("nonruled-const")
    S = surf.integrate_surface(frame, ics, grid)
    rep = surf.geometry(S)
    out = [
        make_check("surface-I-spread-const", "centroaffine invariant K/d^4 is constant", rep.spread_I, cfg.tol_spread),
        make_check("surface-asymptotic", "asymptotic-line parametrization", surf.asymptotic_defect(rep), cfg.tol_integration),
    ]
    U, V = grid.mesh()
    out.append(
        make_check(
            "surface-closed-form",
            "integrated surface against closed form",
            (S.r - surf.cube_root_surface(U, V)) / np.max(np.abs(S.r)),
            1e-8,
        )
    )
    hyp, _, g = surf.surface_preset("hyperbolic")
    out.append(make_check("surface-I-spread-hyperbolic", "centroaffine invariant K/d^4 is constant", surf.geometry(hyp, g).spread_I, cfg.tol_solution))
    d = []
    for A in sym.catalog("Y18"):
        d.append(surf.geometry(surf.apply_linear(S, A.exp(0.7))).I - rep.I)
    out.append(make_check("unimodular-invariance", "invariance under unimodular maps", d, cfg.tol_solution))
    return out


SUITES: dict[str, Callable[[Settings], list[Check]]] = {
    "liouville": liouville_checks,
    "titeica": titeica_checks,
    "symmetry": symmetry_checks,
    "adjoint": adjoint_checks,
    "variational": variational_checks,
    "conservation": conservation_checks,
    "integrability": integrability_checks,
}


def run_suite(name: str, cfg: Settings) -> list[Check]:
    if name == "all":
        return [c for fn in SUITES.values() for c in fn(cfg)]
    return SUITES[name](cfg)
