"""Point symmetries of omega_uv = H(omega) and of the frame systems.

Vector fields carry jet-capable coefficient functions of (u, v, omega).
Prolongations are evaluated numerically at a jet: the characteristic
Q = phi - zeta w_u - eta w_v is composed with the jet of the solution, so
total derivatives of Q are ordinary partials of the composite jet.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import expm

from . import jets as J
from .jets import Jet2, JetError
from .pde import (
    CoefficientFrame,
    PdeKind,
    coordinate_jets,
    jet_coordinates,
    residual_scalar,
)
from .solutions import Curve


class NotOnSolutionError(ValueError):
    """A jet handed to an on-solution check does not satisfy the equation."""


class SeriesDivergenceError(ArithmeticError):
    pass


def _const(c: float) -> Callable:
    return lambda u, v, w: c + 0.0 * w


@dataclass(frozen=True)
class VectorField3:
    """zeta d/du + eta d/dv + phi d/domega."""

    name: str
    zeta: Callable
    eta: Callable
    phi: Callable

    def coefficients(self, u, v, w) -> tuple:
        return self.zeta(u, v, w), self.eta(u, v, w), self.phi(u, v, w)

    def __call__(self, u, v, w) -> np.ndarray:
        return np.array([float(c) for c in self.coefficients(u, v, w)])

    def scaled(self, c: float, name: str | None = None) -> "VectorField3":
        return VectorField3(
            name or f"{c}*{self.name}",
            lambda u, v, w: c * self.zeta(u, v, w),
            lambda u, v, w: c * self.eta(u, v, w),
            lambda u, v, w: c * self.phi(u, v, w),
        )

    def __neg__(self) -> "VectorField3":
        return self.scaled(-1.0, f"-{self.name}")

    def __add__(self, other: "VectorField3") -> "VectorField3":
        return VectorField3(
            f"{self.name}+{other.name}",
            lambda u, v, w: self.zeta(u, v, w) + other.zeta(u, v, w),
            lambda u, v, w: self.eta(u, v, w) + other.eta(u, v, w),
            lambda u, v, w: self.phi(u, v, w) + other.phi(u, v, w),
        )


@dataclass(frozen=True)
class ProlongedValue:
    au: float
    av: float
    auu: float
    auv: float
    avv: float


# -- characteristic and prolongation -----------------------------------------


def characteristic(X: VectorField3, w: Jet2):
    """Q = phi - zeta w_u - eta w_v at the base point of ``w``."""
    if w.order < 1:
        raise JetError("characteristic needs a jet of order >= 1")
    u0, v0 = w.base_point
    zeta, eta, phi = X.coefficients(u0, v0, w.value)
    return phi - zeta * w[(1, 0)] - eta * w[(0, 1)]


def characteristic_jet(X: VectorField3, w: Jet2) -> Jet2:
    """Jet (one order below ``w``) of Q along the function whose jet is w."""
    U, V = coordinate_jets(w)
    zeta, eta, phi = (J.lift(c, w) for c in X.coefficients(U, V, w))
    return phi - zeta * w.d(0) - eta * w.d(1)


def prolong1(X: VectorField3, w: Jet2) -> tuple:
    """First prolongation coefficients (alpha^u, alpha^v); needs order >= 2."""
    if w.order < 2:
        raise JetError("first prolongation needs a jet of order >= 2")
    Q = characteristic_jet(X, w)
    u0, v0 = w.base_point
    zeta, eta, _ = X.coefficients(u0, v0, w.value)
    c = w.coeffs
    return (
        Q[(1, 0)] + zeta * c[(2, 0)] + eta * c[(1, 1)],
        Q[(0, 1)] + zeta * c[(1, 1)] + eta * c[(0, 2)],
    )


def prolong2(X: VectorField3, w: Jet2) -> ProlongedValue:
    """Second prolongation coefficients at an order-3 jet."""
    if w.order != 3:
        raise JetError(f"second prolongation needs an order-3 jet, got {w.order}")
    Q = characteristic_jet(X, w)
    u0, v0 = w.base_point
    zeta, eta, _ = X.coefficients(u0, v0, w.value)
    c = w.coeffs
    return ProlongedValue(
        au=Q[(1, 0)] + zeta * c[(2, 0)] + eta * c[(1, 1)],
        av=Q[(0, 1)] + zeta * c[(1, 1)] + eta * c[(0, 2)],
        auu=Q[(2, 0)] + zeta * c[(3, 0)] + eta * c[(2, 1)],
        auv=Q[(1, 1)] + zeta * c[(2, 1)] + eta * c[(1, 2)],
        avv=Q[(0, 2)] + zeta * c[(1, 2)] + eta * c[(0, 3)],
    )


def apply_prolonged(X: VectorField3, F: Callable, w: Jet2) -> float:
    """pr^(2) X applied to a function F(u, v, w, wu, wv, wuu, wuv, wvv)."""
    w3 = w if w.order == 3 else w.pad(3)
    p = prolong2(X, w3)
    coords = jet_coordinates(w3)
    zeta, eta, phi = X.coefficients(*coords[:3])
    weights = (zeta, eta, phi, p.au, p.av, p.auu, p.auv, p.avv)
    total = 0.0
    for i, wt in enumerate(weights):
        if wt == 0:
            continue
        total = total + wt * J.partial(F, coords, i)
    return total


def invariance_defect(X: VectorField3, kind: PdeKind, w: Jet2, on_solution_tol: float = 1e-8) -> float:
    """pr^(2) X [Delta] at a jet taken on a solution of ``kind``."""
    r = residual_scalar(kind, w)
    if abs(r) > on_solution_tol:
        raise NotOnSolutionError(f"jet is off the solution manifold (residual {r:.3e})")
    return apply_prolonged(X, kind.delta, w)


def scaling_invariants_check(w: Jet2, X: VectorField3 | None = None) -> np.ndarray:
    """pr^(2) X applied to omega, w_u w_v, w_uv and w_uu w_vv (default X = U_1)."""
    if w.order < 2:
        raise JetError("need a jet of order >= 2")
    X = X or U1
    invariants = (
        lambda u, v, w, wu, wv, wuu, wuv, wvv: w,
        lambda u, v, w, wu, wv, wuu, wuv, wvv: wu * wv,
        lambda u, v, w, wu, wv, wuu, wuv, wvv: wuv,
        lambda u, v, w, wu, wv, wuu, wuv, wvv: wuu * wvv,
    )
    return np.array([float(apply_prolonged(X, F, w)) for F in invariants])


# -- finite actions --------------------------------------------------------------


def transform_solution(action: str, eps: float, f: Callable) -> Callable:
    """Compose a solution with one of the one-parameter groups of U_1, U_2, U_3.

    ``scale``: f(e^eps u, e^-eps v); ``shift_u``: f(u - eps, v);
    ``shift_v``: f(u, v - eps).
    """
    if action == "scale":
        a, b = math.exp(eps), math.exp(-eps)
        return lambda u, v: f(a * u, b * v)
    if action == "shift_u":
        return lambda u, v: f(u - eps, v)
    if action == "shift_v":
        return lambda u, v: f(u, v - eps)
    raise ValueError(f"unknown action {action!r}")


# -- Lie algebra -----------------------------------------------------------------


def _apply_field(X: VectorField3, F: Callable, u, v, w):
    """X(F) = zeta F_u + eta F_v + phi F_w for F(u, v, w)."""
    zeta, eta, phi = X.coefficients(u, v, w)
    args = (u, v, w)
    return zeta * J.partial(F, args, 0) + eta * J.partial(F, args, 1) + phi * J.partial(F, args, 2)


def lie_bracket(X: VectorField3, Y: VectorField3) -> VectorField3:
    """[X, Y]: coefficients X(Y^k) - Y(X^k), jet-capable through nesting."""

    def coeff(k):
        fy = (Y.zeta, Y.eta, Y.phi)[k]
        fx = (X.zeta, X.eta, X.phi)[k]
        return lambda u, v, w: _apply_field(X, fy, u, v, w) - _apply_field(Y, fx, u, v, w)

    return VectorField3(f"[{X.name},{Y.name}]", coeff(0), coeff(1), coeff(2))


def _sample_points(n: int, seed: int = 12345) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.uniform(-1.5, 1.5, size=(n, 3))


def _stack(X: VectorField3, pts: np.ndarray) -> np.ndarray:
    return np.concatenate([X(*p) for p in pts])


def decompose(X: VectorField3, basis: Sequence[VectorField3], n_points: int = 12, tol: float = 1e-10) -> np.ndarray:
    """Coefficients of X in ``basis`` by least squares over sample points."""
    pts = _sample_points(n_points)
    B = np.column_stack([_stack(b, pts) for b in basis])
    x = _stack(X, pts)
    coef, *_ = np.linalg.lstsq(B, x, rcond=None)
    err = np.max(np.abs(B @ coef - x)) if x.size else 0.0
    if err > tol * max(1.0, np.max(np.abs(x))):
        raise ValueError(f"{X.name} is not in the span of the basis (misfit {err:.2e})")
    coef[np.abs(coef) < 1e-14] = 0.0
    return coef


def structure_constants(basis: Sequence[VectorField3]) -> np.ndarray:
    """C[i] is the matrix of ad(basis[i]): column j holds [e_i, e_j] in the basis."""
    n = len(basis)
    C = np.zeros((n, n, n))
    for i in range(n):
        for j in range(n):
            C[i][:, j] = decompose(lie_bracket(basis[i], basis[j]), basis)
    return C


def adjoint(i: int, epsilon: float, j: int, basis: Sequence[VectorField3], max_terms: int = 60) -> np.ndarray:
    """Ad(exp(eps e_i)) e_j in the basis, generators numbered from 1.

    Sums  sum_k (-eps)^k / k! ad(e_i)^k e_j  until terms drop below 1e-15
    or three consecutive terms vanish.
    """
    C = structure_constants(basis)
    M = C[i - 1]
    term = np.zeros(len(basis))
    term[j - 1] = 1.0
    total = term.copy()
    zeros = 0
    for k in range(1, max_terms + 1):
        term = (-epsilon / k) * (M @ term)
        total = total + term
        size = np.max(np.abs(term))
        zeros = zeros + 1 if size == 0 else 0
        if zeros >= 3 or size < 1e-15 * max(1.0, np.max(np.abs(total))):
            return total
    raise SeriesDivergenceError(f"adjoint series did not settle within {max_terms} terms")


def adjoint_table(basis: Sequence[VectorField3], epsilon: float) -> np.ndarray:
    """T[i, j] = Ad(exp(eps e_i)) e_j as a coefficient vector."""
    n = len(basis)
    return np.array([[adjoint(i + 1, epsilon, j + 1, basis) for j in range(n)] for i in range(n)])


def adjoint_closed_form(epsilon: float) -> np.ndarray:
    """Reference adjoint table of U_1, U_2, U_3 (rows: exp generator)."""
    e = epsilon
    E = np.eye(3)
    return np.array(
        [
            [E[0], math.exp(e) * E[1], math.exp(-e) * E[2]],
            [E[0] - e * E[1], E[1], E[2]],
            [E[0] + e * E[2], E[1], E[2]],
        ]
    )


# -- determining equations -------------------------------------------------------


def defining_residual_20(zeta: Callable, eta: Callable, frame: CoefficientFrame, u: float, v: float) -> np.ndarray:
    """Residuals of the determining system for Z = zeta(u) d/du + eta(v) d/dv."""
    U, V = J.seed_u(u, v, 2), J.seed_v(u, v, 2)
    z, e = J.lift(zeta(U), U), J.lift(eta(V), U)
    a, b, h, a2, b2 = (J.lift(x, U) for x in frame.entries(U, V))
    zv, ev = z.value, e.value
    zu, zuu = z[(1, 0)], z[(2, 0)]
    ev_, evv = e[(0, 1)], e[(0, 2)]

    def along(f):
        return zv * f[(1, 0)] + ev * f[(0, 1)]

    return np.array(
        [
            along(a) + a.value * zu + zuu,
            along(b) - b.value * ev_ + 2.0 * b.value * zu,
            along(h) + h.value * (zu + ev_),
            along(a2) - a2.value * zu + 2.0 * a2.value * ev_,
            along(b2) + b2.value * ev_ + evv,
        ],
        dtype=float,
    )


def ruled_cubic_residual(zeta: Callable, phi: Callable, k: float, u: float) -> float:
    """zeta^3 - k / phi for the ruled case."""
    return float(zeta(u)) ** 3 - k / float(phi(u))


def defining_residual_26(X: VectorField3, Hfn: Callable, u: float, v: float, w: float) -> np.ndarray:
    """Residuals of the determining system for symmetries of omega_uv = H(omega).

    The last entry is phi_uv + (phi_w - zeta_u - eta_v) H - H' phi, which is
    what the uv-prolongation coefficient reduces to under the first seven.
    """
    zeta, eta, phi = X.zeta, X.eta, X.phi

    def pair(f, i, k, base):
        """Order-2 jet of f in the variables (i, k) of (u, v, w)."""
        x, y = J.seeds(base[i], base[k], 2)
        args = list(base)
        args[i], args[k] = x, y
        return J.lift(f(*args), x)

    base = (u, v, w)
    z_uv, e_uv, p_uv = pair(zeta, 0, 1, base), pair(eta, 0, 1, base), pair(phi, 0, 1, base)
    z_uw, e_vw = pair(zeta, 0, 2, base), pair(eta, 1, 2, base)
    p_uw, p_vw = pair(phi, 0, 2, base), pair(phi, 1, 2, base)
    H = float(Hfn(w))
    dH = float(J.partial(Hfn, (w,), 0))
    p = p_uv.value
    p_w = p_uw[(0, 1)]
    return np.array(
        [
            z_uv[(0, 1)],
            z_uw[(0, 1)],
            e_uv[(1, 0)],
            e_vw[(0, 1)],
            p_uw[(0, 2)],
            p_uw[(1, 1)],
            p_vw[(1, 1)],
            p_uv[(1, 1)] + (p_w - z_uv[(1, 0)] - e_uv[(0, 1)]) * H - dH * p,
        ],
        dtype=float,
    )


# -- catalogs --------------------------------------------------------------------


@dataclass(frozen=True)
class LinearField:
    """sum_ab A[a, b] x^b d/dx^a on (x, y, z)-space."""

    name: str
    A: np.ndarray

    @property
    def trace(self) -> float:
        return float(np.trace(self.A))

    def apply(self, F: Callable, point) -> float:
        """Directional derivative of F(x, y, z) along the field at ``point``."""
        p = tuple(float(c) for c in point)
        vel = self.A @ np.array(p)
        return float(sum(vel[a] * J.partial(F, p, a) for a in range(3)))

    def exp(self, t: float = 1.0) -> np.ndarray:
        return expm(t * self.A)


def _unit(a: int, b: int, c: float = 1.0) -> np.ndarray:
    m = np.zeros((3, 3))
    m[a, b] = c
    return m


def _sl3_basis() -> list[LinearField]:
    return [
        LinearField("Y_1", np.diag([1.0, 0.0, -1.0])),
        LinearField("Y_2", np.diag([0.0, 1.0, -1.0])),
        LinearField("Y_3", _unit(0, 1)),
        LinearField("Y_4", _unit(0, 2)),
        LinearField("Y_5", _unit(1, 0)),
        LinearField("Y_6", _unit(1, 2)),
        LinearField("Y_7", _unit(2, 0)),
        LinearField("Y_8", _unit(2, 1)),
    ]


U1 = VectorField3("U_1", lambda u, v, w: u + 0.0 * w, lambda u, v, w: -v + 0.0 * w, _const(0.0))
U2 = VectorField3("U_2", _const(1.0), _const(0.0), _const(0.0))
U3 = VectorField3("U_3", _const(0.0), _const(1.0), _const(0.0))
W1 = VectorField3("W_1", lambda u, v, w: u + 0.0 * w, _const(0.0), _const(-1.0))
W2 = VectorField3("W_2", _const(0.0), lambda u, v, w: v + 0.0 * w, _const(-1.0))
W3 = VectorField3("W_3", _const(1.0), _const(0.0), _const(0.0))
W4 = VectorField3("W_4", _const(0.0), _const(1.0), _const(0.0))


def liouville_field(f: Curve, g: Curve, name: str = "W") -> VectorField3:
    """f(u) d/du + g(v) d/dv - (f'(u) + g'(v)) d/domega."""
    df, dg = f.derivative(), g.derivative()
    return VectorField3(
        name,
        lambda u, v, w: f(u) + 0.0 * w,
        lambda u, v, w: g(v) + 0.0 * w,
        lambda u, v, w: -(df(u) + dg(v)) + 0.0 * w,
    )


def catalog(name: str, **params) -> list:
    """Named generator bases.

    ``Y18``: the eight unimodular linear fields on (x, y, z).
    ``Ybar23``: theta d/dtheta.  ``Zbar24``: zeta(u) d/du + eta(v) d/dv
    (params ``zeta``, ``eta``).  ``W27``: the Liouville family (params ``f``,
    ``g``).  ``U28``/``U41``: U_1, U_2, U_3.  ``W40``: W_1 .. W_4.
    """
    if name == "Y18":
        return _sl3_basis()
    if name == "Ybar23":
        return [VectorField3("Ybar_1", _const(0.0), _const(0.0), lambda u, v, w: w)]
    if name == "Zbar24":
        zeta, eta = params["zeta"], params["eta"]
        return [VectorField3("Zbar", lambda u, v, w: zeta(u) + 0.0 * w, lambda u, v, w: eta(v) + 0.0 * w, _const(0.0))]
    if name == "W27":
        return [liouville_field(params["f"], params["g"])]
    if name in ("U28", "U41"):
        return [U1, U2, U3]
    if name == "W40":
        return [W1, W2, W3, W4]
    raise KeyError(f"unknown catalog {name!r}")


def invariant_xyz_check(A: LinearField, F: Callable | None = None, point=(1.0, 2.0, 3.0)) -> float:
    """A(F) at ``point``; F defaults to xyz."""
    F = F or (lambda x, y, z: x * y * z)
    return A.apply(F, point)
