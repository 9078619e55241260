"""Lagrangians, Euler-Lagrange and Helmholtz operators, Noether currents.

Jet-space functions take ``(u, v, w, wu, wv)`` (first order) or the eight
second-order coordinates.  Total derivatives are read off jets of these
functions along the composite jets built by :func:`titeica.pde.composite_jets`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import jets as J
from .jets import Jet2, JetError
from .pde import (
    LIOUVILLE_OMEGA,
    TITEICA_OMEGA,
    PdeKind,
    composite_jets,
    coordinate_jets,
    jet_coordinates,
)
from .symmetry import VectorField3, W1, W2, W3, W4, U1, U2, U3, prolong1


class NotVariationalError(ValueError):
    """The field failed the variational-symmetry criterion on the battery."""


@dataclass(frozen=True)
class Lagrangian:
    """First-order Lagrangian L(u, v, w, wu, wv) with closed-form partials."""

    name: str
    fn: Callable
    dw: Callable
    dwu: Callable
    dwv: Callable

    def __call__(self, u, v, w, wu, wv):
        return self.fn(u, v, w, wu, wv)


def _first_order_args(w: Jet2) -> tuple:
    u0, v0 = w.base_point
    c = w.coeffs
    return (u0, v0, c[(0, 0)], c[(1, 0)], c[(0, 1)])


L1 = Lagrangian(
    "L1",
    lambda u, v, w, wu, wv: -0.5 * wu * wv - J.exp(w),
    lambda u, v, w, wu, wv: -J.exp(w),
    lambda u, v, w, wu, wv: -0.5 * wv,
    lambda u, v, w, wu, wv: -0.5 * wu,
)

L2 = Lagrangian(
    "L2",
    lambda u, v, w, wu, wv: -0.5 * wu * wv - J.exp(w) - 0.5 * J.exp(-2.0 * w),
    lambda u, v, w, wu, wv: -J.exp(w) + J.exp(-2.0 * w),
    lambda u, v, w, wu, wv: -0.5 * wv,
    lambda u, v, w, wu, wv: -0.5 * wu,
)


def custom_lagrangian(name, fn, dw, dwu, dwv, n_check: int = 20, seed: int = 0, tol: float = 1e-6) -> Lagrangian:
    """Wrap user partials after checking them against finite differences."""
    L = Lagrangian(name, fn, dw, dwu, dwv)
    rng = np.random.default_rng(seed)
    for _ in range(n_check):
        args = list(rng.uniform(-1.0, 1.0, 5))
        for idx, part in ((2, dw), (3, dwu), (4, dwv)):

            def line(s, _t, idx=idx, args=args):
                a = list(args)
                a[idx] = s
                return fn(*a)

            fd = J.fd_oracle(line, args[idx], 0.0, 1)[(1, 0)]
            given = float(part(*args))
            if abs(fd - given) > tol * max(1.0, abs(fd)):
                raise ValueError(f"{name}: partial {idx} disagrees with finite differences ({given} vs {fd})")
    return L


def h_lagrangian(variant: int = 1) -> Lagrangian:
    """L1 or L2 rewritten for h = e^w: -h_u h_v / (2 h^2) - h [- 1/(2 h^2)]."""
    extra = variant == 2

    def fn(u, v, h, hu, hv):
        out = -0.5 * hu * hv / (h * h) - h
        return out - 0.5 / (h * h) if extra else out

    def dh(u, v, h, hu, hv):
        out = hu * hv / (h * h * h) - 1.0
        return out + 1.0 / (h * h * h) if extra else out

    return Lagrangian(
        f"L{variant}h",
        fn,
        dh,
        lambda u, v, h, hu, hv: -0.5 * hv / (h * h),
        lambda u, v, h, hu, hv: -0.5 * hu / (h * h),
    )


# -- operators -------------------------------------------------------------------


def _total(F: Callable, w: Jet2, axis: int, nargs: int = 5):
    jet = F(*composite_jets(w, nargs))
    if not isinstance(jet, Jet2):
        return 0.0
    return jet[(1, 0) if axis == 0 else (0, 1)]


def euler_lagrange(L: Lagrangian, w: Jet2) -> float:
    """dL/dw - D_u(dL/dw_u) - D_v(dL/dw_v) at the base point of ``w``."""
    if w.order < 2:
        raise JetError("Euler-Lagrange needs a jet of order >= 2")
    return L.dw(*_first_order_args(w)) - _total(L.dwu, w, 0) - _total(L.dwv, w, 1)


def helmholtz_residual(delta: Callable | PdeKind, w: Jet2) -> np.ndarray:
    """Left minus right sides of the two Helmholtz conditions at an order-3 jet.

    ``delta`` is a PdeKind in omega form or any function of the eight
    second-order coordinates.
    """
    if w.order < 3:
        raise JetError("Helmholtz residuals need a jet of order 3")
    D = delta.delta if isinstance(delta, PdeKind) else delta

    def dpart(i):
        return lambda *args: J.partial(D, args, i)

    coords = jet_coordinates(w)
    d_wu = float(J.partial(D, coords, 3))
    d_wv = float(J.partial(D, coords, 4))
    half_uv = lambda *args: 0.5 * J.partial(D, args, 6)  # noqa: E731
    r1 = d_wu - _total(dpart(5), w, 0, 8) - _total(half_uv, w, 1, 8)
    r2 = d_wv - _total(half_uv, w, 0, 8) - _total(dpart(7), w, 1, 8)
    return np.array([r1, r2], dtype=float)


def divergence_xi(X: VectorField3, w: Jet2):
    """D_u zeta + D_v eta along w (chains through w when zeta, eta depend on it)."""
    U, V = coordinate_jets(w)
    wt = w.truncate(1)
    U, V = U.truncate(1), V.truncate(1)
    z = J.lift(X.zeta(U, V, wt), wt)
    e = J.lift(X.eta(U, V, wt), wt)
    return z[(1, 0)] + e[(0, 1)]


def variational_defect(X: VectorField3, L: Lagrangian, w: Jet2) -> float:
    """pr^(1) X (L) + L Div xi at the jet."""
    if w.order < 2:
        raise JetError("variational criterion needs a jet of order >= 2")
    args = _first_order_args(w)
    zeta, eta, phi = X.coefficients(*args[:3])
    au, av = prolong1(X, w)
    explicit_u = J.partial(L.fn, args, 0)
    explicit_v = J.partial(L.fn, args, 1)
    pr1 = zeta * explicit_u + eta * explicit_v + phi * L.dw(*args) + au * L.dwu(*args) + av * L.dwv(*args)
    return float(pr1 + L(*args) * divergence_xi(X, w))


def random_jet(rng: np.random.Generator, order: int = 3, scale: float = 1.0, point_scale: float = 1.0) -> Jet2:
    """Jet with base point and all derivatives uniform in [-scale, scale]."""
    u0, v0 = rng.uniform(-point_scale, point_scale, 2)
    coeffs = {mi: float(rng.uniform(-scale, scale)) for mi in J.multi_indices(order)}
    return Jet2((float(u0), float(v0)), order, coeffs)


# -- conservation laws -----------------------------------------------------------


@dataclass(frozen=True)
class ConservationLaw:
    """Current (P1, P2) and characteristic Q as functions of (u, v, w, wu, wv)."""

    name: str
    P1: Callable
    P2: Callable
    Q: Callable

    def perturbed(self, c: float) -> "ConservationLaw":
        """P1 + c w_u; fails the divergence identity for c != 0."""
        return ConservationLaw(
            f"{self.name}+{c}wu", lambda u, v, w, wu, wv: self.P1(u, v, w, wu, wv) + c * wu, self.P2, self.Q
        )


def characteristic_fn(X: VectorField3) -> Callable:
    def Q(u, v, w, wu, wv):
        zeta, eta, phi = X.coefficients(u, v, w)
        return phi - zeta * wu - eta * wv

    return Q


def conservation_divergence_defect(law: ConservationLaw, kind: PdeKind, w: Jet2) -> float:
    """D_u P1 + D_v P2 - Q Delta; vanishes identically for a law in characteristic form."""
    if w.order < 2:
        raise JetError("divergence needs a jet of order >= 2")
    div = _total(law.P1, w, 0) + _total(law.P2, w, 1)
    q = law.Q(*_first_order_args(w))
    return float(div - q * kind.delta(*jet_coordinates(w)))


def _battery_worst(X, L, n, seed) -> float:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        worst = max(worst, abs(variational_defect(X, L, random_jet(rng, 2))))
    return worst


def noether_law(X: VectorField3, L: Lagrangian, n_check: int = 50, seed: int = 0, tol: float = 1e-10) -> ConservationLaw:
    """P = -(Q dL/dw_u + L zeta, Q dL/dw_v + L eta) for a variational symmetry X."""
    worst = _battery_worst(X, L, n_check, seed)
    if worst > tol:
        raise NotVariationalError(f"{X.name} is not a variational symmetry of {L.name} (defect {worst:.3e})")
    Q = characteristic_fn(X)

    def P1(u, v, w, wu, wv):
        return -(Q(u, v, w, wu, wv) * L.dwu(u, v, w, wu, wv) + L(u, v, w, wu, wv) * X.zeta(u, v, w))

    def P2(u, v, w, wu, wv):
        return -(Q(u, v, w, wu, wv) * L.dwv(u, v, w, wu, wv) + L(u, v, w, wu, wv) * X.eta(u, v, w))

    return ConservationLaw(f"noether({X.name},{L.name})", P1, P2, Q)


def _law(name, P1, P2, X):
    return ConservationLaw(name, P1, P2, characteristic_fn(-X))


_e = J.exp

# Rows keyed by the table labels; Q is the characteristic of the negated field.
LIOUVILLE_LAWS = {
    "-W_1": _law(
        "-W_1",
        lambda u, v, w, wu, wv: 0.5 * wv - u * _e(w),
        lambda u, v, w, wu, wv: 0.5 * wu * (1.0 + u * wu),
        W1,
    ),
    "-W_2": _law(
        "-W_2",
        lambda u, v, w, wu, wv: 0.5 * wv * (1.0 + v * wv),
        lambda u, v, w, wu, wv: 0.5 * wu - v * _e(w),
        W2,
    ),
    "-W_3": _law(
        "-W_3",
        lambda u, v, w, wu, wv: -_e(w),
        lambda u, v, w, wu, wv: 0.5 * wu * wu,
        W3,
    ),
    "-W_4": _law(
        "-W_4",
        lambda u, v, w, wu, wv: 0.5 * wv * wv,
        lambda u, v, w, wu, wv: -_e(w),
        W4,
    ),
}

TITEICA_LAWS = {
    "-U_1": _law(
        "-U_1",
        lambda u, v, w, wu, wv: -0.5 * u * _e(-2.0 * w) - 0.5 * v * wv * wv - u * _e(w),
        lambda u, v, w, wu, wv: 0.5 * u * wu * wu + v * _e(w) + 0.5 * v * _e(-2.0 * w),
        U1,
    ),
    "-U_2": _law(
        "-U_2",
        lambda u, v, w, wu, wv: -_e(w) - 0.5 * _e(-2.0 * w),
        lambda u, v, w, wu, wv: 0.5 * wu * wu,
        U2,
    ),
    "-U_3": _law(
        "-U_3",
        lambda u, v, w, wu, wv: 0.5 * wv * wv,
        lambda u, v, w, wu, wv: -_e(w) - 0.5 * _e(-2.0 * w),
        U3,
    ),
}

# (field, Lagrangian, equation) behind each table row
LAW_SOURCES = {
    **{k: (-X, L1, LIOUVILLE_OMEGA) for k, X in zip(LIOUVILLE_LAWS, (W1, W2, W3, W4))},
    **{k: (-X, L2, TITEICA_OMEGA) for k, X in zip(TITEICA_LAWS, (U1, U2, U3))},
}


def integrating_factor_check(h: Jet2, variant: int = 1) -> tuple[float, float]:
    """Compare E(L_h) with (1/h^3)(h h_uv - h_u h_v - h^3 [+ 1]).

    Returns (E(L_h), factor * bracket); the two agree identically in the jet.
    """
    L = h_lagrangian(variant)
    E = euler_lagrange(L, h)
    c = h.coeffs
    hv = c[(0, 0)]
    bracket = hv * c[(1, 1)] - c[(1, 0)] * c[(0, 1)] - hv**3 + (1.0 if variant == 2 else 0.0)
    return float(E), float(bracket / hv**3)
