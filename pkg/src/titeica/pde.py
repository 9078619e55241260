"""Residuals of the Liouville/Titeica equations and the frame systems.

Equations on the unknown omega (or h = e^omega) are represented as functions
of the second-order jet coordinates ``(u, v, w, wu, wv, wuu, wuv, wvv)``.
All residuals are absolute.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from . import jets as J
from .jets import Jet1, Jet2, JetError
from .solutions import Curve, SolutionDomainError


# -- scalar PDEs ---------------------------------------------------------------


@dataclass(frozen=True)
class PdeKind:
    """A scalar equation omega_uv = H(omega) or (ln h)_uv = G(h).

    ``form`` is ``"omega"`` or ``"h"``; ``rhs`` is H or G as a jet-capable
    univariate function.
    """

    name: str
    form: str
    rhs: Callable

    def delta(self, u, v, w, wu, wv, wuu, wuv, wvv):
        if self.form == "omega":
            return wuv - self.rhs(w)
        return (w * wuv - wu * wv) / (w * w) - self.rhs(w)

    def __repr__(self) -> str:
        return f"PdeKind({self.name})"


LIOUVILLE_H = PdeKind("LiouvilleH", "h", lambda h: h)
TITEICA_H = PdeKind("TiteicaH", "h", lambda h: h - 1.0 / (h * h))
LIOUVILLE_OMEGA = PdeKind("LiouvilleOmega", "omega", J.exp)
TITEICA_OMEGA = PdeKind("TiteicaOmega", "omega", lambda w: J.exp(w) - J.exp(-2.0 * w))

KINDS = {k.name: k for k in (LIOUVILLE_H, TITEICA_H, LIOUVILLE_OMEGA, TITEICA_OMEGA)}


def general_h(Hfn: Callable, name: str = "GeneralH") -> PdeKind:
    """omega_uv = H(omega) for a user-supplied jet-capable H."""
    return PdeKind(name, "omega", Hfn)


def jet_coordinates(w: Jet2) -> tuple:
    """(u, v, w, wu, wv, wuu, wuv, wvv) at the base point of ``w``."""
    if w.order < 2:
        raise JetError(f"need a jet of order >= 2, got {w.order}")
    u0, v0 = w.base_point
    c = w.coeffs
    return (u0, v0, c[(0, 0)], c[(1, 0)], c[(0, 1)], c[(2, 0)], c[(1, 1)], c[(0, 2)])


def coordinate_jets(w: Jet2) -> tuple[Jet2, Jet2]:
    """Jets of u and v sharing the base point, order and level of ``w``."""
    U = Jet2.constant(w.base_point[0], w.base_point, w.order, w.level)
    U.coeffs[(1, 0)] = 1.0
    V = Jet2.constant(w.base_point[1], w.base_point, w.order, w.level)
    V.coeffs[(0, 1)] = 1.0
    return U, V


def composite_jets(w: Jet2, nargs: int) -> tuple:
    """Jets of the jet coordinates along the function whose jet is ``w``.

    With ``nargs=5`` the arguments are (u, v, w, wu, wv) at order
    ``w.order - 1``; with ``nargs=8`` second derivatives are appended and the
    order is ``w.order - 2``.  Evaluating a jet-space function on these gives
    the jet of its total derivatives.
    """
    drop = 1 if nargs <= 5 else 2
    n = w.order - drop
    if n < 1:
        raise JetError(f"jet order {w.order} too low for total derivatives")
    U, V = coordinate_jets(w)
    wu, wv = w.d(0), w.d(1)
    args = [U, V, w, wu, wv]
    if nargs > 5:
        args += [wu.d(0), wu.d(1), wv.d(1)]
    return tuple(a.truncate(n) for a in args[:nargs])


def residual_scalar(kind: PdeKind, w: Jet2) -> float:
    coords = jet_coordinates(w)
    if kind.form == "h" and np.any(np.asarray(J._primal(w.value)) <= 0):
        raise SolutionDomainError(f"h must be positive, got {w.value!r}")
    return kind.delta(*coords)


# -- frames --------------------------------------------------------------------


class FrameIncompatibleError(ValueError):
    """The frame coefficients violate the compatibility conditions."""


@dataclass(frozen=True)
class CoefficientFrame:
    """Coefficients (a, b, h, a'', b'') of the second-order frame system.

    Each entry is a jet-capable function of (u, v).
    """

    a: Callable
    b: Callable
    h: Callable
    a2: Callable
    b2: Callable
    kind: str = "General"
    phi: Callable | None = None

    def entries(self, u, v) -> tuple:
        return tuple(f(u, v) for f in (self.a, self.b, self.h, self.a2, self.b2))

    def values(self, u, v) -> tuple:
        """Plain (non-jet) values, broadcast to the shape of u + v."""
        shape = np.shape(np.asarray(u) + np.asarray(v))
        out = []
        for f in (self.a, self.b, self.h, self.a2, self.b2):
            val = f(u, v)
            out.append(np.broadcast_to(np.asarray(val, dtype=float), shape) if shape else float(val))
        return tuple(out)


def _zero(u, v):
    return 0.0 * (u + v)


def _log_partial(h: Callable, axis: int) -> Callable:
    def f(u, v):
        return J.partial(h, (u, v), axis) / h(u, v)

    return f


def ruled_frame(h: Callable, phi: Callable) -> CoefficientFrame:
    """a = h_u/h, b = phi(u)/h, a'' = 0, b'' = h_v/h (h solving Liouville)."""
    return CoefficientFrame(
        a=_log_partial(h, 0),
        b=lambda u, v: phi(u) / h(u, v),
        h=h,
        a2=_zero,
        b2=_log_partial(h, 1),
        kind="Ruled",
        phi=phi,
    )


def nonruled_frame(h: Callable) -> CoefficientFrame:
    """a = h_u/h, b = a'' = 1/h, b'' = h_v/h (h solving Titeica)."""
    recip = lambda u, v: 1.0 / h(u, v)  # noqa: E731
    return CoefficientFrame(
        a=_log_partial(h, 0), b=recip, h=h, a2=recip, b2=_log_partial(h, 1), kind="NonRuled"
    )


def residual_integrability(frame: CoefficientFrame, u, v) -> np.ndarray:
    """The six compatibility residuals of the frame at (u, v).

    Order: a h - h_u, a_v + b a'' - h, b_v + b b'', h_v - b'' h,
    a''_u + a a'', b''_u + a'' b - h.
    """
    U, V = J.seed_u(u, v, 1), J.seed_v(u, v, 1)
    a, b, h, a2, b2 = (J.lift(e, U) for e in frame.entries(U, V))
    res = [
        a.value * h.value - h[(1, 0)],
        a[(0, 1)] + b.value * a2.value - h.value,
        b[(0, 1)] + b.value * b2.value,
        h[(0, 1)] - b2.value * h.value,
        a2[(1, 0)] + a.value * a2.value,
        b2[(1, 0)] + a2.value * b.value - h.value,
    ]
    return np.array(res, dtype=float)


def residual_linear_system(frame: CoefficientFrame, theta: Jet2) -> np.ndarray:
    """theta_uu - a theta_u - b theta_v, theta_uv - h theta, theta_vv - a'' theta_u - b'' theta_v."""
    if theta.order < 2:
        raise JetError("theta jet must have order >= 2")
    a, b, h, a2, b2 = frame.values(*theta.base_point)
    c = theta.coeffs
    return np.array(
        [
            c[(2, 0)] - a * c[(1, 0)] - b * c[(0, 1)],
            c[(1, 1)] - h * c[(0, 0)],
            c[(0, 2)] - a2 * c[(1, 0)] - b2 * c[(0, 1)],
        ],
        dtype=float,
    )


def surface_conditions(rx: Jet2, ry: Jet2, rz: Jet2) -> float:
    """det[r, r_u, r_v]; nonzero for a surface that is not a cone over the origin."""
    m = np.array([[c[(0, 0)], c[(1, 0)], c[(0, 1)]] for c in (rx.coeffs, ry.coeffs, rz.coeffs)])
    return float(np.linalg.det(m.T))


# -- reduced ODEs --------------------------------------------------------------


def residual_ode_mu(mu: Jet1, rhs: str = "liouville", k: float = 1.0) -> float:
    """mu mu'' - mu'^2 minus mu^3 (liouville) or k (mu^3 - 1) (titeica)."""
    if mu.order < 2:
        raise JetError("mu jet must have order >= 2")
    m, dm, ddm = mu[0], mu[1], mu[2]
    if rhs == "liouville":
        r = m**3
    elif rhs == "titeica":
        r = k * (m**3 - 1.0)
    else:
        raise ValueError(f"unknown right-hand side {rhs!r}")
    return m * ddm - dm * dm - r


def residual_ode_g(g: Jet1, C: float) -> float:
    """g'^2 - g^3 - C g^2 - 4."""
    return g[1] ** 2 - g[0] ** 3 - C * g[0] ** 2 - 4.0


def residual_ode_w(w: Jet1) -> float:
    """w'^2 - (3 w^2 + 1)/4."""
    return w[1] ** 2 - 0.25 * (3.0 * w[0] ** 2 + 1.0)


def mu_first_integral(mu, dmu, k: float = 1.0):
    """(mu'^2 - 2k mu^3 - k) / (4 mu^2), constant along mu mu'' - mu'^2 = k(mu^3 - 1)."""
    return (dmu * dmu - 2.0 * k * mu**3 - k) / (4.0 * mu * mu)


def rk4_step(f: Callable, t, y, h):
    k1 = f(t, y)
    k2 = f(t + 0.5 * h, y + 0.5 * h * k1)
    k3 = f(t + 0.5 * h, y + 0.5 * h * k2)
    k4 = f(t + h, y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


class BlowUpError(ArithmeticError):
    def __init__(self, t: float, msg: str):
        super().__init__(f"{msg} at t = {t}")
        self.t = t


class SampledCurve(Curve):
    """RK4 samples of mu mu'' - mu'^2 = k(mu^3 - 1) with jet evaluation.

    Values and first derivatives come from cubic Hermite interpolation of the
    samples; higher derivatives are read off the ODE at the interpolated
    state.
    """

    def __init__(self, t, mu, dmu, k: float):
        self.t, self.mu, self.dmu, self.k = t, mu, dmu, k
        lo, hi = (t[0], t[-1]) if t[-1] > t[0] else (t[-1], t[0])
        order = np.argsort(t)
        self._mu = CubicHermiteSpline(t[order], mu[order], dmu[order])
        ddmu = (dmu**2 + k * (mu**3 - 1.0)) / mu
        self._dmu = CubicHermiteSpline(t[order], dmu[order], ddmu[order])
        super().__init__(self._eval, (lo - 1e-12, hi + 1e-12), name=f"rk4-mu[k={k}]")

    @property
    def first_integral(self) -> np.ndarray:
        return mu_first_integral(self.mu, self.dmu, self.k)

    def state(self, t):
        return self._mu(t), self._dmu(t)

    def _derivs(self, x0):
        """mu and its first four derivatives at x0 (higher ones from the ODE)."""
        k = self.k
        m, dm = self.state(x0)
        d2 = (dm * dm + k * (m**3 - 1.0)) / m
        d3 = (dm * d2 + 3.0 * k * m * m * dm) / m
        d4 = ((d2 * d2 + dm * d3 + 6.0 * k * m * dm * dm + 3.0 * k * m * m * d2) * m - (dm * d2 + 3.0 * k * m * m * dm) * dm) / (m * m)
        return [m, dm, d2, d3, d4]

    def _jet(self, x, shift: int):
        if not isinstance(x, Jet2):
            val = (self._mu if shift == 0 else self._dmu)(x)
            return val if np.ndim(x) else float(val)
        x0 = x.value
        if isinstance(x0, Jet2):
            raise JetError("sampled curves do not support nested jets")
        derivs = self._derivs(x0)[shift : shift + x.order + 1]
        if np.ndim(x0) == 0:
            derivs = [float(d) for d in derivs]
        return J.compose(derivs, x)

    def _eval(self, x):
        return self._jet(x, 0)

    def derivative(self) -> Curve:
        return Curve(lambda x: self._jet(x, 1), self.domain, name=f"{self.name}'")


def integrate_mu_ode(k: float, mu0: float, dmu0: float, t0: float, t1: float, step: float = 1e-3) -> SampledCurve:
    """Fixed-step RK4 for mu'' = (mu'^2 + k(mu^3 - 1)) / mu from t0 to t1."""
    if mu0 == 0:
        raise ValueError("mu0 must be nonzero")
    if not step > 0:
        raise ValueError("step must be positive")
    n = max(1, math.ceil(abs(t1 - t0) / step - 1e-9))
    h = (t1 - t0) / n

    def f(t, y):
        m, dm = y
        return np.array([dm, (dm * dm + k * (m**3 - 1.0)) / m])

    ts = t0 + h * np.arange(n + 1)
    ys = np.empty((n + 1, 2))
    ys[0] = (mu0, dmu0)
    for i in range(n):
        y = rk4_step(f, ts[i], ys[i], h)
        if not np.all(np.isfinite(y)) or abs(y[0]) > 1e12:
            raise BlowUpError(ts[i + 1], "mu blew up")
        if abs(y[0]) < 1e-12:
            raise BlowUpError(ts[i + 1], "mu reached zero")
        ys[i + 1] = y
    ts[-1] = t1
    return SampledCurve(ts, ys[:, 0], ys[:, 1], k)
