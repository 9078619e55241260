"""Closed-form solution families as jet-evaluable functions.

Every function here is written with the operators of :mod:`titeica.jets`, so
it can be called with floats, numpy arrays or :class:`~titeica.jets.Jet2`
arguments and returns exact derivatives in the jet case.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate

from . import jets as J
from .jets import Jet1, Jet2, JetDomainError, eval_univariate

SQRT3 = math.sqrt(3.0)
POLE_TOL = 1e-12


class SolutionDomainError(JetDomainError):
    """Evaluation outside a solution's domain (pole, window, sign)."""


def _primal(x):
    return J._primal(x)


def _nonzero(x, what: str):
    p = np.asarray(_primal(x))
    if np.any(np.abs(p) < POLE_TOL):
        raise SolutionDomainError(f"{what} vanishes (value {p!r}): pole")
    return x


def _in_window(x, window, what: str) -> None:
    if window is None:
        return
    lo, hi = window
    p = np.asarray(_primal(x))
    if np.any(p < lo) or np.any(p > hi):
        raise SolutionDomainError(f"{what}={p!r} outside window [{lo}, {hi}]")


class Curve:
    """A smooth univariate function, evaluable on numbers and jets.

    ``fn`` must be written with jet-aware operations.  The derivative is
    taken by nested jet differentiation unless ``derivative`` supplies a
    closed form.
    """

    def __init__(self, fn: Callable, domain=(-math.inf, math.inf), derivative=None, name=""):
        self.fn = fn
        self.domain = domain
        self._derivative = derivative
        self.name = name

    def __call__(self, x):
        lo, hi = self.domain
        p = np.asarray(_primal(x))
        if np.any(p <= lo) or np.any(p >= hi):
            raise SolutionDomainError(f"curve {self.name or '?'} evaluated at {p!r}, outside ({lo}, {hi})")
        return self.fn(x)

    def eval(self, t: float, order: int) -> Jet1:
        return eval_univariate(self, t, order)

    def derivative(self) -> "Curve":
        if self._derivative is not None:
            return self._derivative
        return Curve(lambda x: J.partial(self, (x,), 0), self.domain, name=f"{self.name}'")

    def __repr__(self) -> str:
        return f"Curve({self.name or self.fn!r})"


def curve_identity() -> Curve:
    return Curve(lambda x: x, name="t", derivative=Curve(lambda x: 1.0 + 0.0 * x, name="1"))


def curve_exp() -> Curve:
    e = Curve(J.exp, name="exp")
    e._derivative = e
    return e


def curve_tanh(scale: float = 1.0, shift: float = 0.0) -> Curve:
    """t -> th(scale * (t + shift))."""

    def fn(x):
        return J.tanh(scale * (x + shift))

    def dfn(x):
        c = J.cosh(scale * (x + shift))
        return scale / (c * c)

    return Curve(fn, name=f"th({scale}*(t+{shift}))", derivative=Curve(dfn, name="th'"))


LIOUVILLE_PRESETS = {
    "identity": lambda: (curve_identity(), curve_identity()),
    "exp": lambda: (curve_exp(), curve_exp()),
    "tanh": lambda: (curve_tanh(1.0, 0.0), curve_tanh(1.0, 0.0)),
}


@dataclass
class SolutionH:
    """A positive solution candidate h(u, v) with jet evaluation."""

    fn: Callable
    kind: str
    params: dict = field(default_factory=dict)
    window: tuple | None = None

    def __call__(self, u, v):
        if self.window is not None:
            _in_window(u, self.window[0], "u")
            _in_window(v, self.window[1], "v")
        out = self.fn(u, v)
        if np.any(np.asarray(_primal(out)) <= 0):
            raise SolutionDomainError(f"{self.kind} solution is not positive at ({_primal(u)}, {_primal(v)})")
        return out

    def eval(self, u0, v0, order: int) -> Jet2:
        U, V = J.seed_u(u0, v0, order), J.seed_v(u0, v0, order)
        out = self(U, V)
        if not isinstance(out, Jet2):
            out = J.Jet2.constant(out, U.base_point, order)
        return out

    def omega(self) -> Callable:
        """The logarithm omega = ln h as a jet-capable function."""
        return lambda u, v: J.log(self(u, v))


def liouville_general(Utilde: Curve, Vtilde: Curve, window=None) -> SolutionH:
    """h = 2 U~'(u) V~'(v) / (U~(u) + V~(v))^2."""
    dU, dV = Utilde.derivative(), Vtilde.derivative()

    def h(u, v):
        du, dv = dU(u), dV(v)
        if np.any(np.asarray(_primal(du)) <= 0) or np.any(np.asarray(_primal(dv)) <= 0):
            raise SolutionDomainError("Liouville solution needs U~' > 0 and V~' > 0")
        s = _nonzero(Utilde(u) + Vtilde(v), "U~ + V~")
        return 2.0 * du * dv / (s * s)

    return SolutionH(h, "LiouvilleGeneral", {"Utilde": Utilde, "Vtilde": Vtilde}, window)


def mu_family(k_case: str, l: float = 1.0, C: float = 0.0) -> Curve:
    """General solution of mu mu'' - mu'^2 = mu^3 by case of the constant k."""
    if k_case == "zero":

        def fn(t):
            s = _nonzero(t + C, "t + C")
            return 2.0 / (s * s)

    elif k_case in ("neg_l2", "pos_l2"):
        if not l > 0:
            raise ValueError("l must be positive")
        trig = J.cos if k_case == "neg_l2" else J.sinh

        def fn(t):
            s = _nonzero(trig(0.5 * l * t + C), "denominator")
            return l * l / (2.0 * s * s)

    else:
        raise ValueError(f"unknown case {k_case!r}")
    return Curve(fn, name=f"mu[{k_case}, l={l}, C={C}]")


def titeica_constant() -> SolutionH:
    """h = 1."""
    return SolutionH(lambda u, v: 1.0 + 0.0 * (u + v), "Constant")


def sinh_w(C1: float = 0.0) -> Curve:
    """w(t) = sh(t sqrt3/2 + C1) / sqrt3, solving w'^2 = (3w^2 + 1)/4."""
    return Curve(lambda t: J.sinh(0.5 * SQRT3 * t + C1) / SQRT3, name=f"w[C1={C1}]")


def sinh_profile(C1: float = 0.0) -> Curve:
    """mu(t) = 1/(2 w^2) + 1, the revolution profile of the sinh solution."""
    w = sinh_w(C1)

    def fn(t):
        wt = _nonzero(w(t), "w")
        return 0.5 / (wt * wt) + 1.0

    return Curve(fn, name=f"sinh-profile[C1={C1}]")


def titeica_sinh(C1: float = 0.0, window=None) -> SolutionH:
    mu = sinh_profile(C1)
    return SolutionH(lambda u, v: mu(u + v), "SinhProfile", {"C1": C1}, window)


def sinh_as_liouville_plus_one(C1: float = 0.0) -> SolutionH:
    """The sinh solution rebuilt as (Liouville solution) + 1.

    Uses U~ = th(sqrt3/2 (u + C1')), V~ = th(sqrt3/2 v) with C1' = 2 C1/sqrt3.
    """
    lio = liouville_general(curve_tanh(0.5 * SQRT3, 2.0 * C1 / SQRT3), curve_tanh(0.5 * SQRT3, 0.0))
    return SolutionH(lambda u, v: lio(u, v) + 1.0, "Custom", {"C1": C1})


def profile_solution(mu: Curve, kind: str = "MuProfile") -> SolutionH:
    """h(u, v) = mu(u + v)."""
    return SolutionH(lambda u, v: mu(u + v), kind, {"mu": mu})


# -- parametric surfaces --------------------------------------------------------


@dataclass
class ParametricSurface:
    """r(u, v) = (x, y, z) given as a jet-capable function."""

    r: Callable
    name: str = ""

    def __call__(self, u, v):
        return self.r(u, v)


def hyperbolic_surface(C: float) -> ParametricSurface:
    """xyz = C, parametrized by x = e^s, y = e^t."""
    if C == 0:
        raise ValueError("C must be nonzero")
    return ParametricSurface(
        lambda s, t: (J.exp(s), J.exp(t), C * J.exp(-(s + t))), name=f"xyz={C}"
    )


def sphere() -> ParametricSurface:
    """Unit sphere in geographic coordinates (longitude, latitude)."""
    return ParametricSurface(
        lambda th, ph: (J.cos(ph) * J.cos(th), J.cos(ph) * J.sin(th), J.sin(ph) + 0.0 * th),
        name="unit sphere",
    )


# -- revolution solutions of the linear system ---------------------------------


class Antiderivative(Curve):
    """A(t) = integral of ``integrand`` from ``t0`` to t, by adaptive quadrature."""

    def __init__(self, integrand: Curve, t0: float, epsabs: float = 1e-10, name=""):
        self.integrand = integrand
        self.t0 = t0
        self.epsabs = epsabs
        super().__init__(self._eval, integrand.domain, derivative=integrand, name=name)

    def _quad(self, t: float) -> float:
        with warnings.catch_warnings():
            warnings.simplefilter("error", integrate.IntegrationWarning)
            try:
                val, _ = integrate.quad(
                    lambda s: float(self.integrand(s)), self.t0, t, epsabs=self.epsabs, epsrel=1e-12, limit=200
                )
            except integrate.IntegrationWarning as exc:
                raise SolutionDomainError(f"quadrature did not converge on [{self.t0}, {t}]: {exc}") from None
        return val

    def _eval(self, x):
        if isinstance(x, Jet2):
            x0 = x.value
            derivs = [self._eval(x0)]
            g = self.integrand
            for _ in range(x.order):
                derivs.append(g(x0))
                g = g.derivative()
            return J.compose(derivs, x)
        if np.ndim(x):
            return np.vectorize(self._quad, otypes=[float])(x)
        return self._quad(float(x))


def revolution_theta(kpar: float, mu: Curve, k1: float, k2: float, k3: float, window: tuple, branch: str = "k"):
    """Revolution solution theta(u, v) of the linear system for h = mu(u + v).

    ``window`` = (alpha_lo, alpha_hi) bounds alpha = u + v; the integrals start
    at alpha_lo.  ``branch="zero"`` selects the polynomial-in-beta family
    (``kpar`` is then ignored).
    """
    lo, hi = window
    dmu = mu.derivative()
    probe = np.linspace(lo, hi, 2001)
    den = np.array([float(dmu(float(s))) + 1.0 for s in probe])
    if np.any(np.abs(den) < 1e-8) or np.any(np.sign(den) != np.sign(den[0])):
        raise SolutionDomainError("mu' + 1 vanishes on the window: singular integrand")
    if branch == "k" and kpar == 0:
        raise ValueError("kpar must be nonzero on the k branch")

    half = Curve(lambda s: (dmu(s) - 1.0) / (2.0 * mu(s)), (lo - 1e-9, hi + 1e-9), name="(mu'-1)/(2mu)")
    A = Antiderivative(half, lo, name="A")
    if branch == "k":
        quot = Curve(lambda s: mu(s) * mu(s) / (dmu(s) + 1.0), half.domain, name="mu^2/(mu'+1)")
        B = Antiderivative(quot, lo, name="B")

        def theta(u, v):
            _in_window(u + v, window, "alpha")
            alpha, beta = u + v, u - v
            eA = J.exp(A(alpha))
            return eA * (k1 * J.cos(kpar * beta) + k2 * J.sin(kpar * beta)) + k3 * J.exp(B(alpha))

    elif branch == "zero":
        quot = Curve(lambda s: 4.0 * mu(s) / (dmu(s) + 1.0), half.domain, name="4mu/(mu'+1)")
        N = Antiderivative(quot, lo, name="N")

        def theta(u, v):
            _in_window(u + v, window, "alpha")
            alpha, beta = u + v, u - v
            return J.exp(A(alpha)) * (k1 * (beta * beta + N(alpha)) + k2 * beta + k3)

    else:
        raise ValueError(f"unknown branch {branch!r}")
    return theta
