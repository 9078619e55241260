"""Surfaces from frames: RK4 marching, geometry, centroaffine invariant, export.

Along a u-line the state s = (theta, theta_u, theta_v) of the frame system
obeys s' = (theta_u, a theta_u + b theta_v, h theta); along a v-line
s' = (theta_v, h theta, a'' theta_u + b'' theta_v).  The base line v = v0 is
integrated first, then every column in v (vectorized across columns).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import jets as J
from .pde import CoefficientFrame, FrameIncompatibleError, nonruled_frame, residual_integrability, ruled_frame
from .solutions import ParametricSurface, SQRT3, hyperbolic_surface, titeica_sinh

MAX_NODES = 1_000_000
BLOWUP = 1e12


class SurfaceError(ValueError):
    pass


class DependentInitialConditionsError(SurfaceError):
    pass


class DegenerateSurfaceError(SurfaceError):
    pass


class InstabilityError(ArithmeticError):
    pass


@dataclass(frozen=True)
class GridSpec:
    u0: float
    v0: float
    nu: int
    nv: int
    du: float
    dv: float
    max_nodes: int = MAX_NODES

    def __post_init__(self):
        if self.nu < 2 or self.nv < 2:
            raise ValueError("need at least 2 nodes per direction")
        if not (self.du > 0 and self.dv > 0):
            raise ValueError("steps must be positive")
        if not all(math.isfinite(x) for x in (self.u0, self.v0, self.du, self.dv)):
            raise ValueError("grid parameters must be finite")
        if self.nu * self.nv > self.max_nodes:
            raise ValueError(f"{self.nu * self.nv} nodes exceed the cap of {self.max_nodes}")

    @property
    def us(self) -> np.ndarray:
        return self.u0 + self.du * np.arange(self.nu)

    @property
    def vs(self) -> np.ndarray:
        return self.v0 + self.dv * np.arange(self.nv)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.us, self.vs, indexing="ij")

    def refined(self) -> "GridSpec":
        """Same window with halved steps."""
        return GridSpec(self.u0, self.v0, 2 * self.nu - 1, 2 * self.nv - 1, self.du / 2, self.dv / 2, self.max_nodes)

    @classmethod
    def window(cls, u0, u1, v0, v1, du, dv=None, **kw) -> "GridSpec":
        dv = du if dv is None else dv
        nu = int(round((u1 - u0) / du)) + 1
        nv = int(round((v1 - v0) / dv)) + 1
        return cls(u0, v0, nu, nv, du, dv, **kw)


@dataclass
class ComponentField:
    """Solution(s) of the frame system on a grid; arrays are (..., nu, nv)."""

    grid: GridSpec
    theta: np.ndarray
    theta_u: np.ndarray
    theta_v: np.ndarray


@dataclass
class SurfaceGrid:
    """r and its derivatives per node, arrays of shape (nu, nv, 3)."""

    grid: GridSpec
    r: np.ndarray
    ru: np.ndarray
    rv: np.ndarray
    ruu: np.ndarray
    ruv: np.ndarray
    rvv: np.ndarray
    name: str = ""
    triple: np.ndarray = field(init=False)

    def __post_init__(self):
        self.triple = np.linalg.det(np.stack([self.r, self.ru, self.rv], axis=-1))


# -- marching --------------------------------------------------------------------


def check_compatibility(frame: CoefficientFrame, grid: GridSpec, tol: float = 1e-8, n: int = 5) -> float:
    """Max integrability residual on an n x n subgrid; raises above ``tol``."""
    us = np.linspace(grid.us[0], grid.us[-1], n)
    vs = np.linspace(grid.vs[0], grid.vs[-1], n)
    U, V = np.meshgrid(us, vs, indexing="ij")
    res = residual_integrability(frame, U, V)
    worst = float(np.max(np.abs(np.asarray(res, dtype=float))))
    if not worst <= tol:
        raise FrameIncompatibleError(f"frame fails the integrability conditions (max residual {worst:.3e})")
    return worst


def _rk4_linear(step, s, h, c0, ch, c1):
    k1 = step(s, c0)
    k2 = step(s + 0.5 * h * k1, ch)
    k3 = step(s + 0.5 * h * k2, ch)
    k4 = step(s + h * k3, c1)
    return s + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _u_rhs(s, c):
    a, b, h = c
    return np.stack([s[1], a * s[1] + b * s[2], h * s[0]])


def _v_rhs(s, c):
    h, a2, b2 = c
    return np.stack([s[2], h * s[0], a2 * s[1] + b2 * s[2]])


def _march_line(rhs, s0, coeffs, h):
    """coeffs: arrays over 2n-1 half-step stations along the line."""
    n = (coeffs[0].shape[0] + 1) // 2
    out = np.empty((n,) + s0.shape)
    out[0] = s0
    s = s0
    for k in range(n - 1):
        c0 = tuple(c[2 * k] for c in coeffs)
        ch = tuple(c[2 * k + 1] for c in coeffs)
        c1 = tuple(c[2 * k + 2] for c in coeffs)
        s = _rk4_linear(rhs, s, h, c0, ch, c1)
        if not np.all(np.isfinite(s)) or np.max(np.abs(s)) > BLOWUP:
            raise InstabilityError(f"state norm exceeded {BLOWUP:g} after {k + 1} steps")
        out[k + 1] = s
    return out


def _half_stations(x0, dx, n):
    return x0 + 0.5 * dx * np.arange(2 * n - 1)


def _values(frame, U, V):
    return tuple(np.asarray(x, dtype=float) for x in frame.values(U, V))


def integrate_component(frame: CoefficientFrame, ic, grid: GridSpec, order: str = "uv", check: bool = True) -> ComponentField:
    """March the frame system from (theta, theta_u, theta_v) at (u0, v0).

    ``ic`` is a triple or an array of triples (marched together).
    ``order="uv"`` integrates the base line v = v0 in u, then columns in v;
    ``"vu"`` swaps the roles.
    """
    if check:
        check_compatibility(frame, grid)
    s0 = np.asarray(ic, dtype=float)
    if s0.shape[-1] != 3:
        raise ValueError("initial data must be (theta, theta_u, theta_v) triples")
    batch = s0.shape[:-1]
    s0 = np.moveaxis(s0, -1, 0)  # (3, *batch)
    us, vs = grid.us, grid.vs
    uh = _half_stations(grid.u0, grid.du, grid.nu)
    vh = _half_stations(grid.v0, grid.dv, grid.nv)
    if order == "uv":
        a, b, h, _, _ = _values(frame, uh, np.full_like(uh, grid.v0))
        base = _march_line(_u_rhs, s0, [x.reshape((-1,) + (1,) * len(batch)) for x in (a, b, h)], grid.du)
        U, V = np.meshgrid(us, vh, indexing="ij")
        _, _, h, a2, b2 = _values(frame, U, V)  # (nu, 2nv-1)
        start = np.moveaxis(base, 0, -1)  # (3, *batch, nu)
        coeffs = [x.T.reshape((x.shape[1],) + (1,) * len(batch) + (x.shape[0],)) for x in (h, a2, b2)]
        cols = _march_line(_v_rhs, start, coeffs, grid.dv)  # (nv, 3, *batch, nu)
        state = np.moveaxis(cols, 0, -1)  # (3, *batch, nu, nv)
    elif order == "vu":
        _, _, h, a2, b2 = _values(frame, np.full_like(vh, grid.u0), vh)
        base = _march_line(_v_rhs, s0, [x.reshape((-1,) + (1,) * len(batch)) for x in (h, a2, b2)], grid.dv)
        U, V = np.meshgrid(uh, vs, indexing="ij")
        a, b, h, _, _ = _values(frame, U, V)  # (2nu-1, nv)
        start = np.moveaxis(base, 0, -1)  # (3, *batch, nv)
        coeffs = [x.reshape((x.shape[0],) + (1,) * len(batch) + (x.shape[1],)) for x in (a, b, h)]
        rows = _march_line(_u_rhs, start, coeffs, grid.du)  # (nu, 3, *batch, nv)
        state = np.moveaxis(rows, 0, -2)  # (3, *batch, nu, nv)
    else:
        raise ValueError(f"order must be 'uv' or 'vu', got {order!r}")
    return ComponentField(grid, state[0], state[1], state[2])


def marching_discrepancy(frame: CoefficientFrame, ic, grid: GridSpec) -> float:
    """Max |theta| difference between the two marching orders."""
    a = integrate_component(frame, ic, grid, "uv")
    b = integrate_component(frame, ic, grid, "vu", check=False)
    return float(np.max(np.abs(a.theta - b.theta)))


def integrate_surface(frame: CoefficientFrame, ics, grid: GridSpec, name: str = "", check: bool = True) -> SurfaceGrid:
    """Three independent solutions (x, y, z) of the frame system as a surface."""
    ics = np.asarray(ics, dtype=float)
    if ics.shape != (3, 3):
        raise ValueError("need three (theta, theta_u, theta_v) triples")
    scale = np.prod(np.linalg.norm(ics, axis=1))
    if scale == 0 or abs(np.linalg.det(ics)) <= 1e-12 * scale:
        raise DependentInitialConditionsError("initial conditions are linearly dependent")
    comp = integrate_component(frame, ics, grid, check=check)
    r = np.moveaxis(comp.theta, 0, -1)
    ru = np.moveaxis(comp.theta_u, 0, -1)
    rv = np.moveaxis(comp.theta_v, 0, -1)
    U, V = grid.mesh()
    a, b, h, a2, b2 = (x[..., None] for x in _values(frame, U, V))
    surf = SurfaceGrid(grid, r, ru, rv, a * ru + b * rv, h * r, a2 * ru + b2 * rv, name=name or frame.kind)
    f = surf.triple
    if np.any(f == 0) or np.any(np.sign(f) != np.sign(f.flat[0])):
        raise DegenerateSurfaceError("triple product vanishes or changes sign on the grid")
    return surf


def sample_surface(surface: ParametricSurface, grid: GridSpec) -> SurfaceGrid:
    """Nodes and exact derivatives of an analytic surface (array-valued jets)."""
    U, V = grid.mesh()
    comps = surface(J.seed_u(U, V, 2), J.seed_v(U, V, 2))

    def get(mi):
        return np.stack([np.broadcast_to(np.asarray(c[mi], dtype=float), U.shape) for c in comps], axis=-1)

    return SurfaceGrid(grid, get((0, 0)), get((1, 0)), get((0, 1)), get((2, 0)), get((1, 1)), get((0, 2)), surface.name)


def apply_linear(surf: SurfaceGrid, M) -> SurfaceGrid:
    """Image of the surface under x -> M x."""
    M = np.asarray(M, dtype=float)

    def t(x):
        return x @ M.T

    return SurfaceGrid(
        surf.grid, t(surf.r), t(surf.ru), t(surf.rv), t(surf.ruu), t(surf.ruv), t(surf.rvv), f"M*{surf.name}"
    )


# -- geometry --------------------------------------------------------------------


@dataclass
class GeometryReport:
    E: np.ndarray
    F: np.ndarray
    G: np.ndarray
    Lf: np.ndarray
    Mf: np.ndarray
    Nf: np.ndarray
    K: np.ndarray
    d: np.ndarray
    I: np.ndarray

    @property
    def mean_I(self) -> float:
        return float(np.mean(self.I))

    @property
    def spread_I(self) -> float:
        """(max I - min I) / |mean I|."""
        return float((np.max(self.I) - np.min(self.I)) / abs(np.mean(self.I)))

    @property
    def max_abs_L(self) -> float:
        return float(np.max(np.abs(self.Lf)))

    @property
    def max_abs_N(self) -> float:
        return float(np.max(np.abs(self.Nf)))

    def summary(self) -> dict:
        return {
            "mean_I": self.mean_I,
            "spread_I": self.spread_I,
            "max_abs_L": self.max_abs_L,
            "max_abs_N": self.max_abs_N,
        }


def _dot(a, b):
    return np.sum(a * b, axis=-1)


def geometry(surf: SurfaceGrid | ParametricSurface, grid: GridSpec | None = None) -> GeometryReport:
    """Fundamental forms, Gaussian curvature K, tangent-plane distance d, I = K/d^4."""
    if isinstance(surf, ParametricSurface):
        if grid is None:
            raise ValueError("analytic surfaces need a grid")
        surf = sample_surface(surf, grid)
    E, F, G = _dot(surf.ru, surf.ru), _dot(surf.ru, surf.rv), _dot(surf.rv, surf.rv)
    det = E * G - F * F
    if np.any(det <= 0) or not np.all(np.isfinite(det)):
        raise DegenerateSurfaceError("degenerate metric (EG - F^2 <= 0)")
    n = np.cross(surf.ru, surf.rv)
    nn = np.linalg.norm(n, axis=-1)
    unit = n / nn[..., None]
    Lf, Mf, Nf = _dot(surf.ruu, unit), _dot(surf.ruv, unit), _dot(surf.rvv, unit)
    K = (Lf * Nf - Mf * Mf) / det
    d = np.abs(_dot(surf.r, unit))
    if np.any(d <= 1e-14 * np.maximum(1.0, np.linalg.norm(surf.r, axis=-1))):
        raise DegenerateSurfaceError("tangent plane passes through the origin (d = 0); I is undefined")
    return GeometryReport(E, F, G, Lf, Mf, Nf, K, d, K / d**4)


def asymptotic_defect(surf: SurfaceGrid | GeometryReport) -> tuple[float, float]:
    """(max |L|, max |N|); both vanish in asymptotic coordinates."""
    rep = surf if isinstance(surf, GeometryReport) else geometry(surf)
    return rep.max_abs_L, rep.max_abs_N


def line_straightness(surf: SurfaceGrid, axis: str = "v") -> float:
    """Largest relative deviation of the ``axis``-lines from straight lines."""
    r = surf.r if axis == "v" else np.swapaxes(surf.r, 0, 1)
    worst = 0.0
    for pts in r:
        c = pts - pts.mean(axis=0)
        s = np.linalg.svd(c, compute_uv=False)
        worst = max(worst, float(s[1] / s[0]) if s[0] > 0 else 0.0)
    return worst


# -- export ----------------------------------------------------------------------


def export_mesh(surf: SurfaceGrid, fmt: str, path, report: GeometryReport | None = None) -> Path:
    """Write OBJ (v/f records) or CSV (u,v,x,y,z,K,d,I) in row-major node order."""
    path = Path(path)
    nu, nv = surf.grid.nu, surf.grid.nv
    pts = surf.r.reshape(-1, 3)
    try:
        if fmt == "obj":
            idx = np.arange(nu * nv).reshape(nu, nv) + 1
            p00, p10, p11, p01 = idx[:-1, :-1], idx[1:, :-1], idx[1:, 1:], idx[:-1, 1:]
            tri = np.concatenate(
                [np.stack([p00, p10, p11], -1).reshape(-1, 3), np.stack([p00, p11, p01], -1).reshape(-1, 3)]
            )
            with open(path, "w") as fh:
                for x, y, z in pts:
                    fh.write(f"v {x:.17g} {y:.17g} {z:.17g}\n")
                for a, b, c in tri:
                    fh.write(f"f {a} {b} {c}\n")
        elif fmt == "csv":
            rep = report or geometry(surf)
            U, V = surf.grid.mesh()
            cols = np.column_stack(
                [U.ravel(), V.ravel(), pts, rep.K.ravel(), rep.d.ravel(), rep.I.ravel()]
            )
            np.savetxt(path, cols, fmt="%.17g", delimiter=",", header="u,v,x,y,z,K,d,I", comments="")
        else:
            raise ValueError(f"unknown export format {fmt!r}")
    except OSError as exc:
        raise SurfaceError(f"cannot write {path}: {exc}") from exc
    return path


# -- presets ---------------------------------------------------------------------


K_ROOT = 0.5 * SQRT3
IDENTITY_ICS = np.eye(3)
# real forms of e^{l u + l^2 v}, l^3 = 1, at (0, 0)
CUBE_ROOT_ICS = np.array([[1.0, 1.0, 1.0], [1.0, -0.5, -0.5], [0.0, K_ROOT, -K_ROOT]])


def const_h(u, v):
    return 1.0 + 0.0 * (u + v)


def cube_root_surface(u, v):
    """Closed form of the h = 1 surface seeded by CUBE_ROOT_ICS."""
    s, t = u + v, u - v
    e = np.exp(-0.5 * s)
    return np.stack([np.exp(s), e * np.cos(K_ROOT * t), e * np.sin(K_ROOT * t)], axis=-1)


def liouville_h(u, v):
    s = u + v
    return 2.0 / (s * s)


def surface_preset(name: str, grid: GridSpec | None = None, C: float = 1.0):
    """(frame or analytic surface, ics, grid) for the named preset."""
    if name == "nonruled-const":
        return nonruled_frame(const_h), CUBE_ROOT_ICS, grid or GridSpec(0.0, 0.0, 51, 51, 0.02, 0.02)
    if name == "nonruled-sinh":
        return nonruled_frame(titeica_sinh(0.0)), IDENTITY_ICS, grid or GridSpec(0.5, 0.5, 51, 51, 0.02, 0.02)
    if name == "ruled-liouville":
        frame = ruled_frame(liouville_h, lambda u: 1.0 + 0.0 * u)
        return frame, IDENTITY_ICS, grid or GridSpec(0.5, 0.5, 51, 51, 0.02, 0.02)
    if name == "hyperbolic":
        return hyperbolic_surface(C), None, grid or GridSpec(-0.5, -0.5, 51, 51, 0.02, 0.02)
    raise KeyError(f"unknown surface preset {name!r}")
