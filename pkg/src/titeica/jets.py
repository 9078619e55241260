"""Truncated Taylor jets in two independent variables.

A :class:`Jet2` stores the raw partial derivatives ``d^(i+j) f / du^i dv^j``
of a scalar function at a base point, for every ``i + j <= order`` with
``order <= 3``.  Arithmetic and the elementary functions below propagate the
derivatives exactly (Leibniz rule and Faa di Bruno's formula), so any closed
form written with them yields exact partials.

Coefficients may be floats, numpy arrays (one jet per grid node, evaluated in
lockstep) or lower-level jets.  The ``level`` attribute orders nested jets:
when two jets of different levels meet, the higher level is the outer one and
treats the other as a constant.  :func:`partial` relies on this to
differentiate functions whose arguments are themselves jets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb
from typing import Callable, Sequence

import numpy as np

MAX_ORDER = 3


class JetError(ValueError):
    """Invalid jet operation (order, base point, non-finite result)."""


class JetDomainError(JetError):
    """Elementary function evaluated outside its domain."""


def multi_indices(order: int) -> list[tuple[int, int]]:
    return [(i, k - i) for k in range(order + 1) for i in range(k, -1, -1)]


_INDICES = {n: multi_indices(n) for n in range(MAX_ORDER + 1)}

# Leibniz terms per multi-index: (binomial weight, left index, right index)
_LEIBNIZ = {
    (p, q): [
        (comb(p, i) * comb(q, j), (i, j), (p - i, q - j))
        for i in range(p + 1)
        for j in range(q + 1)
    ]
    for p in range(MAX_ORDER + 1)
    for q in range(MAX_ORDER + 1 - p)
}


def _set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[first]] + part
        for k in range(len(part)):
            yield part[:k] + [[first] + part[k]] + part[k + 1 :]


def _faa_terms(p: int, q: int):
    slots = [0] * p + [1] * q
    terms = []
    for part in _set_partitions(list(range(len(slots)))):
        blocks = tuple(
            (sum(1 for s in b if slots[s] == 0), sum(1 for s in b if slots[s] == 1))
            for b in part
        )
        terms.append((len(part), blocks))
    return terms


# Faa di Bruno terms: for each multi-index, (derivative order k, blocks)
_FAA = {idx: _faa_terms(*idx) for idx in _INDICES[MAX_ORDER] if idx != (0, 0)}


def _primal(x):
    while isinstance(x, Jet2):
        x = x.value
    return x


def _level(x) -> int:
    return x.level if isinstance(x, Jet2) else -1


def _same_point(p, q) -> bool:
    if p is q:
        return True
    for a, b in zip(p, q):
        if a is b:
            continue
        if isinstance(a, Jet2) or isinstance(b, Jet2):
            return False
        if not np.all(np.asarray(a) == np.asarray(b)):
            return False
    return True


def _check_finite(c) -> None:
    if isinstance(c, float):
        if not math.isfinite(c):
            raise JetError(f"non-finite jet coefficient {c!r}")
    elif isinstance(c, np.ndarray):
        if not np.all(np.isfinite(c)):
            raise JetError("non-finite jet coefficient in array")


class Jet2:
    """Raw partial derivatives of a scalar function of (u, v) at a point."""

    __slots__ = ("base_point", "order", "coeffs", "level")
    __array_ufunc__ = None  # keep numpy from broadcasting over jets

    def __init__(self, base_point, order: int, coeffs: dict, level: int = 0):
        if not 0 <= order <= MAX_ORDER:
            raise JetError(f"jet order must be in 0..{MAX_ORDER}, got {order}")
        self.base_point = tuple(base_point)
        self.order = order
        self.coeffs = coeffs
        self.level = level
        for c in coeffs.values():
            _check_finite(c)

    # -- construction -----------------------------------------------------

    @classmethod
    def constant(cls, c, base_point, order: int, level: int = 0) -> "Jet2":
        coeffs = dict.fromkeys(_INDICES[order], 0.0)
        coeffs[(0, 0)] = c
        return cls(base_point, order, coeffs, level)

    def _like(self, coeffs: dict, order: int | None = None) -> "Jet2":
        return Jet2(self.base_point, self.order if order is None else order, coeffs, self.level)

    # -- access -----------------------------------------------------------

    @property
    def value(self):
        return self.coeffs[(0, 0)]

    def __getitem__(self, idx: tuple[int, int]):
        return self.coeffs[idx]

    def __repr__(self) -> str:
        body = ", ".join(f"{k}: {v!r}" for k, v in self.coeffs.items())
        return f"Jet2(at={self.base_point}, order={self.order}, {{{body}}})"

    def d(self, axis: int) -> "Jet2":
        """Jet of the partial derivative along ``axis`` (0 = u, 1 = v)."""
        if self.order == 0:
            raise JetError("cannot differentiate an order-0 jet")
        n = self.order - 1
        if axis == 0:
            coeffs = {(i, j): self.coeffs[(i + 1, j)] for i, j in _INDICES[n]}
        else:
            coeffs = {(i, j): self.coeffs[(i, j + 1)] for i, j in _INDICES[n]}
        return self._like(coeffs, n)

    def truncate(self, order: int) -> "Jet2":
        if order > self.order:
            raise JetError(f"cannot truncate order-{self.order} jet to {order}")
        if order == self.order:
            return self
        return self._like({k: self.coeffs[k] for k in _INDICES[order]}, order)

    def pad(self, order: int) -> "Jet2":
        """Extend to ``order`` with zero higher derivatives."""
        coeffs = dict.fromkeys(_INDICES[order], 0.0)
        coeffs.update(self.coeffs)
        return self._like(coeffs, order)

    def map(self, fn) -> "Jet2":
        return self._like({k: fn(c) for k, c in self.coeffs.items()})

    # -- arithmetic -------------------------------------------------------

    def _pair(self, other):
        """Return (a, b) as compatible same-level jets, or None if other is outer."""
        if isinstance(other, Jet2):
            if other.level > self.level:
                return None
            if other.level == self.level:
                if not _same_point(self.base_point, other.base_point):
                    raise JetError(
                        f"base point mismatch: {self.base_point} vs {other.base_point}"
                    )
                n = min(self.order, other.order)
                return self.truncate(n), other.truncate(n)
        return self, Jet2.constant(other, self.base_point, self.order, self.level)

    def __add__(self, other):
        pair = self._pair(other)
        if pair is None:
            return other.__radd__(self)
        a, b = pair
        return a._like({k: a.coeffs[k] + b.coeffs[k] for k in a.coeffs})

    def __radd__(self, other):
        return self.__add__(other)

    def __sub__(self, other):
        pair = self._pair(other)
        if pair is None:
            return other.__rsub__(self)
        a, b = pair
        return a._like({k: a.coeffs[k] - b.coeffs[k] for k in a.coeffs})

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __neg__(self):
        return self._like({k: -c for k, c in self.coeffs.items()})

    def __pos__(self):
        return self

    def __mul__(self, other):
        if not isinstance(other, Jet2):
            return self._like({k: c * other for k, c in self.coeffs.items()})
        pair = self._pair(other)
        if pair is None:
            return other.__rmul__(self)
        a, b = pair
        ac, bc = a.coeffs, b.coeffs
        out = {}
        for idx in _INDICES[a.order]:
            acc = 0.0
            for w, li, ri in _LEIBNIZ[idx]:
                term = ac[li] * bc[ri]
                acc = acc + (term if w == 1 else w * term)
            out[idx] = acc
        return a._like(out)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        if not isinstance(other, Jet2):
            if np.any(np.asarray(_primal(other)) == 0):
                raise JetDomainError("division by zero")
            return self._like({k: c / other for k, c in self.coeffs.items()})
        pair = self._pair(other)
        if pair is None:
            return other.__rtruediv__(self)
        a, b = pair
        return a * reciprocal(b)

    def __rtruediv__(self, other):
        return reciprocal(self) * other

    def __pow__(self, n):
        if isinstance(n, (int, np.integer)):
            return powi(self, int(n))
        if n == 0.5:
            return sqrt(self)
        return exp(log(self) * n)


# -- seeds ---------------------------------------------------------------------


def _check_order(order: int) -> None:
    if order not in (1, 2, 3):
        raise JetError(f"jet order must be 1, 2 or 3, got {order!r}")


def seed_u(u0, v0, order: int) -> Jet2:
    """Jet of the coordinate function (u, v) -> u."""
    _check_order(order)
    j = Jet2.constant(u0, (u0, v0), order)
    j.coeffs[(1, 0)] = 1.0
    return j


def seed_v(u0, v0, order: int) -> Jet2:
    """Jet of the coordinate function (u, v) -> v."""
    _check_order(order)
    j = Jet2.constant(v0, (u0, v0), order)
    j.coeffs[(0, 1)] = 1.0
    return j


def constant(c, u0, v0, order: int) -> Jet2:
    _check_order(order)
    return Jet2.constant(c, (u0, v0), order)


def seeds(x, y, order: int = 1) -> tuple[Jet2, Jet2]:
    """Seed two variables whose values may themselves be jets.

    The returned jets live one level above every input, so the caller can
    differentiate a function of ``x`` and ``y`` without disturbing whatever
    derivatives ``x`` and ``y`` already carry.
    """
    level = max(_level(x), _level(y)) + 1
    point = (x, y)
    jx = Jet2.constant(x, point, order, level)
    jx.coeffs[(1, 0)] = 1.0
    jy = Jet2.constant(y, point, order, level)
    jy.coeffs[(0, 1)] = 1.0
    return jx, jy


def lift(x, like: Jet2) -> Jet2:
    """Promote a plain number to a constant jet compatible with ``like``."""
    if isinstance(x, Jet2) and x.level >= like.level:
        return x
    return Jet2.constant(x, like.base_point, like.order, like.level)


def partial(fn: Callable, args: Sequence, i: int):
    """d fn / d args[i] evaluated at ``args`` (which may be jets)."""
    level = max(_level(a) for a in args) + 1
    x = Jet2.constant(args[i], (args[i], 0.0), 1, level)
    x.coeffs[(1, 0)] = 1.0
    out = fn(*args[:i], x, *args[i + 1 :])
    if isinstance(out, Jet2) and out.level == x.level:
        return out[(1, 0)]
    return 0.0


# -- composition ---------------------------------------------------------------


def compose(derivs: Sequence, a: Jet2) -> Jet2:
    """Jet of g(a) given g and its derivatives at ``a.value``.

    ``derivs[k]`` is the k-th derivative of the outer univariate function,
    for k = 0..a.order.
    """
    ac = a.coeffs
    out = {(0, 0): derivs[0]}
    for idx in _INDICES[a.order][1:]:
        acc = 0.0
        for k, blocks in _FAA[idx]:
            term = derivs[k]
            for b in blocks:
                term = term * ac[b]
            acc = acc + term
        out[idx] = acc
    return a._like(out)


def _exp_d(x, n):
    e = exp(x)
    return [e] * (n + 1)


def _log_d(x, n):
    _require(x, lambda p: p > 0, "ln")
    r = 1.0 / x
    return [log(x), r, -r * r, 2.0 * r * r * r][: n + 1]


def _sinh_d(x, n):
    s, c = sinh(x), cosh(x)
    return [s, c, s, c][: n + 1]


def _cosh_d(x, n):
    s, c = sinh(x), cosh(x)
    return [c, s, c, s][: n + 1]


def _tanh_d(x, n):
    t = tanh(x)
    s = 1.0 - t * t
    return [t, s, -2.0 * t * s, s * (6.0 * t * t - 2.0)][: n + 1]


def _sin_d(x, n):
    s, c = sin(x), cos(x)
    return [s, c, -s, -c][: n + 1]


def _cos_d(x, n):
    s, c = sin(x), cos(x)
    return [c, -s, -c, s][: n + 1]


def _tan_d(x, n):
    _require(x, lambda p: np.abs(np.cos(p)) > 1e-300, "tan")
    t = tan(x)
    s = 1.0 + t * t
    return [t, s, 2.0 * t * s, s * (2.0 + 6.0 * t * t)][: n + 1]


def _sqrt_d(x, n):
    _require(x, lambda p: p > 0, "sqrt")
    s = sqrt(x)
    r = 1.0 / s
    return [s, 0.5 * r, -0.25 * r * r * r, 0.375 * r * r * r * r * r][: n + 1]


def _recip_d(x, n):
    _require(x, lambda p: p != 0, "reciprocal")
    r = 1.0 / x
    return [r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r][: n + 1]


def _require(x, ok, name: str) -> None:
    p = _primal(x)
    if not np.all(ok(np.asarray(p))):
        raise JetDomainError(f"{name} evaluated outside its domain at value {p!r}")


def _elementary(np_fn, derivs_fn):
    def fn(x):
        if isinstance(x, Jet2):
            return compose(derivs_fn(x.value, x.order), x)
        return np_fn(x)

    return fn


def _np_log(x):
    _require(x, lambda p: p > 0, "ln")
    return np.log(x)


def _np_sqrt(x):
    _require(x, lambda p: p >= 0, "sqrt")
    return np.sqrt(x)


def _np_tan(x):
    _require(x, lambda p: np.abs(np.cos(p)) > 1e-300, "tan")
    return np.tan(x)


exp = _elementary(np.exp, _exp_d)
log = _elementary(_np_log, _log_d)
sinh = _elementary(np.sinh, _sinh_d)
cosh = _elementary(np.cosh, _cosh_d)
tanh = _elementary(np.tanh, _tanh_d)
sin = _elementary(np.sin, _sin_d)
cos = _elementary(np.cos, _cos_d)
tan = _elementary(_np_tan, _tan_d)
sqrt = _elementary(_np_sqrt, _sqrt_d)


def reciprocal(x):
    if isinstance(x, Jet2):
        return compose(_recip_d(x.value, x.order), x)
    _require(x, lambda p: p != 0, "reciprocal")
    return 1.0 / x


def powi(x, n: int):
    """Integer power x**n (negative n needs a nonzero value)."""
    if not isinstance(x, Jet2):
        if n < 0:
            _require(x, lambda p: p != 0, "powi")
        return x**n
    if n == 0:
        return Jet2.constant(1.0, x.base_point, x.order, x.level)
    if n < 0:
        return reciprocal(powi(x, -n))
    v = x.value
    derivs = []
    for k in range(x.order + 1):
        if k > n:
            derivs.append(0.0 * v)
            continue
        c = math.perm(n, k)
        derivs.append(c * v ** (n - k) if n - k > 0 else c + 0.0 * v)
    return compose(derivs, x)


ELEMENTARY = {
    "exp": exp,
    "ln": log,
    "sinh": sinh,
    "cosh": cosh,
    "tanh": tanh,
    "sin": sin,
    "cos": cos,
    "tan": tan,
    "sqrt": sqrt,
}


def jet_elementary(fn: str, a: Jet2, n: int | None = None) -> Jet2:
    """Apply a named elementary function (``powi`` takes the exponent ``n``)."""
    if fn == "powi":
        if n is None:
            raise JetError("powi needs an integer exponent")
        return powi(a, n)
    try:
        f = ELEMENTARY[fn]
    except KeyError:
        raise JetError(f"unknown elementary function {fn!r}") from None
    return f(a)


def jet_arith(op: str, a: Jet2, b: Jet2) -> Jet2:
    """Strict binary arithmetic: both jets must share base point and order."""
    if a.order != b.order:
        raise JetError(f"order mismatch: {a.order} vs {b.order}")
    if not _same_point(a.base_point, b.base_point):
        raise JetError(f"base point mismatch: {a.base_point} vs {b.base_point}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if np.any(np.asarray(_primal(b.value)) == 0):
            raise JetDomainError("division by a jet with zero value")
        return a / b
    raise JetError(f"unknown operation {op!r}")


# -- univariate jets -----------------------------------------------------------


@dataclass(frozen=True)
class Jet1:
    """Derivatives f, f', f'', f''' of a univariate function at ``t``."""

    t: float
    order: int
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.order + 1:
            raise JetError("Jet1 needs order + 1 coefficients")
        for c in self.coeffs:
            _check_finite(float(c) if np.isscalar(c) else c)

    @property
    def value(self):
        return self.coeffs[0]

    def __getitem__(self, k: int):
        return self.coeffs[k]

    @classmethod
    def from_jet2(cls, j: Jet2, t) -> "Jet1":
        return cls(t, j.order, tuple(j[(k, 0)] for k in range(j.order + 1)))


def eval_univariate(fn: Callable, t, order: int) -> Jet1:
    """Jet1 of a jet-capable univariate function at ``t``."""
    x = seed_u(t, 0.0, order)
    out = fn(x)
    if not isinstance(out, Jet2):
        out = Jet2.constant(out, x.base_point, order)
    return Jet1.from_jet2(out, t)


# -- finite-difference oracle (tests only) -------------------------------------

# fourth-order central stencils, keyed by derivative order
_STENCILS = {
    0: (np.array([0]), np.array([1.0])),
    1: (np.arange(-2, 3), np.array([1 / 12, -2 / 3, 0.0, 2 / 3, -1 / 12])),
    2: (np.arange(-2, 3), np.array([-1 / 12, 4 / 3, -5 / 2, 4 / 3, -1 / 12])),
    3: (np.arange(-3, 4), np.array([1 / 8, -1.0, 13 / 8, 0.0, -13 / 8, 1.0, -1 / 8])),
}


def fd_oracle(f: Callable, u0: float, v0: float, order: int, step: float = 1e-4) -> Jet2:
    """Central-difference estimate of every partial of ``f`` through ``order``.

    ``step`` is the spacing for first derivatives; a derivative of total
    order k uses ``step * 10**(k-1)`` to keep round-off below truncation,
    and fourth-order stencils at h and h/2 are Richardson-combined.
    """
    _check_order(order)
    if not step > 0:
        raise JetError("step must be positive")
    cache: dict[tuple[int, int], float] = {}

    def sample(a, b, h):
        key = (a, b, h)
        if key not in cache:
            val = float(f(u0 + a * h, v0 + b * h))
            if not math.isfinite(val):
                raise JetError(f"non-finite sample at ({u0 + a * h}, {v0 + b * h})")
            cache[key] = val
        return cache[key]

    def stencil(i, j, h):
        oi, wi = _STENCILS[i]
        oj, wj = _STENCILS[j]
        acc = 0.0
        for a, wa in zip(oi, wi):
            if wa == 0:
                continue
            for b, wb in zip(oj, wj):
                if wb == 0:
                    continue
                acc += wa * wb * sample(int(a), int(b), h)
        return acc / h ** (i + j)

    coeffs = {}
    for i, j in _INDICES[order]:
        k = i + j
        if k == 0:
            coeffs[(i, j)] = sample(0, 0, step)
            continue
        h = step * 10.0 ** (k - 1)
        # one Richardson step on the h^4 error term
        coeffs[(i, j)] = (16.0 * stencil(i, j, h / 2) - stencil(i, j, h)) / 15.0
    return Jet2((u0, v0), order, coeffs)
