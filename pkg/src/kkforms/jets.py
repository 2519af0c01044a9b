"""Exact higher-order derivative propagation for scalar expressions.

Curvature computations need metric components together with their first,
second and third partial derivatives.  Finite differences lose six to eight
significant digits by third order, which would drown the residuals this
package exists to measure, so derivatives are instead propagated exactly
through every arithmetic operation: a :class:`Jet` carries the value of a
scalar expression at a point together with dense arrays of all its partial
derivatives up to a requested order (at most three).

Layout conventions
------------------
For a jet ``j`` of a function ``f`` of ``dim`` variables::

    j.f           value of f
    j.d1[a]       d_a f
    j.d2[a, b]    d_a d_b f        (symmetric)
    j.d3[a, b, c] d_a d_b d_c f    (totally symmetric)

Mixed partials are symmetric *by construction* -- every operation below
only ever manipulates symmetric arrays -- so downstream consumers never
need to symmetrize.

The module-level functions (:func:`sqrt`, :func:`tanh`, ...) accept both
jets and plain floats, so the same closed-form expression can be evaluated
numerically (e.g. for profile tables) and differentiated (for curvature)
without duplicating the formula.
"""

from __future__ import annotations

import math
from typing import Union

import numpy as np

__all__ = [
    "Jet",
    "variable",
    "constant",
    "sqrt",
    "exp",
    "log",
    "sin",
    "cos",
    "sinh",
    "cosh",
    "tanh",
    "sech",
    "atanh",
]

Scalar = Union[int, float, np.floating]


def _sym3(H: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Symmetrized product of a symmetric matrix and a vector.

    ``_sym3(H, v)[a, b, c] = H[a,b] v[c] + H[a,c] v[b] + H[b,c] v[a]``.
    This is the shape third-order Leibniz and chain-rule terms take.
    """
    t = np.multiply.outer(H, v)
    return t + t.transpose(0, 2, 1) + t.transpose(2, 0, 1)


class Jet:
    """Truncated Taylor data of a scalar expression at a single point.

    Arithmetic (`+`, `-`, `*`, `/`, integer `**`) mixes jets with plain
    numbers; the result order is the minimum of the operand orders.  Jets
    are immutable: operations return new instances and never mutate the
    stored arrays.
    """

    __slots__ = ("dim", "order", "f", "d1", "d2", "d3")

    def __init__(self, dim, f, d1=None, d2=None, d3=None, order=None):
        self.dim = int(dim)
        self.f = float(f)
        if order is None:
            order = 3 if d3 is not None else 2 if d2 is not None else 1 if d1 is not None else 0
        self.order = order
        self.d1 = d1 if order >= 1 else None
        self.d2 = d2 if order >= 2 else None
        self.d3 = d3 if order >= 3 else None
        if order >= 1 and self.d1 is None:
            self.d1 = np.zeros(dim)
        if order >= 2 and self.d2 is None:
            self.d2 = np.zeros((dim, dim))
        if order >= 3 and self.d3 is None:
            self.d3 = np.zeros((dim, dim, dim))

    @classmethod
    def _raw(cls, dim, order, f):
        """Internal fast constructor; caller fills the derivative slots."""
        j = cls.__new__(cls)
        j.dim = dim
        j.order = order
        j.f = f
        j.d1 = None
        j.d2 = None
        j.d3 = None
        return j

    # -- construction -------------------------------------------------

    @staticmethod
    def constant(value: Scalar, dim: int, order: int = 3) -> "Jet":
        return Jet(dim, value, order=order)

    @staticmethod
    def variable(value: Scalar, index: int, dim: int, order: int = 3) -> "Jet":
        j = Jet(dim, value, order=order)
        if order >= 1:
            j.d1[index] = 1.0
        return j

    # -- helpers ------------------------------------------------------

    def _coerce(self, other) -> "Jet":
        if isinstance(other, Jet):
            if other.dim != self.dim:
                raise ValueError(f"jet dimension mismatch: {self.dim} vs {other.dim}")
            return other
        return Jet.constant(other, self.dim, order=self.order)

    def chain(self, f0: float, f1: float, f2: float = 0.0, f3: float = 0.0) -> "Jet":
        """Apply a smooth unary function given its derivatives at ``self.f``.

        ``f0 = h(u)``, ``f1 = h'(u)``, ... evaluated at ``u = self.f``.
        """
        n, o = self.dim, self.order
        out = Jet._raw(n, o, float(f0))
        if o >= 1:
            out.d1 = f1 * self.d1
        if o >= 2:
            out.d2 = f1 * self.d2 + f2 * np.multiply.outer(self.d1, self.d1)
        if o >= 3:
            u1, u2 = self.d1, self.d2
            out.d3 = (
                f1 * self.d3
                + f2 * _sym3(u2, u1)
                + f3 * np.multiply.outer(np.multiply.outer(u1, u1), u1)
            )
        return out

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        w = self._coerce(other)
        o = min(self.order, w.order)
        out = Jet._raw(self.dim, o, self.f + w.f)
        if o >= 1:
            out.d1 = self.d1 + w.d1
        if o >= 2:
            out.d2 = self.d2 + w.d2
        if o >= 3:
            out.d3 = self.d3 + w.d3
        return out

    __radd__ = __add__

    def __neg__(self):
        out = Jet._raw(self.dim, self.order, -self.f)
        if self.order >= 1:
            out.d1 = -self.d1
        if self.order >= 2:
            out.d2 = -self.d2
        if self.order >= 3:
            out.d3 = -self.d3
        return out

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        w = self._coerce(other)
        o = min(self.order, w.order)
        out = Jet._raw(self.dim, o, self.f * w.f)
        if o >= 1:
            out.d1 = self.d1 * w.f + self.f * w.d1
        if o >= 2:
            out.d2 = (
                self.d2 * w.f
                + self.f * w.d2
                + np.multiply.outer(self.d1, w.d1)
                + np.multiply.outer(w.d1, self.d1)
            )
        if o >= 3:
            out.d3 = (
                self.d3 * w.f
                + self.f * w.d3
                + _sym3(self.d2, w.d1)
                + _sym3(w.d2, self.d1)
            )
        return out

    __rmul__ = __mul__

    def reciprocal(self) -> "Jet":
        u = self.f
        if u == 0.0:
            raise ZeroDivisionError("jet reciprocal at zero value")
        return self.chain(1.0 / u, -1.0 / u**2, 2.0 / u**3, -6.0 / u**4)

    def __truediv__(self, other):
        return self * self._coerce(other).reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, n):
        if not isinstance(n, int):
            raise TypeError("jet powers must be integers; use sqrt() for half powers")
        if n < 0:
            return (self ** (-n)).reciprocal()
        out = Jet.constant(1.0, self.dim, order=self.order)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def __repr__(self):  # pragma: no cover - debugging aid
        return f"Jet(dim={self.dim}, order={self.order}, f={self.f!r})"


def variable(value: Scalar, index: int, dim: int, order: int = 3) -> Jet:
    return Jet.variable(value, index, dim, order)


def constant(value: Scalar, dim: int, order: int = 3) -> Jet:
    return Jet.constant(value, dim, order)


# -- unary functions: accept jets or plain numbers ---------------------


def sqrt(x):
    if isinstance(x, Jet):
        v = math.sqrt(x.f)
        return x.chain(v, 0.5 / v, -0.25 / v**3, 0.375 / v**5)
    return math.sqrt(x)


def exp(x):
    if isinstance(x, Jet):
        e = math.exp(x.f)
        return x.chain(e, e, e, e)
    return math.exp(x)


def log(x):
    if isinstance(x, Jet):
        u = x.f
        return x.chain(math.log(u), 1.0 / u, -1.0 / u**2, 2.0 / u**3)
    return math.log(x)


def sin(x):
    if isinstance(x, Jet):
        s, c = math.sin(x.f), math.cos(x.f)
        return x.chain(s, c, -s, -c)
    return math.sin(x)


def cos(x):
    if isinstance(x, Jet):
        s, c = math.sin(x.f), math.cos(x.f)
        return x.chain(c, -s, -c, s)
    return math.cos(x)


def sinh(x):
    if isinstance(x, Jet):
        s, c = math.sinh(x.f), math.cosh(x.f)
        return x.chain(s, c, s, c)
    return math.sinh(x)


def cosh(x):
    if isinstance(x, Jet):
        s, c = math.sinh(x.f), math.cosh(x.f)
        return x.chain(c, s, c, s)
    return math.cosh(x)


def tanh(x):
    if isinstance(x, Jet):
        t = math.tanh(x.f)
        u = 1.0 - t * t
        return x.chain(t, u, -2.0 * t * u, -2.0 * u * (1.0 - 3.0 * t * t))
    return math.tanh(x)


def sech(x):
    if isinstance(x, Jet):
        t = math.tanh(x.f)
        s = 1.0 / math.cosh(x.f)
        return x.chain(s, -s * t, s * (2.0 * t * t - 1.0), s * t * (5.0 - 6.0 * t * t))
    return 1.0 / math.cosh(x)


def atanh(x):
    if isinstance(x, Jet):
        u = x.f
        w = 1.0 - u * u
        return x.chain(math.atanh(u), 1.0 / w, 2.0 * u / w**2, (2.0 + 6.0 * u * u) / w**3)
    return math.atanh(x)
