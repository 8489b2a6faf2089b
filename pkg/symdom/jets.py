"""
Second-order forward-mode differentiation

A Jet carries a value together with its gradient and Hessian with respect
to a fixed set of independent variables. Basis evaluators in symdom only use
arithmetic and the elementary functions below, so passing Jets through them
yields exact first and second partial derivatives.
"""

from typing import Tuple, Union

import numpy as np

ArrayLike = Union[float, np.ndarray]


class Jet:
    """Truncated second-order Taylor expansion over arrays of points

    Shapes: ``val`` is (...), ``grad`` is (..., k) and ``hess`` is (..., k, k)
    for k independent variables.
    """

    __slots__ = ("val", "grad", "hess")
    # numpy defers binary operators to Jet instead of broadcasting elementwise
    __array_ufunc__ = None

    def __init__(self, val: np.ndarray, grad: np.ndarray, hess: np.ndarray):
        self.val = val
        self.grad = grad
        self.hess = hess

    @classmethod
    def variables(cls, *coords: ArrayLike) -> Tuple["Jet", ...]:
        """Seed independent variables at the given coordinates"""
        vals = np.broadcast_arrays(*[np.asarray(c, dtype=float) for c in coords])
        k = len(vals)
        shape = vals[0].shape
        seeded = []
        for i, v in enumerate(vals):
            grad = np.zeros(shape + (k,))
            grad[..., i] = 1.0
            seeded.append(cls(np.array(v, dtype=float), grad, np.zeros(shape + (k, k))))
        return tuple(seeded)

    @property
    def nvars(self) -> int:
        return self.grad.shape[-1]

    def _scaled(self, c: ArrayLike) -> "Jet":
        c = np.asarray(c, dtype=float)
        return Jet(self.val * c, self.grad * c[..., None], self.hess * c[..., None, None])

    def _unary(self, f0: np.ndarray, f1: np.ndarray, f2: np.ndarray) -> "Jet":
        g = self.grad
        outer = g[..., :, None] * g[..., None, :]
        return Jet(
            f0,
            f1[..., None] * g,
            f2[..., None, None] * outer + f1[..., None, None] * self.hess,
        )

    def __neg__(self) -> "Jet":
        return Jet(-self.val, -self.grad, -self.hess)

    def __pos__(self) -> "Jet":
        return self

    def __add__(self, other) -> "Jet":
        if isinstance(other, Jet):
            return Jet(self.val + other.val, self.grad + other.grad, self.hess + other.hess)
        other = np.asarray(other, dtype=float)
        val = self.val + other
        if val.shape != self.val.shape:
            grad = np.broadcast_to(self.grad, val.shape + self.grad.shape[-1:])
            hess = np.broadcast_to(self.hess, val.shape + self.hess.shape[-2:])
            return Jet(val, grad.copy(), hess.copy())
        return Jet(val, self.grad, self.hess)

    __radd__ = __add__

    def __sub__(self, other) -> "Jet":
        return self + (-other)

    def __rsub__(self, other) -> "Jet":
        return (-self) + other

    def __mul__(self, other) -> "Jet":
        if not isinstance(other, Jet):
            return self._scaled(other)
        a, b = self, other
        ga, gb = a.grad, b.grad
        return Jet(
            a.val * b.val,
            ga * b.val[..., None] + gb * a.val[..., None],
            a.hess * b.val[..., None, None]
            + b.hess * a.val[..., None, None]
            + ga[..., :, None] * gb[..., None, :]
            + gb[..., :, None] * ga[..., None, :],
        )

    __rmul__ = __mul__

    def reciprocal(self) -> "Jet":
        x = self.val
        return self._unary(1.0 / x, -1.0 / x**2, 2.0 / x**3)

    def __truediv__(self, other) -> "Jet":
        if isinstance(other, Jet):
            return self * other.reciprocal()
        return self._scaled(1.0 / np.asarray(other, dtype=float))

    def __rtruediv__(self, other) -> "Jet":
        return self.reciprocal() * other

    def __pow__(self, p) -> "Jet":
        if isinstance(p, Jet):
            return exp(log(self) * p)
        p = float(p)
        if p == 0.0:
            return self * 0.0 + 1.0
        if p.is_integer() and p > 0:
            out = self
            for _ in range(int(p) - 1):
                out = out * self
            return out
        x = self.val
        return self._unary(x**p, p * x ** (p - 1.0), p * (p - 1.0) * x ** (p - 2.0))

    def __abs__(self) -> "Jet":
        return self * np.sign(self.val)

    def __repr__(self) -> str:
        return f"Jet(val={self.val!r})"


def value_of(x) -> np.ndarray:
    """Plain values of a Jet or array"""
    if isinstance(x, Jet):
        return x.val
    return np.asarray(x, dtype=float)


def is_jet(x) -> bool:
    return isinstance(x, Jet)


def sqrt(x):
    if isinstance(x, Jet):
        r = np.sqrt(x.val)
        return x._unary(r, 0.5 / r, -0.25 / (r * x.val))
    return np.sqrt(x)


def exp(x):
    if isinstance(x, Jet):
        e = np.exp(x.val)
        return x._unary(e, e, e)
    return np.exp(x)


def log(x):
    if isinstance(x, Jet):
        return x._unary(np.log(x.val), 1.0 / x.val, -1.0 / x.val**2)
    return np.log(x)


def sin(x):
    if isinstance(x, Jet):
        s, c = np.sin(x.val), np.cos(x.val)
        return x._unary(s, c, -s)
    return np.sin(x)


def cos(x):
    if isinstance(x, Jet):
        s, c = np.sin(x.val), np.cos(x.val)
        return x._unary(c, -s, -c)
    return np.cos(x)


def power(x, p: float):
    if isinstance(x, Jet):
        return x**p
    return np.power(x, p)


def partials(f, *coords: ArrayLike) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Value, gradient and Hessian of ``f`` at the given coordinates"""
    out = f(*Jet.variables(*coords))
    if not isinstance(out, Jet):
        shape = np.broadcast(*[np.asarray(c, dtype=float) for c in coords]).shape
        k = len(coords)
        val = np.broadcast_to(np.asarray(out, dtype=float), shape).copy()
        return val, np.zeros(shape + (k,)), np.zeros(shape + (k, k))
    return out.val, out.grad, out.hess
