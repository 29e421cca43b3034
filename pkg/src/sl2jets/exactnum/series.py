"""Truncated Taylor series in (z - base_point) over Q(i)."""

from math import factorial

from ..errors import SingularityError, UsageError
from .poly import Poly, RatFun
from .scalar import ONE, ZERO, gr


class TruncSeries:
    """Taylor coefficients c_0..c_k of a germ at base_point, truncated at order k."""

    __slots__ = ("base_point", "order", "coeffs")

    def __init__(self, coeffs, base_point=0, order=None):
        cs = [gr(c) for c in coeffs]
        if order is None:
            order = len(cs) - 1
        if order < 0:
            raise UsageError("series order must be >= 0")
        cs = (cs + [ZERO] * (order + 1))[: order + 1]
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "order", int(order))
        object.__setattr__(self, "base_point", gr(base_point))

    def __setattr__(self, name, value):
        raise AttributeError("TruncSeries is immutable")

    @classmethod
    def const(cls, c, base_point=0, order=0):
        return cls([c], base_point, order)

    @classmethod
    def variable(cls, base_point, order):
        """The germ of z itself: base_point + t."""
        return cls([base_point, ONE], base_point, order)

    @classmethod
    def from_raw_derivatives(cls, derivs, base_point=0):
        return cls([gr(d) / factorial(i) for i, d in enumerate(derivs)], base_point)

    @classmethod
    def expand(cls, f, base_point, order):
        """Taylor expansion of a Poly or RatFun about base_point."""
        if isinstance(f, Poly):
            return cls(f.shift(base_point).coeffs, base_point, order)
        if isinstance(f, RatFun):
            num = cls(f.num.shift(base_point).coeffs, base_point, order)
            den = cls(f.den.shift(base_point).coeffs, base_point, order)
            return series_mul(num, series_reciprocal(den))
        return cls.const(f, base_point, order)

    def raw_derivatives(self):
        return [c * factorial(i) for i, c in enumerate(self.coeffs)]

    def _check(self, other):
        if not isinstance(other, TruncSeries):
            raise UsageError("expected a TruncSeries")
        if other.order != self.order or other.base_point != self.base_point:
            raise UsageError(
                f"series mismatch: order {self.order} at {self.base_point} vs "
                f"order {other.order} at {other.base_point}")

    def __add__(self, other):
        if not isinstance(other, TruncSeries):
            other = TruncSeries.const(other, self.base_point, self.order)
        self._check(other)
        return TruncSeries([a + b for a, b in zip(self.coeffs, other.coeffs)],
                           self.base_point, self.order)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries([-a for a in self.coeffs], self.base_point, self.order)

    def __sub__(self, other):
        if not isinstance(other, TruncSeries):
            other = TruncSeries.const(other, self.base_point, self.order)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TruncSeries):
            return series_mul(self, other)
        c = gr(other)
        return TruncSeries([a * c for a in self.coeffs], self.base_point, self.order)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            return series_reciprocal(self) ** (-n)
        out = TruncSeries.const(1, self.base_point, self.order)
        base = self
        while n:
            if n & 1:
                out = series_mul(out, base)
            n >>= 1
            if n:
                base = series_mul(base, base)
        return out

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return (self.order == other.order and self.base_point == other.base_point
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.base_point, self.order, self.coeffs))

    def deriv(self):
        """Derivative, keeping the order (top coefficient is unknown, set to 0)."""
        cs = [self.coeffs[i + 1] * (i + 1) for i in range(self.order)] + [ZERO]
        return TruncSeries(cs, self.base_point, self.order)

    def shift_order(self, order):
        return TruncSeries(self.coeffs, self.base_point, order)

    def __repr__(self):
        return f"TruncSeries({[str(c) for c in self.coeffs]}, base_point={self.base_point})"


def series_mul(f, g):
    f._check(g)
    k = f.order
    a, b = f.coeffs, g.coeffs
    out = []
    for n in range(k + 1):
        acc = ZERO
        for i in range(n + 1):
            if a[i] and b[n - i]:
                acc = acc + a[i] * b[n - i]
        out.append(acc)
    return TruncSeries(out, f.base_point, k)


def series_reciprocal(f):
    c0 = f.coeffs[0]
    if not c0:
        raise SingularityError(f"series has zero constant term at {f.base_point}")
    inv0 = c0.inverse()
    out = [inv0]
    for n in range(1, f.order + 1):
        acc = ZERO
        for i in range(1, n + 1):
            if f.coeffs[i]:
                acc = acc + f.coeffs[i] * out[n - i]
        out.append(-acc * inv0)
    return TruncSeries(out, f.base_point, f.order)


def series_compose(f, g):
    """f o g where f is expanded at g(base) and the result lives at g's base point."""
    if not isinstance(f, TruncSeries) or not isinstance(g, TruncSeries):
        raise UsageError("series_compose expects two TruncSeries")
    if f.order != g.order:
        raise UsageError(f"order mismatch {f.order} vs {g.order}")
    if f.base_point != g.coeffs[0]:
        raise UsageError(
            f"base point mismatch: f at {f.base_point}, g(0) = {g.coeffs[0]}")
    k = g.order
    h = TruncSeries([ZERO] + list(g.coeffs[1:]), g.base_point, k)
    acc = TruncSeries.const(f.coeffs[k], g.base_point, k)
    for c in reversed(f.coeffs[:k]):
        acc = series_mul(acc, h) + c
    return acc
