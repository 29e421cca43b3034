"""Univariate polynomials and rational functions over Q(i)."""

from ..errors import UsageError
from .scalar import ONE, ZERO, GaussianRational, format_scalar, gr


def _trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return tuple(coeffs)


class Poly:
    """Polynomial in z, coefficients stored low degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        if isinstance(coeffs, Poly):
            coeffs = coeffs.coeffs
        elif not isinstance(coeffs, (list, tuple)):
            coeffs = (coeffs,)
        object.__setattr__(self, "coeffs", _trim(gr(c) for c in coeffs))

    @classmethod
    def z(cls):
        return cls((ZERO, ONE))

    @classmethod
    def const(cls, c):
        return cls((gr(c),))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @property
    def degree(self):
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def lead(self):
        return self.coeffs[-1] if self.coeffs else ZERO

    def __call__(self, z):
        z = gr(z)
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def __add__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return Poly([(a[i] if i < len(a) else ZERO) + (b[i] if i < len(b) else ZERO)
                     for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [ZERO] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise UsageError("negative power of a polynomial")
        out = Poly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def scale(self, c):
        c = gr(c)
        return Poly([c * x for x in self.coeffs])

    def deriv(self):
        return Poly([c * i for i, c in enumerate(self.coeffs)][1:])

    def divmod(self, other):
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        inv_lead = other.lead().inverse()
        quot = [ZERO] * max(len(rem) - db, 0)
        for i in range(len(rem) - 1, db - 1, -1):
            c = rem[i] * inv_lead
            if not c:
                continue
            quot[i - db] = c
            for j, y in enumerate(other.coeffs):
                rem[i - db + j] = rem[i - db + j] - c * y
        return Poly(quot), Poly(rem[:db] if db > 0 else [])

    def monic(self):
        if not self:
            return self
        return self.scale(self.lead().inverse())

    def compose(self, other):
        acc = Poly()
        for c in reversed(self.coeffs):
            acc = acc * other + Poly.const(c)
        return acc

    def shift(self, z0):
        """Coefficients of self in powers of (z - z0)."""
        return self.compose(Poly((gr(z0), ONE)))

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            cs = format_scalar(c)
            if c.im:
                cs = f"({cs})"
            mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            terms.append(cs if not mono else (mono if cs == "1" else f"{cs}*{mono}"))
        return " + ".join(terms)


def _as_poly(x):
    if isinstance(x, Poly):
        return x
    if isinstance(x, RatFun):
        return None
    try:
        return Poly.const(x)
    except (TypeError, UsageError):
        return None


def poly_gcd(a, b):
    while b:
        _, r = a.divmod(b)
        a, b = b, r
    return a.monic()


class RatFun:
    """Reduced quotient num/den of polynomials; den is monic."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = num if isinstance(num, Poly) else Poly.const(num)
        den = Poly.const(1) if den is None else (den if isinstance(den, Poly) else Poly.const(den))
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not num:
            num, den = Poly(), Poly.const(1)
        elif den.degree > 0:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, _ = num.divmod(g)
                den, _ = den.divmod(g)
        lead = den.lead()
        if lead != ONE:
            inv = lead.inverse()
            num, den = num.scale(inv), den.scale(inv)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RatFun is immutable")

    @staticmethod
    def _lift(x):
        if isinstance(x, RatFun):
            return x
        if isinstance(x, Poly):
            return RatFun(x)
        try:
            return RatFun(Poly.const(x))
        except (TypeError, UsageError):
            return None

    def is_polynomial(self):
        return self.den.degree == 0

    def __call__(self, z):
        d = self.den(z)
        if not d:
            from ..errors import SingularityError
            raise SingularityError(f"pole of rational function at {z}")
        return self.num(z) / d

    def __add__(self, other):
        o = RatFun._lift(other)
        if o is None:
            return NotImplemented
        return RatFun(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFun(-self.num, self.den)

    def __sub__(self, other):
        o = RatFun._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = RatFun._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = RatFun._lift(other)
        if o is None:
            return NotImplemented
        return RatFun(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = RatFun._lift(other)
        if o is None:
            return NotImplemented
        if not o.num:
            raise ZeroDivisionError("division by the zero rational function")
        return RatFun(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = RatFun._lift(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n):
        if n >= 0:
            return RatFun(self.num ** n, self.den ** n)
        return RatFun(self.den ** (-n), self.num ** (-n))

    def deriv(self):
        return RatFun(self.num.deriv() * self.den - self.num * self.den.deriv(), self.den * self.den)

    def __eq__(self, other):
        o = RatFun._lift(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return bool(self.num)

    def __repr__(self):
        return f"RatFun({self})"

    def __str__(self):
        if self.is_polynomial():
            return str(self.num)
        return f"({self.num}) / ({self.den})"


def interpolate(points, values):
    """Lagrange interpolation (Newton form) through distinct points."""
    pts = [gr(p) for p in points]
    vals = [gr(v) for v in values]
    n = len(pts)
    coef = list(vals)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (pts[i] - pts[i - j])
    out = Poly.const(coef[-1]) if coef else Poly()
    for i in range(n - 2, -1, -1):
        out = out * Poly((-pts[i], ONE)) + Poly.const(coef[i])
    return out


def as_ratfun(x):
    r = RatFun._lift(x)
    if r is None:
        raise UsageError(f"cannot interpret {x!r} as a rational function")
    return r


__all__ = ["Poly", "RatFun", "poly_gcd", "interpolate", "as_ratfun", "GaussianRational"]
