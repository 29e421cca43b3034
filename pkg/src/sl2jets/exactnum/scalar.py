"""Gaussian rationals: a + b*i with a, b in Q."""

import re
from fractions import Fraction
from numbers import Integral, Rational

from gmpy2 import mpq

from ..errors import UsageError

_MPQ = type(mpq(0))
_ZERO = mpq(0)
_ONE = mpq(1)


def _q(x):
    if isinstance(x, _MPQ):
        return x
    if isinstance(x, (Integral, Fraction)):
        return mpq(x)
    if isinstance(x, Rational):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        return mpq(x.strip())
    raise TypeError(f"cannot coerce {type(x).__name__} to an exact rational")


class GaussianRational:
    """Immutable exact element of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussianRational):
            if im:
                re = re + GaussianRational(0, 1) * GaussianRational(im)
            object.__setattr__(self, "re", re.re)
            object.__setattr__(self, "im", re.im)
            return
        if isinstance(re, complex):
            raise TypeError("floats are not exact; pass rationals")
        if isinstance(re, str) and im == 0:
            g = parse_scalar(re)
            object.__setattr__(self, "re", g.re)
            object.__setattr__(self, "im", g.im)
            return
        object.__setattr__(self, "re", _q(re))
        object.__setattr__(self, "im", _q(im))

    @classmethod
    def _raw(cls, re, im):
        obj = object.__new__(cls)
        object.__setattr__(obj, "re", re)
        object.__setattr__(obj, "im", im)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    def __reduce__(self):
        return (GaussianRational, (str(self),))

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational._raw(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational._raw(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        a, b, c, d = self.re, self.im, o.re, o.im
        if not b and not d:
            return GaussianRational._raw(a * c, _ZERO)
        return GaussianRational._raw(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __neg__(self):
        return GaussianRational._raw(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, n):
        if not isinstance(n, Integral):
            return NotImplemented
        n = int(n)
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        result = ONE
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def inverse(self):
        a, b = self.re, self.im
        norm = a * a + b * b
        if not norm:
            raise ZeroDivisionError("division by zero in Q(i)")
        return GaussianRational._raw(a / norm, -b / norm)

    def conjugate(self):
        return GaussianRational._raw(self.re, -self.im)

    def norm(self):
        return self.re * self.re + self.im * self.im

    def is_zero(self):
        return not self.re and not self.im

    def is_real(self):
        return not self.im

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def height(self):
        """Largest absolute numerator or denominator appearing in re, im."""
        return max(abs(self.re.numerator), self.re.denominator,
                   abs(self.im.numerator), self.im.denominator)

    def __str__(self):
        return format_scalar(self)

    def __repr__(self):
        return f"GaussianRational('{format_scalar(self)}')"


def _coerce(x):
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (Integral, Rational, _MPQ)):
        return GaussianRational._raw(_q(x), _ZERO)
    return None


def gr(x=0, im=0):
    """Convenience constructor accepting ints, Fractions, literals or GaussianRational."""
    if isinstance(x, GaussianRational) and not im:
        return x
    return GaussianRational(x, im)


ZERO = GaussianRational._raw(_ZERO, _ZERO)
ONE = GaussianRational._raw(_ONE, _ZERO)
I = GaussianRational._raw(_ZERO, _ONE)

_RAT = r"\d+(?:/\d+)?"
_LIT = re.compile(
    rf"^(?P<re>[+-]?{_RAT}(?!\d|/|i))?(?:(?P<isign>[+-]?)(?P<im>{_RAT})?i)?$"
)


def _rat(sign, body):
    q = mpq(body)
    return -q if sign == "-" else q


def parse_scalar(text):
    """Parse the literal syntax: "3/4+1/2i", "-2", "0+1i", "i", "-1/3i"."""
    if isinstance(text, GaussianRational):
        return text
    if not isinstance(text, str):
        g = _coerce(text)
        if g is None:
            raise UsageError(f"not a scalar: {text!r}")
        return g
    s = text.strip()
    m = _LIT.match(s)
    if not s or not m:
        raise UsageError(f"bad scalar literal {text!r}")
    re_part, isign, im_part = m.group("re"), m.group("isign"), m.group("im")
    has_im = s.endswith("i")
    if re_part is None and not has_im:
        raise UsageError(f"bad scalar literal {text!r}")
    try:
        re_val = _ZERO
        if re_part is not None:
            sign = "-" if re_part.startswith("-") else "+"
            re_val = _rat(sign, re_part.lstrip("+-"))
        im_val = _ZERO
        if has_im:
            im_val = _rat(isign, im_part) if im_part else (mpq(-1) if isign == "-" else _ONE)
    except ZeroDivisionError as exc:
        raise UsageError(f"bad scalar literal {text!r}") from exc
    return GaussianRational._raw(re_val, im_val)


def _fmt_q(q):
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(x):
    x = gr(x)
    if not x.im:
        return _fmt_q(x.re)
    sign = "-" if x.im < 0 else "+"
    return f"{_fmt_q(x.re)}{sign}{_fmt_q(abs(x.im))}i"
