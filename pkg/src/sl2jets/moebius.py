"""SL(2) elements acting on the affine chart z of the projective line.

The point z is the line through (z, 1); g sends it to the line through
g(z, 1), i.e. to (az + b)/(cz + d).  A weight-n section transforms by
s(z) = mu_n(g, z) * s~(g z) with mu_n(g, z) = (cz + d)^n.
"""

from .errors import ChartEscapeError, UsageError
from .exactnum import ONE, ZERO, GaussianRational, format_scalar, gr, parse_scalar
from .sampling import random_nonzero_scalar, random_scalar, stream

STANDARD_BASE_POINTS = (ZERO, ONE, gr(2))


class MoebiusMap:
    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d, check=True):
        a, b, c, d = gr(a), gr(b), gr(c), gr(d)
        if check and a * d - b * c != ONE:
            raise UsageError(f"determinant {a * d - b * c} != 1")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("MoebiusMap is immutable")

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    @classmethod
    def translation(cls, t):
        return cls(1, t, 0, 1)

    @classmethod
    def diagonal(cls, t):
        t = gr(t)
        return cls(t, 0, 0, t.inverse())

    @classmethod
    def inversion(cls):
        return cls(0, 1, -1, 0)

    @classmethod
    def from_matrix(cls, m):
        (a, b), (c, d) = m
        return cls(a, b, c, d)

    def matrix(self):
        return [[self.a, self.b], [self.c, self.d]]

    def __matmul__(self, other):
        return compose(self, other)

    def __eq__(self, other):
        if not isinstance(other, MoebiusMap):
            return NotImplemented
        return (self.a, self.b, self.c, self.d) == (other.a, other.b, other.c, other.d)

    def __hash__(self):
        return hash((self.a, self.b, self.c, self.d))

    def __repr__(self):
        return "MoebiusMap([[{}, {}], [{}, {}]])".format(
            *(format_scalar(x) for x in (self.a, self.b, self.c, self.d)))

    def to_json(self):
        return {k: format_scalar(getattr(self, k)) for k in "abcd"}

    @classmethod
    def from_json(cls, obj):
        try:
            return cls(*(parse_scalar(str(obj[k])) for k in "abcd"))
        except KeyError as exc:
            raise UsageError(f"Moebius map JSON lacks entry {exc}") from exc


def _denominator(g, z):
    den = g.c * z + g.d
    if not den:
        raise ChartEscapeError(f"{g!r} sends {z} to infinity")
    return den


def act(g, z):
    z = gr(z)
    return (g.a * z + g.b) / _denominator(g, z)


def compose(g2, g1):
    """The product g2 g1 (apply g1 first)."""
    return MoebiusMap(g2.a * g1.a + g2.b * g1.c, g2.a * g1.b + g2.b * g1.d,
                      g2.c * g1.a + g2.d * g1.c, g2.c * g1.b + g2.d * g1.d, check=False)


def inverse(g):
    return MoebiusMap(g.d, -g.b, -g.c, g.a, check=False)


def automorphy(n, g, z):
    """mu_n(g, z) = (cz + d)^n."""
    return _denominator(g, gr(z)) ** int(n)


def derivative(g, z):
    """d/dz of the Moebius map, equal to (cz + d)^-2."""
    return _denominator(g, gr(z)) ** -2


def random_element(seed, height=5, avoid=STANDARD_BASE_POINTS, real=False):
    """Random SL(2, Q(i)) element, rejecting any g with cz0 + d = 0 for z0 in avoid."""
    if height < 1:
        raise UsageError("height must be >= 1")
    rng = stream(seed, "moebius")
    avoid = [gr(z) for z in avoid]
    while True:
        a = random_nonzero_scalar(rng, height, real)
        b = random_scalar(rng, height, real)
        c = random_scalar(rng, height, real)
        d = (ONE + b * c) / a
        g = MoebiusMap(a, b, c, d, check=False)
        if all(c * z + d for z in avoid):
            return g


def is_in_chart(g, z):
    return bool(g.c * gr(z) + g.d)


__all__ = ["MoebiusMap", "act", "compose", "inverse", "automorphy", "derivative",
           "random_element", "is_in_chart", "STANDARD_BASE_POINTS", "GaussianRational"]
