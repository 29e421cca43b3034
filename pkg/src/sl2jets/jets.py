"""Jets of sections of E x L^n in the affine chart.

A k-jet of a rank-r section at z0 is stored as k+1 blocks of r raw
derivatives: slot j*r + e holds the j-th derivative of component e.
Transition matrices act in pull-back orientation: for s(z) = mu_n(g, z) s~(g z)
the matrix T(g, z0) sends the jet of s~ at g z0 to the jet of s at z0, so
T(g2 g1, z0) = T(g1, z0) T(g2, g1 z0).
"""

from math import comb, factorial

from .errors import UsageError
from .exactnum import (
    ONE, ZERO, Poly, RatFun, TruncSeries, gr, identity, inverse as mat_inverse,
    matadd, matmul, matscale, matsub, parse_scalar, series_compose, series_mul, zeros,
)
from .moebius import act, automorphy
from .rep import SymVector


class JetVector:
    __slots__ = ("order", "rank", "base_point", "values")

    def __init__(self, values, order=None, rank=1, base_point=0):
        values = tuple(gr(v) for v in values)
        if order is None:
            order = len(values) // rank - 1
        if len(values) != (order + 1) * rank:
            raise UsageError(
                f"jet of order {order} and rank {rank} needs {(order + 1) * rank} values")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "base_point", gr(base_point))

    def __setattr__(self, name, value):
        raise AttributeError("JetVector is immutable")

    def block(self, j):
        r = self.rank
        return self.values[j * r:(j + 1) * r]

    def __eq__(self, other):
        if not isinstance(other, JetVector):
            return NotImplemented
        return (self.order, self.rank, self.base_point, self.values) == (
            other.order, other.rank, other.base_point, other.values)

    def __hash__(self):
        return hash((self.order, self.rank, self.base_point, self.values))

    def is_zero(self):
        return not any(self.values)

    def to_json(self):
        return {"order": self.order, "rank": self.rank, "base_point": str(self.base_point),
                "values": [str(v) for v in self.values]}

    @classmethod
    def from_json(cls, obj):
        return cls([parse_scalar(str(v)) for v in obj["values"]], obj.get("order"),
                   obj.get("rank", 1), parse_scalar(str(obj.get("base_point", "0"))))

    def __repr__(self):
        return (f"JetVector(order={self.order}, rank={self.rank}, z0={self.base_point}, "
                f"values={[str(v) for v in self.values]})")


class FlatConnectionSpec:
    """The connection d + A(z) dz on the trivial rank-r bundle; A has polynomial entries."""

    __slots__ = ("rank", "matrix")

    def __init__(self, matrix):
        rows = [[c if isinstance(c, (Poly, RatFun)) else Poly(c) for c in row] for row in matrix]
        if any(len(row) != len(rows) for row in rows):
            raise UsageError("connection matrix must be square")
        object.__setattr__(self, "rank", len(rows))
        object.__setattr__(self, "matrix", tuple(tuple(r) for r in rows))

    def __setattr__(self, name, value):
        raise AttributeError("FlatConnectionSpec is immutable")

    @classmethod
    def zero(cls, r):
        return cls([[Poly() for _ in range(r)] for _ in range(r)])

    @classmethod
    def constant(cls, A):
        return cls([[Poly.const(gr(x)) for x in row] for row in A])

    def degree(self):
        return max((c.degree for row in self.matrix for c in row if isinstance(c, Poly)),
                   default=-1)

    def series(self, z0, k):
        """Taylor coefficients A_0..A_k of A about z0, as a MatSeries."""
        return MatSeries.expand(self.matrix, z0, k)

    def to_json(self):
        out = []
        for row in self.matrix:
            if any(not isinstance(c, Poly) for c in row):
                raise UsageError("only polynomial connections serialize")
            out.append([[str(x) for x in c.coeffs] for c in row])
        return {"rank": self.rank, "A": out}

    @classmethod
    def from_json(cls, obj):
        A = [[Poly([parse_scalar(str(x)) for x in entry]) for entry in row] for row in obj["A"]]
        spec = cls(A)
        if "rank" in obj and obj["rank"] != spec.rank:
            raise UsageError("rank does not match the connection matrix")
        return spec


class MatSeries:
    """Matrix-valued truncated series: Taylor coefficient matrices M_0..M_k at base_point."""

    __slots__ = ("coeffs", "base_point", "order")

    def __init__(self, coeffs, base_point, order=None):
        self.coeffs = [[list(r) for r in m] for m in coeffs]
        self.order = len(coeffs) - 1 if order is None else order
        self.base_point = gr(base_point)

    @property
    def size(self):
        return len(self.coeffs[0]), len(self.coeffs[0][0])

    @classmethod
    def expand(cls, matrix, z0, k):
        rows, cols = len(matrix), len(matrix[0])
        ser = [[TruncSeries.expand(matrix[i][j], z0, k) for j in range(cols)] for i in range(rows)]
        return cls([[[ser[i][j].coeffs[t] for j in range(cols)] for i in range(rows)]
                    for t in range(k + 1)], z0, k)

    @classmethod
    def from_entry_series(cls, ser):
        k = ser[0][0].order
        return cls([[[e.coeffs[t] for e in row] for row in ser] for t in range(k + 1)],
                   ser[0][0].base_point, k)

    def entry_series(self, i, j):
        return TruncSeries([m[i][j] for m in self.coeffs], self.base_point, self.order)

    def __mul__(self, other):
        k = self.order
        out = []
        for t in range(k + 1):
            acc = None
            for s in range(t + 1):
                term = matmul(self.coeffs[s], other.coeffs[t - s])
                acc = term if acc is None else matadd(acc, term)
            out.append(acc)
        return MatSeries(out, self.base_point, k)

    def scale_series(self, f):
        """Multiply by a scalar TruncSeries."""
        k = self.order
        out = []
        for t in range(k + 1):
            acc = zeros(*self.size)
            for s in range(t + 1):
                if f.coeffs[t - s]:
                    acc = matadd(acc, matscale(f.coeffs[t - s], self.coeffs[s]))
            out.append(acc)
        return MatSeries(out, self.base_point, k)

    def deriv(self):
        cs = [matscale(t + 1, self.coeffs[t + 1]) for t in range(self.order)]
        cs.append(zeros(*self.size))
        return MatSeries(cs, self.base_point, self.order)

    def inverse(self):
        M0 = mat_inverse(self.coeffs[0])
        out = [M0]
        for t in range(1, self.order + 1):
            acc = zeros(*self.size)
            for s in range(1, t + 1):
                acc = matadd(acc, matmul(self.coeffs[s], out[t - s]))
            out.append(matscale(-1, matmul(M0, acc)))
        return MatSeries(out, self.base_point, self.order)

    def compose(self, g):
        """Entrywise composition with a scalar series g (self is expanded at g(base))."""
        r, c = self.size
        ser = [[series_compose(self.entry_series(i, j), g) for j in range(c)] for i in range(r)]
        return MatSeries.from_entry_series(ser)

    def value(self):
        return self.coeffs[0]

    def raw(self, t):
        return matscale(factorial(t), self.coeffs[t])

    def __eq__(self, other):
        return (isinstance(other, MatSeries) and self.order == other.order
                and self.base_point == other.base_point and self.coeffs == other.coeffs)


# -- basic jet operations ---------------------------------------------------------

def jet_of_series(s, k=None):
    """Raw derivatives of a scalar series, or of a list of r component series."""
    comps = [s] if isinstance(s, TruncSeries) else list(s)
    k = comps[0].order if k is None else k
    if any(c.order < k for c in comps):
        raise UsageError(f"series order below the requested jet order {k}")
    vals = [comps[e].coeffs[j] * factorial(j) for j in range(k + 1) for e in range(len(comps))]
    return JetVector(vals, k, len(comps), comps[0].base_point)


def jet_of_function(f, z0, k):
    """Jet of a Poly/RatFun (or list of them) at z0."""
    fs = f if isinstance(f, (list, tuple)) else [f]
    return jet_of_series([TruncSeries.expand(x, z0, k) for x in fs], k)


def forgetful(jet):
    """Drop the top derivative block."""
    if jet.order < 1:
        raise UsageError("forgetful map needs order >= 1")
    return JetVector(jet.values[:jet.order * jet.rank], jet.order - 1, jet.rank, jet.base_point)


def forgetful_matrix(k, r=1):
    return [[ONE if i == j else ZERO for j in range((k + 1) * r)] for i in range(k * r)]


def iota(k, value, base_point=0):
    """The jet of (z - z0)^k * value: zeros then k! * value in the top slot."""
    vals = [gr(v) for v in (value if isinstance(value, (list, tuple)) else [value])]
    r = len(vals)
    return JetVector([ZERO] * (k * r) + [v * factorial(k) for v in vals], k, r, base_point)


def apply_matrix(T, jet, base_point=None):
    vals = [sum((a * b for a, b in zip(row, jet.values) if a and b), ZERO) for row in T]
    return JetVector(vals, jet.order, jet.rank, jet.base_point if base_point is None else base_point)


# -- transition matrices ------------------------------------------------------------

def moebius_series(g, z0, k):
    """Taylor series of z -> g z about z0."""
    z = TruncSeries.variable(gr(z0), k)
    den = g.c * z + g.d
    if not den.coeffs[0]:
        act(g, z0)  # raises ChartEscapeError
    return series_mul(g.a * z + g.b, den ** -1)


def automorphy_series(n, g, z0, k):
    z = TruncSeries.variable(gr(z0), k)
    den = g.c * z + g.d
    if not den.coeffs[0]:
        automorphy(n, g, z0)
    return den ** n


def _jet_basis_columns(k, g, z0, weight_series):
    """Series weight(z) (g z - g z0)^j / j!, for j = 0..k."""
    G = moebius_series(g, z0, k)
    h = G - G.coeffs[0]
    cols = []
    power = TruncSeries.const(1, G.base_point, k)
    for j in range(k + 1):
        cols.append(series_mul(weight_series, power) * (gr(1) / factorial(j)))
        power = series_mul(power, h)
    return cols


def jet_cocycle(k, n, g, z0):
    """(k+1)-square matrix taking the k-jet of s~ at g z0 to that of s at z0."""
    z0 = gr(z0)
    mu = automorphy_series(n, g, z0, k)
    cols = _jet_basis_columns(k, g, z0, mu)
    raws = [c.raw_derivatives() for c in cols]
    return [[raws[j][i] for j in range(k + 1)] for i in range(k + 1)]


def _gauge_series(gauge, z0, k, r):
    if gauge is None:
        return MatSeries([identity(r)] + [zeros(r)] * k, z0, k)
    if isinstance(gauge, MatSeries):
        return gauge
    return MatSeries.expand([[x if isinstance(x, (Poly, RatFun)) else Poly.const(gr(x))
                              for x in row] for row in gauge], z0, k)


def twisted_jet_cocycle(spec, k, n, g, z0, gauge=None):
    """Transition matrix of J^k(E x L^n) for s(z) = mu_n(g, z) G(z) s~(g z).

    gauge is the r x r matrix G(z) (entries Poly/RatFun/scalars); None means
    the identity.  The connection in spec only enters through the parallel
    transport model, see lemma2_model.
    """
    r = spec.rank if isinstance(spec, FlatConnectionSpec) else int(spec)
    z0 = gr(z0)
    mu = automorphy_series(n, g, z0, k)
    cols = _jet_basis_columns(k, g, z0, mu)
    G = _gauge_series(gauge, z0, k, r)
    N = (k + 1) * r
    T = zeros(N)
    for j, col in enumerate(cols):
        for f in range(r):
            for e in range(r):
                s = series_mul(col, G.entry_series(e, f))
                raw = s.raw_derivatives()
                for i in range(k + 1):
                    T[i * r + e][j * r + f] = raw[i]
    return T


# -- parallel transport ----------------------------------------------------------

def transport_series(A, k):
    """P with P' = -A P, P(z0) = 1, from the MatSeries A (order >= k)."""
    r = A.size[0]
    P = [identity(r)]
    for t in range(k):
        acc = zeros(r)
        for m in range(t + 1):
            acc = matadd(acc, matmul(A.coeffs[m], P[t - m]))
        P.append(matscale(gr(-1) / (t + 1), acc))
    return MatSeries(P, A.base_point, k)


def parallel_transport_jet(spec, z0, k):
    return transport_series(spec.series(gr(z0), k), k)


def pulled_back_connection(spec, g, z0, k, gauge=None):
    """Connection on the source chart making s = G(z) s~(g z) flat when s~ is.

    A_src = G A(g z) g' G^-1 - G' G^-1.
    """
    z0 = gr(z0)
    r = spec.rank
    Gz = moebius_series(g, z0, k + 1)
    A_tgt = spec.series(Gz.coeffs[0], k + 1).compose(Gz)
    dG = Gz.deriv()
    gauge_s = _gauge_series(gauge, z0, k + 1, r)
    ginv = gauge_s.inverse()
    A = (gauge_s * A_tgt.scale_series(dG) * ginv)
    B = gauge_s.deriv() * ginv
    cs = [matsub(a, b) for a, b in zip(A.coeffs, B.coeffs)]
    return MatSeries(cs[:k + 1], z0, k)


def transport_jet_matrix(P, k):
    """Matrix of c x (jet of phi) -> jet of P(z) c phi(z) on (k+1)r slots."""
    r = P.size[0]
    N = (k + 1) * r
    L = zeros(N)
    for i in range(k + 1):
        for j in range(i + 1):
            blk = matscale(comb(i, j) * factorial(i - j), P.coeffs[i - j])
            for e in range(r):
                for f in range(r):
                    L[i * r + e][j * r + f] = blk[e][f]
    return L


def lemma2_model(spec, k, n, g, z0, gauge=None):
    """Transition of E x J^k(L^n) carried to J^k(E x L^n) by parallel transport."""
    z0 = gr(z0)
    r = spec.rank
    w0 = act(g, z0)
    P_src = transport_series(pulled_back_connection(spec, g, z0, k, gauge), k)
    P_tgt = parallel_transport_jet(spec, w0, k)
    T = jet_cocycle(k, n, g, z0)
    G0 = _gauge_series(gauge, z0, 0, r).coeffs[0]
    N = (k + 1) * r
    inner = zeros(N)
    for i in range(k + 1):
        for j in range(k + 1):
            if T[i][j]:
                for e in range(r):
                    for f in range(r):
                        inner[i * r + e][j * r + f] = T[i][j] * G0[e][f]
    Lsrc = transport_jet_matrix(P_src, k)
    Ltgt_inv = mat_inverse(transport_jet_matrix(P_tgt, k))
    return matmul(matmul(Lsrc, inner), Ltgt_inv)


# -- global sections -------------------------------------------------------------

def global_section_poly(n, P):
    """Chart polynomial of P in Sym^n(V): e1^(n-j) e2^j -> (-1)^(n-j) z^j.

    This is omega(x, .)^n with x = (z, 1) spanning the tautological line, the
    dictionary under which P -> section is SL(2)-equivariant.
    """
    if n < 0:
        raise UsageError("global sections need n >= 0")
    P = list(P)
    if len(P) != n + 1:
        raise UsageError(f"expected a degree-{n} SymVector")
    return Poly([gr(P[j]) * (-1) ** (n - j) for j in range(n + 1)])


def poly_global_jet(n, P, z0, k):
    return jet_of_function(global_section_poly(n, P), gr(z0), k)


def global_jet_matrix(n, z0, k):
    """Columns: jets at z0 of the sections of the monomial basis of Sym^n."""
    cols = [poly_global_jet(n, SymVector.monomial(n, j), z0, k).values for j in range(n + 1)]
    return [[cols[j][i] for j in range(n + 1)] for i in range(k + 1)]


__all__ = [
    "JetVector", "FlatConnectionSpec", "MatSeries", "jet_of_series", "jet_of_function",
    "forgetful", "forgetful_matrix", "iota", "apply_matrix", "jet_cocycle",
    "twisted_jet_cocycle", "parallel_transport_jet", "transport_series",
    "pulled_back_connection", "transport_jet_matrix", "lemma2_model", "global_section_poly",
    "poly_global_jet", "global_jet_matrix", "moebius_series", "automorphy_series",
]
