"""Symmetric powers of the defining representation of SL(2).

An element of Sym^k(V) is the binary form sum_j c_j e1^(k-j) e2^j, stored as
its coefficient list.  Dual forms (elements of Sym^k(V*)) use the same
layout in the dual basis e1*, e2*; the form alpha^k for alpha = a1 e1* + a2 e2*
therefore has coefficients binom(k, j) a1^(k-j) a2^j.
"""

from functools import lru_cache
from math import comb, factorial

from .errors import UsageError
from .exactnum import ONE, ZERO, gr, inverse as mat_inverse, matvec
from .moebius import MoebiusMap, inverse as g_inverse


class SymVector(tuple):
    """Coefficients of a binary form of degree len - 1."""

    def __new__(cls, coeffs):
        coeffs = [gr(c) for c in coeffs]
        if not coeffs:
            raise UsageError("a SymVector needs at least one coefficient")
        return super().__new__(cls, coeffs)

    @property
    def degree(self):
        return len(self) - 1

    @classmethod
    def zero(cls, k):
        return cls([ZERO] * (k + 1))

    @classmethod
    def monomial(cls, k, j):
        """e1^(k-j) e2^j."""
        out = [ZERO] * (k + 1)
        out[j] = ONE
        return cls(out)

    def __add__(self, other):
        _same_degree(self, other)
        return SymVector([a + b for a, b in zip(self, other)])

    def __sub__(self, other):
        _same_degree(self, other)
        return SymVector([a - b for a, b in zip(self, other)])

    def __neg__(self):
        return SymVector([-a for a in self])

    def scale(self, c):
        c = gr(c)
        return SymVector([c * a for a in self])

    def is_zero(self):
        return not any(self)

    def to_json(self):
        return {"degree": self.degree, "coeffs": [str(c) for c in self]}

    @classmethod
    def from_json(cls, obj):
        vec = cls(obj["coeffs"])
        if "degree" in obj and obj["degree"] != vec.degree:
            raise UsageError("degree does not match the coefficient count")
        return vec

    def __repr__(self):
        return f"SymVector({[str(c) for c in self]})"


E1 = SymVector([1, 0])
E2 = SymVector([0, 1])


def _same_degree(u, v):
    if len(u) != len(v):
        raise UsageError(f"degree mismatch: {len(u) - 1} vs {len(v) - 1}")


def _as_sym(v):
    return v if isinstance(v, SymVector) else SymVector(v)


def form_mul(f, g):
    """Product of binary forms."""
    f, g = _as_sym(f), _as_sym(g)
    out = [ZERO] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if not a:
            continue
        for j, b in enumerate(g):
            if b:
                out[i + j] = out[i + j] + a * b
    return SymVector(out)


def sym_power(v, k):
    out = SymVector([ONE])
    for _ in range(k):
        out = form_mul(out, v)
    return out


def _matrix_of(k, a, b, c, d):
    # column j: image of e1^(k-j) e2^j under e1 -> a e1 + c e2, e2 -> b e1 + d e2
    col1, col2 = SymVector([a, c]), SymVector([b, d])
    p1 = [SymVector([ONE])]
    p2 = [SymVector([ONE])]
    for _ in range(k):
        p1.append(form_mul(p1[-1], col1))
        p2.append(form_mul(p2[-1], col2))
    cols = [form_mul(p1[k - j], p2[j]) for j in range(k + 1)]
    return [[cols[j][i] for j in range(k + 1)] for i in range(k + 1)]


def sym_rep(k, g):
    """Matrix of Sym^k(g) on the monomial basis."""
    if k < 0:
        raise UsageError("symmetric power degree must be >= 0")
    if isinstance(g, MoebiusMap):
        return _matrix_of(k, g.a, g.b, g.c, g.d)
    (a, b), (c, d) = g
    return _matrix_of(k, gr(a), gr(b), gr(c), gr(d))


def dual_rep(k, g):
    """Matrix of Sym^k(g) on Sym^k(V*), i.e. of Sym^k of the inverse transpose."""
    h = g_inverse(g)
    return _matrix_of(k, h.a, h.c, h.b, h.d)


def omega_pair(u, v):
    """omega(u, v) = u1 v2 - u2 v1, so omega(e1, e2) = 1."""
    if len(u) != 2 or len(v) != 2:
        raise UsageError("omega pairs two degree-1 vectors")
    return gr(u[0]) * gr(v[1]) - gr(u[1]) * gr(v[0])


def psi_iso(alpha):
    """The v with omega(v, .) = alpha; alpha is given by (alpha(e1), alpha(e2))."""
    if len(alpha) != 2:
        raise UsageError("psi_iso takes a degree-1 functional")
    return SymVector([gr(alpha[1]), -gr(alpha[0])])


def mult_line(v, S):
    if len(v) != 2:
        raise UsageError("mult_line multiplies by a degree-1 vector")
    return form_mul(v, S)


def polar(w, F):
    """(1/deg) (w1 d/dX + w2 d/dY) F, lowering the degree by one."""
    F = _as_sym(F)
    k = F.degree
    if k < 1:
        raise UsageError("cannot contract a degree-0 form")
    w1, w2 = gr(w[0]), gr(w[1])
    out = []
    for i in range(k):
        out.append((w1 * F[i] * (k - i) + w2 * F[i + 1] * (i + 1)) / k)
    return SymVector(out)


def contract_line(v, T):
    """Contraction of a dual form by v: contract(v, alpha^j) = alpha(v) alpha^(j-1)."""
    if len(v) != 2:
        raise UsageError("contract_line contracts with a degree-1 vector")
    return polar(v, T)


def dual_pair(F, P):
    """Natural pairing Sym^j(V*) x Sym^j(V) with <alpha^j, v^j> = alpha(v)^j."""
    _same_degree(F, P)
    j = len(F) - 1
    acc = ZERO
    for a, (f, p) in enumerate(zip(F, P)):
        if f and p:
            acc = acc + gr(f) * gr(p) / comb(j, a)
    return acc


def _partial(F, dx, dy):
    """d^dx/dX^dx d^dy/dY^dy of the form F."""
    k = len(F) - 1
    out = []
    for i in range(k - dx - dy + 1):
        src = i + dy  # exponent of Y before differentiating
        c = F[src]
        if c:
            c = c * (factorial(k - src) // factorial(k - src - dx)) * (factorial(src) // factorial(src - dy))
        out.append(c)
    return out


def transvectant(i, f, g):
    """i-th transvectant, scaled by (m-i)!(n-i)!/(m! n!).

    With this scale (v^k, u^k)_k = omega(v, u)^k and (e1, e2)_1 = 1.
    """
    f, g = _as_sym(f), _as_sym(g)
    m, n = f.degree, g.degree
    if not 0 <= i <= min(m, n):
        raise UsageError(f"transvectant order {i} out of range for degrees {m}, {n}")
    acc = SymVector.zero(m + n - 2 * i)
    for r in range(i + 1):
        term = form_mul(_partial(f, i - r, r), _partial(g, r, i - r))
        coef = (-1) ** r * comb(i, r)
        acc = acc + term.scale(coef)
    scale = gr(factorial(m - i) * factorial(n - i)) / (factorial(m) * factorial(n))
    return acc.scale(scale)


def p0_pair(k, A, B):
    """Invariant pairing Sym^k x Sym^k -> C with p0(v^k, u^k) = omega(v, u)^k."""
    A, B = _as_sym(A), _as_sym(B)
    if A.degree != k or B.degree != k:
        raise UsageError(f"p0_pair expects two degree-{k} forms")
    return transvectant(k, A, B)[0]


@lru_cache(maxsize=None)
def clebsch_matrix(m, n):
    """Matrix of the decomposition Sym^m x Sym^n -> sum_i Sym^(m+n-2i)."""
    rows_per = [m + n - 2 * i + 1 for i in range(min(m, n) + 1)]
    cols = []
    for a in range(m + 1):
        fa = SymVector.monomial(m, a)
        for b in range(n + 1):
            gb = SymVector.monomial(n, b)
            col = []
            for i in range(len(rows_per)):
                col.extend(transvectant(i, fa, gb))
            cols.append(col)
    size = (m + 1) * (n + 1)
    return tuple(tuple(cols[j][r] for j in range(size)) for r in range(size))


@lru_cache(maxsize=None)
def _clebsch_inverse(m, n):
    inv = mat_inverse([list(r) for r in clebsch_matrix(m, n)])
    return tuple(tuple(r) for r in inv)


def clebsch_decompose(m, n, T):
    """Components (transvectant_i extended bilinearly), degrees m+n, m+n-2, ..., |m-n|.

    T is indexed a*(n+1) + b for the basis tensor e^(m)_a x e^(n)_b.
    """
    if len(T) != (m + 1) * (n + 1):
        raise UsageError(f"tensor length {len(T)} != {(m + 1) * (n + 1)}")
    flat = matvec(clebsch_matrix(m, n), [gr(t) for t in T])
    out, pos = [], 0
    for i in range(min(m, n) + 1):
        d = m + n - 2 * i + 1
        out.append(SymVector(flat[pos:pos + d]))
        pos += d
    return out


def clebsch_compose(m, n, components):
    expected = [m + n - 2 * i for i in range(min(m, n) + 1)]
    if [len(c) - 1 for c in components] != expected:
        raise UsageError(f"component degrees must be {expected}")
    flat = [gr(x) for c in components for x in c]
    return matvec(_clebsch_inverse(m, n), flat)


def tensor(f, g):
    """f x g as a flat (m+1)(n+1) vector."""
    return [gr(a) * gr(b) for a in f for b in g]


def tensor_rep(m, n, g):
    from .exactnum import kron
    return kron(sym_rep(m, g), sym_rep(n, g))
