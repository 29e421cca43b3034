"""Equivariant isomorphisms between jet cocycles and their representation models.

An intertwiner from cocycle B to cocycle A is a polynomial matrix Sigma(z) with

    T_A(g, z0) Sigma(g z0) = Sigma(z0) T_B(g, z0)

for every g and z0.  It is found by sampling (g, z0), writing the identity as
a linear system in the coefficients of Sigma, and taking an exact nullspace.
"""

from dataclasses import dataclass, field
from math import comb

from .errors import ChartEscapeError, NoIntertwinerError, UsageError, VerificationError
from .exactnum import (
    ONE, ZERO, Poly, det, exact_nullspace, gr, identity, inverse as mat_inverse, matmul,
    matvec, rank, solve, zeros,
)
from .jets import (
    FlatConnectionSpec, forgetful_matrix, global_jet_matrix, iota, jet_cocycle, lemma2_model,
    twisted_jet_cocycle,
)
from .moebius import act, automorphy, inverse as g_inverse, random_element
from .rep import (
    SymVector, clebsch_compose, clebsch_decompose, polar, sym_power, sym_rep, tensor_rep,
)
from .sampling import random_scalar, stream

FIT_GROUP_ELEMENTS = 8
FIT_HEIGHT = 5
FRESH_SAMPLES = 25


# -- cocycles ---------------------------------------------------------------------

class Cocycle:
    size = 0

    def __call__(self, g, z0):
        raise NotImplementedError

    def translation_degree(self):
        """Degree in b of the entries of T(z -> z + b, z0); bounds intertwiner degrees."""
        raise NotImplementedError

    def key(self):
        raise NotImplementedError


@dataclass(frozen=True)
class JetCocycle(Cocycle):
    k: int
    n: int

    @property
    def size(self):
        return self.k + 1

    def __call__(self, g, z0):
        return jet_cocycle(self.k, self.n, g, z0)

    def translation_degree(self):
        return 0

    def key(self):
        return ("jet", self.k, self.n)

    def describe(self):
        return {"kind": "jet", "k": self.k, "n": self.n}


@dataclass(frozen=True)
class ModelCocycle(Cocycle):
    """Block sum of L^m x V_d with B(g, z0) = mu_m(g, z0) Sym^d(g^-1)."""

    summands: tuple

    def __post_init__(self):
        object.__setattr__(self, "summands", tuple(tuple(s) for s in self.summands))
        if any(d < 0 for _, d in self.summands):
            raise UsageError("representation degrees must be >= 0")

    @property
    def size(self):
        return sum(d + 1 for _, d in self.summands)

    def __call__(self, g, z0):
        h = g_inverse(g)
        out = zeros(self.size)
        pos = 0
        for m, d in self.summands:
            mu = automorphy(m, g, z0)
            R = sym_rep(d, h)
            for i in range(d + 1):
                for j in range(d + 1):
                    out[pos + i][pos + j] = mu * R[i][j]
            pos += d + 1
        return out

    def translation_degree(self):
        return max(d for _, d in self.summands)

    def key(self):
        return ("model",) + self.summands

    def describe(self):
        return {"kind": "model", "summands": [list(s) for s in self.summands]}


def thm1_summands(k, n):
    """Irreducible summands (twist, degree) of J^k(L^n)."""
    if k < 0:
        raise UsageError("jet order must be >= 0")
    if n < 0 or n >= k:
        return ((n - k, k),)
    return ((0, n), (-(k + 1), k - n - 1))


def is_split(k, n):
    return 0 <= n < k


def thm1_model(k, n):
    return ModelCocycle(thm1_summands(k, n))


# -- polynomial matrices ------------------------------------------------------------

def polymat_eval(S, z):
    z = gr(z)
    return [[p(z) for p in row] for row in S]


def polymat_mul(A, B):
    out = []
    for row in A:
        out.append([sum((row[t] * B[t][j] for t in range(len(B)) if row[t] and B[t][j]), Poly())
                    for j in range(len(B[0]))])
    return out


def polymat_degree(S):
    return max((p.degree for row in S for p in row), default=-1)


def polymat_scale(S, c):
    c = gr(c)
    return [[p.scale(c) for p in row] for row in S]


def polymat_str(S):
    return [[str(p) for p in row] for row in S]


@dataclass
class Intertwiner:
    """Sigma(z): fiber of the model cocycle -> fiber of the jet cocycle."""

    matrix: list
    source: dict
    target: dict
    degree_bound: int
    normalization: str = "raw"
    symbol_scale: object = None
    extras: dict = field(default_factory=dict)

    def at(self, z):
        return polymat_eval(self.matrix, z)

    def inverse_at(self, z):
        return mat_inverse(self.at(z))

    @property
    def degree(self):
        return polymat_degree(self.matrix)

    def scaled(self, c, normalization):
        c = gr(c)
        return Intertwiner(polymat_scale(self.matrix, c), self.source, self.target,
                           self.degree_bound, normalization,
                           None if self.symbol_scale is None else self.symbol_scale * c,
                           dict(self.extras))

    def to_json(self):
        out = {"matrix": [[[str(c) for c in p.coeffs] for p in row] for row in self.matrix],
               "source": self.source, "target": self.target,
               "degree_bound": self.degree_bound, "degree": self.degree,
               "normalization": self.normalization}
        if self.symbol_scale is not None:
            out["symbol_scale"] = str(self.symbol_scale)
        return out


# -- sampling -----------------------------------------------------------------------

class SamplePool:
    """Cached (g, z0, w0, T_A, T_B) tuples drawn deterministically from a seed."""

    def __init__(self, A, B, seed, label, group_elements=FIT_GROUP_ELEMENTS, height=FIT_HEIGHT,
                 real=False):
        self.A, self.B = A, B
        self.real = real
        self.rng = stream(seed, label, A.key(), B.key())
        self.group = [random_element(self.rng, height, real=real) for _ in range(group_elements)]
        self.samples = []

    def draw(self):
        while True:
            g = self.group[len(self.samples) % len(self.group)]
            z0 = random_scalar(self.rng, 3, real=self.real)
            try:
                w0 = act(g, z0)
                sample = (g, z0, w0, self.A(g, z0), self.B(g, z0))
            except ChartEscapeError:
                continue
            self.samples.append(sample)
            return sample

    def ensure(self, count):
        while len(self.samples) < count:
            self.draw()
        return self.samples[:count]


def _equations(sample, N, M, d):
    """Rows of T_A Sigma(w0) - Sigma(z0) T_B = 0 in the coefficients of Sigma."""
    _, z0, w0, TA, TB = sample
    zp = [ONE]
    wp = [ONE]
    for _ in range(d):
        zp.append(zp[-1] * z0)
        wp.append(wp[-1] * w0)
    U = N * M * (d + 1)
    rows = []
    for i in range(N):
        for j in range(M):
            row = [ZERO] * U
            for t in range(d + 1):
                base = t * N * M
                for p in range(N):
                    a = TA[i][p]
                    if a:
                        idx = base + p * M + j
                        row[idx] = row[idx] + a * wp[t]
                for q in range(M):
                    b = TB[q][j]
                    if b:
                        idx = base + i * M + q
                        row[idx] = row[idx] - zp[t] * b
            if any(row):
                rows.append(row)
    return rows


def _vector_to_polymat(v, N, M, d):
    return [[Poly([v[t * N * M + i * M + j] for t in range(d + 1)]) for j in range(M)]
            for i in range(N)]


def intertwining_residual(S, sample):
    _, z0, w0, TA, TB = sample
    return matmul(TA, polymat_eval(S, w0)) == matmul(polymat_eval(S, z0), TB)


def solve_intertwiner(A, B, degree_bound, sample_count=None, seed=0, fresh=FRESH_SAMPLES,
                      pool=None):
    """Basis of intertwiners B -> A with entry degrees <= degree_bound.

    Raises NoIntertwinerError when the space is zero.
    """
    N, M, d = A.size, B.size, degree_bound
    if d < 0:
        raise UsageError("degree bound must be >= 0")
    pool = pool or SamplePool(A, B, seed, "fit", real=True)
    U = N * M * (d + 1)
    cap = sample_count or max(FIT_GROUP_ELEMENTS, -(-U // (N * M)) + 2)
    used = min(cap, -(-U // (N * M)) + 2)
    rows = []
    for s in pool.ensure(used):
        rows.extend(_equations(s, N, M, d))
    while True:
        basis = exact_nullspace(rows) if rows else [[ONE if i == j else ZERO for j in range(U)]
                                                    for i in range(U)]
        mats = [_vector_to_polymat(v, N, M, d) for v in basis]
        if not mats:
            break
        # confirm on the remaining pool samples; absorb any that fail
        failing = [s for s in pool.ensure(max(cap, used))
                   if not all(intertwining_residual(S, s) for S in mats)]
        if not failing:
            break
        for s in failing[:4]:
            rows.extend(_equations(s, N, M, d))
        used += len(failing[:4])
    if not mats:
        raise NoIntertwinerError(f"no intertwiner of degree <= {d} from {B.key()} to {A.key()}")
    checker = SamplePool(A, B, seed, "fresh")
    for s in checker.ensure(fresh):
        for S in mats:
            if not intertwining_residual(S, s):
                raise VerificationError("fitted intertwiner fails on a fresh sample",
                                        {"g": s[0].to_json(), "z0": str(s[1])})
    src, tgt = _describe(B), _describe(A)
    return [Intertwiner(S, src, tgt, d) for S in mats]


def _describe(C):
    return C.describe() if hasattr(C, "describe") else {"key": list(C.key())}


def search_intertwiner(A, B, cap=None, seed=0, fresh=FRESH_SAMPLES):
    """Raise the degree bound from 0 until the space of intertwiners is complete.

    Translations force Sigma(z) = T_A(t_z)^-1 Sigma(0) T_B(t_z), so every
    intertwiner has degree at most the sum of the translation degrees; the
    search stops at the first bound at or past that value with a nonzero
    solution.  Returns (basis, minimal_degree).
    """
    complete = A.translation_degree() + B.translation_degree()
    if cap is None:
        cap = complete + 2
    pool = SamplePool(A, B, seed, "fit", real=True)
    minimal = None
    basis = []
    for d in range(cap + 1):
        try:
            basis = solve_intertwiner(A, B, d, seed=seed, fresh=0, pool=pool)
        except NoIntertwinerError:
            basis = []
        if basis and minimal is None:
            minimal = d
        if d >= complete and (basis or d == cap):
            break
    if not basis:
        raise NoIntertwinerError(f"no intertwiner up to degree {cap}")
    checker = SamplePool(A, B, seed, "fresh")
    for s in checker.ensure(fresh):
        for I in basis:
            if not intertwining_residual(I.matrix, s):
                raise VerificationError("intertwiner fails on a fresh sample",
                                        {"g": s[0].to_json(), "z0": str(s[1])})
    for I in basis:
        I.extras["minimal_degree"] = minimal
    return basis, minimal


# -- the jet bundle isomorphism ---------------------------------------------------------

def chart_polynomials(n):
    """The section e1^(n-j) e2^j -> (-1)^(n-j) z^j as a list of Polys."""
    return [Poly([ZERO] * j + [gr((-1) ** (n - j))]) for j in range(n + 1)]


def line_power(k, z):
    """x^k for x = (z, 1) spanning the tautological line at z."""
    return sym_power(SymVector([gr(z), ONE]), k)


def line_power_poly(k):
    """x^k with polynomial coefficients binom(k, j) z^(k-j)."""
    return [Poly([ZERO] * (k - j) + [gr(comb(k, j))]) for j in range(k + 1)]


def _generator_poly(k, n):
    """Model vector whose image spans the iota line: x^k, or 0 + x^(k-n-1) when split."""
    if is_split(k, n):
        return [Poly()] * (n + 1) + line_power_poly(k - n - 1)
    return line_power_poly(k)


_ISO_CACHE = {}


def thm1_iso(k, n, seed=0):
    """Canonical Sigma_{k,n}: model -> J^k(L^n).

    Normalized along the truncation chain: the value row is the chart
    section map, and in the split case the V_n block is the jet of global
    sections while row n + 1 of the second block is the chart section map of
    V_(k-n-1).  symbol_scale records c with Sigma x^k = c e_top.
    """
    key = (k, n, seed)
    if key in _ISO_CACHE:
        return _ISO_CACHE[key]
    A, B = JetCocycle(k, n), thm1_model(k, n)
    basis, minimal = search_intertwiner(A, B, cap=2 * k + abs(n) + 2, seed=seed)
    expected = 2 if is_split(k, n) else 1
    if len(basis) != expected:
        raise VerificationError(
            f"Schur dimension {len(basis)} != {expected} for k={k}, n={n}")
    targets = _pins(k, n)
    # solve for the combination matching the pinned entries
    eqs, rhs = [], []
    for (i, j), poly in targets.items():
        deg = max(poly.degree, max(b.matrix[i][j].degree for b in basis), 0)
        for t in range(deg + 1):
            eqs.append([_coef(b.matrix[i][j], t) for b in basis])
            rhs.append(_coef(poly, t))
    coeffs = solve(eqs, rhs)
    if coeffs is None:
        raise VerificationError(f"normalization pins are inconsistent for k={k}, n={n}")
    S = [[sum((b.matrix[i][j].scale(c) for b, c in zip(basis, coeffs)), Poly())
          for j in range(B.size)] for i in range(A.size)]
    for (i, j), poly in targets.items():
        if S[i][j] != poly:
            raise VerificationError(f"pinned entry ({i}, {j}) not matched for k={k}, n={n}")
    gen = _generator_poly(k, n)
    image = [sum((S[i][j] * gen[j] for j in range(B.size)), Poly()) for i in range(A.size)]
    if any(image[:k]) or image[k].degree > 0 or not image[k]:
        raise VerificationError(f"tautological line not sent to the iota line for k={k}, n={n}")
    iso = Intertwiner(S, basis[0].source, basis[0].target, basis[0].degree_bound,
                      "chain", image[k](0),
                      {"minimal_degree": minimal, "schur_dimension": len(basis)})
    _ISO_CACHE[key] = iso
    return iso


def _coef(p, t):
    return p.coeffs[t] if t < len(p.coeffs) else ZERO


def _pins(k, n):
    pins = {}
    if is_split(k, n):
        for j in range(n + 1):
            col = chart_polynomials(n)[j]
            for i in range(k + 1):
                pins[(i, j)] = _raw_derivative_poly(col, i)
        for j, p in enumerate(chart_polynomials(k - n - 1)):
            pins[(n + 1, n + 1 + j)] = p
    else:
        for j, p in enumerate(chart_polynomials(k)):
            pins[(0, j)] = p
    return pins


def _raw_derivative_poly(p, i):
    for _ in range(i):
        p = p.deriv()
    return p


def iota_pinned_iso(k, n, seed=0):
    """Sigma / c: sends the tautological generator to the unit top-slot jet."""
    iso = thm1_iso(k, n, seed)
    return iso.scaled(ONE / iso.symbol_scale, "iota")


def schur_dimension(A, B, seed=0):
    try:
        basis, _ = search_intertwiner(A, B, seed=seed, fresh=5)
    except NoIntertwinerError:
        return 0
    return len(basis)


# -- truncation models and the splitting ------------------------------------------------

def varpi_matrix(k, z):
    """Id x varpi_k on V_k -> L x V_(k-1): contraction with the quotient V -> L at z."""
    lam = (gr(-1), gr(z))
    cols = [polar(lam, SymVector.monomial(k, j)) for j in range(k + 1)]
    return [[cols[j][i] for j in range(k + 1)] for i in range(k)]


def varpi_poly(k):
    """varpi_k with polynomial entries in z."""
    lam = (Poly.const(-1), Poly.z())
    out = [[Poly() for _ in range(k + 1)] for _ in range(k)]
    for j in range(k + 1):
        # polar derivative of the monomial e1^(k-j) e2^j
        if j < k:
            out[j][j] = out[j][j] + lam[0].scale(gr(k - j) / k)
        if j > 0:
            out[j - 1][j] = out[j - 1][j] + lam[1].scale(gr(j) / k)
    return out


def forgetful_model(k, n):
    """The truncation J^k -> J^(k-1) written in model coordinates."""
    if k < 1:
        raise UsageError("need k >= 1")
    if not is_split(k, n):
        return varpi_poly(k), "negative" if n < 0 else "nonsplit"
    ident = [[Poly.const(1) if i == j else Poly() for j in range(n + 1)] for i in range(n + 1)]
    if k - 1 == n:
        return [row + [Poly()] for row in ident], "split-zero"
    second = varpi_poly(k - n - 1)
    rows = [row + [Poly()] * (k - n) for row in ident]
    rows += [[Poly()] * (n + 1) + r for r in second]
    return rows, "split-contraction"


def report(claim, params, ok, witness=None, **extra):
    out = {"claim": claim, "params": params, "status": "pass" if ok else "fail",
           "witness": witness or {}}
    out.update(extra)
    return out


def verify_forgetful_model(k, n, seed=0):
    """Check F Sigma_k(z) = Sigma_(k-1)(z) M(z) as polynomial matrices."""
    S_k, S_km1 = thm1_iso(k, n, seed), thm1_iso(k - 1, n, seed)
    M, branch = forgetful_model(k, n)
    F = [[Poly.const(x) for x in row] for row in forgetful_matrix(k)]
    lhs = polymat_mul(F, S_k.matrix)
    rhs = polymat_mul(S_km1.matrix, M)
    ok = lhs == rhs
    witness = {}
    if not ok:
        for i, (a, b) in enumerate(zip(lhs, rhs)):
            for j, (x, y) in enumerate(zip(a, b)):
                if x != y:
                    witness = {"entry": [i, j], "lhs": str(x), "rhs": str(y)}
                    break
            if witness:
                break
    return report("props234", {"k": k, "n": n}, ok, witness, branch=branch,
                  intertwiner_degrees=[S_k.degree, S_km1.degree])


def splitting_beta(k, n, z0):
    """Splitting J^k(L^n) -> V_n: truncate to order n, then undo global jets."""
    if not is_split(k, n):
        raise UsageError("the splitting exists for k > n >= 0")
    G = global_jet_matrix(n, z0, n)
    Ginv = mat_inverse(G)
    trunc = [[ONE if i == j else ZERO for j in range(k + 1)] for i in range(n + 1)]
    return matmul(Ginv, trunc)


def verify_lemma1(k, n, seed=0, samples=5):
    rng = stream(seed, "lemma1", k, n)
    for _ in range(samples):
        z0 = random_scalar(rng, 4)
        beta = splitting_beta(k, n, z0)
        if matmul(beta, global_jet_matrix(n, z0, k)) != identity(n + 1):
            return report("lemma1", {"k": k, "n": n}, False, {"z0": str(z0)})
        g = random_element(rng, 4)
        try:
            w0 = act(g, z0)
        except ChartEscapeError:
            continue
        # equivariance: beta(z0) T(g, z0) = rho(g^-1) beta(g z0)
        lhs = matmul(beta, jet_cocycle(k, n, g, z0))
        rhs = matmul(sym_rep(n, g_inverse(g)), splitting_beta(k, n, w0))
        if lhs != rhs:
            return report("lemma1", {"k": k, "n": n}, False,
                          {"z0": str(z0), "g": g.to_json(), "check": "equivariance"})
    return report("lemma1", {"k": k, "n": n}, True)


def verify_thm1(k, n, seed=0, fresh=FRESH_SAMPLES):
    iso = thm1_iso(k, n, seed)
    A, B = JetCocycle(k, n), thm1_model(k, n)
    checker = SamplePool(A, B, seed, "verify-thm1")
    witness = {}
    for s in checker.ensure(fresh):
        if not intertwining_residual(iso.matrix, s):
            witness = {"g": s[0].to_json(), "z0": str(s[1])}
            break
    ok = not witness
    # Sigma(z0) must be invertible; det is constant in z
    for s in checker.samples[:3]:
        try:
            mat_inverse(iso.at(s[1]))
        except ArithmeticError:
            ok, witness = False, {"z0": str(s[1]), "check": "invertibility"}
    return report("thm1", {"k": k, "n": n}, ok, witness,
                  branch="split" if is_split(k, n) else "nonsplit",
                  schur_dimension=iso.extras["schur_dimension"],
                  intertwiner_degrees=[iso.degree], minimal_degree=iso.extras["minimal_degree"])


# -- tensor products of jet bundles ---------------------------------------------------------

def decompose_jet_tensor(k, a, l, b):
    """Summands L^m x V_d of J^k(L^a) x J^l(L^b), with multiplicity, sorted."""
    if k < 0 or l < 0:
        raise UsageError("jet orders must be >= 0")
    out = []
    for m1, d1 in thm1_summands(k, a):
        for m2, d2 in thm1_summands(l, b):
            for i in range(min(d1, d2) + 1):
                out.append((m1 + m2, d1 + d2 - 2 * i))
    total = sum(d + 1 for _, d in out)
    assert total == (k + 1) * (l + 1)
    return sorted(out, key=lambda s: (-s[1], s[0]))


# -- suites over the remaining structural claims ------------------------------------------

def verify_exact_sequence(k, r=1):
    """ker(forgetful) = image(iota) in J^k of a rank-r bundle, with rank r."""
    F = forgetful_matrix(k, r)
    img = [list(iota(k, [ONE if e == f else ZERO for e in range(r)]).values) for f in range(r)]
    ker = exact_nullspace(F, cols=(k + 1) * r)
    inside = all(not any(matvec(F, v)) for v in img)
    ok = inside and rank(img) == r == len(ker) == rank(ker + img)
    return report("exact-sequence", {"k": k, "r": r}, ok, {} if ok else {"kernel_dim": len(ker)})


def verify_prop1(m, n, seed=0, trials=10):
    """Clebsch round trip, equivariance and dimension count for Sym^m x Sym^n."""
    params = {"m": m, "n": n}
    degs = [m + n - 2 * i for i in range(min(m, n) + 1)]
    if sum(d + 1 for d in degs) != (m + 1) * (n + 1):
        return report("prop1", params, False, {"check": "dimensions"})
    rng = stream(seed, "prop1", m, n)
    size = (m + 1) * (n + 1)
    for _ in range(trials):
        T = [random_scalar(rng, 5) for _ in range(size)]
        comps = clebsch_decompose(m, n, T)
        if clebsch_compose(m, n, comps) != T:
            return report("prop1", params, False, {"check": "round trip"})
        g = random_element(rng, 4)
        moved = clebsch_decompose(m, n, matvec(tensor_rep(m, n, g), T))
        if any(list(c) != matvec(sym_rep(d, g), list(a)) for c, a, d in zip(moved, comps, degs)):
            return report("prop1", params, False, {"g": g.to_json(), "check": "equivariance"})
    return report("prop1", params, True, degrees=degs)


def random_connection(rng, r, degree=2, height=4):
    return FlatConnectionSpec([[Poly([random_scalar(rng, height) for _ in range(degree + 1)])
                                for _ in range(r)] for _ in range(r)])


def verify_lemma2(k, n, r, seed=0, trials=5):
    """twisted_jet_cocycle = transport-conjugated (Id x untwisted cocycle)."""
    rng = stream(seed, "lemma2", k, n, r)
    params = {"k": k, "n": n, "r": r}
    done = 0
    while done < trials:
        spec = random_connection(rng, r)
        g = random_element(rng, 3)
        z0 = random_scalar(rng, 3)
        gauge = [[random_scalar(rng, 3) for _ in range(r)] for _ in range(r)]
        if not det(gauge):
            continue
        try:
            ok = twisted_jet_cocycle(spec, k, n, g, z0, gauge) == \
                lemma2_model(spec, k, n, g, z0, gauge)
        except ChartEscapeError:
            continue
        done += 1
        if not ok:
            return report("lemma2", params, False, {"g": g.to_json(), "z0": str(z0),
                                                    "connection": spec.to_json()})
    return report("lemma2", params, True, branch="split" if is_split(k, n) else "nonsplit")
