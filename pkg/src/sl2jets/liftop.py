"""Differential operators in a chart, symbols, and the canonical lift of a symbol.

An order-k operator acts by (D s)(z) = sum_j c_j(z) s^(j)(z), with c_j an
r' x r matrix of rational functions.  At a point it is the functional
(a_0, ..., a_k) -> sum_j c_j(z0) a_j on raw-derivative jets.
"""

from functools import lru_cache
from math import factorial

from .errors import ChartEscapeError, SingularityError, UsageError, VerificationError
from .exactnum import (
    ONE, ZERO, Poly, RatFun, TruncSeries, as_ratfun, exact_nullspace, gr, interpolate, poly_gcd,
    inverse as mat_inverse, matmul, matvec, parse_scalar, series_mul, zeros,
)
from .equiv import (
    _generator_poly, is_split, iota_pinned_iso, report, thm1_iso, forgetful_model,
    polymat_eval,
)
from .jets import (
    FlatConnectionSpec, MatSeries, forgetful_matrix, jet_cocycle, transport_jet_matrix,
    transport_series, twisted_jet_cocycle,
)
from .moebius import MoebiusMap, act, automorphy
from .rep import SymVector, p0_pair
from .moebius import random_element
from .sampling import random_scalar, stream


class DiffOperator:
    """sum_j c_j(z) d^j / dz^j from E x L^n (rank r) to F x L^n' (rank r')."""

    def __init__(self, coeffs, n=0, n_out=None, chart="z"):
        if not coeffs:
            raise UsageError("an operator needs at least the order-0 coefficient")
        mats = []
        for c in coeffs:
            if not isinstance(c, (list, tuple)):
                c = [[c]]
            mats.append([[as_ratfun(x) for x in row] for row in c])
        shape = (len(mats[0]), len(mats[0][0]))
        if any((len(m), len(m[0])) != shape for m in mats):
            raise UsageError("all coefficients must share one shape")
        # demote while the top coefficient vanishes
        while len(mats) > 1 and all(not x for row in mats[-1] for x in row):
            mats.pop()
        self.coeffs = mats
        self.n = n
        self.n_out = n if n_out is None else n_out
        self.chart = chart

    @property
    def order(self):
        return len(self.coeffs) - 1

    @property
    def rank_in(self):
        return len(self.coeffs[0][0])

    @property
    def rank_out(self):
        return len(self.coeffs[0])

    def coefficient_at(self, j, z0):
        try:
            return [[x(z0) for x in row] for row in self.coeffs[j]]
        except SingularityError as exc:
            raise SingularityError(f"operator coefficient c_{j} has a pole at {z0}") from exc

    def to_json(self):
        return {
            "order": self.order,
            "weights": {"n": self.n, "l": 2 * self.order + self.n_out - self.n,
                        "n_out": self.n_out},
            "ranks": {"source": self.rank_in, "target": self.rank_out},
            "coeffs": [[{"num": [str(c) for c in x.num.coeffs] or ["0"],
                         "den": [str(c) for c in x.den.coeffs]}
                        for row in m for x in row] for m in self.coeffs],
        }

    @classmethod
    def from_json(cls, obj):
        ranks = obj.get("ranks", {"source": 1, "target": 1})
        r, rp = ranks["source"], ranks["target"]
        mats = []
        for flat in obj["coeffs"]:
            if len(flat) != r * rp:
                raise UsageError("coefficient count does not match the ranks")
            ents = [RatFun(Poly([parse_scalar(str(c)) for c in e["num"]]),
                           Poly([parse_scalar(str(c)) for c in e.get("den", ["1"])]))
                    for e in flat]
            mats.append([ents[i * r:(i + 1) * r] for i in range(rp)])
        w = obj.get("weights", {})
        n = w.get("n", 0)
        n_out = w.get("n_out")
        if n_out is None and "l" in w:
            n_out = w["l"] + n - 2 * (len(mats) - 1)
        return cls(mats, n, n_out)

    def __repr__(self):
        return f"DiffOperator(order={self.order}, coeffs={[[[str(x) for x in r] for r in m] for m in self.coeffs]})"


class SymbolSection:
    """Top coefficient of an operator, a section of Hom(E, F) x L^weight."""

    def __init__(self, matrix, weight):
        self.matrix = [[as_ratfun(x) for x in row] for row in matrix]
        self.weight = weight

    def at(self, z0):
        return [[x(z0) for x in row] for row in self.matrix]

    def __eq__(self, other):
        if isinstance(other, SymbolSection):
            return self.matrix == other.matrix and self.weight == other.weight
        return self.matrix == [[as_ratfun(x) for x in row] for row in other]

    def __repr__(self):
        return f"SymbolSection(weight={self.weight}, {[[str(x) for x in r] for r in self.matrix]})"


def derivative_operator(k=1, r=1):
    """d^k / dz^k on rank-r sections."""
    one = [[ONE if i == j else ZERO for j in range(r)] for i in range(r)]
    return DiffOperator([zeros(r)] * k + [one])


# -- action ------------------------------------------------------------------------

def _components(s):
    return [s] if isinstance(s, TruncSeries) else list(s)


def apply(D, s):
    """Sum_j c_j s^(j) as series of order (order of s) - k."""
    comps = _components(s)
    if len(comps) != D.rank_in:
        raise UsageError(f"operator expects {D.rank_in} components")
    K = comps[0].order
    m = K - D.order
    if m < 0:
        raise UsageError(f"series of order {K} too short for an order-{D.order} operator")
    z0 = comps[0].base_point
    derivs = []
    for c in comps:
        cur = list(c.coeffs)
        ds = []
        for j in range(D.order + 1):
            ds.append(TruncSeries(cur[:m + 1], z0, m))
            cur = [cur[i + 1] * (i + 1) for i in range(len(cur) - 1)]
        derivs.append(ds)
    out = []
    for e in range(D.rank_out):
        acc = TruncSeries.const(0, z0, m)
        for j in range(D.order + 1):
            for f in range(D.rank_in):
                coef = D.coeffs[j][e][f]
                if not coef:
                    continue
                try:
                    cs = TruncSeries.expand(coef, z0, m)
                except SingularityError as exc:
                    raise SingularityError(f"operator coefficient has a pole at {z0}") from exc
                acc = acc + series_mul(cs, derivs[f][j])
        out.append(acc)
    return out[0] if len(out) == 1 else out


def as_jet_functional(D, z0):
    """r' x (k+1) r matrix: block j is c_j(z0)."""
    z0 = gr(z0)
    r = D.rank_in
    out = [[ZERO] * ((D.order + 1) * r) for _ in range(D.rank_out)]
    for j in range(D.order + 1):
        c = D.coefficient_at(j, z0)
        for e in range(D.rank_out):
            for f in range(r):
                out[e][j * r + f] = c[e][f]
    return out


def symbol(D):
    return SymbolSection(D.coeffs[-1], 2 * D.order + D.n_out - D.n)


def composite_functional(D1, D2, z0):
    """Pointwise coefficients of D1 o D2, computed by applying both to (z - z0)^j / j!."""
    z0 = gr(z0)
    K = D1.order + D2.order
    r = D2.rank_in
    cols = []
    for j in range(K + 1):
        for f in range(r):
            basis = [TruncSeries([ZERO] * j + [gr(1) / factorial(j)], z0, K) if e == f
                     else TruncSeries.const(0, z0, K) for e in range(r)]
            inner = _components(apply(D2, basis))
            # pad inner series to order D1.order so D1 can act
            inner = [TruncSeries(x.coeffs, z0, D1.order) for x in inner]
            outer = _components(apply(D1, inner))
            cols.append([x.coeffs[0] for x in outer])
    return [[cols[c][e] for c in range(len(cols))] for e in range(D1.rank_out)]


# -- model symbol homomorphisms -------------------------------------------------------

def _twisted_iso(iso_at, P, k, r):
    """Lambda_P (Sigma x Id_r) at a point: model x E -> J^k(E x L^n)."""
    M = len(iso_at[0])
    Sx = zeros((k + 1) * r, M * r)
    for i in range(k + 1):
        for a in range(M):
            if iso_at[i][a]:
                for e in range(r):
                    Sx[i * r + e][a * r + e] = iso_at[i][a]
    return matmul(transport_jet_matrix(P, k), Sx)


def symbol_branch(k, n):
    if not is_split(k, n):
        return "nonsplit"
    return "split-projection" if k - 1 == n else "split-restriction"


def verify_symbol_model(k, n, branch=None, r=1, spec=None, seed=0, points=4):
    """The symbol of every basis operator equals the model homomorphism.

    Model side: restrict the functional, transported to the model through the
    iota-pinned isomorphism, to the tautological generator x^k (or
    0 + x^(k-n-1) in the split case).  Also checks the kernel statement of
    the iota line and, for k >= 1, the twisted truncation model.
    """
    actual = symbol_branch(k, n)
    if branch is not None and branch != actual:
        raise UsageError(f"(k, n) = ({k}, {n}) is in branch {actual}, not {branch}")
    spec = spec or FlatConnectionSpec.zero(r)
    r = spec.rank
    params = {"k": k, "n": n, "r": r}
    chain = thm1_iso(k, n, seed)
    pinned = iota_pinned_iso(k, n, seed)
    gen = _generator_poly(k, n)
    rng = stream(seed, "symbol-model", k, n, r)
    for _ in range(points):
        z0 = random_scalar(rng, 4)
        P = transport_series(spec.series(z0, k), k)
        Psi = _twisted_iso(pinned.at(z0), P, k, r)
        genv = [p(z0) for p in gen]
        # the generator lands on the iota line, with constant scale
        image = matvec(pinned.at(z0), genv)
        if any(image[:k]) or image[k] != ONE:
            return report("symbol", params, False, {"z0": str(z0), "check": "iota line"},
                          branch=actual)
        for j in range(k + 1):
            for a in range(r):
                for b in range(r):
                    coeffs = [zeros(r) for _ in range(k + 1)]
                    coeffs[j][a][b] = ONE
                    D = DiffOperator(coeffs, n)
                    fun = matmul(as_jet_functional(_pad(D, k), z0), Psi)
                    model = [sum((fun[e][idx * r + b] * genv[idx] for idx in range(len(genv))), ZERO)
                             for e in range(r)]
                    sym = [c[b] for c in (symbol(D).at(z0) if D.order == k else zeros(r))]
                    if model != sym:
                        return report("symbol", params, False,
                                      {"z0": str(z0), "operator": [j, a, b]}, branch=actual)
        if k >= 1:
            prev = thm1_iso(k - 1, n, seed)
            Pk1 = transport_series(spec.series(z0, k - 1), k - 1)
            lhs = matmul(forgetful_matrix(k, r), _twisted_iso(chain.at(z0), P, k, r))
            M = polymat_eval(forgetful_model(k, n)[0], z0)
            rhs = matmul(_twisted_iso(prev.at(z0), Pk1, k - 1, r), _kron_id(M, r))
            if lhs != rhs:
                return report("symbol", params, False, {"z0": str(z0), "check": "twisted truncation"},
                              branch=actual)
    return report("symbol", params, True, branch=actual,
                  symbol_scale=str(chain.symbol_scale))


def _pad(D, k):
    return D if D.order == k else _Padded(D, k)


class _Padded:
    """View of an operator with zero coefficients appended up to order k."""

    def __init__(self, D, k):
        self.D, self.order = D, k
        self.rank_in, self.rank_out = D.rank_in, D.rank_out

    def coefficient_at(self, j, z0):
        if j <= self.D.order:
            return self.D.coefficient_at(j, z0)
        return zeros(self.rank_out, self.rank_in)


def _kron_id(M, r):
    out = zeros(len(M) * r, len(M[0]) * r)
    for i, row in enumerate(M):
        for j, x in enumerate(row):
            if x:
                for e in range(r):
                    out[i * r + e][j * r + e] = x
    return out


# -- lifting a symbol ---------------------------------------------------------------

@lru_cache(maxsize=None)
def _p0_table(k):
    return tuple(tuple(p0_pair(k, SymVector.monomial(k, a), SymVector.monomial(k, b))
                       for b in range(k + 1)) for a in range(k + 1))


def check_lift_hypothesis(k, n, l):
    if k < 0:
        raise UsageError("order must be >= 0")
    if not (n < 0 or (n >= k and l >= k)):
        raise UsageError("lifting needs n < 0, or n >= k and l >= k")
    if 0 <= l < k:
        raise UsageError("J^k(L^l) splits for 0 <= l < k; theta has no V_k form")


def _theta_matrix(theta0):
    if isinstance(theta0, (Poly, RatFun)) or not isinstance(theta0, (list, tuple)):
        theta0 = [[theta0]]
    return [[as_ratfun(x) for x in row] for row in theta0]


def lift_functional(theta0, k, n, l, spec, z0, seed=0):
    """The canonical lift T_theta at z0, as an r x (k+1) r jet functional."""
    check_lift_hypothesis(k, n, l)
    theta = _theta_matrix(theta0)
    spec = spec or FlatConnectionSpec.zero(len(theta))
    r = spec.rank
    if len(theta) != r:
        raise UsageError("theta0 rank does not match the connection")
    z0 = gr(z0)
    P = transport_series(spec.series(z0, k), k)
    Q = P.inverse()
    try:
        th = MatSeries.expand(theta, z0, k)
    except SingularityError as exc:
        raise SingularityError(f"theta0 has a pole at {z0}") from exc
    Y = Q * th * P  # theta in the flat frame of End(E)
    src = iota_pinned_iso(k, n, seed).inverse_at(z0)
    tgt = thm1_iso(k, l, seed).inverse_at(z0)
    table = _p0_table(k)
    W = zeros(r, (k + 1) * r)
    for e in range(r):
        for f in range(r):
            jet = [Y.coeffs[j][e][f] * factorial(j) for j in range(k + 1)]
            theta_hat = matvec(tgt, jet)
            pi = matvec(table, theta_hat)  # a -> p0(mono_a, theta_hat)
            row = [sum((pi[a] * src[a][j] for a in range(k + 1) if pi[a]), ZERO)
                   for j in range(k + 1)]
            for j in range(k + 1):
                W[e][j * r + f] = row[j]
    return matmul(W, transport_jet_matrix(Q, k))


def _common_denominator(mats):
    den = Poly.const(1)
    for m in mats:
        for row in m:
            for x in row:
                if x.den.degree > 0:
                    g = poly_gcd(den, x.den)
                    den = den * x.den.divmod(g)[0]
    return den


def interpolate_functional(fn, rows, cols, den, seed, label, start_degree=4):
    """Recover a matrix of rational functions num/den from exact point values.

    The numerators are interpolated on a growing set of points until they
    agree with fresh points.
    """
    rng = stream(seed, "interp", label)
    pts, vals = [], []
    deg = start_degree
    z = 0
    while True:
        while len(pts) < deg + 1:
            z += 1
            zz = gr(z)
            dv = den(zz)
            if not dv:
                continue
            try:
                v = fn(zz)
            except (SingularityError, ArithmeticError):
                continue
            pts.append(zz)
            vals.append([[x * dv for x in row] for row in v])
        polys = [[interpolate(pts, [v[i][j] for v in vals]) for j in range(cols)]
                 for i in range(rows)]
        ok = True
        checked = 0
        while checked < 3:
            zz = random_scalar(rng, 7)
            dv = den(zz)
            if not dv:
                continue
            try:
                v = fn(zz)
            except (SingularityError, ArithmeticError):
                continue
            checked += 1
            if any(polys[i][j](zz) != v[i][j] * dv for i in range(rows) for j in range(cols)):
                ok = False
                break
        if ok:
            return [[RatFun(p, den) for p in row] for row in polys]
        deg *= 2
        if deg > 512:
            raise VerificationError("interpolation did not converge")


def lift_symbol(theta0, k, n, l, spec=None, seed=0):
    """T_theta as a DiffOperator E x L^n -> E x L^(l+n-2k)."""
    check_lift_hypothesis(k, n, l)
    theta = _theta_matrix(theta0)
    spec = spec or FlatConnectionSpec.zero(len(theta))
    r = spec.rank
    den = _common_denominator([theta]) ** (k + 1)
    for row in spec.matrix:
        for x in row:
            if isinstance(x, RatFun) and x.den.degree > 0:
                raise UsageError("lift_symbol interpolates polynomial connections only")
    fn = lambda z: lift_functional(theta, k, n, l, spec, z, seed)  # noqa: E731
    mats = interpolate_functional(fn, r, (k + 1) * r, den, seed, ("lift", k, n, l))
    coeffs = [[[mats[e][j * r + f] for f in range(r)] for e in range(r)] for j in range(k + 1)]
    return DiffOperator(coeffs, n, l + n - 2 * k)


def pull_back_theta(theta0, l, g, gauge=None):
    """theta in the source chart: mu_l(g, z) G theta0(g z) G^-1 (G constant)."""
    theta = _theta_matrix(theta0)
    gz = RatFun(Poly([g.b, g.a]), Poly([g.d, g.c]))
    mu = RatFun(Poly([g.d, g.c])) ** l
    comp = [[_compose_ratfun(x, gz) * mu for x in row] for row in theta]
    if gauge is None:
        return comp
    G = [[gr(x) for x in row] for row in gauge]
    Gi = mat_inverse(G)
    return _ratmat_mul(_ratmat_mul([[as_ratfun(x) for x in row] for row in G], comp),
                       [[as_ratfun(x) for x in row] for row in Gi])


def pull_back_connection(spec, g, gauge=None):
    """A_src(z) = G A(g z) g'(z) G^-1 for a constant gauge G."""
    gz = RatFun(Poly([g.b, g.a]), Poly([g.d, g.c]))
    dg = RatFun(Poly([g.d, g.c])) ** -2
    A = [[_compose_ratfun(as_ratfun(x), gz) * dg for x in row] for row in spec.matrix]
    if gauge is not None:
        G = [[as_ratfun(gr(x)) for x in row] for row in gauge]
        Gi = [[as_ratfun(x) for x in row] for row in mat_inverse([[gr(x) for x in row] for row in gauge])]
        A = _ratmat_mul(_ratmat_mul(G, A), Gi)
    return FlatConnectionSpec(A)


def _compose_ratfun(f, h):
    f = as_ratfun(f)
    num = _compose_poly(f.num, h)
    den = _compose_poly(f.den, h)
    return num / den


def _compose_poly(p, h):
    acc = as_ratfun(0)
    for c in reversed(p.coeffs):
        acc = acc * h + c
    return acc


def _ratmat_mul(A, B):
    return [[sum((A[i][t] * B[t][j] for t in range(len(B))), as_ratfun(0))
             for j in range(len(B[0]))] for i in range(len(A))]


def verify_lift_naturality(theta0, k, n, l, spec, g, z0, gauge=None, seed=0):
    """F_src(z0) T^E(g, z0) = mu_(l+n-2k)(g, z0) G F_tgt(g z0), data pulled back by g."""
    z0 = gr(z0)
    w0 = act(g, z0)
    spec = spec or FlatConnectionSpec.zero(len(_theta_matrix(theta0)))
    F_tgt = lift_functional(theta0, k, n, l, spec, w0, seed)
    F_src = lift_functional(pull_back_theta(theta0, l, g, gauge), k, n, l,
                            pull_back_connection(spec, g, gauge), z0, seed)
    T = twisted_jet_cocycle(spec, k, n, g, z0, gauge)
    mu = automorphy(l + n - 2 * k, g, z0)
    G = [[gr(x) for x in row] for row in gauge] if gauge is not None else None
    rhs = [[mu * x for x in row] for row in F_tgt]
    if G is not None:
        rhs = matmul(G, rhs)
    return matmul(F_src, T) == rhs


def verify_thm2(theta0, k, n, l, spec=None, seed=0, naturality=5):
    theta = _theta_matrix(theta0)
    r = len(theta)
    params = {"k": k, "n": n, "l": l, "r": r}
    D = lift_symbol(theta, k, n, l, spec, seed)
    sym = symbol(D)
    if D.order != k or sym.matrix != theta:
        return report("thm2", params, False,
                      {"theta0": [[str(x) for x in row] for row in theta],
                       "symbol": [[str(x) for x in row] for row in sym.matrix]})
    if sym.weight != l:
        return report("thm2", params, False, {"weight": sym.weight})
    rng = stream(seed, "thm2-naturality", k, n, l, r)
    done = 0
    while done < naturality:
        g = random_element(rng, 3)
        z0 = random_scalar(rng, 3)
        try:
            ok = verify_lift_naturality(theta, k, n, l, spec, g, z0, seed=seed)
        except (ChartEscapeError, SingularityError):
            continue
        done += 1
        if not ok:
            return report("thm2", params, False, {"g": g.to_json(), "z0": str(z0),
                                                  "check": "naturality"})
    return report("thm2", params, True, operator=D.to_json())


# -- first-order lifts on P^1 ----------------------------------------------------------

def nonlift_probe(n, degree=None, seed=0):
    """Is there a global first-order operator L^n -> L^n x K with symbol 1 on P^1?

    Charts z and w = -1/z.  In each chart the operator is d + c0 with c0 a
    polynomial of degree <= degree; the chart change is the inversion.  The
    compatibility is a homogeneous linear system in (c0, c0~, t) where t is
    the common symbol; a solution with t = 1 is a lift.
    """
    D = degree if degree is not None else abs(n) + 3
    S = MoebiusMap.inversion()
    U = 2 * (D + 1) + 1
    rows = []
    rng = stream(seed, "nonlift", n)
    count = 0
    while count < 2 * D + 6:
        z0 = random_scalar(rng, 5)
        if not z0:
            continue
        count += 1
        w0 = act(S, z0)
        T = jet_cocycle(1, n, S, z0)
        mu = automorphy(n - 2, S, z0)
        zp = [z0 ** i for i in range(D + 1)]
        wp = [w0 ** i for i in range(D + 1)]
        for col in range(2):
            # (c0(z0), t) T[:, col] - mu (c0~(w0), t)[col] = 0
            row = [ZERO] * U
            for i in range(D + 1):
                row[i] = zp[i] * T[0][col]
                if col == 0:
                    row[D + 1 + i] = -mu * wp[i]
            row[-1] = T[1][col] - (mu if col == 1 else ZERO)
            rows.append(row)
    basis = exact_nullspace(rows)
    lifts = [v for v in basis if v[-1]]
    params = {"n": n, "degree_bound": D}
    if not lifts:
        return {"claim": "remark", "params": params, "status": "infeasible",
                "witness": {"null_dimension": len(basis)}}
    v = [x / lifts[0][-1] for x in lifts[0]]
    c0 = Poly(v[:D + 1])
    c0t = Poly(v[D + 1:2 * D + 2])
    witness = {"c0": str(c0), "c0_inverted_chart": str(c0t),
               "operator": "d/dz" if not c0 and not c0t else "d/dz + c0"}
    return {"claim": "remark", "params": params, "status": "feasible", "witness": witness}
