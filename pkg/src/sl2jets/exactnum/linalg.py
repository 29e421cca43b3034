"""Dense exact linear algebra over Q(i).

Matrices are lists of rows of GaussianRational.  Nullspaces come from
fraction-free elimination: rows are cleared to Gaussian integers and
reduced with Bareiss' exact-division step.  Large systems are realified
and handed to FLINT's integer nullspace, which is also fraction-free.
Both paths return the same canonical basis, so results never depend on
the backend.
"""

from math import lcm

from ..errors import SingularityError, UsageError
from gmpy2 import mpq

from .scalar import ONE, ZERO, GaussianRational, gr

try:
    import flint
except ImportError:  # pragma: no cover - flint is a declared dependency
    flint = None

LARGE_SYSTEM = 1000  # rows * cols above which the FLINT backend is used


def as_matrix(rows):
    return [[gr(x) for x in row] for row in rows]


def zeros(m, n=None):
    n = m if n is None else n
    return [[ZERO] * n for _ in range(m)]


def identity(n):
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def shape(A):
    return (len(A), len(A[0]) if A else 0)


def transpose(A):
    return [list(col) for col in zip(*A)] if A else []


def matmul(A, B):
    if A and B and len(A[0]) != len(B):
        raise UsageError(f"shape mismatch {shape(A)} x {shape(B)}")
    Bt = transpose(B)
    out = []
    for row in A:
        nz = [(k, a) for k, a in enumerate(row) if a]
        out.append([_dot_sparse(nz, col) for col in Bt])
    return out


def _dot_sparse(nz, col):
    acc = ZERO
    for k, a in nz:
        b = col[k]
        if b:
            acc = acc + a * b
    return acc


def matvec(A, v):
    return [_dot_sparse([(k, a) for k, a in enumerate(row) if a], v) for row in A]


def matadd(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def matsub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def matscale(c, A):
    c = gr(c)
    return [[c * a for a in row] for row in A]


def mat_eq(A, B):
    return shape(A) == shape(B) and all(a == b for ra, rb in zip(A, B) for a, b in zip(ra, rb))


def is_zero_matrix(A):
    return all(not a for row in A for a in row)


def kron(A, B):
    return [[a * b for a in ra for b in rb] for ra in A for rb in B]


def block_diag(*blocks):
    n = sum(len(b) for b in blocks)
    m = sum(len(b[0]) if b else 0 for b in blocks)
    out = zeros(n, m)
    r = c = 0
    for b in blocks:
        for i, row in enumerate(b):
            out[r + i][c:c + len(row)] = row
        r += len(b)
        c += len(b[0]) if b else 0
    return out


def hstack(*blocks):
    return [sum((list(b[i]) for b in blocks), []) for i in range(len(blocks[0]))]


def vstack(*blocks):
    return [list(r) for b in blocks for r in b]


def mat_str(A):
    return [[str(x) for x in row] for row in A]


def rref(A):
    """Reduced row echelon form over Q(i); returns (R, pivot_columns)."""
    R = [list(row) for row in A]
    m, n = shape(R)
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        p = next((i for i in range(r, m) if R[i][c]), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        inv = R[r][c].inverse()
        R[r] = [x * inv for x in R[r]]
        for i in range(m):
            if i != r and R[i][c]:
                f = R[i][c]
                R[i] = [x - f * y for x, y in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
    return R[:r], pivots


def rank(A):
    if not A or not A[0]:
        return 0
    return shape(A)[1] - len(exact_nullspace(A))


def det(A):
    m, n = shape(A)
    if m != n:
        raise UsageError("det of a non-square matrix")
    R = [list(row) for row in A]
    out = ONE
    for c in range(n):
        p = next((i for i in range(c, n) if R[i][c]), None)
        if p is None:
            return ZERO
        if p != c:
            R[c], R[p] = R[p], R[c]
            out = -out
        piv = R[c][c]
        out = out * piv
        inv = piv.inverse()
        for i in range(c + 1, n):
            if R[i][c]:
                f = R[i][c] * inv
                R[i] = [x - f * y for x, y in zip(R[i], R[c])]
    return out


def inverse(A):
    m, n = shape(A)
    if m != n:
        raise UsageError("inverse of a non-square matrix")
    R, piv = rref(hstack(A, identity(n)))
    if len(piv) < n or piv[n - 1] != n - 1:
        raise SingularityError("matrix is singular")
    return [row[n:] for row in R]


def solve(A, b):
    """One exact solution x of A x = b, or None when inconsistent."""
    n = shape(A)[1]
    aug = [list(row) + [gr(v)] for row, v in zip(A, b)]
    R, piv = rref(aug)
    if piv and piv[-1] == n:
        return None
    x = [ZERO] * n
    for row, c in zip(R, piv):
        x[c] = row[n]
    return x


# -- fraction-free nullspace ---------------------------------------------------

def _gaussian_integer_rows(A):
    """Scale each row by the lcm of its denominators; entries become (re, im) ints."""
    out = []
    for row in A:
        den = 1
        for x in row:
            if x.re.denominator != 1:
                den = lcm(den, int(x.re.denominator))
            if x.im.denominator != 1:
                den = lcm(den, int(x.im.denominator))
        out.append([(int(x.re * den), int(x.im * den)) for x in row])
    return out


def _gmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _gexact_div(a, b):
    # a / b is known to be a Gaussian integer
    n = b[0] * b[0] + b[1] * b[1]
    re = a[0] * b[0] + a[1] * b[1]
    im = a[1] * b[0] - a[0] * b[1]
    return (re // n, im // n)


def _bareiss(M):
    """Fraction-free echelon form over Z[i]; returns (rows, pivot_columns)."""
    M = [list(r) for r in M]
    m = len(M)
    n = len(M[0]) if M else 0
    prev = (1, 0)
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        p = next((i for i in range(r, m) if M[i][c] != (0, 0)), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        piv = M[r][c]
        for i in range(r + 1, m):
            a = M[i][c]
            row_i, row_r = M[i], M[r]
            new = []
            for j in range(n):
                if j < c:
                    new.append((0, 0))
                    continue
                x = _gmul(piv, row_i[j])
                if a != (0, 0):
                    y = _gmul(a, row_r[j])
                    x = (x[0] - y[0], x[1] - y[1])
                new.append(_gexact_div(x, prev) if prev != (1, 0) else x)
            M[i] = new
        prev = piv
        pivots.append(c)
        r += 1
    return M[:r], pivots


def _nullspace_bareiss(A):
    n = shape(A)[1]
    E, pivots = _bareiss(_gaussian_integer_rows(A))
    E = [[GaussianRational(re, im) for re, im in row] for row in E]
    free = [c for c in range(n) if c not in set(pivots)]
    basis = []
    for f in free:
        # back substitution on the echelon rows with x_f = 1, other free vars 0
        x = [ZERO] * n
        x[f] = ONE
        for row, c in reversed(list(zip(E, pivots))):
            acc = ZERO
            for j in range(c + 1, n):
                if x[j] and row[j]:
                    acc = acc + row[j] * x[j]
            x[c] = -acc / row[c]
        basis.append(x)
    return basis


def _flint_rref_complex(A):
    """Q(i)-RREF of A via the rational RREF of its realification.

    Columns are interleaved as (re_0, im_0, re_1, ...).  The real row space
    is closed under multiplication by i, so pivots come in pairs and the
    rows pivoting on a real slot encode the Q(i)-RREF rows.
    """
    m, n = shape(A)
    rows = _gaussian_integer_rows(A)
    if all(not im for row in rows for _, im in row):
        return _flint_rref_real(rows, m, n)
    flat = []
    for row in rows:
        for re, im in row:
            flat.extend((re, -im))
        for re, im in row:
            flat.extend((im, re))
    R, _den, rk = flint.fmpz_mat(2 * m, 2 * n, flat).rref()
    out, pivots = [], []
    for row in R.tolist()[:rk]:
        lead = next(c for c, x in enumerate(row) if x)
        if lead % 2:
            continue
        scale = int(row[lead])
        out.append([GaussianRational._raw(mpq(int(row[2 * i]), scale),
                                          mpq(-int(row[2 * i + 1]), scale))
                    for i in range(n)])
        pivots.append(lead // 2)
    return out, pivots


def _flint_rref_real(rows, m, n):
    R, _den, rk = flint.fmpz_mat(m, n, [re for row in rows for re, _ in row]).rref()
    out, pivots = [], []
    for row in R.tolist()[:rk]:
        lead = next(c for c, x in enumerate(row) if x)
        scale = int(row[lead])
        out.append([GaussianRational._raw(mpq(int(x), scale), _Q0) for x in row])
        pivots.append(lead)
    return out, pivots


_Q0 = mpq(0)


def _nullspace_flint(A):
    n = shape(A)[1]
    R, pivots = _flint_rref_complex(A)
    return _standard_basis(R, pivots, n)


def _standard_basis(R, pivots, n):
    pivset = set(pivots)
    basis = []
    for f in range(n):
        if f in pivset:
            continue
        x = [ZERO] * n
        x[f] = ONE
        for row, c in zip(R, pivots):
            x[c] = -row[f]
        basis.append(x)
    return basis


def exact_nullspace(M, backend=None, cols=None):
    """Canonical basis of the right nullspace of M over Q(i).

    One vector per non-pivot column f of the reduced echelon form, with a 1
    in slot f and 0 in the other non-pivot slots.  This basis depends only
    on the kernel, so both backends give identical output.  A matrix with no
    rows carries no width, so pass cols to get the full space back.
    """
    A = as_matrix(M) if M and M[0] and not isinstance(M[0][0], GaussianRational) else M
    if not A:
        return _standard_basis([], [], cols) if cols else []
    m, n = shape(A)
    if n == 0:
        return []
    if backend is None:
        backend = "flint" if flint is not None and m * n > LARGE_SYSTEM else "bareiss"
    if backend == "flint":
        if flint is None:
            raise UsageError("FLINT backend unavailable")
        return _nullspace_flint(A)
    elif backend == "bareiss":
        basis = _nullspace_bareiss(A)
    else:
        raise UsageError(f"unknown backend {backend!r}")
    return basis


def column_space_basis(vectors):
    """Q(i)-independent subset spanning the same space (rref rows)."""
    if not vectors:
        return []
    return rref(vectors)[0]
