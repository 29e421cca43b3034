from itertools import product
from math import comb

import pytest
from hypothesis import given, strategies as st

from conftest import scalars
from sl2jets.errors import UsageError
from sl2jets.exactnum import (
    ONE, ZERO, det, exact_nullspace, gr, kron, matmul, matvec, rank,
)
from sl2jets.moebius import MoebiusMap, compose, random_element
from sl2jets.rep import (
    E1, E2, SymVector, clebsch_compose, clebsch_decompose, contract_line, dual_pair, dual_rep,
    form_mul, mult_line, omega_pair, p0_pair, psi_iso, sym_power, sym_rep, tensor, transvectant,
)

seeds = st.integers(0, 10**6)
vec1 = st.lists(scalars, min_size=2, max_size=2).map(SymVector)


def forms(k):
    return st.lists(scalars, min_size=k + 1, max_size=k + 1).map(SymVector)


# -- brute-force oracle: binary forms as symmetric tensors contracted with omega --

OMEGA = {(0, 1): 1, (1, 0): -1}


def to_tensor(f):
    m = len(f) - 1
    return {idx: gr(f[sum(idx)]) / comb(m, sum(idx)) for idx in product((0, 1), repeat=m)}


def to_form(T, m):
    out = [ZERO] * (m + 1)
    for idx, c in T.items():
        out[sum(idx)] = out[sum(idx)] + c
    return SymVector(out)


def oracle_transvectant(i, f, g):
    m, n = len(f) - 1, len(g) - 1
    Tf, Tg = to_tensor(f), to_tensor(g)
    R = {}
    for a, cf in Tf.items():
        for b, cg in Tg.items():
            w = 1
            for x, y in zip(a[:i], b[:i]):
                w *= OMEGA.get((x, y), 0)
            if w:
                key = a[i:] + b[i:]
                R[key] = R.get(key, ZERO) + cf * cg * w
    return to_form(R, m + n - 2 * i)


def test_sym_rep_examples():
    g = random_element(3)
    assert sym_rep(1, g) == g.matrix()
    assert sym_rep(0, g) == [[ONE]]
    t = gr(3, 1)
    D = sym_rep(2, MoebiusMap.diagonal(t))
    assert D == [[t * t, ZERO, ZERO], [ZERO, ONE, ZERO], [ZERO, ZERO, 1 / (t * t)]]


@given(seeds, seeds, st.integers(0, 5))
def test_sym_rep_homomorphism(s1, s2, k):
    g1, g2 = random_element(s1), random_element(s2)
    assert sym_rep(k, compose(g2, g1)) == matmul(sym_rep(k, g2), sym_rep(k, g1))
    assert dual_rep(k, compose(g2, g1)) == matmul(dual_rep(k, g2), dual_rep(k, g1))
    assert det(sym_rep(k, g1)) == ONE


@given(seeds, st.integers(0, 4), st.data())
def test_sym_rep_acts_on_powers(s, k, data):
    g = random_element(s)
    v = data.draw(vec1)
    assert matvec(sym_rep(k, g), sym_power(v, k)) == list(sym_power(matvec(g.matrix(), v), k))


def test_omega_examples():
    assert omega_pair(E1, E2) == ONE
    assert omega_pair(SymVector([2, 1]), SymVector([1, -1])) == gr(-3)
    with pytest.raises(UsageError):
        omega_pair([1, 0, 0], E1)


@given(vec1, vec1, seeds)
def test_omega_invariant_antisymmetric(u, v, s):
    g = random_element(s).matrix()
    assert omega_pair(u, u) == ZERO
    assert omega_pair(u, v) == -omega_pair(v, u)
    assert omega_pair(matvec(g, u), matvec(g, v)) == omega_pair(u, v)


@given(vec1, vec1)
def test_psi_iso(alpha, u):
    assert psi_iso([0, 1]) == E1
    assert psi_iso([1, 0]) == -E2
    assert psi_iso([0, 0]).is_zero()
    assert omega_pair(psi_iso(alpha), u) == alpha[0] * u[0] + alpha[1] * u[1]


def test_mult_line_examples():
    assert mult_line(E1, SymVector.monomial(3, 0)) == SymVector.monomial(4, 0)
    assert mult_line(E2, E1) == SymVector([0, 1, 0])
    v = SymVector(["1+i", 3])
    assert mult_line(v, SymVector([1])) == v


def test_contract_examples():
    for j in range(1, 5):
        assert contract_line(E1, SymVector.monomial(j, 0)) == SymVector.monomial(j - 1, 0)
        assert contract_line(E2, SymVector.monomial(j, 0)).is_zero()
    ones = SymVector([1, 1])
    assert contract_line(ones, sym_power(ones, 2)) == ones.scale(2)
    with pytest.raises(UsageError):
        contract_line(E1, SymVector([1]))


@given(vec1, vec1, st.integers(1, 5))
def test_contract_rank_one(alpha, v, j):
    a = alpha[0] * v[0] + alpha[1] * v[1]
    assert contract_line(v, sym_power(alpha, j)) == sym_power(alpha, j - 1).scale(a)


@given(seeds, vec1, st.integers(1, 4), st.data())
def test_mult_contract_equivariant(s, v, j, data):
    g = random_element(s)
    G = g.matrix()
    gv = SymVector(matvec(G, v))
    S = data.draw(forms(j))
    assert mult_line(gv, matvec(sym_rep(j, g), S)) == SymVector(matvec(sym_rep(j + 1, g), mult_line(v, S)))
    F = data.draw(forms(j))
    assert contract_line(gv, matvec(dual_rep(j, g), F)) == SymVector(
        matvec(dual_rep(j - 1, g), contract_line(v, F)))


@pytest.mark.parametrize("j", [1, 2, 3, 4])
def test_contract_kernel_is_annihilator(j):
    v = SymVector(["2-i", "1/3"])
    C = [[contract_line(v, SymVector.monomial(j, a))[r] for a in range(j + 1)] for r in range(j)]
    # <F, v S> for S in a basis of Sym^(j-1)
    A = [[dual_pair(SymVector.monomial(j, a), mult_line(v, SymVector.monomial(j - 1, b)))
          for a in range(j + 1)] for b in range(j)]
    assert exact_nullspace(C) == exact_nullspace(A)
    assert rank(C) == j


def test_transvectant_examples():
    f, g = SymVector(["1", "2+i"]), SymVector(["-1/2", "3", "i"])
    assert transvectant(0, f, g) == form_mul(f, g)
    assert transvectant(1, E1, E2) == SymVector([1])
    t = transvectant(1, SymVector([1, 0, 0]), SymVector([0, 1, 0]))
    assert t == oracle_transvectant(1, [1, 0, 0], [0, 1, 0])
    assert t[0] and not t[1] and not t[2]
    with pytest.raises(UsageError):
        transvectant(2, E1, SymVector([1, 0, 0]))


@given(st.integers(0, 4), st.integers(0, 4), st.data())
def test_transvectant_matches_oracle(m, n, data):
    f, g = data.draw(forms(m)), data.draw(forms(n))
    i = data.draw(st.integers(0, min(m, n)))
    assert transvectant(i, f, g) == oracle_transvectant(i, f, g)


@given(seeds, st.integers(0, 3), st.integers(0, 3), st.data())
def test_transvectant_equivariant(s, m, n, data):
    g = random_element(s)
    f, h = data.draw(forms(m)), data.draw(forms(n))
    i = data.draw(st.integers(0, min(m, n)))
    lhs = transvectant(i, matvec(sym_rep(m, g), f), matvec(sym_rep(n, g), h))
    assert list(lhs) == matvec(sym_rep(m + n - 2 * i, g), transvectant(i, f, h))


def test_p0_examples():
    assert p0_pair(1, E1, E2) == ONE
    assert p0_pair(2, [1, 0, 0], [0, 0, 1]) == ONE
    assert p0_pair(2, [1, 0, 0], [0, 1, 0]) == ZERO
    with pytest.raises(UsageError):
        p0_pair(2, [1, 0, 0], [1, 0])


@given(vec1, vec1, st.integers(0, 5), seeds)
def test_p0_pin_and_invariance(v, u, k, s):
    lam = omega_pair(v, u)
    A, B = sym_power(v, k), sym_power(u, k)
    assert p0_pair(k, A, B) == lam ** k
    R = sym_rep(k, random_element(s))
    assert p0_pair(k, matvec(R, A), matvec(R, B)) == p0_pair(k, A, B)


@pytest.mark.parametrize("m, n, dims", [(1, 1, [3, 1]), (2, 1, [4, 2]), (0, 0, [1]), (1, 3, [5, 3])])
def test_clebsch_dimensions(m, n, dims):
    T = [gr(i + 1) for i in range((m + 1) * (n + 1))]
    assert [len(c) for c in clebsch_decompose(m, n, T)] == dims
    zero = clebsch_decompose(m, n, tensor(SymVector([1] * (m + 1)), SymVector.zero(n)))
    assert all(c.is_zero() for c in zero)


def test_clebsch_scalar_case():
    assert clebsch_compose(0, 0, [SymVector(["5"])]) == [gr(5)]
    assert clebsch_compose(1, 1, [SymVector.zero(2), SymVector.zero(0)]) == [ZERO] * 4
    with pytest.raises(UsageError):
        clebsch_compose(1, 1, [SymVector.zero(2)])


@given(st.integers(0, 5), st.integers(0, 5), st.data())
def test_clebsch_roundtrip(m, n, data):
    T = data.draw(st.lists(scalars, min_size=(m + 1) * (n + 1), max_size=(m + 1) * (n + 1)))
    comps = clebsch_decompose(m, n, T)
    assert clebsch_compose(m, n, comps) == T
    assert clebsch_decompose(m, n, clebsch_compose(m, n, comps)) == comps


@given(seeds, st.integers(0, 3), st.integers(0, 3), st.data())
def test_clebsch_equivariant(s, m, n, data):
    g = random_element(s)
    T = data.draw(st.lists(scalars, min_size=(m + 1) * (n + 1), max_size=(m + 1) * (n + 1)))
    gT = matvec(kron(sym_rep(m, g), sym_rep(n, g)), T)
    for i, (a, b) in enumerate(zip(clebsch_decompose(m, n, gT), clebsch_decompose(m, n, T))):
        assert list(a) == matvec(sym_rep(m + n - 2 * i, g), b)
