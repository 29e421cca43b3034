from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, strategies as st

from conftest import scalars, series_at
from sl2jets.errors import SingularityError, UsageError
from sl2jets.exactnum import (
    ONE, ZERO, GaussianRational, Poly, RatFun, TruncSeries, as_matrix, det, exact_nullspace,
    format_scalar, gr, identity, interpolate, inverse, is_zero_matrix, matmul, parse_scalar,
    rank, series_compose, series_mul, series_reciprocal, transpose, zeros,
)


@pytest.mark.parametrize("text, re, im", [
    ("3/4+1/2i", Fraction(3, 4), Fraction(1, 2)),
    ("-2", -2, 0),
    ("0+1i", 0, 1),
    ("i", 0, 1),
    ("-1/3i", 0, Fraction(-1, 3)),
    ("2-i", 2, -1),
    ("6/4", Fraction(3, 2), 0),
])
def test_parse_literals(text, re, im):
    assert parse_scalar(text) == GaussianRational(re, im)


@pytest.mark.parametrize("bad", ["", "x", "1/0", "1+", "3 4", "2+3", "1.5"])
def test_parse_rejects(bad):
    with pytest.raises(UsageError):
        parse_scalar(bad)


@given(scalars)
def test_format_roundtrip(x):
    assert parse_scalar(format_scalar(x)) == x


def test_format_shape():
    assert format_scalar(gr(0, 1)) == "0+1i"
    assert format_scalar(gr(Fraction(3, 4), Fraction(-1, 2))) == "3/4-1/2i"
    assert format_scalar(gr(-2)) == "-2"


@given(scalars, scalars, scalars)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == ZERO
    if a:
        assert a * a.inverse() == ONE


@given(scalars)
def test_reduced_form(a):
    for q in (a.re, a.im, (a * a).re, (a + ONE).im):
        assert q.denominator > 0
        assert gcd(int(q.numerator), int(q.denominator)) == 1


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO


def test_series_examples():
    one_plus = TruncSeries([1, 1, 0], 0, 2)
    one_minus = TruncSeries([1, -1, 0], 0, 2)
    assert series_mul(one_plus, one_minus).coeffs == (ONE, ZERO, -ONE)
    f = TruncSeries([1, 2, 1], 0, 2)
    assert series_mul(f, TruncSeries([3, 1], 0, 2)).coeffs == (gr(3), gr(7), gr(5))
    assert series_mul(f, TruncSeries.const(1, 0, 2)) == f
    # t^2 expanded at t = 1 composed with 1 + s
    sq = TruncSeries.expand(Poly([0, 0, 1]), 1, 2)
    assert series_compose(sq, TruncSeries([1, 1], 0, 2)).coeffs == (ONE, gr(2), ONE)
    assert series_compose(TruncSeries([1, 1], 0, 3), TruncSeries([0, 2], 0, 3)).coeffs == (
        ONE, gr(2), ZERO, ZERO)
    assert series_reciprocal(TruncSeries([1, 1], 0, 2)).coeffs == (ONE, -ONE, ONE)
    assert series_reciprocal(TruncSeries([2], 0, 0)).coeffs == (gr(Fraction(1, 2)),)


def test_series_errors():
    with pytest.raises(UsageError):
        series_mul(TruncSeries([1], 0, 2), TruncSeries([1], 1, 2))
    with pytest.raises(UsageError):
        series_mul(TruncSeries([1], 0, 2), TruncSeries([1], 0, 3))
    with pytest.raises(UsageError):
        series_compose(TruncSeries([1], 5, 2), TruncSeries([1, 1], 0, 2))
    with pytest.raises(SingularityError):
        series_reciprocal(TruncSeries([0, 1], 0, 2))


@given(series_at(gr(1, 2), 3), series_at(gr(1, 2), 3), series_at(gr(1, 2), 3))
def test_series_ring(f, g, h):
    assert series_mul(series_mul(f, g), h) == series_mul(f, series_mul(g, h))
    if f.coeffs[0]:
        assert series_mul(f, series_reciprocal(f)) == TruncSeries.const(1, f.base_point, 3)


@given(st.lists(scalars, min_size=3, max_size=3), st.lists(scalars, min_size=3, max_size=3))
def test_truncated_product_matches_full(a, b):
    full = Poly(a) * Poly(b)
    assert series_mul(TruncSeries(a, 0, 2), TruncSeries(b, 0, 2)).coeffs == tuple(
        (list(full.coeffs) + [ZERO] * 5)[:3])


@given(series_at(gr(0), 3), st.lists(scalars, min_size=3, max_size=3),
       st.lists(scalars, min_size=3, max_size=3), scalars)
def test_compose_associative(f, gtail, htail, p):
    # h: p -> q, g: q -> base of f
    h = TruncSeries([gr(2)] + htail, p, 3)
    g = TruncSeries([f.base_point] + gtail, gr(2), 3)
    assert series_compose(series_compose(f, g), h) == series_compose(f, series_compose(g, h))


def test_series_expand_ratfun():
    r = RatFun(Poly([1]), Poly([1, -1]))
    assert TruncSeries.expand(r, 0, 3).coeffs == (ONE,) * 4
    with pytest.raises(SingularityError):
        TruncSeries.expand(r, 1, 2)


@given(st.lists(scalars, max_size=4), st.lists(scalars, min_size=1, max_size=3).filter(
    lambda c: any(c)))
def test_poly_divmod(a, b):
    pa, pb = Poly(a), Poly(b)
    q, r = pa.divmod(pb)
    assert q * pb + r == pa
    assert r.degree < pb.degree or not r


def test_ratfun_reduced():
    z = Poly.z()
    r = RatFun(z * z - 1, z - 1)
    assert r.is_polynomial() and r.num == z + 1
    assert (r - (z + 1)) == 0
    s = RatFun(Poly([1]), z)
    assert s.deriv() == RatFun(Poly([-1]), z * z)


@given(st.lists(scalars, min_size=1, max_size=5))
def test_interpolate(vals):
    pts = list(range(len(vals)))
    p = interpolate(pts, vals)
    assert all(p(x) == v for x, v in zip(pts, vals))
    assert p.degree < len(vals)


def test_nullspace_examples():
    assert exact_nullspace(identity(3)) == []
    assert len(exact_nullspace(zeros(2, 3))) == 3
    (v,) = exact_nullspace(as_matrix([[1, 1, 0], [0, 0, 1]]))
    assert v[0] == -v[1] and v[0] and not v[2]


@given(st.integers(1, 5), st.integers(1, 6), st.data())
def test_nullspace_rank_nullity(m, n, data):
    r = data.draw(st.integers(0, min(m, n)))
    B = data.draw(st.lists(st.lists(scalars, min_size=r, max_size=r), min_size=m, max_size=m))
    C = data.draw(st.lists(st.lists(scalars, min_size=n, max_size=n), min_size=r, max_size=r))
    A = matmul(B, C) if r else zeros(m, n)
    ns = exact_nullspace(A, backend="bareiss")
    assert not ns or is_zero_matrix(matmul(A, transpose(ns)))
    assert rank(A) + len(ns) == n
    assert exact_nullspace(A, backend="flint") == ns


def test_inverse_det():
    A = as_matrix([[1, 2], ["i", 3]])
    assert matmul(A, inverse(A)) == identity(2)
    assert det(A) == gr(3) - gr(0, 2)
    with pytest.raises(SingularityError):
        inverse(as_matrix([[1, 2], [2, 4]]))
