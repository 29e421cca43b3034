import pytest
from hypothesis import given, strategies as st

from conftest import scalars, series_at
from sl2jets.equiv import random_connection
from sl2jets.errors import SingularityError, UsageError
from sl2jets.exactnum import ONE, Poly, RatFun, TruncSeries, gr
from sl2jets.jets import FlatConnectionSpec, jet_of_series
from sl2jets.liftop import (
    DiffOperator, apply, as_jet_functional, composite_functional, derivative_operator,
    lift_functional, lift_symbol, nonlift_probe, symbol, verify_lift_naturality,
    verify_symbol_model,
)
from sl2jets.moebius import MoebiusMap, random_element
from sl2jets.sampling import random_scalar, stream

z = Poly.z()
polys = st.lists(scalars, max_size=4).map(Poly)


def test_apply_examples():
    s = TruncSeries([3, 1, 4, 1], 2, 3)
    assert apply(DiffOperator([1]), s) == s
    sq = TruncSeries([0, 0, 1], 5, 2)
    assert apply(derivative_operator(), sq) == TruncSeries([0, 2], 5, 1)
    mult = apply(DiffOperator([z]), TruncSeries.const(1, 3, 2))
    assert mult == TruncSeries([3, 1, 0], 3, 2)


def test_apply_errors():
    with pytest.raises(UsageError):
        apply(derivative_operator(2), TruncSeries([1, 2], 0, 1))
    D = DiffOperator([RatFun(Poly([1]), Poly([-1, 1]))])
    with pytest.raises(SingularityError):
        apply(D, TruncSeries([1, 1], 1, 1))
    with pytest.raises(SingularityError):
        as_jet_functional(D, 1)


def test_functional_examples():
    assert as_jet_functional(derivative_operator(3), 7) == [[0, 0, 0, 1]]
    assert as_jet_functional(DiffOperator([z + 1]), 2) == [[3]]


@given(st.lists(polys, min_size=1, max_size=4), scalars, st.data())
def test_functional_matches_apply(cs, z0, data):
    D = DiffOperator(cs)
    s = data.draw(series_at(z0, D.order))
    jet = jet_of_series(s)
    value = sum((a * b for a, b in zip(as_jet_functional(D, z0)[0], jet.values)), gr(0))
    assert apply(D, s).coeffs[0] == value


def test_demotion_and_symbol_examples():
    D = DiffOperator([Poly([5]), z, Poly([])])
    assert D.order == 1
    assert symbol(D).matrix == [[z]]
    assert symbol(derivative_operator(4)).matrix == [[ONE]]
    assert symbol(DiffOperator([z * z])).matrix == [[z * z]]
    assert symbol(DiffOperator([0, 1], n=2, n_out=0)).weight == 0


def test_json_roundtrip():
    D = DiffOperator([[[z, 1], [0, RatFun(Poly([1]), Poly([2, 1]))]], [[1, 0], [z, 3]]], n=-1)
    back = DiffOperator.from_json(D.to_json())
    assert back.coeffs == D.coeffs and (back.n, back.n_out) == (D.n, D.n_out)


@given(st.lists(polys, min_size=1, max_size=3), st.lists(polys, min_size=1, max_size=3), scalars)
def test_symbol_multiplicative(c1, c2, z0):
    D1, D2 = DiffOperator(c1), DiffOperator(c2)
    F = composite_functional(D1, D2, z0)
    top = symbol(D1).at(z0)[0][0] * symbol(D2).at(z0)[0][0]
    assert F[0][D1.order + D2.order] == top


def test_composite_of_derivatives():
    F = composite_functional(derivative_operator(1), DiffOperator([z, 1]), 2)
    # d(z s + s') = s + z s' + s''
    assert F == [[1, 2, 1]]


@pytest.mark.parametrize("k, n, branch", [(1, 3, "nonsplit"), (2, 0, "split-restriction"), (1, 0, "split-projection"),
                                          (3, -2, "nonsplit"), (4, 2, "split-restriction"), (3, 2, "split-projection")])
def test_symbol_model_examples(k, n, branch):
    assert verify_symbol_model(k, n, branch)["status"] == "pass"


def test_symbol_model_twisted():
    spec = FlatConnectionSpec([[z, Poly([1])], [Poly([0]), z * z]])
    for k, n in [(2, -1), (2, 0), (2, 1), (3, 4)]:
        assert verify_symbol_model(k, n, spec=spec)["status"] == "pass"


def test_symbol_model_wrong_branch():
    with pytest.raises(UsageError):
        verify_symbol_model(1, 3, "split-restriction")


def test_lift_order_zero_is_multiplication():
    theta = Poly([1, 2, 3])
    D = lift_symbol(theta, 0, -1, 2)
    assert D.order == 0 and D.coeffs[0] == [[theta]]


@pytest.mark.parametrize("n, l", [(1, 1), (-2, 1), (-1, 3), (2, 2), (-3, -1)])
def test_first_order_lift_oracle(n, l):
    # the projectively natural first-order operator is theta d - (n/l) theta'
    theta = Poly([gr(2), gr(-1, 1), 3]) if l > 1 or l < 0 else Poly([1, 2])
    D = lift_symbol(theta, 1, n, l)
    for z0 in (0, 3, gr(1, 2)):
        fun = as_jet_functional(D, z0)[0]
        assert fun[1] == theta(z0)
        assert fun[0] == -gr(n) / l * theta.deriv()(z0)


@given(st.integers(0, 3), st.sampled_from([(-1, 0), (-1, 2), (-2, -1), (0, 0), (1, 1)]),
       st.integers(0, 10**6))
def test_lift_symbol_is_theta(k, shift, seed):
    rng = stream(seed, "t")
    n = shift[0] if shift[0] < 0 else k + shift[0]
    l = k + shift[1] if shift[1] >= 0 else shift[1]
    theta = Poly([random_scalar(rng, 4) for _ in range(4)])
    D = lift_symbol(theta, k, n, l)
    assert D.order == k and symbol(D).matrix == [[theta]]
    assert symbol(D).weight == l


def test_lift_rank_two_naturality():
    rng = stream(3, "nat")
    spec = random_connection(rng, 2)
    theta = [[Poly([1, 2]), z], [Poly([3]), z * z]]
    D = lift_symbol(theta, 2, -1, 3, spec)
    assert symbol(D).matrix == [[Poly([1, 2]), z], [Poly([3]), z * z]]
    for _ in range(3):
        g = random_element(rng, 3)
        assert verify_lift_naturality(theta, 2, -1, 3, spec, g, random_scalar(rng, 3))


def test_lift_naturality_with_gauge():
    spec = FlatConnectionSpec([[z, Poly([1])], [Poly([2]), Poly([0, 0, 1])]])
    theta = [[Poly([1]), z], [z, Poly([2])]]
    g = MoebiusMap.from_matrix([[2, 1], [3, 2]])
    assert verify_lift_naturality(theta, 1, 2, 2, spec, g, gr(1, 3), gauge=[[1, 2], [0, 1]])


def test_lift_rational_theta():
    theta = RatFun(Poly([1]), Poly([1, 1]))
    D = lift_symbol(theta, 2, -1, -2)
    assert symbol(D).matrix == [[theta]]
    with pytest.raises(SingularityError):
        lift_functional(theta, 2, -1, -2, None, -1)


def test_lift_hypothesis():
    for k, n, l in [(2, 1, 3), (2, 2, 1), (2, -1, 1)]:
        with pytest.raises(UsageError):
            lift_symbol(Poly([1]), k, n, l)


@pytest.mark.parametrize("n", range(-4, 5))
def test_nonlift_probe(n):
    rep = nonlift_probe(n)
    assert rep["status"] == ("feasible" if n == 0 else "infeasible")
    if n == 0:
        assert rep["witness"]["operator"] == "d/dz"
