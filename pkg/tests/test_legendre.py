"""Tests for Legendre transforms and the node identity"""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from errors import ProfileError, TruncationError, UnknownRegionError
from legendre import (
    ConcaveTransform,
    HypothesisCertificate,
    corollary1_check,
    inverse_legendre,
    legendre_eval,
    legendre_full,
    rescale_transform,
    validity_floor,
)
from newton import ConvexProfile, PolygonTail, frobenius_polygon, minkowski_product
from verification import grid_legendre
from strategies import parameters, polygons


@pytest.mark.parametrize("t,expected", [
    (Fraction(1), Fraction(2)),
    (Fraction(1, 4), Fraction(3, 4)),
    (Fraction(5), Fraction(3)),
    (Fraction(0), Fraction(0)),
])
def test_eval(three_node_polygon, t, expected):
    result = legendre_eval(three_node_polygon, t)
    assert result.value == expected and result.exact


def test_full_description(three_node_polygon):
    T = legendre_full(three_node_polygon)
    assert T.breakpoints == ((2, 3), (Fraction(1, 2), Fraction(3, 2)))
    assert T.slopes == (0, 1, 3)
    assert T.value_at_zero == 0
    assert T.validity_floor == 0


def test_negative_t(three_node_polygon):
    with pytest.raises(ProfileError):
        legendre_eval(three_node_polygon, -1)


def test_dict_shape(three_node_polygon):
    T = legendre_full(three_node_polygon)
    data = T.to_dict()
    assert data["breakpoints"] == [["2", "3"], ["1/2", "3/2"]]
    assert data["value_at_zero"] == "0"
    assert ConcaveTransform.from_dict(data) == T


def test_csv(three_node_polygon):
    T = legendre_full(three_node_polygon)
    assert T.to_csv([1, Fraction(1, 4)]) == "t,L\n1,2\n1/4,3/4\n"


def test_discontinuous_transform_rejected():
    with pytest.raises(ProfileError):
        ConcaveTransform(((Fraction(1), Fraction(5)),), (0, 1), (Fraction(3), Fraction(1)))


class TestTruncated:
    @pytest.fixture
    def truncated(self):
        return ConvexProfile(((0, 3), (1, 1)), PolygonTail.TRUNCATED, 1)

    def test_floor(self, truncated):
        assert validity_floor(truncated) == 1

    def test_below_floor(self, truncated):
        T = legendre_full(truncated)
        assert T.value_at_zero is None
        assert T.evaluate(1) == 2
        with pytest.raises(UnknownRegionError):
            T.evaluate(Fraction(1, 2))

    def test_uncertified_eval(self, truncated):
        assert not legendre_eval(truncated, Fraction(1, 2)).exact

    def test_inverse_needs_floor_zero(self, truncated):
        with pytest.raises(TruncationError):
            inverse_legendre(legendre_full(truncated))

    def test_zero_minimum_pins_value_at_zero(self):
        P = ConvexProfile(((0, 2), (2, 0)), PolygonTail.TRUNCATED, 5)
        T = legendre_full(P)
        assert T.validity_floor == 0 and T.value_at_zero == 0


class TestCorollary:
    def test_second_node(self, three_node_polygon):
        result = corollary1_check(three_node_polygon, 2)
        assert result.lhs == result.rhs == 1
        assert result.holds

    def test_needs_certificate_when_truncated(self):
        P = ConvexProfile(((0, 3), (1, 1), (2, 0)), PolygonTail.TRUNCATED, 9)
        with pytest.raises(TruncationError):
            corollary1_check(P, 1)
        certificate = HypothesisCertificate("s_i n_(i+1) -> 0", "supplied by the caller")
        assert corollary1_check(P, 1, certificate).holds

    @given(polygons())
    def test_every_node(self, P):
        assert all(corollary1_check(P, i).holds for i in range(1, len(P.nodes) + 1))


class TestProperties:
    @given(polygons())
    def test_roundtrip(self, P):
        assert inverse_legendre(legendre_full(P)) == P

    @given(polygons(), parameters)
    def test_full_agrees_with_eval(self, P, t):
        assert legendre_full(P).evaluate(t) == legendre_eval(P, t).value

    @given(polygons(), parameters)
    def test_grid_oracle(self, P, t):
        assert legendre_eval(P, t).value == grid_legendre(P, t)

    @given(polygons(), parameters, parameters)
    def test_increasing_concave(self, P, s, t):
        s, t = sorted((s, t))
        T = legendre_full(P)
        assert T.evaluate(s) <= T.evaluate(t)
        middle = (s + t) / 2
        assert T.evaluate(middle) >= (T.evaluate(s) + T.evaluate(t)) / 2

    @given(polygons(), st.sampled_from([2, 3, 5]))
    def test_rescale(self, P, p):
        assert legendre_full(frobenius_polygon(P, p)) == rescale_transform(legendre_full(P), p)

    @given(polygons(12), polygons(12))
    def test_product_breakpoints_are_the_union(self, P, Q):
        TP, TQ = legendre_full(P), legendre_full(Q)
        T = legendre_full(minkowski_product(P, Q))
        assert set(T.breakpoint_ts) == set(TP.breakpoint_ts) | set(TQ.breakpoint_ts)
        assert all(value == TP.evaluate(t) + TQ.evaluate(t) for t, value in T.breakpoints)
