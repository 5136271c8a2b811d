"""Tests for stratum membership, ratio brackets and the inclusion witness"""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from enclosures import Enclosure, ratio_enclosure
from errors import InconclusiveError, ProfileError
from legendre import legendre_eval
from newton import ConvexProfile, PolygonTail, frobenius_polygon
from strata import (
    Provenance,
    RatioSequence,
    StratumIndex,
    VerdictKind,
    certified_breakpoints,
    classify,
    empirical_verdict,
    membership_in_m,
    membership_in_p,
    product_witness,
    ratio_sequence,
    stratum_chain_witness,
)
from valuation import INF
from strategies import polygons, small_parameters


@pytest.fixture
def unit_polygon():
    """f = p + pi: v_0 = 0"""
    return ConvexProfile(((0, 1), (1, 0)))


@pytest.fixture
def truncated_polygon():
    return ConvexProfile(((0, 3), (1, 1)), PolygonTail.TRUNCATED, 1)


class TestStratumIndex:
    @pytest.mark.parametrize("value", [Fraction(-1, 2), Fraction(3, 2)])
    def test_range(self, value):
        with pytest.raises(ProfileError):
            StratumIndex(value)

    def test_ends(self):
        assert StratumIndex(Fraction(0)).is_p
        assert StratumIndex(Fraction(1)).is_m


class TestRatioSequence:
    def test_brackets(self, three_node_polygon):
        sequence = ratio_sequence(three_node_polygon, Fraction(1, 2), horizon=10)
        assert len(sequence) == 2 and not sequence.complete
        first, last = sequence.points
        assert (first.t, first.next_t, first.value) == (2, Fraction(1, 2), 3)
        assert first.lower.lo ** 2 <= Fraction(9, 2) <= first.lower.hi ** 2
        assert first.upper.lo ** 2 <= 18 <= first.upper.hi ** 2
        assert last.next_t == 0 and last.upper.lo is INF

    def test_lambda_zero_is_exact(self, three_node_polygon):
        sequence = ratio_sequence(three_node_polygon, 0, horizon=2)
        assert [p.lower for p in sequence.points] == [Enclosure.point(Fraction(3)), Enclosure.point(Fraction(3, 2))]

    def test_horizon_positive(self, three_node_polygon):
        with pytest.raises(ProfileError):
            ratio_sequence(three_node_polygon, Fraction(1, 2), horizon=0)

    def test_nothing_certified(self, truncated_polygon):
        with pytest.raises(InconclusiveError):
            ratio_sequence(truncated_polygon, Fraction(1, 2), horizon=5)

    def test_horizon_beyond_certified(self, f2_report):
        available = certified_breakpoints(f2_report.polygon)
        assert len(ratio_sequence(f2_report.polygon, Fraction(1, 2), horizon=available)) == available
        with pytest.raises(InconclusiveError, match="increase truncation"):
            ratio_sequence(f2_report.polygon, Fraction(1, 2), horizon=available + 1)

    @settings(max_examples=40)
    @given(polygons(12), small_parameters)
    def test_brackets_hold_between_breakpoints(self, P, lam):
        lam = min(lam, Fraction(1))
        for point in ratio_sequence(P, lam, horizon=len(P.nodes)).points:
            if point.next_t == 0:
                continue
            assert legendre_eval(P, point.t).value == point.value
            assert point.lower == ratio_enclosure(point.value, point.t, lam)
            ts = [point.next_t + (point.t - point.next_t) * Fraction(k, 51) for k in range(52)]
            ratios = [ratio_enclosure(legendre_eval(P, t).value, t, lam) for t in ts]
            assert all(r.lo <= point.upper.hi for r in ratios)

    def test_csv_header(self, three_node_polygon):
        text = ratio_sequence(three_node_polygon, Fraction(1, 2), horizon=2).to_csv()
        assert text.splitlines()[0] == "i,t,L,lower,upper"


class TestMembership:
    def test_m_exact(self, unit_polygon):
        verdict = membership_in_m(unit_polygon)
        assert verdict.member is False and verdict.provenance == Provenance.EXACT
        assert verdict.value == Enclosure.point(Fraction(1))

    def test_m_positive_minimum(self):
        verdict = membership_in_m(ConvexProfile(((0, 2), (3, 1))))
        assert verdict.member is True
        assert verdict.kind == VerdictKind.DIVERGENCE_WITNESSED

    def test_m_truncated_zero_node_is_exact(self):
        P = ConvexProfile(((0, 2), (2, 0)), PolygonTail.TRUNCATED, 5)
        assert membership_in_m(P).member is False

    def test_m_empirical(self, f2_report):
        verdict = membership_in_m(f2_report.polygon)
        assert verdict.provenance == Provenance.EMPIRICAL
        assert verdict.member is None

    def test_m_nothing_certified(self, truncated_polygon):
        assert membership_in_m(truncated_polygon).kind == VerdictKind.INCONCLUSIVE

    def test_p(self, unit_polygon):
        verdict = membership_in_p(unit_polygon)
        assert verdict.kind == VerdictKind.DECIDED and verdict.member is False
        assert membership_in_p(ConvexProfile(((1, 1),))).member is True

    def test_p_hidden_by_truncation(self, truncated_polygon):
        verdict = membership_in_p(truncated_polygon)
        assert verdict.kind == VerdictKind.INCONCLUSIVE
        assert verdict.value == Enclosure(Fraction(0), Fraction(1))

    @given(polygons())
    def test_m_iff_all_positive(self, P):
        assert membership_in_m(P).member == all(y > 0 for _, y in P.nodes)


class TestClassify:
    def test_finite_positive(self):
        verdict = classify(ConvexProfile(((0, 2), (3, 1))), Fraction(1, 2), horizon=10)
        assert verdict.member is True and verdict.provenance == Provenance.EXACT

    def test_finite_zero(self, unit_polygon):
        verdict = classify(unit_polygon, Fraction(1, 2), horizon=10)
        assert verdict.member is False and verdict.value == Enclosure.point(Fraction(0))

    def test_truncated_is_empirical(self, f2_report):
        verdict = classify(f2_report.polygon, Fraction(3, 4), horizon=certified_breakpoints(f2_report.polygon))
        assert verdict.provenance == Provenance.EMPIRICAL
        assert verdict.member is None
        assert verdict.evidence is not None

    @pytest.mark.parametrize("lam", [Fraction(3, 4), Fraction(1)])
    def test_short_evidence_is_inconclusive(self, f2_report, lam):
        verdict = classify(f2_report.polygon, lam, horizon=1000)
        assert verdict.kind == VerdictKind.INCONCLUSIVE
        assert verdict.member is None
        assert "increase truncation" in verdict.reason

    def test_dispatches_ends(self, unit_polygon):
        assert classify(unit_polygon, 0, horizon=5).kind == VerdictKind.DECIDED
        assert classify(unit_polygon, 1, horizon=5).member is False

    def test_empirical_without_points(self):
        empty = RatioSequence(StratumIndex(Fraction(1, 2)), (), 5)
        assert empirical_verdict(empty).kind == VerdictKind.INCONCLUSIVE


class TestChain:
    def test_pointwise(self, three_node_polygon):
        report = stratum_chain_witness(three_node_polygon, Fraction(1, 4), Fraction(3, 4), horizon=5)
        assert report.checked == 1
        assert report.pointwise_holds and report.implication_holds

    def test_order(self, three_node_polygon):
        with pytest.raises(ProfileError):
            stratum_chain_witness(three_node_polygon, Fraction(3, 4), Fraction(1, 4), horizon=5)

    def test_fa_chain(self, f2_report):
        available = certified_breakpoints(f2_report.polygon)
        report = stratum_chain_witness(f2_report.polygon, Fraction(1, 4), Fraction(3, 4), horizon=available)
        assert report.pointwise_holds
        assert report.checked >= certified_breakpoints(f2_report.polygon) - 1

    @settings(max_examples=30)
    @given(polygons(12))
    def test_random_chains(self, P):
        report = stratum_chain_witness(P, Fraction(1, 3), Fraction(2, 3), horizon=len(P.nodes))
        assert report.pointwise_holds and report.implication_holds


class TestProduct:
    def test_additive(self, three_node_polygon, unit_polygon):
        witness = product_witness(three_node_polygon, unit_polygon, Fraction(1, 2))
        assert witness.holds
        assert len(witness.samples) > 3

    def test_explicit_samples(self, unit_polygon):
        witness = product_witness(unit_polygon, unit_polygon, Fraction(1, 2), ts=[1])
        sample = witness.samples[0]
        assert sample.product == Enclosure.point(Fraction(2))
        assert sample.left == Enclosure.point(Fraction(1))


class TestFrobeniusFixed:
    @pytest.mark.parametrize("p", [2, 3])
    @pytest.mark.parametrize("lam", [Fraction(1, 4), Fraction(3, 4)])
    def test_ratios_rescale(self, f2_report, p, lam):
        P = f2_report.polygon
        scaled = frobenius_polygon(P, p)
        available = certified_breakpoints(P)
        assert certified_breakpoints(scaled) == available
        original = ratio_sequence(P, lam, available)
        pulled = ratio_sequence(scaled, lam, available)
        # L'(t/p) = L(t)/p, so every ratio picks up the factor p^(lam-1)
        for a, b in zip(original.points, pulled.points):
            assert (b.t, b.next_t, b.value) == (a.t / p, a.next_t / p, a.value / p)
        assert classify(scaled, lam, available).kind == classify(P, lam, available).kind

    @given(polygons(), small_parameters, st.sampled_from([2, 3, 5]))
    def test_membership_fixed(self, P, lam, p):
        lam = min(lam, Fraction(1))
        horizon = len(P.nodes)
        assert classify(frobenius_polygon(P, p), lam, horizon).member == classify(P, lam, horizon).member
