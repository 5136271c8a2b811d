"""Tests for the separating family f_a"""

from fractions import Fraction

import pytest

from enclosures import rational_power
from errors import InconclusiveError, ProfileError
from fa_family import (
    FaBuildReport,
    FaSpec,
    build_fa,
    explicit_bracket_bounds,
    fa_stratum_verdict,
    identity_III_check,
    prop4_verdict,
    reference_Fa,
    slope_estimate_check,
    threshold,
    value_sandwich_check,
)
from strata import Provenance, VerdictKind, certified_breakpoints, ratio_sequence
from valuation import INF


class TestParameters:
    @pytest.mark.parametrize("a,n,precision", [
        (Fraction(1), 10, 64),
        (Fraction(1, 2), 10, 64),
        (Fraction(2), 1, 64),
        (Fraction(2), 10, 8),
    ])
    def test_rejects(self, a, n, precision):
        with pytest.raises(ProfileError):
            FaSpec(a, n, precision)

    def test_recommended_precision(self):
        assert FaSpec.recommended_precision(50) == 137
        assert FaSpec.with_default_precision("2", 300).precision == 497

    def test_dict(self):
        spec = FaSpec(Fraction(3, 2), 40, 128)
        assert spec.to_dict() == {"a": "3/2", "n": 40, "precision": 128}
        assert FaSpec.from_dict(spec.to_dict()) == spec


class TestReference:
    def test_zeta_two(self):
        enclosure = reference_Fa(2, 1)
        assert enclosure.lo < Fraction("1.64493406684822643648")
        assert Fraction("1.64493406684822643647") < enclosure.hi
        assert enclosure.width < Fraction(1, 2 ** 64)

    @pytest.mark.parametrize("a,i", [(Fraction(2), 3), (Fraction(3), 7), (Fraction(3, 2), 4)])
    def test_telescoping(self, a, i):
        here, there = reference_Fa(a, i), reference_Fa(a, i + 1)
        power = rational_power(Fraction(i), a)
        assert here.lo - there.hi <= 1 / power.lo
        assert 1 / power.hi <= here.hi - there.lo

    def test_bad_arguments(self):
        with pytest.raises(ProfileError):
            reference_Fa(1, 3)
        with pytest.raises(ProfileError):
            reference_Fa(2, 0)


class TestBuild:
    def test_nodes_at_every_integer(self, f2_report):
        assert f2_report.polygon.xs == list(range(1, 51))
        assert f2_report.profile.truncation == 50

    def test_estimates(self, f2_report):
        assert slope_estimate_check(f2_report).holds
        assert value_sandwich_check(f2_report).holds

    def test_errors_within_tolerance(self, f2_report):
        assert all(e < tol for e, tol in zip(f2_report.error_bounds, f2_report.tolerances))

    def test_values_are_dyadic(self, f2_report):
        assert all(q.denominator & (q.denominator - 1) == 0 for q in f2_report.values)

    def test_cubic(self):
        report = build_fa(FaSpec.with_default_precision(3, 50))
        assert report.polygon.xs == list(range(1, 51))
        assert slope_estimate_check(report).holds

    def test_deterministic(self, f2_report):
        again = build_fa(FaSpec.with_default_precision(2, 50))
        assert again.to_dict() == f2_report.to_dict()

    def test_report_dict(self, f2_report):
        assert FaBuildReport.from_dict(f2_report.to_dict()) == f2_report

    def test_certified_range(self, f2_report):
        # i*s_i + q_i ~ 2/i against 51/i^2
        assert 20 <= f2_report.max_certified_index <= 30


class TestIdentity:
    def test_square(self, f2_report):
        result = identity_III_check(f2_report, 10)
        assert result.holds and result.lhs == result.rhs

    def test_three_halves(self):
        report = build_fa(FaSpec.with_default_precision(Fraction(3, 2), 100))
        assert report.max_certified_index >= 5
        assert identity_III_check(report, 5).holds

    def test_every_certified_index(self, f2_report):
        assert all(identity_III_check(f2_report, i).holds for i in range(1, f2_report.max_certified_index + 1))

    @pytest.mark.parametrize("offset", [1, 10])
    def test_beyond_certified(self, f2_report, offset):
        with pytest.raises(InconclusiveError, match="increase truncation"):
            identity_III_check(f2_report, f2_report.max_certified_index + offset)


class TestVerdicts:
    def test_threshold(self):
        assert threshold(2) == Fraction(1, 2)
        assert threshold(Fraction(3, 2)) == Fraction(1, 3)

    def test_above_threshold(self):
        verdict = prop4_verdict(2, Fraction(3, 4), horizon=100)
        assert verdict.member is True
        assert verdict.provenance == Provenance.ANALYTIC

    def test_below_threshold(self):
        verdict = prop4_verdict(2, Fraction(1, 4), horizon=100)
        assert verdict.member is False
        assert verdict.kind == VerdictKind.BOUNDED_UP_TO

    def test_boundary(self):
        verdict = prop4_verdict(Fraction(3, 2), Fraction(1, 3), horizon=20)
        assert verdict.kind == VerdictKind.BOUNDARY
        assert verdict.member is None
        assert verdict.value.lo == 3

    def test_nu_range(self):
        with pytest.raises(ProfileError):
            prop4_verdict(2, 1, horizon=10)

    def test_evidence_from_own_build(self):
        verdict = prop4_verdict(2, Fraction(3, 4), horizon=100)
        assert verdict.horizon == len(verdict.evidence) == 100
        assert verdict.evidence.complete
        assert verdict.evidence.points[0].lower.lo > 0

    def test_no_evidence_at_zero_horizon(self):
        verdict = prop4_verdict(2, Fraction(3, 4), horizon=0)
        assert verdict.evidence is None and verdict.horizon == 0

    def test_evidence_attached(self, f2_report):
        verdict = prop4_verdict(2, Fraction(3, 4), horizon=1000, polygon=f2_report.polygon)
        assert verdict.evidence is not None
        assert verdict.horizon == len(verdict.evidence)

    def test_ends(self):
        assert fa_stratum_verdict(2, 0, horizon=10).member is False
        assert fa_stratum_verdict(2, 1, horizon=10).member is True
        assert fa_stratum_verdict(2, Fraction(3, 4), horizon=10).member is True


class TestBrackets:
    def test_lower_passes_ten(self):
        assert any(explicit_bracket_bounds(2, Fraction(3, 4), i).lower > 10 for i in range(1, 10 ** 4 + 1))
        assert explicit_bracket_bounds(2, Fraction(3, 4), 26).lower > 10

    def test_upper_bounded(self):
        assert explicit_bracket_bounds(2, Fraction(1, 4), 1).upper is INF
        assert all(explicit_bracket_bounds(2, Fraction(1, 4), i).upper <= 4 for i in range(3, 10 ** 4 + 1))

    def test_empirical_upper_bounded(self, f2_long_report):
        sequence = ratio_sequence(f2_long_report.polygon, Fraction(1, 4), certified_breakpoints(f2_long_report.polygon))
        assert len(sequence) > 100
        assert all(p.upper.hi <= 4 for p in sequence.points)

    def test_empirical_lower_grows(self, f2_long_report):
        sequence = ratio_sequence(f2_long_report.polygon, Fraction(3, 4), certified_breakpoints(f2_long_report.polygon))
        assert max(p.lower.lo for p in sequence.points) > 10

    def test_explicit_bounds_enclose_samples(self, f2_long_report):
        sequence = ratio_sequence(f2_long_report.polygon, Fraction(1, 4), horizon=60)
        for point in sequence.points[2:]:
            bounds = explicit_bracket_bounds(2, Fraction(1, 4), point.index)
            assert bounds.lower <= point.lower.hi
            assert point.upper.lo <= bounds.upper
