"""
Separating family f_a for witt-strata
Certified rational approximations of F_a(i) = sum_{j>=i} j^{-a}, the
estimates they satisfy, and the analytic stratum verdicts they support
"""

import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from fractions import Fraction
from typing import List, Optional, Tuple

from mpmath import bernfrac

from enclosures import (
    DEFAULT_START_BITS,
    Enclosure,
    exp_neg_bounds,
    interval_bounds,
    interval_context,
    inverse_power,
    rational_interval,
    to_interval,
)
from errors import EnclosureError, InconclusiveError, ProfileError
from legendre import (
    Corollary1Result,
    HypothesisCertificate,
    corollary1_check,
)
from newton import ConvexProfile, newton_polygon
from strata import (
    Provenance,
    StratumIndex,
    StratumVerdict,
    VerdictKind,
    certified_breakpoints,
    ratio_sequence,
)
from valuation import INF, CoefficientProfile, ExtRat, format_ext_rat, parse_rational

logger = logging.getLogger(__name__)

SLOPE_HYPOTHESIS = HypothesisCertificate(
    statement="s_i * (i+1) -> 0",
    justification="|s_i - i^(-a)| < 2e^(-i) with a > 1",
)


@dataclass(frozen=True)
class FaSpec:
    """Parameters of one f_a build; (a, n, precision) determine the output exactly"""
    a: Fraction
    n: int
    precision: int

    def __post_init__(self):
        a = parse_rational(self.a)
        object.__setattr__(self, "a", a)
        if a <= 1:
            raise ProfileError(f"a must exceed 1, got {a}")
        if self.n < 2:
            raise ProfileError(f"truncation must be at least 2, got {self.n}")
        if self.precision < 16:
            raise ProfileError(f"precision of {self.precision} bits is too small")

    @staticmethod
    def recommended_precision(n: int, margin: int = 64) -> int:
        """Bits needed to resolve e^{-n}: n*log2(e) plus a margin"""
        return n * 1443 // 1000 + 1 + margin

    @classmethod
    def with_default_precision(cls, a, n: int, margin: int = 64) -> 'FaSpec':
        return cls(parse_rational(a), n, cls.recommended_precision(n, margin))

    def to_dict(self) -> dict:
        return {"a": format_ext_rat(self.a), "n": self.n, "precision": self.precision}

    @staticmethod
    def from_dict(data: dict) -> 'FaSpec':
        try:
            return FaSpec(parse_rational(data["a"]), int(data["n"]), int(data["precision"]))
        except (KeyError, TypeError, ValueError) as e:
            raise ProfileError(f"malformed f_a parameters: {e}") from e


@dataclass(frozen=True)
class FaBuildReport:
    spec: FaSpec
    profile: CoefficientProfile
    error_bounds: Tuple[Fraction, ...]
    tolerances: Tuple[Fraction, ...]
    slopes: Tuple[Fraction, ...]
    max_certified_index: int
    certificate: HypothesisCertificate = SLOPE_HYPOTHESIS

    @property
    def values(self) -> List[Fraction]:
        """q_1, ..., q_N"""
        return [v for _, v in self.profile.entries]

    @cached_property
    def polygon(self) -> ConvexProfile:
        return newton_polygon(self.profile)

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "profile": self.profile.to_dict(),
            "error_bounds": [format_ext_rat(e) for e in self.error_bounds],
            "tolerances": [format_ext_rat(e) for e in self.tolerances],
            "slopes": [format_ext_rat(s) for s in self.slopes],
            "max_certified_index": self.max_certified_index,
            "certificate": self.certificate.to_dict(),
        }

    @staticmethod
    def from_dict(data: dict) -> 'FaBuildReport':
        try:
            return FaBuildReport(
                spec=FaSpec.from_dict(data["spec"]),
                profile=CoefficientProfile.from_dict(data["profile"]),
                error_bounds=tuple(parse_rational(e) for e in data["error_bounds"]),
                tolerances=tuple(parse_rational(e) for e in data["tolerances"]),
                slopes=tuple(parse_rational(s) for s in data["slopes"]),
                max_certified_index=int(data["max_certified_index"]),
                certificate=HypothesisCertificate(**data["certificate"]),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise ProfileError(f"malformed f_a report: {e}") from e


def _rising(a: Fraction, length: int) -> Fraction:
    result = Fraction(1)
    for k in range(length):
        result *= a + k
    return result


def _tail_bracket(a: Fraction, m: int, bits: int) -> Tuple[Fraction, Fraction]:
    """
    Rational interval for M^a * sum_{j>=M} j^{-a}

    Euler-Maclaurin for x^{-a}: M/(a-1) + 1/2 + sum_k c_k M^{1-2k} with
    c_k = B_2k/(2k)! (a)_{2k-1}. The remainder after K terms lies between
    0 and the (K+1)-th term.
    """
    target = Fraction(1, 2 ** (bits + 4))
    base = m / (a - 1) + Fraction(1, 2)
    factorial = Fraction(1)
    k = 1
    while True:
        if k > 4 * m:
            raise EnclosureError(f"tail series at M={m} does not reach 2^-{bits}", width=None)
        factorial *= (2 * k - 1) * (2 * k)
        bernoulli = Fraction(*bernfrac(2 * k))
        term = bernoulli / factorial * _rising(a, 2 * k - 1) / Fraction(m) ** (2 * k - 1)
        if abs(term) < target:
            return (base + min(term, 0), base + max(term, 0))
        base += term
        k += 1


def _tail_start(precision: int) -> int:
    # the series terms bottom out near e^{-2 pi M}
    return precision // 6 + 8


def _tail_enclosure(ctx, a: Fraction, m: int, bits: int):
    lo, hi = _tail_bracket(a, m, bits)
    scale = inverse_power(ctx, m, a)
    return scale * rational_interval(ctx, lo, hi)


def reference_Fa(a, i: int, precision: int = DEFAULT_START_BITS) -> Enclosure:
    """Certified enclosure of F_a(i) of width below 2^-precision"""
    a = parse_rational(a)
    if a <= 1:
        raise ProfileError(f"a must exceed 1, got {a}")
    if i < 1:
        raise ProfileError(f"index must be positive, got {i}")

    ctx = interval_context(precision + 32)
    m = max(i, _tail_start(precision))
    total = _tail_enclosure(ctx, a, m, precision)
    for j in range(m - 1, i - 1, -1):
        total = total + inverse_power(ctx, j, a)

    lo, hi = interval_bounds(total)
    if hi - lo >= Fraction(1, 2 ** precision):
        raise EnclosureError(
            f"F_a({i}) enclosure of width {float(hi - lo):.3g} misses 2^-{precision}",
            width=hi - lo, index=i,
        )
    return Enclosure(lo, hi)


def _dyadic_round(x: Fraction, tolerance: Fraction) -> Fraction:
    """Nearest multiple of 2^-k to x, with 2^-k <= tolerance/4"""
    ratio = 4 / tolerance
    k = (-(-ratio.numerator // ratio.denominator) - 1).bit_length()
    scale = 2 ** k
    return Fraction(round(x * scale), scale)


def build_fa(spec: FaSpec) -> FaBuildReport:
    """
    Round F_a(1..N) to rationals q_i with |q_i - F_a(i)| < eps_i

    eps_i is the smaller of a certified lower bound on e^{-i} and a lower
    bound on (i^{-a} - (i+1)^{-a})/4. The second cap keeps every slope
    difference positive, so the polygon has a node at every integer 1..N.
    """
    a, n, bits = spec.a, spec.n, spec.precision
    ctx = interval_context(bits + 32)
    logger.info(f"building f_a for a={a}, N={n} at {bits} bits")

    start = max(n + 1, _tail_start(bits))
    partial = _tail_enclosure(ctx, a, start, bits)
    for j in range(start - 1, n, -1):
        partial = partial + inverse_power(ctx, j, a)

    powers = {j: inverse_power(ctx, j, a) for j in range(1, n + 2)}
    sums = {}
    for i in range(n, 0, -1):
        partial = partial + powers[i]
        sums[i] = partial

    values, errors, tolerances = [], [], []
    for i in range(1, n + 1):
        lo, hi = interval_bounds(sums[i])
        gap_lo, _ = interval_bounds((powers[i] - powers[i + 1]) / 4)
        exp_lo, _ = exp_neg_bounds(i, bits + 32)
        tolerance = min(exp_lo, gap_lo)

        width = hi - lo
        if width >= tolerance / 2:
            raise EnclosureError(
                f"precision {bits} too low for index {i}: width {float(width):.3g}",
                width=width, index=i,
            )
        mid = (lo + hi) / 2
        q = _dyadic_round(mid, tolerance)
        error = abs(q - mid) + width / 2
        if not error < tolerance:
            raise EnclosureError(f"rounding at index {i} exceeds its tolerance", width=width, index=i)

        values.append(q)
        errors.append(error)
        tolerances.append(tolerance)
        logger.debug(f"q_{i} fixed with error < {float(error):.3g}")

    slopes = tuple(q0 - q1 for q0, q1 in zip(values, values[1:]))
    if any(s1 <= s2 for s1, s2 in zip(slopes, slopes[1:])):
        raise EnclosureError("built slopes are not strictly decreasing")

    profile = CoefficientProfile.truncated({i: q for i, q in enumerate(values, start=1)}, n)
    report = FaBuildReport(
        spec=spec,
        profile=profile,
        error_bounds=tuple(errors),
        tolerances=tuple(tolerances),
        slopes=slopes,
        max_certified_index=_max_certified_index(values, slopes, n),
    )
    if report.polygon.xs != list(range(1, n + 1)):
        raise EnclosureError("built polygon misses a node at some integer")
    logger.info(f"f_a built: certified breakpoints up to i={report.max_certified_index}")
    return report


def _max_certified_index(values: List[Fraction], slopes: Tuple[Fraction, ...], n: int) -> int:
    """Largest i with L(s_j) certified for every j <= i"""
    certified = 0
    for i, s in enumerate(slopes, start=1):
        if i * s + values[i - 1] > (n + 1) * s:
            break
        certified = i
    return certified


def identity_III_check(report: FaBuildReport, i: int) -> Corollary1Result:
    """L(N(f_a))(s_i) = i s_i + N(f_a)(i), through the summation-by-parts identity"""
    if not 1 <= i <= report.max_certified_index:
        raise InconclusiveError(
            f"L(s_{i}) is not certified at N={report.spec.n}; increase truncation"
        )
    result = corollary1_check(report.polygon, i, report.certificate)
    s = report.slopes[i - 1]
    return Corollary1Result(lhs=result.rhs + i * s, rhs=result.lhs + i * s, holds=result.holds)


@dataclass(frozen=True)
class EstimateReport:
    name: str
    checked: int
    failures: Tuple[int, ...]

    @property
    def holds(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {"name": self.name, "checked": self.checked, "failures": list(self.failures)}


def slope_estimate_check(report: FaBuildReport) -> EstimateReport:
    """|s_i - i^{-a}| < 2e^{-i} at every built slope"""
    a, bits = report.spec.a, report.spec.precision + 32
    ctx = interval_context(bits)
    failures = []
    for i, s in enumerate(report.slopes, start=1):
        lo, hi = interval_bounds(inverse_power(ctx, i, a))
        exp_lo, _ = exp_neg_bounds(i, bits)
        if not max(abs(s - lo), abs(s - hi)) < 2 * exp_lo:
            failures.append(i)
    return EstimateReport("slope", len(report.slopes), tuple(failures))


def value_sandwich_check(report: FaBuildReport) -> EstimateReport:
    """(a-1)^{-1} i^{1-a} - e^{-i} < q_i < (a-1)^{-1} (i-1)^{1-a} + e^{-i} for i >= 2"""
    a, bits = report.spec.a, report.spec.precision + 32
    ctx = interval_context(bits)
    failures = []
    values = report.values
    for i in range(2, len(values) + 1):
        _, below_hi = interval_bounds(inverse_power(ctx, i, a - 1) / to_interval(ctx, a - 1))
        above_lo, _ = interval_bounds(inverse_power(ctx, i - 1, a - 1) / to_interval(ctx, a - 1))
        exp_lo, _ = exp_neg_bounds(i, bits)
        q = values[i - 1]
        if not (below_hi - exp_lo < q < above_lo + exp_lo):
            failures.append(i)
    return EstimateReport("sandwich", max(len(values) - 1, 0), tuple(failures))


@dataclass(frozen=True)
class BracketBounds:
    """Rigorous lower bound of L(s_i)/s_i^nu and upper bound of L(s_i)/s_{i+1}^nu"""
    index: int
    lower: Fraction
    upper: ExtRat

    def to_dict(self) -> dict:
        return {"i": self.index, "lower": format_ext_rat(self.lower), "upper": format_ext_rat(self.upper)}


def explicit_bracket_bounds(a, nu, i: int, bits: int = DEFAULT_START_BITS) -> BracketBounds:
    """
    Bounds on both brackets valid for every f_a meeting the build tolerances

    lower > (a/(a-1) i^{1-a} - (2i+1)e^{-i}) / (i^{-a} + 2e^{-i})^nu
    upper < (i^{1-a} + (2i+1)e^{-i} + (i-1)^{1-a}/(a-1)) / ((i+1)^{-a} - 2e^{-(i+1)})^nu

    The upper bound needs i >= 2 and a positive denominator; otherwise it is inf.
    """
    a, nu = parse_rational(a), parse_rational(nu)
    if i < 1:
        raise ProfileError(f"index must be positive, got {i}")
    ctx = interval_context(bits)
    A, NU = to_interval(ctx, a), to_interval(ctx, nu)
    e_i = ctx.exp(ctx.mpf(-i))
    e_next = ctx.exp(ctx.mpf(-(i + 1)))

    def power(base, exponent):
        return ctx.exp(exponent * ctx.ln(base))

    numerator = A / (A - 1) * inverse_power(ctx, i, a - 1) - (2 * i + 1) * e_i
    denominator = power(inverse_power(ctx, i, a) + 2 * e_i, NU)
    lower, _ = interval_bounds(numerator / denominator)

    upper = INF
    if i >= 2:
        base = inverse_power(ctx, i + 1, a) - 2 * e_next
        base_lo, _ = interval_bounds(base)
        if base_lo > 0:
            numerator = (
                inverse_power(ctx, i, a - 1)
                + (2 * i + 1) * e_i
                + inverse_power(ctx, i - 1, a - 1) / (A - 1)
            )
            _, upper = interval_bounds(numerator / power(base, NU))
    return BracketBounds(i, lower, upper)


def threshold(a) -> Fraction:
    """(a-1)/a, the stratum index separating membership of f_a"""
    a = parse_rational(a)
    return (a - 1) / a


@lru_cache(maxsize=8)
def _evidence_build(a: Fraction, horizon: int) -> FaBuildReport:
    """A build of f_a certifying at least `horizon` breakpoints"""
    # certified breakpoints run to about N (a-1)/a
    n = max(2, -(-(a * horizon) // (a - 1)) + 2)
    while True:
        report = build_fa(FaSpec.with_default_precision(a, n))
        available = certified_breakpoints(report.polygon)
        if available >= horizon:
            return report
        logger.debug(f"N={n} certifies {available} breakpoints, {horizon} needed")
        n += n // 4 + 1


def prop4_verdict(a, nu, horizon: int, polygon: Optional[ConvexProfile] = None) -> StratumVerdict:
    """
    Analytic membership of f_a in p_nu

    Both explicit brackets behave like a/(a-1) i^{a nu + 1 - a}, so the sign
    of that exponent decides. At nu = (a-1)/a both tend to a/(a-1) and no
    claim is made. The empirical brackets of a built f_a up to `horizon`
    are attached as evidence; a supplied polygon is used instead of a new
    build, up to the breakpoints it certifies. A horizon of 0 skips them.
    """
    a, nu = parse_rational(a), parse_rational(nu)
    if a <= 1:
        raise ProfileError(f"a must exceed 1, got {a}")
    if not 0 < nu < 1:
        raise ProfileError(f"nu must lie in (0, 1), got {nu}")
    if horizon < 0:
        raise ProfileError(f"horizon must be nonnegative, got {horizon}")

    lam = StratumIndex(nu)
    exponent = a * nu + 1 - a
    evidence = None
    if horizon and polygon is None:
        evidence = ratio_sequence(_evidence_build(a, horizon).polygon, lam, horizon)
    elif horizon:
        available = certified_breakpoints(polygon)
        if available < horizon:
            logger.warning(f"supplied polygon certifies {available} of {horizon} breakpoints")
        if available:
            evidence = ratio_sequence(polygon, lam, min(horizon, available))

    if exponent > 0:
        kind, member, value = VerdictKind.DIVERGENCE_WITNESSED, True, Enclosure.point(INF)
        reason = f"lower bracket grows like i^{exponent}"
    elif exponent < 0:
        kind, member, value = VerdictKind.BOUNDED_UP_TO, False, Enclosure.point(Fraction(0))
        reason = f"upper bracket decays like i^{exponent}"
    else:
        kind, member = VerdictKind.BOUNDARY, None
        value = Enclosure.point(a / (a - 1))
        reason = f"nu = (a-1)/a: both brackets tend to {format_ext_rat(a / (a - 1))}"

    logger.info(f"f_a with a={a} at nu={nu}: {kind.value}")
    return StratumVerdict(
        kind, Provenance.ANALYTIC, lam,
        horizon=len(evidence) if evidence is not None else 0,
        value=value, member=member, reason=reason, evidence=evidence,
    )


def fa_stratum_verdict(a, lam, horizon: int, polygon: Optional[ConvexProfile] = None) -> StratumVerdict:
    """Membership of f_a in p_lambda for any lambda in [0, 1]"""
    a = parse_rational(a)
    if a <= 1:
        raise ProfileError(f"a must exceed 1, got {a}")
    index = StratumIndex(parse_rational(lam))
    if index.is_p:
        return StratumVerdict(
            VerdictKind.DECIDED, Provenance.ANALYTIC, index,
            value=Enclosure.point(Fraction(0)), member=False,
            reason="v_0(f_a) = lim F_a(i) = 0",
        )
    if index.is_m:
        return StratumVerdict(
            VerdictKind.DIVERGENCE_WITNESSED, Provenance.ANALYTIC, index,
            value=Enclosure.point(INF), member=True,
            reason="every coefficient valuation F_a(i) is positive",
        )
    return prop4_verdict(a, index.value, horizon, polygon)
