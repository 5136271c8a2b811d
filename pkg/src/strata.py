"""
Prime-ideal strata for witt-strata
Growth of L(N(f))(t)/t^lambda as t -> 0+, sampled at the breakpoints s_i

A limsup cannot be decided from finitely many samples. Verdicts therefore
carry a provenance: EXACT when the polygon is finite (or pins v_0 = 0),
ANALYTIC when a proof-backed bound supplies the answer, EMPIRICAL
otherwise. Empirical verdicts never claim membership.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from enclosures import (
    DEFAULT_CAP_BITS,
    DEFAULT_START_BITS,
    Enclosure,
    compare_ratios,
    ratio_enclosure,
)
from errors import InconclusiveError, ProfileError
from legendre import legendre_eval, legendre_full
from newton import ConvexProfile, minkowski_product
from valuation import INF, Rational, format_ext_rat, parse_rational

logger = logging.getLogger(__name__)


class VerdictKind(str, Enum):
    DIVERGENCE_WITNESSED = "divergence-witnessed"
    BOUNDED_UP_TO = "bounded-up-to"
    DECIDED = "decided"
    BOUNDARY = "boundary"
    INCONCLUSIVE = "inconclusive"


class Provenance(str, Enum):
    EXACT = "exact"
    ANALYTIC = "analytic"
    EMPIRICAL = "empirical"


@dataclass(frozen=True)
class StratumIndex:
    """lambda in [0, 1]; 0 is the ideal p (v_0 > 0), 1 is m"""
    value: Fraction

    def __post_init__(self):
        value = parse_rational(self.value)
        if not 0 <= value <= 1:
            raise ProfileError(f"stratum index must lie in [0, 1], got {value}")
        object.__setattr__(self, "value", value)

    @property
    def is_p(self) -> bool:
        return self.value == 0

    @property
    def is_m(self) -> bool:
        return self.value == 1

    def __str__(self):
        return format_ext_rat(self.value)


def _index(lam) -> StratumIndex:
    return lam if isinstance(lam, StratumIndex) else StratumIndex(parse_rational(lam))


@dataclass(frozen=True)
class RatioPoint:
    """Brackets at s_i: L(s_i)/s_i^lambda from below, L(s_i)/s_{i+1}^lambda from above"""
    index: int
    t: Fraction
    next_t: Fraction
    value: Fraction
    lower: Enclosure
    upper: Enclosure

    def to_dict(self) -> dict:
        return {
            "i": self.index,
            "t": format_ext_rat(self.t),
            "next_t": format_ext_rat(self.next_t),
            "L": format_ext_rat(self.value),
            "lower": self.lower.to_dict(),
            "upper": self.upper.to_dict(),
        }


@dataclass(frozen=True)
class RatioSequence:
    lam: StratumIndex
    points: Tuple[RatioPoint, ...]
    horizon: int

    def __len__(self):
        return len(self.points)

    @property
    def complete(self) -> bool:
        return len(self.points) >= self.horizon

    def to_dict(self) -> dict:
        return {
            "lambda": str(self.lam),
            "horizon": self.horizon,
            "points": [p.to_dict() for p in self.points],
        }

    def to_csv(self) -> str:
        lines = ["i,t,L,lower,upper"]
        lines.extend(
            f"{p.index},{format_ext_rat(p.t)},{format_ext_rat(p.value)},{p.lower.approx():.12g},{p.upper.approx():.12g}"
            for p in self.points
        )
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class StratumVerdict:
    kind: VerdictKind
    provenance: Provenance
    lam: StratumIndex
    horizon: int = 0
    value: Optional[Enclosure] = None
    member: Optional[bool] = None
    reason: str = ""
    evidence: Optional[RatioSequence] = field(default=None, compare=False)

    @property
    def decided(self) -> bool:
        return self.member is not None

    def to_dict(self) -> dict:
        data = {
            "lambda": str(self.lam),
            "kind": self.kind.value,
            "provenance": self.provenance.value,
            "member": self.member,
            "horizon": self.horizon,
            "value": None if self.value is None else self.value.to_dict(),
            "reason": self.reason,
        }
        if self.evidence is not None:
            data["evidence"] = self.evidence.to_dict()
        return data


def certified_breakpoints(P: ConvexProfile) -> int:
    """Number of indices i whose s_i and s_{i+1} are both known"""
    transform = legendre_full(P)
    count = len(transform.breakpoints)
    if transform.validity_floor == 0:
        return count
    return max(count - 1, 0)


def ratio_sequence(
    P: ConvexProfile,
    lam,
    horizon: int,
    bits: int = DEFAULT_START_BITS,
) -> RatioSequence:
    """
    Both brackets of L(t)/t^lambda at the first `horizon` breakpoints

    On [s_{i+1}, s_i] the transform is at most L(s_i) and t^lambda is at
    least s_{i+1}^lambda, so the two columns sandwich the supremum over
    that interval. A finite polygon simply runs out of breakpoints; a
    truncated one must certify all `horizon` of them.
    """
    lam = _index(lam)
    if horizon < 1:
        raise ProfileError("horizon must be positive")

    transform = legendre_full(P)
    ts = transform.breakpoint_ts
    if transform.validity_floor == 0:
        # s_m = 0 closes a finite polygon
        nexts = ts[1:] + [Fraction(0)]
    else:
        nexts = ts[1:]
        if len(nexts) < horizon:
            raise InconclusiveError(
                f"only {len(nexts)} certified breakpoints, horizon {horizon} requested; increase truncation"
            )

    points = []
    for k, (t, value) in enumerate(transform.breakpoints[: min(horizon, len(nexts))]):
        points.append(RatioPoint(
            index=k + 1,
            t=t,
            next_t=nexts[k],
            value=value,
            lower=ratio_enclosure(value, t, lam.value, bits),
            upper=ratio_enclosure(value, nexts[k], lam.value, bits),
        ))
    logger.debug(f"ratio sequence at lambda={lam}: {len(points)} points")
    return RatioSequence(lam, tuple(points), horizon)


def empirical_verdict(sequence: RatioSequence) -> StratumVerdict:
    """
    Read a trend off finite evidence

    Divergence is reported when the lower bracket reaches its maximum at
    the last sample and exceeds its first value; otherwise the supremum
    of the upper brackets is reported.
    """
    points = sequence.points
    if not points:
        return StratumVerdict(
            VerdictKind.INCONCLUSIVE, Provenance.EMPIRICAL, sequence.lam,
            reason="no certified breakpoints",
        )

    lowers = [p.lower for p in points]
    last = lowers[-1]
    peak = all(not other.certainly_greater(last) for other in lowers)
    if peak and last.certainly_greater(lowers[0]):
        return StratumVerdict(
            VerdictKind.DIVERGENCE_WITNESSED, Provenance.EMPIRICAL, sequence.lam,
            horizon=len(points), value=last,
            reason="lower bracket still rising at the horizon",
            evidence=sequence,
        )

    supremum = max((p.upper for p in points), key=lambda e: (e.hi is INF, e.hi))
    return StratumVerdict(
        VerdictKind.BOUNDED_UP_TO, Provenance.EMPIRICAL, sequence.lam,
        horizon=len(points), value=supremum,
        reason="upper bracket bounded over the sampled horizon",
        evidence=sequence,
    )


def _empirical_from_polygon(P: ConvexProfile, lam: StratumIndex, horizon: int) -> StratumVerdict:
    try:
        sequence = ratio_sequence(P, lam, horizon)
    except InconclusiveError as e:
        return StratumVerdict(VerdictKind.INCONCLUSIVE, Provenance.EMPIRICAL, lam, reason=str(e))
    return empirical_verdict(sequence)


def membership_in_m(P: ConvexProfile, horizon: Optional[int] = None) -> StratumVerdict:
    """
    f in m iff limsup L(t)/t = inf iff no coefficient has valuation 0

    A node of value 0 decides non-membership even under truncation.
    """
    lam = StratumIndex(Fraction(1))
    if P.minimum == 0:
        slope = Fraction(P.nodes[-1][0])
        return StratumVerdict(
            VerdictKind.BOUNDED_UP_TO, Provenance.EXACT, lam,
            value=Enclosure.point(slope), member=False,
            reason=f"node {P.nodes[-1][0]} has valuation 0; L(t)/t tends to {slope}",
        )
    if not P.is_truncated:
        return StratumVerdict(
            VerdictKind.DIVERGENCE_WITNESSED, Provenance.EXACT, lam,
            value=Enclosure.point(INF), member=True,
            reason=f"v_0 = {P.minimum} > 0, so L(t)/t >= v_0/t",
        )
    available = certified_breakpoints(P)
    if not available:
        return StratumVerdict(
            VerdictKind.INCONCLUSIVE, Provenance.EMPIRICAL, lam,
            reason="no certified breakpoints",
        )
    return _empirical_from_polygon(P, lam, horizon or available)


def membership_in_p(P: ConvexProfile) -> StratumVerdict:
    """f in p iff v_0(f) > 0; decided whenever v_0 is certified"""
    lam = StratumIndex(Fraction(0))
    transform = legendre_full(P)
    if transform.validity_floor > 0:
        return StratumVerdict(
            VerdictKind.INCONCLUSIVE, Provenance.EMPIRICAL, lam,
            value=Enclosure(Fraction(0), P.minimum),
            reason="v_0 is hidden by the truncation; only v_0 <= min listed value is known",
        )
    v0 = transform.value_at_zero
    return StratumVerdict(
        VerdictKind.DECIDED, Provenance.EXACT, lam,
        value=Enclosure.point(v0), member=v0 > 0,
        reason=f"v_0 = {v0}",
    )


def classify(P: ConvexProfile, lam, horizon: int) -> StratumVerdict:
    """Membership evidence for f in p_lambda from its polygon alone"""
    lam = _index(lam)
    if lam.is_p:
        return membership_in_p(P)
    if lam.is_m:
        return membership_in_m(P, horizon)

    if not P.is_truncated or P.minimum == 0:
        # near 0 the transform is v_0 + n_m t
        v0 = P.minimum
        if v0 > 0:
            return StratumVerdict(
                VerdictKind.DIVERGENCE_WITNESSED, Provenance.EXACT, lam,
                value=Enclosure.point(INF), member=True,
                reason=f"v_0 = {v0} > 0, so L(t)/t^lambda >= v_0/t^lambda",
            )
        return StratumVerdict(
            VerdictKind.BOUNDED_UP_TO, Provenance.EXACT, lam,
            value=Enclosure.point(Fraction(0)), member=False,
            reason="v_0 = 0 and finitely many nodes: L(t)/t^lambda = n_m t^(1-lambda) near 0",
        )
    return _empirical_from_polygon(P, lam, horizon)


@dataclass(frozen=True)
class ChainReport:
    lam: StratumIndex
    mu: StratumIndex
    lower_sequence: RatioSequence
    upper_sequence: RatioSequence
    checked: int
    pointwise_holds: bool
    verdict_lambda: StratumVerdict
    verdict_mu: StratumVerdict

    @property
    def implication_holds(self) -> bool:
        """Membership or divergence at lambda must carry over to mu"""
        if self.verdict_lambda.member and self.verdict_mu.member is False:
            return False
        diverging = VerdictKind.DIVERGENCE_WITNESSED
        return self.verdict_lambda.kind != diverging or self.verdict_mu.kind == diverging

    def to_dict(self) -> dict:
        return {
            "lambda": str(self.lam),
            "mu": str(self.mu),
            "checked": self.checked,
            "pointwise_holds": self.pointwise_holds,
            "implication_holds": self.implication_holds,
            "verdict_lambda": self.verdict_lambda.to_dict(),
            "verdict_mu": self.verdict_mu.to_dict(),
        }


def stratum_chain_witness(
    P: ConvexProfile,
    lam,
    mu,
    horizon: int,
    start_bits: int = DEFAULT_START_BITS,
    cap_bits: int = DEFAULT_CAP_BITS,
) -> ChainReport:
    """p_lambda inside p_mu: for t <= 1, L(t)/t^mu >= L(t)/t^lambda pointwise"""
    lam, mu = _index(lam), _index(mu)
    if not lam.value < mu.value:
        raise ProfileError(f"need lambda < mu, got {lam} and {mu}")

    at_lambda = ratio_sequence(P, lam, horizon, start_bits)
    at_mu = ratio_sequence(P, mu, horizon, start_bits)

    checked, holds = 0, True
    for point in at_lambda.points:
        if point.t > 1:
            continue
        sign = compare_ratios(
            lambda bits: ratio_enclosure(point.value, point.t, mu.value, bits),
            lambda bits: ratio_enclosure(point.value, point.t, lam.value, bits),
            start_bits, cap_bits,
        )
        checked += 1
        if sign < 0:
            logger.warning(f"chain violated at t={point.t}")
            holds = False

    return ChainReport(
        lam, mu, at_lambda, at_mu, checked, holds,
        classify(P, lam, horizon) if not P.is_truncated else empirical_verdict(at_lambda),
        classify(P, mu, horizon) if not P.is_truncated else empirical_verdict(at_mu),
    )


@dataclass(frozen=True)
class ProductSample:
    t: Fraction
    product: Enclosure
    left: Enclosure
    right: Enclosure
    additive: bool


@dataclass(frozen=True)
class ProductWitness:
    lam: StratumIndex
    samples: Tuple[ProductSample, ...]

    @property
    def holds(self) -> bool:
        return all(s.additive for s in self.samples)


def _default_samples(polygons: Sequence[ConvexProfile]) -> List[Fraction]:
    ts = {Fraction(1)}
    for P in polygons:
        ts.update(legendre_full(P).breakpoint_ts)
    ordered = sorted(ts)
    ts.update((a + b) / 2 for a, b in zip(ordered, ordered[1:]))
    ts.add(ordered[0] / 2)
    return sorted(t for t in ts if t > 0)


def product_witness(
    P: ConvexProfile,
    Q: ConvexProfile,
    lam,
    ts: Optional[Sequence[Rational]] = None,
    bits: int = DEFAULT_START_BITS,
) -> ProductWitness:
    """
    Ratio additivity for a product: L(fg)/t^lam = L(f)/t^lam + L(g)/t^lam

    The three ratios share the denominator t^lam, so additivity is
    checked exactly on the numerators; the ratios are reported as enclosures.
    """
    lam = _index(lam)
    R = minkowski_product(P, Q)
    samples = []
    for t in (ts if ts is not None else _default_samples((P, Q, R))):
        t = Fraction(t)
        lp, lq, lr = (legendre_eval(X, t).value for X in (P, Q, R))
        samples.append(ProductSample(
            t=t,
            product=ratio_enclosure(lr, t, lam.value, bits),
            left=ratio_enclosure(lp, t, lam.value, bits),
            right=ratio_enclosure(lq, t, lam.value, bits),
            additive=lr == lp + lq,
        ))
    return ProductWitness(lam, tuple(samples))
