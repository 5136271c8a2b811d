"""
Legendre transforms for witt-strata
L(N)(t) = inf_x N(x) + t*x, its piecewise-linear description,
the inverse transform, and the summation-by-parts identity at nodes
"""

import bisect
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Tuple

from errors import InconclusiveError, ProfileError, TruncationError, UnknownRegionError
from newton import ConvexProfile, PolygonTail
from valuation import (
    Rational,
    ValueWithCertificate,
    format_ext_rat,
    parse_rational,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConcaveTransform:
    """
    Increasing concave piecewise-linear function of t >= validity_floor

    Piece k is t -> intercepts[k] + slopes[k]*t. Piece 0 runs from the
    largest breakpoint to infinity; piece k runs between breakpoints k+1
    and k (1-based breakpoints, descending). The last piece runs down to
    validity_floor. Nothing is claimed below the floor.
    """
    breakpoints: Tuple[Tuple[Fraction, Fraction], ...]
    slopes: Tuple[int, ...]
    intercepts: Tuple[Fraction, ...]
    value_at_zero: Optional[Fraction] = None
    validity_floor: Fraction = Fraction(0)

    def __post_init__(self):
        if len(self.slopes) != len(self.breakpoints) + 1 or len(self.intercepts) != len(self.slopes):
            raise ProfileError("a transform needs one more piece than breakpoints")
        if any(n2 <= n1 for n1, n2 in zip(self.slopes, self.slopes[1:])):
            raise ProfileError("slopes must strictly increase toward t = 0")
        ts = [t for t, _ in self.breakpoints]
        if any(t2 >= t1 for t1, t2 in zip(ts, ts[1:])):
            raise ProfileError("breakpoints must be strictly descending")
        if ts and ts[-1] <= self.validity_floor:
            raise ProfileError("breakpoints must lie above the validity floor")
        for k, (t, value) in enumerate(self.breakpoints):
            left = self.intercepts[k + 1] + self.slopes[k + 1] * t
            right = self.intercepts[k] + self.slopes[k] * t
            if not (left == right == value):
                raise ProfileError(f"transform is discontinuous at breakpoint t={t}")
        if self.validity_floor == 0 and self.value_at_zero is not None:
            if self.value_at_zero != self.intercepts[-1]:
                raise ProfileError("value at zero disagrees with the last piece")

    @property
    def breakpoint_ts(self) -> List[Fraction]:
        return [t for t, _ in self.breakpoints]

    def evaluate(self, t: Rational) -> Fraction:
        t = Fraction(t)
        if t < self.validity_floor:
            raise UnknownRegionError(f"transform unknown below t={self.validity_floor}")
        negated = [-s for s, _ in self.breakpoints]
        k = bisect.bisect_left(negated, -t)
        return self.intercepts[k] + self.slopes[k] * t

    def to_dict(self) -> dict:
        return {
            "breakpoints": [[format_ext_rat(t), format_ext_rat(v)] for t, v in self.breakpoints],
            "slopes": list(self.slopes),
            "intercepts": [format_ext_rat(b) for b in self.intercepts],
            "value_at_zero": None if self.value_at_zero is None else format_ext_rat(self.value_at_zero),
            "validity_floor": format_ext_rat(self.validity_floor),
        }

    @staticmethod
    def from_dict(data: dict) -> 'ConcaveTransform':
        try:
            zero = data.get("value_at_zero")
            return ConcaveTransform(
                breakpoints=tuple((parse_rational(t), parse_rational(v)) for t, v in data["breakpoints"]),
                slopes=tuple(int(n) for n in data["slopes"]),
                intercepts=tuple(parse_rational(b) for b in data["intercepts"]),
                value_at_zero=None if zero is None else parse_rational(zero),
                validity_floor=parse_rational(data.get("validity_floor", "0")),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise ProfileError(f"malformed transform: {e}") from e

    def to_csv(self, ts: Iterable[Rational]) -> str:
        lines = ["t,L"]
        lines.extend(f"{format_ext_rat(Fraction(t))},{format_ext_rat(self.evaluate(t))}" for t in ts)
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class HypothesisCertificate:
    """An analytic statement that finite data cannot verify, supplied by its prover"""
    statement: str
    justification: str

    def to_dict(self) -> dict:
        return {"statement": self.statement, "justification": self.justification}


@dataclass(frozen=True)
class Corollary1Result:
    lhs: Fraction
    rhs: Fraction
    holds: bool


def validity_floor(P: ConvexProfile) -> Fraction:
    """
    Smallest t at which truncated data certifies L(t)

    Unknown coefficients contribute at least (N+1)t, so L(t) is certified
    once some node has y + x*t <= (N+1)t, i.e. t >= y / (N+1-x).
    """
    if not P.is_truncated:
        return Fraction(0)
    limit = P.truncation + 1
    return min(y / (limit - x) for x, y in P.nodes)


def legendre_eval(P: ConvexProfile, t: Rational) -> ValueWithCertificate:
    """inf over nodes of y + t*x; certified for truncated polygons when <= (N+1)t"""
    t = Fraction(t)
    if t < 0:
        raise ProfileError(f"transform evaluated at negative t={t}")
    value = min(y + t * x for x, y in P.nodes)
    if not P.is_truncated:
        return ValueWithCertificate(value, True)
    return ValueWithCertificate(value, value <= (P.truncation + 1) * t)


def legendre_full(P: ConvexProfile) -> ConcaveTransform:
    """
    Piecewise-linear description of L(N)

    Breakpoints sit at the slope magnitudes s_i, the slope on
    (s_{i+1}, s_i) is n_{i+1} and beyond s_1 it is n_1.
    """
    magnitudes = [-s for s in P.segment_slopes()]
    floor = validity_floor(P)
    kept = [s for s in magnitudes if s > floor]
    pieces = P.nodes[: len(kept) + 1]

    breakpoints = tuple((s, pieces[k][1] + s * pieces[k][0]) for k, s in enumerate(kept))
    # a truncated polygon reaching 0 pins v_0 = 0 whatever the tail holds
    value_at_zero = P.minimum if floor == 0 else None

    return ConcaveTransform(
        breakpoints=breakpoints,
        slopes=tuple(x for x, _ in pieces),
        intercepts=tuple(y for _, y in pieces),
        value_at_zero=value_at_zero,
        validity_floor=floor,
    )


def inverse_legendre(T: ConcaveTransform) -> ConvexProfile:
    """The unique constant-tail polygon whose transform is T"""
    if T.validity_floor > 0:
        raise TruncationError("polygon underdetermined near 0")
    return ConvexProfile(tuple(zip(T.slopes, T.intercepts)), PolygonTail.CONSTANT)


def rescale_transform(T: ConcaveTransform, p: int) -> ConcaveTransform:
    """t -> (1/p) L(p t), the transform of the Frobenius pullback"""
    if isinstance(p, bool) or not isinstance(p, int) or p < 2:
        raise ProfileError(f"residue characteristic must be an integer >= 2, got {p!r}")
    return ConcaveTransform(
        breakpoints=tuple((t / p, v / p) for t, v in T.breakpoints),
        slopes=T.slopes,
        intercepts=tuple(b / p for b in T.intercepts),
        value_at_zero=None if T.value_at_zero is None else T.value_at_zero / p,
        validity_floor=T.validity_floor / p,
    )


def corollary1_check(
    P: ConvexProfile,
    i: int,
    certificate: Optional[HypothesisCertificate] = None,
) -> Corollary1Result:
    """
    N(n_i) = -s_i n_i + L(s_i) at the i-th node (1-based)

    Finitely many nodes make the hypothesis automatic. A truncated polygon
    needs an externally supplied certificate for lim s_i n_{i+1} = 0.
    """
    if P.is_truncated and certificate is None:
        raise TruncationError("hypothesis unverifiable at finite truncation")

    sequence = P.slopes()
    entry = sequence[i]
    if entry.magnitude is None:
        raise InconclusiveError(f"slope right of node {entry.node} is hidden by the truncation")

    s = entry.magnitude
    transform = legendre_eval(P, s)
    if not transform.exact:
        raise InconclusiveError(f"L(s_{i}) is not certified at truncation {P.truncation}")

    lhs = entry.value
    rhs = -s * entry.node + transform.value
    return Corollary1Result(lhs, rhs, lhs == rhs)
