"""
Rigorous enclosures for witt-strata
Interval helpers on mpmath's interval context

Every computation gets its own MPIntervalContext so that working
precision is never shared between threads. Conversions between
rationals and intervals round outward.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Tuple

from mpmath.ctx_iv import MPIntervalContext
from mpmath.libmp import from_rational, round_ceiling, round_floor, to_rational

from errors import InconclusiveError
from valuation import INF, ExtRat, format_ext_rat

logger = logging.getLogger(__name__)

DEFAULT_START_BITS = 64
DEFAULT_CAP_BITS = 256


def interval_context(bits: int) -> MPIntervalContext:
    ctx = MPIntervalContext()
    ctx.prec = bits
    return ctx


def to_interval(ctx: MPIntervalContext, x: Fraction):
    return rational_interval(ctx, x, x)


def rational_interval(ctx: MPIntervalContext, lo: Fraction, hi: Fraction):
    """Smallest representable interval containing [lo, hi]"""
    lo, hi = Fraction(lo), Fraction(hi)
    return ctx.make_mpf((
        from_rational(lo.numerator, lo.denominator, ctx.prec, round_floor),
        from_rational(hi.numerator, hi.denominator, ctx.prec, round_ceiling),
    ))


def interval_bounds(value) -> Tuple[Fraction, Fraction]:
    """Exact rational endpoints of an interval"""
    lo, hi = value._mpi_
    return Fraction(*to_rational(lo)), Fraction(*to_rational(hi))


@dataclass(frozen=True)
class Enclosure:
    """A closed interval [lo, hi] known to contain a real quantity (hi may be inf)"""
    lo: ExtRat
    hi: ExtRat

    @classmethod
    def point(cls, value: ExtRat) -> 'Enclosure':
        return cls(value, value)

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> ExtRat:
        if self.hi is INF:
            return INF
        return self.hi - self.lo

    def certainly_less(self, other: 'Enclosure') -> bool:
        return self.hi < other.lo

    def certainly_greater(self, other: 'Enclosure') -> bool:
        return self.lo > other.hi

    def approx(self) -> float:
        if self.lo is INF:
            return float("inf")
        if self.hi is INF:
            return float(self.lo)
        return float((self.lo + self.hi) / 2)

    def __str__(self):
        if self.exact:
            return format_ext_rat(self.lo)
        return f"[{self.approx():.6g} ± {float(self.width) / 2:.2g}]"

    def to_dict(self) -> dict:
        return {"lo": format_ext_rat(self.lo), "hi": format_ext_rat(self.hi), "exact": self.exact}


def exact_root(n: int, q: int) -> Optional[int]:
    """The integer q-th root of n when n is a perfect q-th power"""
    if n < 0 or q < 1:
        return None
    if n in (0, 1) or q == 1:
        return n
    ctx = interval_context(n.bit_length() // q + 32)
    approx = ctx.exp(ctx.ln(ctx.mpf(n)) / q)
    lo, hi = interval_bounds(approx)
    for candidate in range(int(lo), int(hi) + 2):
        if candidate ** q == n:
            return candidate
    return None


def rational_power(t: Fraction, lam: Fraction, bits: int = DEFAULT_START_BITS) -> Enclosure:
    """Enclosure of t^lam for t >= 0 and rational lam >= 0; exact whenever t^lam is rational"""
    t, lam = Fraction(t), Fraction(lam)
    if lam == 0:
        return Enclosure.point(Fraction(1))
    if t == 0:
        return Enclosure.point(Fraction(0))
    if lam.denominator == 1:
        return Enclosure.point(t ** int(lam))

    q = lam.denominator
    num_root = exact_root(t.numerator, q)
    den_root = exact_root(t.denominator, q)
    if num_root is not None and den_root is not None:
        return Enclosure.point(Fraction(num_root, den_root) ** lam.numerator)

    ctx = interval_context(bits + 8)
    value = ctx.exp(ctx.ln(to_interval(ctx, t)) * to_interval(ctx, lam))
    return Enclosure(*interval_bounds(value))


def ratio_enclosure(value: ExtRat, t: Fraction, lam: Fraction, bits: int = DEFAULT_START_BITS) -> Enclosure:
    """Enclosure of value / t^lam for value >= 0"""
    if value is INF:
        return Enclosure.point(INF)
    if t == 0:
        if lam == 0:
            return Enclosure.point(value)
        if value == 0:
            raise InconclusiveError("0 / 0 ratio at t = 0")
        return Enclosure.point(INF)
    power = rational_power(t, lam, bits)
    if value == 0:
        return Enclosure.point(Fraction(0))
    return Enclosure(value / power.hi, value / power.lo)


def compare_ratios(
    left: Callable[[int], Enclosure],
    right: Callable[[int], Enclosure],
    start_bits: int = DEFAULT_START_BITS,
    cap_bits: int = DEFAULT_CAP_BITS,
) -> int:
    """Sign of left - right, deciding with adaptive precision; ties only when both are exact"""
    bits = start_bits
    while True:
        a, b = left(bits), right(bits)
        if a.exact and b.exact and a.lo == b.lo:
            return 0
        if a.certainly_less(b):
            return -1
        if a.certainly_greater(b):
            return 1
        if bits >= cap_bits:
            raise InconclusiveError(f"comparison undecided at {cap_bits} bits")
        bits = min(bits * 2, cap_bits)


def exp_neg_bounds(i: int, bits: int) -> Tuple[Fraction, Fraction]:
    """Rational lower and upper bounds on e^{-i}"""
    ctx = interval_context(bits)
    return interval_bounds(ctx.exp(ctx.mpf(-i)))


def inverse_power(ctx: MPIntervalContext, j: int, a: Fraction):
    """Interval j^{-a} for a positive integer j and rational a"""
    if a.denominator == 1:
        return to_interval(ctx, Fraction(1, j ** int(a)) if a >= 0 else Fraction(j ** int(-a)))
    return ctx.exp(-to_interval(ctx, a) * ctx.ln(ctx.mpf(j)))
