"""
Valuation core for witt-strata
Extended rationals, coefficient-valuation profiles and Gauss valuations

A profile records the data {(i, v(a_i))} of a pi-expansion f = sum [a_i] pi^i.
Nothing here represents the coefficients a_i themselves, only their valuations.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple, Union

from errors import InconclusiveError, ProfileError, ZeroElementError

logger = logging.getLogger(__name__)


class _Infinity:
    """The valuation of zero; larger than every rational"""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "inf"

    def __str__(self):
        return "inf"

    def __hash__(self):
        return hash("witt-strata-infinity")

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __mul__(self, other):
        if other == 0:
            raise ProfileError("inf * 0 is undefined")
        return self

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()

ExtRat = Union[Fraction, _Infinity]
Rational = Union[Fraction, int]


def parse_rational(text: Union[str, int, Fraction]) -> Fraction:
    """Parse "p/q" or an integer into an exact rational; floats are rejected"""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool) or isinstance(text, float):
        raise ProfileError(f"expected an exact rational, got {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    raw = str(text).strip()
    if "." in raw or "e" in raw.lower():
        raise ProfileError(f"expected 'num/den', got {raw!r}")
    try:
        return Fraction(raw)
    except (ValueError, ZeroDivisionError) as e:
        raise ProfileError(f"malformed rational {raw!r}: {e}") from e


def parse_ext_rat(text: Union[str, int, Fraction]) -> ExtRat:
    if isinstance(text, str) and text.strip().lower() in ("inf", "infinity", "∞"):
        return INF
    return parse_rational(text)


def format_ext_rat(value: ExtRat) -> str:
    """Canonical lowest-terms form used in every file format"""
    if value is INF:
        return "inf"
    return str(Fraction(value))


class Tail(str, Enum):
    FINITE = "finite"
    TRUNCATED = "truncated"


@dataclass(frozen=True)
class ValueWithCertificate:
    """A computed value; when not exact it is an upper bound for the true one"""
    value: ExtRat
    exact: bool

    def __str__(self):
        return f"{format_ext_rat(self.value)} {'exact' if self.exact else 'upper-bound'}"

    def to_dict(self) -> dict:
        return {"value": format_ext_rat(self.value), "exact": self.exact}


@dataclass(frozen=True)
class CoefficientProfile:
    """
    Valuation data of a pi-expansion

    FINITE: every index not listed has v(a_i) = inf.
    TRUNCATED: every index <= truncation is listed (inf entries may be omitted),
    indices above it are unknown but have valuation >= 0.
    """
    entries: Tuple[Tuple[int, ExtRat], ...] = ()
    tail: Tail = Tail.FINITE
    truncation: Optional[int] = None

    def __post_init__(self):
        entries = tuple(
            (int(i), Fraction(v) if isinstance(v, int) and not isinstance(v, bool) else v)
            for i, v in self.entries
        )
        object.__setattr__(self, "entries", entries)

        previous = -1
        for index, val in entries:
            if index < 0:
                raise ProfileError(f"negative index {index}")
            if index <= previous:
                raise ProfileError("indices must be distinct and strictly increasing")
            if val is not INF:
                if not isinstance(val, Fraction):
                    raise ProfileError(f"valuation at index {index} is not an exact rational")
                if val < 0:
                    raise ProfileError(f"valuation at index {index} is negative: {val}")
            previous = index

        if self.tail == Tail.TRUNCATED:
            if self.truncation is None or self.truncation < 0:
                raise ProfileError("truncated profile needs a nonnegative truncation index")
            if entries and entries[-1][0] > self.truncation:
                raise ProfileError(
                    f"index {entries[-1][0]} listed beyond truncation {self.truncation}"
                )
            if not any(v is not INF for _, v in entries):
                raise ProfileError("truncated profile has no finite entry")
        elif self.truncation is not None:
            raise ProfileError("finite profile cannot carry a truncation index")

    @classmethod
    def finite(cls, values: Union[Dict[int, Rational], Iterable[Tuple[int, Rational]]]):
        """Build a FINITE profile from {index: valuation} or (index, valuation) pairs"""
        items = values.items() if isinstance(values, dict) else values
        entries = sorted((i, _coerce(v)) for i, v in items)
        return cls(tuple(entries), Tail.FINITE)

    @classmethod
    def truncated(cls, values, truncation: int):
        items = values.items() if isinstance(values, dict) else values
        entries = sorted((i, _coerce(v)) for i, v in items)
        return cls(tuple(entries), Tail.TRUNCATED, truncation)

    @property
    def is_zero(self) -> bool:
        return self.tail == Tail.FINITE and not self.finite_entries()

    @property
    def is_truncated(self) -> bool:
        return self.tail == Tail.TRUNCATED

    def finite_entries(self) -> List[Tuple[int, Fraction]]:
        return [(i, v) for i, v in self.entries if v is not INF]

    def valuation_at(self, index: int) -> ExtRat:
        """v(a_index); raises for indices hidden by the truncation"""
        for i, v in self.entries:
            if i == index:
                return v
        if self.is_truncated and index > self.truncation:
            raise ProfileError(f"index {index} lies beyond truncation {self.truncation}")
        return INF

    def to_dict(self) -> dict:
        data = {"entries": [[i, format_ext_rat(v)] for i, v in self.entries]}
        data["tail"] = "finite" if self.tail == Tail.FINITE else {"truncated": self.truncation}
        return data

    @staticmethod
    def from_dict(data: dict) -> 'CoefficientProfile':
        try:
            entries = tuple((int(i), parse_ext_rat(v)) for i, v in data["entries"])
            tail = data.get("tail", "finite")
        except (KeyError, TypeError, ValueError) as e:
            raise ProfileError(f"malformed profile: {e}") from e
        if tail == "finite":
            return CoefficientProfile(entries, Tail.FINITE)
        if isinstance(tail, dict) and "truncated" in tail:
            try:
                truncation = int(tail["truncated"])
            except (TypeError, ValueError) as e:
                raise ProfileError(f"malformed truncation index: {e}") from e
            return CoefficientProfile(entries, Tail.TRUNCATED, truncation)
        raise ProfileError(f"unknown tail {tail!r}")


def _coerce(value) -> ExtRat:
    if value is INF:
        return INF
    return parse_ext_rat(value)


def _require_nonnegative(s: Rational, name: str = "s") -> Fraction:
    s = Fraction(s)
    if s < 0:
        raise ProfileError(f"{name} must be nonnegative, got {s}")
    return s


def gauss_valuation(f: CoefficientProfile, s: Rational) -> ValueWithCertificate:
    """
    v_s(f) = inf_i (v(a_i) + i*s)

    For a truncated profile the listed infimum is exact when it is at most
    (N+1)*s, since every unlisted term is at least (N+1)*s. At s = 0 a
    truncated profile is never certified.
    """
    s = _require_nonnegative(s)
    if f.is_zero:
        raise ZeroElementError("valuation of zero")

    value = min(v + i * s for i, v in f.finite_entries())

    if f.tail == Tail.FINITE:
        return ValueWithCertificate(value, True)
    if s == 0:
        return ValueWithCertificate(value, False)
    return ValueWithCertificate(value, value <= (f.truncation + 1) * s)


def monotonicity_check(f: CoefficientProfile, s: Rational, t: Rational) -> bool:
    """v_t(f) >= v_s(f) >= 0 for 0 <= s <= t"""
    s = _require_nonnegative(s)
    t = Fraction(t)
    if t < s:
        raise ProfileError(f"need s <= t, got s={s}, t={t}")

    low = gauss_valuation(f, s)
    high = gauss_valuation(f, t)
    if not (low.exact and high.exact):
        raise InconclusiveError("inconclusive at this truncation")
    return high.value >= low.value >= 0


def frobenius_pullback(f: CoefficientProfile, p: int) -> CoefficientProfile:
    """Profile of phi^{-1}(f): every coefficient valuation divided by p"""
    if isinstance(p, bool) or not isinstance(p, int) or p < 2:
        raise ProfileError(f"residue characteristic must be an integer >= 2, got {p!r}")
    entries = tuple((i, v if v is INF else v / p) for i, v in f.entries)
    return CoefficientProfile(entries, f.tail, f.truncation)


def extend_profile(f: CoefficientProfile, extra: Iterable[Tuple[int, Rational]]) -> CoefficientProfile:
    """
    Fill in coefficients beyond a truncation

    The result is FINITE: the listed data plus `extra`, all of whose
    indices must exceed the truncation index.
    """
    if not f.is_truncated:
        raise ProfileError("only truncated profiles can be extended")
    added = sorted((i, _coerce(v)) for i, v in extra)
    if added and added[0][0] <= f.truncation:
        raise ProfileError(f"extension index {added[0][0]} is not beyond {f.truncation}")
    return CoefficientProfile(f.entries + tuple(added), Tail.FINITE)
