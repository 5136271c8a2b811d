"""
Newton polygons for witt-strata
Decreasing convex hulls of {(i, v(a_i))}, node and slope extraction,
and the polygon operations dual to products and sums
"""

import bisect
import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from errors import ProfileError, TruncationError, UnknownRegionError, ZeroElementError
from valuation import (
    INF,
    CoefficientProfile,
    ExtRat,
    Rational,
    Tail,
    format_ext_rat,
    parse_rational,
)

logger = logging.getLogger(__name__)

Point = Tuple[int, Fraction]


class PolygonTail(str, Enum):
    CONSTANT = "constant"    # slope 0 beyond the last node
    TRUNCATED = "truncated"  # unknown beyond the last node


@dataclass(frozen=True)
class SlopeEntry:
    """Node n_i, its value, and the slope -s_i on (n_i, n_{i+1})"""
    node: int
    value: Fraction
    right_slope: Optional[Fraction]

    @property
    def magnitude(self) -> Optional[Fraction]:
        return None if self.right_slope is None else -self.right_slope


@dataclass(frozen=True)
class SlopeSequence:
    """Nodes indexed from 1 in ascending order"""
    entries: Tuple[SlopeEntry, ...]

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i: int) -> SlopeEntry:
        """1-based access, matching n_1 < n_2 < ..."""
        if not 1 <= i <= len(self.entries):
            raise IndexError(f"node index {i} out of range 1..{len(self.entries)}")
        return self.entries[i - 1]

    @property
    def magnitudes(self) -> List[Fraction]:
        """s_1 > s_2 > ... for every node whose right slope is known"""
        return [e.magnitude for e in self.entries if e.magnitude is not None]


@dataclass(frozen=True)
class ConvexProfile:
    """
    A nonnegative convex decreasing piecewise-linear function given by its nodes

    The function is inf left of the first node. For a TRUNCATED tail,
    `truncation` is the index N of the source profile: unknown coefficients
    live at indices > N. It defaults to the last node abscissa, the most
    conservative choice.
    """
    nodes: Tuple[Point, ...]
    tail: PolygonTail = PolygonTail.CONSTANT
    truncation: Optional[int] = None

    def __post_init__(self):
        nodes = tuple((_integer_abscissa(x), parse_rational(y)) for x, y in self.nodes)
        object.__setattr__(self, "nodes", nodes)
        if not nodes:
            raise ProfileError("a polygon needs at least one node")

        previous_slope = None
        for k, (x, y) in enumerate(nodes):
            if x < 0 or y < 0:
                raise ProfileError(f"node ({x}, {y}) outside the nonnegative quadrant")
            if k == 0:
                continue
            px, py = nodes[k - 1]
            if x <= px:
                raise ProfileError("node abscissas must be strictly increasing")
            slope = (y - py) / (x - px)
            if slope >= 0:
                raise ProfileError(f"polygon must strictly decrease, slope {slope} at x={x}")
            if previous_slope is not None and slope <= previous_slope:
                raise ProfileError(f"slopes must strictly increase, {slope} after {previous_slope}")
            previous_slope = slope

        if self.tail == PolygonTail.TRUNCATED:
            if self.truncation is None:
                object.__setattr__(self, "truncation", nodes[-1][0])
            elif self.truncation < nodes[-1][0]:
                raise ProfileError("truncation index lies before the last node")
        elif self.truncation is not None:
            raise ProfileError("constant-tail polygon cannot carry a truncation index")

    @property
    def is_truncated(self) -> bool:
        return self.tail == PolygonTail.TRUNCATED

    @property
    def xs(self) -> List[int]:
        return [x for x, _ in self.nodes]

    @property
    def minimum(self) -> Fraction:
        """Smallest node value; equals v_0 for a constant tail"""
        return self.nodes[-1][1]

    def segment_slopes(self) -> List[Fraction]:
        """Slopes -s_1, -s_2, ... between consecutive nodes"""
        return [
            (y1 - y0) / (x1 - x0)
            for (x0, y0), (x1, y1) in zip(self.nodes, self.nodes[1:])
        ]

    def slopes(self) -> SlopeSequence:
        inner = self.segment_slopes()
        last = Fraction(0) if self.tail == PolygonTail.CONSTANT else None
        entries = [
            SlopeEntry(x, y, inner[k] if k < len(inner) else last)
            for k, (x, y) in enumerate(self.nodes)
        ]
        return SlopeSequence(tuple(entries))

    def to_dict(self) -> dict:
        data = {
            "nodes": [[x, format_ext_rat(y)] for x, y in self.nodes],
            "tail": self.tail.value,
        }
        if self.is_truncated:
            data["truncation"] = self.truncation
        return data

    @staticmethod
    def from_dict(data: dict) -> 'ConvexProfile':
        try:
            nodes = tuple((x, parse_rational(y)) for x, y in data["nodes"])
            tail = PolygonTail(data.get("tail", "constant"))
            truncation = int(data["truncation"]) if tail == PolygonTail.TRUNCATED else None
        except (KeyError, TypeError, ValueError) as e:
            raise ProfileError(f"malformed polygon: {e}") from e
        return ConvexProfile(nodes, tail, truncation)

    def to_csv(self) -> str:
        lines = ["x,y"]
        lines.extend(f"{x},{format_ext_rat(y)}" for x, y in self.nodes)
        return "\n".join(lines) + "\n"

    def as_profile(self) -> CoefficientProfile:
        """Read the node list back as coefficient data"""
        if self.is_truncated:
            return CoefficientProfile(self.nodes, Tail.TRUNCATED, self.truncation)
        return CoefficientProfile(self.nodes, Tail.FINITE)


def _integer_abscissa(x) -> int:
    if isinstance(x, bool):
        raise ProfileError("node abscissa must be an integer")
    if isinstance(x, int):
        return x
    value = parse_rational(x)
    if value.denominator != 1:
        raise ProfileError(f"node abscissa must be an integer, got {value}")
    return int(value)


def _cross(o: Point, a: Point, b: Point) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def decreasing_hull(points: Iterable[Point]) -> List[Point]:
    """
    Vertices of the decreasing convex hull of a finite point set

    Points are reduced to the leftmost occurrence of the minimal value
    (everything to its right lies above the horizontal ray), then one
    monotone-chain pass keeps the lower hull. Collinear points are dropped.
    """
    best = {}
    for x, y in points:
        if y is INF:
            continue
        if x not in best or y < best[x]:
            best[x] = y
    if not best:
        return []

    ordered = sorted(best.items())
    lowest = min(y for _, y in ordered)
    cut = next(k for k, (_, y) in enumerate(ordered) if y == lowest)
    ordered = ordered[: cut + 1]

    lower: List[Point] = []
    for p in ordered:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    return lower


def newton_polygon(f: CoefficientProfile) -> ConvexProfile:
    """N(f): boundary of the decreasing convex hull of {(i, v(a_i))}"""
    if f.is_zero:
        raise ZeroElementError("zero element has no Newton polygon")
    nodes = decreasing_hull(f.finite_entries())
    if f.is_truncated:
        return ConvexProfile(tuple(nodes), PolygonTail.TRUNCATED, f.truncation)
    return ConvexProfile(tuple(nodes), PolygonTail.CONSTANT)


def eval_polygon(P: ConvexProfile, x: Rational) -> ExtRat:
    x = Fraction(x)
    if x < 0:
        raise ProfileError(f"polygon evaluated at negative abscissa {x}")
    xs = P.xs
    if x < xs[0]:
        return INF
    if x > xs[-1]:
        if P.is_truncated:
            raise UnknownRegionError(f"unknown region: x={x} beyond last node {xs[-1]}")
        return P.minimum

    k = bisect.bisect_left(xs, x)
    x1, y1 = P.nodes[k]
    if x1 == x:
        return y1
    x0, y0 = P.nodes[k - 1]
    return y0 + (y1 - y0) * (x - x0) / (x1 - x0)


def _require_constant(polygons: Sequence[ConvexProfile], what: str):
    if any(P.is_truncated for P in polygons):
        raise TruncationError(f"{what} undefined under truncation")


def minkowski_product(P: ConvexProfile, Q: ConvexProfile) -> ConvexProfile:
    """
    Polygon of a product: its Legendre transform is L(P) + L(Q)

    Starts at the sum of the first nodes and walks the union of both edge
    sequences in increasing slope order; equal slopes merge into one edge.
    """
    _require_constant((P, Q), "product")

    edges = []
    for R in (P, Q):
        edges.extend(
            ((y1 - y0) / (x1 - x0), x1 - x0, y1 - y0)
            for (x0, y0), (x1, y1) in zip(R.nodes, R.nodes[1:])
        )
    edges.sort(key=lambda e: e[0])

    merged = []
    for slope, dx, dy in edges:
        if merged and merged[-1][0] == slope:
            _, mdx, mdy = merged[-1]
            merged[-1] = (slope, mdx + dx, mdy + dy)
        else:
            merged.append((slope, dx, dy))

    x, y = P.nodes[0][0] + Q.nodes[0][0], P.nodes[0][1] + Q.nodes[0][1]
    nodes = [(x, y)]
    for _, dx, dy in merged:
        x, y = x + dx, y + dy
        nodes.append((x, y))
    return ConvexProfile(tuple(nodes), PolygonTail.CONSTANT)


def sum_lower_bound(P: ConvexProfile, Q: ConvexProfile) -> ConvexProfile:
    """Convexified pointwise minimum; a lower bound for N(f+g)"""
    _require_constant((P, Q), "bound")
    return ConvexProfile(tuple(decreasing_hull(P.nodes + Q.nodes)), PolygonTail.CONSTANT)


def frobenius_polygon(P: ConvexProfile, p: int) -> ConvexProfile:
    """N(phi^{-1} f): node values divided by p, abscissas unchanged"""
    if isinstance(p, bool) or not isinstance(p, int) or p < 2:
        raise ProfileError(f"residue characteristic must be an integer >= 2, got {p!r}")
    return ConvexProfile(tuple((x, y / p) for x, y in P.nodes), P.tail, P.truncation)
