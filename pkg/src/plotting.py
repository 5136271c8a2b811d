"""
Static figures for witt-strata
A Newton polygon and its Legendre transform side by side, as SVG or CSV
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from legendre import ConcaveTransform, legendre_full
from newton import ConvexProfile

logger = logging.getLogger(__name__)

PREAMBLE = """\
<?xml version="1.0" standalone="no"?>
<svg width="{width}mm" height="{height}mm" viewBox="0 0 {width} {height}"
     version="1.1" xmlns="http://www.w3.org/2000/svg">
<rect x="0" y="0" width="{width}" height="{height}" style="fill:#ffffff"/>
"""

POSTAMBLE = "</svg>\n"


@dataclass
class PlotConfig:
    width: int = 240
    height: int = 110
    samples: int = 64

    @staticmethod
    def from_dict(data: dict) -> 'PlotConfig':
        data = data or {}
        return PlotConfig(
            width=int(data.get('width', 240)),
            height=int(data.get('height', 110)),
            samples=int(data.get('samples', 64)),
        )


class SVG:
    """Accumulates drawing commands in canvas coordinates (y grows downward)"""

    def __init__(self, width: int, height: int):
        self.width = width
        self.height = height
        self.commands: List[str] = []

    def line(self, points: Sequence[Tuple[float, float]], color: str = '#000000', width: float = 0.5):
        self.commands.append(
            '<polyline points="%s" style="fill:none;stroke:%s;stroke-width:%.2f"/>' % (
                ' '.join('%.3f,%.3f' % p for p in points), color, width,
            )
        )

    def circle(self, x: float, y: float, radius: float = 1.0, color: str = '#000000'):
        self.commands.append(
            '<circle cx="%.3f" cy="%.3f" r="%.2f" style="fill:%s"/>' % (x, y, radius, color)
        )

    def text(self, x: float, y: float, text: str, color: str = '#666666', size: int = 4):
        self.commands.append(
            '<text x="%.3f" y="%.3f" fill="%s" font-size="%d" font-family="monospace">%s</text>' % (
                x, y, color, size, text,
            )
        )

    def render(self) -> str:
        return (
            PREAMBLE.format(width=self.width, height=self.height)
            + ''.join(command + '\n' for command in self.commands)
            + POSTAMBLE
        )


class Panel:
    """Maps data coordinates into a rectangle of the canvas"""

    def __init__(self, left: float, top: float, width: float, height: float,
                 x_range: Tuple[float, float], y_range: Tuple[float, float]):
        self.left, self.top, self.width, self.height = left, top, width, height
        self.x0, self.x1 = x_range
        self.y0, self.y1 = y_range

    def map(self, x: float, y: float) -> Tuple[float, float]:
        fx = (x - self.x0) / ((self.x1 - self.x0) or 1.0)
        fy = (y - self.y0) / ((self.y1 - self.y0) or 1.0)
        return self.left + fx * self.width, self.top + (1 - fy) * self.height

    def axes(self, svg: SVG, x_label: str, y_label: str):
        origin = self.map(self.x0, self.y0)
        svg.line([self.map(self.x0, self.y1), origin, self.map(self.x1, self.y0)], '#999999', 0.3)
        svg.text(self.left + self.width - 4, origin[1] + 5, x_label)
        svg.text(self.left - 4, self.top - 2, y_label)


def transform_samples(transform: ConcaveTransform, count: int) -> List[Fraction]:
    """Breakpoints plus evenly spaced t between the validity floor and 3/2 s_1"""
    ts = transform.breakpoint_ts
    floor = transform.validity_floor
    top = ts[0] * Fraction(3, 2) if ts else max(Fraction(1), 2 * floor)
    grid = [floor + (top - floor) * Fraction(k, count) for k in range(count + 1)]
    return sorted(set(grid) | set(ts))


def render_svg(P: ConvexProfile, config: PlotConfig = PlotConfig()) -> str:
    """The polygon on the left, its transform on the right"""
    transform = legendre_full(P)
    svg = SVG(config.width, config.height)
    margin = 12
    panel_width = (config.width - 3 * margin) / 2
    panel_height = config.height - 2 * margin

    xs = [float(x) for x, _ in P.nodes]
    ys = [float(y) for _, y in P.nodes]
    x_end = xs[-1] + max(1.0, 0.2 * (xs[-1] - xs[0]))
    left = Panel(margin, margin, panel_width, panel_height, (0.0, x_end), (0.0, max(ys) * 1.1 or 1.0))
    left.axes(svg, "x", "N(x)")
    points = [left.map(x, y) for x, y in zip(xs, ys)]
    if not P.is_truncated:
        points.append(left.map(x_end, ys[-1]))
    svg.line(points, '#1f4e99', 0.6)
    for x, y in zip(xs, ys):
        svg.circle(*left.map(x, y), radius=0.9, color='#1f4e99')

    ts = transform_samples(transform, config.samples)
    values = [float(transform.evaluate(t)) for t in ts]
    right = Panel(2 * margin + panel_width, margin, panel_width, panel_height,
                  (0.0, float(ts[-1])), (0.0, max(values) * 1.1 or 1.0))
    right.axes(svg, "t", "L(t)")
    svg.line([right.map(float(t), v) for t, v in zip(ts, values)], '#b03a2e', 0.6)
    for t, value in transform.breakpoints:
        svg.circle(*right.map(float(t), float(value)), radius=0.7, color='#b03a2e')

    logger.debug(f"rendered {len(P.nodes)} nodes and {len(ts)} transform samples")
    return svg.render()


def render_csv(P: ConvexProfile, config: PlotConfig = PlotConfig()) -> str:
    """Polygon nodes, then transform samples, as two CSV blocks"""
    transform = legendre_full(P)
    ts = transform_samples(transform, config.samples)
    return P.to_csv() + "\n" + transform.to_csv(ts)

