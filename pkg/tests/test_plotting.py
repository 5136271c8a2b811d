"""Tests for figure output"""

from fractions import Fraction

from legendre import legendre_full
from newton import ConvexProfile, PolygonTail
from plotting import PlotConfig, render_csv, render_svg, transform_samples


def test_svg_document(three_node_polygon):
    text = render_svg(three_node_polygon, PlotConfig(width=200, height=100, samples=16))
    assert text.startswith("<?xml")
    assert text.rstrip().endswith("</svg>")
    assert text.count("<circle") == 3 + 2


def test_csv_blocks(three_node_polygon):
    text = render_csv(three_node_polygon, PlotConfig(samples=4))
    polygon, transform = text.split("\n\n")
    assert polygon.splitlines() == ["x,y", "0,3", "1,1", "3,0"]
    assert transform.splitlines()[0] == "t,L"
    assert "1/2,3/2" in transform.splitlines()


def test_samples_include_breakpoints(three_node_polygon):
    ts = transform_samples(legendre_full(three_node_polygon), 8)
    assert {Fraction(2), Fraction(1, 2)} <= set(ts)
    assert ts[0] == 0 and ts[-1] == 3


def test_truncated_samples_start_at_floor():
    P = ConvexProfile(((0, 3), (1, 1)), PolygonTail.TRUNCATED, 1)
    ts = transform_samples(legendre_full(P), 4)
    assert ts[0] == 1


def test_config_defaults():
    assert PlotConfig.from_dict(None) == PlotConfig()
    assert PlotConfig.from_dict({"samples": 8}).samples == 8
