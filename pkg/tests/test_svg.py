import re

import numpy as np

from slicedev.chain import ChainSpec, configure
from slicedev.svg import PAD, SIZE, render


def _points(svg, which):
    lines = [ln for ln in svg.splitlines() if ln.startswith("<polyline")]
    pts = re.search(r'points="([^"]+)"', lines[which]).group(1).split()
    return np.array([[float(v) for v in p.split(",")] for p in pts])


def test_figure_elements():
    a = configure(ChainSpec((1, 1, 1), (1.2, 1.2)))
    b = configure(ChainSpec((1, 1, 1), (0.3, -0.5)))
    svg = render(a.joints, b.joints, a.hand_distance(), title="demo")
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
    assert f'width="{SIZE}" height="{SIZE}"' in svg
    assert "<title>demo</title>" in svg
    dashed, solid = [ln for ln in svg.splitlines() if ln.startswith("<polyline")]
    assert "stroke-dasharray" in dashed and "stroke-dasharray" not in solid
    assert svg.count("<circle") == 1 + len(b.joints)


def test_auto_fit_keeps_everything_inside_the_viewport():
    a = configure(ChainSpec((50, 20, 70), (2.0, 0.9)))
    b = configure(ChainSpec((50, 20, 70), (-1.0, 0.2)))
    svg = render(a.joints, b.joints, a.hand_distance())
    for which in (0, 1):
        pts = _points(svg, which)
        assert pts.min() >= PAD - 1e-6 and pts.max() <= SIZE - PAD + 1e-6


def test_y_axis_points_up():
    b = np.array([[0.0, 0.0], [0.0, 1.0]])
    pts = _points(render(None, b), 0)
    assert pts[1, 1] < pts[0, 1]


def test_degenerate_extent_does_not_divide_by_zero():
    svg = render(None, np.array([[0.0, 0.0], [0.0, 0.0]]))
    assert "nan" not in svg
