"""Deterministic SVG emission."""

import xml.etree.ElementTree as ET

import numpy as np
import pytest

from dirgeo.svgplot import HeatMap, Series, emit_svg


def _parse(svg):
    return ET.fromstring(svg)


def test_repeat_is_byte_identical():
    s = Series("a", np.linspace(0, 1, 20), np.sin(np.linspace(0, 1, 20)))
    one = emit_svg([s], title="t", xlabel="x", ylabel="y")
    two = emit_svg([s], title="t", xlabel="x", ylabel="y")
    assert one == two


def test_two_point_curve_single_polyline():
    s = Series("seg", [0.0, 1.0], [0.0, 1.0])
    svg = emit_svg([s], title="t", xlabel="x", ylabel="y")
    root = _parse(svg)
    polys = root.findall(".//{http://www.w3.org/2000/svg}polyline")
    assert len(polys) == 1
    pts = polys[0].get("points").split()
    assert len(pts) == 2


def test_empty_series_list_is_valid_svg():
    svg = emit_svg([], title="empty", xlabel="x", ylabel="y")
    root = _parse(svg)
    assert root.tag.endswith("svg")
    assert root.findall(".//{http://www.w3.org/2000/svg}polyline") == []


def test_nonfinite_rejected_with_indices():
    y = np.array([0.0, np.nan, 1.0, np.inf])
    with pytest.raises(ValueError) as info:
        emit_svg([Series("bad", np.arange(4.0), y)], title="t", xlabel="x", ylabel="y")
    msg = str(info.value)
    assert "1" in msg and "3" in msg


def test_series_length_mismatch():
    with pytest.raises(ValueError):
        emit_svg([Series("m", [0.0, 1.0], [0.0])], title="t", xlabel="x", ylabel="y")


def test_log_axes_require_positive_data():
    s = Series("neg", [0.5, 1.0], [-1.0, 1.0])
    with pytest.raises(ValueError):
        emit_svg([s], title="t", xlabel="x", ylabel="y", ylog=True)


def test_dashed_series_gets_dasharray():
    a = Series("solid", [0.0, 1.0], [0.0, 1.0])
    b = Series("dash", [0.0, 1.0], [1.0, 0.0], dashed=True)
    svg = emit_svg([a, b], title="t", xlabel="x", ylabel="y")
    root = _parse(svg)
    polys = root.findall(".//{http://www.w3.org/2000/svg}polyline")
    dashes = [p.get("stroke-dasharray") for p in polys]
    assert sum(d is not None for d in dashes) == 1


def test_heatmap_basic():
    x = np.linspace(0.0, 1.0, 4)
    y = np.linspace(0.0, 2.0, 3)
    vals = np.arange(12.0).reshape(3, 4)
    svg = emit_svg(heatmap=HeatMap(x, y, vals), title="hm", xlabel="x", ylabel="y")
    root = _parse(svg)
    rects = root.findall(".//{http://www.w3.org/2000/svg}rect")
    # 12 cells plus frame / legend rectangles
    assert len(rects) >= 12


def test_heatmap_shape_validation():
    x = np.linspace(0.0, 1.0, 4)
    y = np.linspace(0.0, 2.0, 3)
    with pytest.raises(ValueError):
        HeatMap(x, y, np.zeros((4, 3)))
    with pytest.raises(ValueError):
        HeatMap(x[::-1], y, np.zeros((3, 4)))


def test_title_and_labels_appear():
    svg = emit_svg(
        [Series("c", [0.0, 1.0], [0.0, 1.0])],
        title="energy drift",
        xlabel="time",
        ylabel="drift",
    )
    assert "energy drift" in svg
    assert "time" in svg
    assert "drift" in svg
