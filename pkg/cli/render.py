"""
SVG drawing of a planar oriented graph.

Points are mapped into a square canvas with a margin (y grows upwards as in
the input); every directed edge is a line ending in an arrowhead marker.
Output depends only on the inputs, so the same graph always renders to the
same bytes.
"""

import xml.etree.ElementTree as ET

import numpy as np

from core_geometry.errors import UsageError

MARGIN_FRACTION = 0.05
POINT_RADIUS = 3.0
SVG_NAMESPACE = "http://www.w3.org/2000/svg"


def _fmt(value):
    return f"{value:.3f}"


def _canvas_coordinates(coords, size):
    lower = coords.min(axis=0)
    span = float((coords.max(axis=0) - lower).max())
    margin = size * MARGIN_FRACTION
    scale = (size - 2 * margin) / span if span > 0 else 0.0
    x = margin + (coords[:, 0] - lower[0]) * scale
    y = size - (margin + (coords[:, 1] - lower[1]) * scale)
    return np.stack([x, y], axis=1)


def _svg_root(size):
    return ET.Element("svg", xmlns=SVG_NAMESPACE, version="1.1",
                      width=f"{size}px", height=f"{size}px", viewBox=f"0 0 {size} {size}")


def _arrow_marker(root, stroke_width):
    defs = ET.SubElement(root, "defs")
    marker = ET.SubElement(defs, "marker", id="arrow",
                           viewBox="0 0 10 10", refX="10", refY="5",
                           markerWidth=_fmt(6 + 2 * stroke_width), markerHeight=_fmt(6 + 2 * stroke_width),
                           markerUnits="userSpaceOnUse", orient="auto")
    ET.SubElement(marker, "path", d="M0 0L10 5L0 10z", fill="black")


def render_svg(ps, g, size=800, stroke_width=1.0):
    """
    Renders `g` over the planar point set `ps`.

    Returns:
        str: SVG document.
    """
    if ps.dimension != 2:
        raise UsageError("render requires planar input")
    if g.n != len(ps):
        raise UsageError(f"graph has {g.n} vertices but the point set has {len(ps)} points")
    if size <= 0 or stroke_width <= 0:
        raise UsageError("canvas size and stroke width must be positive")

    canvas = _canvas_coordinates(ps.coords, size)
    root = _svg_root(size)
    _arrow_marker(root, stroke_width)

    edges = ET.SubElement(root, "g", id="edges", stroke="black")
    edges.set("stroke-width", _fmt(stroke_width))
    for u, v in g.edges():
        (x1, y1), (x2, y2) = canvas[u], canvas[v]
        # stop the line at the target's disc so the arrowhead stays visible
        length = float(np.hypot(x2 - x1, y2 - y1))
        shrink = POINT_RADIUS / length if length > POINT_RADIUS else 0.0
        x2, y2 = x2 - (x2 - x1) * shrink, y2 - (y2 - y1) * shrink
        line = ET.SubElement(edges, "line", x1=_fmt(x1), y1=_fmt(y1), x2=_fmt(x2), y2=_fmt(y2))
        line.set("marker-end", "url(#arrow)")

    points = ET.SubElement(root, "g", id="points", fill="red")
    for index, (x, y) in enumerate(canvas):
        circle = ET.SubElement(points, "circle", cx=_fmt(x), cy=_fmt(y), r=_fmt(POINT_RADIUS))
        ET.SubElement(circle, "title").text = str(index)

    return ET.tostring(root, encoding="unicode") + "\n"
