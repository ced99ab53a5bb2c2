"""SVG rendering of drawings, with optional bisector and cone overlays."""

from __future__ import annotations

import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass

import numpy as np

from .embed import Drawing

VIEW = 1000.0
PAD = 40.0


@dataclass
class SvgOptions:
    bisectors: bool = False  # perpendicular bisector of every edge
    cones: bool = False  # free-direction cones of the branches at ``hub``
    labels: bool = True
    hub: str | None = None  # defaults to a node of maximum degree
    node_radius: float = 4.0


def _frame(xy: np.ndarray):
    span = float(np.ptp(xy, axis=0).max()) if len(xy) > 1 else 0.0
    scale = (VIEW - 2 * PAD) / span if span > 0 else 1.0
    centre = (xy.min(axis=0) + xy.max(axis=0)) / 2

    def to_view(p) -> tuple[float, float]:
        q = (np.asarray(p, dtype=float) - centre) * scale
        return VIEW / 2 + float(q[0]), VIEW / 2 - float(q[1])

    return to_view, scale


def branch_cone(d: Drawing, hub: str, first: str) -> tuple[float, float] | None:
    """Cone of directions (start, end angle in radians, counter-clockwise) that make
    an obtuse angle with every edge of the branch at ``first``, directed away from ``hub``."""
    t = d.tree
    dirs = []
    stack = [(first, hub)]
    while stack:
        v, p = stack.pop()
        for u in t.neighbors(v):
            if u != p:
                e = np.subtract(d.coords[u], d.coords[v])
                dirs.append(math.atan2(e[1], e[0]))
                stack.append((u, v))
    if not dirs:
        return None
    angs = np.sort(np.mod(dirs, 2 * math.pi))
    gaps = np.diff(np.concatenate([angs, [angs[0] + 2 * math.pi]]))
    i = int(np.argmax(gaps))
    hi = float(angs[i])  # the edge directions span [lo, hi] counter-clockwise
    lo = float(angs[(i + 1) % len(angs)])
    spread = (hi - lo) % (2 * math.pi)
    if spread >= math.pi:
        return None
    start = hi + math.pi / 2
    return start, start + math.pi - spread


def export_svg(d: Drawing, options: SvgOptions | None = None) -> str:
    """Render ``d`` into a 1000x1000 viewBox."""
    opts = options or SvgOptions()
    t = d.tree
    xy = d.array()
    to_view, scale = _frame(xy)
    svg = ET.Element("svg", xmlns="http://www.w3.org/2000/svg", viewBox=f"0 0 {VIEW:g} {VIEW:g}",
                     width=f"{VIEW:g}", height=f"{VIEW:g}")
    ET.SubElement(svg, "rect", x="0", y="0", width=f"{VIEW:g}", height=f"{VIEW:g}", fill="white")

    if opts.cones and len(t) > 1:
        hub = opts.hub or max(t.nodes, key=t.degree)
        g = ET.SubElement(svg, "g", {"class": "cones", "fill": "#4c78a8", "fill-opacity": "0.15"})
        radius = VIEW / 8
        for u in t.neighbors(hub):
            cone = branch_cone(d, hub, u)
            if cone is None:
                continue
            start, end = cone
            cx, cy = to_view(d.coords[u])
            sweep = (end - start) % (2 * math.pi)
            x1, y1 = cx + radius * math.cos(start), cy - radius * math.sin(start)
            x2, y2 = cx + radius * math.cos(start + sweep), cy - radius * math.sin(start + sweep)
            large = 1 if sweep > math.pi else 0
            path = f"M {cx:.3f} {cy:.3f} L {x1:.3f} {y1:.3f} A {radius:g} {radius:g} 0 {large} 0 {x2:.3f} {y2:.3f} Z"
            ET.SubElement(g, "path", d=path)

    if opts.bisectors:
        g = ET.SubElement(svg, "g", {"class": "bisectors", "stroke": "#e45756", "stroke-width": "0.8",
                                     "stroke-dasharray": "4 3"})
        for u, v in t.ordered_edges():
            a, b = np.asarray(d.coords[u], float), np.asarray(d.coords[v], float)
            mid, e = (a + b) / 2, b - a
            length = float(np.hypot(*e))
            if length == 0:
                continue
            normal = np.array([-e[1], e[0]]) / length
            half = max(length, 60.0 / scale)
            p, q = to_view(mid - half * normal), to_view(mid + half * normal)
            ET.SubElement(g, "line", x1=f"{p[0]:.3f}", y1=f"{p[1]:.3f}", x2=f"{q[0]:.3f}", y2=f"{q[1]:.3f}")

    g = ET.SubElement(svg, "g", {"class": "edges", "stroke": "#333333", "stroke-width": "1.5"})
    for u, v in t.ordered_edges():
        p, q = to_view(d.coords[u]), to_view(d.coords[v])
        ET.SubElement(g, "line", x1=f"{p[0]:.3f}", y1=f"{p[1]:.3f}", x2=f"{q[0]:.3f}", y2=f"{q[1]:.3f}")

    g = ET.SubElement(svg, "g", {"class": "nodes", "fill": "#111111"})
    for v in t.nodes:
        p = to_view(d.coords[v])
        ET.SubElement(g, "circle", cx=f"{p[0]:.3f}", cy=f"{p[1]:.3f}", r=f"{opts.node_radius:g}")
        if opts.labels:
            label = ET.SubElement(g, "text", x=f"{p[0] + 6:.3f}", y=f"{p[1] - 6:.3f}", fill="#555555")
            label.set("font-size", "12")
            label.set("font-family", "sans-serif")
            label.text = v
    ET.indent(svg)
    return ET.tostring(svg, encoding="unicode") + "\n"
