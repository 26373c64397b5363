"""
Standalone SVG rate-distortion plots: bpp on the x axis, one quality metric on the y axis, one polyline per
curve and a legend in the lower right corner
"""

import xml.etree.ElementTree as ET
from pathlib import Path
from typing import Sequence, Tuple

import numpy as np

from odic.bjontegaard import RdCurve
from odic.cli.exceptions import PlotError
from odic.exceptions import ArgumentError
from odic.typing import PathLikeT

WIDTH = 640
HEIGHT = 420
MARGIN_LEFT = 70
MARGIN_RIGHT = 20
MARGIN_TOP = 30
MARGIN_BOTTOM = 50
TICKS = 5

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf")

SVG_NS = "http://www.w3.org/2000/svg"


def _span(values: np.ndarray) -> Tuple[float, float]:
    low, high = float(values.min()), float(values.max())

    if high == low:
        pad = abs(low) * 0.05 or 1.0
    else:
        pad = (high - low) * 0.05

    return low - pad, high + pad


def _fmt(value: float) -> str:
    return f"{value:.2f}"


def _element(parent: ET.Element, tag: str, text: str = "", **attrs: str) -> ET.Element:
    node = ET.SubElement(parent, tag, {key.replace("_", "-"): value for key, value in attrs.items()})

    if text:
        node.text = text

    return node


def render_rd_plot(curves: Sequence[RdCurve], metric: str = "WS-PSNR (dB)", title: str = "") -> ET.ElementTree:
    if not curves:
        raise ArgumentError("An RD plot needs at least one curve")

    if any(len(curve) == 0 for curve in curves):
        raise ArgumentError("RD curves must not be empty")

    x_low, x_high = _span(np.concatenate([curve.bpp for curve in curves]))
    y_low, y_high = _span(np.concatenate([curve.quality for curve in curves]))

    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def to_x(value: float) -> float:
        return MARGIN_LEFT + (value - x_low) / (x_high - x_low) * plot_w

    def to_y(value: float) -> float:
        return MARGIN_TOP + (y_high - value) / (y_high - y_low) * plot_h

    svg = ET.Element(
        "svg",
        {"xmlns": SVG_NS, "width": str(WIDTH), "height": str(HEIGHT), "viewBox": f"0 0 {WIDTH} {HEIGHT}"},
    )
    _element(svg, "rect", x="0", y="0", width=str(WIDTH), height=str(HEIGHT), fill="white")

    if title:
        _element(svg, "text", title, x=_fmt(WIDTH / 2), y="18", text_anchor="middle", font_size="14")

    axes = _element(svg, "g", stroke="black", stroke_width="1")
    bottom = MARGIN_TOP + plot_h
    _element(axes, "line", x1=str(MARGIN_LEFT), y1=str(bottom), x2=str(MARGIN_LEFT + plot_w), y2=str(bottom))
    _element(axes, "line", x1=str(MARGIN_LEFT), y1=str(MARGIN_TOP), x2=str(MARGIN_LEFT), y2=str(bottom))

    labels = _element(svg, "g", font_size="11", font_family="sans-serif")

    for tick in np.linspace(x_low, x_high, TICKS):
        x = to_x(tick)
        _element(axes, "line", x1=_fmt(x), y1=str(bottom), x2=_fmt(x), y2=str(bottom + 4))
        _element(labels, "text", f"{tick:.3f}", x=_fmt(x), y=str(bottom + 17), text_anchor="middle")

    for tick in np.linspace(y_low, y_high, TICKS):
        y = to_y(tick)
        _element(axes, "line", x1=str(MARGIN_LEFT - 4), y1=_fmt(y), x2=str(MARGIN_LEFT), y2=_fmt(y))
        _element(labels, "text", f"{tick:.2f}", x=str(MARGIN_LEFT - 7), y=_fmt(y + 4), text_anchor="end")

    _element(labels, "text", "bpp", x=_fmt(MARGIN_LEFT + plot_w / 2), y=str(HEIGHT - 10), text_anchor="middle")
    _element(
        labels,
        "text",
        metric,
        x="16",
        y=_fmt(MARGIN_TOP + plot_h / 2),
        text_anchor="middle",
        transform=f"rotate(-90 16 {_fmt(MARGIN_TOP + plot_h / 2)})",
    )

    legend = _element(svg, "g", font_size="11", font_family="sans-serif")

    for index, curve in enumerate(curves):
        color = PALETTE[index % len(PALETTE)]
        points = " ".join(
            f"{_fmt(to_x(rate))},{_fmt(to_y(quality))}" for rate, quality in zip(curve.bpp, curve.quality)
        )
        _element(svg, "polyline", points=points, fill="none", stroke=color, stroke_width="2")

        entry_y = bottom - 12 - 16 * (len(curves) - 1 - index)
        entry_x = MARGIN_LEFT + plot_w - 150
        _element(legend, "line", x1=str(entry_x), y1=str(entry_y), x2=str(entry_x + 20), y2=str(entry_y), stroke=color)
        _element(legend, "text", curve.label or f"curve {index + 1}", x=str(entry_x + 26), y=str(entry_y + 4))

    return ET.ElementTree(svg)


def emit_rd_plot(curves: Sequence[RdCurve], path: PathLikeT, metric: str = "WS-PSNR (dB)", title: str = "") -> Path:
    tree = render_rd_plot(curves, metric, title)
    target = Path(path)

    try:
        tree.write(target, encoding="utf-8", xml_declaration=True)
    except OSError as e:
        raise PlotError(f"Cannot write RD plot to {target}: {e}") from e

    return target

