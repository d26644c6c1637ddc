"""
SVG plots of plane projections drawn with matplotlib.

Output is byte-identical across runs: the SVG id salt is fixed, the date
metadata is dropped and text is written as <text> rather than glyph paths.
"""
import io
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import matplotlib as mpl
from matplotlib.figure import Figure
from matplotlib.patches import Circle

from coxeter import ORIGIN_TOLERANCE, ORBIT_TOLERANCE, ProjectedPoint

logger = logging.getLogger(__name__)

PADDING = 1.05

SVG_RC = {
    "svg.hashsalt": "clifford-coxeter",
    "svg.fonttype": "none",
    "path.simplify": False,
}


@dataclass(frozen=True)
class SvgStyle:
    size: float = 6.0
    marker_size: float = 20.0
    colormap: str = "hsv"
    guide_color: str = "#b0b0b0"
    guide_width: float = 0.6
    title: Optional[str] = None


def guide_radii(points: Sequence[ProjectedPoint]) -> List[float]:
    radii: List[float] = []
    for r in sorted(p.radius for p in points if p.radius > ORIGIN_TOLERANCE):
        if not radii or r - radii[-1] > ORBIT_TOLERANCE:
            radii.append(r)
    return radii


def orbit_colors(points: Sequence[ProjectedPoint], colormap: str) -> Dict[int, Tuple[float, ...]]:
    """Evenly spaced colours from the colormap, one per orbit."""
    orbit_ids = sorted({p.orbit_id for p in points})
    cmap = mpl.colormaps[colormap]
    return {orbit_id: cmap(i / len(orbit_ids)) for i, orbit_id in enumerate(orbit_ids)}


def build_figure(points: Sequence[ProjectedPoint], style: Optional[SvgStyle] = None) -> Figure:
    """Scatter of the projected roots coloured by orbit, with a guide circle per distinct radius."""
    if not points:
        raise ValueError("a projection plot needs at least one point")
    style = style or SvgStyle()
    largest = max(p.radius for p in points)
    extent = PADDING * (largest if largest > ORIGIN_TOLERANCE else 1.0)
    colors = orbit_colors(points, style.colormap)

    fig = Figure(figsize=(style.size, style.size))
    ax = fig.add_subplot(1, 1, 1)
    for radius in guide_radii(points):
        ax.add_patch(Circle((0.0, 0.0), radius, fill=False, edgecolor=style.guide_color,
                            linewidth=style.guide_width, zorder=1))

    ordered = sorted(points, key=lambda p: (p.orbit_id, p.root_index))
    ring = [p for p in ordered if p.radius > ORIGIN_TOLERANCE]
    origin = [p for p in ordered if p.radius <= ORIGIN_TOLERANCE]
    if ring:
        ax.scatter([p.x for p in ring], [p.y for p in ring], s=style.marker_size,
                   c=[colors[p.orbit_id] for p in ring], marker="o", linewidths=0, zorder=2)
    if origin:
        ax.scatter([0.0] * len(origin), [0.0] * len(origin), s=style.marker_size * 1.5,
                   c=[colors[p.orbit_id] for p in origin], marker="s", edgecolors="black",
                   linewidths=0.8, zorder=3)

    ax.set_xlim(-extent, extent)
    ax.set_ylim(-extent, extent)
    ax.set_aspect("equal")
    ax.set_axis_off()
    if style.title:
        ax.set_title(style.title)
    return fig


def render_svg(points: Sequence[ProjectedPoint], style: Optional[SvgStyle] = None) -> str:
    with mpl.rc_context(SVG_RC):
        fig = build_figure(points, style)
        buffer = io.StringIO()
        fig.savefig(buffer, format="svg", metadata={"Date": None})
    return buffer.getvalue()


def write_svg(path: Path, points: Sequence[ProjectedPoint], style: Optional[SvgStyle] = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_svg(points, style), encoding="utf-8")
    logger.info("Wrote SVG with %d points to %s", len(points), path)
    return path
