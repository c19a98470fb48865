"""Metro map diagrams: shared-stop detection, DOT and standalone SVG output.

Layout is a fixed grid: line i occupies row i and its j-th stop sits in
column j. Stops shared by several lines are joined by vertical arcs.
"""
from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape, quoteattr

from .errors import TooManyLines
from .metromap import MetroMap

# fixed 12-colour palette, reused cyclically beyond 12 lines
PALETTE = (
    "#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4", "#42d4f4",
    "#f032e6", "#9a6324", "#800000", "#469990", "#000075", "#808000",
)
MAX_LINES = 16

COL_WIDTH = 170
ROW_HEIGHT = 90
MARGIN_X = 60
MARGIN_Y = 50
STOP_RADIUS = 7
TERMINAL_RADIUS = 10


@dataclass(frozen=True)
class Interrelation:
    stop: str
    lines: tuple[int, ...]


def find_interrelations(metro: MetroMap) -> list[Interrelation]:
    """Stops on two or more lines, in order of first appearance."""
    where: dict[str, list[int]] = {}
    for i, line in enumerate(metro.lines):
        for stop in line.stops:
            where.setdefault(stop, [])
            if i not in where[stop]:
                where[stop].append(i)
    return [Interrelation(stop, tuple(idx)) for stop, idx in where.items() if len(idx) >= 2]


def line_color(index: int) -> str:
    return PALETTE[index % len(PALETTE)]


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def render_dot(metro: MetroMap, title: str = "metro_map") -> str:
    """DOT digraph: every stop declared once, one coloured edge chain per line."""
    out = [f"digraph {_q(title)} {{", "  rankdir=LR;", "  node [shape=circle, style=filled, fillcolor=white];"]
    shared = {ir.stop for ir in find_interrelations(metro)}
    terminals = set()
    for line in metro.lines:
        if line.rules:
            terminals.update((line.start, line.end))
    declared = set()
    for line in metro.lines:
        for stop in line.stops:
            if stop in declared:
                continue
            declared.add(stop)
            attrs = [f"label={_q(stop)}"]
            if stop in terminals:
                attrs.append("penwidth=3")
            if stop in shared:
                attrs.append("fillcolor=lightgrey")
            out.append(f"  {_q(stop)} [{', '.join(attrs)}];")
    for i, line in enumerate(metro.lines):
        color = line_color(i)
        for r in line.rules:
            out.append(
                f"  {_q(r.antecedent)} -> {_q(r.consequent)} "
                f"[color={_q(color)}, penwidth=2, label={_q(f'{float(r.lift):.4g}')}];"
            )
    out.append("}")
    return "\n".join(out) + "\n"


def _xy(row: int, col: int) -> tuple[int, int]:
    return MARGIN_X + col * COL_WIDTH, MARGIN_Y + row * ROW_HEIGHT


def render_svg(metro: MetroMap) -> str:
    """Standalone SVG: horizontal polyline per line, a circle per stop, arcs for shared stops."""
    n = len(metro.lines)
    if n > MAX_LINES:
        raise TooManyLines(f"{n} lines exceed the limit of {MAX_LINES}")
    widest = max((len(line.stops) for line in metro.lines), default=1)
    width = 2 * MARGIN_X + max(widest - 1, 0) * COL_WIDTH
    height = 2 * MARGIN_Y + max(n - 1, 0) * ROW_HEIGHT + 20

    body = []
    positions: dict[tuple[int, str], tuple[int, int]] = {}
    for i, line in enumerate(metro.lines):
        color = line_color(i)
        pts = []
        for j, stop in enumerate(line.stops):
            x, y = _xy(i, j)
            positions[(i, stop)] = (x, y)
            pts.append(f"{x},{y}")
        body.append(
            f'<polyline class="line" data-line="{i}" points="{" ".join(pts)}" '
            f'fill="none" stroke="{color}" stroke-width="6" stroke-linecap="round"/>'
        )

    arcs = []
    for ir in find_interrelations(metro):
        for a, b in zip(ir.lines, ir.lines[1:]):
            x1, y1 = positions[(a, ir.stop)]
            x2, y2 = positions[(b, ir.stop)]
            bulge = 25 + abs(x2 - x1) // 8
            cx = (x1 + x2) / 2 + bulge
            cy = (y1 + y2) / 2
            arcs.append(
                f'<path class="arc" data-stop={quoteattr(ir.stop)} '
                f'd="M {x1} {y1} Q {cx:g} {cy:g} {x2} {y2}" fill="none" '
                f'stroke="#555555" stroke-width="2" stroke-dasharray="5,3"/>'
            )

    stops = []
    for i, line in enumerate(metro.lines):
        color = line_color(i)
        last = len(line.stops) - 1
        for j, stop in enumerate(line.stops):
            x, y = positions[(i, stop)]
            terminal = j in (0, last)
            r = TERMINAL_RADIUS if terminal else STOP_RADIUS
            cls = "stop terminal" if terminal else "stop"
            stops.append(
                f'<circle class="{cls}" cx="{x}" cy="{y}" r="{r}" fill="white" '
                f'stroke="{color}" stroke-width="{4 if terminal else 2}"/>'
            )
            weight = "bold" if terminal else "normal"
            stops.append(
                f'<text x="{x}" y="{y - 16}" text-anchor="middle" font-size="11" '
                f'font-family="sans-serif" font-weight="{weight}">{escape(stop)}</text>'
            )

    head = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">'
    )
    parts = [head, '<rect width="100%" height="100%" fill="white"/>', *body, *arcs, *stops, "</svg>"]
    return "\n".join(parts) + "\n"
