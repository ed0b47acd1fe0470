"""SVG Gantt charts: one lane per machine, blocks colored by class."""
from __future__ import annotations

import zlib
from fractions import Fraction
from xml.sax.saxutils import escape

from .core import Instance, MultiResourceInstance, Schedule, validate

LANE = 28
LEFT = 60
WIDTH = 720
TOP = 20


def _color(k) -> str:
    h = (k * 137 if isinstance(k, int) else zlib.crc32(str(k).encode())) % 360
    return f"hsl({h},55%,65%)"


def _job_info(instance):
    if isinstance(instance, Instance):
        return {j.id: (j.p, j.class_id, str(j.id)) for j in instance.jobs}
    return {j.id: (j.p, min(j.resources) if j.resources else j.id, str(j.id)) for j in instance.jobs}


def render_svg(instance: Instance | MultiResourceInstance, schedule: Schedule, T=None,
               markers: dict[str, Fraction] | None = None, machines: int | None = None) -> str:
    """SVG document for a valid schedule; raises ValueError on an invalid one.

    ``T`` draws a bound line; ``markers`` maps labels (e.g. "3/2 T") to times.
    """
    m = machines if machines is not None else instance.m
    check = Instance(m, instance.classes) if isinstance(instance, Instance) else instance
    rep = validate(check, schedule)
    if not rep.valid:
        raise ValueError(f"refusing to draw an invalid schedule: {rep.violations[:3]}")
    info = _job_info(instance)
    marks = dict(markers or {})
    if T is not None:
        marks.setdefault("T", Fraction(T))
    horizon = max([rep.makespan, *marks.values(), Fraction(1)])
    scale = Fraction(WIDTH) / horizon

    def x(t) -> str:
        return f"{float(LEFT + Fraction(t) * scale):.2f}"

    height = TOP + LANE * m + 40
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{LEFT + WIDTH + 20}" height="{height}" '
           f'font-family="monospace" font-size="10">']
    for i in range(m):
        y = TOP + LANE * i
        out.append(f'<text class="lane-label" x="4" y="{y + LANE // 2 + 4}">M{i}</text>')
        out.append(f'<line class="lane" x1="{LEFT}" y1="{y + LANE}" x2="{LEFT + WIDTH}" y2="{y + LANE}" '
                   f'stroke="#ddd"/>')
    for jid in sorted(schedule):
        mach, s = schedule[jid]
        p, cls, label = info[jid]
        y = TOP + LANE * mach + 3
        w = f"{float(p * scale):.2f}"
        out.append(f'<rect class="job" x="{x(s)}" y="{y}" width="{w}" height="{LANE - 6}" '
                   f'fill="{_color(cls)}" stroke="#333"><title>job {escape(label)} class {escape(str(cls))} '
                   f'start {s} p {p}</title></rect>')
        out.append(f'<text x="{float(LEFT + (Fraction(s) + Fraction(p, 2)) * scale):.2f}" y="{y + LANE // 2 + 1}" '
                   f'text-anchor="middle">{escape(label)}</text>')
    axis_y = TOP + LANE * m + 4
    out.append(f'<line class="axis" x1="{LEFT}" y1="{axis_y}" x2="{LEFT + WIDTH}" y2="{axis_y}" stroke="#000"/>')
    step = max(1, int(horizon) // 10)
    t = 0
    while t <= horizon:
        out.append(f'<text class="tick" x="{x(t)}" y="{axis_y + 14}" text-anchor="middle">{t}</text>')
        t += step
    for label, t in sorted(marks.items(), key=lambda kv: (kv[1], kv[0])):
        out.append(f'<line class="marker" x1="{x(t)}" y1="{TOP - 6}" x2="{x(t)}" y2="{axis_y}" '
                   f'stroke="#c00" stroke-dasharray="4 3"/>')
        out.append(f'<text class="marker-label" x="{x(t)}" y="{TOP - 8}" text-anchor="middle" '
                   f'fill="#c00">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
