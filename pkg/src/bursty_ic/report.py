"""Self-contained SVG plot of a rate region."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from xml.sax.saxutils import escape

from .capacity_ld import RateRegion


def vertices(reg: RateRegion) -> list[tuple]:
    """Polygon vertices (counter-clockwise) of the region's active halfplanes."""
    hps = [h for h in reg.halfplanes if h.active]
    pts = set()
    for g1, g2 in combinations(hps, 2):
        det = g1.a1 * g2.a2 - g1.a2 * g2.a1
        if det == 0:
            continue
        r1 = (g1.b * g2.a2 - g1.a2 * g2.b) / det
        r2 = (g1.a1 * g2.b - g1.b * g2.a1) / det
        if all(h.slack(r1, r2) >= -1e-9 for h in hps):
            pts.add((round(float(r1), 9), round(float(r2), 9)))
    if not pts:
        return []
    cx = sum(p[0] for p in pts) / len(pts)
    cy = sum(p[1] for p in pts) / len(pts)
    import math

    return sorted(pts, key=lambda p: math.atan2(p[1] - cy, p[0] - cx))


def region_svg(reg: RateRegion, title: str = "", size: int = 420) -> str:
    pad = 50
    poly = vertices(reg)
    top = max([max(p) for p in poly] + [1.0]) * 1.1
    scale = (size - 2 * pad) / top

    def xy(r1, r2):
        return pad + float(r1) * scale, size - pad - float(r2) * scale

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}" font-family="sans-serif" font-size="11">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
    ]
    x0, y0 = xy(0, 0)
    x1, _ = xy(top, 0)
    _, y1 = xy(0, top)
    out.append(f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>')
    out.append(f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>')
    out.append(f'<text x="{x1 - 10}" y="{y0 + 30}">R1 (level-slots)</text>')
    out.append(f'<text x="{x0 - 40}" y="{y1 - 8}">R2</text>')
    step = 1 if top <= 12 else max(1, int(top // 8))
    v = 0
    while v <= top:
        tx, ty = xy(v, 0)
        out.append(f'<text x="{tx - 3}" y="{ty + 14}">{v}</text>')
        sx, sy = xy(0, v)
        out.append(f'<text x="{sx - 16}" y="{sy + 4}">{v}</text>')
        v += step
    if poly:
        path = " ".join(f"{a:.2f},{b:.2f}" for a, b in (xy(*p) for p in poly))
        out.append(f'<polygon points="{path}" fill="#cfe3f7" stroke="#1f4e79" stroke-width="1.5"/>')
    for h in reg.halfplanes:
        if not h.active or h.a1 != h.a2 or h.a1 <= 0:
            continue
        # the sum bound is drawn dashed, only when it is active
        b = float(h.b) / float(h.a1)
        ax, ay = xy(b, 0)
        bx, by = xy(0, b)
        out.append(f'<line x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}" stroke="#555" '
                   f'stroke-dasharray="6,4"/>')
        break
    for c in reg.corners:
        if not c.applicable:
            continue
        cx, cy = xy(c.r1, c.r2)
        label = escape(f"{c.label} ({_fmt(c.r1)}, {_fmt(c.r2)})")
        out.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="3" fill="#b22222"/>')
        out.append(f'<text x="{cx + 5:.2f}" y="{cy - 5:.2f}">{label}</text>')
    if title:
        out.append(f'<text x="{pad}" y="20" font-size="13">{escape(title)}</text>')
    out.append("</svg>")
    return "\n".join(out)


def _fmt(v) -> str:
    if isinstance(v, Fraction):
        return str(v)
    return f"{float(v):.3g}"
