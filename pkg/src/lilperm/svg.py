"""Minimal SVG chart of a path: normalized deviation and its running sup
against log log n."""

from __future__ import annotations

from lilperm.lil import running_sup

_W, _H, _PAD = 640, 360, 48


def _polyline(points, xmap, ymap, colour):
    coords = " ".join(f"{xmap(x):.2f},{ymap(y):.2f}" for x, y in points)
    return f'<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{coords}"/>'


def trajectory_svg(path, title: str = "") -> str:
    present = [r for r in path if r.normalized is not None]
    norm = [(r.loglog_n, r.normalized) for r in present]
    loglogs = {r.n: r.loglog_n for r in present}
    sup = [(loglogs[n], v) for n, v in running_sup(path)]
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" viewBox="0 0 {_W} {_H}">']
    parts.append(f'<text x="{_PAD}" y="24" font-family="sans-serif" font-size="14">{title}</text>')
    if norm:
        xs = [n for n, _ in norm]
        ys = [v for _, v in norm] + [v for _, v in sup] + [-1.0, 1.0]
        x0 = min(xs)
        x1 = max(xs) if max(xs) > x0 else x0 + 1
        y0, y1 = min(ys), max(ys)

        def xmap(x):
            return _PAD + (x - x0) / (x1 - x0) * (_W - 2 * _PAD)

        def ymap(y):
            return _H - _PAD - (y - y0) / (y1 - y0) * (_H - 2 * _PAD)

        for level in (-1.0, 0.0, 1.0):
            yy = ymap(level)
            parts.append(f'<line x1="{_PAD}" x2="{_W - _PAD}" y1="{yy:.2f}" y2="{yy:.2f}" stroke="#bbb" stroke-dasharray="4 3"/>')
            parts.append(f'<text x="8" y="{yy + 4:.2f}" font-family="sans-serif" font-size="11">{level:g}</text>')
        parts.append(_polyline(norm, xmap, ymap, "#1f77b4"))
        parts.append(_polyline(sup, xmap, ymap, "#d62728"))
        parts.append(f'<text x="{_PAD}" y="{_H - 12}" font-family="sans-serif" font-size="11">log log n, n from {present[0].n} to {present[-1].n}; blue: normalized deviation, red: running sup</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
