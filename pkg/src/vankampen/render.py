"""SVG drawings of diagrams: Tutte layout with optional tree, icicle or distance overlays."""

from __future__ import annotations

import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

from .diagram import PlanarDiagram, coarse_distance_field, fmt_q


class RenderError(RuntimeError):
    pass


@dataclass(frozen=True)
class RenderStyle:
    """``iterations=None`` solves the barycentric system exactly; a positive
    count runs that many averaging sweeps instead.

    ``highlight`` is None, ``"tree"``, ``"heatmap"`` or ``("icicle", edge)``.
    """

    iterations: int | None = None
    highlight: object = None
    size: int = 400
    tol: float = 1e-6

    def __post_init__(self) -> None:
        if self.iterations is not None and self.iterations < 1:
            raise ValueError("iteration count must be positive")
        h = self.highlight
        ok = h is None or h in ("tree", "heatmap") or (isinstance(h, tuple) and len(h) == 2 and h[0] == "icicle")
        if not ok:
            raise ValueError(f"unknown highlight {h!r}")


def _outer_cycle(d: PlanarDiagram) -> list[int]:
    seen, out = set(), []
    for v in d.boundary_vertices:
        if v not in seen:
            seen.add(v)
            out.append(v)
    return out


def tutte_layout(d: PlanarDiagram, iterations: int | None = None, tol: float = 1e-6) -> np.ndarray:
    n = d.vertex_count
    pos = np.zeros((n, 2))
    if not d.dart_count:
        return pos
    outer = _outer_cycle(d)
    k = len(outer)
    fixed = np.zeros(n, dtype=bool)
    for i, v in enumerate(outer):
        ang = math.pi / 2 - 2 * math.pi * i / k if k > 2 else math.pi * i
        pos[v] = (math.cos(ang), math.sin(ang))
        fixed[v] = True
    if k == 2:
        # a digon: spread it so the interior has room
        pos[outer[0]] = (-1.0, 0.0)
        pos[outer[1]] = (1.0, 0.0)
    free = [v for v in range(n) if not fixed[v]]
    if not free:
        return pos
    nbrs = [[d.head(x) for x in d.rotation[v]] for v in range(n)]
    if iterations is None:
        idx = {v: i for i, v in enumerate(free)}
        A = np.zeros((len(free), len(free)))
        B = np.zeros((len(free), 2))
        for v in free:
            i = idx[v]
            A[i, i] = len(nbrs[v])
            for u in nbrs[v]:
                if fixed[u]:
                    B[i] += pos[u]
                else:
                    A[i, idx[u]] -= 1
        try:
            sol = np.linalg.solve(A, B)
        except np.linalg.LinAlgError:
            raise RenderError("barycentric system is singular") from None
        for v in free:
            pos[v] = sol[idx[v]]
        return pos
    for budget in (iterations, 2 * iterations):
        for _ in range(budget):
            delta = 0.0
            for v in free:
                new = np.mean([pos[u] for u in nbrs[v]], axis=0)
                delta = max(delta, float(np.abs(new - pos[v]).max()))
                pos[v] = new
            if delta < tol:
                return pos
    raise RenderError(f"layout did not converge within {2 * iterations} sweeps")


def _f(x: float) -> str:
    s = f"{x:.2f}"
    return "0.00" if s == "-0.00" else s


def _heat(q: int, top: int) -> str:
    t = q / top if top else 0.0
    r = int(round(60 + 195 * t))
    b = int(round(255 - 195 * t))
    return f"#{r:02x}50{b:02x}"


def render_svg(d: PlanarDiagram, style: RenderStyle | None = None) -> str:
    style = style or RenderStyle()
    S = style.size
    margin = 30
    pos = tutte_layout(d, style.iterations, style.tol)

    def xy(v: int) -> tuple[float, float]:
        x, y = pos[v]
        return margin + (x + 1) / 2 * (S - 2 * margin), margin + (1 - y) / 2 * (S - 2 * margin)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{S}" height="{S}" viewBox="0 0 {S} {S}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    tree_edges: frozenset[int] = frozenset()
    shade: set[int] = set()
    h = style.highlight
    if h == "tree" or isinstance(h, tuple):
        from .geodesics import bfs_geodesic_tree

        t = bfs_geodesic_tree(d)
        tree_edges = t.tree_edges
        if isinstance(h, tuple):
            from .icicle import icicle_at

            shade = set(icicle_at(d, t, int(h[1])).body_faces)
    for f in sorted(shade):
        pts = " ".join(f"{_f(a)},{_f(b)}" for a, b in (xy(d.origin[x]) for x in d.faces[f]))
        out.append(f'<polygon points="{pts}" fill="#cde" stroke="none"/>')
    # parallel edges are bent apart so each stays visible
    groups: dict[tuple[int, int], list[int]] = {}
    for e in d.edges:
        a, b = d.edge_ends(e)
        groups.setdefault((min(a, b), max(a, b)), []).append(e)
    for (a, b), es in sorted(groups.items()):
        for j, e in enumerate(es):
            u, v = d.edge_ends(e)
            (x0, y0), (x1, y1) = xy(u), xy(v)
            width = 3 if e in tree_edges else 1
            colour = "#c33" if e in tree_edges else "#333"
            mx, my = (x0 + x1) / 2, (y0 + y1) / 2
            if u == v:
                path = f"M {_f(x0)} {_f(y0)} c 25 -25 25 25 0 0"
                lx, ly = x0 + 14, y0 - 14
            else:
                off = (j - (len(es) - 1) / 2) * 18
                dx, dy = x1 - x0, y1 - y0
                norm = math.hypot(dx, dy) or 1.0
                cx, cy = mx - dy / norm * off, my + dx / norm * off
                path = f"M {_f(x0)} {_f(y0)} Q {_f(cx)} {_f(cy)} {_f(x1)} {_f(y1)}"
                lx, ly = (mx + cx) / 2, (my + cy) / 2
            out.append(f'<path d="{path}" fill="none" stroke="{colour}" stroke-width="{width}"/>')
            out.append(
                f'<text x="{_f(lx)}" y="{_f(ly)}" font-size="10" fill="#036">{escape(str(d.label[e]))}</text>'
            )
    fld = coarse_distance_field(d) if h == "heatmap" else None
    top = max(fld.vertex) if fld else 0
    for v in range(d.vertex_count):
        x, y = xy(v)
        fill = _heat(fld.vertex[v], top) if fld else ("#000" if v == d.basepoint else "#fff")
        out.append(f'<circle cx="{_f(x)}" cy="{_f(y)}" r="4" fill="{fill}" stroke="#000"/>')
        if fld:
            out.append(f'<text x="{_f(x + 5)}" y="{_f(y - 5)}" font-size="9">{fmt_q(fld.vertex[v])}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
