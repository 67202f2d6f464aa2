"""Hand-built diagrams over Z^2 = <a, b | a b a^-1 b^-1> used as fixtures and start points."""

from __future__ import annotations

import math

from .diagram import PlanarDiagram, diagram_from_embedding, validate_diagram
from .presentation import Letter, Presentation, parse_presentation

Z2_TEXT = "gens: a,b\nrels: aba^-1b^-1\n"
A3_TEXT = "gens: a\nrels: aaa\n"


def z2() -> Presentation:
    return parse_presentation(Z2_TEXT)


def a3() -> Presentation:
    return parse_presentation(A3_TEXT)


def square() -> PlanarDiagram:
    """S1: v0=(0,0), v1=(1,0), v2=(1,1), v3=(0,1), reading aba^-1b^-1 from v0."""
    a, b = Letter("a", 1), Letter("b", 1)
    pos = [(0, 0), (1, 0), (1, 1), (0, 1)]
    edges = [(0, 1, a), (1, 2, b), (3, 2, a), (0, 3, b)]
    return validate_diagram(z2(), diagram_from_embedding(pos, edges, 0, (0, 0)))


def grid(m: int, n: int) -> PlanarDiagram:
    """The m x n rectangle, reading a^m b^n a^-m b^-n from the lower left corner."""
    if m < 1 or n < 1:
        raise ValueError("grid sides must be positive")
    a, b = Letter("a", 1), Letter("b", 1)
    vid = {(i, j): j * (m + 1) + i for j in range(n + 1) for i in range(m + 1)}
    pos = [(0.0, 0.0)] * len(vid)
    for (i, j), v in vid.items():
        pos[v] = (float(i), float(j))
    edges = []
    for j in range(n + 1):
        for i in range(m):
            edges.append((vid[i, j], vid[i + 1, j], a))
    for j in range(n):
        for i in range(m + 1):
            edges.append((vid[i, j], vid[i, j + 1], b))
    return validate_diagram(z2(), diagram_from_embedding(pos, edges, 0, (0, 0)))


def notched_grid() -> PlanarDiagram:
    """A 3 x 2 rectangle with the upper middle square removed (a U shape).

    The bottom of the notch is two steps from the basepoint through the
    interior but four along the boundary, so the diagram is simply bounded
    without being geodesically bounded.
    """
    a, b = Letter("a", 1), Letter("b", 1)
    vid = {(i, j): j * 4 + i for j in range(3) for i in range(4)}
    pos = [(0.0, 0.0)] * 12
    for (i, j), v in vid.items():
        pos[v] = (float(i), float(j))
    edges = []
    for j in range(3):
        for i in range(3):
            if j == 2 and i == 1:
                continue
            edges.append((vid[i, j], vid[i + 1, j], a))
    for j in range(2):
        for i in range(4):
            edges.append((vid[i, j], vid[i, j + 1], b))
    return validate_diagram(z2(), diagram_from_embedding(pos, edges, 0, (0, 0)))


def tall_dipole(k: int, letter: str = "a") -> PlanarDiagram:
    """A 2k-face filling of x x^-1 (x = ``letter``) with intrinsic diameter k + 1.

    A strip of k squares stands on the lower x-edge; a second strip wraps
    around it, its rungs drawn as nested arcs over the top, the outermost arc
    being the upper boundary edge.
    """
    if k < 1:
        raise ValueError("height must be positive")
    other = "b" if letter == "a" else "a"
    x, y = Letter(letter, 1), Letter(other, 1)
    # vertices (0, j) -> 2j, (1, j) -> 2j + 1
    pos = []
    for j in range(k + 1):
        pos += [(0.0, float(j)), (1.0, float(j))]
    edges = [(2 * j, 2 * j + 1, x) for j in range(k + 1)]
    edges += [(2 * j, 2 * j + 2, y) for j in range(k)]
    edges += [(2 * j + 1, 2 * j + 3, y) for j in range(k)]
    angles = {}
    for j in range(k):
        idx = len(edges)
        edges.append((2 * j, 2 * j + 1, x))
        angles[(idx, 0)] = math.pi
        angles[(idx, 1)] = 0.0
    # with a and b swapped the squares read conjugates of the inverse relator
    return validate_diagram(z2(), diagram_from_embedding(pos, edges, 0, (0, 0), angles))


def figure_eight() -> PlanarDiagram:
    """Two squares wedged at the basepoint, reading (aba^-1b^-1)^2."""
    from .surgery import boundary_path, glue_along_boundary

    s1, s2 = square(), square()
    return glue_along_boundary(s1, boundary_path(s1, 0, 0), s2, boundary_path(s2, 0, 0), z2()).diagram


def square_with_dipole(k: int) -> PlanarDiagram:
    """S1 with a tall a a^-1 dipole wedged in at v1: reads a a a^-1 b a^-1 b^-1."""
    from .surgery import boundary_path, glue_along_boundary

    s1, dp = square(), tall_dipole(k)
    return glue_along_boundary(s1, boundary_path(s1, 1, 0), dp, boundary_path(dp, 0, 0), z2()).diagram
