"""Icicles of a spanning tree, the icicle flow function and icicle nesting."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping

from .diagram import PlanarDiagram
from .geodesics import SpanningTree, tree_path


class IcicleError(AssertionError):
    pass


@dataclass(frozen=True)
class Icicle:
    """The icicle at a non-tree edge.

    ``dart`` is the dart of the edge whose left face lies inside the circuit
    ``eta`` = beta_x . dart . reverse(beta_y); x and y are the origin and head
    of ``dart``, so ``eta`` always runs counterclockwise around the body.
    """

    edge: int
    dart: int
    tail: tuple[int, ...]
    side_paths: tuple[tuple[int, ...], tuple[int, ...]]
    eta: tuple[int, ...]
    body_faces: frozenset[int]
    body_edges: frozenset[int]
    body_vertices: frozenset[int]
    flow_cell: int
    tail_vertices: frozenset[int]
    tail_edges: frozenset[int]
    junction: int  # where the two tree paths part

    @property
    def skeleton_vertices(self) -> frozenset[int]:
        return self.body_vertices | self.tail_vertices

    @property
    def skeleton_edges(self) -> frozenset[int]:
        return self.body_edges | self.tail_edges

    def eta_word(self, d: PlanarDiagram):
        from .presentation import Word

        return Word(tuple(d.label[x] for x in self.eta))


def _dual_adjacency(d: PlanarDiagram) -> list[list[tuple[int, int]]]:
    """For each face node (internal faces, then the outer face as node F),
    the (edge, neighbour face) pairs across each incident edge."""
    F = d.face_count
    adj: list[list[tuple[int, int]]] = [[] for _ in range(F + 1)]
    for e in d.edges:
        a = d.face_of[e]
        b = d.face_of[d.twin[e]]
        a = F if a < 0 else a
        b = F if b < 0 else b
        adj[a].append((e, b))
        if a != b:
            adj[b].append((e, a))
    return adj


def _inside(d: PlanarDiagram, adj, cut: set[int]) -> set[int]:
    F = d.face_count
    seen = [False] * (F + 1)
    seen[F] = True
    queue = deque([F])
    while queue:
        u = queue.popleft()
        for e, v in adj[u]:
            if e in cut or seen[v]:
                continue
            seen[v] = True
            queue.append(v)
    return {f for f in range(F) if not seen[f]}


class IcicleBuilder:
    """Shares tree paths and the dual graph between icicles of one tree."""

    def __init__(self, d: PlanarDiagram, t: SpanningTree) -> None:
        self.d = d
        self.t = t
        self.tree_edges = t.tree_edges
        self.adj = _dual_adjacency(d)
        self._paths: dict[int, list[int]] = {}

    def path(self, v: int) -> list[int]:
        p = self._paths.get(v)
        if p is None:
            p = tree_path(self.t, self.d, v)
            self._paths[v] = p
        return p

    def _split(self, dart: int):
        d = self.d
        gx = self.path(d.origin[dart])
        gy = self.path(d.head(dart))
        k = 0
        while k < len(gx) and k < len(gy) and gx[k] == gy[k]:
            k += 1
        bx, by = tuple(gx[k:]), tuple(gy[k:])
        eta = bx + (dart,) + tuple(d.twin[z] for z in reversed(by))
        return tuple(gx[:k]), bx, by, eta

    def icicle(self, e: int) -> Icicle:
        d = self.d
        e = d.edge_of(e)
        if e in self.tree_edges:
            raise IcicleError(f"edge {e} is a tree edge")
        tail, bx, by, eta = self._split(e)
        inside = _inside(d, self.adj, {d.edge_of(z) for z in eta})
        if not inside:
            raise IcicleError(f"icicle at edge {e} bounds no face")
        dart = e
        if d.face_of[e] not in inside:
            dart = d.twin[e]
            if d.face_of[dart] not in inside:
                raise IcicleError(f"edge {e} has no inside face on either side")
            tail, bx, by, eta = self._split(dart)
        for z in eta:
            if d.face_of[z] not in inside:
                raise IcicleError(f"circuit at edge {e} is not counterclockwise around its inside")
        verts = [d.origin[z] for z in eta]
        if len(set(verts)) != len(verts):
            raise IcicleError(f"circuit at edge {e} is not simple")
        body_edges = {d.edge_of(z) for z in eta}
        body_vertices = set(verts)
        for f in inside:
            for z in d.faces[f]:
                body_edges.add(d.edge_of(z))
                body_vertices.add(d.origin[z])
        tail_vertices = {d.basepoint} | {d.head(z) for z in tail}
        ic = Icicle(
            edge=e,
            dart=dart,
            tail=tail,
            side_paths=(bx, by),
            eta=eta,
            body_faces=frozenset(inside),
            body_edges=frozenset(body_edges),
            body_vertices=frozenset(body_vertices),
            flow_cell=d.face_of[dart],
            tail_vertices=frozenset(tail_vertices),
            tail_edges=frozenset(d.edge_of(z) for z in tail),
            junction=d.origin[eta[0]],
        )
        return ic

    def non_tree_edges(self) -> list[int]:
        return [e for e in self.d.edges if e not in self.tree_edges]

    def all_icicles(self) -> dict[int, Icicle]:
        return {e: self.icicle(e) for e in self.non_tree_edges()}


def icicle_at(d: PlanarDiagram, t: SpanningTree, e: int) -> Icicle:
    return IcicleBuilder(d, t).icicle(e)


def all_icicles(d: PlanarDiagram, t: SpanningTree) -> dict[int, Icicle]:
    return IcicleBuilder(d, t).all_icicles()


def flow_function(d: PlanarDiagram, t: SpanningTree, icicles: Mapping[int, Icicle] | None = None) -> dict[int, int]:
    """theta_T: non-tree edge -> its flow cell; checked to be a bijection onto faces."""
    ics = icicles if icicles is not None else all_icicles(d, t)
    theta = {e: ic.flow_cell for e, ic in ics.items()}
    cells = sorted(theta.values())
    if cells != list(range(d.face_count)):
        raise IcicleError(
            f"flow function is not a bijection: {len(theta)} edges onto {len(set(cells))} of {d.face_count} faces"
        )
    return theta


INSIDE_A = "a_inside_b"
INSIDE_B = "b_inside_a"
DISJOINT = "disjoint_interiors"
EQUAL = "equal-edge"


def classify_pair(a: Icicle, b: Icicle) -> str:
    """Like :func:`nesting_compare` but reports violations as values:
    ``partial_overlap``, ``identical`` or ``inconsistent``."""
    if a.edge == b.edge:
        return EQUAL
    fa, fb = a.body_faces, b.body_faces
    if fa == fb:
        return "identical"
    b_in_a = b.edge in a.body_edges
    a_in_b = a.edge in b.body_edges
    if b_in_a and not a_in_b:
        return INSIDE_B if fb < fa else "inconsistent"
    if a_in_b and not b_in_a:
        return INSIDE_A if fa < fb else "inconsistent"
    if not a_in_b and not b_in_a:
        return DISJOINT if not (fa & fb) else "partial_overlap"
    return "inconsistent"


def nesting_compare(a: Icicle, b: Icicle) -> str:
    """Classify two icicles of one tree as nested, interior-disjoint or the same edge.

    Distinct edges with identical bodies raise rather than being classified.
    """
    c = classify_pair(a, b)
    if c in (INSIDE_A, INSIDE_B, DISJOINT, EQUAL):
        return c
    raise IcicleError(f"icicles at edges {a.edge} and {b.edge}: {c}")


def maximal_icicles(icicles: Iterable[Icicle], restrict_to: Iterable[int] | None = None) -> list[Icicle]:
    """The icicles (within ``restrict_to``) not strictly inside another one, by edge id."""
    pool = list(icicles)
    if restrict_to is not None:
        keep = set(restrict_to)
        pool = [ic for ic in pool if ic.edge in keep]
    out = []
    for a in pool:
        if not any(nesting_compare(a, b) == INSIDE_A for b in pool if b.edge != a.edge):
            out.append(a)
    return sorted(out, key=lambda ic: ic.edge)


def check_decomposition(d: PlanarDiagram, icicles: Mapping[int, Icicle]) -> None:
    """body(e) = {theta(e)} plus the bodies of non-tree edges on the flow cell boundary."""
    for e, ic in icicles.items():
        expect = {ic.flow_cell}
        for z in d.faces[ic.flow_cell]:
            e2 = d.edge_of(z)
            if e2 != e and e2 in icicles:
                expect |= icicles[e2].body_faces
        if expect != set(ic.body_faces):
            raise IcicleError(f"decomposition fails at edge {e}")
