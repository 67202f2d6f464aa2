"""Spanning trees of geodesics out of the basepoint."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .diagram import PlanarDiagram, vertex_distances


class TreeError(AssertionError):
    pass


@dataclass(frozen=True)
class SpanningTree:
    """``parent_dart[v]`` leaves v toward its parent (-1 at the root)."""

    root: int
    parent_dart: tuple[int, ...]
    depth: tuple[int, ...]  # quarters
    geodesic: bool = True

    @property
    def tree_edges(self) -> frozenset[int]:
        return frozenset(min(x, self._twin[x]) for x in self.parent_dart if x >= 0)

    # twin lookup bound at construction so tree_edges needs no diagram
    _twin: tuple[int, ...] = field(default=(), repr=False, compare=False)

    def to_dict(self) -> dict:
        return {"root": self.root, "parent_dart": list(self.parent_dart), "depth": list(self.depth)}


def _make(d: PlanarDiagram, root: int, parent: list[int], depth_units: list[int], geodesic: bool = True) -> SpanningTree:
    return SpanningTree(root, tuple(parent), tuple(4 * x for x in depth_units), geodesic, d.twin)


def bfs_geodesic_tree(d: PlanarDiagram) -> SpanningTree:
    """Breadth-first tree from the basepoint.

    Among the darts leaving v toward a vertex one level closer, the one with
    the smallest id becomes v's parent dart.
    """
    level = vertex_distances(d)
    parent = [-1] * d.vertex_count
    for v in range(d.vertex_count):
        if v == d.basepoint:
            continue
        cands = [x for x in d.rotation[v] if level[d.head(x)] == level[v] - 1]
        parent[v] = min(cands)
    return _make(d, d.basepoint, parent, level)


def any_spanning_tree(d: PlanarDiagram) -> SpanningTree:
    """Depth-first tree (generally not geodesic); for experiments only."""
    parent = [-1] * d.vertex_count
    depth = [-1] * d.vertex_count
    depth[d.basepoint] = 0
    stack = [d.basepoint]
    while stack:
        u = stack.pop()
        for x in sorted(d.rotation[u], reverse=True):
            v = d.head(x)
            if depth[v] < 0:
                depth[v] = depth[u] + 1
                parent[v] = d.twin[x]
                stack.append(v)
    return _make(d, d.basepoint, parent, depth, geodesic=False)


def tree_path(t: SpanningTree, d: PlanarDiagram, v: int) -> list[int]:
    """Darts from the root down to v."""
    out = []
    while v != t.root:
        up = t.parent_dart[v]
        out.append(d.twin[up])
        v = d.head(up)
    out.reverse()
    return out


def check_tree(d: PlanarDiagram, t: SpanningTree) -> None:
    """Spanning, acyclic, and (for geodesic trees) depth = true distance."""
    if len(t.parent_dart) != d.vertex_count:
        raise TreeError("tree has the wrong number of vertices")
    edges = [x for x in t.parent_dart if x >= 0]
    if len(edges) != d.vertex_count - 1:
        raise TreeError("tree must have vertex_count - 1 edges")
    for v in range(d.vertex_count):
        seen = set()
        u = v
        while u != t.root:
            if u in seen:
                raise TreeError("parent pointers contain a cycle")
            seen.add(u)
            x = t.parent_dart[u]
            if x < 0 or d.origin[x] != u:
                raise TreeError(f"bad parent dart at vertex {u}")
            u = d.head(x)
    if t.geodesic:
        dist = vertex_distances(d, t.root)
        for v in range(d.vertex_count):
            if t.depth[v] != 4 * dist[v]:
                raise TreeError(f"depth of vertex {v} is not its distance")


def verify_partial_geodesic_extension(
    d_new: PlanarDiagram,
    kept_parent: Mapping[int, int],
    kept_depth: Mapping[int, int],
) -> SpanningTree:
    """Extend a kept geodesic forest to a spanning tree of ``d_new``.

    ``kept_parent`` maps kept non-root vertices to their parent dart and
    ``kept_depth`` gives kept depths in quarters. Uncovered vertices are
    reached by a breadth-first sweep seeded with the kept depths, with the
    same smallest-dart tie-break as :func:`bfs_geodesic_tree`. Every depth is
    then compared with a fresh BFS.
    """
    n = d_new.vertex_count
    depth = [-1] * n
    parent = [-1] * n
    for v, q in kept_depth.items():
        if q % 4:
            raise TreeError("kept depths must be vertex distances")
        depth[v] = q // 4
    for v, x in kept_parent.items():
        if depth[v] < 0:
            raise TreeError(f"kept parent given for vertex {v} without a depth")
        if d_new.origin[x] != v or depth[d_new.head(x)] != depth[v] - 1:
            raise TreeError(f"kept parent dart {x} does not step one level up from {v}")
        parent[v] = x
    if depth[d_new.basepoint] != 0:
        raise TreeError("kept forest must contain the basepoint at depth 0")
    levels: dict[int, list[int]] = {}
    for v in range(n):
        if depth[v] >= 0:
            levels.setdefault(depth[v], []).append(v)
    level = 0
    while levels.get(level):
        nxt: dict[int, list[int]] = {}
        for u in levels[level]:
            for x in d_new.rotation[u]:
                v = d_new.head(x)
                if depth[v] < 0:
                    nxt.setdefault(v, []).append(d_new.twin[x])
        for v, cands in nxt.items():
            depth[v] = level + 1
            parent[v] = min(cands)
            levels.setdefault(level + 1, []).append(v)
        level += 1
        if level > n:
            break
    if any(x < 0 for x in depth):
        raise TreeError("kept forest does not reach every vertex")
    fresh = vertex_distances(d_new)
    for v in range(n):
        if depth[v] != fresh[v]:
            raise TreeError("kept tree not geodesic in new diagram")
    return _make(d_new, d_new.basepoint, parent, depth)
