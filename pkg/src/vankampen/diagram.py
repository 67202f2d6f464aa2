"""Van Kampen diagrams stored as rotation systems.

A diagram is a set of darts (directed half-edges). Each dart has an origin
vertex, a label and a twin running the other way. ``rotation[v]`` lists the
darts leaving ``v`` in counterclockwise order. The face to the left of a dart
``d`` continues with the dart that precedes ``twin(d)`` in that order, so
internal faces are traversed counterclockwise and the outer face clockwise.

Distances are integers counted in quarter units (vertex 4k, edge interior
4k+2, face interior odd).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from . import kernels
from .presentation import Letter, Presentation, Word, relator_cyclic_family

QuarterDist = int
"""Coarse distance in quarter units (value = quarters / 4)."""


def fmt_q(q: int | None) -> str:
    """Human-readable decimal for a quarter count."""
    if q is None:
        return "none"
    whole, rem = divmod(q, 4)
    return str(whole) if rem == 0 else f"{whole}.{('25', '5', '75')[rem - 1]}"


class DiagramError(ValueError):
    """A diagram failed validation. ``reason`` names the failing invariant."""

    def __init__(self, reason: str, detail: str = "") -> None:
        super().__init__(f"{reason}: {detail}" if detail else reason)
        self.reason = reason
        self.detail = detail


@dataclass(frozen=True)
class Dart:
    id: int
    origin: int
    label: Letter
    twin: int


class PlanarDiagram:
    """Immutable rotation-system map. Use :func:`validate_diagram` to build one
    that is guaranteed to be a van Kampen diagram; the raw constructor only
    checks array shapes."""

    def __init__(
        self,
        vertex_count: int,
        origin: Sequence[int],
        label: Sequence[Letter],
        twin: Sequence[int],
        rotation: Sequence[Sequence[int]],
        basepoint: int,
        boundary_start: int | None,
    ) -> None:
        self.vertex_count = int(vertex_count)
        self.origin = tuple(origin)
        self.label = tuple(label)
        self.twin = tuple(twin)
        self.rotation = tuple(tuple(r) for r in rotation)
        self.basepoint = int(basepoint)
        self.boundary_start = None if boundary_start is None else int(boundary_start)
        n = len(self.origin)
        if len(self.label) != n or len(self.twin) != n:
            raise DiagramError("malformed", "origin/label/twin lengths differ")
        if len(self.rotation) != self.vertex_count:
            raise DiagramError("malformed", "one rotation per vertex required")
        if self.vertex_count < 1:
            raise DiagramError("malformed", "at least one vertex required")

    # -- structure -------------------------------------------------------

    @property
    def dart_count(self) -> int:
        return len(self.origin)

    @property
    def darts(self) -> list[Dart]:
        return [Dart(i, self.origin[i], self.label[i], self.twin[i]) for i in range(self.dart_count)]

    def head(self, d: int) -> int:
        return self.origin[self.twin[d]]

    @cached_property
    def sigma(self) -> tuple[int, ...]:
        """Counterclockwise successor of each dart around its origin."""
        out = [-1] * self.dart_count
        for rot in self.rotation:
            k = len(rot)
            for i, d in enumerate(rot):
                out[d] = rot[(i + 1) % k]
        return tuple(out)

    @cached_property
    def sigma_inv(self) -> tuple[int, ...]:
        out = [-1] * self.dart_count
        for d, s in enumerate(self.sigma):
            out[s] = d
        return tuple(out)

    @cached_property
    def phi(self) -> tuple[int, ...]:
        """Face permutation: next dart along the face to the left."""
        si, tw = self.sigma_inv, self.twin
        return tuple(si[tw[d]] for d in range(self.dart_count))

    @cached_property
    def _orbits(self) -> list[list[int]]:
        return kernels.perm_orbits(list(self.phi))

    @cached_property
    def outer_orbit(self) -> tuple[int, ...]:
        if self.boundary_start is None:
            return ()
        target = self.twin[self.boundary_start]
        for orb in self._orbits:
            if target in orb:
                return tuple(orb)
        raise DiagramError("malformed", "boundary_start not found")

    @cached_property
    def faces(self) -> tuple[tuple[int, ...], ...]:
        """Internal faces as dart cycles (counterclockwise), ordered by least dart."""
        outer = set(self.outer_orbit)
        return tuple(tuple(o) for o in self._orbits if o[0] not in outer)

    @property
    def face_count(self) -> int:
        return len(self.faces)

    @cached_property
    def face_of(self) -> tuple[int, ...]:
        """Internal face index of the face left of each dart; -1 for the outer face."""
        out = [-1] * self.dart_count
        for i, f in enumerate(self.faces):
            for d in f:
                out[d] = i
        return tuple(out)

    @cached_property
    def edges(self) -> tuple[int, ...]:
        """1-cell ids: each edge is named by the smaller of its two dart ids."""
        return tuple(d for d in range(self.dart_count) if d < self.twin[d])

    def edge_of(self, d: int) -> int:
        return min(d, self.twin[d])

    def edge_ends(self, e: int) -> tuple[int, int]:
        return self.origin[e], self.head(e)

    @property
    def edge_count(self) -> int:
        return self.dart_count // 2

    @cached_property
    def boundary_darts(self) -> tuple[int, ...]:
        """The boundary circuit, counterclockwise from ``boundary_start``."""
        if self.boundary_start is None:
            return ()
        out = [self.boundary_start]
        sg, tw = self.sigma, self.twin
        d = sg[tw[self.boundary_start]]
        while d != self.boundary_start:
            out.append(d)
            if len(out) > self.dart_count:
                raise DiagramError("malformed", "boundary circuit does not close")
            d = sg[tw[d]]
        return tuple(out)

    @cached_property
    def boundary_vertices(self) -> tuple[int, ...]:
        """Vertices visited by the boundary circuit, with repetition."""
        if not self.boundary_darts:
            return (self.basepoint,)
        return tuple(self.origin[d] for d in self.boundary_darts)

    def face_word(self, f: int) -> Word:
        return Word(tuple(self.label[d] for d in self.faces[f]))

    def face_vertices(self, f: int) -> set[int]:
        return {self.origin[d] for d in self.faces[f]}

    def face_edges(self, f: int) -> set[int]:
        return {self.edge_of(d) for d in self.faces[f]}

    @cached_property
    def csr(self) -> tuple[list[int], list[int]]:
        indptr = [0]
        indices: list[int] = []
        for rot in self.rotation:
            for d in rot:
                indices.append(self.origin[self.twin[d]])
            indptr.append(len(indices))
        return indptr, indices

    def neighbours(self, v: int) -> list[int]:
        return [self.head(d) for d in self.rotation[v]]

    # -- serialization ---------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "vertices": self.vertex_count,
            "darts": [
                {"id": i, "origin": self.origin[i], "label": str(self.label[i]), "twin": self.twin[i]}
                for i in range(self.dart_count)
            ],
            "rotation": [list(r) for r in self.rotation],
            "basepoint": self.basepoint,
            "boundary_start": self.boundary_start,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: Mapping) -> "PlanarDiagram":
        try:
            darts = sorted(data["darts"], key=lambda x: int(x["id"]))
            if [int(x["id"]) for x in darts] != list(range(len(darts))):
                raise DiagramError("malformed", "dart ids must be 0..n-1")
            return cls(
                int(data["vertices"]),
                [int(x["origin"]) for x in darts],
                [Letter.parse(str(x["label"])) for x in darts],
                [int(x["twin"]) for x in darts],
                [[int(d) for d in r] for r in data["rotation"]],
                int(data["basepoint"]),
                None if data.get("boundary_start") is None else int(data["boundary_start"]),
            )
        except (KeyError, TypeError) as exc:
            raise DiagramError("malformed", f"missing or bad field {exc}") from None

    @classmethod
    def from_json(cls, text: str) -> "PlanarDiagram":
        return cls.from_dict(json.loads(text))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PlanarDiagram):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def __hash__(self) -> int:
        return hash(self.to_json())

    def __repr__(self) -> str:
        return f"PlanarDiagram(V={self.vertex_count}, E={self.edge_count}, F={self.face_count})"


def single_vertex_diagram() -> PlanarDiagram:
    return PlanarDiagram(1, [], [], [], [[]], 0, None)


# -- validation ---------------------------------------------------------------


def check_structure(d: PlanarDiagram) -> None:
    """Permutation-level checks that need no presentation."""
    n = d.dart_count
    if n % 2:
        raise DiagramError("malformed", "odd number of darts")
    for i in range(n):
        t = d.twin[i]
        if not 0 <= t < n or t == i or d.twin[t] != i:
            raise DiagramError("malformed", f"twin of dart {i} is not a fixed-point-free involution")
        if d.label[t] != d.label[i].inverse():
            raise DiagramError("malformed", f"dart {t} is not labelled by the inverse of dart {i}")
        if not 0 <= d.origin[i] < d.vertex_count:
            raise DiagramError("malformed", f"dart {i} has origin out of range")
    seen = [False] * n
    for v, rot in enumerate(d.rotation):
        for x in rot:
            if not 0 <= x < n or seen[x]:
                raise DiagramError("malformed", f"dart {x} listed twice or out of range in rotations")
            if d.origin[x] != v:
                raise DiagramError("malformed", f"dart {x} listed at vertex {v} but leaves {d.origin[x]}")
            seen[x] = True
    if not all(seen):
        raise DiagramError("malformed", "some dart is missing from the rotations")
    if not 0 <= d.basepoint < d.vertex_count:
        raise DiagramError("malformed", "basepoint out of range")
    if n == 0:
        if d.boundary_start is not None:
            raise DiagramError("malformed", "boundary_start given without darts")
    elif d.boundary_start is None or not 0 <= d.boundary_start < n:
        raise DiagramError("malformed", "boundary_start missing or out of range")


def check_topology(d: PlanarDiagram) -> None:
    indptr, indices = d.csr
    dist = kernels.bfs_levels(indptr, indices, d.vertex_count, d.basepoint)
    if any(x < 0 for x in dist):
        raise DiagramError("disconnected", "the 1-skeleton is not connected")
    internal = len(d._orbits) - (1 if d.dart_count else 0)
    if internal != d.edge_count - d.vertex_count + 1:
        raise DiagramError(
            "euler",
            f"{internal} internal faces but E - V + 1 = {d.edge_count - d.vertex_count + 1}",
        )
    if d.dart_count and d.basepoint not in set(d.boundary_vertices):
        raise DiagramError("basepoint", "basepoint is not on the outer face")


def validate_diagram(p: Presentation | None, raw: PlanarDiagram | Mapping) -> PlanarDiagram:
    """Check every van Kampen diagram invariant and return the diagram.

    With ``p=None`` the relator check on face words is skipped (useful for
    analysis commands that are given no presentation).
    """
    d = raw if isinstance(raw, PlanarDiagram) else PlanarDiagram.from_dict(raw)
    check_structure(d)
    check_topology(d)
    if p is not None:
        known = set(p.names)
        for lab in d.label:
            if lab.gen not in known:
                raise DiagramError("label", f"unknown generator {lab.gen!r}")
        family = relator_cyclic_family(p)
        for f in range(d.face_count):
            w = d.face_word(f)
            if w not in family:
                raise DiagramError("face-word", f"face {f} reads {w}, not a relator conjugate")
    return d


# -- reading the boundary -----------------------------------------------------


def boundary_word(d: PlanarDiagram) -> Word:
    if d.boundary_start is not None and d.twin[d.boundary_start] not in set(d.outer_orbit):
        raise DiagramError("boundary", "boundary_start not on the outer face")
    return Word(tuple(d.label[x] for x in d.boundary_darts))


def repeated_boundary_indices(d: PlanarDiagram) -> list[int]:
    """Indices k of the boundary circuit whose vertex already occurred at an earlier index."""
    seen: set[int] = set()
    out = []
    for k, v in enumerate(d.boundary_vertices if d.dart_count else ()):
        if v in seen:
            out.append(k)
        seen.add(v)
    return out


# -- coarse distance ---------------------------------------------------------


@dataclass(frozen=True)
class DistanceField:
    """Quarter-unit distances from ``source``; edge and face values are derived."""

    diagram: PlanarDiagram
    source: int
    vertex: tuple[int, ...]

    def edge(self, e: int) -> int:
        a, b = self.diagram.edge_ends(e)
        return min(self.vertex[a], self.vertex[b]) + 2

    def face(self, f: int) -> int:
        # y_i is taken in the interior of each boundary edge (see notes)
        return max(self.edge(self.diagram.edge_of(x)) for x in self.diagram.faces[f]) - 1

    def edges(self) -> dict[int, int]:
        return {e: self.edge(e) for e in self.diagram.edges}

    def faces(self) -> list[int]:
        return [self.face(f) for f in range(self.diagram.face_count)]


def vertex_distances(d: PlanarDiagram, source: int | None = None) -> list[int]:
    """Plain BFS edge counts from ``source`` (default: basepoint)."""
    indptr, indices = d.csr
    return kernels.bfs_levels(indptr, indices, d.vertex_count, d.basepoint if source is None else source)


def coarse_distance_field(d: PlanarDiagram, source: int | None = None) -> DistanceField:
    src = d.basepoint if source is None else source
    return DistanceField(d, src, tuple(4 * x for x in vertex_distances(d, src)))


def idiam(d: PlanarDiagram) -> int:
    return 4 * max(vertex_distances(d))


def _csr_from_edges(n: int, edges: Iterable[tuple[int, int]]) -> tuple[list[int], list[int]]:
    adj: list[list[int]] = [[] for _ in range(n)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    indptr = [0]
    indices: list[int] = []
    for nb in adj:
        indices.extend(nb)
        indptr.append(len(indices))
    return indptr, indices


def unbased_idiam(d: PlanarDiagram, vertices: Iterable[int] | None = None, edges: Iterable[int] | None = None) -> int:
    """All-pairs maximum distance, within the subcomplex when one is given.

    The subcomplex is described by a vertex set and a set of edge ids whose
    endpoints lie in it; faces do not change 1-skeleton distances.
    """
    if vertices is None:
        indptr, indices = d.csr
        best = kernels.all_pairs_max(indptr, indices, d.vertex_count)
    else:
        vs = sorted(set(vertices))
        index = {v: i for i, v in enumerate(vs)}
        es = []
        for e in edges or ():
            a, b = d.edge_ends(e)
            if a not in index or b not in index:
                raise DiagramError("subcomplex", f"edge {e} has an endpoint outside the vertex set")
            es.append((index[a], index[b]))
        indptr, indices = _csr_from_edges(len(vs), es)
        best = kernels.all_pairs_max(indptr, indices, len(vs))
    if best < 0:
        raise DiagramError("disconnected", "subcomplex is not connected")
    return 4 * best


def bdiam(d: PlanarDiagram) -> int:
    """Sum of basepoint distances over distinct boundary vertices, in quarters."""
    dist = vertex_distances(d)
    return 4 * sum(dist[v] for v in set(d.boundary_vertices))


def boundary_distances(d: PlanarDiagram) -> dict[int, int]:
    """BFS distances inside the boundary subgraph (edges met by the boundary circuit)."""
    verts = set(d.boundary_vertices)
    es = {d.edge_of(x) for x in d.boundary_darts}
    vs = sorted(verts)
    index = {v: i for i, v in enumerate(vs)}
    pairs = [(index[d.origin[e]], index[d.head(e)]) for e in sorted(es)]
    indptr, indices = _csr_from_edges(len(vs), pairs)
    raw = kernels.bfs_levels(indptr, indices, len(vs), index[d.basepoint])
    return {v: raw[index[v]] for v in vs}


def geodesic_shortcuts(d: PlanarDiagram) -> list[int]:
    """Boundary vertices whose diagram distance beats their boundary distance."""
    full = vertex_distances(d)
    bd = boundary_distances(d)
    return sorted(v for v, x in bd.items() if full[v] < x)


def geodesically_bounded(d: PlanarDiagram) -> bool:
    return not geodesic_shortcuts(d)


def simply_bounded(d: PlanarDiagram) -> bool:
    """True iff the boundary circuit repeats no vertex and no edge.

    The single-vertex diagram has an empty circuit and is declared not simply
    bounded.
    """
    if not d.dart_count:
        return False
    verts = d.boundary_vertices
    if len(set(verts)) != len(verts):
        return False
    es = [d.edge_of(x) for x in d.boundary_darts]
    return len(set(es)) == len(es)


# -- construction helpers ----------------------------------------------------


def diagram_from_embedding(
    positions: Sequence[tuple[float, float]],
    edges: Sequence[tuple[int, int, Letter]],
    basepoint: int,
    start: tuple[int, int] | None = None,
    angles: Mapping[tuple[int, int], float] | None = None,
) -> PlanarDiagram:
    """Build a rotation system from vertex coordinates.

    Edge ``k`` becomes darts ``2k`` (u to v, labelled by the letter) and
    ``2k+1``. Darts at a vertex are ordered counterclockwise by direction
    angle; ``angles[(k, end)]`` overrides the angle of edge ``k`` at endpoint
    ``end`` (0 = at u, 1 = at v) for curved edges. ``start`` is (edge index,
    end) of the dart that begins the boundary circuit.
    """
    n = len(positions)
    origin, label, twin = [], [], []
    for k, (u, v, lab) in enumerate(edges):
        origin += [u, v]
        label += [lab, lab.inverse()]
        twin += [2 * k + 1, 2 * k]
    ang: dict[int, float] = {}
    for k, (u, v, _) in enumerate(edges):
        for end, (a, b) in enumerate(((u, v), (v, u))):
            key = (k, end)
            if angles and key in angles:
                ang[2 * k + end] = angles[key]
            else:
                (x0, y0), (x1, y1) = positions[a], positions[b]
                ang[2 * k + end] = math.atan2(y1 - y0, x1 - x0)
    rotation: list[list[int]] = [[] for _ in range(n)]
    for dd in range(len(origin)):
        rotation[origin[dd]].append(dd)
    for rot in rotation:
        rot.sort(key=lambda x: (ang[x] % (2 * math.pi), x))
    bs = None
    if edges:
        k, end = start if start is not None else (0, 0)
        bs = 2 * k + end
    return PlanarDiagram(n, origin, label, twin, rotation, basepoint, bs)
