"""Diagram rewriting: gluing along boundary paths, padding, and disc replacement.

Gluing works on rotation systems directly. A path on the boundary of ``a``
(interior on its left) is identified dart for dart with a path of ``b``
running with b's interior on its right, and the remaining darts of b are
spliced into a's rotations in the outer corners along the path. Every result
is re-validated.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .diagram import (
    DiagramError,
    PlanarDiagram,
    bdiam,
    boundary_word,
    geodesic_shortcuts,
    idiam,
    repeated_boundary_indices,
    simply_bounded,
    validate_diagram,
    vertex_distances,
)
from .presentation import Presentation, Word


class SurgeryError(AssertionError):
    """A rewriting step broke an invariant that should hold by construction."""


@dataclass(frozen=True)
class BoundaryPath:
    """Consecutive darts on the outer face of ``diagram``.

    ``side`` is ``"left"`` when the diagram's interior lies on the left of
    the darts (a stretch of the boundary circuit) and ``"right"`` for the
    reverse traversal. ``corner`` is the boundary index the path starts at,
    which also locates empty paths.
    """

    diagram: PlanarDiagram
    darts: tuple[int, ...]
    side: str
    corner: int

    @property
    def word(self) -> Word:
        return Word(tuple(self.diagram.label[x] for x in self.darts))

    @property
    def vertices(self) -> tuple[int, ...]:
        d = self.diagram
        if not self.darts:
            return (_corner_vertex(d, self.corner),)
        return tuple(d.origin[x] for x in self.darts) + (d.head(self.darts[-1]),)

    @property
    def simple(self) -> bool:
        vs = self.vertices
        return len(set(vs)) == len(vs)

    def __len__(self) -> int:
        return len(self.darts)


def _corner_vertex(d: PlanarDiagram, i: int) -> int:
    bd = d.boundary_darts
    return d.origin[bd[i % len(bd)]] if bd else d.basepoint


def boundary_path(d: PlanarDiagram, start: int, length: int) -> BoundaryPath:
    """Boundary darts ``start .. start+length-1`` (cyclically); interior on the left."""
    bd = d.boundary_darts
    if length and not bd:
        raise DiagramError("path", "diagram has no boundary darts")
    if length > len(bd):
        raise DiagramError("path", "path longer than the boundary circuit")
    darts = tuple(bd[(start + j) % len(bd)] for j in range(length))
    return BoundaryPath(d, darts, "left", start % len(bd) if bd else 0)


def reversed_boundary_path(d: PlanarDiagram, start: int, length: int) -> BoundaryPath:
    """Twins of boundary darts ``start+length-1`` down to ``start``; interior on the right."""
    fwd = boundary_path(d, start, length)
    darts = tuple(d.twin[x] for x in reversed(fwd.darts))
    return BoundaryPath(d, darts, "right", (start + length) % max(len(d.boundary_darts), 1))


@dataclass(frozen=True)
class GlueResult:
    diagram: PlanarDiagram
    vertex_maps: tuple[dict[int, int], ...]
    dart_maps: tuple[dict[int, int], ...]
    log: tuple[str, ...] = ()


def _check_path(p: BoundaryPath, side: str) -> None:
    d = p.diagram
    if p.darts and p.side != side:
        raise DiagramError("path", f"expected a path with the interior on the {side}")
    bd = d.boundary_darts
    if not p.darts:
        return
    fwd = p.darts if side == "left" else tuple(d.twin[x] for x in reversed(p.darts))
    try:
        i = bd.index(fwd[0])
    except ValueError:
        raise DiagramError("path", f"dart {fwd[0]} is not on the boundary circuit") from None
    for j, x in enumerate(fwd):
        if bd[(i + j) % len(bd)] != x:
            raise DiagramError("path", "path darts are not consecutive on the boundary circuit")
    if not p.simple:
        raise DiagramError("path", "path is not simple")


def _rest_after(rot: Sequence[int], x: int, stop: int | None = None) -> list[int]:
    """Darts of ``rot`` strictly after x (counterclockwise), up to ``stop`` or back to x."""
    k = rot.index(x)
    out = []
    for j in range(1, len(rot)):
        y = rot[(k + j) % len(rot)]
        if y == stop:
            break
        out.append(y)
    return out


def _insert_before(rot: list[int], anchor: int, items: Sequence[int]) -> None:
    k = rot.index(anchor)
    rot[k:k] = items


def _insert_after(rot: list[int], anchor: int, items: Sequence[int]) -> None:
    k = rot.index(anchor) + 1
    rot[k:k] = items


def glue_along_boundary(
    a: PlanarDiagram,
    pa: BoundaryPath,
    b: PlanarDiagram,
    pb: BoundaryPath,
    p: Presentation | None = None,
) -> GlueResult:
    """Identify ``pb`` (interior of b on its right) with ``pa`` (interior of a on its left).

    The basepoint of ``a`` is kept. Empty paths wedge the diagrams together
    at the corners they name.
    """
    if pa.diagram is not a or pb.diagram is not b:
        raise DiagramError("path", "paths must belong to the diagrams being glued")
    _check_path(pa, "left")
    _check_path(pb, "right")
    if len(pa) != len(pb) or pa.word != pb.word:
        raise DiagramError("word", f"path words differ: {pa.word} vs {pb.word}")
    m = len(pa)
    na = a.dart_count
    tw_b = b.twin
    dropped = set(pb.darts) | {tw_b[x] for x in pb.darts}
    dart_map: dict[int, int] = {}
    for x, y in zip(pb.darts, pa.darts):
        dart_map[x] = y
        dart_map[tw_b[x]] = a.twin[y]
    nxt = na
    for x in range(b.dart_count):
        if x not in dropped:
            dart_map[x] = nxt
            nxt += 1
    vmap: dict[int, int] = {}
    for xv, yv in zip(pb.vertices, pa.vertices):
        vmap[xv] = yv
    nv = a.vertex_count
    for v in range(b.vertex_count):
        if v not in vmap:
            vmap[v] = nv
            nv += 1

    origin = list(a.origin) + [0] * (nxt - na)
    label = list(a.label) + [None] * (nxt - na)
    twin = list(a.twin) + [0] * (nxt - na)
    for x in range(b.dart_count):
        y = dart_map[x]
        if y >= na:
            origin[y] = vmap[b.origin[x]]
            label[y] = b.label[x]
            twin[y] = dart_map[tw_b[x]]
    rotation = [list(r) for r in a.rotation] + [[] for _ in range(nv - a.vertex_count)]
    for v in range(b.vertex_count):
        if vmap[v] >= a.vertex_count:
            rotation[vmap[v]] = [dart_map[x] for x in b.rotation[v]]

    a_bd = a.boundary_darts
    if m == 0:
        u = pa.vertices[0]
        rb = b.rotation[pb.vertices[0]]
        if pb.diagram.boundary_darts:
            first = b.boundary_darts[pb.corner % len(b.boundary_darts)]
            k = rb.index(first)
            items = [dart_map[x] for x in rb[k:] + rb[:k]]
        else:
            items = []
        if a_bd:
            prev = a_bd[(pa.corner - 1) % len(a_bd)]
            _insert_after(rotation[u], a.twin[prev], items)
        else:
            rotation[u] = items
    else:
        for i in range(m + 1):
            u = pa.vertices[i]
            rb = b.rotation[pb.vertices[i]]
            if i == 0:
                items = _rest_after(rb, pb.darts[0])
                _insert_before(rotation[u], pa.darts[0], [dart_map[x] for x in items])
            elif i < m:
                items = _rest_after(rb, tw_b[pb.darts[i - 1]], pb.darts[i])
                _insert_after(rotation[u], a.twin[pa.darts[i - 1]], [dart_map[x] for x in items])
            else:
                items = _rest_after(rb, tw_b[pb.darts[m - 1]])
                _insert_after(rotation[u], a.twin[pa.darts[m - 1]], [dart_map[x] for x in items])

    bs = a.boundary_start
    if m and bs in pa.darts:
        if bs != pa.darts[0]:
            raise DiagramError("basepoint", "the basepoint would leave the boundary")
        prev = a_bd[(a_bd.index(bs) - 1) % len(a_bd)]
        u = a.origin[bs]
        r = rotation[u]
        bs = r[(r.index(a.twin[prev]) + 1) % len(r)]
    elif bs is None and nxt:
        # a was a single vertex: start along b's circuit at the wedge corner
        bs = dart_map[b.boundary_darts[pb.corner % len(b.boundary_darts)]] if b.boundary_darts else None
    out = PlanarDiagram(nv, origin, label, twin, rotation, a.basepoint, bs)
    validate_diagram(p, out)
    amap_v = {v: v for v in range(a.vertex_count)}
    amap_d = {x: x for x in range(na)}
    return GlueResult(out, (amap_v, vmap), (amap_d, dart_map))


def mirror(d: PlanarDiagram) -> PlanarDiagram:
    """Reflect the plane: reversed rotations, so the boundary reads the inverse word."""
    rot = [tuple(reversed(r)) for r in d.rotation]
    bs = None
    if d.boundary_darts:
        bs = d.twin[d.boundary_darts[-1]]
    return PlanarDiagram(d.vertex_count, d.origin, d.label, d.twin, rot, d.basepoint, bs)


# -- padding ------------------------------------------------------------------------


def pad_cut_vertex(d: PlanarDiagram, k: int, pad: PlanarDiagram, p: Presentation | None = None) -> GlueResult:
    """Glue a simply bounded filling of v v^-1 over the boundary stretch
    p_{k-1} p_k p_{k+1} (labelled v), replacing p_k by a new outer vertex."""
    bd = d.boundary_darts
    n = len(bd)
    if not 0 < k < n:
        raise DiagramError("index", f"boundary index {k} out of range")
    verts = d.boundary_vertices
    if verts[k - 1] == verts[(k + 1) % n]:
        raise SurgeryError(f"gamma at index {k} is not simple: p_(k-1) = p_(k+1)")
    if not simply_bounded(pad) or len(pad.boundary_darts) != 4:
        raise DiagramError("pad", "pad must be a simply bounded diagram for a word of length 4")
    gamma = boundary_path(d, k - 1, 2)
    v = gamma.word
    pw = boundary_word(pad)
    if pw != v + v.inverse():
        raise DiagramError("pad", f"pad reads {pw}, expected {v + v.inverse()}")
    eta = reversed_boundary_path(pad, 2, 2)
    before = repeated_boundary_indices(d)
    w = boundary_word(d)
    res = glue_along_boundary(d, gamma, pad, eta, p)
    out = res.diagram
    if boundary_word(out) != w:
        raise SurgeryError("padding changed the boundary word")
    after = repeated_boundary_indices(out)
    if k in before and sorted(after) != sorted(set(before) - {k}):
        raise SurgeryError(f"padding at {k} left repeated indices {after} (was {before})")
    return res


@dataclass
class PadContext:
    """What the pipeline needs from the oracle: pads, the start diagram and the bound."""

    oracle: object  # vankampen.oracle.Oracle
    log: list[str] = field(default_factory=list)
    bdiam_trace: list[tuple[int, int]] = field(default_factory=list)  # (before, after) per geodesic pad

    @property
    def p(self) -> Presentation:
        return self.oracle.p

    def pad(self, v: Word) -> PlanarDiagram:
        r = self.oracle.simply_bounded_data(v + v.inverse())
        if r.diagram is None:
            raise SurgeryError(f"oracle has no simply bounded filling of {v + v.inverse()} (incident)")
        return r.diagram

    def bound(self, length: int) -> int | None:
        """max(IDiam(length), floor(length/2) + M_P) in quarters, when known exactly."""
        table = self.oracle.idiam_function(length)
        mp = self.oracle.compute_M_P()
        ent = table[length]
        if not (ent.exhaustive and mp.exhaustive):
            return None
        return max(ent.value, 4 * (length // 2) + mp.value)


def make_simply_bounded(d: PlanarDiagram, ctx: PadContext, bound: int | None = None) -> PlanarDiagram:
    """Pad repeated boundary indices in increasing order; ``bound`` (quarters) is asserted if given."""
    n = len(d.boundary_darts)
    if n <= 2:
        raise DiagramError("routing", "words of length at most 2 are handled by prop5_pipeline case 1")
    while True:
        rep = repeated_boundary_indices(d)
        if not rep:
            break
        k = rep[0]
        v = boundary_path(d, k - 1, 2).word
        d = pad_cut_vertex(d, k, ctx.pad(v), ctx.p).diagram
        ctx.log.append(f"pad k={k} v={v.compact()}")
    if bound is not None and idiam(d) > bound:
        raise SurgeryError(f"IDiam {idiam(d)} exceeds the bound {bound}")
    return d


def make_geodesically_bounded(d: PlanarDiagram, ctx: PadContext, bound: int | None = None) -> PlanarDiagram:
    """Pad the nearest boundary vertex without a boundary geodesic until none is left."""
    n = len(d.boundary_darts)
    if n <= 2:
        raise DiagramError("routing", "words of length at most 2 are handled by prop5_pipeline case 1")
    if not simply_bounded(d):
        raise DiagramError("precondition", "make_geodesically_bounded needs a simply bounded diagram")
    while True:
        xs = geodesic_shortcuts(d)
        if not xs:
            break
        dist = vertex_distances(d)
        x = min(xs, key=lambda v: (dist[v], v))
        k = d.boundary_vertices.index(x)
        v = boundary_path(d, k - 1, 2).word
        old_b = bdiam(d)
        res = pad_cut_vertex(d, k, ctx.pad(v), ctx.p)
        new = res.diagram
        nd = vertex_distances(new)
        for y, q in res.vertex_maps[0].items():
            if nd[q] != dist[y]:
                raise SurgeryError(f"padding changed the distance of vertex {y}")
        new_b = bdiam(new)
        if new_b <= old_b:
            raise SurgeryError(f"bdiam did not increase ({old_b} -> {new_b})")
        if 2 * new_b > 4 * n * n:
            raise SurgeryError("bdiam exceeds half the squared word length")
        ctx.log.append(f"geodesic pad x={x} k={k} v={v.compact()} bdiam={new_b}")
        ctx.bdiam_trace.append((old_b, new_b))
        d = new
    if bound is not None and idiam(d) > bound:
        raise SurgeryError(f"IDiam {idiam(d)} exceeds the bound {bound}")
    return d


def prop5_pipeline(w: Word, ctx: PadContext) -> PlanarDiagram:
    """A simply and geodesically bounded filling of w within the IDiam bound."""
    o = ctx.oracle
    sb = o.simply_bounded_data(w)
    if sb.diagram is None:
        raise DiagramError("no-sb", f"no simply bounded filling of {w} within the budget")
    if len(w) <= 2:
        mp = o.compute_M_P()
        if idiam(sb.diagram) > mp.value:
            raise SurgeryError("case 1 diagram exceeds M_P")
        ctx.log.append(f"case 1: D_w for {w.compact()}")
        return sb.diagram
    start = o.idiam_of_word(w).diagram
    ctx.log.append(f"start IDiam={idiam(start)} faces={start.face_count}")
    bound = ctx.bound(len(w))
    d = make_simply_bounded(start, ctx, bound)
    d = make_geodesically_bounded(d, ctx, bound)
    if boundary_word(d) != w:
        raise SurgeryError("pipeline changed the boundary word")
    return d


# -- disc replacement -----------------------------------------------------------------


def _inside_faces(d: PlanarDiagram, cut_edges: set[int]) -> set[int]:
    F = d.face_count
    adj: list[list[int]] = [[] for _ in range(F + 1)]
    for e in d.edges:
        if e in cut_edges:
            continue
        x = d.face_of[e]
        y = d.face_of[d.twin[e]]
        x = F if x < 0 else x
        y = F if y < 0 else y
        adj[x].append(y)
        adj[y].append(x)
    seen = {F}
    queue = deque([F])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return set(range(F)) - seen


def replace_disc(
    d: PlanarDiagram,
    eta: Sequence[int],
    replacement: PlanarDiagram,
    p: Presentation | None = None,
) -> GlueResult:
    """Swap the disc bounded by the simple counterclockwise circuit ``eta``
    for ``replacement``, whose basepoint goes to ``origin(eta[0])``."""
    eta = list(eta)
    hv = [d.origin[x] for x in eta]
    if len(set(hv)) != len(hv):
        raise DiagramError("circuit", "circuit is not simple")
    for x, y in zip(eta, eta[1:] + eta[:1]):
        if d.head(x) != d.origin[y]:
            raise DiagramError("circuit", "circuit darts are not consecutive")
    if not simply_bounded(replacement):
        raise DiagramError("replacement", "replacement must be simply bounded")
    w_eta = Word(tuple(d.label[x] for x in eta))
    if boundary_word(replacement) != w_eta:
        raise DiagramError("word", f"replacement reads {boundary_word(replacement)}, circuit reads {w_eta}")
    inside = _inside_faces(d, {d.edge_of(x) for x in eta})
    if not inside or any(d.face_of[x] not in inside for x in eta):
        raise DiagramError("circuit", "circuit does not run counterclockwise around a disc")
    eta_set = set(eta) | {d.twin[x] for x in eta}
    drop_darts = {x for x in range(d.dart_count) if x not in eta_set and d.face_of[x] in inside and d.face_of[d.twin[x]] in inside}
    hvset = set(hv)
    drop_verts = {v for v in range(d.vertex_count) if v not in hvset and all(x in drop_darts for x in d.rotation[v]) and d.rotation[v]}
    vmap_host = {}
    for v in range(d.vertex_count):
        if v not in drop_verts:
            vmap_host[v] = len(vmap_host)
    dmap_host = {}
    for x in range(d.dart_count):
        if x not in drop_darts:
            dmap_host[x] = len(dmap_host)
    nd = len(dmap_host)
    nv = len(vmap_host)
    c = replacement.boundary_darts
    L = len(c)
    c_v = [replacement.origin[x] for x in c]
    c_set = set(c) | {replacement.twin[x] for x in c}
    dmap_rep: dict[int, int] = {}
    for i, x in enumerate(c):
        dmap_rep[x] = dmap_host[eta[i]]
        dmap_rep[replacement.twin[x]] = dmap_host[d.twin[eta[i]]]
    for x in range(replacement.dart_count):
        if x not in c_set:
            dmap_rep[x] = nd
            nd += 1
    vmap_rep: dict[int, int] = {c_v[i]: vmap_host[hv[i]] for i in range(L)}
    for v in range(replacement.vertex_count):
        if v not in vmap_rep:
            vmap_rep[v] = nv
            nv += 1

    origin = [0] * nd
    label = [None] * nd
    twin = [0] * nd
    for x, y in dmap_host.items():
        origin[y] = vmap_host[d.origin[x]]
        label[y] = d.label[x]
        twin[y] = dmap_host[d.twin[x]]
    for x, y in dmap_rep.items():
        if x not in c_set:
            origin[y] = vmap_rep[replacement.origin[x]]
            label[y] = replacement.label[x]
            twin[y] = dmap_rep[replacement.twin[x]]
    rotation: list[list[int]] = [[] for _ in range(nv)]
    for v, nvid in vmap_host.items():
        rotation[nvid] = [dmap_host[x] for x in d.rotation[v] if x not in drop_darts]
    for v in range(replacement.vertex_count):
        if v not in set(c_v):
            rotation[vmap_rep[v]] = [dmap_rep[x] for x in replacement.rotation[v]]
    for i in range(L):
        prev = replacement.twin[c[i - 1]]
        items = _rest_after(replacement.rotation[c_v[i]], c[i], prev)
        _insert_after(rotation[vmap_host[hv[i]]], dmap_host[eta[i]], [dmap_rep[x] for x in items])
    bs = None if d.boundary_start is None else dmap_host[d.boundary_start]
    out = PlanarDiagram(nv, origin, label, twin, rotation, vmap_host[d.basepoint], bs)
    validate_diagram(p, out)
    if boundary_word(out) != boundary_word(d):
        raise SurgeryError("replacement changed the boundary word")
    return GlueResult(out, (vmap_host, vmap_rep), (dmap_host, dmap_rep))


def excise_and_replace_icicle(d: PlanarDiagram, t, ic, replacement: PlanarDiagram, p: Presentation | None = None) -> GlueResult:
    """Replace the body of icicle ``ic`` (of tree ``t``) by ``replacement``."""
    if not set(t.tree_edges) >= {d.edge_of(x) for x in ic.eta if d.edge_of(x) != ic.edge}:
        raise DiagramError("icicle", "icicle circuit does not belong to this tree")
    return replace_disc(d, ic.eta, replacement, p)


def excise_and_replace_many(d: PlanarDiagram, t, icicles: Sequence, replacements: Sequence[PlanarDiagram], p: Presentation | None = None) -> GlueResult:
    """Replace several icicle bodies with pairwise disjoint interiors, in edge-id order.

    Returned maps compose the host maps of every step (old diagram to final)."""
    from .icicle import classify_pair, DISJOINT

    items = sorted(zip(icicles, replacements), key=lambda it: it[0].edge)
    for i, (a, _) in enumerate(items):
        for b, _ in items[i + 1:]:
            if classify_pair(a, b) != DISJOINT:
                raise DiagramError("overlap", f"icicles at {a.edge} and {b.edge} do not have disjoint interiors")
    vmap = {v: v for v in range(d.vertex_count)}
    dmap = {x: x for x in range(d.dart_count)}
    cur = d
    for ic, rep in items:
        eta = [dmap[x] for x in ic.eta]
        res = replace_disc(cur, eta, rep, p)
        hv, hd = res.vertex_maps[0], res.dart_maps[0]
        vmap = {v: hv[q] for v, q in vmap.items() if q in hv}
        dmap = {x: hd[q] for x, q in dmap.items() if q in hd}
        cur = res.diagram
    return GlueResult(cur, (vmap,), (dmap,))
