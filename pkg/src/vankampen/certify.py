"""Independent checker for taming certificates.

Only the diagram core (parsing and validation of the map itself) is shared
with the code that produced the certificate. Distances, tree paths, icicle
bodies and the f and g tables are all recomputed here from scratch.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Any

from .diagram import DiagramError, PlanarDiagram, boundary_word, validate_diagram
from .presentation import PresentationError, parse_presentation


@dataclass(frozen=True)
class CertifyResult:
    ok: bool
    reason: str = ""
    witness: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok


def _reject(reason: str, **witness: Any) -> CertifyResult:
    return CertifyResult(False, reason, witness)


def _bfs(d: PlanarDiagram) -> list[int]:
    dist = [-1] * d.vertex_count
    dist[d.basepoint] = 0
    queue = deque([d.basepoint])
    while queue:
        u = queue.popleft()
        for x in d.rotation[u]:
            v = d.origin[d.twin[x]]
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def _root_path(d: PlanarDiagram, parent: list[int], v: int) -> list[int]:
    """Darts from the basepoint down to v along the tree."""
    out = []
    steps = 0
    while v != d.basepoint:
        x = parent[v]
        out.append(d.twin[x])
        v = d.origin[d.twin[x]]
        steps += 1
        if steps > d.vertex_count:
            raise ValueError("tree has a cycle")
    out.reverse()
    return out


def _outside(d: PlanarDiagram, cut: set[int]) -> set[int]:
    """Faces reachable from the outer face without crossing a cut edge (outer = -1)."""
    reach = {-1}
    queue = deque([-1])
    by_face: dict[int, list[int]] = {}
    for x in range(d.dart_count):
        by_face.setdefault(d.face_of[x], []).append(x)
    while queue:
        f = queue.popleft()
        for x in by_face.get(f, ()):
            if min(x, d.twin[x]) in cut:
                continue
            g = d.face_of[d.twin[x]]
            if g not in reach:
                reach.add(g)
                queue.append(g)
    return reach


def certify(cert: dict | str) -> CertifyResult:
    try:
        data = json.loads(cert) if isinstance(cert, str) else cert
        return _certify(data)
    except (KeyError, TypeError, ValueError, IndexError, DiagramError, PresentationError) as exc:
        return _reject(f"malformed certificate: {exc}")


def _certify(c: dict) -> CertifyResult:
    p = parse_presentation(c["presentation"])
    d = validate_diagram(p, PlanarDiagram.from_dict(c["diagram"]))
    if boundary_word(d).compact() != c["word"]:
        return _reject("diagram does not read the certified word")
    V = d.vertex_count
    dist = _bfs(d)
    vq = [4 * x for x in dist]

    def eq(e: int) -> int:
        return min(vq[d.origin[e]], vq[d.origin[d.twin[e]]]) + 2

    # tree
    tree = c["tree"]
    parent = [int(x) for x in tree["parent_dart"]]
    depth = [int(x) for x in tree["depth"]]
    if len(parent) != V or len(depth) != V or tree["root"] != d.basepoint:
        return _reject("tree does not match the diagram")
    for v in range(V):
        x = parent[v]
        if v == d.basepoint:
            if x != -1:
                return _reject("root has a parent", vertex=v)
            continue
        if not 0 <= x < d.dart_count or d.origin[x] != v:
            return _reject("bad parent dart", vertex=v)
        if dist[d.origin[d.twin[x]]] != dist[v] - 1:
            return _reject("tree is not geodesic", vertex=v)
        if depth[v] != vq[v]:
            return _reject("tree depth differs from the distance", vertex=v)
    tree_edges = {min(x, d.twin[x]) for x in parent if x >= 0}

    # icicles and their 1-skeleton maxima
    recomputed: dict[int, tuple[int, int]] = {}
    edges = [x for x in range(d.dart_count) if x < d.twin[x]]
    for e in edges:
        if e in tree_edges:
            continue
        gx = _root_path(d, parent, d.origin[e])
        gy = _root_path(d, parent, d.origin[d.twin[e]])
        k = 0
        while k < min(len(gx), len(gy)) and gx[k] == gy[k]:
            k += 1
        cut = {min(x, d.twin[x]) for x in gx[k:] + gy[k:]} | {e}
        out = _outside(d, cut)
        inside = {f for f in range(d.face_count)} - out
        if not inside:
            return _reject("icicle bounds no face", edge=e)
        sk_edges = set(cut) | {min(x, d.twin[x]) for x in gx[:k]}
        for x in range(d.dart_count):
            if d.face_of[x] in inside:
                sk_edges.add(min(x, d.twin[x]))
        sk_verts = {d.basepoint}
        for x in sk_edges:
            sk_verts.add(d.origin[x])
            sk_verts.add(d.origin[d.twin[x]])
        prior = max([vq[v] for v in sk_verts] + [eq(x) for x in sk_edges])
        recomputed[e] = (eq(e), prior)

    prof = c["profile"]
    if prof is None:
        if recomputed:
            return _reject("profile missing")
    else:
        listed = {int(e): (int(q), int(m)) for e, q, m in prof["edges"]}
        if listed != recomputed:
            bad = sorted(set(listed.items()) ^ set(recomputed.items()))
            return _reject("profile differs from recomputation", edge=bad[0][0] if bad else None)
        if sorted(map(tuple, prof["tree_edges"])) != sorted((e, eq(e)) for e in tree_edges):
            return _reject("tree-edge distances differ from recomputation")
        if sorted(map(tuple, prof["vertices"])) != [(v, vq[v]) for v in range(V)]:
            return _reject("vertex distances differ from recomputation")

    # f from its provenance
    prov = c["f"]["provenance"]
    idiam = {int(n): int(v) for n, v, _ in prov["idiam"]}
    if not idiam:
        return _reject("empty IDiam table")
    lengths = sorted(idiam)
    if any(idiam[a] > idiam[b] for a, b in zip(lengths, lengths[1:])):
        return _reject("IDiam table decreases")
    mp = int(prov["M_P"])
    if mp < 0:
        return _reject("negative M_P")
    top = lengths[-1]

    def f_expected(q: int) -> int:
        n = (q + 1) // 2 + 1
        return idiam.get(n, idiam[top]) + q + mp + 4

    ftab = {int(q): int(v) for q, v in c["f"]["table"]}
    for q, v in ftab.items():
        if v != f_expected(q):
            at = [e for e, (qe, _) in sorted(recomputed.items()) if qe == q]
            return _reject("f table disagrees with its provenance", point=q, edge=at[0] if at else None)
    for e, (q, m) in sorted(recomputed.items()):
        if q not in ftab:
            return _reject("f is not tabulated at an edge distance", edge=e, point=q)
        if m > ftab[q]:
            return _reject("combing is not graph f-tame", edge=e, point=q, prior_max=m, f=ftab[q])

    # g from f
    rho = max(len(r) for r in p.relators) if p.relators else 0
    if c["g"] is not None:
        if int(c["g"]["rho"]) != rho:
            return _reject("g uses the wrong rho")
        gtab = {int(q): int(v) for q, v in c["g"]["table"]}
        expect = {q - 3: v + 2 * rho - 1 for q, v in ftab.items() if q >= 3}
        if gtab != expect:
            return _reject("g is not f shifted by 3/4 plus (2 rho - 1)/4")

    # trace
    trace = c["trace"]
    if not trace or trace[-1]["N"] is not None:
        return _reject("trace must end with a terminal record")
    ns = [s["N"] for s in trace[:-1]]
    if any(n is None for n in ns):
        return _reject("terminal record is not last")
    if any(b >= a for a, b in zip(ns, ns[1:])):
        return _reject("trace N values are not strictly decreasing")
    return CertifyResult(True)
