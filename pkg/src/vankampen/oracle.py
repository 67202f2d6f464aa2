"""Exhaustive search for van Kampen diagrams at a face budget.

Every diagram for a nonempty word w splits at the edge carrying its first
boundary letter x:

* if the edge is a bridge, w = x u x^-1 v and the diagram is an edge joining
  a diagram for u (at its far end) to a diagram for v (at the basepoint);
* otherwise the edge borders one internal face reading x s, and deleting the
  edge leaves a diagram for s^-1 w[1:] with one face fewer.

Running the two cases backwards generates each rooted diagram exactly once.
Diagrams are kept as canonical keys: dart labels and the counterclockwise
successor permutation after relabelling darts in traversal order from the
boundary start (twins are 2k, 2k+1; the basepoint is the origin of dart 0).
"""

from __future__ import annotations

import hashlib
import itertools
import json
import os
import time
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from . import kernels
from .diagram import DiagramError, PlanarDiagram, single_vertex_diagram, validate_diagram, unbased_idiam
from .presentation import Presentation, Word, relator_family_codes

Key = tuple[tuple[int, ...], tuple[int, ...]]  # (labels, sigma)
EMPTY: Key = ((), ())


class OracleError(RuntimeError):
    pass


class _TimeCap(Exception):
    pass


@dataclass(frozen=True)
class SearchBudget:
    max_faces: int = 4
    max_edges: int | None = None
    time_cap: float | None = None

    def __post_init__(self) -> None:
        if self.max_faces < 0:
            raise ValueError("max_faces must be non-negative")
        if self.max_edges is not None and self.max_edges < 0:
            raise ValueError("max_edges must be non-negative")
        if self.time_cap is not None and self.time_cap <= 0:
            raise ValueError("time_cap must be positive")


# -- key manipulation --------------------------------------------------------------


def key_boundary(sigma: tuple[int, ...] | list[int]) -> list[int]:
    if not sigma:
        return []
    out = [0]
    b = sigma[1]
    while b != 0:
        out.append(b)
        b = sigma[b ^ 1]
    return out


def canonicalize(labels: list[int], sigma: list[int], root: int) -> Key:
    n = len(sigma)
    if n == 0:
        return EMPTY
    order = kernels.canonical_order(sigma, [i ^ 1 for i in range(n)], root)
    pos = [0] * n
    for i, d in enumerate(order):
        pos[d] = i
    return tuple(labels[d] for d in order), tuple(pos[sigma[d]] for d in order)


def _insert_after(sigma: list[int], ref: int, new: int) -> None:
    sigma[new] = sigma[ref]
    sigma[ref] = new


def attach_face(key: Key, x: int, k: int, tail_empty: bool) -> Key:
    """Add an edge from the basepoint to boundary position k, closing a face."""
    labels, sg = list(key[0]), list(key[1])
    bnd = key_boundary(key[1])
    n = len(sg)
    d, db = n, n + 1
    labels += [x, x ^ 1]
    sg += [-1, -1]
    if not bnd:
        sg[d], sg[db] = db, d
    else:
        tw_last = bnd[-1] ^ 1
        if k == 0:
            _insert_after(sg, tw_last, d)
            _insert_after(sg, d, db)
        elif tail_empty:
            _insert_after(sg, tw_last, d)
            _insert_after(sg, tw_last, db)
        else:
            _insert_after(sg, bnd[k - 1] ^ 1, db)
            _insert_after(sg, tw_last, d)
    return canonicalize(labels, sg, d)


def join_bridge(key_u: Key, key_v: Key, x: int) -> Key:
    """Edge x from the basepoint of v's diagram to the basepoint of u's diagram."""
    nv = len(key_v[1])
    off = nv
    labels = list(key_v[0]) + list(key_u[0])
    sg = list(key_v[1]) + [s + off for s in key_u[1]]
    n = len(sg)
    d, db = n, n + 1
    labels += [x, x ^ 1]
    sg += [-1, -1]
    bu = [b + off for b in key_boundary(key_u[1])]
    bv = key_boundary(key_v[1])
    if bu:
        _insert_after(sg, bu[-1] ^ 1, db)
    else:
        sg[db] = db
    if bv:
        _insert_after(sg, bv[-1] ^ 1, d)
    else:
        sg[d] = d
    return canonicalize(labels, sg, d)


def key_vertices(key: Key) -> list[int]:
    """Vertex id of each dart: sigma orbits numbered by least dart."""
    sg = key[1]
    vert = [-1] * len(sg)
    nv = 0
    for s in range(len(sg)):
        if vert[s] >= 0:
            continue
        d = s
        while vert[d] < 0:
            vert[d] = nv
            d = sg[d]
        nv += 1
    return vert


@dataclass(frozen=True)
class KeyStats:
    vertices: int
    edges: int
    idiam: int  # quarters
    simply_bounded: bool


def key_stats(key: Key) -> KeyStats:
    sg = key[1]
    if not sg:
        return KeyStats(1, 0, 0, False)
    vert = key_vertices(key)
    nv = max(vert) + 1
    adj: list[list[int]] = [[] for _ in range(nv)]
    for dd in range(len(sg)):
        adj[vert[dd]].append(vert[dd ^ 1])
    indptr = [0]
    indices: list[int] = []
    for nb in adj:
        indices.extend(nb)
        indptr.append(len(indices))
    dist = kernels.bfs_levels(indptr, indices, nv, 0)
    bnd = key_boundary(sg)
    bverts = [vert[b] for b in bnd]
    bedges = [b >> 1 for b in bnd]
    sb = len(set(bverts)) == len(bverts) and len(set(bedges)) == len(bedges)
    return KeyStats(nv, len(sg) // 2, 4 * max(dist), sb)


def key_to_diagram(key: Key, p: Presentation) -> PlanarDiagram:
    labels, sg = key
    if not sg:
        return single_vertex_diagram()
    vert = key_vertices(key)
    nv = max(vert) + 1
    rotation: list[list[int]] = [[] for _ in range(nv)]
    for v in range(nv):
        start = vert.index(v)
        d = start
        while True:
            rotation[v].append(d)
            d = sg[d]
            if d == start:
                break
    return PlanarDiagram(
        nv,
        vert,
        [p.letter(c) for c in labels],
        [i ^ 1 for i in range(len(sg))],
        rotation,
        0,
        0,
    )


def diagram_key(d: PlanarDiagram, p: Presentation) -> Key:
    """Canonical key of any diagram whose boundary starts at its basepoint."""
    if not d.dart_count:
        return EMPTY
    labels = [p.code(x) for x in d.label]
    return canonicalize_general(labels, list(d.sigma), list(d.twin), d.boundary_start)


def canonicalize_general(labels: list[int], sigma: list[int], twin: list[int], root: int) -> Key:
    order = kernels.canonical_order(sigma, twin, root)
    pos = [0] * len(sigma)
    for i, dd in enumerate(order):
        pos[dd] = i
    return tuple(labels[dd] for dd in order), tuple(pos[sigma[dd]] for dd in order)


# -- the search ------------------------------------------------------------------------


def _abelian(w: tuple[int, ...], ngens: int) -> list[int]:
    v = [0] * ngens
    for c in w:
        v[c >> 1] += -1 if c & 1 else 1
    return v


class FillingSearch:
    """Memoised generator of E(w, k): canonical keys of diagrams for w with exactly k faces."""

    def __init__(self, p: Presentation) -> None:
        self.p = p
        self.ngens = len(p.generators)
        family = sorted(relator_family_codes(p))
        self.by_first: dict[int, list[tuple[int, ...]]] = {}
        for c in family:
            self.by_first.setdefault(c[0], []).append(c[1:])
        self.abel_step = max((sum(abs(x) for x in _abelian(c, self.ngens)) for c in family), default=0)
        self.memo: dict[tuple[tuple[int, ...], int], tuple[Key, ...]] = {}
        self.deadline: float | None = None
        self.calls = 0

    def exact(self, w: tuple[int, ...], k: int) -> tuple[Key, ...]:
        hit = self.memo.get((w, k))
        if hit is not None:
            return hit
        self.calls += 1
        if self.deadline is not None and (self.calls & 255) == 0 and time.monotonic() > self.deadline:
            raise _TimeCap()
        res = self._compute(w, k)
        self.memo[(w, k)] = res
        return res

    def _compute(self, w: tuple[int, ...], k: int) -> tuple[Key, ...]:
        if not w:
            return (EMPTY,) if k == 0 else ()
        if sum(abs(x) for x in _abelian(w, self.ngens)) > k * self.abel_step:
            return ()
        x = w[0]
        out: set[Key] = set()
        xi = x ^ 1
        for j in range(1, len(w)):
            if w[j] != xi:
                continue
            u, v = w[1:j], w[j + 1:]
            for i in range(k + 1):
                du = self.exact(u, i)
                if not du:
                    continue
                dv = self.exact(v, k - i)
                for ku in du:
                    for kv in dv:
                        out.add(join_bridge(ku, kv, x))
        if k >= 1:
            tail = w[1:]
            for s in self.by_first.get(x, ()):
                inv_s = tuple(c ^ 1 for c in reversed(s))
                for key in self.exact(inv_s + tail, k - 1):
                    out.add(attach_face(key, x, len(s), not tail))
        return tuple(sorted(out))


_SEARCHES: dict[str, FillingSearch] = {}


def _search_for(p: Presentation) -> FillingSearch:
    fp = p.fingerprint()
    s = _SEARCHES.get(fp)
    if s is None:
        s = FillingSearch(p)
        _SEARCHES[fp] = s
    return s


# -- oracle results and cache -----------------------------------------------------------


@dataclass
class FillingResult:
    word: Word
    keys: list[Key]
    face_counts: list[int]
    exhaustive: bool
    budget: SearchBudget
    p: Presentation

    def __iter__(self) -> Iterator[PlanarDiagram]:
        for key in self.keys:
            yield key_to_diagram(key, self.p)

    @property
    def diagrams(self) -> list[PlanarDiagram]:
        return list(self)

    def __len__(self) -> int:
        return len(self.keys)


@dataclass(frozen=True)
class WordValue:
    value: int | None  # quarters; None if nothing found
    exhaustive: bool
    diagram: PlanarDiagram | None = None


def presentation_hash(p: Presentation) -> str:
    return hashlib.sha256(p.fingerprint().encode()).hexdigest()[:16]


def cache_dir() -> Path | None:
    env = os.environ.get("VK_CACHE_DIR")
    return Path(env) if env else None


class OracleTable:
    """On-disk table ``<hash>.oracle.json``; entries are keyed by face budget."""

    def __init__(self, p: Presentation, directory: Path | None) -> None:
        self.p = p
        self.hash = presentation_hash(p)
        self.path = directory / f"{self.hash}.oracle.json" if directory else None
        self.data = {"presentation_hash": self.hash, "presentation": p.fingerprint(), "words": {}, "idiam_n": {}, "M_P": {}}
        if self.path and self.path.exists():
            try:
                loaded = json.loads(self.path.read_text())
                if loaded.get("presentation_hash") == self.hash:
                    self.data.update(loaded)
            except (OSError, json.JSONDecodeError):
                pass

    def get(self, section: str, key: str):
        return self.data[section].get(key)

    def put(self, section: str, key: str, value) -> None:
        self.data[section][key] = value
        self.save()

    def save(self) -> None:
        if not self.path:
            return
        self.path.parent.mkdir(parents=True, exist_ok=True)
        tmp = self.path.with_suffix(".tmp")
        tmp.write_text(json.dumps(self.data, sort_keys=True, indent=1) + "\n")
        tmp.replace(self.path)


def _budget_key(b: SearchBudget) -> str:
    return f"f{b.max_faces}" + (f"e{b.max_edges}" if b.max_edges is not None else "")


class Oracle:
    def __init__(self, p: Presentation, budget: SearchBudget | None = None, use_cache: bool = True) -> None:
        self.p = p
        self.budget = budget or SearchBudget()
        self.search = _search_for(p)
        self.table = OracleTable(p, cache_dir() if use_cache else None)

    # enumeration

    def fillings(self, w: Word) -> FillingResult:
        codes = self.p.encode(w)
        b = self.budget
        s = self.search
        s.deadline = time.monotonic() + b.time_cap if b.time_cap else None
        keys: list[tuple[int, Key]] = []
        exhaustive = True
        try:
            for k in range(b.max_faces + 1):
                found = s.exact(codes, k)
                keys.extend((k, key) for key in found)
        except _TimeCap:
            exhaustive = False
        finally:
            s.deadline = None
        if b.max_edges is not None:
            keys = [(k, key) for k, key in keys if len(key[1]) // 2 <= b.max_edges]
        return FillingResult(w, [key for _, key in keys], [k for k, _ in keys], exhaustive, b, self.p)

    def idiam_of_word(self, w: Word) -> WordValue:
        key = f"{_budget_key(self.budget)}:{w.compact()}"
        cached = self.table.get("words", key)
        if cached is not None and "idiam_w" in cached:
            diag = PlanarDiagram.from_dict(cached["D_min"]) if cached.get("D_min") else None
            return WordValue(cached["idiam_w"], cached["exhaustive"], diag)
        res = self.fillings(w)
        best = None
        for key_, k in zip(res.keys, res.face_counts):
            st = key_stats(key_)
            if best is None or (st.idiam, k) < best[0]:
                best = ((st.idiam, k), key_)
        diag = key_to_diagram(best[1], self.p) if best else None
        out = WordValue(best[0][0] if best else None, res.exhaustive, diag)
        entry = dict(self.table.get("words", key) or {})
        entry.update({"idiam_w": out.value, "exhaustive": out.exhaustive, "D_min": diag.to_dict() if diag else None})
        self.table.put("words", key, entry)
        return out

    def simply_bounded_data(self, w: Word) -> WordValue:
        key = f"{_budget_key(self.budget)}:{w.compact()}"
        cached = self.table.get("words", key)
        if cached is not None and "idiam_sb_w" in cached:
            diag = PlanarDiagram.from_dict(cached["D_w"]) if cached.get("D_w") else None
            return WordValue(cached["idiam_sb_w"], cached["exhaustive"], diag)
        res = self.fillings(w)
        best = None
        for key_, k in zip(res.keys, res.face_counts):
            st = key_stats(key_)
            if st.simply_bounded and (best is None or (st.idiam, k) < best[0]):
                best = ((st.idiam, k), key_)
        diag = key_to_diagram(best[1], self.p) if best else None
        out = WordValue(best[0][0] if best else None, res.exhaustive, diag)
        entry = dict(self.table.get("words", key) or {})
        entry.update({"idiam_sb_w": out.value, "exhaustive": out.exhaustive, "D_w": diag.to_dict() if diag else None})
        self.table.put("words", key, entry)
        return out

    # presentation-level quantities

    def words_up_to(self, n: int) -> Iterator[Word]:
        letters = self.p.letters()
        for length in range(n + 1):
            for combo in itertools.product(letters, repeat=length):
                yield Word(tuple(combo))

    def idiam_function(self, n_max: int) -> dict[int, WordValue]:
        """n -> max IDiam(w) over words of length <= n with a filling at budget."""
        bkey = _budget_key(self.budget)
        cached = self.table.get("idiam_n", bkey) or {}
        out: dict[int, WordValue] = {}
        running, running_ex = 0, True
        for n in range(n_max + 1):
            hit = cached.get(str(n))
            if hit is not None:
                running, running_ex = hit["value"], hit["exhaustive"]
                out[n] = WordValue(running, running_ex)
                continue
            letters = self.p.letters()
            for combo in itertools.product(letters, repeat=n):
                r = self.idiam_of_word_uncached(Word(tuple(combo)))
                if r.value is not None:
                    running = max(running, r.value)
                running_ex = running_ex and r.exhaustive
            out[n] = WordValue(running, running_ex)
            cached[str(n)] = {"value": running, "exhaustive": running_ex}
            self.table.put("idiam_n", bkey, dict(cached))
        return out

    def idiam_of_word_uncached(self, w: Word) -> WordValue:
        res = self.fillings(w)
        vals = [key_stats(k).idiam for k in res.keys]
        return WordValue(min(vals) if vals else None, res.exhaustive)

    def compute_M_P(self) -> WordValue:
        """max({0} and IDiam_sb(w) for words of length <= 4 with a simply bounded filling)."""
        bkey = _budget_key(self.budget)
        hit = self.table.get("M_P", bkey)
        if hit is not None:
            return WordValue(hit["value"], hit["exhaustive"])
        best, exhaustive = 0, True
        for w in self.words_up_to(4):
            res = self.fillings(w)
            exhaustive = exhaustive and res.exhaustive
            vals = [st.idiam for st in map(key_stats, res.keys) if st.simply_bounded]
            if vals:
                best = max(best, min(vals))
        self.table.put("M_P", bkey, {"value": best, "exhaustive": exhaustive})
        return WordValue(best, exhaustive)


# -- module-level operations --------------------------------------------------------------


def enumerate_fillings(p: Presentation, w: Word, budget: SearchBudget) -> FillingResult:
    return Oracle(p, budget, use_cache=False).fillings(w)


def idiam_of_word(p: Presentation, w: Word, budget: SearchBudget) -> WordValue:
    r = Oracle(p, budget).idiam_of_word(w)
    if r.value is None:
        raise OracleError(f"no filling of {w} with at most {budget.max_faces} faces")
    return r


def idiam_function(p: Presentation, n_max: int, budget: SearchBudget) -> dict[int, WordValue]:
    return Oracle(p, budget).idiam_function(n_max)


def simply_bounded_data(p: Presentation, w: Word, budget: SearchBudget) -> WordValue:
    return Oracle(p, budget).simply_bounded_data(w)


def compute_M_P(p: Presentation, budget: SearchBudget) -> WordValue:
    return Oracle(p, budget).compute_M_P()


# -- subdiagrams ------------------------------------------------------------------------------


@dataclass(frozen=True)
class Subcomplex:
    vertices: frozenset[int]
    edges: frozenset[int]
    faces: frozenset[int]


def _closure_ok(d: PlanarDiagram, sub: Subcomplex) -> bool:
    for e in sub.edges:
        a, b = d.edge_ends(e)
        if a not in sub.vertices or b not in sub.vertices:
            return False
    for f in sub.faces:
        if not d.face_edges(f) <= sub.edges:
            return False
    return True


def _connected(d: PlanarDiagram, sub: Subcomplex) -> bool:
    if not sub.vertices:
        return False
    adj: dict[int, list[int]] = {v: [] for v in sub.vertices}
    for e in sub.edges:
        a, b = d.edge_ends(e)
        adj[a].append(b)
        adj[b].append(a)
    start = min(sub.vertices)
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return len(seen) == len(sub.vertices)


def _simply_connected(d: PlanarDiagram, sub: Subcomplex) -> bool:
    # a connected planar 2-complex has no holes iff its Euler characteristic is 1
    return _connected(d, sub) and len(sub.vertices) - len(sub.edges) + len(sub.faces) == 1


def sub_boundary_length(d: PlanarDiagram, sub: Subcomplex) -> int:
    """Length of the one face orbit of the restricted map that is not a kept face."""
    if not sub.edges:
        return 0
    keep = {x for e in sub.edges for x in (e, d.twin[e])}
    succ_ccw: dict[int, int] = {}
    for v in sub.vertices:
        rot = [x for x in d.rotation[v] if x in keep]
        for i, x in enumerate(rot):
            succ_ccw[x] = rot[(i + 1) % len(rot)]
    prev_ccw = {s: x for x, s in succ_ccw.items()}
    kept_face_darts = {x for f in sub.faces for x in d.faces[f]}
    seen: set[int] = set()
    outer_len = None
    for start in sorted(keep):
        if start in seen:
            continue
        orbit = []
        x = start
        while x not in seen:
            seen.add(x)
            orbit.append(x)
            x = prev_ccw[d.twin[x]]
        if orbit[0] not in kept_face_darts:
            if outer_len is not None:
                raise DiagramError("subcomplex", "more than one outer orbit")
            outer_len = len(orbit)
    return outer_len or 0


def subcomplexes_by_subsets(d: PlanarDiagram, max_edges: int = 14) -> set[Subcomplex]:
    """Strategy 1: choose faces, then any extra edges over their closure."""
    if d.edge_count > max_edges:
        raise OracleError(f"size guard: {d.edge_count} edges > {max_edges}")
    out: set[Subcomplex] = set()
    for v in range(d.vertex_count):
        out.add(Subcomplex(frozenset([v]), frozenset(), frozenset()))
    all_edges = list(d.edges)
    F = d.face_count
    for fmask in range(1 << F):
        faces = frozenset(f for f in range(F) if fmask >> f & 1)
        base_edges: set[int] = set()
        for f in faces:
            base_edges |= d.face_edges(f)
        rest = [e for e in all_edges if e not in base_edges]
        for r in range(len(rest) + 1):
            for extra in itertools.combinations(rest, r):
                edges = frozenset(base_edges | set(extra))
                if not edges:
                    continue
                verts = frozenset(v for e in edges for v in d.edge_ends(e))
                sub = Subcomplex(verts, edges, faces)
                if _simply_connected(d, sub):
                    out.add(sub)
    return out


def subcomplexes_by_growth(d: PlanarDiagram, max_edges: int = 14) -> set[Subcomplex]:
    """Strategy 2: grow connected closed subcomplexes from single vertices by
    adding an incident edge or a face whose boundary is present."""
    if d.edge_count > max_edges:
        raise OracleError(f"size guard: {d.edge_count} edges > {max_edges}")
    seen: set[Subcomplex] = set()
    queue = deque(Subcomplex(frozenset([v]), frozenset(), frozenset()) for v in range(d.vertex_count))
    seen.update(queue)
    face_edges = [d.face_edges(f) for f in range(d.face_count)]
    while queue:
        sub = queue.popleft()
        nexts = []
        for e in d.edges:
            if e in sub.edges:
                continue
            a, b = d.edge_ends(e)
            if a in sub.vertices or b in sub.vertices:
                nexts.append(Subcomplex(sub.vertices | {a, b}, sub.edges | {e}, sub.faces))
        for f in range(d.face_count):
            if f not in sub.faces and face_edges[f] <= sub.edges:
                nexts.append(Subcomplex(sub.vertices, sub.edges, sub.faces | {f}))
        for s in nexts:
            if s not in seen:
                seen.add(s)
                queue.append(s)
    return {s for s in seen if _simply_connected(d, s)}


def subdiagram_profile(d: PlanarDiagram, strategy: str = "subsets") -> dict[int, int]:
    """Boundary length -> largest unbased diameter of a simply connected subcomplex."""
    if strategy == "subsets":
        subs = subcomplexes_by_subsets(d)
    elif strategy == "growth":
        subs = subcomplexes_by_growth(d)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    prof: dict[int, int] = {}
    for sub in subs:
        if not _closure_ok(d, sub):
            raise OracleError("enumerated a non-closed subcomplex")
        b = sub_boundary_length(d, sub)
        u = unbased_idiam(d, sub.vertices, sub.edges)
        prof[b] = max(prof.get(b, 0), u)
    return dict(sorted(prof.items()))


def word_subdiagram_profile(oracle: Oracle, w: Word, max_edges: int = 14) -> tuple[dict[int, int], bool]:
    """The smallest subdiagram profile over the fillings of w at the budget.

    One filling is chosen as a whole (least largest diameter, then least
    total) rather than mixing fillings per boundary length. Fillings above
    the size guard are skipped; the flag is False if any was skipped or the
    search was cut short.
    """
    res = oracle.fillings(w)
    best, best_key = None, None
    complete = res.exhaustive
    for d in res:
        if d.edge_count > max_edges:
            complete = False
            continue
        prof = subdiagram_profile(d)
        key = (max(prof.values()), sum(prof.values()), sorted(prof.items()))
        if best_key is None or key < best_key:
            best, best_key = prof, key
    if best is None:
        raise OracleError(f"no filling of {w} within the size guard")
    return best, complete
