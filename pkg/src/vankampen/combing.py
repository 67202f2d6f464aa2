"""Discrete 1-combings that respect a spanning tree.

A combing path to a point on a non-tree edge e follows the tree to some
feature of the flow cell of e and then crosses that cell. Recursively, the
paths to all points of e sweep out exactly the icicle of e, so everything the
tameness conditions need is the crossing structure recorded here.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from graphlib import CycleError, TopologicalSorter
from typing import Callable, Iterable, Mapping, Sequence

from .diagram import DistanceField, PlanarDiagram, coarse_distance_field
from .geodesics import SpanningTree
from .icicle import Icicle, all_icicles

Feature = tuple[str, int]  # ("e", edge id) or ("v", vertex id)


class CombingError(AssertionError):
    pass


class TameDomainError(KeyError):
    """A tame function was evaluated outside its table."""


# -- crossing DAG -------------------------------------------------------------


@dataclass(frozen=True)
class CrossingDag:
    nodes: tuple[Feature, ...]
    arcs: Mapping[int, tuple[Feature, ...]]  # non-tree edge -> features of its flow cell
    order: tuple[int, ...]  # non-tree edges, each after every non-tree edge it points to
    flow: Mapping[int, int]

    def successors(self, e: int) -> tuple[Feature, ...]:
        return self.arcs[e]


def build_crossing_dag(d: PlanarDiagram, t: SpanningTree, flow: Mapping[int, int]) -> CrossingDag:
    tree = t.tree_edges
    arcs: dict[int, tuple[Feature, ...]] = {}
    for e in sorted(flow):
        cell = d.faces[flow[e]]
        es = sorted({d.edge_of(z) for z in cell} - {e})
        vs = sorted({d.origin[z] for z in cell})
        arcs[e] = tuple(("e", x) for x in es) + tuple(("v", v) for v in vs)
    graph = {e: [x for kind, x in arcs[e] if kind == "e" and x not in tree] for e in arcs}
    try:
        order = tuple(TopologicalSorter(graph).static_order())
    except CycleError as exc:
        raise CombingError(f"crossing graph has a cycle: {exc.args[1]}") from None
    nodes = tuple(("e", e) for e in d.edges) + tuple(("v", v) for v in range(d.vertex_count))
    return CrossingDag(nodes, arcs, order, dict(flow))


# -- tameness profile ------------------------------------------------------------


@dataclass(frozen=True)
class TamenessProfile:
    dist: Mapping[int, int]  # non-tree edge -> edge distance (quarters)
    prior_max: Mapping[int, int]  # non-tree edge -> max distance on its icicle 1-skeleton
    tree_features: Mapping[Feature, int]  # tree edges and vertices -> own distance = prior max

    def to_dict(self) -> dict:
        return {
            "edges": [[e, self.dist[e], self.prior_max[e]] for e in sorted(self.dist)],
            "tree_edges": sorted([x, q] for (kind, x), q in self.tree_features.items() if kind == "e"),
            "vertices": sorted([x, q] for (kind, x), q in self.tree_features.items() if kind == "v"),
        }


def icicle_skeleton_max(field_: DistanceField, ic: Icicle) -> int:
    d = field_.diagram
    best = max(field_.vertex[v] for v in ic.skeleton_vertices)
    for e in ic.skeleton_edges:
        best = max(best, field_.edge(e))
    return best


def tameness_profile(
    d: PlanarDiagram,
    t: SpanningTree,
    dag: CrossingDag,
    icicles: Mapping[int, Icicle] | None = None,
) -> TamenessProfile:
    """prior_max by dynamic programming over the DAG, cross-checked against a
    direct maximum over each flood-filled icicle."""
    fld = coarse_distance_field(d)
    tree = t.tree_edges
    prior: dict[int, int] = {}
    for e in dag.order:
        best = fld.edge(e)
        for kind, x in dag.arcs[e]:
            if kind == "v":
                best = max(best, fld.vertex[x])
            elif x in tree:
                best = max(best, fld.edge(x))
            else:
                best = max(best, prior[x])
        prior[e] = best
    ics = icicles if icicles is not None else all_icicles(d, t)
    for e, q in prior.items():
        direct = icicle_skeleton_max(fld, ics[e])
        if direct != q:
            raise CombingError(f"prior max at edge {e}: DAG gives {q}, icicle gives {direct}")
    tree_features: dict[Feature, int] = {("e", e): fld.edge(e) for e in sorted(tree)}
    tree_features.update({("v", v): fld.vertex[v] for v in range(d.vertex_count)})
    dist = {e: fld.edge(e) for e in prior}
    return TamenessProfile(dict(sorted(dist.items())), dict(sorted(prior.items())), tree_features)


# -- tame functions -------------------------------------------------------------


@dataclass(frozen=True)
class TameFunction:
    """A non-decreasing map on a finite set of quarter distances."""

    table: Mapping[int, int]
    tag: str = ""

    def __post_init__(self) -> None:
        items = sorted(self.table.items())
        object.__setattr__(self, "table", dict(items))
        for (x0, y0), (x1, y1) in zip(items, items[1:]):
            if y1 < y0:
                raise ValueError(f"tame function decreases between {x0} and {x1}")

    def __call__(self, q: int) -> int:
        try:
            return self.table[q]
        except KeyError:
            raise TameDomainError(f"{self.tag or 'f'} is not tabulated at {q} quarters") from None

    @property
    def domain(self) -> list[int]:
        return list(self.table)

    def strictly_increasing(self) -> bool:
        vals = list(self.table.values())
        return all(b > a for a, b in zip(vals, vals[1:]))

    def to_dict(self) -> dict:
        return {"tag": self.tag, "table": [[k, v] for k, v in self.table.items()]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data) -> "TameFunction":
        if isinstance(data, list):
            pairs, tag = data, ""
        else:
            pairs, tag = data.get("table", data.get("pairs", [])), data.get("tag", "")
        return cls({int(a): int(b) for a, b in pairs}, str(tag))

    @classmethod
    def from_callable(cls, fn: Callable[[int], int], domain: Iterable[int], tag: str = "") -> "TameFunction":
        return cls({int(q): int(fn(q)) for q in domain}, tag)


def obstruction_level(profile: TamenessProfile, f: Callable[[int], int]) -> int | None:
    """Largest edge distance among non-tree edges whose icicle reaches above f of it.

    Tree features never violate: their prior points lie on a geodesic.
    """
    worst = None
    for e, q in profile.dist.items():
        if profile.prior_max[e] > f(q):
            worst = q if worst is None else max(worst, q)
    return worst


def violating_edges(profile: TamenessProfile, f: Callable[[int], int], n: int | None) -> list[int]:
    if n is None:
        return []
    limit = f(n)
    return sorted(e for e, q in profile.dist.items() if q == n and profile.prior_max[e] > limit)


def graph_to_full_tame(f: TameFunction, rho: int) -> TameFunction:
    """g(n) = f(n + 3/4) + rho/2 - 1/4, tabulated where f(n + 3/4) is known."""
    if rho < 1:
        raise ValueError("rho must be positive")
    table = {q - 3: v + 2 * rho - 1 for q, v in f.table.items() if q >= 3}
    if not table:
        raise TameDomainError("f has no point at or above 3 quarters")
    return TameFunction(table, f"graph_to_full_tame({f.tag or 'f'}, rho={rho})")


def main_f_argument(q: int) -> int:
    """Word length ceil(2n + 1) for n = q/4."""
    return (q + 1) // 2 + 1


def main_f_value(q: int, idiam_table: Mapping[int, int], m_p: int) -> int:
    length = main_f_argument(q)
    if length not in idiam_table:
        raise TameDomainError(f"IDiam table has no entry for length {length}")
    return idiam_table[length] + q + m_p + 4


def theorem_main_f(idiam_table: Mapping[int, int], m_p: int, domain: Iterable[int]) -> TameFunction:
    """f(n) = IDiam(ceil(2n+1)) + n + M_P + 1 on the given quarter arguments."""
    f = TameFunction({q: main_f_value(q, idiam_table, m_p) for q in sorted(set(domain))}, "theorem_main_f")
    if not f.strictly_increasing():
        raise CombingError("theorem f must be strictly increasing")
    return f


# -- variation ---------------------------------------------------------------------


def _feature_options(fld: DistanceField, feat: Feature) -> list[int]:
    kind, x = feat
    if kind == "v":
        return [fld.vertex[x]]
    a, b = fld.diagram.edge_ends(x)
    return sorted({fld.vertex[a], fld.vertex[b], fld.edge(x)})


def _feature_point(fld: DistanceField, feat: Feature) -> int:
    kind, x = feat
    return fld.vertex[x] if kind == "v" else fld.edge(x)


def backward_chains(dag: CrossingDag, e: int, tree: Iterable[int], limit: int = 10000) -> list[list[Feature]]:
    """Every DAG path from non-tree edge ``e`` down to a tree feature (at most ``limit``)."""
    tree = frozenset(tree)
    out: list[list[Feature]] = []

    def walk(path: list[Feature]) -> None:
        if len(out) >= limit:
            raise CombingError(f"more than {limit} chains from edge {e}")
        kind, x = path[-1]
        if kind == "v" or x in tree:
            out.append(list(path))
            return
        for nxt in dag.arcs[x]:
            path.append(nxt)
            walk(path)
            path.pop()

    walk([("e", e)])
    return out


def variation_envelope(d: PlanarDiagram, t: SpanningTree, dag: CrossingDag, limit: int = 10000) -> dict[int, tuple[int, int]]:
    """Per non-tree edge: (least best-policy variation, greatest worst-policy variation) over its chains."""
    out = {}
    for e in dag.order:
        chains = backward_chains(dag, e, t.tree_edges, limit)
        lo = min(variation_profile(d, t, dag, c, "best") for c in chains)
        hi = max(variation_profile(d, t, dag, c, "worst") for c in chains)
        out[e] = (lo, hi)
    return dict(sorted(out.items()))


def variation_profile(
    d: PlanarDiagram,
    t: SpanningTree,
    dag: CrossingDag,
    chain: Sequence[Feature],
    entry_policy: str = "worst",
) -> int:
    """Total variation of distance along a combing path described by ``chain``.

    ``chain[0]`` carries the combed point (an edge interior or a vertex), each
    consecutive pair is a DAG arc, and the last feature lies on the tree. The
    path climbs the tree to a point of the last feature, then crosses the
    flow cells in reverse chain order. Points where the path meets
    intermediate features are free within each feature's closure; ``worst``
    maximises the variation over those choices and ``best`` minimises it.
    """
    if entry_policy not in ("worst", "best"):
        raise ValueError("entry_policy must be 'worst' or 'best'")
    if not chain:
        raise CombingError("malformed chain: empty")
    chain = [(str(k), int(x)) for k, x in chain]
    tree = t.tree_edges
    last = chain[-1]
    if last[0] == "e" and last[1] not in tree:
        raise CombingError("malformed chain: must end on a tree feature")
    for a, b in zip(chain, chain[1:]):
        if a[0] != "e" or a[1] not in dag.arcs or b not in dag.arcs[a[1]]:
            raise CombingError(f"malformed chain: {a} -> {b} is not a crossing arc")
    fld = coarse_distance_field(d)
    pick = max if entry_policy == "worst" else min
    r = len(chain) - 1
    if r == 0:
        return _feature_point(fld, last)
    # best[c] = optimal variation of the path from the root to a point valued c on chain[i]
    table = {c: c for c in _feature_options(fld, last)}
    for i in range(r - 1, -1, -1):
        cell = fld.face(dag.flow[chain[i][1]])
        here = [_feature_point(fld, chain[i])] if i == 0 else _feature_options(fld, chain[i])
        table = {
            c: pick(v + abs(cell - c_in) + abs(c - cell) for c_in, v in table.items())
            for c in here
        }
    return next(iter(table.values()))


# -- equivalence witnesses ---------------------------------------------------------


@dataclass(frozen=True)
class EquivalenceWitness:
    """Constants for f <= A g(Bt + C) + Dt + E (in whole units), checked on S with
    t = max([0, s] intersected with T)."""

    A: Fraction
    B: Fraction
    C: Fraction
    D: Fraction
    E: Fraction
    S: frozenset[int] = field(default_factory=frozenset)
    T: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        for name in "ABCDE":
            v = Fraction(getattr(self, name))
            if v < 0:
                raise ValueError(f"constant {name} must be non-negative")
            object.__setattr__(self, name, v)
        object.__setattr__(self, "S", frozenset(self.S))
        object.__setattr__(self, "T", frozenset(self.T))


def check_equivalence(f: TameFunction, g: TameFunction, w: EquivalenceWitness) -> bool:
    """Pointwise check of the witness on its finite domain (quarters throughout)."""
    for s in sorted(w.S):
        ts = [t for t in w.T if 0 <= t <= s]
        if not ts:
            return False
        t = max(ts)
        arg = w.B * t + 4 * w.C
        if arg.denominator != 1:
            raise ValueError(f"B t + C = {arg / 4} is not a quarter point")
        rhs = w.A * g(int(arg)) + w.D * t + 4 * w.E
        if f(s) > rhs:
            return False
    return True
